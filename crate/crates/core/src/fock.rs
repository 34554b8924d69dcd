//! Truncated Cartesian Fock space of a single 3D oscillator and its
//! elementary operators.
//!
//! Units: ħ = 1. Mass and frequency stay explicit so that scaling laws can
//! be tested.
//!
//! Every operator carries a validity window `W`: on vectors supported on
//! shells `N ≤ W` the truncated matrix acts exactly like the untruncated
//! operator. Windows propagate through sums, products and adjoints using
//! the shell displacement range of each factor.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::sparse::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error(
        "invalid oscillator parameters: mass={mass}, omega={omega} (both must be finite and > 0)"
    )]
    InvalidParams { mass: f64, omega: f64 },
    #[error("{operator}: construction routes disagree (residual {residual:e} > tolerance {tolerance:e})")]
    CrossCheckFailed {
        operator: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

/// Relative tolerance for agreement between two construction routes.
pub const ROUTE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscParams {
    mass: f64,
    omega: f64,
}

impl OscParams {
    pub fn new(mass: f64, omega: f64) -> Result<Self, FockError> {
        if !(mass.is_finite() && omega.is_finite() && mass > 0.0 && omega > 0.0) {
            return Err(FockError::InvalidParams { mass, omega });
        }
        Ok(Self { mass, omega })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Spring constant `k = M ω²`.
    pub fn spring_constant(&self) -> f64 {
        self.mass * self.omega * self.omega
    }
}

impl Default for OscParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            omega: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The other two axes `(i, j)` such that `(i, j, self)` is cyclic.
    pub fn cyclic_pair(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }
}

/// Number of Cartesian states in shell `n`.
pub fn shell_dim(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

/// Dimension of the space with all shells `N ≤ n_max`.
pub fn space_dim(n_max: u32) -> usize {
    let n = n_max as usize;
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Ordered basis `{|nx,ny,nz⟩ : nx+ny+nz ≤ n_max}`.
///
/// Ordering is graded: all states of shell 0, then shell 1, …; inside a
/// shell the triples are sorted lexicographically ascending, so shell 1 is
/// `(0,0,1), (0,1,0), (1,0,0)`.
#[derive(Clone, Debug)]
pub struct Basis3D {
    n_max: u32,
    states: Vec<[u32; 3]>,
    index: HashMap<[u32; 3], usize>,
    shells: Arc<[u32]>,
}

pub fn build_basis(n_max: u32) -> Basis3D {
    let mut states = Vec::with_capacity(space_dim(n_max));
    for total in 0..=n_max {
        for nx in 0..=total {
            for ny in 0..=(total - nx) {
                states.push([nx, ny, total - nx - ny]);
            }
        }
    }
    // inner loops already produce ascending (nx, ny, nz) inside each shell
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let shells: Arc<[u32]> = states.iter().map(|s| s[0] + s[1] + s[2]).collect();
    Basis3D {
        n_max,
        states,
        index,
        shells,
    }
}

impl Basis3D {
    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[[u32; 3]] {
        &self.states
    }

    pub fn state(&self, i: usize) -> [u32; 3] {
        self.states[i]
    }

    pub fn index_of(&self, state: [u32; 3]) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn shells(&self) -> &Arc<[u32]> {
        &self.shells
    }

    /// Index range occupied by shell `n` (empty above `n_max`).
    pub fn shell_range(&self, n: u32) -> std::ops::Range<usize> {
        if n > self.n_max {
            return self.dim()..self.dim();
        }
        let start = if n == 0 { 0 } else { space_dim(n - 1) };
        start..start + shell_dim(n)
    }

    /// Unit vector `|nx,ny,nz⟩`.
    pub fn ket(&self, state: [u32; 3]) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[self.index_of(state).expect("state outside basis")] = C64::new(1.0, 0.0);
        v
    }
}

/// Sparse operator over a graded basis together with its validity window.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    matrix: SparseMatrix,
    shells: Arc<[u32]>,
    n_max: u32,
    window: i64,
    displacement: (i32, i32),
}

impl OperatorMatrix {
    /// Wraps a matrix whose untruncated counterpart moves shell `N` into
    /// shells `N + d` with `d` in `displacement`. The window is the largest
    /// shell whose image stays inside the truncation.
    pub fn new(matrix: SparseMatrix, shells: Arc<[u32]>, displacement: (i32, i32)) -> Self {
        assert!(matrix.is_square() && matrix.nrows() == shells.len());
        let n_max = shells.iter().copied().max().unwrap_or(0);
        let window = n_max as i64 - displacement.1.max(0) as i64;
        Self {
            matrix,
            shells,
            n_max,
            window,
            displacement,
        }
    }

    pub fn with_window(mut self, window: i64) -> Self {
        self.window = window;
        self
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseMatrix {
        self.matrix
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn displacement(&self) -> (i32, i32) {
        self.displacement
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn shells(&self) -> &Arc<[u32]> {
        &self.shells
    }

    /// Column mask selecting shells `N ≤ window`.
    pub fn window_mask(&self, window: i64) -> Vec<bool> {
        self.shells.iter().map(|&s| (s as i64) <= window).collect()
    }

    /// `self · rhs`; trusted where `rhs` is trusted and its image lands
    /// inside the window of `self`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let window = rhs.window.min(self.window - rhs.displacement.1 as i64);
        Self {
            matrix: self.matrix.matmul(&rhs.matrix),
            shells: self.shells.clone(),
            n_max: self.n_max,
            window,
            displacement: (
                self.displacement.0 + rhs.displacement.0,
                self.displacement.1 + rhs.displacement.1,
            ),
        }
    }

    pub fn lin_comb(&self, alpha: C64, other: &Self, beta: C64) -> Self {
        Self {
            matrix: self.matrix.lin_comb(alpha, &other.matrix, beta),
            shells: self.shells.clone(),
            n_max: self.n_max,
            window: self.window.min(other.window),
            displacement: (
                self.displacement.0.min(other.displacement.0),
                self.displacement.1.max(other.displacement.1),
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
            ..self.clone()
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Hermitian adjoint. A column of the adjoint at shell `N` gathers the
    /// columns of `self` at shells `N − d`, so its window shrinks by the
    /// largest lowering step of `self`, and by the truncation edge.
    pub fn adjoint(&self) -> Self {
        let (lo, hi) = self.displacement;
        let window = (self.window + lo as i64).min(self.n_max as i64 + lo as i64);
        Self {
            matrix: self.matrix.adjoint(),
            shells: self.shells.clone(),
            n_max: self.n_max,
            window,
            displacement: (-hi, -lo),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// 1-norm of the matrix restricted to columns in shells `N ≤ window`.
    pub fn norm_on(&self, window: i64) -> f64 {
        self.matrix.norm1_masked(&self.window_mask(window))
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm1()
    }

    /// Relative agreement with `reference` on shells `N ≤ window`.
    pub fn cross_check(
        &self,
        reference: &Self,
        window: i64,
        operator: &'static str,
    ) -> Result<f64, FockError> {
        let diff = self.sub(reference);
        let scale = reference.norm().max(f64::MIN_POSITIVE);
        let residual = diff.norm_on(window) / scale;
        if residual <= ROUTE_TOLERANCE {
            Ok(residual)
        } else {
            Err(FockError::CrossCheckFailed {
                operator,
                residual,
                tolerance: ROUTE_TOLERANCE,
            })
        }
    }

    /// Drops entries that move shells outside `displacement` and adopts the
    /// given structure. Callers must have verified that the dropped part is
    /// rounding noise.
    fn adopt_structure(self, displacement: (i32, i32), window: i64) -> Self {
        let shells = self.shells.clone();
        let matrix = self.matrix.filter(|r, c| {
            let d = shells[r] as i32 - shells[c] as i32;
            d >= displacement.0 && d <= displacement.1
        });
        Self {
            matrix,
            displacement,
            window,
            ..self
        }
    }
}

fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Annihilation operator `a_j`: `⟨…n−1…| a_j |…n…⟩ = √n` along `axis`.
pub fn ladder(axis: Axis, basis: &Basis3D) -> OperatorMatrix {
    let k = axis.index();
    let triplets = basis.states().iter().enumerate().filter_map(|(col, s)| {
        if s[k] == 0 {
            return None;
        }
        let mut lower = *s;
        lower[k] -= 1;
        let row = basis.index_of(lower).expect("lowered state lies in basis");
        Some((row, col, cx((s[k] as f64).sqrt(), 0.0)))
    });
    let m = SparseMatrix::from_triplets(basis.dim(), basis.dim(), triplets);
    OperatorMatrix::new(m, basis.shells().clone(), (-1, -1))
}

/// Creation operator `a_j†`, the adjoint of [`ladder`].
pub fn ladder_dag(axis: Axis, basis: &Basis3D) -> OperatorMatrix {
    ladder(axis, basis).adjoint()
}

/// Position `r_j = (a_j + a_j†)/√(2Mω)`.
pub fn position(axis: Axis, params: &OscParams, basis: &Basis3D) -> OperatorMatrix {
    let a = ladder(axis, basis);
    let s = 1.0 / (2.0 * params.mass() * params.omega()).sqrt();
    a.add(&a.adjoint()).scale_real(s)
}

/// Momentum `p_j = i√(Mω/2)(a_j† − a_j)`.
pub fn momentum(axis: Axis, params: &OscParams, basis: &Basis3D) -> OperatorMatrix {
    let a = ladder(axis, basis);
    let s = (params.mass() * params.omega() / 2.0).sqrt();
    a.adjoint().sub(&a).scale(cx(0.0, s))
}

fn exact_hamiltonian(params: &OscParams, basis: &Basis3D) -> OperatorMatrix {
    let diag: Vec<f64> = basis
        .shells()
        .iter()
        .map(|&n| params.omega() * (n as f64 + 1.5))
        .collect();
    OperatorMatrix::new(
        SparseMatrix::from_real_diagonal(&diag),
        basis.shells().clone(),
        (0, 0),
    )
}

/// `p²/2M + k r²/2` assembled from truncated position and momentum
/// matrices. Exact only below the top shells.
pub fn hamiltonian_from_phase_space(params: &OscParams, basis: &Basis3D) -> OperatorMatrix {
    let mut h: Option<OperatorMatrix> = None;
    for axis in Axis::ALL {
        let p = momentum(axis, params, basis);
        let r = position(axis, params, basis);
        let term = p
            .compose(&p)
            .scale_real(0.5 / params.mass())
            .add(&r.compose(&r).scale_real(0.5 * params.spring_constant()));
        h = Some(match h {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    h.expect("three axes")
}

/// Hamiltonian, diagonal with eigenvalue `ω(N + 3/2)` on shell `N`.
///
/// The diagonal form is cross-checked against the phase-space form
/// `p²/2M + k r²/2` on the latter's window.
pub fn hamiltonian(params: &OscParams, basis: &Basis3D) -> Result<OperatorMatrix, FockError> {
    let exact = exact_hamiltonian(params, basis);
    let raw = hamiltonian_from_phase_space(params, basis);
    raw.cross_check(&exact, raw.window(), "hamiltonian")?;
    Ok(exact)
}

/// `L_k = r_i p_j − r_j p_i` from truncated position and momentum matrices.
pub fn angular_momentum_from_phase_space(
    k: Axis,
    params: &OscParams,
    basis: &Basis3D,
) -> OperatorMatrix {
    let (i, j) = k.cyclic_pair();
    let ri = position(i, params, basis);
    let rj = position(j, params, basis);
    let pi = momentum(i, params, basis);
    let pj = momentum(j, params, basis);
    ri.compose(&pj).sub(&rj.compose(&pi))
}

/// `L_k = i(a_j† a_i − a_i† a_j)` for cyclic `(i, j, k)`; shell preserving
/// with window `n_max`. Verified against `ε_ijk r_i p_j`.
pub fn angular_momentum(k: Axis, basis: &Basis3D) -> Result<OperatorMatrix, FockError> {
    let (i, j) = k.cyclic_pair();
    let ai = ladder(i, basis);
    let aj = ladder(j, basis);
    let l = aj
        .adjoint()
        .compose(&ai)
        .sub(&ai.adjoint().compose(&aj))
        .scale(cx(0.0, 1.0));
    // L_k does not depend on M, ω; unit parameters for the oracle route
    let raw = angular_momentum_from_phase_space(k, &OscParams::default(), basis);
    raw.cross_check(&l, raw.window(), "angular momentum")?;
    Ok(l.adopt_structure((0, 0), basis.n_max() as i64))
}

pub fn l_squared(basis: &Basis3D) -> Result<OperatorMatrix, FockError> {
    let mut acc: Option<OperatorMatrix> = None;
    for k in Axis::ALL {
        let l = angular_momentum(k, basis)?;
        let sq = l.compose(&l);
        acc = Some(match acc {
            None => sq,
            Some(a) => a.add(&sq),
        });
    }
    Ok(acc.expect("three axes"))
}

/// `Y_j = p_j − iMω r_j` built from the position and momentum matrices.
///
/// The result is checked to coincide with `−i√(2Mω) a_j`; only then is it
/// treated as a pure lowering operator with window `n_max`.
pub fn y_operator(
    axis: Axis,
    params: &OscParams,
    basis: &Basis3D,
) -> Result<OperatorMatrix, FockError> {
    let p = momentum(axis, params, basis);
    let r = position(axis, params, basis);
    let raw = p.sub(&r.scale(cx(0.0, params.mass() * params.omega())));
    let lowering =
        ladder(axis, basis).scale(cx(0.0, -(2.0 * params.mass() * params.omega()).sqrt()));
    raw.cross_check(&lowering, basis.n_max() as i64, "Y_j")?;
    Ok(raw.adopt_structure((-1, -1), basis.n_max() as i64))
}

/// `Y_j† = p_j + iMω r_j`.
pub fn y_dag_operator(
    axis: Axis,
    params: &OscParams,
    basis: &Basis3D,
) -> Result<OperatorMatrix, FockError> {
    Ok(y_operator(axis, params, basis)?.adjoint())
}

/// `−2Mω Σ_j a_j²`, the ladder-route form of `Y²`.
pub fn y_squared_from_ladders(params: &OscParams, basis: &Basis3D) -> OperatorMatrix {
    let mut acc: Option<OperatorMatrix> = None;
    for axis in Axis::ALL {
        let a = ladder(axis, basis);
        let sq = a.compose(&a);
        acc = Some(match acc {
            None => sq,
            Some(x) => x.add(&sq),
        });
    }
    acc.expect("three axes")
        .scale_real(-2.0 * params.mass() * params.omega())
}

/// `Y² = Y·Y`, summed from the phase-space `Y_j`; cross-checked entrywise
/// against `−2Mω Σ a_j²`.
pub fn y_squared(params: &OscParams, basis: &Basis3D) -> Result<OperatorMatrix, FockError> {
    let mut acc: Option<OperatorMatrix> = None;
    for axis in Axis::ALL {
        let y = y_operator(axis, params, basis)?;
        let sq = y.compose(&y);
        acc = Some(match acc {
            None => sq,
            Some(x) => x.add(&sq),
        });
    }
    let y2 = acc.expect("three axes");
    let reference = y_squared_from_ladders(params, basis);
    y2.cross_check(&reference, basis.n_max() as i64, "Y^2")?;
    Ok(y2)
}

/// All elementary operators for one `(basis, params)` pair.
#[derive(Clone, Debug)]
pub struct FockOperators {
    pub basis: Basis3D,
    pub params: OscParams,
    pub hamiltonian: OperatorMatrix,
    pub ladder: [OperatorMatrix; 3],
    pub l: [OperatorMatrix; 3],
    pub l_squared: OperatorMatrix,
    pub y: [OperatorMatrix; 3],
    pub y_squared: OperatorMatrix,
    pub y_squared_dag: OperatorMatrix,
}

impl FockOperators {
    pub fn build(n_max: u32, params: OscParams) -> Result<Self, FockError> {
        let basis = build_basis(n_max);
        let hamiltonian = hamiltonian(&params, &basis)?;
        let ladder = Axis::ALL.map(|a| ladder(a, &basis));
        let l = [
            angular_momentum(Axis::X, &basis)?,
            angular_momentum(Axis::Y, &basis)?,
            angular_momentum(Axis::Z, &basis)?,
        ];
        let l_squared = l[0]
            .compose(&l[0])
            .add(&l[1].compose(&l[1]))
            .add(&l[2].compose(&l[2]));
        let y = [
            y_operator(Axis::X, &params, &basis)?,
            y_operator(Axis::Y, &params, &basis)?,
            y_operator(Axis::Z, &params, &basis)?,
        ];
        let y_squared = y_squared(&params, &basis)?;
        let y_squared_dag = y_squared.adjoint();
        Ok(Self {
            basis,
            params,
            hamiltonian,
            ladder,
            l,
            l_squared,
            y,
            y_squared,
            y_squared_dag,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate_dim(n_max: u32) -> usize {
        let mut count = 0;
        for a in 0..=n_max {
            for b in 0..=n_max {
                for c in 0..=n_max {
                    if a + b + c <= n_max {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(build_basis(0).dim(), 1);
        assert_eq!(enumerate_dim(2), 10);
        assert_eq!(build_basis(2).dim(), 10);
        assert_eq!(enumerate_dim(20), 1771);
        assert_eq!(build_basis(20).dim(), 1771);
    }

    #[test]
    fn basis_ordering_is_graded_lexicographic() {
        let b = build_basis(2);
        assert_eq!(b.state(0), [0, 0, 0]);
        assert_eq!(&b.states()[1..4], &[[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        for w in b.states().windows(2) {
            let s0: u32 = w[0].iter().sum();
            let s1: u32 = w[1].iter().sum();
            assert!(s0 < s1 || (s0 == s1 && w[0] < w[1]));
        }
        assert_eq!(b.shell_range(2), 4..10);
    }

    #[test]
    fn ladder_actions() {
        let b = build_basis(3);
        let ax = ladder(Axis::X, &b);
        let v = ax.matrix().matvec(&b.ket([1, 0, 0]));
        assert_eq!(v, b.ket([0, 0, 0]));
        let v = ax.matrix().matvec(&b.ket([0, 2, 1]));
        assert!(v.iter().all(|z| z.norm() == 0.0));
        let v = ax.adjoint().matrix().matvec(&b.ket([2, 0, 0]));
        let i = b.index_of([3, 0, 0]).unwrap();
        assert!((v[i].re - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(ax.window(), 3);
        assert_eq!(ax.adjoint().window(), 2);
    }

    #[test]
    fn raising_matches_phase_space_elements() {
        // a† = √(Mω/2)(r − i p/(Mω)) evaluated from r, p matrices
        let b = build_basis(4);
        let params = OscParams::new(2.0, 3.0).unwrap();
        let r = position(Axis::X, &params, &b);
        let p = momentum(Axis::X, &params, &b);
        let mw = params.mass() * params.omega();
        let adag = r
            .sub(&p.scale(cx(0.0, 1.0 / mw)))
            .scale_real((mw / 2.0).sqrt());
        let col = b.index_of([2, 0, 0]).unwrap();
        let row = b.index_of([3, 0, 0]).unwrap();
        assert!((adag.matrix().get(row, col) - cx(3f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hamiltonian_values() {
        let b = build_basis(3);
        let h = hamiltonian(&OscParams::default(), &b).unwrap();
        assert_eq!(h.matrix().get(0, 0), cx(1.5, 0.0));
        let shell2 = b.shell_range(2);
        assert_eq!(shell2.len(), 6);
        for i in shell2 {
            assert_eq!(h.matrix().get(i, i), cx(3.5, 0.0));
        }
        let params = OscParams::new(2.0, 3.0).unwrap();
        let raw = hamiltonian_from_phase_space(&params, &b);
        let i = b.index_of([1, 0, 0]).unwrap();
        assert!((raw.matrix().get(i, i).re - 7.5).abs() < 1e-13);
        let h = hamiltonian(&params, &b).unwrap();
        assert_eq!(h.matrix().get(i, i).re, 7.5);
    }

    #[test]
    fn phase_space_hamiltonian_breaks_on_top_shell() {
        let b = build_basis(3);
        let raw = hamiltonian_from_phase_space(&OscParams::default(), &b);
        let exact = exact_hamiltonian(&OscParams::default(), &b);
        assert!(raw.cross_check(&exact, 3, "h").is_err());
        assert!(raw.cross_check(&exact, 2, "h").is_ok());
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(OscParams::new(0.0, 1.0).is_err());
        assert!(OscParams::new(1.0, -1.0).is_err());
        assert!(OscParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn lz_annihilates_vacuum() {
        let b = build_basis(2);
        let lz = angular_momentum(Axis::Z, &b).unwrap();
        let v = lz.matrix().matvec(&b.ket([0, 0, 0]));
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn window_tracking() {
        let b = build_basis(5);
        let a = ladder(Axis::Y, &b);
        assert_eq!(a.compose(&a.adjoint()).window(), 4);
        assert_eq!(a.adjoint().compose(&a).window(), 5);
        let y2 = y_squared(&OscParams::default(), &b).unwrap();
        assert_eq!(y2.window(), 5);
        assert_eq!(y2.displacement(), (-2, -2));
        assert_eq!(y2.adjoint().window(), 3);
    }

    #[test]
    fn y_is_pure_lowering() {
        let b = build_basis(6);
        let params = OscParams::new(1.7, 0.3).unwrap();
        let y = y_operator(Axis::Z, &params, &b).unwrap();
        let a = ladder(Axis::Z, &b);
        let expected = a.scale(cx(0.0, -(2.0 * params.mass() * params.omega()).sqrt()));
        assert!(y.sub(&expected).norm() < 1e-14);
        assert_eq!(y.window(), 6);
    }

    #[test]
    fn y_squared_kills_vacuum() {
        let b = build_basis(4);
        let y2 = y_squared(&OscParams::default(), &b).unwrap();
        let v = y2.matrix().matvec(&b.ket([0, 0, 0]));
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }
}
