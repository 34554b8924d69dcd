//! The `|n,l,m⟩` eigenbasis of `H`, `L²`, `L_z` expressed in Cartesian
//! coordinates.
//!
//! Each shell is split by diagonalizing `L²`, then `L_z` inside every
//! `(shell, l)` block. Phases follow the chain convention: the `n = 0`
//! vector of each `(l, m)` has its largest Cartesian coefficient real
//! positive, and `|n,l,m⟩ ∝ (Y²)†|n−1,l,m⟩`. Under this convention
//! `⟨n−1,l,m|Y²|n,l,m⟩` is real and positive. The diagonalized vectors of
//! the higher shells serve as a cross-check on the chain images.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{FockOperators, OscParams};
use crate::par;
use crate::sparse::SparseMatrix;

/// Absolute distance allowed between a computed eigenvalue and the
/// admissible integer value `l(l+1)` or `m`.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
const PHASE_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphericalError {
    #[error("shell {shell}: simultaneous diagonalization failed: {detail}")]
    DegenerateSplitFailure { shell: u32, detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalLabel {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl SphericalLabel {
    pub fn new(n: u32, l: u32, m: i32) -> Self {
        Self { n, l, m }
    }

    pub fn is_valid(&self) -> bool {
        self.m.unsigned_abs() <= self.l
    }

    /// Total quanta `2n + l`.
    pub fn shell(&self) -> u32 {
        2 * self.n + self.l
    }

    /// `ω(2n + l + 3/2)`.
    pub fn energy(&self, params: &OscParams) -> f64 {
        params.omega() * (self.shell() as f64 + 1.5)
    }

    pub fn l_squared(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }
}

impl std::fmt::Display for SphericalLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{},{},{}>", self.n, self.l, self.m)
    }
}

/// Spherical labels with the unitary change of basis `U`; column `k` of
/// `U` is the Cartesian expansion of `labels[k]`.
#[derive(Clone, Debug)]
pub struct SphericalBasis {
    n_max: u32,
    params: OscParams,
    labels: Vec<SphericalLabel>,
    index: HashMap<SphericalLabel, usize>,
    u: SparseMatrix,
    u_dag: SparseMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellRow {
    pub shell: u32,
    pub energy_over_omega: f64,
    pub multiplicity: usize,
    pub l_values: Vec<u32>,
}

struct ShellSplit {
    shell: u32,
    // (l, m, vector in shell-local coordinates)
    states: Vec<(u32, i32, DVector<C64>)>,
}

fn nearest_l(eig: f64) -> (u32, f64) {
    let l = ((-1.0 + (1.0 + 4.0 * eig.max(0.0)).sqrt()) / 2.0).round();
    let err = (eig - l * (l + 1.0)).abs();
    (l as u32, err)
}

fn split_shell(ops: &FockOperators, shell: u32) -> Result<ShellSplit, SphericalError> {
    let fail = |detail: String| SphericalError::DegenerateSplitFailure { shell, detail };
    let idx: Vec<usize> = ops.basis.shell_range(shell).collect();
    let l2 = ops.l_squared.matrix().dense_block(&idx, &idx);
    let lz = ops.l[2].matrix().dense_block(&idx, &idx);
    let eig = SymmetricEigen::new(l2);

    let mut by_l: Vec<Vec<usize>> = vec![Vec::new(); shell as usize + 1];
    for (k, &val) in eig.eigenvalues.iter().enumerate() {
        let (l, err) = nearest_l(val);
        if err > CLUSTER_TOLERANCE || l > shell || !(shell - l).is_multiple_of(2) {
            return Err(fail(format!(
                "L^2 eigenvalue {val} is not an admissible l(l+1)"
            )));
        }
        by_l[l as usize].push(k);
    }

    let mut states = Vec::with_capacity(idx.len());
    for l in (shell % 2..=shell).step_by(2) {
        let cols = &by_l[l as usize];
        if cols.len() != 2 * l as usize + 1 {
            return Err(fail(format!(
                "l={l} has multiplicity {} instead of {}",
                cols.len(),
                2 * l + 1
            )));
        }
        let v = DMatrix::from_columns(
            &cols
                .iter()
                .map(|&k| eig.eigenvectors.column(k).into_owned())
                .collect::<Vec<_>>(),
        );
        let projected = v.adjoint() * &lz * &v;
        let lz_eig = SymmetricEigen::new(projected);
        let mut seen = vec![false; 2 * l as usize + 1];
        for (k, &val) in lz_eig.eigenvalues.iter().enumerate() {
            let m = val.round();
            if (val - m).abs() > CLUSTER_TOLERANCE || m.abs() > l as f64 {
                return Err(fail(format!("L_z eigenvalue {val} inadmissible for l={l}")));
            }
            let m = m as i32;
            let slot = (m + l as i32) as usize;
            if seen[slot] {
                return Err(fail(format!("m={m} repeated within l={l}")));
            }
            seen[slot] = true;
            let vec = &v * lz_eig.eigenvectors.column(k);
            states.push((l, m, vec));
        }
    }
    Ok(ShellSplit { shell, states })
}

/// Rotates `v` so that its largest-magnitude entry (lowest index among
/// near-ties) becomes real positive.
fn fix_phase(v: &mut [C64]) {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max - PHASE_TIE_TOLERANCE)
        .expect("non-empty vector");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Builds the labeled eigenbasis for the basis and parameters of `ops`.
pub fn build_spherical(ops: &FockOperators) -> Result<SphericalBasis, SphericalError> {
    let n_max = ops.basis.n_max();
    let dim = ops.basis.dim();
    let shells: Vec<u32> = (0..=n_max).collect();
    let splits = par::map_slice(&shells, |&s| split_shell(ops, s))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    // diagonalized vectors embedded into the full Cartesian space
    let mut diag: HashMap<SphericalLabel, Vec<C64>> = HashMap::new();
    for split in &splits {
        let start = ops.basis.shell_range(split.shell).start;
        for (l, m, v) in &split.states {
            let mut full = vec![C64::new(0.0, 0.0); dim];
            for (k, z) in v.iter().enumerate() {
                full[start + k] = *z;
            }
            let label = SphericalLabel::new((split.shell - l) / 2, *l, *m);
            diag.insert(label, full);
        }
    }

    let mut labels: Vec<SphericalLabel> = diag.keys().copied().collect();
    labels.sort_by_key(|lab| (lab.shell(), lab.l, lab.m));

    let raise = ops.y_squared_dag.matrix();
    let mut columns: HashMap<SphericalLabel, Vec<C64>> = HashMap::new();
    for l in 0..=n_max {
        for m in -(l as i32)..=(l as i32) {
            let mut v = diag[&SphericalLabel::new(0, l, m)].clone();
            fix_phase(&mut v);
            columns.insert(SphericalLabel::new(0, l, m), v.clone());
            let mut n = 1;
            while l + 2 * n <= n_max {
                let mut next = raise.matvec(&v);
                let norm = norm2(&next);
                for z in next.iter_mut() {
                    *z /= norm;
                }
                let label = SphericalLabel::new(n, l, m);
                let overlap = inner(&diag[&label], &next).norm();
                if (1.0 - overlap).abs() > CLUSTER_TOLERANCE {
                    return Err(SphericalError::DegenerateSplitFailure {
                        shell: label.shell(),
                        detail: format!(
                            "chain image of {label} leaves its eigenspace (overlap {overlap})"
                        ),
                    });
                }
                columns.insert(label, next.clone());
                v = next;
                n += 1;
            }
        }
    }

    let triplets = labels.iter().enumerate().flat_map(|(k, lab)| {
        columns[lab]
            .iter()
            .enumerate()
            .map(move |(r, &z)| (r, k, z))
            .collect::<Vec<_>>()
    });
    let u = SparseMatrix::from_triplets(dim, dim, triplets);
    let u_dag = u.adjoint();
    let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    Ok(SphericalBasis {
        n_max,
        params: ops.params,
        labels,
        index,
        u,
        u_dag,
    })
}

impl SphericalBasis {
    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn params(&self) -> &OscParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[SphericalLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: &SphericalLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn transform(&self) -> &SparseMatrix {
        &self.u
    }

    /// Cartesian coefficients of `label`.
    pub fn column(&self, label: &SphericalLabel) -> Option<Vec<C64>> {
        let k = self.index_of(label)?;
        Some(
            self.u_dag
                .row(k)
                .fold(vec![C64::new(0.0, 0.0); self.dim()], |mut v, (r, z)| {
                    v[r] = z.conj();
                    v
                }),
        )
    }

    /// `U† A U`.
    pub fn to_spherical(&self, op: &SparseMatrix) -> SparseMatrix {
        self.u_dag.matmul(&op.matmul(&self.u))
    }

    /// `U A U†`.
    pub fn to_cartesian(&self, op: &SparseMatrix) -> SparseMatrix {
        self.u.matmul(&op.matmul(&self.u_dag))
    }

    /// `‖U†U − 1‖₁`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.u_dag.matmul(&self.u) - &SparseMatrix::identity(self.dim())).norm1()
    }

    /// Largest column residuals `‖(O − λ)|nlm⟩‖₁` for `H`, `L²`, `L_z`.
    pub fn eigen_residuals(&self, ops: &FockOperators) -> [f64; 3] {
        let omega = ops.params.omega();
        let energy: Vec<f64> = self
            .labels
            .iter()
            .map(|l| omega * (l.shell() as f64 + 1.5))
            .collect();
        let l2: Vec<f64> = self.labels.iter().map(SphericalLabel::l_squared).collect();
        let lz: Vec<f64> = self.labels.iter().map(|l| l.m as f64).collect();
        let targets = [
            (ops.hamiltonian.matrix(), energy),
            (ops.l_squared.matrix(), l2),
            (ops.l[2].matrix(), lz),
        ];
        targets.map(|(op, eigen)| {
            let lhs = op.matmul(&self.u);
            let rhs = self.u.matmul(&SparseMatrix::from_real_diagonal(&eigen));
            (&lhs - &rhs).norm1()
        })
    }

    /// Diagonal of `H` in this basis, `ω(2n + l + 3/2)`.
    pub fn energies(&self) -> Vec<f64> {
        self.labels.iter().map(|l| l.energy(&self.params)).collect()
    }

    pub fn degeneracy_table(&self) -> Vec<ShellRow> {
        (0..=self.n_max)
            .map(|shell| {
                let in_shell: Vec<&SphericalLabel> =
                    self.labels.iter().filter(|l| l.shell() == shell).collect();
                let mut l_values: Vec<u32> = in_shell.iter().map(|l| l.l).collect();
                l_values.dedup();
                ShellRow {
                    shell,
                    energy_over_omega: shell as f64 + 1.5,
                    multiplicity: in_shell.len(),
                    l_values,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n_max: u32) -> (FockOperators, SphericalBasis) {
        let ops = FockOperators::build(n_max, OscParams::default()).unwrap();
        let sph = build_spherical(&ops).unwrap();
        (ops, sph)
    }

    #[test]
    fn shell_label_content() {
        let (_, sph) = basis(3);
        let shell = |n| {
            sph.labels()
                .iter()
                .filter(|l| l.shell() == n)
                .copied()
                .collect::<Vec<_>>()
        };
        assert_eq!(shell(0), vec![SphericalLabel::new(0, 0, 0)]);
        let s2 = shell(2);
        assert_eq!(s2.len(), 6);
        assert_eq!(s2[0], SphericalLabel::new(1, 0, 0));
        assert!(s2[1..]
            .iter()
            .enumerate()
            .all(|(k, l)| *l == SphericalLabel::new(0, 2, k as i32 - 2)));
        let s3 = shell(3);
        assert_eq!(s3.len(), 10);
        assert_eq!(s3.iter().filter(|l| l.l == 3).count(), 7);
        assert_eq!(s3.iter().filter(|l| l.l == 1).count(), 3);
    }

    #[test]
    fn l_squared_spectrum_on_shell_two() {
        let ops = FockOperators::build(2, OscParams::default()).unwrap();
        let idx: Vec<usize> = ops.basis.shell_range(2).collect();
        let block = ops.l_squared.matrix().dense_block(&idx, &idx);
        let mut eig: Vec<f64> = SymmetricEigen::new(block)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(f64::total_cmp);
        let expect = [0.0, 6.0, 6.0, 6.0, 6.0, 6.0];
        for (a, b) in eig.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{eig:?}");
        }
    }

    #[test]
    fn basis_is_unitary_eigenbasis() {
        let (ops, sph) = basis(6);
        assert!(sph.unitarity_defect() < 1e-12);
        for r in sph.eigen_residuals(&ops) {
            assert!(r < 1e-10, "{r}");
        }
    }

    #[test]
    fn degeneracy_rows() {
        let (_, sph) = basis(5);
        let t = sph.degeneracy_table();
        assert_eq!(
            t[0],
            ShellRow {
                shell: 0,
                energy_over_omega: 1.5,
                multiplicity: 1,
                l_values: vec![0]
            }
        );
        assert_eq!(t[1].multiplicity, 3);
        assert_eq!(t[1].l_values, vec![1]);
        assert_eq!(t[4].multiplicity, 15);
        assert_eq!(t[4].l_values, vec![0, 2, 4]);
        assert_eq!(t[5].l_values, vec![1, 3, 5]);
        assert_eq!(t[5].multiplicity, 21);
    }

    #[test]
    fn vacuum_phase_is_positive() {
        let (_, sph) = basis(2);
        let v = sph.column(&SphericalLabel::new(0, 0, 0)).unwrap();
        assert!((v[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn phase_tie_breaks_on_lowest_index() {
        let mut v = vec![C64::new(0.0, 0.5), C64::new(-0.5, 0.0)];
        fix_phase(&mut v);
        assert!((v[0] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((v[1] - C64::new(0.0, 0.5)).norm() < 1e-15);
    }
}
