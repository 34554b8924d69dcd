//! Linear oscillator: the one-sided shift `E = (a†a + 1)^{-1/2} a` on a
//! truncated number basis and its two-sided version on the doubled space.
//!
//! The doubled chain is indexed by `k ∈ {−(n_max+1), …, n_max}` with
//! `k ≥ 0 ↔ |k,+⟩` and `k < 0 ↔ |−k−1,−⟩`; matrix position is
//! `k + n_max + 1`, so the chain reads left to right as
//! `|n_max,−⟩ … |0,−⟩ |0,+⟩ … |n_max,+⟩` and `E` shifts one step left.

use num_complex::Complex64 as C64;

use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EdgeMode {
    /// Chain ends are left dangling; unitarity fails only at the ends.
    #[default]
    Open,
    /// The far end of the `−` branch is wired to the far end of the `+`
    /// branch, making the shift an exact permutation.
    Cyclic,
}

impl std::str::FromStr for EdgeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(EdgeMode::Open),
            "cyclic" => Ok(EdgeMode::Cyclic),
            other => Err(format!("unknown mode '{other}' (expected open|cyclic)")),
        }
    }
}

impl std::fmt::Display for EdgeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeMode::Open => "open",
            EdgeMode::Cyclic => "cyclic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain1D {
    n_max: u32,
    mode: EdgeMode,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl Chain1D {
    pub fn new(n_max: u32, mode: EdgeMode) -> Self {
        Self { n_max, mode }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn mode(&self) -> EdgeMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max as usize + 1)
    }

    /// Matrix position of `|n, sign⟩`.
    pub fn position(&self, n: u32, sign: Sign) -> usize {
        let k: i64 = match sign {
            Sign::Plus => n as i64,
            Sign::Minus => -(n as i64) - 1,
        };
        (k + self.n_max as i64 + 1) as usize
    }

    pub fn ket(&self, n: u32, sign: Sign) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[self.position(n, sign)] = one();
        v
    }

    /// Doubled phase exponential assembled term by term:
    /// `Σ|n,+⟩⟨n+1,+| + |0,−⟩⟨0,+| + Σ|n+1,−⟩⟨n,−|`, plus the wrap
    /// `|n_max,+⟩⟨n_max,−|` in cyclic mode.
    pub fn phase_exponential(&self) -> SparseMatrix {
        let mut t = Vec::new();
        for n in 0..self.n_max {
            t.push((
                self.position(n, Sign::Plus),
                self.position(n + 1, Sign::Plus),
                one(),
            ));
            t.push((
                self.position(n + 1, Sign::Minus),
                self.position(n, Sign::Minus),
                one(),
            ));
        }
        t.push((
            self.position(0, Sign::Minus),
            self.position(0, Sign::Plus),
            one(),
        ));
        if self.mode == EdgeMode::Cyclic {
            t.push((
                self.position(self.n_max, Sign::Plus),
                self.position(self.n_max, Sign::Minus),
                one(),
            ));
        }
        SparseMatrix::from_triplets(self.dim(), self.dim(), t)
    }

    /// Projector onto `|n_max,−⟩`, the column `E` leaves empty in open mode.
    pub fn source_edge(&self) -> SparseMatrix {
        let p = self.position(self.n_max, Sign::Minus);
        SparseMatrix::from_triplets(self.dim(), self.dim(), [(p, p, one())])
    }

    /// Projector onto `|n_max,+⟩`, the row `E` never reaches in open mode.
    pub fn target_edge(&self) -> SparseMatrix {
        let p = self.position(self.n_max, Sign::Plus);
        SparseMatrix::from_triplets(self.dim(), self.dim(), [(p, p, one())])
    }

    /// Columns away from both chain ends.
    pub fn interior_mask(&self) -> Vec<bool> {
        let ends = [
            self.position(self.n_max, Sign::Minus),
            self.position(self.n_max, Sign::Plus),
        ];
        (0..self.dim()).map(|i| !ends.contains(&i)).collect()
    }

    /// `ω(n + 1/2)` on both copies.
    pub fn hamiltonian(&self, omega: f64) -> SparseMatrix {
        let mut diag = vec![0.0; self.dim()];
        for n in 0..=self.n_max {
            for s in [Sign::Plus, Sign::Minus] {
                diag[self.position(n, s)] = omega * (n as f64 + 0.5);
            }
        }
        SparseMatrix::from_real_diagonal(&diag)
    }

    /// Diagonal projector onto one copy.
    pub fn copy_projector(&self, sign: Sign) -> SparseMatrix {
        let mut diag = vec![0.0; self.dim()];
        for n in 0..=self.n_max {
            diag[self.position(n, sign)] = 1.0;
        }
        SparseMatrix::from_real_diagonal(&diag)
    }
}

/// Single-copy number basis `|0⟩ … |n_max⟩`: returns `(E, E†)` with
/// `E = (a†a + 1)^{-1/2} a`.
///
/// The inverse square root acts on the diagonal number operator entrywise.
pub fn sg_pair(n_max: u32) -> (SparseMatrix, SparseMatrix) {
    let dim = n_max as usize + 1;
    let a = SparseMatrix::from_triplets(
        dim,
        dim,
        (1..dim).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))),
    );
    let inv_sqrt: Vec<f64> = (0..dim).map(|n| 1.0 / ((n + 1) as f64).sqrt()).collect();
    let e = SparseMatrix::from_real_diagonal(&inv_sqrt).matmul(&a);
    let e_dag = e.adjoint();
    (e, e_dag)
}

/// Residuals of `EE† = 1` and `E†E = 1 − |0⟩⟨0|` on the window `n ≤ n_max − 1`.
pub fn sg_isometry_residuals(n_max: u32) -> (f64, f64) {
    let (e, e_dag) = sg_pair(n_max);
    let dim = n_max as usize + 1;
    let mask: Vec<bool> = (0..dim).map(|n| n + 1 < dim).collect();
    let id = SparseMatrix::identity(dim);
    let vac = SparseMatrix::from_triplets(dim, dim, [(0, 0, one())]);
    let r1 = (&e.matmul(&e_dag) - &id).norm1_masked(&mask);
    let r2 = (&e_dag.matmul(&e) - &(&id - &vac)).norm1_masked(&mask);
    (r1, r2)
}
