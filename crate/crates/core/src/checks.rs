//! Identity checks over one fully built model, each reduced to a residual
//! and a pinned tolerance.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{Axis, FockOperators, OscParams};
use crate::par;
use crate::phase1d::{self, Chain1D, EdgeMode, Sign};
use crate::phase3d::PhaseOperatorSet;
use crate::sparse::SparseMatrix;
use crate::spherical::{build_spherical, SphericalBasis};
use crate::Error;

/// Relative tolerance for exact operator identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Tolerance for eigenvector and normalization checks.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Absolute tolerance for matrix-element commutator laws.
pub const MATRIX_ELEMENT_TOLERANCE: f64 = 1e-11;

/// Number of `(χ, ψ)` pairs sampled by the matrix-element commutator law.
pub const COMMUTATOR_PAIRS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    /// The identity under test, in plain operator notation.
    pub identity: &'static str,
    pub window: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn new(
        name: &'static str,
        identity: &'static str,
        window: String,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name,
            identity,
            window,
            residual,
            tolerance,
        }
    }

    /// `residual ≤ tolerance`; NaN never passes.
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }

    /// One line of the verification report.
    pub fn to_line(&self) -> String {
        format!(
            "check={} identity=\"{}\" window=\"{}\" residual={:.16e} tolerance={:.16e} status={}",
            self.name,
            self.identity,
            self.window,
            self.residual,
            self.tolerance,
            if self.pass() { "pass" } else { "fail" }
        )
    }
}

/// Fock operators, spherical basis and doubled phase operators for one
/// configuration.
#[derive(Clone, Debug)]
pub struct Model {
    pub fock: FockOperators,
    pub spherical: SphericalBasis,
    pub phase: PhaseOperatorSet,
}

impl Model {
    pub fn build(n_max: u32, params: OscParams, mode: EdgeMode) -> Result<Self, Error> {
        let fock = FockOperators::build(n_max, params)?;
        let spherical = build_spherical(&fock)?;
        let phase = PhaseOperatorSet::build(&spherical, &fock, mode)?;
        Ok(Self {
            fock,
            spherical,
            phase,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.fock.basis.n_max()
    }

    pub fn omega(&self) -> f64 {
        self.fock.params.omega()
    }

    /// Residual pair for `[H, Y_j] + ωY_j` and `[H, Y_j†] − ωY_j†`, relative
    /// to `ω‖Y_j‖`, maximized over axes; windows `n_max` and `n_max − 1`.
    pub fn hy_residuals(&self) -> (f64, f64) {
        let h = &self.fock.hamiltonian;
        let w = self.omega();
        let mut out = (0.0f64, 0.0f64);
        for y in &self.fock.y {
            let scale = (w * y.norm()).max(f64::MIN_POSITIVE);
            let yd = y.adjoint();
            let r1 = h.commutator(y).add(&y.scale_real(w)).norm_on(y.window()) / scale;
            let r2 = h
                .commutator(&yd)
                .sub(&yd.scale_real(w))
                .norm_on(yd.window())
                / scale;
            out = (out.0.max(r1), out.1.max(r2));
        }
        out
    }

    /// `[H, Y²] + 2ωY²` and its adjoint partner, relative to `2ω‖Y²‖`.
    pub fn hy2_residuals(&self) -> (f64, f64) {
        let h = &self.fock.hamiltonian;
        let w = self.omega();
        let y2 = &self.fock.y_squared;
        let y2d = &self.fock.y_squared_dag;
        let scale = (2.0 * w * y2.norm()).max(f64::MIN_POSITIVE);
        let r1 = h
            .commutator(y2)
            .add(&y2.scale_real(2.0 * w))
            .norm_on(y2.window())
            / scale;
        let r2 = h
            .commutator(y2d)
            .sub(&y2d.scale_real(2.0 * w))
            .norm_on(y2d.window())
            / scale;
        (r1, r2)
    }

    /// `[L_k, Y_l] − iε_klm Y_m` over all `k, l`, and `[L_k, Y²]`.
    pub fn ly_residuals(&self) -> (f64, f64) {
        let y = &self.fock.y;
        let scale = y[0].norm().max(f64::MIN_POSITIVE);
        let window = self.n_max() as i64 - 1;
        let mut vector = 0.0f64;
        for k in Axis::ALL {
            for l in Axis::ALL {
                let comm = self.fock.l[k.index()].commutator(&y[l.index()]);
                let expected = match levi_civita(k, l) {
                    Some((m, s)) => y[m.index()].scale(C64::new(0.0, s)),
                    None => y[l.index()].scale_real(0.0),
                };
                vector = vector.max(comm.sub(&expected).norm_on(window) / scale);
            }
        }
        let y2 = &self.fock.y_squared;
        let y2_scale = y2.norm().max(f64::MIN_POSITIVE);
        let scalar = self
            .fock
            .l
            .iter()
            .map(|l| {
                let c = l.commutator(y2);
                c.norm_on(c.window()) / y2_scale
            })
            .fold(0.0, f64::max);
        (vector, scalar)
    }

    /// `[H, Z] + 2ωZ` and `[H, Z†] − 2ωZ†` in Cartesian coordinates,
    /// relative to `2ω‖Z‖`; windows `n_max` and `n_max − 2`.
    pub fn hz_residuals(&self) -> (f64, f64) {
        let w = self.omega();
        let z = self.spherical.to_cartesian(&self.phase.zpair.z);
        let zd = z.adjoint();
        let h = self.fock.hamiltonian.matrix();
        let scale = (2.0 * w * z.norm1()).max(f64::MIN_POSITIVE);
        let mask_all = vec![true; z.ncols()];
        let raise_window = self.n_max() as i64 - 2;
        let mask_raise: Vec<bool> = self
            .fock
            .basis
            .shells()
            .iter()
            .map(|&s| (s as i64) <= raise_window)
            .collect();
        let r1 = (&h.commutator(&z) + &z.scale_real(2.0 * w)).norm1_masked(&mask_all) / scale;
        let r2 = (&h.commutator(&zd) - &zd.scale_real(2.0 * w)).norm1_masked(&mask_raise) / scale;
        (r1, r2)
    }

    /// Worst of: chain coefficient `|⟨n−1|Z|n⟩ − 1|`, `‖Z|0,l,m⟩‖`,
    /// `ZZ† − 1` on shells `≤ n_max − 2` and `Z†Z − (1 − P_{n=0})`.
    pub fn z_shift_residuals(&self) -> ZShiftResiduals {
        let z = &self.phase.zpair.z;
        let zd = &self.phase.zpair.z_dag;
        let labels = self.spherical.labels();
        let mut coefficient = 0.0f64;
        let mut vacuum = 0.0f64;
        let col_sums = z.column_abs_sums();
        for (k, lab) in labels.iter().enumerate() {
            if lab.n == 0 {
                vacuum = vacuum.max(col_sums[k]);
            } else {
                let below = crate::spherical::SphericalLabel::new(lab.n - 1, lab.l, lab.m);
                let r = self.spherical.index_of(&below).unwrap();
                coefficient = coefficient.max((z.get(r, k) - C64::new(1.0, 0.0)).norm());
            }
        }
        let dim = labels.len();
        let id = SparseMatrix::identity(dim);
        let window = self.n_max() as i64 - 2;
        let mask: Vec<bool> = labels.iter().map(|l| l.shell() as i64 <= window).collect();
        let zzd = (&z.matmul(zd) - &id).norm1_masked(&mask);
        let vac_proj = SparseMatrix::from_real_diagonal(
            &labels
                .iter()
                .map(|l| if l.n == 0 { 1.0 } else { 0.0 })
                .collect::<Vec<_>>(),
        );
        let zdz = (&zd.matmul(z) - &(&id - &vac_proj)).norm1();
        ZShiftResiduals {
            coefficient,
            vacuum,
            z_zdag: zzd,
            zdag_z: zdz,
        }
    }

    /// Brute-force `‖Y²|n,l,m⟩‖` on Cartesian vectors against
    /// `2Mω√(2n(2n+2l+1))`, maximum relative error over all `n ≥ 1`.
    pub fn y2_normalization_residual(&self) -> f64 {
        let params = &self.fock.params;
        let y2 = self.fock.y_squared.matrix();
        self.spherical
            .labels()
            .iter()
            .filter(|l| l.n >= 1)
            .map(|lab| {
                let v = self.spherical.column(lab).unwrap();
                let image = y2.matvec(&v);
                let norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let (n, l) = (lab.n as f64, lab.l as f64);
                let expected = 2.0
                    * params.mass()
                    * params.omega()
                    * (2.0 * n * (2.0 * n + 2.0 * l + 1.0)).sqrt();
                (norm - expected).abs() / expected
            })
            .fold(0.0, f64::max)
    }

    /// Matrix-element law on `COMMUTATOR_PAIRS` deterministic pairs in each
    /// copy, for both `e^{±2iΦ}`; vectors supported on shells `≤ n_max − 2`.
    pub fn commutator_law_residual(&self) -> f64 {
        let window = self.n_max() as i64 - 2;
        let per_sign = |sign: Sign| -> f64 {
            let support: Vec<usize> = (0..self.phase.dim())
                .filter(|&p| {
                    let (lab, s) = self.phase.label_at(p);
                    s == sign && lab.shell() as i64 <= window
                })
                .collect();
            if support.is_empty() {
                return 0.0;
            }
            let seeds: Vec<u64> = (0..COMMUTATOR_PAIRS as u64).collect();
            par::map_slice(&seeds, |&seed| {
                let chi = pseudo_vector(2 * seed, &support, self.phase.dim());
                let psi = pseudo_vector(2 * seed + 1, &support, self.phase.dim());
                let a = self
                    .phase
                    .commutator_law_residual(&chi, &psi, Sign::Plus, sign);
                let b = self
                    .phase
                    .commutator_law_residual(&chi, &psi, Sign::Minus, sign);
                a.max(b)
            })
            .into_iter()
            .fold(0.0, f64::max)
        };
        per_sign(Sign::Plus).max(per_sign(Sign::Minus))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZShiftResiduals {
    pub coefficient: f64,
    pub vacuum: f64,
    pub z_zdag: f64,
    pub zdag_z: f64,
}

impl ZShiftResiduals {
    pub fn max(&self) -> f64 {
        self.coefficient
            .max(self.vacuum)
            .max(self.z_zdag)
            .max(self.zdag_z)
    }
}

/// `(m, ε_klm)` for the unique `m` making `ε_klm ≠ 0`.
fn levi_civita(k: Axis, l: Axis) -> Option<(Axis, f64)> {
    if k == l {
        return None;
    }
    let (i, j) = k.cyclic_pair();
    if l == i {
        Some((j, 1.0))
    } else {
        Some((i, -1.0))
    }
}

/// Unit-norm vector with deterministic pseudo-random amplitudes on `support`.
pub fn pseudo_vector(seed: u64, support: &[usize], dim: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![C64::new(0.0, 0.0); dim];
    for &p in support {
        v[p] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// 1D doubled chain: edge-projector structure (open) or exact unitarity
/// (cyclic), the one-sided isometry relations, and the matrix-element
/// commutator law on `H₊` away from the edge.
pub fn phase1d_residual(n_max: u32, mode: EdgeMode, omega: f64) -> f64 {
    let chain = Chain1D::new(n_max.max(1), mode);
    let e = chain.phase_exponential();
    let id = SparseMatrix::identity(chain.dim());
    let defect = match mode {
        EdgeMode::Open => (&e.adjoint().matmul(&e) - &(&id - &chain.source_edge()))
            .norm1()
            .max((&e.matmul(&e.adjoint()) - &(&id - &chain.target_edge())).norm1()),
        EdgeMode::Cyclic => (&e.adjoint().matmul(&e) - &id)
            .norm1()
            .max((&e.matmul(&e.adjoint()) - &id).norm1()),
    };
    let (r1, r2) = phase1d::sg_isometry_residuals(chain.n_max());
    let p = chain.copy_projector(Sign::Plus);
    let h = chain.hamiltonian(omega);
    let law = &p.matmul(&h.commutator(&e)).matmul(&p) + &p.matmul(&e).matmul(&p).scale_real(omega);
    let law = law.norm1_masked(&chain.interior_mask()) / omega;
    defect.max(r1).max(r2).max(law)
}

/// Runs every identity check on one model. Checks are independent and are
/// evaluated concurrently; the output order is fixed.
pub fn run_verification(model: &Model) -> Vec<CheckReport> {
    let n = model.n_max() as i64;
    let phase = &model.phase;
    let mode = phase.mode();
    let w = |x: i64| format!("N<={x}");

    type Job<'a> = Box<dyn Fn() -> CheckReport + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| {
            let r = model.spherical.eigen_residuals(&model.fock);
            CheckReport::new(
                "spectrum",
                "H|nlm> = w(2n+l+3/2)|nlm>, L^2|nlm> = l(l+1)|nlm>, L_z|nlm> = m|nlm>",
                w(n),
                r[0].max(r[1]).max(r[2]),
                EIGEN_TOLERANCE,
            )
        }),
        Box::new(|| {
            let bad = model
                .spherical
                .degeneracy_table()
                .iter()
                .filter(|row| {
                    let s = row.shell;
                    let expected_l: Vec<u32> = (s % 2..=s).step_by(2).collect();
                    row.multiplicity != ((s + 1) * (s + 2) / 2) as usize
                        || row.l_values != expected_l
                })
                .count();
            CheckReport::new(
                "degeneracy",
                "shell N has multiplicity (N+1)(N+2)/2 and l in {N, N-2, ...}",
                w(n),
                bad as f64,
                0.0,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "spherical_unitarity",
                "U^dag U = 1",
                w(n),
                model.spherical.unitarity_defect(),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = model.hy_residuals();
            CheckReport::new(
                "hy_commutator",
                "[H,Y_j] = -w Y_j, [H,Y_j^dag] = w Y_j^dag",
                format!("N<={n} / N<={}", n - 1),
                a.max(b),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = model.hy2_residuals();
            CheckReport::new(
                "hy2_commutator",
                "[H,Y^2] = -2w Y^2, [H,(Y^2)^dag] = 2w (Y^2)^dag",
                format!("N<={n} / N<={}", n - 2),
                a.max(b),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = model.ly_residuals();
            CheckReport::new(
                "ly_commutator",
                "[L_k,Y_l] = i eps_klm Y_m, [L_k,Y^2] = 0",
                format!("N<={} / N<={n}", n - 1),
                a.max(b),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = model.hz_residuals();
            CheckReport::new(
                "hz_commutator",
                "[H,Z] = -2w Z, [H,Z^dag] = 2w Z^dag",
                format!("N<={n} / N<={}", n - 2),
                a.max(b),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "z_shift_action",
                "Z|n,l,m> = |n-1,l,m>, Z|0,l,m> = 0, ZZ^dag = 1, Z^dag Z = 1 - P(n=0)",
                format!("N<={n} / ZZ^dag on N<={}", n - 2),
                model.z_shift_residuals().max(),
                EIGEN_TOLERANCE,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "y2_normalization",
                "|<n-1,l,m|Y^2|n,l,m>| = 2Mw sqrt(2n(2n+2l+1))",
                w(n),
                model.y2_normalization_residual(),
                EIGEN_TOLERANCE,
            )
        }),
        Box::new(|| {
            let n1 = model.n_max().max(1);
            CheckReport::new(
                "phase1d_doubled",
                "E = sum|n,+><n+1,+| + |0,-><0,+| + sum|n+1,-><n,-|; E^dag E, E E^dag edge structure",
                format!("1D n<={n1}, mode={mode}"),
                phase1d_residual(n1, mode, model.omega()),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = phase.definition_residuals();
            CheckReport::new(
                "phase_exponential_definition",
                "e^{2iPhi} = (1+I)/2 Z + (1-I)/2 Z^dag + X(1-Z^dag Z)(1+I)/2 = dyadic chain shift",
                format!("all, mode={mode}"),
                a.max(b),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let r = match mode {
                EdgeMode::Open => phase.edge_defect_residual(),
                EdgeMode::Cyclic => phase.unitarity_defect(None).max(phase.permutation_defect()),
            };
            CheckReport::new(
                "phase_exponential_unitarity",
                "E2^dag E2 = E2 E2^dag = 1 up to chain-end projectors",
                format!("all, mode={mode}"),
                r,
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let (a, b) = phase.inverse_formulae_residuals();
            CheckReport::new(
                "inverse_formulae",
                "Z = (1+I)/2 e^{2iPhi} + (1-I)/2 e^{-2iPhi}, Z^dag = e^{-2iPhi}(1+I)/2 + e^{2iPhi}(1-I)/2",
                "interior".into(),
                a.max(b).max(phase.plus_sandwich_residual()),
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            let mask = phase.interior_mask();
            let r = phase
                .trig_residual(Some(&mask))
                .max(phase.cos2.hermiticity_defect())
                .max(phase.sin2.hermiticity_defect());
            CheckReport::new(
                "trig_identity",
                "cos^2 2Phi + sin^2 2Phi = 1, cos 2Phi and sin 2Phi Hermitian",
                "interior".into(),
                r,
                IDENTITY_TOLERANCE,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "reconstruction_lowering",
                "(p - iMwr)^2 = 2M[(H+w)^2 - w^2(L^2+1/4)]^{1/2} (cos 2Phi + i I sin 2Phi)",
                "interior".into(),
                phase.reconstruction_residuals().lowering,
                EIGEN_TOLERANCE,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "reconstruction_raising",
                "(p + iMwr)^2 = (cos 2Phi - i I sin 2Phi) 2M[(H+w)^2 - w^2(L^2+1/4)]^{1/2}",
                "interior".into(),
                phase.reconstruction_residuals().raising_as_printed,
                EIGEN_TOLERANCE,
            )
        }),
        Box::new(|| {
            CheckReport::new(
                "commutator_law",
                "<chi|[H,e^{+-2iPhi}]|psi> = -+2w s <chi|e^{+-2iPhi}|psi>, s = +1 on H+, -1 on H-",
                format!("N<={}, {COMMUTATOR_PAIRS} pairs per copy", n - 2),
                model.commutator_law_residual(),
                MATRIX_ELEMENT_TOLERANCE,
            )
        }),
    ];
    par::map_slice(&jobs, |job| job())
}

/// Formats a report, one check per line.
pub fn format_report(model: &Model, reports: &[CheckReport]) -> String {
    let p = &model.fock.params;
    let mut out = format!(
        "# qho-phase verify n_max={} mass={:.16e} omega={:.16e} mode={}\n",
        model.n_max(),
        p.mass(),
        p.omega(),
        model.phase.mode()
    );
    for r in reports {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.pass()).count();
    out.push_str(&format!(
        "# summary checks={} passed={} failed={}\n",
        reports.len(),
        reports.len() - failed,
        failed
    ));
    out
}
