//! Time evolution in the doubled spherical basis, phase unwinding and the
//! half-period winding structure.
//!
//! `H` is diagonal in the doubled basis, so `U(t)` multiplies each amplitude
//! by `e^{−iE(n,l)t}`. The phase estimate is `φ = arg⟨e^{2iΦ}⟩ / 2`, unwound
//! continuously along the time grid; `τ = −φ/ω`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::par;
use crate::phase1d::Sign;
use crate::phase3d::PhaseOperatorSet;
use crate::spherical::SphericalLabel;

/// Below this modulus of `⟨e^{2iΦ}⟩` the phase is considered undefined.
pub const PHASE_MODULUS_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error("invalid label {0} (|m| must not exceed l)")]
    InvalidLabel(SphericalLabel),
    #[error("component {0} listed twice")]
    DuplicateComponent(SphericalLabel),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state component {label} lies outside the window 2n+l <= {window}")]
    StateOutsideWindow { label: SphericalLabel, window: i64 },
    #[error("state has components in both H+ and H-; the winding branch is undefined")]
    MixedBranch,
    #[error("phase undefined at t={t}: |<exp(2i Phi)>| = {modulus:e} below {PHASE_MODULUS_THRESHOLD:e} for state {state}")]
    PhaseUndefined { t: f64, modulus: f64, state: String },
    #[error("phase unwrapping ambiguous: {0}")]
    UnwrapAmbiguity(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("cannot parse state literal: {0}")]
    StateSyntax(String),
}

/// Superposition of doubled basis states, normalized on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    components: Vec<(SphericalLabel, Sign, C64)>,
}

impl StateSpec {
    pub fn new(components: Vec<(SphericalLabel, Sign, C64)>) -> Result<Self, EvolutionError> {
        for (k, (label, sign, _)) in components.iter().enumerate() {
            if !label.is_valid() {
                return Err(EvolutionError::InvalidLabel(*label));
            }
            if components[..k]
                .iter()
                .any(|(l, s, _)| l == label && s == sign)
            {
                return Err(EvolutionError::DuplicateComponent(*label));
            }
        }
        let norm = components
            .iter()
            .map(|(_, _, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(EvolutionError::ZeroNorm);
        }
        Ok(Self {
            components: components
                .into_iter()
                .map(|(l, s, a)| (l, s, a / norm))
                .collect(),
        })
    }

    /// `(|0,0,0;s⟩ + e^{2iφ₀}|1,0,0;s⟩)/√2`, whose phase estimate starts at `φ₀`
    /// (for `φ₀ ∈ (−π/2, π/2]`).
    pub fn two_level(sign: Sign, phi0: f64) -> Self {
        Self::new(vec![
            (SphericalLabel::new(0, 0, 0), sign, C64::new(1.0, 0.0)),
            (
                SphericalLabel::new(1, 0, 0),
                sign,
                C64::from_polar(1.0, 2.0 * phi0),
            ),
        ])
        .expect("valid two-level state")
    }

    pub fn components(&self) -> &[(SphericalLabel, Sign, C64)] {
        &self.components
    }

    /// The copy all components live in, if there is only one.
    pub fn branch(&self) -> Option<Sign> {
        let first = self.components.first()?.1;
        self.components
            .iter()
            .all(|(_, s, _)| *s == first)
            .then_some(first)
    }

    pub fn max_shell(&self) -> u32 {
        self.components
            .iter()
            .map(|(l, _, _)| l.shell())
            .max()
            .unwrap_or(0)
    }

    pub fn check_window(&self, window: i64) -> Result<(), EvolutionError> {
        match self
            .components
            .iter()
            .find(|(l, _, _)| l.shell() as i64 > window)
        {
            Some((label, _, _)) => Err(EvolutionError::StateOutsideWindow {
                label: *label,
                window,
            }),
            None => Ok(()),
        }
    }

    pub fn to_vector(&self, ops: &PhaseOperatorSet) -> Result<Vec<C64>, EvolutionError> {
        let mut v = vec![C64::new(0.0, 0.0); ops.dim()];
        for (label, sign, amp) in &self.components {
            let pos = ops
                .position(label, *sign)
                .ok_or(EvolutionError::StateOutsideWindow {
                    label: *label,
                    window: ops.n_max() as i64,
                })?;
            v[pos] = *amp;
        }
        Ok(v)
    }
}

impl std::fmt::Display for StateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, (l, s, a)) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(
                f,
                "{},{},{},{}:{}{:+}j",
                l.n,
                l.l,
                l.m,
                s.symbol(),
                a.re,
                a.im
            )?;
        }
        Ok(())
    }
}

/// Splits `re+imj` at the sign that starts the imaginary part.
fn parse_amplitude(text: &str) -> Option<C64> {
    let text = text.trim();
    let Some(body) = text.strip_suffix('j') else {
        return text.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i].parse().ok()?;
            let im = match &body[i..] {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            Some(C64::new(re, im))
        }
        None => body.parse().ok().map(|im| C64::new(0.0, im)),
    }
}

/// `n,l,m,±:re+imj;…`, the format written by `Display`. The amplitude may be
/// omitted (`n,l,m,±` means amplitude 1) or given as a plain real number.
impl std::str::FromStr for StateSpec {
    type Err = EvolutionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = |k: usize, part: &str, why: &str| {
            EvolutionError::StateSyntax(format!("component {} '{part}': {why}", k + 1))
        };
        let mut components = Vec::new();
        for (k, part) in s.split(';').map(str::trim).enumerate() {
            if part.is_empty() {
                return Err(syntax(k, part, "empty component"));
            }
            let (label, amp) = match part.split_once(':') {
                Some((l, a)) => (l, Some(a)),
                None => (part, None),
            };
            let fields: Vec<&str> = label.split(',').map(str::trim).collect();
            let [n, l, m, sign] = fields[..] else {
                return Err(syntax(k, part, "expected n,l,m,sign"));
            };
            let n: u32 = n
                .parse()
                .map_err(|_| syntax(k, part, "n must be a non-negative integer"))?;
            let l: u32 = l
                .parse()
                .map_err(|_| syntax(k, part, "l must be a non-negative integer"))?;
            let m: i32 = m
                .parse()
                .map_err(|_| syntax(k, part, "m must be an integer"))?;
            let sign = match sign {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(syntax(k, part, "sign must be + or -")),
            };
            let amp = match amp {
                Some(a) => parse_amplitude(a)
                    .ok_or_else(|| syntax(k, part, "amplitude must look like re+imj"))?,
                None => C64::new(1.0, 0.0),
            };
            components.push((SphericalLabel::new(n, l, m), sign, amp));
        }
        Self::new(components)
    }
}

/// `U(t)ψ` for a vector in the doubled basis of `ops`.
pub fn propagate_vector(psi: &[C64], energies: &[f64], t: f64) -> Vec<C64> {
    psi.iter()
        .zip(energies)
        .map(|(a, e)| a * C64::from_polar(1.0, -e * t))
        .collect()
}

/// `U(t)|state⟩` with `U(t) = e^{−iHt}`.
pub fn propagate(
    state: &StateSpec,
    t: f64,
    ops: &PhaseOperatorSet,
) -> Result<Vec<C64>, EvolutionError> {
    let psi = state.to_vector(ops)?;
    Ok(propagate_vector(&psi, &doubled_energies(ops), t))
}

fn doubled_energies(ops: &PhaseOperatorSet) -> Vec<f64> {
    ops.labels()
        .iter()
        .chain(ops.labels().iter())
        .map(|l| l.energy(ops.params()))
        .collect()
}

/// Cell of the extended decomposition a phase value falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindingState {
    pub j: i64,
    /// `Minus` for the incoming half `D_{−,j}`, `Plus` for `D_{+,j}`.
    pub sigma: Sign,
    /// Which copy, `H₊` or `H₋`.
    pub branch: Sign,
}

impl WindingState {
    /// The cell reached after half a period `T₀/2 = π/ω`.
    pub fn advanced(self) -> Self {
        match self.sigma {
            Sign::Minus => Self {
                sigma: Sign::Plus,
                ..self
            },
            Sign::Plus => Self {
                j: self.j + 1,
                sigma: Sign::Minus,
                ..self
            },
        }
    }

    /// Half-open interval `(lo, hi]` covered by this cell.
    pub fn bounds(self) -> (f64, f64) {
        let j = self.j as f64;
        match (self.branch, self.sigma) {
            (Sign::Plus, Sign::Minus) => (-2.0 * j * PI, PI - 2.0 * j * PI),
            (Sign::Plus, Sign::Plus) => (-PI - 2.0 * j * PI, -2.0 * j * PI),
            (Sign::Minus, Sign::Minus) => (-PI + 2.0 * j * PI, 2.0 * j * PI),
            (Sign::Minus, Sign::Plus) => (2.0 * j * PI, PI + 2.0 * j * PI),
        }
    }
}

/// Integer `q` with `(q−1)π < φ ≤ qπ`.
fn half_turn_index(phi: f64) -> i64 {
    let mut q = (phi / PI).ceil() as i64;
    if phi > q as f64 * PI {
        q += 1;
    }
    if phi <= (q - 1) as f64 * PI {
        q -= 1;
    }
    q
}

/// Places `phi` in the interval table of the given branch.
pub fn classify_winding(phi: f64, branch: Sign) -> WindingState {
    let q = half_turn_index(phi);
    let odd = q.rem_euclid(2) == 1;
    let (j, sigma) = match (branch, odd) {
        (Sign::Plus, true) => ((1 - q) / 2, Sign::Minus),
        (Sign::Plus, false) => (-q / 2, Sign::Plus),
        (Sign::Minus, false) => (q / 2, Sign::Minus),
        (Sign::Minus, true) => ((q - 1) / 2, Sign::Plus),
    };
    WindingState { j, sigma, branch }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub exp_plus: C64,
    pub exp_minus: C64,
    pub phi_unwound: f64,
    pub tau: f64,
    pub winding: WindingState,
}

/// Uniform grid `0, dt, 2dt, …` up to `t_max`.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>, EvolutionError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(EvolutionError::InvalidGrid(format!(
            "dt must be > 0, got {dt}"
        )));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(EvolutionError::InvalidGrid(format!(
            "t_max must be >= 0, got {t_max}"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// Phase trajectory of `state` on `t_grid`.
///
/// The state must live in one copy and satisfy `2n+l ≤ n_max − 2`. The
/// expectation values at each time are independent and computed in
/// parallel; unwinding runs in grid order.
pub fn phase_trajectory(
    state: &StateSpec,
    t_grid: &[f64],
    ops: &PhaseOperatorSet,
) -> Result<Vec<TrajectoryPoint>, EvolutionError> {
    let branch = state.branch().ok_or(EvolutionError::MixedBranch)?;
    state.check_window(ops.n_max() as i64 - 2)?;
    let psi0 = state.to_vector(ops)?;
    let energies = doubled_energies(ops);
    let omega = ops.params().omega();

    let values = par::map_slice(t_grid, |&t| {
        let psi = propagate_vector(&psi0, &energies, t);
        (
            ops.e2.expectation(&psi, &psi),
            ops.e2_dag.expectation(&psi, &psi),
        )
    });

    let mut out = Vec::with_capacity(t_grid.len());
    let mut unwound = 0.0;
    let mut prev_raw = 0.0;
    for (k, (&t, &(exp_plus, exp_minus))) in t_grid.iter().zip(&values).enumerate() {
        let modulus = exp_plus.norm();
        if modulus < PHASE_MODULUS_THRESHOLD {
            return Err(EvolutionError::PhaseUndefined {
                t,
                modulus,
                state: state.to_string(),
            });
        }
        let raw = exp_plus.arg();
        if k == 0 {
            unwound = raw;
        } else {
            let step = wrap_angle(raw - prev_raw);
            if step.abs() >= PI / 2.0 {
                return Err(EvolutionError::UnwrapAmbiguity(format!(
                    "argument jumps by {step} between t={} and t={t}",
                    t_grid[k - 1]
                )));
            }
            unwound += step;
        }
        prev_raw = raw;
        let phi = unwound / 2.0;
        out.push(TrajectoryPoint {
            t,
            exp_plus,
            exp_minus,
            phi_unwound: phi,
            // `+ 0.0` turns −0 into +0 so output bytes do not depend on it
            tau: -phi / omega + 0.0,
            winding: classify_winding(phi, branch),
        });
    }
    Ok(out)
}

/// Largest deviation of `⟨e^{2iΦ}⟩(t)·e^{±2iωt}` from its initial value,
/// with `+` for `H₊` and `−` for `H₋`.
pub fn rotation_law_residual(traj: &[TrajectoryPoint], branch: Sign, omega: f64) -> f64 {
    let Some(first) = traj.first() else {
        return 0.0;
    };
    traj.iter()
        .map(|p| {
            let undo = C64::from_polar(1.0, 2.0 * omega * p.t * branch.value());
            (p.exp_plus * undo - first.exp_plus).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

/// Least-squares line through `τ(t)`.
pub fn tau_law_check(traj: &[TrajectoryPoint]) -> Result<TauFit, EvolutionError> {
    if traj.len() < 2 {
        return Err(EvolutionError::UnwrapAmbiguity(
            "at least two grid points are needed to define a slope".into(),
        ));
    }
    for w in traj.windows(2) {
        let step = 2.0 * (w[1].phi_unwound - w[0].phi_unwound);
        if step.abs() >= PI / 2.0 {
            return Err(EvolutionError::UnwrapAmbiguity(format!(
                "argument jumps by {step} between t={} and t={}",
                w[0].t, w[1].t
            )));
        }
    }
    let n = traj.len() as f64;
    let mean_t = traj.iter().map(|p| p.t).sum::<f64>() / n;
    let mean_tau = traj.iter().map(|p| p.tau).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in traj {
        sxy += (p.t - mean_t) * (p.tau - mean_tau);
        sxx += (p.t - mean_t) * (p.t - mean_t);
    }
    if sxx == 0.0 {
        return Err(EvolutionError::UnwrapAmbiguity(
            "all grid points share one time".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_tau - slope * mean_t;
    let max_residual = traj
        .iter()
        .map(|p| (p.tau - (slope * p.t + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(TauFit {
        slope,
        intercept,
        max_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub t_before: f64,
    pub t_after: f64,
    pub before: WindingState,
    pub after: WindingState,
    pub expected: WindingState,
}

impl Transition {
    pub fn ok(&self) -> bool {
        self.after == self.expected
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdvanceReport {
    pub transitions: Vec<Transition>,
}

impl AdvanceReport {
    pub fn all_ok(&self) -> bool {
        self.transitions.iter().all(Transition::ok)
    }
}

/// Follows `state` for `half_periods` steps of `T₀/2 = π/ω`, sampling
/// `steps_per_half` grid points per step for unwinding, and compares each
/// classified cell with the one predicted by a half-period advance.
pub fn half_period_advance_check(
    state: &StateSpec,
    ops: &PhaseOperatorSet,
    half_periods: usize,
    steps_per_half: usize,
) -> Result<AdvanceReport, EvolutionError> {
    let steps_per_half = steps_per_half.max(4);
    let half = PI / ops.params().omega();
    let dt = half / steps_per_half as f64;
    let grid: Vec<f64> = (0..=half_periods * steps_per_half)
        .map(|k| k as f64 * dt)
        .collect();
    let traj = phase_trajectory(state, &grid, ops)?;
    let transitions = (0..half_periods)
        .map(|k| {
            let a = &traj[k * steps_per_half];
            let b = &traj[(k + 1) * steps_per_half];
            Transition {
                t_before: a.t,
                t_after: b.t,
                before: a.winding,
                after: b.winding,
                expected: a.winding.advanced(),
            }
        })
        .collect();
    Ok(AdvanceReport { transitions })
}
