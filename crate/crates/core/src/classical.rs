//! Classical geodesic motion on S³ under Dirac brackets.
//!
//! Phase-space points live on the constraint surface `x·x = 1`, `x·p = 0`.
//! The Dirac brackets are `{x_i,x_j} = 0`, `{p_i,x_j} = δ_ij − x_i x_j`,
//! `{p_i,p_j} = J_ij`, and the flow generated by `H = p²` is
//! `ẋ = 2p`, `ṗ = −2p² x`.

use std::fmt::Write as _;
use std::io::Write;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::{commutator_rhs, levi_civita6, BracketMode, GeneratorIndex, Generators, Metric};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::verify::CheckResult;

pub type Vec4 = [f64; 4];

/// Tolerance on `|x·x − 1|` and `|x·p|` for a valid state.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Central-difference step of the Poisson-bracket oracle.
pub const ORACLE_STEP: f64 = 1e-5;
/// Agreement required between the oracle and the closed-form brackets.
pub const ORACLE_TOL: f64 = 1e-6;
/// Residual bound for checks along an analytic trajectory.
pub const TOL_ANALYTIC: f64 = 1e-10;
/// Residual bound for checks along an integrated trajectory.
pub const TOL_RK4: f64 = 1e-6;
/// Relative drift allowed in conserved quantities of an integrated trajectory.
pub const TOL_DRIFT: f64 = 1e-8;

fn dot(a: &Vec4, b: &Vec4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &Vec4) -> f64 {
    dot(a, a).sqrt()
}

fn check_index(i: usize) -> Result<usize> {
    if (1..=4).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::IndexOutOfRange(format!("vector index {i} outside 1..=4")))
    }
}

/// Defects `(|x·x − 1|, |x·p|)` of a candidate point.
pub fn constraint_defects(x: &Vec4, p: &Vec4) -> (f64, f64) {
    ((dot(x, x) - 1.0).abs(), dot(x, p).abs())
}

/// A point `(x, p)` of the constrained phase space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseState {
    pub x: Vec4,
    pub p: Vec4,
}

impl PhaseState {
    pub fn new(x: Vec4, p: Vec4) -> Result<Self> {
        Self::within(x, p, CONSTRAINT_TOL)
    }

    /// Accepts `(x, p)` if both defects are at most `tol`.
    pub fn within(x: Vec4, p: Vec4, tol: f64) -> Result<Self> {
        let (norm_defect, orthogonality_defect) = constraint_defects(&x, &p);
        if norm_defect <= tol && orthogonality_defect <= tol {
            Ok(Self { x, p })
        } else {
            Err(Error::OffConstraintSurface {
                norm_defect,
                orthogonality_defect,
            })
        }
    }

    /// Normalizes `x` and removes the radial part of `p`.
    pub fn projected(x: Vec4, p: Vec4) -> Result<Self> {
        let r = norm(&x);
        if r == 0.0 || !r.is_finite() {
            return Err(Error::ZeroAmbientRadius);
        }
        let x = x.map(|v| v / r);
        let xp = dot(&x, &p);
        let p = std::array::from_fn(|i| p[i] - xp * x[i]);
        Ok(Self { x, p })
    }

    pub fn defects(&self) -> (f64, f64) {
        constraint_defects(&self.x, &self.p)
    }

    /// `H = p²`, equal to `½ J_ij J_ij` on the constraint surface.
    pub fn hamiltonian(&self) -> f64 {
        dot(&self.p, &self.p)
    }

    /// `J_ij = x_i p_j − x_j p_i`, 0-based.
    pub fn angular_momentum(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.x[i] * self.p[j] - self.x[j] * self.p[i]))
    }

    /// Coordinate `z_α`: `x_1..x_4` for `α = 0..4`, `p_1..p_4` for `α = 4..8`.
    fn coordinate(&self, alpha: usize) -> f64 {
        if alpha < 4 {
            self.x[alpha]
        } else {
            self.p[alpha - 4]
        }
    }
}

/// Canonical coordinates of the ambient realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmbientState {
    pub xi: Vec4,
    pub pi: Vec4,
}

/// `x = ξ/|ξ|`, `p = |ξ| π − (π·ξ) ξ/|ξ|`: `|ξ|` times the part of `π`
/// tangent to the sphere through `ξ`.
pub fn ambient_map(a: &AmbientState) -> Result<PhaseState> {
    let r2 = dot(&a.xi, &a.xi);
    if r2 == 0.0 || !r2.is_finite() {
        return Err(Error::ZeroAmbientRadius);
    }
    let r = r2.sqrt();
    let pxi = dot(&a.pi, &a.xi);
    Ok(PhaseState {
        x: a.xi.map(|v| v / r),
        p: std::array::from_fn(|i| r * a.pi[i] - pxi * a.xi[i] / r),
    })
}

/// Ambient states with `|ξ| ∈ [0.5, 2]` and `π` uniform in the unit cube.
pub fn random_ambient_states(count: usize, seed: u64) -> Vec<AmbientState> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let xi = loop {
                let v: Vec4 = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                if (0.5..=2.0).contains(&norm(&v)) {
                    break v;
                }
            };
            let pi = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            AmbientState { xi, pi }
        })
        .collect()
}

/// Which pair of basic variables a Dirac bracket relates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    /// `{x_i, x_j}`
    Xx,
    /// `{p_i, x_j}`
    Px,
    /// `{p_i, p_j}`
    Pp,
}

/// Closed-form Dirac bracket of basic variables, 1-based indices.
pub fn dirac_bracket_basis(state: &PhaseState, kind: BracketKind, i: usize, j: usize) -> Result<f64> {
    let (i, j) = (check_index(i)?, check_index(j)?);
    Ok(match kind {
        BracketKind::Xx => 0.0,
        BracketKind::Px => f64::from(u8::from(i == j)) - state.x[i] * state.x[j],
        BracketKind::Pp => state.angular_momentum()[i][j],
    })
}

/// Dirac bracket `{z_α, z_β}` of phase-space coordinates as a function of the state.
fn coordinate_bracket(state: &PhaseState, alpha: usize, beta: usize) -> f64 {
    let (ia, ib) = (alpha % 4, beta % 4);
    match (alpha < 4, beta < 4) {
        (true, true) => 0.0,
        (false, true) => f64::from(u8::from(ia == ib)) - state.x[ia] * state.x[ib],
        (true, false) => -(f64::from(u8::from(ia == ib)) - state.x[ia] * state.x[ib]),
        (false, false) => state.angular_momentum()[ia][ib],
    }
}

/// `{f, g}_P = Σ ∂f/∂π_i ∂g/∂ξ_i − ∂g/∂π_i ∂f/∂ξ_i` of the pulled-back
/// observables, by central differences of width `step`.
pub fn poisson_oracle(
    f: impl Fn(&PhaseState) -> f64,
    g: impl Fn(&PhaseState) -> f64,
    a: &AmbientState,
    step: f64,
) -> Result<f64> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidParameter(format!("oracle step must be positive, got {step}")));
    }
    ambient_map(a)?;
    let pulled = |obs: &dyn Fn(&PhaseState) -> f64, k: usize, s: f64| -> Result<f64> {
        let mut b = *a;
        if k < 4 {
            b.xi[k] += s;
        } else {
            b.pi[k - 4] += s;
        }
        Ok(obs(&ambient_map(&b)?))
    };
    let grad = |obs: &dyn Fn(&PhaseState) -> f64| -> Result<[f64; 8]> {
        let mut out = [0.0; 8];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = (pulled(obs, k, step)? - pulled(obs, k, -step)?) / (2.0 * step);
        }
        Ok(out)
    };
    let df = grad(&f)?;
    let dg = grad(&g)?;
    Ok((0..4).map(|i| df[4 + i] * dg[i] - dg[4 + i] * df[i]).sum())
}

/// The classical so(4,2) generators at a phase-space point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalGenerators {
    /// `J_ij`, 0-based.
    pub j: [[f64; 4]; 4],
    /// `K_i = M_i5 = J_ik x_k`.
    pub k: Vec4,
    /// `L_i = M_i6 = √H x_i`.
    pub l: Vec4,
    /// `h = M_56 = √H`.
    pub h: f64,
    pub hamiltonian: f64,
}

pub fn classical_generators(state: &PhaseState) -> ClassicalGenerators {
    let j = state.angular_momentum();
    let hamiltonian = 0.5 * j.iter().flatten().map(|v| v * v).sum::<f64>();
    let h = hamiltonian.sqrt();
    ClassicalGenerators {
        j,
        k: std::array::from_fn(|i| dot(&j[i], &state.x)),
        l: state.x.map(|v| h * v),
        h,
        hamiltonian,
    }
}

fn levi_civita_terms() -> &'static [([usize; 6], f64)] {
    static TERMS: OnceLock<Vec<([usize; 6], f64)>> = OnceLock::new();
    TERMS.get_or_init(|| {
        let mut out = Vec::with_capacity(720);
        for code in 0..6usize.pow(6) {
            let idx: [usize; 6] = std::array::from_fn(|k| code / 6usize.pow(5 - k as u32) % 6 + 1);
            let eps = levi_civita6(idx);
            if eps != 0 {
                out.push((idx, eps as f64));
            }
        }
        out
    })
}

impl ClassicalGenerators {
    /// The antisymmetric 6×6 array `M_ab`, 0-based.
    pub fn matrix(&self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for i in 0..4 {
            m[i][..4].copy_from_slice(&self.j[i]);
            m[i][4] = self.k[i];
            m[4][i] = -self.k[i];
            m[i][5] = self.l[i];
            m[5][i] = -self.l[i];
        }
        m[4][5] = self.h;
        m[5][4] = -self.h;
        m
    }

    /// `M_ab` with 1-based labels.
    pub fn m(&self, a: usize, b: usize) -> f64 {
        self.matrix()[a - 1][b - 1]
    }

    /// `A±_j = M_5j ∓ i M_6j = −K_j ± i L_j`, 0-based.
    pub fn ladder(&self, sign: f64) -> [Complex64; 4] {
        std::array::from_fn(|i| Complex64::new(-self.k[i], sign * self.l[i]))
    }

    /// `M^ab M_ab`.
    pub fn casimir(&self) -> f64 {
        let m = self.matrix();
        let mut acc = 0.0;
        for a in 1..=6 {
            for b in 1..=6 {
                acc += (Metric::g(a, a) * Metric::g(b, b)) as f64 * m[a - 1][b - 1].powi(2);
            }
        }
        acc
    }

    /// `T_ab = M_ac M_bd g^cd`, 0-based.
    pub fn tensor_t(&self) -> [[f64; 6]; 6] {
        let m = self.matrix();
        std::array::from_fn(|a| {
            std::array::from_fn(|b| (0..6).map(|c| Metric::g(c + 1, c + 1) as f64 * m[a][c] * m[b][c]).sum())
        })
    }

    /// `R^ab = ε^{abcdef} M_cd M_ef` with `ε^{123456} = +1`, 0-based.
    pub fn tensor_r(&self) -> [[f64; 6]; 6] {
        let m = self.matrix();
        let mut r = [[0.0; 6]; 6];
        for (idx, eps) in levi_civita_terms() {
            let [a, b, c, d, e, f] = idx.map(|v| v - 1);
            r[a][b] += eps * m[c][d] * m[e][f];
        }
        r
    }

    /// Largest entry of `T` and `R`.
    pub fn restrictive_residual(&self) -> f64 {
        self.tensor_t()
            .iter()
            .chain(self.tensor_r().iter())
            .flatten()
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// The same values as 1×1 operators, for evaluating generic algebra expressions.
    pub fn to_generators(&self) -> Generators {
        let m = self.matrix();
        Generators::from_fn(|ix| CMatrix::from_element(1, 1, Complex64::new(m[ix.a() - 1][ix.b() - 1], 0.0)))
            .expect("1x1 generators are consistent")
    }
}

/// Closed-form flow `x(t) = cos(ωt) x₀ + sin(ωt) p₀/√H`,
/// `p(t) = −√H sin(ωt) x₀ + cos(ωt) p₀`, `ω = 2√H`. A state with `H = 0` is fixed.
pub fn analytic_solution(state0: &PhaseState, t: f64) -> PhaseState {
    let hamiltonian = state0.hamiltonian();
    if hamiltonian == 0.0 {
        return *state0;
    }
    let root = hamiltonian.sqrt();
    let (s, c) = (2.0 * root * t).sin_cos();
    PhaseState {
        x: std::array::from_fn(|i| c * state0.x[i] + s * state0.p[i] / root),
        p: std::array::from_fn(|i| -root * s * state0.x[i] + c * state0.p[i]),
    }
}

/// `T = π/√H`, or `None` at the fixed point.
pub fn period(hamiltonian: f64) -> Option<f64> {
    (hamiltonian > 0.0).then(|| std::f64::consts::PI / hamiltonian.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Rk4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
}

/// Sample times `0, dt, 2dt, …` ending exactly at `t_end`.
fn time_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidParameter(format!("end time must be non-negative, got {t_end}")));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times: Vec<f64> = (0..steps).map(|k| k as f64 * dt).collect();
    times.push(t_end);
    Ok(times)
}

fn flow(s: &PhaseState) -> (Vec4, Vec4) {
    let h2 = 2.0 * dot(&s.p, &s.p);
    (s.p.map(|v| 2.0 * v), s.x.map(|v| -h2 * v))
}

fn rk4_step(s: &PhaseState, dt: f64) -> PhaseState {
    let shift = |s: &PhaseState, (dx, dp): (Vec4, Vec4), w: f64| PhaseState {
        x: std::array::from_fn(|i| s.x[i] + w * dx[i]),
        p: std::array::from_fn(|i| s.p[i] + w * dp[i]),
    };
    let k1 = flow(s);
    let k2 = flow(&shift(s, k1, dt / 2.0));
    let k3 = flow(&shift(s, k2, dt / 2.0));
    let k4 = flow(&shift(s, k3, dt));
    let x = std::array::from_fn(|i| s.x[i] + dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]));
    let p = std::array::from_fn(|i| s.p[i] + dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]));
    PhaseState::projected(x, p).unwrap_or(*s)
}

/// Fixed-step RK4 with projection back onto the constraint surface after
/// every step. The fixed point `H = 0` yields a constant trajectory.
pub fn integrate(state0: &PhaseState, t_end: f64, dt: f64) -> Result<Trajectory> {
    let times = time_grid(t_end, dt)?;
    if let Some(period) = period(state0.hamiltonian()) {
        if dt >= period / 10.0 {
            return Err(Error::UnderResolvedStep { dt, period });
        }
    }
    let mut states = Vec::with_capacity(times.len());
    states.push(*state0);
    for w in times.windows(2) {
        let last = states[states.len() - 1];
        states.push(if state0.hamiltonian() == 0.0 { last } else { rk4_step(&last, w[1] - w[0]) });
    }
    Ok(Trajectory {
        method: Method::Rk4,
        times,
        states,
    })
}

/// Samples the closed-form solution on the same grid `integrate` uses.
pub fn analytic_trajectory(state0: &PhaseState, t_end: f64, dt: f64) -> Result<Trajectory> {
    let times = time_grid(t_end, dt)?;
    let states = times.iter().map(|&t| analytic_solution(state0, t)).collect();
    Ok(Trajectory {
        method: Method::Analytic,
        times,
        states,
    })
}

/// One exported sample: time, state, energy and angular momentum.
#[derive(Clone, Copy, Debug, Serialize)]
#[allow(non_snake_case)]
pub struct Sample {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub H: f64,
    pub J12: f64,
    pub J13: f64,
    pub J14: f64,
    pub J23: f64,
    pub J24: f64,
    pub J34: f64,
}

impl Sample {
    pub const HEADER: &'static str = "t,x1,x2,x3,x4,p1,p2,p3,p4,H,J12,J13,J14,J23,J24,J34";

    fn new(t: f64, s: &PhaseState) -> Self {
        let j = s.angular_momentum();
        Self {
            t,
            x1: s.x[0],
            x2: s.x[1],
            x3: s.x[2],
            x4: s.x[3],
            p1: s.p[0],
            p2: s.p[1],
            p3: s.p[2],
            p4: s.p[3],
            H: s.hamiltonian(),
            J12: j[0][1],
            J13: j[0][2],
            J14: j[0][3],
            J23: j[1][2],
            J24: j[1][3],
            J34: j[2][3],
        }
    }

    fn values(&self) -> [f64; 16] {
        [
            self.t, self.x1, self.x2, self.x3, self.x4, self.p1, self.p2, self.p3, self.p4, self.H, self.J12, self.J13,
            self.J14, self.J23, self.J24, self.J34,
        ]
    }
}

#[derive(Serialize)]
struct TrajectoryJson {
    method: Method,
    samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample> + '_ {
        self.times.iter().zip(&self.states).map(|(&t, s)| Sample::new(t, s))
    }

    /// CSV with a header row, floats in shortest round-trip form.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{}", Sample::HEADER)?;
        for s in self.samples() {
            let mut line = String::new();
            for (k, v) in s.values().iter().enumerate() {
                let _ = write!(line, "{}{v:?}", if k == 0 { "" } else { "," });
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TrajectoryJson {
            method: self.method,
            samples: self.samples().collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    /// Largest constraint defect over all samples.
    pub fn constraint_residual(&self) -> f64 {
        self.states
            .iter()
            .map(|s| {
                let (a, b) = s.defects();
                a.max(b)
            })
            .fold(0.0, f64::max)
    }

    /// Largest distance to the closed-form solution from the same initial state,
    /// momenta measured in units of `√H`.
    pub fn deviation_from_analytic(&self) -> f64 {
        let Some(s0) = self.states.first() else {
            return 0.0;
        };
        let scale = s0.hamiltonian().sqrt().max(1.0);
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| {
                let exact = analytic_solution(s0, t);
                let dx = (0..4).map(|i| (s.x[i] - exact.x[i]).abs()).fold(0.0, f64::max);
                let dp = (0..4).map(|i| (s.p[i] - exact.p[i]).abs()).fold(0.0, f64::max);
                dx.max(dp / scale)
            })
            .fold(0.0, f64::max)
    }
}

/// Period from the zero crossings of `x(t)·x₀`, each located on a cubic
/// Hermite interpolant using `d/dt (x·x₀) = 2 p·x₀`. Needs two crossings.
pub fn measured_period(traj: &Trajectory) -> Option<f64> {
    let s0 = traj.states.first()?;
    let value = |s: &PhaseState| dot(&s.x, &s0.x);
    let slope = |s: &PhaseState| 2.0 * dot(&s.p, &s0.x);
    let mut crossings = Vec::new();
    for k in 1..traj.len() {
        let (a, b) = (&traj.states[k - 1], &traj.states[k]);
        let (fa, fb) = (value(a), value(b));
        if fa == 0.0 || fa * fb > 0.0 {
            continue;
        }
        let (t0, t1) = (traj.times[k - 1], traj.times[k]);
        let span = t1 - t0;
        let (ma, mb) = (slope(a) * span, slope(b) * span);
        let hermite = |u: f64| {
            let u2 = u * u;
            let u3 = u2 * u;
            (2.0 * u3 - 3.0 * u2 + 1.0) * fa + (u3 - 2.0 * u2 + u) * ma + (-2.0 * u3 + 3.0 * u2) * fb + (u3 - u2) * mb
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hermite(mid) * fa > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossings.push(t0 + 0.5 * (lo + hi) * span);
    }
    if crossings.len() < 2 {
        return None;
    }
    let n = crossings.len() - 1;
    Some(2.0 * (crossings[n] - crossings[0]) / n as f64)
}

/// Verdict of `check_motion_constants`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MotionReport {
    /// `H = 0`: the trajectory is a fixed point and the ladder quantities vanish.
    Degenerate { constraint_residual: f64 },
    Checked { pass: bool, checks: Vec<CheckResult> },
}

impl MotionReport {
    pub fn pass(&self) -> bool {
        match self {
            MotionReport::Degenerate { .. } => true,
            MotionReport::Checked { pass, .. } => *pass,
        }
    }

    pub fn checks(&self) -> &[CheckResult] {
        match self {
            MotionReport::Degenerate { .. } => &[],
            MotionReport::Checked { checks, .. } => checks,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// See [`crate::verify::override_tolerances`]; a degenerate report has no checks to adjust.
    pub fn override_tolerances(&mut self, overrides: &[(String, f64)]) -> Result<()> {
        match self {
            MotionReport::Degenerate { .. } if overrides.is_empty() => Ok(()),
            MotionReport::Degenerate { .. } => Err(Error::InvalidParameter(
                "tolerance overrides do not apply to a degenerate trajectory".into(),
            )),
            MotionReport::Checked { pass, checks } => {
                crate::verify::override_tolerances(checks, overrides)?;
                *pass = checks.iter().all(|r| r.pass);
                Ok(())
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            MotionReport::Degenerate { constraint_residual } => {
                format!("degenerate fixed point (H = 0): constant trajectory, constraint residual {constraint_residual:.3e}\n")
            }
            MotionReport::Checked { pass, checks } => crate::verify::format_checks(checks, *pass),
        }
    }
}

/// Nonzero 7-point central first-derivative weights for offsets 1, 2, 3.
const STENCIL7: [f64; 3] = [45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0];

/// Largest `|p − ẋ/2|` with `ẋ` from the 7-point stencil on uniformly spaced samples.
fn momentum_velocity_residual(traj: &Trajectory) -> Option<f64> {
    let n = traj.len();
    let mut worst: Option<f64> = None;
    for k in 3..n.saturating_sub(3) {
        let dt = traj.times[k + 1] - traj.times[k];
        let uniform = (k - 3..k + 3).all(|m| ((traj.times[m + 1] - traj.times[m]) - dt).abs() <= 1e-9 * dt);
        if !uniform {
            continue;
        }
        for i in 0..4 {
            let xdot: f64 = STENCIL7
                .iter()
                .enumerate()
                .map(|(o, w)| w * (traj.states[k + o + 1].x[i] - traj.states[k - o - 1].x[i]))
                .sum::<f64>()
                / dt;
            let r = (traj.states[k].p[i] - 0.5 * xdot).abs();
            worst = Some(worst.map_or(r, |w| w.max(r)));
        }
    }
    worst
}

/// Checks the constants of motion along a trajectory:
/// `A±_j(t) e^{∓2it√H}` constant, `A⁺·A⁻ = 2H`, `M^ab M_ab = 0`,
/// `T_ab = R^ab = 0`, `p = ẋ/2`, conservation of `H` and `J`, the period,
/// and for integrated trajectories the distance to the closed form.
pub fn check_motion_constants(traj: &Trajectory) -> MotionReport {
    let Some(s0) = traj.states.first() else {
        return MotionReport::Checked {
            pass: false,
            checks: vec![CheckResult::new("trajectory has samples", f64::NAN, 0.0, None)],
        };
    };
    let h0 = s0.hamiltonian();
    if h0 == 0.0 {
        return MotionReport::Degenerate {
            constraint_residual: traj.constraint_residual(),
        };
    }
    let tol = match traj.method {
        Method::Analytic => TOL_ANALYTIC,
        Method::Rk4 => TOL_RK4,
    };
    let root = h0.sqrt();
    let scale = h0.max(1.0);
    let gens: Vec<_> = traj.states.iter().map(classical_generators).collect();
    let g0 = &gens[0];
    let amp0 = [g0.ladder(1.0), g0.ladder(-1.0)];
    let max_over = |f: &dyn Fn(usize) -> f64| (0..traj.len()).map(f).fold(0.0, f64::max);

    let mut checks = Vec::new();
    let ladder_const = max_over(&|k| {
        let t = traj.times[k];
        [1.0, -1.0]
            .iter()
            .enumerate()
            .map(|(s, &sign)| {
                let phase = Complex64::from_polar(1.0, -sign * 2.0 * t * root);
                let a = gens[k].ladder(sign);
                (0..4).map(|j| (a[j] * phase - amp0[s][j]).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
            / root.max(1.0)
    });
    checks.push(CheckResult::new("A±_j(t) exp(∓2it√H) constant", ladder_const, tol, None));
    let amplitude = max_over(&|k| {
        let (ap, am) = (gens[k].ladder(1.0), gens[k].ladder(-1.0));
        let prod: Complex64 = (0..4).map(|j| ap[j] * am[j]).sum();
        (prod - 2.0 * gens[k].hamiltonian).norm() / scale
    });
    checks.push(CheckResult::new("A+·A- = 2H", amplitude, tol, None));
    let casimir = max_over(&|k| gens[k].casimir().abs() / scale);
    checks.push(CheckResult::new("M^ab M_ab = 0", casimir, tol, None));
    let restrictive = max_over(&|k| {
        let g = &gens[k];
        let t = g.tensor_t().iter().flatten().fold(0.0, |a: f64, v| a.max(v.abs()));
        let r = g.tensor_r().iter().flatten().fold(0.0, |a: f64, v| a.max(v.abs()));
        t.max(r) / scale
    });
    checks.push(CheckResult::new("T_ab = 0 and R^ab = 0", restrictive, tol, None));
    if let Some(r) = momentum_velocity_residual(traj) {
        checks.push(CheckResult::new("p = xdot/2 (7-point stencil)", r / root.max(1.0), TOL_RK4, None));
    }
    let energy = max_over(&|k| (traj.states[k].hamiltonian() - h0).abs() / scale);
    checks.push(CheckResult::new("H conserved", energy, TOL_DRIFT.min(tol), None));
    let angular = max_over(&|k| {
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (gens[k].j[i][j] - g0.j[i][j]).abs())
            .fold(0.0, f64::max)
            / root.max(1.0)
    });
    checks.push(CheckResult::new("J_ij conserved", angular, TOL_DRIFT.min(tol), None));
    checks.push(CheckResult::new("constraints x·x = 1, x·p = 0", traj.constraint_residual(), CONSTRAINT_TOL, None));
    if let Some(measured) = measured_period(traj) {
        let exact = std::f64::consts::PI / root;
        checks.push(CheckResult::new("measured period = π/√H", (measured - exact).abs() / exact, TOL_RK4, None));
    }
    if traj.method == Method::Rk4 {
        checks.push(CheckResult::new("RK4 vs closed-form solution", traj.deviation_from_analytic(), TOL_RK4, None));
    }
    let pass = checks.iter().all(|r| r.pass);
    MotionReport::Checked { pass, checks }
}

/// Report of the bracket-oracle suite.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub states: usize,
    #[serde(serialize_with = "crate::verify::fixed17")]
    pub step: f64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn override_tolerances(&mut self, overrides: &[(String, f64)]) -> Result<()> {
        crate::verify::override_tolerances(&mut self.checks, overrides)?;
        self.pass = self.checks.iter().all(|r| r.pass);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        format!(
            "{} ambient states, step {:e}\n{}",
            self.states,
            self.step,
            crate::verify::format_checks(&self.checks, self.pass)
        )
    }
}

/// Compares finite-difference Poisson brackets of the ambient realization
/// with the closed-form Dirac brackets and the classical so(4,2) relations.
pub fn check_bracket_oracle(states: &[AmbientState], step: f64) -> Result<OracleReport> {
    let mut worst = [0.0f64; 9];
    for a in states {
        let s = ambient_map(a)?;
        let coord = |alpha: usize| move |st: &PhaseState| st.coordinate(alpha);
        for alpha in 0..8 {
            for beta in 0..8 {
                let fd = poisson_oracle(coord(alpha), coord(beta), a, step)?;
                let slot = match (alpha < 4, beta < 4) {
                    (true, true) => 0,
                    (false, true) => 1,
                    (true, false) => 1,
                    (false, false) => 2,
                };
                worst[slot] = worst[slot].max((fd - coordinate_bracket(&s, alpha, beta)).abs());
                let rev = poisson_oracle(coord(beta), coord(alpha), a, step)?;
                worst[3] = worst[3].max((fd + rev).abs());
            }
        }
        // so(4) covariance {J_ik, x_l} = δ_lk x_i − δ_il x_k and {J_ik, p_l} = δ_lk p_i − δ_il p_k
        for i in 0..4 {
            for k in 0..4 {
                let jik = move |st: &PhaseState| st.angular_momentum()[i][k];
                for l in 0..4 {
                    let d = |u: usize, v: usize| f64::from(u8::from(u == v));
                    let fx = poisson_oracle(jik, coord(l), a, step)?;
                    let fp = poisson_oracle(jik, coord(4 + l), a, step)?;
                    let ex = d(l, k) * s.x[i] - d(i, l) * s.x[k];
                    let ep = d(l, k) * s.p[i] - d(i, l) * s.p[k];
                    worst[4] = worst[4].max((fx - ex).abs()).max((fp - ep).abs());
                }
            }
        }
        // Jacobi identity: inner brackets in closed form, outer by the oracle
        for u in 0..8 {
            for v in (u + 1)..8 {
                for w in (v + 1)..8 {
                    let outer = |p: usize, q: usize, r: usize| {
                        poisson_oracle(move |st: &PhaseState| coordinate_bracket(st, p, q), coord(r), a, step)
                    };
                    let jac = outer(u, v, w)? + outer(v, w, u)? + outer(w, u, v)?;
                    worst[5] = worst[5].max(jac.abs());
                }
            }
        }
        let gens = classical_generators(&s).to_generators();
        for ab in GeneratorIndex::all() {
            for cd in GeneratorIndex::all().filter(|cd| *cd > ab) {
                let m = |ix: GeneratorIndex| move |st: &PhaseState| classical_generators(st).m(ix.a(), ix.b());
                let fd = poisson_oracle(m(ab), m(cd), a, step)?;
                let exact = commutator_rhs(ab, cd, BracketMode::Classical).evaluate(&gens)[(0, 0)].re;
                worst[6] = worst[6].max((fd - exact).abs());
            }
        }
        // {H, A±_j} = ±2i√H A±_j
        let g = classical_generators(&s);
        for sign in [1.0, -1.0] {
            let a_exact = g.ladder(sign);
            for j in 0..4 {
                let hamiltonian = |st: &PhaseState| st.hamiltonian();
                let re = poisson_oracle(hamiltonian, move |st: &PhaseState| classical_generators(st).ladder(sign)[j].re, a, step)?;
                let im = poisson_oracle(hamiltonian, move |st: &PhaseState| classical_generators(st).ladder(sign)[j].im, a, step)?;
                let expected = Complex64::new(0.0, sign * 2.0 * g.h) * a_exact[j];
                worst[7] = worst[7].max((Complex64::new(re, im) - expected).norm());
            }
        }
        worst[8] = worst[8].max(g.restrictive_residual()).max(g.casimir().abs());
    }
    let names = [
        "{x_i,x_j}_D = 0 (oracle)",
        "{p_i,x_j}_D = δ_ij - x_i x_j (oracle)",
        "{p_i,p_j}_D = J_ij (oracle)",
        "bracket antisymmetry (oracle)",
        "{J_ik,x_l}, {J_ik,p_l} so(4) covariance (oracle)",
        "Jacobi identity on x, p (oracle)",
        "so(4,2) Dirac brackets of M_ab (oracle)",
        "{H, A±_j} = ±2i√H A±_j (oracle)",
    ];
    let mut checks: Vec<_> = names
        .iter()
        .zip(worst)
        .map(|(name, r)| CheckResult::new(*name, r, ORACLE_TOL, None))
        .collect();
    checks.push(CheckResult::new("T_ab = 0, R^ab = 0, M^ab M_ab = 0", worst[8], CONSTRAINT_TOL, None));
    let pass = checks.iter().all(|r| r.pass);
    Ok(OracleReport {
        states: states.len(),
        step,
        pass,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle() -> PhaseState {
        PhaseState::new([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn dirac_basis_examples() {
        let s = circle();
        assert_eq!(dirac_bracket_basis(&s, BracketKind::Xx, 2, 3).unwrap(), 0.0);
        assert_eq!(dirac_bracket_basis(&s, BracketKind::Px, 1, 1).unwrap(), 0.0);
        assert_eq!(dirac_bracket_basis(&s, BracketKind::Px, 2, 2).unwrap(), 1.0);
        assert_eq!(dirac_bracket_basis(&s, BracketKind::Pp, 1, 2).unwrap(), 1.0);
        assert!(matches!(dirac_bracket_basis(&s, BracketKind::Pp, 0, 2), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn ambient_map_examples() {
        let s = ambient_map(&AmbientState { xi: [2.0, 0.0, 0.0, 0.0], pi: [0.0, 3.0, 0.0, 0.0] }).unwrap();
        assert_eq!(s.x, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.p, [0.0, 6.0, 0.0, 0.0]);
        let radial = ambient_map(&AmbientState { xi: [1.0, 0.0, 0.0, 0.0], pi: [5.0, 0.0, 0.0, 0.0] }).unwrap();
        assert_eq!(radial.p, [0.0; 4]);
        assert!(matches!(ambient_map(&AmbientState { xi: [0.0; 4], pi: [1.0; 4] }), Err(Error::ZeroAmbientRadius)));
        for a in random_ambient_states(50, 3) {
            let (n, o) = ambient_map(&a).unwrap().defects();
            assert!(n < 1e-14 && o < 1e-14, "{n:e} {o:e} {a:?}");
        }
    }

    #[test]
    fn oracle_examples() {
        let a = random_ambient_states(1, 11)[0];
        let x1 = |s: &PhaseState| s.x[0];
        let x2 = |s: &PhaseState| s.x[1];
        let p1 = |s: &PhaseState| s.p[0];
        let p2 = |s: &PhaseState| s.p[1];
        assert!(poisson_oracle(x1, x2, &a, ORACLE_STEP).unwrap().abs() < 1e-8);
        let j12 = ambient_map(&a).unwrap().angular_momentum()[0][1];
        assert!((poisson_oracle(p1, p2, &a, ORACLE_STEP).unwrap() - j12).abs() < 1e-8);
        let on_axis = AmbientState { xi: [1.0, 0.0, 0.0, 0.0], pi: [0.3, -0.2, 0.5, 0.1] };
        assert!(poisson_oracle(p1, x1, &on_axis, ORACLE_STEP).unwrap().abs() < 1e-8);
        assert!(poisson_oracle(p1, x1, &on_axis, 0.0).is_err());
    }

    #[test]
    fn generators_on_the_unit_circle() {
        let g = classical_generators(&circle());
        assert_eq!(g.hamiltonian, 1.0);
        assert_eq!(g.h, 1.0);
        assert_eq!(g.j[0][1], 1.0);
        assert_eq!(g.k, [0.0, -1.0, 0.0, 0.0]);
        assert_eq!(g.l, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.casimir(), 0.0);
        assert_eq!(g.restrictive_residual(), 0.0);
        let (ap, am) = (g.ladder(1.0), g.ladder(-1.0));
        let amp: Complex64 = (0..4).map(|j| ap[j] * am[j]).sum();
        assert_eq!(amp, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn fixed_point_generators_vanish() {
        let g = classical_generators(&PhaseState::new([0.0, 0.0, 1.0, 0.0], [0.0; 4]).unwrap());
        assert_eq!((g.k, g.l, g.h), ([0.0; 4], [0.0; 4], 0.0));
    }

    #[test]
    fn analytic_solution_examples() {
        let s0 = circle();
        let half = analytic_solution(&s0, PI / 2.0);
        for i in 0..4 {
            assert!((half.x[i] - [-1.0, 0.0, 0.0, 0.0][i]).abs() < 1e-15);
            assert!((half.p[i] - [0.0, -1.0, 0.0, 0.0][i]).abs() < 1e-15);
        }
        assert_eq!(analytic_solution(&s0, 0.0), s0);
        let fast = PhaseState::new([0.0, 0.6, 0.8, 0.0], [1.5, 0.0, 0.0, -0.5]).unwrap();
        let back = analytic_solution(&fast, period(fast.hamiltonian()).unwrap());
        for i in 0..4 {
            assert!((back.x[i] - fast.x[i]).abs() < 1e-12 && (back.p[i] - fast.p[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn ten_periods_of_rk4() {
        let s0 = circle();
        let t = period(1.0).unwrap();
        let traj = integrate(&s0, 10.0 * t, t / 1000.0).unwrap();
        let report = check_motion_constants(&traj);
        assert!(report.pass(), "{}", report.to_text());
        assert!(traj.deviation_from_analytic() < 1e-6);
        let exact = check_motion_constants(&analytic_trajectory(&s0, 10.0 * t, t / 1000.0).unwrap());
        assert!(exact.pass(), "{}", exact.to_text());
    }

    #[test]
    fn frequency_grows_with_energy() {
        let t1 = measured_period(&analytic_trajectory(&circle(), 10.0, 1e-3).unwrap()).unwrap();
        let fast = PhaseState::new([1.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0]).unwrap();
        let t2 = measured_period(&integrate(&fast, 10.0, 1e-3).unwrap()).unwrap();
        assert!((t1 - PI).abs() / PI < 1e-6);
        assert!((t2 / t1 - 0.5).abs() < 1e-6);
        let double = PhaseState::new([1.0, 0.0, 0.0, 0.0], [0.0, 2f64.sqrt(), 0.0, 0.0]).unwrap();
        let t3 = measured_period(&analytic_trajectory(&double, 10.0, 1e-3).unwrap()).unwrap();
        assert!((t1 / t3 - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn integrate_rejects_bad_steps() {
        let s0 = circle();
        assert!(matches!(integrate(&s0, 1.0, PI / 10.0), Err(Error::UnderResolvedStep { .. })));
        assert!(matches!(integrate(&s0, 1.0, 0.0), Err(Error::InvalidParameter(_))));
        let still = PhaseState::new([1.0, 0.0, 0.0, 0.0], [0.0; 4]).unwrap();
        let traj = integrate(&still, 1.0, 0.1).unwrap();
        assert!(traj.states.iter().all(|s| *s == still));
        assert!(matches!(check_motion_constants(&traj), MotionReport::Degenerate { .. }));
    }

    #[test]
    fn time_grid_ends_at_t_end() {
        let g = time_grid(1.0, 0.3).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(time_grid(0.9, 0.3).unwrap().len(), 4);
        assert_eq!(time_grid(0.0, 0.3).unwrap(), vec![0.0]);
    }

    #[test]
    fn off_surface_rejected_and_projected() {
        let x = [1.0, 1e-6, 0.0, 0.0];
        let p = [0.1, 1.0, 0.0, 0.0];
        assert!(matches!(PhaseState::new(x, p), Err(Error::OffConstraintSurface { .. })));
        let s = PhaseState::projected(x, p).unwrap();
        let (n, o) = s.defects();
        assert!(n < 1e-15 && o < 1e-15);
    }

    #[test]
    fn csv_round_trips() {
        let traj = analytic_trajectory(&circle(), 0.01, 0.005).unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), Sample::HEADER);
        let row: Vec<f64> = lines.nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row.len(), 16);
        assert_eq!(row[0], 0.005);
        assert_eq!(row[1], traj.states[1].x[0]);
        let json: serde_json::Value = serde_json::from_str(&traj.to_json().unwrap()).unwrap();
        assert_eq!(json["method"], "analytic");
        assert_eq!(json["samples"][2]["H"].as_f64().unwrap(), traj.states[2].hamiltonian());
    }

    #[test]
    fn oracle_suite_on_twenty_states() {
        let report = check_bracket_oracle(&random_ambient_states(20, 7), ORACLE_STEP).unwrap();
        assert!(report.pass, "{}", report.to_text());
    }
}
