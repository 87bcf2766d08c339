//! Numerical verification of the operator identities on a truncated representation.
//!
//! Every check compares two matrices with the scale-free residual
//! `‖L − R‖_F / max(1, ‖L‖_F, ‖R‖_F)` on the interior levels, i.e. the
//! leading block of levels `≤ N − k`. A product of `w` level-shifting
//! factors is unaffected by the truncation on levels `≤ N − ⌊w/2⌋`, and each
//! check picks `k` at least that large.

use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::algebra::{
    self, commutator_rhs, expanded, levi_civita, tensor_covariance_residual, BracketMode, GeneratorIndex,
    Generators, Metric, ProductTable,
};
use crate::error::{Error, Result};
use crate::hilbert::ComplexPoly;
use crate::linalg::{self, anticommutator, c, commutator, diag_mul, leading_block, mul, mul_diag, CMatrix, I};
use crate::operators::{f_gamma, Representation};

/// Identities quadratic in the operators.
pub const TOL_ALGEBRA: f64 = 1e-10;
/// Identities involving chains of `f(h)`.
pub const TOL_F_CHAIN: f64 = 1e-8;
/// The scalar recursion `f(h) f(h+1) = 2h + 1`, relative.
pub const TOL_F_SCALAR: f64 = 1e-12;
/// Consistency of two evaluations of the same expression.
pub const TOL_ROUNDOFF: f64 = 1e-12;

pub(crate) fn fixed17<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    } else {
        s.serialize_none()
    }
}

fn fixed17_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => fixed17(x, s),
        None => s.serialize_none(),
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    #[serde(rename = "check")]
    pub name: String,
    #[serde(serialize_with = "fixed17")]
    pub residual: f64,
    #[serde(serialize_with = "fixed17")]
    pub tolerance: f64,
    pub pass: bool,
    /// Inclusive level range the residual was evaluated on.
    pub levels: Option<[usize; 2]>,
    #[serde(serialize_with = "fixed17_opt")]
    pub seconds: Option<f64>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, levels: Option<[usize; 2]>) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            levels,
            seconds: None,
        }
    }
}

/// A configuration that must violate an identity for the check to have power.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    #[serde(rename = "check")]
    pub name: String,
    #[serde(serialize_with = "fixed17")]
    pub violation: f64,
    #[serde(serialize_with = "fixed17")]
    pub threshold: f64,
    pub detected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub max_level: usize,
    pub dimension: usize,
    #[serde(serialize_with = "fixed17")]
    pub c: f64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|r| !r.pass)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// See [`override_tolerances`]; the overall verdict is recomputed.
    pub fn override_tolerances(&mut self, overrides: &[(String, f64)]) -> Result<()> {
        override_tolerances(&mut self.checks, overrides)?;
        self.pass = self.checks.iter().all(|r| r.pass) && self.counterexamples.iter().all(|x| x.detected);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("N = {}, dimension = {}, c = {}\n", self.max_level, self.dimension, self.c);
        for r in &self.checks {
            out += &format_check(r);
        }
        for x in &self.counterexamples {
            let _ = writeln!(
                out,
                "{} {:<58} violation {:.3e} (threshold {:.0e})",
                if x.detected { "PASS" } else { "FAIL" },
                x.name,
                x.violation,
                x.threshold
            );
        }
        let failed = self.failures().count() + self.counterexamples.iter().filter(|x| !x.detected).count();
        let _ = writeln!(out, "{}: {} checks, {failed} failed", if self.pass { "PASS" } else { "FAIL" }, self.checks.len() + self.counterexamples.len());
        out
    }
}

/// Replaces the tolerance of every check whose name starts with a key of
/// `overrides` and recomputes its verdict. Unknown keys are an error.
pub fn override_tolerances(checks: &mut [CheckResult], overrides: &[(String, f64)]) -> Result<()> {
    for (key, tol) in overrides {
        if tol.is_nan() || *tol < 0.0 {
            return Err(Error::InvalidParameter(format!("tolerance for `{key}` must be non-negative, got {tol}")));
        }
        let mut hit = false;
        for r in checks.iter_mut().filter(|r| r.name.starts_with(key.as_str())) {
            r.tolerance = *tol;
            r.pass = r.residual <= *tol;
            hit = true;
        }
        if !hit {
            return Err(Error::InvalidParameter(format!("no check named `{key}`")));
        }
    }
    Ok(())
}

/// One line `PASS|FAIL name residual … (tol …, levels …)`.
pub fn format_check(r: &CheckResult) -> String {
    let levels = r.levels.map_or("-".to_string(), |[a, b]| format!("{a}..={b}"));
    format!(
        "{} {:<58} residual {:.3e} (tol {:.0e}, levels {levels})\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.name,
        r.residual,
        r.tolerance
    )
}

/// Lines for each check followed by a summary line.
pub fn format_checks(checks: &[CheckResult], pass: bool) -> String {
    let mut out: String = checks.iter().map(format_check).collect();
    let failed = checks.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{}: {} checks, {failed} failed", if pass { "PASS" } else { "FAIL" }, checks.len());
    out
}

/// Collects results and times each evaluation.
struct Recorder {
    out: Vec<CheckResult>,
}

impl Recorder {
    fn new() -> Self {
        Self { out: Vec::new() }
    }

    fn run(&mut self, f: impl FnOnce() -> CheckResult) {
        let start = Instant::now();
        let mut r = f();
        r.seconds = Some(start.elapsed().as_secs_f64());
        self.out.push(r);
    }

    fn finish(self) -> Vec<CheckResult> {
        self.out
    }
}

/// Residual of `lhs = rhs` on the interior for words with `shifts` level changes.
fn interior(rep: &Representation, name: impl Into<String>, lhs: &CMatrix, rhs: &CMatrix, tol: f64, shifts: usize) -> CheckResult {
    worst(rep, name, [(lhs.clone(), rhs.clone())], tol, shifts)
}

/// Largest residual over a family of identities.
fn worst(
    rep: &Representation,
    name: impl Into<String>,
    pairs: impl IntoIterator<Item = (CMatrix, CMatrix)>,
    tol: f64,
    shifts: usize,
) -> CheckResult {
    let Some(top) = rep.layout().interior(shifts) else {
        return CheckResult::new(name, f64::NAN, tol, None);
    };
    let m = rep.layout().dim_through(top);
    let r = pairs
        .into_iter()
        .map(|(l, r)| linalg::relative_residual(&leading_block(&l, m), &leading_block(&r, m)))
        .fold(0.0, f64::max);
    CheckResult::new(name, r, tol, Some([0, top]))
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn sum4(f: impl Fn(usize) -> CMatrix) -> CMatrix {
    (2..=4).fold(f(1), |acc, i| acc + f(i))
}

/// The 105 commutators `[M_ab, M_cd]` against the structure constants, plus
/// the ladder relations.
pub fn check_commutators(rep: &Representation, products: &ProductTable) -> Vec<CheckResult> {
    let gens = products.generators();
    let mut rec = Recorder::new();
    let all: Vec<GeneratorIndex> = GeneratorIndex::all().collect();
    for (n, &ab) in all.iter().enumerate() {
        for &cd in &all[n + 1..] {
            rec.run(|| {
                let lhs = products.commutator(ab.a(), ab.b(), cd.a(), cd.b());
                let rhs = commutator_rhs(ab, cd, BracketMode::Quantum).evaluate(gens);
                interior(rep, format!("[{ab},{cd}]"), &lhs, &rhs, TOL_ALGEBRA, 2)
            });
        }
    }
    let ap = |i| rep.a_plus(i).matrix();
    let am = |i| rep.a_minus(i).matrix();
    let h = rep.h().matrix();
    let j = |a, b| rep.j(a, b).matrix();
    let pairs = || (1..=4).flat_map(|a| (1..=4).map(move |b| (a, b)));
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(ap(a), am(b)), j(a, b) * c(-2.0) * I - h * c(2.0 * delta(a, b))));
        worst(rep, "[A+_i,A-_j] = -2iJ_ij - 2d_ij h", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(am(a), ap(b)), h * c(2.0 * delta(a, b)) + j(b, a) * c(2.0) * I));
        worst(rep, "[A-_i,A+_j] = 2h d_ij + 2iJ_ji", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(ap(a), ap(b)), linalg::zeros(rep.dim())));
        worst(rep, "[A+_i,A+_j] = 0", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(am(a), am(b)), linalg::zeros(rep.dim())));
        worst(rep, "[A-_i,A-_j] = 0", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = (1..=4).flat_map(|i| [(commutator(h, ap(i)), ap(i).clone()), (commutator(h, am(i)), -am(i).clone())]);
        worst(rep, "[h,A+-_i] = +-A+-_i", fam, TOL_ALGEBRA, 1)
    });
    rec.finish()
}

/// The restrictive tensors `T̃_ab` (with shift `c`) and `R^ab`, their
/// component formulas, and the derived quadratic relations.
pub fn check_restrictive(rep: &Representation, products: &ProductTable, c_shift: f64) -> Vec<CheckResult> {
    let gens = products.generators();
    let zero = linalg::zeros(rep.dim());
    let mut rec = Recorder::new();
    let t = algebra::tensor_t_from(products, c_shift);
    let r = algebra::tensor_r_from(products);
    for a in 1..=6 {
        for b in a..=6 {
            rec.run(|| interior(rep, format!("T~{a}{b} = 0"), t.get(a, b), &zero, TOL_ALGEBRA, 2));
        }
    }
    for a in 1..=6 {
        for b in (a + 1)..=6 {
            rec.run(|| interior(rep, format!("R{a}{b} = 0"), r.get(a, b), &zero, TOL_ALGEBRA, 2));
        }
    }
    let n = rep.max_level();
    // both sides are sums of many quadratic terms that cancel; compare on the scale of those terms
    let quad_scale = GeneratorIndex::all()
        .map(|ix| linalg::frobenius(gens.get(ix)).powi(2))
        .sum::<f64>()
        .max(1.0);
    rec.run(|| {
        let res = (1..=6)
            .flat_map(|a| (a..=6).map(move |b| (a, b)))
            .map(|(a, b)| linalg::frobenius(&(t.get(a, b) - expanded::t_component(gens, c_shift, a, b))))
            .fold(0.0, f64::max);
        CheckResult::new("T~ contraction = component formulas", res / quad_scale, TOL_ROUNDOFF, Some([0, n]))
    });
    rec.run(|| {
        let res = (1..=6)
            .flat_map(|a| ((a + 1)..=6).map(move |b| (a, b)))
            .map(|(a, b)| linalg::frobenius(&(r.get(a, b) - expanded::r_component(gens, a, b))))
            .fold(0.0, f64::max);
        CheckResult::new("R contraction = component formulas", res / quad_scale, TOL_ROUNDOFF, Some([0, n]))
    });

    let j = |a, b| rep.j(a, b).matrix();
    let k = |i| rep.k(i).matrix();
    let l = |i| rep.l(i).matrix();
    let h = rep.h().matrix();
    let id = linalg::identity(rep.dim());
    let h2 = mul(h, h);
    let k2 = sum4(|i| mul(k(i), k(i)));
    let l2 = sum4(|i| mul(l(i), l(i)));
    rec.run(|| {
        let fam = (1..=4).map(|i| (sum4(|m| anticommutator(j(i, m), l(m))) - anticommutator(h, k(i)), zero.clone()));
        worst(rep, "J_ik L_k + L_k J_ik - hK_i - K_i h = 0", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| (sum4(|m| anticommutator(j(i, m), k(m))) + anticommutator(h, l(i)), zero.clone()));
        worst(rep, "J_ik K_k + K_k J_ik + hL_i + L_i h = 0", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = (1..=4).map(|m| (sum4(|i| commutator(l(i), j(i, m))), l(m) * c(-3.0) * I));
        worst(rep, "[L_i,J_ik] = -3iL_k", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let lhs = &k2 - &l2 * c(3.0) + &h2 * c(2.0) + &id * c(2.0);
        interior(rep, "K^2 - 3L^2 + 2h^2 + 2 = 0", &lhs, &zero, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let lhs = &l2 - &k2 * c(3.0) + &h2 * c(2.0) + &id * c(2.0);
        interior(rep, "L^2 - 3K^2 + 2h^2 + 2 = 0", &lhs, &zero, TOL_ALGEBRA, 2)
    });
    rec.run(|| interior(rep, "K^2 = h^2 + 1", &k2, &(&h2 + &id), TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "L^2 = h^2 + 1", &l2, &(&h2 + &id), TOL_ALGEBRA, 2));
    rec.run(|| {
        let lhs = sum4(|i| anticommutator(k(i), l(i)));
        interior(rep, "K.L + L.K = 0", &lhs, &zero, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = (1..=4).flat_map(|a| (a..=4).map(move |b| (a, b))).map(|(a, b)| {
            let lhs = anticommutator(l(a), l(b)) + anticommutator(k(a), k(b))
                - sum4(|m| anticommutator(j(a, m), j(b, m)))
                - &id * c(2.0 * delta(a, b));
            (lhs, zero.clone())
        });
        worst(rep, "{L_i,L_j} + {K_i,K_j} - {J_ik,J_jk} - 2d_ij = 0", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let lhs = rep.hamiltonian().matrix();
        interior(rep, "1/2 J_ik J_ik = h^2 - 1", lhs, &(&h2 - &id), TOL_ALGEBRA, 0)
    });
    rec.run(|| {
        let Some(top) = rep.layout().interior(2) else {
            return CheckResult::new("T~ covariance", f64::NAN, TOL_ALGEBRA, None);
        };
        let res = tensor_covariance_residual(gens, &t, Some(rep.layout().dim_through(top)));
        CheckResult::new("T~ covariance", res, TOL_ALGEBRA, Some([0, top]))
    });
    rec.finish()
}

/// `C₂ = M_ab M^ab = −6`, `R^ab g_ab = 0` and `C₃ = 0` in symmetrized ordering.
pub fn check_casimirs(rep: &Representation, products: &ProductTable) -> Vec<CheckResult> {
    let gens = products.generators();
    let dim = rep.dim();
    let g = |a: usize| Metric::g(a, a) as f64;
    let mut rec = Recorder::new();
    rec.run(|| {
        let mut c2 = linalg::zeros(dim);
        for ab in GeneratorIndex::all() {
            let (a, b) = (ab.a(), ab.b());
            products.accumulate(&mut c2, c(2.0 * g(a) * g(b)), a, b, a, b);
        }
        interior(rep, "C2 = M_ab M^ab = -6", &c2, &(linalg::identity(dim) * c(-6.0)), TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let r = algebra::tensor_r_from(products);
        let trace = (1..=6).fold(linalg::zeros(dim), |acc, a| acc + r.get(a, a) * c(g(a)));
        interior(rep, "R^ab g_ab = 0", &trace, &linalg::zeros(dim), TOL_ALGEBRA, 2)
    });
    // The ordered product equals ½{M_ab, M^bc} M_c^a + ½[M_ab, M^bc] M_c^a. The
    // first part is the symmetrized C₃ = T_ab M^ab; the second reduces to 2i C₂.
    let (literal, swapped) = cubic_orderings(gens, products);
    rec.run(|| {
        let sym = (&literal + &swapped) * c(0.5);
        interior(rep, "C3 = 1/2 {M_ab,M^bc} M_c^a = 0", &sym, &linalg::zeros(dim), TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let target = linalg::identity(dim) * Complex64::new(0.0, -12.0);
        interior(rep, "M_ab M^bc M_c^a = 2i C2 = -12i", &literal, &target, TOL_ALGEBRA, 2)
    });
    rec.finish()
}

/// `Σ M_ab M^bc M_c^a` and `Σ M^bc M_ab M_c^a`.
fn cubic_orderings(gens: &Generators, products: &ProductTable) -> (CMatrix, CMatrix) {
    let dim = gens.dim();
    let g = |a: usize| Metric::g(a, a) as f64;
    let mut literal = linalg::zeros(dim);
    let mut swapped = linalg::zeros(dim);
    for a in 1..=6 {
        for x in 1..=6 {
            if a == x {
                continue;
            }
            // literal: fix (a, b = x), sum c in M_bc M_ca
            let mut right = linalg::zeros(dim);
            for cc in 1..=6 {
                products.accumulate(&mut right, c(g(cc) * g(a)), x, cc, cc, a);
            }
            literal += mul(&gens.m(a, x), &right) * c(g(x));
            // swapped: fix (a, c = x), sum b in M_bc M_ab
            let mut left = linalg::zeros(dim);
            for b in 1..=6 {
                products.accumulate(&mut left, c(g(b) * g(a)), b, x, a, b);
            }
            swapped += mul(&left, &gens.m(x, a)) * c(g(x));
        }
    }
    (literal, swapped)
}

/// One row of the measured spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub level: usize,
    pub exact: f64,
    pub degeneracy: usize,
    pub multiplicity: usize,
    pub measured: f64,
    pub residual: f64,
}

/// Eigenvalues of `H`, ascending.
pub fn hamiltonian_eigenvalues(rep: &Representation) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(rep.hamiltonian().matrix().clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver("Hermitian eigendecomposition of H did not converge".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Groups the eigenvalues of `H` by nearest level `n` of `λ = n(n+2)`.
pub fn spectrum_table(rep: &Representation) -> Result<Vec<SpectrumRow>> {
    let values = hamiltonian_eigenvalues(rep)?;
    let mut rows: Vec<SpectrumRow> = (0..=rep.max_level())
        .map(|n| SpectrumRow {
            level: n,
            exact: (n * (n + 2)) as f64,
            degeneracy: (n + 1) * (n + 1),
            multiplicity: 0,
            measured: 0.0,
            residual: 0.0,
        })
        .collect();
    let mut stray = 0.0_f64;
    for v in values {
        let n = ((v.max(-1.0) + 1.0).sqrt() - 1.0).round() as usize;
        match rows.get_mut(n) {
            Some(row) => {
                row.multiplicity += 1;
                row.measured += v;
                row.residual = row.residual.max((v - row.exact).abs());
            }
            None => stray = stray.max(v),
        }
    }
    for row in &mut rows {
        if row.multiplicity > 0 {
            row.measured /= row.multiplicity as f64;
        }
    }
    if stray != 0.0 {
        return Err(Error::Eigensolver(format!("eigenvalue {stray} lies above the truncated spectrum")));
    }
    Ok(rows)
}

/// Spectrum and degeneracies of `H`, and the su(2) ⊕ su(2) Casimirs per level.
pub fn check_spectrum(rep: &Representation) -> Result<Vec<CheckResult>> {
    let n = rep.max_level();
    let mut out = Vec::new();
    let start = Instant::now();
    let rows = spectrum_table(rep)?;
    let residual = if rows.iter().all(|r| r.multiplicity == r.degeneracy) {
        rows.iter().map(|r| r.residual / r.exact.max(1.0)).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let mut r = CheckResult::new("spectrum of H = {n(n+2)} with multiplicity (n+1)^2", residual, TOL_ALGEBRA, Some([0, n]));
    r.seconds = Some(start.elapsed().as_secs_f64());
    out.push(r);

    let start = Instant::now();
    let (m2, n2) = rep.su2_casimirs();
    let mut res = 0.0_f64;
    for level in 0..=n {
        let j = level as f64 / 2.0;
        let d = rep.layout().range(level).len();
        let target = linalg::identity(d) * c(j * (j + 1.0));
        for cas in [&m2, &n2] {
            res = res.max(linalg::relative_residual(&rep.layout().block(cas, level, level), &target));
        }
        let off = linalg::frobenius(&(&m2 - &n2));
        res = res.max(off / linalg::frobenius(&m2).max(1.0));
    }
    let mut r = CheckResult::new("su(2)+su(2): M^2 = N^2 = j(j+1), j = n/2", res, TOL_ALGEBRA, Some([0, n]));
    r.seconds = Some(start.elapsed().as_secs_f64());
    out.push(r);
    Ok(out)
}

/// `max_h |f(h) f(h+1) − (2h+1)| / (2h+1)` for `h = 1..=h_max`.
pub fn check_f_recursion(h_max: usize) -> CheckResult {
    let res = (1..=h_max)
        .map(|h| {
            let h = h as f64;
            (f_gamma(h) * f_gamma(h + 1.0) - (2.0 * h + 1.0)).abs() / (2.0 * h + 1.0)
        })
        .fold(0.0, f64::max);
    CheckResult::new(format!("f(h) f(h+1) = 2h+1, h = 1..{h_max}"), res, TOL_F_SCALAR, None)
}

/// Matrix identities that express `L` and `P` through `f(h)`.
pub fn check_f_identities(rep: &Representation) -> Vec<CheckResult> {
    let f = rep.diagonal_values(f_gamma);
    let f_inv = rep.diagonal_values(|h| 1.0 / f_gamma(h));
    let sqrt = rep.diagonal_values(f64::sqrt);
    let f_over_sqrt = rep.diagonal_values(|h| f_gamma(h) / h.sqrt());
    let f_over_sqrt2 = rep.diagonal_values(|h| f_gamma(h) / (2.0 * h).sqrt());
    let sandwich = |d: &[f64], m: &CMatrix| mul_diag(&diag_mul(d, m), d);
    let jx = |i: usize| sum4(|m| anticommutator(rep.j(i, m).matrix(), rep.x(m).matrix()));
    let mut rec = Recorder::new();
    rec.run(|| {
        let fam = (1..=4).map(|i| (sandwich(&f, rep.l(i).matrix()), -sandwich(&sqrt, &jx(i))));
        worst(rep, "f(h) L_i f(h) = -sqrt(h)(J_ij X_j + X_j J_ij)sqrt(h)", fam, TOL_F_CHAIN, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| (rep.l(i).matrix().clone(), -sandwich(&f_inv, &sandwich(&sqrt, &jx(i)))));
        worst(rep, "L_i = -f^-1 sqrt(h)(J_ij X_j + X_j J_ij)sqrt(h) f^-1", fam, TOL_F_CHAIN, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| (rep.p(i).matrix().clone(), sandwich(&f_over_sqrt, rep.l(i).matrix()) * c(0.5)));
        worst(rep, "P_i = 1/2 (f/sqrt(h)) L_i (f/sqrt(h))", fam, TOL_F_CHAIN, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| {
            let sum = rep.v_ladder(1, i) + rep.v_ladder(-1, i);
            (rep.p(i).matrix().clone(), sandwich(&f_over_sqrt2, &sum) * c(-0.5))
        });
        worst(rep, "P_i = -1/2 (f/sqrt(2h))(A4+_i + A4-_i)(f/sqrt(2h))", fam, TOL_F_CHAIN, 1)
    });
    rec.finish()
}

/// The position/momentum contract of the configuration space.
pub fn check_position_momentum(rep: &Representation) -> Vec<CheckResult> {
    let x = |i| rep.x(i).matrix();
    let p = |i| rep.p(i).matrix();
    let j = |a, b| rep.j(a, b).matrix();
    let dim = rep.dim();
    let id = linalg::identity(dim);
    let zero = linalg::zeros(dim);
    let pairs = || (1..=4).flat_map(|a| (1..=4).map(move |b| (a, b)));
    let xp = sum4(|i| mul(x(i), p(i)));
    let px = sum4(|i| mul(p(i), x(i)));
    let mut rec = Recorder::new();
    rec.run(|| worst(rep, "[X_i,X_j] = 0", pairs().map(|(a, b)| (commutator(x(a), x(b)), zero.clone())), TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "X.X = 1", &sum4(|i| mul(x(i), x(i))), &id, TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "X.P + P.X = 0", &(&xp + &px), &zero, TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "X.P = 3i/2", &xp, &(&id * (I * 1.5)), TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "P.X = -3i/2", &px, &(&id * (I * -1.5)), TOL_ALGEBRA, 2));
    rec.run(|| {
        let p2 = sum4(|i| mul(p(i), p(i)));
        interior(rep, "H = P^2 - 9/4", rep.hamiltonian().matrix(), &(p2 - &id * c(2.25)), TOL_ALGEBRA, 2)
    });
    let vector_law = |v: &dyn Fn(usize) -> CMatrix| {
        (1..=4)
            .flat_map(|i| (1..=4).flat_map(move |k| (1..=4).map(move |l| (i, k, l))))
            .map(|(i, k, l)| {
                let rhs = (v(i) * c(delta(k, l)) - v(k) * c(delta(i, l))) * (-I);
                (commutator(j(i, k), &v(l)), rhs)
            })
            .collect::<Vec<_>>()
    };
    rec.run(|| worst(rep, "[J_ik,X_l] = -i(d_kl X_i - d_il X_k)", vector_law(&|i| x(i).clone()), TOL_ALGEBRA, 1));
    rec.run(|| worst(rep, "[J_ik,P_l] = -i(d_kl P_i - d_il P_k)", vector_law(&|i| p(i).clone()), TOL_ALGEBRA, 2));
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(p(a), x(b)), (&id * c(delta(a, b)) - mul(x(a), x(b))) * (-I)));
        worst(rep, "[P_i,X_j] = -i(d_ij - X_i X_j)", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(p(a), p(b)), j(a, b) * (-I)));
        worst(rep, "[P_i,P_j] = -iJ_ij", fam, TOL_ALGEBRA, 2)
    });
    rec.finish()
}

/// Ladder structure of `A±`.
pub fn check_ladder(rep: &Representation) -> Vec<CheckResult> {
    let ap = |i| rep.a_plus(i).matrix();
    let am = |i| rep.a_minus(i).matrix();
    let h = rep.h().matrix();
    let dim = rep.dim();
    let id = linalg::identity(dim);
    let zero = linalg::zeros(dim);
    let h2 = mul(h, h);
    let mut rec = Recorder::new();
    rec.run(|| {
        let res = (1..=4)
            .map(|i| am(i).column(0).norm())
            .fold(0.0, f64::max);
        CheckResult::new("A-_i |0> = 0", res, TOL_ALGEBRA, Some([0, 0]))
    });
    rec.run(|| interior(rep, "sum_i (A+_i)^2 = 0", &sum4(|i| mul(ap(i), ap(i))), &zero, TOL_ALGEBRA, 2));
    rec.run(|| interior(rep, "sum_i (A-_i)^2 = 0", &sum4(|i| mul(am(i), am(i))), &zero, TOL_ALGEBRA, 2));
    rec.run(|| {
        let rhs = &h2 * c(2.0) + &id * c(2.0) - h * c(4.0);
        interior(rep, "A+.A- = 2h^2 + 2 - 4h (= 2n^2)", &sum4(|i| mul(ap(i), am(i))), &rhs, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let rhs = &h2 * c(2.0) + &id * c(2.0) + h * c(4.0);
        interior(rep, "A-.A+ = 2h^2 + 2 + 4h", &sum4(|i| mul(am(i), ap(i))), &rhs, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| (ap(i).adjoint(), am(i).clone()));
        worst(rep, "(A+_i)^dagger = A-_i", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let inv = rep.diagonal_values(|h| 1.0 / h.sqrt());
        let fam = (1..=4).map(|i| {
            let rhs = mul_diag(&diag_mul(&inv, &(ap(i) + am(i))), &inv) * c(0.5);
            (rep.x(i).matrix().clone(), rhs)
        });
        worst(rep, "X_i = 1/2 h^-1/2 (A+_i + A-_i) h^-1/2", fam, TOL_ALGEBRA, 1)
    });
    rec.finish()
}

/// Least-squares phase `φ` with `b ≈ φ a` over a family, on the interior block.
fn fit_phase(pairs: &[(CMatrix, CMatrix)]) -> Complex64 {
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for (a, b) in pairs {
        num += a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        den += a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    if den == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let phi = num / den;
        phi / phi.norm()
    }
}

/// Global phases relating `h^{-1/2} V±_i h^{1/2}` to `A±_i`, fitted on the interior.
pub fn v_ladder_phases(rep: &Representation) -> (Complex64, Complex64) {
    let m = rep.layout().dim_through(rep.layout().interior(1).unwrap_or(0));
    let fam = |sign: i8| -> Vec<(CMatrix, CMatrix)> {
        (1..=4)
            .map(|i| {
                let a = if sign > 0 { rep.a_plus(i) } else { rep.a_minus(i) };
                (leading_block(a.matrix(), m), leading_block(&rep.v_ladder(sign, i), m))
            })
            .collect()
    };
    (fit_phase(&fam(1)), fit_phase(&fam(-1)))
}

/// The V± eigenoperators of `H` and the ladder operators they induce.
pub fn check_v(rep: &Representation) -> Vec<CheckResult> {
    let h = rep.h().matrix();
    let hv = rep.diagonal_values(|v| v);
    let ham = rep.hamiltonian().matrix();
    let j = |a, b| rep.j(a, b).matrix();
    let vp = |i| rep.v_plus(i).matrix();
    let vm = |i| rep.v_minus(i).matrix();
    let v = |s: i8, i| if s > 0 { vp(i) } else { vm(i) };
    let a4 = |s: i8, i| rep.v_ladder(s, i);
    let pairs = || (1..=4).flat_map(|a| (1..=4).map(move |b| (a, b)));
    let inv_sqrt = rep.diagonal_values(|x| 1.0 / x.sqrt());
    let mut rec = Recorder::new();
    rec.run(|| {
        let fam = [1i8, -1].into_iter().flat_map(|s| {
            let lambda = rep.diagonal_values(move |x| -1.0 + 2.0 * s as f64 * x);
            (1..=4).map(move |i| (commutator(ham, v(s, i)), diag_mul(&lambda, v(s, i))))
        });
        worst(rep, "[H,V+-_i] = (-1 +- 2h) V+-_i", fam.collect::<Vec<_>>(), TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = [1i8, -1].into_iter().flat_map(|s| {
            let shifted = rep.diagonal_values(move |x| x - s as f64);
            let hv = &hv;
            (1..=4).map(move |i| (diag_mul(&shifted, v(s, i)), mul_diag(v(s, i), hv)))
        });
        worst(rep, "(h -+ 1) V+-_i = V+-_i h", fam.collect::<Vec<_>>(), TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = pairs().map(|(a, b)| (commutator(vm(a), vp(b)), h * c(2.0 * delta(a, b)) + j(b, a) * c(2.0) * I));
        worst(rep, "[V-_i,V+_j] = 2h d_ij + 2iJ_ji", fam, TOL_ALGEBRA, 2)
    });
    rec.run(|| {
        let ratio = rep.diagonal_values(|x| (x + 1.0) / x);
        let fam = (1..=4).map(|i| (vp(i).adjoint(), diag_mul(&ratio, vm(i))));
        worst(rep, "(V+_i)^dagger = ((h+1)/h) V-_i", fam, TOL_ALGEBRA, 1)
    });
    let (phi_p, phi_m) = v_ladder_phases(rep);
    rec.run(|| {
        let fam = [1i8, -1].into_iter().flat_map(|s| {
            let phi = if s > 0 { phi_p } else { phi_m };
            (1..=4).map(move |i| {
                let a = if s > 0 { rep.a_plus(i) } else { rep.a_minus(i) };
                (a4(s, i), a.matrix() * phi)
            })
        });
        let name = format!(
            "h^-1/2 V+-_i h^1/2 = phase * A+-_i (phases {:+.0}{:+.0}i, {:+.0}{:+.0}i)",
            phi_p.re, phi_p.im, phi_m.re, phi_m.im
        );
        worst(rep, name, fam.collect::<Vec<_>>(), TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| (a4(1, i).adjoint(), a4(-1, i)));
        worst(rep, "(A4+_i)^dagger = A4-_i", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = [1i8, -1].into_iter().flat_map(|s| (1..=4).map(move |i| (commutator(h, &a4(s, i)), a4(s, i) * c(s as f64))));
        worst(rep, "[h,A4+-_i] = +-A4+-_i", fam.collect::<Vec<_>>(), TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| {
            let rhs = mul_diag(&diag_mul(&inv_sqrt, &(a4(1, i) - a4(-1, i))), &inv_sqrt) * (I * 0.5);
            (rep.x(i).matrix().clone(), rhs)
        });
        worst(rep, "X_i = i/2 h^-1/2 (A4+_i - A4-_i) h^-1/2", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let half = rep.diagonal_values(|x| x + 0.5);
        let fam = (1..=4).map(|i| {
            let inner = mul_diag(&a4(1, i), &half) + diag_mul(&half, &a4(-1, i));
            (rep.p(i).matrix().clone(), mul_diag(&diag_mul(&inv_sqrt, &inner), &inv_sqrt) * c(-0.5))
        });
        worst(rep, "P_i = -1/2 h^-1/2 (A4+_i (h+1/2) + (h+1/2) A4-_i) h^-1/2", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = (1..=4).map(|i| {
            let k4 = (a4(-1, i) + a4(1, i)) * c(0.5);
            let inner = mul_diag(&k4, &hv) + diag_mul(&hv, &k4);
            (rep.p(i).matrix().clone(), mul_diag(&diag_mul(&inv_sqrt, &inner), &inv_sqrt) * c(-0.5))
        });
        worst(rep, "P_i = -1/2 h^-1/2 (h K4_i + K4_i h) h^-1/2", fam, TOL_ALGEBRA, 1)
    });
    rec.run(|| {
        let fam = pairs().flat_map(|(a, b)| {
            [
                (commutator(&a4(-1, a), &a4(1, b)), h * c(2.0 * delta(a, b)) + j(b, a) * c(2.0) * I),
                (commutator(&a4(1, a), &a4(1, b)), linalg::zeros(rep.dim())),
                (commutator(&a4(-1, a), &a4(-1, b)), linalg::zeros(rep.dim())),
            ]
        });
        worst(rep, "[A4-_i,A4+_j] = 2h d_ij + 2iJ_ji, [A4+,A4+] = [A4-,A4-] = 0", fam.collect::<Vec<_>>(), TOL_ALGEBRA, 2)
    });
    rec.finish()
}

fn check_index(mu: usize) -> Result<()> {
    if (1..=4).contains(&mu) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("eigenstate index {mu} is outside 1..=4")))
    }
}

/// `A+_{μ1} ⋯ A+_{μn} ψ₀` as a state vector.
pub fn eigenstate_vector(rep: &Representation, indices: &[usize]) -> Result<DVector<Complex64>> {
    for &mu in indices {
        check_index(mu)?;
    }
    if indices.len() + 1 > rep.max_level() {
        return Err(Error::InvalidParameter(format!(
            "eigenstates of level {} need a truncation of at least {}, have {}",
            indices.len(),
            indices.len() + 1,
            rep.max_level()
        )));
    }
    let mut v = DVector::<Complex64>::zeros(rep.dim());
    v[0] = c(1.0);
    for &mu in indices.iter().rev() {
        v = rep.a_plus(mu).matrix() * v;
    }
    Ok(v)
}

/// `ψ_{μ1…μn} = A+_{μ1} ⋯ A+_{μn} ψ₀` as a polynomial of degree `n`.
pub fn build_eigenstates(rep: &Representation, indices: &[usize]) -> Result<ComplexPoly> {
    let v = eigenstate_vector(rep, indices)?;
    Ok(rep.space().level_polynomial(indices.len(), &v))
}

/// All `4^n` states of level `n`, index tuples in base-4 order with `μ1` most significant.
fn level_states(rep: &Representation, n: usize) -> Vec<DVector<Complex64>> {
    let mut states = vec![{
        let mut v = DVector::<Complex64>::zeros(rep.dim());
        v[0] = c(1.0);
        v
    }];
    for _ in 0..n {
        states = (1..=4)
            .flat_map(|mu| states.iter().map(move |s| rep.a_plus(mu).matrix() * s))
            .collect();
    }
    states
}

fn digits(mut k: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = k % 4;
        k /= 4;
    }
    d
}

fn index_of(d: &[usize]) -> usize {
    d.iter().fold(0, |acc, x| acc * 4 + x)
}

/// Harmonicity, level membership, symmetry, tracelessness and span of the
/// states `A+ ⋯ A+ ψ₀` for every level `n ≤ N − 1`.
pub fn check_eigenstates(rep: &Representation) -> Vec<CheckResult> {
    let Some(top) = rep.max_level().checked_sub(1) else {
        return vec![CheckResult::new("eigenstates", f64::NAN, TOL_ALGEBRA, None)];
    };
    let levels = Some([0, top]);
    let (mut harmonic, mut membership, mut symmetric, mut traceless, mut rank_gap) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0);
    let start = Instant::now();
    for n in 0..=top {
        let states = level_states(rep, n);
        let range = rep.layout().range(n);
        let scale = states.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
        for v in &states {
            let poly = rep.space().level_polynomial(n, v);
            let lap = poly.laplacian().max_abs();
            harmonic = harmonic.max(lap / poly.max_abs().max(1.0));
            let mut outside = v.clone();
            outside.rows_mut(range.start, range.len()).fill(c(0.0));
            membership = membership.max(outside.norm() / v.norm().max(1.0));
        }
        for (k, v) in states.iter().enumerate() {
            let mut d = digits(k, n);
            d.sort_unstable();
            symmetric = symmetric.max((v - &states[index_of(&d)]).norm() / scale);
        }
        if n >= 2 {
            for rest in 0..4usize.pow(n as u32 - 2) {
                let tail = digits(rest, n - 2);
                let trace = (0..4).fold(DVector::<Complex64>::zeros(rep.dim()), |acc, mu| {
                    let mut d = vec![mu, mu];
                    d.extend(&tail);
                    acc + &states[index_of(&d)]
                });
                traceless = traceless.max(trace.norm() / scale);
            }
        }
        let block = DMatrix::from_fn(range.len(), states.len(), |r, k| states[k][range.start + r]);
        let sv = SVD::new(block, false, false).singular_values;
        let max = sv.iter().copied().fold(0.0, f64::max);
        let rank = sv.iter().filter(|&&s| s > 1e-10 * max).count();
        rank_gap += (rank as f64 - ((n + 1) * (n + 1)) as f64).abs();
    }
    let secs = start.elapsed().as_secs_f64();
    let mut out = vec![
        CheckResult::new("eigenstates are harmonic", harmonic, TOL_ALGEBRA, levels),
        CheckResult::new("eigenstates lie in level n", membership, TOL_ALGEBRA, levels),
        CheckResult::new("eigenstates are symmetric in their indices", symmetric, TOL_ALGEBRA, levels),
        CheckResult::new("eigenstates are traceless", traceless, TOL_ALGEBRA, levels),
        CheckResult::new("eigenstates span level n, rank (n+1)^2", rank_gap, 0.0, levels),
    ];
    for r in &mut out {
        r.seconds = Some(secs / 5.0);
    }
    out
}

/// Spin-`s` matrices `(S_x, S_y, S_z)` for `s = twice_s / 2`, basis `m = s, s−1, …, −s`.
pub fn spin_matrices(twice_s: usize) -> [CMatrix; 3] {
    let d = twice_s + 1;
    let s = twice_s as f64 / 2.0;
    let m = |k: usize| s - k as f64;
    let mut raise = linalg::zeros(d);
    for k in 1..d {
        raise[(k - 1, k)] = c((s * (s + 1.0) - m(k) * (m(k) + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * c(0.5);
    let sy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let sz = linalg::diagonal(&(0..d).map(m).collect::<Vec<_>>());
    [sx, sy, sz]
}

/// `T_ij = S_i S_j + S_j S_i − ½ δ_ij`.
pub fn so3_tensor(spin: &[CMatrix; 3]) -> [[CMatrix; 3]; 3] {
    let id = linalg::identity(spin[0].nrows());
    std::array::from_fn(|i| std::array::from_fn(|j| anticommutator(&spin[i], &spin[j]) - &id * c(0.5 * delta(i, j))))
}

/// Largest residual of `[S_l, T_ij] = i(ε_lik T_kj + ε_ljk T_ik)`.
pub fn so3_covariance_residual(spin: &[CMatrix; 3]) -> f64 {
    let t = so3_tensor(spin);
    let mut worst = 0.0_f64;
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut rhs = linalg::zeros(spin[0].nrows());
                for k in 0..3 {
                    rhs += &t[k][j] * c(levi_civita(&[l + 1, i + 1, k + 1]) as f64);
                    rhs += &t[i][k] * c(levi_civita(&[l + 1, j + 1, k + 1]) as f64);
                }
                worst = worst.max(linalg::relative_residual(&commutator(&spin[l], &t[i][j]), &(rhs * I)));
            }
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct So3Demo {
    pub checks: Vec<CheckResult>,
    pub counterexample: Counterexample,
}

/// The so(3) analogue of the restrictive relation: spin ½ satisfies
/// `T_ij = 0`, spin 1 does not.
pub fn so3_demo() -> So3Demo {
    let max_norm = |t: &[[CMatrix; 3]; 3]| t.iter().flatten().map(linalg::frobenius).fold(0.0, f64::max);
    let half = spin_matrices(1);
    let one = spin_matrices(2);
    let checks = vec![
        CheckResult::new("so(3) spin-1/2: S_i S_j + S_j S_i - 1/2 d_ij = 0", max_norm(&so3_tensor(&half)), 0.0, None),
        CheckResult::new("so(3) covariance [S_l,T_ij], spin 1/2", so3_covariance_residual(&half), TOL_ROUNDOFF, None),
        CheckResult::new("so(3) covariance [S_l,T_ij], spin 1", so3_covariance_residual(&one), TOL_ROUNDOFF, None),
    ];
    let violation = max_norm(&so3_tensor(&one));
    let threshold = 0.1;
    So3Demo {
        checks,
        counterexample: Counterexample {
            name: "so(3) spin-1 violates T_ij = 0".into(),
            violation,
            threshold,
            detected: violation > threshold,
        },
    }
}

/// The 6-dimensional defining representation `(M_ab)_xy = −i(δ_ax g_by − δ_bx g_ay)`.
pub fn defining_generators() -> Generators {
    Generators::from_fn(|ix| {
        let (a, b) = (ix.a() - 1, ix.b() - 1);
        let mut m = linalg::zeros(6);
        m[(a, b)] = -I * Metric::g(b + 1, b + 1) as f64;
        m[(b, a)] = I * Metric::g(a + 1, a + 1) as f64;
        m
    })
    .expect("fixed dimension")
}

/// The covariance law of `T̃` on the defining representation, where `T̃` does not vanish.
pub fn check_defining_covariance(c_shift: f64) -> CheckResult {
    let gens = defining_generators();
    let t = algebra::tensor_t(&gens, c_shift);
    CheckResult::new("T~ covariance on the defining representation", tensor_covariance_residual(&gens, &t, None), TOL_ROUNDOFF, None)
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// The constant shift in `T̃_ab = T_ab + c g_ab`.
    pub c: f64,
    /// Upper end of the scalar `f(h)` recursion check.
    pub h_max: usize,
    /// Keep wall-clock seconds in the results.
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            c: 2.0,
            h_max: 20,
            timings: false,
        }
    }
}

/// Runs every check on a built representation.
pub fn run_suite(rep: &Representation, opts: SuiteOptions) -> Result<VerificationReport> {
    let gens = rep.assemble_so42();
    let products = ProductTable::new(&gens);
    let mut checks = Vec::new();
    checks.extend(check_spectrum(rep)?);
    checks.extend(check_commutators(rep, &products));
    checks.extend(check_restrictive(rep, &products, opts.c));
    checks.push(check_defining_covariance(opts.c));
    checks.extend(check_casimirs(rep, &products));
    checks.extend(check_position_momentum(rep));
    checks.extend(check_ladder(rep));
    checks.extend(check_v(rep));
    checks.push(check_f_recursion(opts.h_max));
    checks.extend(check_f_identities(rep));
    checks.extend(check_eigenstates(rep));
    let demo = so3_demo();
    checks.extend(demo.checks);
    if !opts.timings {
        for r in &mut checks {
            r.seconds = None;
        }
    }
    let counterexamples = vec![demo.counterexample];
    let pass = checks.iter().all(|r| r.pass) && counterexamples.iter().all(|x| x.detected);
    Ok(VerificationReport {
        max_level: rep.max_level(),
        dimension: rep.dim(),
        c: opts.c,
        pass,
        checks,
        counterexamples,
    })
}

/// Builds the representation at truncation `max_level` and runs the suite.
pub fn verify_level(max_level: usize, opts: SuiteOptions) -> Result<VerificationReport> {
    if max_level < 2 {
        return Err(Error::InvalidParameter(format!(
            "verification needs N >= 2 so that interior levels exist, got {max_level}"
        )));
    }
    run_suite(&Representation::build(max_level)?, opts)
}
