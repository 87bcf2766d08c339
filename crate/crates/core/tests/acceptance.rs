//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use s3_sga::algebra::ProductTable;
use s3_sga::classical::{self, PhaseState};
use s3_sga::operators::Representation;
use s3_sga::verify::{self, CheckResult};

const N: usize = 6;

struct Line {
    pass: bool,
    text: String,
}

fn summarize(checks: &[CheckResult]) -> (bool, f64) {
    let pass = !checks.is_empty() && checks.iter().all(|r| r.pass);
    let worst = checks.iter().map(|r| r.residual).fold(0.0, f64::max);
    (pass, worst)
}

fn failing(checks: &[CheckResult]) -> String {
    let names: Vec<_> = checks.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if names.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", names.join(", "))
    }
}

/// `T~ab = 0` or `Rab = 0` for digits `a`, `b`.
fn is_component(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix).is_some_and(|rest| rest.as_bytes().first().is_some_and(u8::is_ascii_digit))
}

fn line(pass: bool, text: String) -> Line {
    Line { pass, text }
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    let start = Instant::now();
    let rep = Representation::build(N).expect("building the N = 6 representation");
    let spectrum = verify::check_spectrum(&rep).expect("eigensolve");
    let rows = verify::spectrum_table(&rep).expect("eigensolve");
    let seconds = start.elapsed().as_secs_f64();
    let (ok, worst) = summarize(&spectrum);
    let degeneracies = rows.iter().all(|r| r.multiplicity == (r.level + 1).pow(2) && r.exact == (r.level * (r.level + 2)) as f64);
    lines.push(line(
        ok && degeneracies && rows.len() == N + 1 && seconds < 5.0,
        format!("1 spectrum at N = 6: E = n(n+2), multiplicity (n+1)^2, residual {worst:.2e} (<= 1e-10), build + eigensolve {seconds:.2} s (< 5 s)"),
    ));

    let gens = rep.assemble_so42();
    let products = ProductTable::new(&gens);
    let commutators = verify::check_commutators(&rep, &products);
    let closure: Vec<_> = commutators.iter().filter(|r| r.name.starts_with("[M")).cloned().collect();
    let (ok, worst) = summarize(&closure);
    let interior = closure.iter().all(|r| r.levels.is_some_and(|[_, top]| top <= N - 2));
    lines.push(line(
        ok && interior && closure.len() == 105,
        format!("2 so(4,2) closure: {} commutators on levels <= N-2, worst relative residual {worst:.2e} (<= 1e-10){}", closure.len(), failing(&closure)),
    ));

    let restrictive = verify::check_restrictive(&rep, &products, 2.0);
    let components: Vec<_> = restrictive
        .iter()
        .filter(|r| is_component(&r.name, "T~") || is_component(&r.name, "R"))
        .cloned()
        .collect();
    let (ok, worst) = summarize(&components);
    let control = verify::check_restrictive(&rep, &products, 0.0);
    let caught: Vec<_> = control.iter().filter(|r| r.name.starts_with("T~") && !r.pass).map(|r| r.name.clone()).collect();
    let control_ok = ["T~55 = 0", "T~66 = 0", "T~11 = 0"].iter().all(|n| caught.iter().any(|c| c == n));
    lines.push(line(
        ok && components.len() == 36 && control_ok,
        format!(
            "3 restrictive relations: 21 T~ + 15 R components vanish at c = 2, worst {worst:.2e} (<= 1e-10); c = 0 control fails on {} components{}",
            caught.len(),
            failing(&components)
        ),
    ));

    let casimirs = verify::check_casimirs(&rep, &products);
    let wanted = ["C2 = M_ab M^ab = -6", "C3 = 1/2 {M_ab,M^bc} M_c^a = 0", "R^ab g_ab = 0"];
    let selected: Vec<_> = casimirs.iter().filter(|r| wanted.contains(&r.name.as_str())).cloned().collect();
    let (ok, worst) = summarize(&selected);
    lines.push(line(
        ok && selected.len() == wanted.len(),
        format!("4 Casimirs: C2 = -6, symmetrized C3 = 0, R^ab g_ab = 0 on the interior, worst {worst:.2e} (<= 1e-10){}", failing(&selected)),
    ));

    let mut ladder = verify::check_ladder(&rep);
    ladder.extend(verify::check_eigenstates(&rep));
    let (ok, worst) = summarize(&ladder);
    lines.push(line(
        ok,
        format!("5 ladder structure: A-|0> = 0, sum (A+-_i)^2 = 0, A+.A- = 2n^2, eigenstates harmonic/symmetric/traceless with rank (n+1)^2, worst {worst:.2e}{}", failing(&ladder)),
    ));

    let pm = verify::check_position_momentum(&rep);
    let (ok, worst) = summarize(&pm);
    lines.push(line(
        ok,
        format!("6 position/momentum: [X,X] = 0, X.X = 1, X.P + P.X = 0, X.P = 3i/2, H = P^2 - 9/4, worst {worst:.2e} (<= 1e-10){}", failing(&pm)),
    ));

    let recursion = verify::check_f_recursion(20);
    let identities = verify::check_f_identities(&rep);
    let (ok, worst) = summarize(&identities);
    lines.push(line(
        recursion.pass && ok,
        format!(
            "7 f(h): f(h)f(h+1) = 2h+1 for h = 1..20, relative {:.2e} (<= 1e-12); matrix identities worst {worst:.2e} (<= 1e-8){}",
            recursion.residual,
            failing(&identities)
        ),
    ));

    let oracle = classical::check_bracket_oracle(&classical::random_ambient_states(20, 7), classical::ORACLE_STEP).expect("oracle");
    let (_, worst) = summarize(&oracle.checks);
    lines.push(line(
        oracle.pass,
        format!("8 classical oracle: finite-difference Poisson brackets match the Dirac brackets at 20 random states, worst {worst:.2e} (<= 1e-6){}", failing(&oracle.checks)),
    ));

    let s0 = PhaseState::new([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]).unwrap();
    let period = classical::period(s0.hamiltonian()).unwrap();
    let rk4 = classical::check_motion_constants(&classical::integrate(&s0, 10.0 * period, period / 1000.0).expect("integrate"));
    let exact = classical::check_motion_constants(&classical::analytic_trajectory(&s0, 10.0 * period, period / 1000.0).expect("sample"));
    let find = |checks: &[CheckResult], name: &str| checks.iter().find(|r| r.name == name).map_or(f64::NAN, |r| r.residual);
    lines.push(line(
        rk4.pass() && exact.pass() && rk4.checks().len() >= 10 && exact.checks().len() >= 9,
        format!(
            "9 classical motion over 10 periods: RK4 vs closed form {:.2e}, H drift {:.2e}, J drift {:.2e}, A+- phase law {:.2e}; closed form A+.A- = 2H {:.2e}, M^ab M_ab {:.2e}; period error {:.2e}{}{}",
            find(rk4.checks(), "RK4 vs closed-form solution"),
            find(rk4.checks(), "H conserved"),
            find(rk4.checks(), "J_ij conserved"),
            find(rk4.checks(), "A±_j(t) exp(∓2it√H) constant"),
            find(exact.checks(), "A+·A- = 2H"),
            find(exact.checks(), "M^ab M_ab = 0"),
            find(rk4.checks(), "measured period = π/√H"),
            failing(rk4.checks()),
            failing(exact.checks())
        ),
    ));

    let demo = verify::so3_demo();
    let spin_half = demo.checks.iter().find(|r| r.name.contains("spin-1/2")).expect("spin-1/2 check");
    lines.push(line(
        spin_half.pass && spin_half.residual == 0.0 && demo.counterexample.detected,
        format!(
            "10 so(3) demo: spin-1/2 satisfies S_iS_j + S_jS_i = 1/2 d_ij exactly (residual {:.1e}); spin 1 violates it by {:.3}",
            spin_half.residual, demo.counterexample.violation
        ),
    ));

    let mut all = true;
    for l in &lines {
        println!("{} criterion {}", if l.pass { "PASS" } else { "FAIL" }, l.text);
        all &= l.pass;
    }
    println!("acceptance: {}/{} criteria pass", lines.iter().filter(|l| l.pass).count(), lines.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
