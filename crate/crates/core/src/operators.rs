//! Matrix representations of the S³ operators on a truncated harmonic space.
//!
//! Everything is derived from two primitives: the rotation generators
//! `J_jk = −i(x_j ∂_k − x_k ∂_j)` and the projected coordinate
//! multiplications `X_i`. The energy `h` comes from `H = ½ J·J`, the ladder
//! operators from `K_i = √h X_i √h`, and the rest by algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{GeneratorIndex, Generators};
use crate::error::{Error, Result};
use crate::hilbert::{ComplexPoly, Exponents, Polynomial4, TruncatedSpace};
use crate::linalg::{self, c, CMatrix, I};

/// `f(h) = 2 Γ(h/2 + 3/4) / Γ(h/2 + 1/4)`, the solution of `f(h) f(h+1) = 2h + 1`.
pub fn f_gamma(h: f64) -> f64 {
    2.0 * (libm::lgamma(h / 2.0 + 0.75) - libm::lgamma(h / 2.0 + 0.25)).exp()
}

/// Block offsets of a truncated space; level `n` spans `offsets[n]..offsets[n+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelLayout {
    offsets: Vec<usize>,
}

impl LevelLayout {
    pub fn new(offsets: Vec<usize>) -> Self {
        Self { offsets }
    }

    pub fn max_level(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Dimension of the span of levels `0..=n`.
    pub fn dim_through(&self, n: usize) -> usize {
        self.offsets[n.min(self.max_level()) + 1]
    }

    /// Block of `m` mapping level `from` into level `to`.
    pub fn block(&self, m: &CMatrix, to: usize, from: usize) -> CMatrix {
        let (r, k) = (self.range(to), self.range(from));
        m.view((r.start, k.start), (r.len(), k.len())).into_owned()
    }

    /// Highest level on which words with `shifts` level-changing factors
    /// are unaffected by the truncation, if any.
    pub fn interior(&self, shifts: usize) -> Option<usize> {
        self.max_level().checked_sub(shifts)
    }
}

/// A dense operator on the truncated space with its level-block structure.
#[derive(Clone, Debug)]
pub struct OperatorRep {
    name: String,
    matrix: CMatrix,
    layout: Arc<LevelLayout>,
    couplings: BTreeMap<usize, Vec<usize>>,
    hermitian: bool,
}

const BLOCK_ZERO: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

impl OperatorRep {
    /// Wraps a matrix. With `hermitian` set, `‖M − M†‖_F ≤ 1e-12 · max(1, ‖M‖_F)` is enforced.
    pub fn new(name: impl Into<String>, matrix: CMatrix, layout: Arc<LevelLayout>, hermitian: bool) -> Result<Self> {
        let name = name.into();
        let dim = layout.dim();
        for found in [matrix.nrows(), matrix.ncols()] {
            if found != dim {
                return Err(Error::DimensionMismatch { expected: dim, found });
            }
        }
        if hermitian {
            let deviation = linalg::hermitian_defect(&matrix);
            if deviation > HERMITIAN_TOL * linalg::frobenius(&matrix).max(1.0) {
                return Err(Error::NotHermitian { name, deviation });
            }
        }
        let couplings = couplings_of(&matrix, &layout);
        Ok(Self {
            name,
            matrix,
            layout,
            couplings,
            hermitian,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn layout(&self) -> &LevelLayout {
        &self.layout
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Source level → target levels reached with a block above 1e-12 (relative to the largest entry).
    pub fn couplings(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.couplings
    }

    /// Block mapping level `from` into level `to`.
    pub fn block(&self, to: usize, from: usize) -> CMatrix {
        self.layout.block(&self.matrix, to, from)
    }
}

fn couplings_of(m: &CMatrix, layout: &LevelLayout) -> BTreeMap<usize, Vec<usize>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let levels = layout.max_level() + 1;
    (0..levels)
        .map(|from| {
            let targets = (0..levels)
                .filter(|&to| {
                    let (r, k) = (layout.range(to), layout.range(from));
                    m.view((r.start, k.start), (r.len(), k.len()))
                        .iter()
                        .any(|z| z.norm() > BLOCK_ZERO * scale)
                })
                .collect();
            (from, targets)
        })
        .collect()
}

fn unit_monomial(e: &Exponents) -> ComplexPoly {
    Polynomial4::monomial(*e, c(1.0))
}

/// `J_jk` as the differential operator `−i(x_j ∂_k − x_k ∂_j)`, indices 0-based.
fn rotation_image(j: usize, k: usize, e: &Exponents) -> ComplexPoly {
    let p = unit_monomial(e);
    let a = p.derivative(k).mul_coordinate(j).scale(&(-I));
    let b = p.derivative(j).mul_coordinate(k).scale(&I);
    a.try_add(&b).expect("both terms keep the degree")
}

/// The complete set of operators on one truncated space.
#[derive(Clone, Debug)]
pub struct Representation {
    space: TruncatedSpace,
    layout: Arc<LevelLayout>,
    level_h: Vec<f64>,
    j: Vec<OperatorRep>,
    x: Vec<OperatorRep>,
    hamiltonian: OperatorRep,
    h: OperatorRep,
    gamma: OperatorRep,
    k: Vec<OperatorRep>,
    l: Vec<OperatorRep>,
    a_plus: Vec<OperatorRep>,
    a_minus: Vec<OperatorRep>,
    p: Vec<OperatorRep>,
    v_plus: Vec<OperatorRep>,
    v_minus: Vec<OperatorRep>,
}

impl Representation {
    /// Orthonormalizes levels `0..=max_level` and builds every operator.
    pub fn build(max_level: usize) -> Result<Self> {
        Self::from_space(TruncatedSpace::orthonormalize(max_level)?)
    }

    pub fn from_space(space: TruncatedSpace) -> Result<Self> {
        let layout = Arc::new(LevelLayout::new(space.offsets().to_vec()));
        let j = build_j(&space, &layout)?;
        let x = build_x(&space, &layout)?;
        let hamiltonian = build_hamiltonian(&j, &layout)?;
        let (h, gamma, level_h) = build_h(&hamiltonian, &layout)?;
        let (k, l, a_plus, a_minus) = build_ladder(&x, &level_h, &layout)?;
        let p = build_p(&j, &x, &layout)?;
        let (v_plus, v_minus) = build_v(&x, &p, &level_h, &layout)?;
        Ok(Self {
            space,
            layout,
            level_h,
            j,
            x,
            hamiltonian,
            h,
            gamma,
            k,
            l,
            a_plus,
            a_minus,
            p,
            v_plus,
            v_minus,
        })
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn layout(&self) -> &LevelLayout {
        &self.layout
    }

    pub fn max_level(&self) -> usize {
        self.layout.max_level()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// `J_ik`, 1-based, antisymmetric; `J_ii` is the zero operator.
    pub fn j(&self, i: usize, k: usize) -> &OperatorRep {
        &self.j[(i - 1) * 4 + (k - 1)]
    }

    pub fn x(&self, i: usize) -> &OperatorRep {
        &self.x[i - 1]
    }

    pub fn p(&self, i: usize) -> &OperatorRep {
        &self.p[i - 1]
    }

    pub fn k(&self, i: usize) -> &OperatorRep {
        &self.k[i - 1]
    }

    pub fn l(&self, i: usize) -> &OperatorRep {
        &self.l[i - 1]
    }

    pub fn a_plus(&self, i: usize) -> &OperatorRep {
        &self.a_plus[i - 1]
    }

    pub fn a_minus(&self, i: usize) -> &OperatorRep {
        &self.a_minus[i - 1]
    }

    pub fn v_plus(&self, i: usize) -> &OperatorRep {
        &self.v_plus[i - 1]
    }

    pub fn v_minus(&self, i: usize) -> &OperatorRep {
        &self.v_minus[i - 1]
    }

    pub fn hamiltonian(&self) -> &OperatorRep {
        &self.hamiltonian
    }

    pub fn h(&self) -> &OperatorRep {
        &self.h
    }

    pub fn gamma(&self) -> &OperatorRep {
        &self.gamma
    }

    /// The value of `h` on each level.
    pub fn level_h(&self) -> &[f64] {
        &self.level_h
    }

    /// `φ(h)` as a diagonal matrix.
    pub fn function_of_h(&self, phi: impl Fn(f64) -> f64) -> CMatrix {
        linalg::diagonal(&self.diagonal_values(phi))
    }

    /// `φ(h)` per basis index.
    pub fn diagonal_values(&self, phi: impl Fn(f64) -> f64) -> Vec<f64> {
        per_index(&self.level_h, &self.layout, phi)
    }

    pub fn f_h(&self) -> CMatrix {
        self.function_of_h(f_gamma)
    }

    /// `h^{-1/2} V±_i h^{1/2}`, the ladder operators of the V-route.
    pub fn v_ladder(&self, sign: i8, i: usize) -> CMatrix {
        let v = if sign > 0 { self.v_plus(i) } else { self.v_minus(i) };
        let sqrt = self.diagonal_values(f64::sqrt);
        let inv = self.diagonal_values(|h| 1.0 / h.sqrt());
        linalg::mul_diag(&linalg::diag_mul(&inv, v.matrix()), &sqrt)
    }

    /// The su(2) ⊕ su(2) vectors `(M, N)` with `M = (R+S)/2`, `N = (R−S)/2`,
    /// `R = (J23, −J13, J12)` and `S = (J14, J24, J34)`.
    pub fn su2_vectors(&self) -> ([CMatrix; 3], [CMatrix; 3]) {
        let j = |a, b| self.j(a, b).matrix().clone();
        let r = [j(2, 3), -j(1, 3), j(1, 2)];
        let s = [j(1, 4), j(2, 4), j(3, 4)];
        let half = c(0.5);
        let m = std::array::from_fn(|k| (&r[k] + &s[k]) * half);
        let n = std::array::from_fn(|k| (&r[k] - &s[k]) * half);
        (m, n)
    }

    /// `M² = Σ M_k²` and `N² = Σ N_k²`.
    pub fn su2_casimirs(&self) -> (CMatrix, CMatrix) {
        let (m, n) = self.su2_vectors();
        let sq = |v: &[CMatrix; 3]| {
            v.iter()
                .map(|a| linalg::mul(a, a))
                .fold(linalg::zeros(self.dim()), |acc, x| acc + x)
        };
        (sq(&m), sq(&n))
    }

    /// The 15 generators: `M_ij = J_ij`, `M_i5 = K_i`, `M_i6 = L_i`, `M_56 = h`.
    pub fn assemble_so42(&self) -> Generators {
        Generators::from_fn(|ix| {
            let m = match (ix.a(), ix.b()) {
                (a, b) if b <= 4 => self.j(a, b),
                (a, 5) => self.k(a),
                (a, 6) if a <= 4 => self.l(a),
                _ => &self.h,
            };
            m.matrix().clone()
        })
        .expect("all generators share the space dimension")
    }

    /// The operator standing for `M_ab` in [`Self::assemble_so42`].
    pub fn generator(&self, ix: GeneratorIndex) -> &OperatorRep {
        match (ix.a(), ix.b()) {
            (a, b) if b <= 4 => self.j(a, b),
            (a, 5) => self.k(a),
            (a, 6) if a <= 4 => self.l(a),
            _ => &self.h,
        }
    }
}

fn per_index(level_values: &[f64], layout: &LevelLayout, phi: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..layout.dim()).map(|k| phi(level_values[layout.level_of(k)])).collect()
}

/// The six rotation generators as a full antisymmetric 4×4 array.
pub fn build_j(space: &TruncatedSpace, layout: &Arc<LevelLayout>) -> Result<Vec<OperatorRep>> {
    let mut out = Vec::with_capacity(16);
    let mut upper = BTreeMap::new();
    for a in 0..4 {
        for b in (a + 1)..4 {
            upper.insert((a, b), space.represent(|e| rotation_image(a, b, e)));
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            let m = match a.cmp(&b) {
                std::cmp::Ordering::Less => upper[&(a, b)].clone(),
                std::cmp::Ordering::Greater => -upper[&(b, a)].clone(),
                std::cmp::Ordering::Equal => linalg::zeros(layout.dim()),
            };
            out.push(OperatorRep::new(format!("J{}{}", a + 1, b + 1), m, layout.clone(), true)?);
        }
    }
    Ok(out)
}

/// Multiplication by `x_i` followed by projection onto the truncated space.
pub fn build_x(space: &TruncatedSpace, layout: &Arc<LevelLayout>) -> Result<Vec<OperatorRep>> {
    (0..4)
        .map(|i| {
            let m = space.represent(|e| unit_monomial(e).mul_coordinate(i));
            OperatorRep::new(format!("X{}", i + 1), m, layout.clone(), true)
        })
        .collect()
}

/// `H = ½ Σ_ik J_ik J_ik`.
pub fn build_hamiltonian(j: &[OperatorRep], layout: &Arc<LevelLayout>) -> Result<OperatorRep> {
    let mut acc = linalg::zeros(layout.dim());
    for a in 0..4 {
        for b in (a + 1)..4 {
            let m = j[a * 4 + b].matrix();
            acc += linalg::mul(m, m);
        }
    }
    OperatorRep::new("H", acc, layout.clone(), true)
}

/// `h = √(H + 1)` and `γ = h − 1`, level by level. Also returns the value of `h` per level.
pub fn build_h(hamiltonian: &OperatorRep, layout: &Arc<LevelLayout>) -> Result<(OperatorRep, OperatorRep, Vec<f64>)> {
    let mut level_h = Vec::with_capacity(layout.max_level() + 1);
    for n in 0..=layout.max_level() {
        let block = hamiltonian.block(n, n);
        let d = block.nrows();
        let mean = (0..d).map(|k| block[(k, k)].re).sum::<f64>() / d as f64;
        let deviation = linalg::frobenius(&(block - linalg::identity(d) * c(mean)));
        if deviation > 1e-10 * mean.abs().max(1.0) * d as f64 {
            return Err(Error::LevelNotScalar { level: n, deviation });
        }
        if mean < -1.0 {
            return Err(Error::NegativeSpectrum { level: n, value: mean });
        }
        level_h.push((mean + 1.0).sqrt());
    }
    let h = linalg::diagonal(&per_index(&level_h, layout, |v| v));
    let gamma = &h - linalg::identity(layout.dim());
    Ok((
        OperatorRep::new("h", h, layout.clone(), true)?,
        OperatorRep::new("gamma", gamma, layout.clone(), true)?,
        level_h,
    ))
}

type Ladder = (Vec<OperatorRep>, Vec<OperatorRep>, Vec<OperatorRep>, Vec<OperatorRep>);

/// `K_i = √h X_i √h`, `L_i = −i[K_i, h]`, `A±_i = K_i ∓ i L_i`.
pub fn build_ladder(x: &[OperatorRep], level_h: &[f64], layout: &Arc<LevelLayout>) -> Result<Ladder> {
    let sqrt = per_index(level_h, layout, f64::sqrt);
    let hv = per_index(level_h, layout, |v| v);
    let (mut k, mut l, mut ap, mut am) = (vec![], vec![], vec![], vec![]);
    for (i, xi) in x.iter().enumerate() {
        let ki = linalg::mul_diag(&linalg::diag_mul(&sqrt, xi.matrix()), &sqrt);
        let li = (linalg::mul_diag(&ki, &hv) - linalg::diag_mul(&hv, &ki)) * (-I);
        let plus = &ki - &li * I;
        let minus = &ki + &li * I;
        let n = i + 1;
        ap.push(OperatorRep::new(format!("A+{n}"), plus, layout.clone(), false)?);
        am.push(OperatorRep::new(format!("A-{n}"), minus, layout.clone(), false)?);
        k.push(OperatorRep::new(format!("K{n}"), ki, layout.clone(), true)?);
        l.push(OperatorRep::new(format!("L{n}"), li, layout.clone(), true)?);
    }
    Ok((k, l, ap, am))
}

/// `P_i = −½ Σ_k (J_ik X_k + X_k J_ik)`.
pub fn build_p(j: &[OperatorRep], x: &[OperatorRep], layout: &Arc<LevelLayout>) -> Result<Vec<OperatorRep>> {
    (0..4)
        .map(|i| {
            let mut acc = linalg::zeros(layout.dim());
            for k in 0..4 {
                if k != i {
                    acc += linalg::anticommutator(j[i * 4 + k].matrix(), x[k].matrix());
                }
            }
            OperatorRep::new(format!("P{}", i + 1), acc * c(-0.5), layout.clone(), true)
        })
        .collect()
}

/// `V±_i = −i(±h + ½) X_i − P_i`.
pub fn build_v(
    x: &[OperatorRep],
    p: &[OperatorRep],
    level_h: &[f64],
    layout: &Arc<LevelLayout>,
) -> Result<(Vec<OperatorRep>, Vec<OperatorRep>)> {
    let make = |sign: f64, label: &str| -> Result<Vec<OperatorRep>> {
        let coef = per_index(level_h, layout, |v| sign * v + 0.5);
        (0..4)
            .map(|i| {
                let m = linalg::diag_mul(&coef, x[i].matrix()) * (-I) - p[i].matrix();
                OperatorRep::new(format!("V{label}{}", i + 1), m, layout.clone(), false)
            })
            .collect()
    };
    Ok((make(1.0, "+")?, make(-1.0, "-")?))
}

/// Convenience for tests and callers: `Σ_i a_i b_i` over 4-vectors of operators.
pub fn dot(a: &[&CMatrix], b: &[&CMatrix]) -> CMatrix {
    let dim = a[0].nrows();
    a.iter()
        .zip(b)
        .fold(linalg::zeros(dim), |acc, (x, y)| acc + linalg::mul(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, leading_block, relative_residual};

    fn rep() -> Representation {
        Representation::build(4).unwrap()
    }

    #[test]
    fn f_gamma_reference_values() {
        // Γ(1/4) and Γ(3/4) to 20 digits
        let g14 = 3.625_609_908_221_908_311_9_f64;
        let g34 = 1.225_416_702_465_177_645_1_f64;
        assert!((f_gamma(1.0) - g14 / (2.0 * g34)).abs() < 1e-14);
        assert!((f_gamma(1.0) * f_gamma(2.0) - 3.0).abs() < 1e-13);
        assert!((f_gamma(2.0) * f_gamma(3.0) - 5.0).abs() < 1e-13);
    }

    #[test]
    fn rotations_act_as_derivations() {
        let r = rep();
        let j12 = r.j(1, 2).matrix();
        // basis indices 1..=4 are x1..x4 up to normalization
        assert!((j12[(2, 1)] - I).norm() < 1e-14);
        assert!((j12[(1, 2)] + I).norm() < 1e-14);
        assert!(j12.column(0).iter().all(|z| z.norm() < 1e-15));
        assert_eq!(r.j(1, 2).couplings()[&2], vec![2]);
    }

    #[test]
    fn position_matrix_elements() {
        let r = rep();
        assert!((r.x(1).matrix()[(1, 0)] - c(0.5)).norm() < 1e-14);
        assert_eq!(r.x(1).couplings()[&2], vec![1, 3]);
        assert_eq!(r.x(1).couplings()[&0], vec![1]);
    }

    #[test]
    fn energy_levels() {
        let r = rep();
        for (n, &h) in r.level_h().iter().enumerate() {
            assert!((h - (n as f64 + 1.0)).abs() < 1e-12);
        }
        let hm = r.h().matrix();
        let h2 = linalg::mul(hm, hm) - linalg::identity(r.dim());
        assert!(relative_residual(&h2, r.hamiltonian().matrix()) < 1e-12);
    }

    #[test]
    fn ladders_shift_by_one_level() {
        let r = rep();
        for i in 1..=4 {
            for (from, to) in r.a_plus(i).couplings() {
                let expect: Vec<usize> = if *from < r.max_level() { vec![from + 1] } else { vec![] };
                assert_eq!(to, &expect);
            }
            assert!(r.a_minus(i).matrix().column(0).iter().all(|z| z.norm() < 1e-13));
        }
    }

    #[test]
    fn kl_commutator_closes_on_h() {
        let r = rep();
        let m = r.layout().dim_through(r.max_level() - 2);
        let lhs = commutator(r.k(1).matrix(), r.l(1).matrix());
        let rhs = r.h().matrix() * I;
        assert!(relative_residual(&leading_block(&lhs, m), &leading_block(&rhs, m)) < 1e-10);
    }

    #[test]
    fn su2_casimirs_per_level() {
        let r = rep();
        let (m2, n2) = r.su2_casimirs();
        for n in 0..=r.max_level() {
            let j = n as f64 / 2.0;
            let d = r.layout().range(n).len();
            let target = linalg::identity(d) * c(j * (j + 1.0));
            assert!(relative_residual(&r.layout().block(&m2, n, n), &target) < 1e-12);
            assert!(relative_residual(&r.layout().block(&n2, n, n), &target) < 1e-12);
        }
    }

    #[test]
    fn generator_assignment() {
        let r = rep();
        let g = r.assemble_so42();
        let ix = |a, b| GeneratorIndex::new(a, b).unwrap();
        assert_eq!(g.get(ix(5, 6)), r.h().matrix());
        assert_eq!(g.get(ix(2, 5)), r.k(2).matrix());
        assert_eq!(g.get(ix(3, 6)), r.l(3).matrix());
        assert_eq!(g.get(ix(1, 4)), r.j(1, 4).matrix());
        assert_eq!(r.generator(ix(4, 6)).name(), "L4");
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let layout = Arc::new(LevelLayout::new(vec![0, 1, 5]));
        let err = OperatorRep::new("bad", linalg::zeros(4), layout.clone(), false);
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 5, found: 4 })));
        let mut m = linalg::zeros(5);
        m[(0, 1)] = c(1.0);
        assert!(matches!(OperatorRep::new("m", m, layout, true), Err(Error::NotHermitian { .. })));
    }
}
