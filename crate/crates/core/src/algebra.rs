//! Abstract so(4,2) structure: generator labels, the (4,2) metric, exact
//! structure constants, and the restrictive tensors `T̃_ab` and `R^ab`
//! evaluated on any collection of 15 operators.
//!
//! Indices are 1-based throughout (`1..=4` spatial, `5`, `6` the two
//! timelike directions). `M_ab = −M_ba` is implied; only `a < b` is stored.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Diagonal of the so(4,2) metric.
pub const SIGNATURE: [i64; 6] = [1, 1, 1, 1, -1, -1];

/// Label of one of the 15 generators `M_ab`, `1 ≤ a < b ≤ 6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeneratorIndex {
    a: u8,
    b: u8,
}

impl GeneratorIndex {
    pub fn new(a: usize, b: usize) -> Option<Self> {
        (1 <= a && a < b && b <= 6).then_some(Self {
            a: a as u8,
            b: b as u8,
        })
    }

    pub fn a(self) -> usize {
        self.a as usize
    }

    pub fn b(self) -> usize {
        self.b as usize
    }

    pub fn all() -> impl Iterator<Item = GeneratorIndex> {
        (1..=6).flat_map(|a| ((a + 1)..=6).map(move |b| GeneratorIndex::new(a, b).unwrap()))
    }

    /// Position in the lexicographic listing of [`GeneratorIndex::all`].
    pub fn ordinal(self) -> usize {
        let (a, b) = (self.a(), self.b());
        // rows before `a` hold (6-1) + (6-2) + ... entries
        (1..a).map(|r| 6 - r).sum::<usize>() + (b - a - 1)
    }

    pub fn from_ordinal(k: usize) -> Option<Self> {
        Self::all().nth(k)
    }

    /// Canonical label and orientation sign of `M_xy`; `None` when `x == y`.
    pub fn oriented(x: usize, y: usize) -> Option<(Self, i64)> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Self::new(x, y).map(|g| (g, 1)),
            std::cmp::Ordering::Greater => Self::new(y, x).map(|g| (g, -1)),
            std::cmp::Ordering::Equal => None,
        }
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}{}", self.a, self.b)
    }
}

/// The so(4,2) metric `g = diag(1,1,1,1,−1,−1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Metric;

impl Metric {
    pub fn g(a: usize, b: usize) -> i64 {
        if a == b {
            SIGNATURE[a - 1]
        } else {
            0
        }
    }

    pub fn signature() -> (usize, usize) {
        let p = SIGNATURE.iter().filter(|&&s| s > 0).count();
        (p, SIGNATURE.len() - p)
    }
}

/// Bracket convention. The Dirac-bracket relations carry real structure
/// constants; the commutator relations are the same table times `−i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMode {
    Quantum,
    Classical,
}

pub type Gaussian = Complex<i64>;

/// Exact linear combination of generators plus an identity term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearCombo {
    terms: BTreeMap<GeneratorIndex, Gaussian>,
    scalar: Gaussian,
}

impl LinearCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(ix: GeneratorIndex) -> Self {
        let mut out = Self::zero();
        out.add(ix, Gaussian::new(1, 0));
        out
    }

    fn add(&mut self, ix: GeneratorIndex, coef: Gaussian) {
        let entry = self.terms.entry(ix).or_insert(Gaussian::new(0, 0));
        *entry += coef;
        if *entry == Gaussian::new(0, 0) {
            self.terms.remove(&ix);
        }
    }

    /// Adds `coef · M_xy`, folding `x > y` into the canonical label with a sign.
    pub fn add_oriented(&mut self, x: usize, y: usize, coef: Gaussian) {
        if let Some((ix, sign)) = GeneratorIndex::oriented(x, y) {
            self.add(ix, coef * sign);
        }
    }

    pub fn add_scalar(&mut self, coef: Gaussian) {
        self.scalar += coef;
    }

    pub fn coefficient(&self, ix: GeneratorIndex) -> Gaussian {
        self.terms.get(&ix).copied().unwrap_or(Gaussian::new(0, 0))
    }

    pub fn scalar(&self) -> Gaussian {
        self.scalar
    }

    pub fn terms(&self) -> impl Iterator<Item = (GeneratorIndex, Gaussian)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.scalar == Gaussian::new(0, 0)
    }

    pub fn scaled(&self, s: Gaussian) -> Self {
        let mut out = Self::zero();
        for (ix, v) in self.terms() {
            out.add(ix, v * s);
        }
        out.scalar = self.scalar * s;
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (ix, v) in other.terms() {
            out.add(ix, v);
        }
        out.scalar += other.scalar;
        out
    }

    /// Largest `|Re|` or `|Im|` over all coefficients.
    pub fn max_abs(&self) -> i64 {
        self.terms
            .values()
            .chain(std::iter::once(&self.scalar))
            .map(|z| z.re.abs().max(z.im.abs()))
            .max()
            .unwrap_or(0)
    }

    /// `[self, M_rhs]`; identity terms are central and drop out.
    pub fn bracket_with(&self, rhs: GeneratorIndex, mode: BracketMode) -> Self {
        let mut out = Self::zero();
        for (ix, v) in self.terms() {
            out = out.plus(&commutator_rhs(ix, rhs, mode).scaled(v));
        }
        out
    }

    /// Matrix value of the combination on a concrete set of generators.
    pub fn evaluate(&self, gens: &Generators) -> CMatrix {
        let mut acc = linalg::identity(gens.dim()) * to_c64(self.scalar);
        for (ix, v) in self.terms() {
            acc += gens.get(ix) * to_c64(v);
        }
        acc
    }
}

impl fmt::Display for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ix, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)·{}", v.re, v.im, ix)?;
            first = false;
        }
        if self.scalar != Gaussian::new(0, 0) {
            write!(f, " + ({}{:+}i)·1", self.scalar.re, self.scalar.im)?;
        }
        Ok(())
    }
}

fn to_c64(z: Gaussian) -> Complex64 {
    Complex64::new(z.re as f64, z.im as f64)
}

/// Right-hand side of `[M_ab, M_cd]`:
/// `g_ad M_bc + g_bc M_ad − g_ac M_bd − g_bd M_ac`, times `−i` in quantum mode.
pub fn commutator_rhs(ab: GeneratorIndex, cd: GeneratorIndex, mode: BracketMode) -> LinearCombo {
    let (a, b, c, d) = (ab.a(), ab.b(), cd.a(), cd.b());
    let unit = match mode {
        BracketMode::Classical => Gaussian::new(1, 0),
        BracketMode::Quantum => Gaussian::new(0, -1),
    };
    let mut out = LinearCombo::zero();
    out.add_oriented(b, c, unit * Metric::g(a, d));
    out.add_oriented(a, d, unit * Metric::g(b, c));
    out.add_oriented(b, d, -unit * Metric::g(a, c));
    out.add_oriented(a, c, -unit * Metric::g(b, d));
    out
}

/// All 455 unordered triples of distinct generators.
pub fn all_triples() -> Vec<[GeneratorIndex; 3]> {
    let gens: Vec<_> = GeneratorIndex::all().collect();
    let mut out = Vec::with_capacity(455);
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            for k in (j + 1)..gens.len() {
                out.push([gens[i], gens[j], gens[k]]);
            }
        }
    }
    out
}

/// Largest coefficient of `[[A,B],C] + [[B,C],A] + [[C,A],B]` over the sample.
pub fn jacobi_residual(sample: &[[GeneratorIndex; 3]], mode: BracketMode) -> i64 {
    sample
        .iter()
        .map(|&[x, y, z]| {
            let xy = commutator_rhs(x, y, mode).bracket_with(z, mode);
            let yz = commutator_rhs(y, z, mode).bracket_with(x, mode);
            let zx = commutator_rhs(z, x, mode).bracket_with(y, mode);
            xy.plus(&yz).plus(&zx).max_abs()
        })
        .max()
        .unwrap_or(0)
}

/// Permutation sign of six 1-based labels with `ε^{123456} = +1`; zero on repeats.
pub fn levi_civita6(idx: [usize; 6]) -> i64 {
    levi_civita(&idx)
}

/// Sign of an arbitrary index tuple; zero if any label repeats.
pub fn levi_civita(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            match idx[i].cmp(&idx[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// The 15 operators `M_ab` of a concrete representation, all of one dimension.
#[derive(Clone, Debug)]
pub struct Generators {
    dim: usize,
    ops: Vec<CMatrix>,
}

impl Generators {
    pub fn new(mut map: BTreeMap<GeneratorIndex, CMatrix>) -> Result<Self> {
        let mut ops = Vec::with_capacity(15);
        let mut dim = None;
        for ix in GeneratorIndex::all() {
            let m = map
                .remove(&ix)
                .ok_or_else(|| Error::IndexOutOfRange(format!("generator {ix} missing")))?;
            let d = *dim.get_or_insert(m.nrows());
            for found in [m.nrows(), m.ncols()] {
                if found != d {
                    return Err(Error::DimensionMismatch { expected: d, found });
                }
            }
            ops.push(m);
        }
        Ok(Self {
            dim: dim.unwrap_or(0),
            ops,
        })
    }

    pub fn from_fn(mut f: impl FnMut(GeneratorIndex) -> CMatrix) -> Result<Self> {
        Self::new(GeneratorIndex::all().map(|ix| (ix, f(ix))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, ix: GeneratorIndex) -> &CMatrix {
        &self.ops[ix.ordinal()]
    }

    /// `M_xy` with orientation applied; zero matrix on the diagonal.
    pub fn m(&self, x: usize, y: usize) -> CMatrix {
        match GeneratorIndex::oriented(x, y) {
            Some((ix, 1)) => self.get(ix).clone(),
            Some((ix, _)) => -self.get(ix).clone(),
            None => linalg::zeros(self.dim),
        }
    }
}

/// Cache of all 225 ordered products `M_ab M_cd`.
pub struct ProductTable {
    gens: Generators,
    table: Vec<CMatrix>,
}

impl ProductTable {
    pub fn new(gens: &Generators) -> Self {
        let mut table = Vec::with_capacity(225);
        for x in &gens.ops {
            for y in &gens.ops {
                table.push(linalg::mul(x, y));
            }
        }
        Self { gens: gens.clone(), table }
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    /// `M_xy M_uv` as a reference into the table plus a sign.
    pub fn get(&self, x: usize, y: usize, u: usize, v: usize) -> Option<(&CMatrix, f64)> {
        let (l, sl) = GeneratorIndex::oriented(x, y)?;
        let (r, sr) = GeneratorIndex::oriented(u, v)?;
        Some((&self.table[l.ordinal() * 15 + r.ordinal()], (sl * sr) as f64))
    }

    /// `acc += coef · M_xy M_uv`.
    pub fn accumulate(&self, acc: &mut CMatrix, coef: Complex64, x: usize, y: usize, u: usize, v: usize) {
        if let Some((p, s)) = self.get(x, y, u, v) {
            *acc += p * (coef * s);
        }
    }

    /// `M_xy M_uv − M_uv M_xy`.
    pub fn commutator(&self, x: usize, y: usize, u: usize, v: usize) -> CMatrix {
        let mut acc = linalg::zeros(self.gens.dim);
        self.accumulate(&mut acc, linalg::c(1.0), x, y, u, v);
        self.accumulate(&mut acc, linalg::c(-1.0), u, v, x, y);
        acc
    }
}

/// A 6×6 array of operators indexed 1-based.
#[derive(Clone, Debug)]
pub struct Tensor6 {
    comps: Vec<CMatrix>,
}

impl Tensor6 {
    pub fn get(&self, a: usize, b: usize) -> &CMatrix {
        &self.comps[(a - 1) * 6 + (b - 1)]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &CMatrix)> {
        self.comps
            .iter()
            .enumerate()
            .map(|(k, m)| ((k / 6 + 1, k % 6 + 1), m))
    }
}

/// `T̃_ab = (M_ad M_be + M_be M_ad) g^{de} + c g_ab`.
pub fn tensor_t(gens: &Generators, c: f64) -> Tensor6 {
    tensor_t_from(&ProductTable::new(gens), c)
}

pub fn tensor_t_from(products: &ProductTable, c: f64) -> Tensor6 {
    let dim = products.generators().dim();
    let mut comps = vec![linalg::zeros(dim); 36];
    for a in 1..=6 {
        for b in a..=6 {
            let mut acc = linalg::identity(dim) * linalg::c(c * Metric::g(a, b) as f64);
            for d in 1..=6 {
                let w = linalg::c(Metric::g(d, d) as f64);
                products.accumulate(&mut acc, w, a, d, b, d);
                products.accumulate(&mut acc, w, b, d, a, d);
            }
            comps[(b - 1) * 6 + (a - 1)] = acc.clone();
            comps[(a - 1) * 6 + (b - 1)] = acc;
        }
    }
    Tensor6 { comps }
}

/// `R^ab = ε^{abcdef}(M_cd M_ef + M_ef M_cd)`, with `ε^{123456} = +1`.
pub fn tensor_r(gens: &Generators) -> Tensor6 {
    tensor_r_from(&ProductTable::new(gens))
}

pub fn tensor_r_from(products: &ProductTable) -> Tensor6 {
    let dim = products.generators().dim();
    let mut comps = vec![linalg::zeros(dim); 36];
    for a in 1..=6 {
        for b in (a + 1)..=6 {
            let mut acc = linalg::zeros(dim);
            // the four orientations of (c,d) and (e,f) contribute equally
            for cd in GeneratorIndex::all() {
                for ef in GeneratorIndex::all() {
                    let eps = levi_civita6([a, b, cd.a(), cd.b(), ef.a(), ef.b()]);
                    if eps == 0 {
                        continue;
                    }
                    let w = linalg::c(4.0 * eps as f64);
                    products.accumulate(&mut acc, w, cd.a(), cd.b(), ef.a(), ef.b());
                    products.accumulate(&mut acc, w, ef.a(), ef.b(), cd.a(), cd.b());
                }
            }
            comps[(b - 1) * 6 + (a - 1)] = -acc.clone();
            comps[(a - 1) * 6 + (b - 1)] = acc;
        }
    }
    Tensor6 { comps }
}

/// Largest relative residual of the covariance law
/// `[M_ab, T_cd] = i(g_ac T_bd − g_bc T_ad + g_ad T_cb − g_bd T_ca)`,
/// compared on the leading `block × block` corner when given.
pub fn tensor_covariance_residual(gens: &Generators, t: &Tensor6, block: Option<usize>) -> f64 {
    let cut = |m: CMatrix| match block {
        Some(n) => linalg::leading_block(&m, n),
        None => m,
    };
    let mut worst = 0.0_f64;
    for ab in GeneratorIndex::all() {
        let (a, b) = (ab.a(), ab.b());
        for c in 1..=6 {
            for d in c..=6 {
                let lhs = linalg::commutator(gens.get(ab), t.get(c, d));
                let g = |x, y| linalg::c(Metric::g(x, y) as f64);
                let rhs = (t.get(b, d) * g(a, c) - t.get(a, d) * g(b, c) + t.get(c, b) * g(a, d)
                    - t.get(c, a) * g(b, d))
                    * linalg::I;
                worst = worst.max(linalg::relative_residual(&cut(lhs), &cut(rhs)));
            }
        }
    }
    worst
}

/// Hand-expanded component forms of the restrictive tensors written with
/// `J_ij = M_ij`, `K_i = M_i5`, `L_i = M_i6`, `h = M_56`. They are an
/// independent route to the contractions in [`tensor_t`] and [`tensor_r`].
pub mod expanded {
    use super::*;
    use crate::linalg::anticommutator as ac;

    struct Parts<'a> {
        gens: &'a Generators,
    }

    impl Parts<'_> {
        fn j(&self, i: usize, k: usize) -> CMatrix {
            self.gens.m(i, k)
        }
        fn k(&self, i: usize) -> CMatrix {
            self.gens.m(i, 5)
        }
        fn l(&self, i: usize) -> CMatrix {
            self.gens.m(i, 6)
        }
        fn h(&self) -> CMatrix {
            self.gens.m(5, 6)
        }
    }

    fn eps4(i: usize, j: usize, k: usize, l: usize) -> f64 {
        levi_civita(&[i, j, k, l]) as f64
    }

    /// Component `T̃_ab` from the expanded formulas.
    pub fn t_component(gens: &Generators, c: f64, a: usize, b: usize) -> CMatrix {
        let p = Parts { gens };
        let n = gens.dim();
        let (lo, hi) = (a.min(b), a.max(b));
        let id = linalg::identity(n);
        let cc = linalg::c(c);
        match (lo, hi) {
            (i, j) if j <= 4 => {
                let mut acc = id * linalg::c(c * if i == j { 1.0 } else { 0.0 });
                for k in 1..=4 {
                    acc += ac(&p.j(i, k), &p.j(j, k));
                }
                acc - ac(&p.k(i), &p.k(j)) - ac(&p.l(i), &p.l(j))
            }
            (i, 5) if i <= 4 => {
                let mut acc = -ac(&p.h(), &p.l(i));
                for j in 1..=4 {
                    acc -= ac(&p.j(i, j), &p.k(j));
                }
                acc
            }
            (i, 6) if i <= 4 => {
                let mut acc = ac(&p.h(), &p.k(i));
                for j in 1..=4 {
                    acc -= ac(&p.j(i, j), &p.l(j));
                }
                acc
            }
            (5, 6) => (1..=4).fold(linalg::zeros(n), |acc, i| acc + ac(&p.k(i), &p.l(i))),
            (5, 5) => {
                let sq = (1..=4).fold(linalg::zeros(n), |acc, i| acc + linalg::mul(&p.k(i), &p.k(i)));
                (sq - linalg::mul(&p.h(), &p.h())) * linalg::c(2.0) - id * cc
            }
            (6, 6) => {
                let sq = (1..=4).fold(linalg::zeros(n), |acc, i| acc + linalg::mul(&p.l(i), &p.l(i)));
                (sq - linalg::mul(&p.h(), &p.h())) * linalg::c(2.0) - id * cc
            }
            _ => unreachable!("indices are in 1..=6"),
        }
    }

    /// `{K_k, L_l} − {L_k, K_l} − {h, J_kl}`.
    fn q(p: &Parts<'_>, k: usize, l: usize) -> CMatrix {
        ac(&p.k(k), &p.l(l)) - ac(&p.l(k), &p.k(l)) - ac(&p.h(), &p.j(k, l))
    }

    /// Component `R^ab` from the expanded formulas, normalized to the
    /// contraction in [`tensor_r`] (`ε^{123456} = +1`).
    pub fn r_component(gens: &Generators, a: usize, b: usize) -> CMatrix {
        if a > b {
            return -r_component(gens, b, a);
        }
        let p = Parts { gens };
        let n = gens.dim();
        let mut acc = linalg::zeros(n);
        match (a, b) {
            (x, y) if x == y => {}
            (i, j) if j <= 4 => {
                for k in 1..=4 {
                    for l in 1..=4 {
                        let e = eps4(i, j, k, l);
                        if e != 0.0 {
                            acc += q(&p, k, l) * linalg::c(-4.0 * e);
                        }
                    }
                }
            }
            (i, 5) | (i, 6) if i <= 4 => {
                let (v, w) = if b == 5 { (6, 4.0) } else { (5, -4.0) };
                for j in 1..=4 {
                    for k in 1..=4 {
                        for l in 1..=4 {
                            let e = eps4(i, j, k, l);
                            if e != 0.0 {
                                acc += ac(&gens.m(j, v), &p.j(k, l)) * linalg::c(w * e);
                            }
                        }
                    }
                }
            }
            (5, 6) => {
                for i in 1..=4 {
                    for j in 1..=4 {
                        for k in 1..=4 {
                            for l in 1..=4 {
                                let e = eps4(i, j, k, l);
                                if e != 0.0 {
                                    acc += linalg::mul(&p.j(i, j), &p.j(k, l)) * linalg::c(2.0 * e);
                                }
                            }
                        }
                    }
                }
            }
            _ => unreachable!("indices are in 1..=6"),
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(a: usize, b: usize) -> GeneratorIndex {
        GeneratorIndex::new(a, b).unwrap()
    }

    #[test]
    fn fifteen_generators_with_consistent_ordinals() {
        let all: Vec<_> = GeneratorIndex::all().collect();
        assert_eq!(all.len(), 15);
        for (k, g) in all.iter().enumerate() {
            assert_eq!(g.ordinal(), k);
            assert_eq!(GeneratorIndex::from_ordinal(k), Some(*g));
        }
        assert!(GeneratorIndex::new(3, 3).is_none());
        assert!(GeneratorIndex::new(4, 2).is_none());
        assert!(GeneratorIndex::new(0, 2).is_none());
        assert!(GeneratorIndex::new(5, 7).is_none());
    }

    #[test]
    fn metric_has_signature_four_two() {
        assert_eq!(Metric::signature(), (4, 2));
        for a in 1..=6 {
            for b in 1..=6 {
                let g2: i64 = (1..=6).map(|c| Metric::g(a, c) * Metric::g(c, b)).sum();
                assert_eq!(g2, i64::from(a == b));
            }
        }
    }

    #[test]
    fn k_h_commutator_gives_i_l() {
        let rhs = commutator_rhs(ix(1, 5), ix(5, 6), BracketMode::Quantum);
        assert_eq!(rhs, LinearCombo::generator(ix(1, 6)).scaled(Gaussian::new(0, 1)));
    }

    #[test]
    fn disjoint_pairs_commute() {
        assert!(commutator_rhs(ix(1, 2), ix(3, 4), BracketMode::Quantum).is_zero());
    }

    #[test]
    fn overlapping_rotations() {
        let rhs = commutator_rhs(ix(1, 2), ix(2, 3), BracketMode::Quantum);
        assert_eq!(rhs, LinearCombo::generator(ix(1, 3)).scaled(Gaussian::new(0, -1)));
    }

    #[test]
    fn classical_table_matches_printed_noncompact_brackets() {
        let cl = BracketMode::Classical;
        for i in 1..=4 {
            // {M_i5, M_56} = −M_i6 ; {M_i6, M_56} = M_i5
            assert_eq!(
                commutator_rhs(ix(i, 5), ix(5, 6), cl),
                LinearCombo::generator(ix(i, 6)).scaled(Gaussian::new(-1, 0))
            );
            assert_eq!(commutator_rhs(ix(i, 6), ix(5, 6), cl), LinearCombo::generator(ix(i, 5)));
            for k in 1..=4 {
                // {M_i5, M_k6} = −δ_ik M_56
                let expect = if i == k {
                    LinearCombo::generator(ix(5, 6)).scaled(Gaussian::new(-1, 0))
                } else {
                    LinearCombo::zero()
                };
                assert_eq!(commutator_rhs(ix(i, 5), ix(k, 6), cl), expect);
                if i != k {
                    // {M_i5, M_k5} = {M_i6, M_k6} = J_ik
                    let mut j = LinearCombo::zero();
                    j.add_oriented(i, k, Gaussian::new(1, 0));
                    assert_eq!(commutator_rhs(ix(i, 5), ix(k, 5), cl), j);
                    assert_eq!(commutator_rhs(ix(i, 6), ix(k, 6), cl), j);
                }
            }
        }
    }

    #[test]
    fn jacobi_is_exact_on_all_triples() {
        let triples = all_triples();
        assert_eq!(triples.len(), 455);
        assert_eq!(jacobi_residual(&triples, BracketMode::Quantum), 0);
        assert_eq!(jacobi_residual(&triples, BracketMode::Classical), 0);
        assert_eq!(jacobi_residual(&[[ix(1, 2), ix(2, 3), ix(1, 3)]], BracketMode::Quantum), 0);
        assert_eq!(jacobi_residual(&[[ix(1, 5), ix(5, 6), ix(1, 6)]], BracketMode::Quantum), 0);
    }

    #[test]
    fn levi_civita_normalization() {
        assert_eq!(levi_civita6([1, 2, 3, 4, 5, 6]), 1);
        assert_eq!(levi_civita6([2, 1, 3, 4, 5, 6]), -1);
        assert_eq!(levi_civita6([1, 2, 3, 6, 4, 5]), 1);
        assert_eq!(levi_civita6([1, 1, 3, 4, 5, 6]), 0);
    }

    #[test]
    fn zero_operators_give_zero_tensors() {
        let gens = Generators::from_fn(|_| linalg::zeros(3)).unwrap();
        for (_, m) in tensor_t(&gens, 0.0).iter() {
            assert_eq!(linalg::frobenius(m), 0.0);
        }
        for (_, m) in tensor_r(&gens).iter() {
            assert_eq!(linalg::frobenius(m), 0.0);
        }
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = Generators::from_fn(|g| linalg::zeros(if g.ordinal() == 7 { 2 } else { 3 }));
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 3, found: 2 })));
    }
}
