//! Harmonic polynomials on S³ and the truncated Hilbert space they span.
//!
//! Level `n` consists of homogeneous degree-`n` polynomials in four
//! variables annihilated by the Laplacian; restricted to the unit sphere
//! they carry the `(n+1)²`-dimensional energy eigenspace. Kernels are found
//! in exact rational arithmetic; only the orthonormalization is floating
//! point.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exponents `(a1, a2, a3, a4)` of `x1^a1 x2^a2 x3^a3 x4^a4`.
pub type Exponents = [u32; 4];

pub trait Coefficient:
    Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Coefficient for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Coefficient for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

/// Sparse homogeneous polynomial in `x1..x4`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial4<C> {
    degree: u32,
    coeffs: BTreeMap<Exponents, C>,
}

pub type RationalPoly = Polynomial4<BigRational>;
pub type ComplexPoly = Polynomial4<Complex64>;

fn total(e: &Exponents) -> u32 {
    e.iter().sum()
}

impl<C: Coefficient> Polynomial4<C> {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(exponents: Exponents, c: C) -> Self {
        let mut p = Self::zero(total(&exponents));
        p.accumulate(exponents, c);
        p
    }

    /// Builds a polynomial from terms, all of which must have total degree `degree`.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Exponents, C)>) -> Result<Self> {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            if total(&e) != degree {
                return Err(Error::NotHomogeneous {
                    exponents: e,
                    expected: degree,
                    found: total(&e),
                });
            }
            p.accumulate(e, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, e: Exponents, c: C) {
        debug_assert_eq!(total(&e), self.degree);
        let slot = self.coeffs.entry(e).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, e: &Exponents) -> C {
        self.coeffs.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.degree);
        for (e, c) in &self.coeffs {
            out.accumulate(*e, c.clone() * s.clone());
        }
        out
    }

    /// Sum of two polynomials of the same degree.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "cannot add homogeneous polynomials of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = Self::zero(degree);
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.accumulate(*e, c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.accumulate(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `∂/∂x_k`, `k` in `0..4`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[k] > 0 {
                let mut d = *e;
                d[k] -= 1;
                out.accumulate(d, c.clone() * C::from_int(e[k] as i64));
            }
        }
        out
    }

    /// Multiplication by `x_k`, `k` in `0..4`.
    pub fn mul_coordinate(&self, k: usize) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (e, c) in &self.coeffs {
            let mut d = *e;
            d[k] += 1;
            out.accumulate(d, c.clone());
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(2));
        for (e, c) in &self.coeffs {
            for k in 0..4 {
                if e[k] >= 2 {
                    let mut d = *e;
                    d[k] -= 2;
                    out.accumulate(d, c.clone() * C::from_int((e[k] * (e[k] - 1)) as i64));
                }
            }
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial4<D> {
        let mut out = Polynomial4::zero(self.degree);
        for (e, c) in &self.coeffs {
            out.accumulate(*e, f(c));
        }
        out
    }
}

impl RationalPoly {
    pub fn to_complex(&self) -> ComplexPoly {
        self.map(|q| Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
    }
}

impl ComplexPoly {
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// All exponent tuples of total degree `n`, in a fixed lexicographically
/// descending order.
pub fn monomials(n: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for a1 in (0..=n).rev() {
        for a2 in (0..=n - a1).rev() {
            for a3 in (0..=n - a1 - a2).rev() {
                out.push([a1, a2, a3, n - a1 - a2 - a3]);
            }
        }
    }
    out
}

/// `∫_{S³} x^a dΩ`: zero unless every exponent is even, otherwise
/// `2 Γ(b1)Γ(b2)Γ(b3)Γ(b4) / Γ(b1+b2+b3+b4)` with `b_i = (a_i+1)/2`.
///
/// With `a_i = 2k_i` this is `2π² Π_i (1/2)(3/2)…(k_i−1/2) / (Σk_i + 1)!`,
/// which is how it is evaluated.
pub fn monomial_sphere_integral(a: &Exponents) -> f64 {
    if a.iter().any(|x| x % 2 == 1) {
        return 0.0;
    }
    let mut value = 2.0 * PI * PI;
    let mut m = 0;
    for &x in a {
        let k = x / 2;
        for j in 0..k {
            value *= j as f64 + 0.5;
        }
        m += k;
    }
    for j in 2..=(m + 1) {
        value /= j as f64;
    }
    value
}

pub fn sphere_integral(p: &ComplexPoly) -> Complex64 {
    p.terms()
        .map(|(e, c)| c * monomial_sphere_integral(e))
        .sum()
}

/// `⟨p, q⟩ = ∫ p̄ q dΩ`, conjugate-linear in the first slot.
pub fn inner_product(p: &ComplexPoly, q: &ComplexPoly) -> Complex64 {
    let mut acc = Complex64::zero();
    for (e1, c1) in p.terms() {
        for (e2, c2) in q.terms() {
            let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
            acc += c1.conj() * c2 * monomial_sphere_integral(&e);
        }
    }
    acc
}

/// Integer matrix of the Laplacian from degree-`n` to degree-`(n-2)` monomials.
fn laplacian_matrix(n: u32) -> (Vec<Exponents>, Vec<Vec<BigRational>>) {
    let cols = monomials(n);
    if n < 2 {
        return (cols, Vec::new());
    }
    let rows = monomials(n - 2);
    let row_of: BTreeMap<Exponents, usize> = rows.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut m = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
    for (j, e) in cols.iter().enumerate() {
        for k in 0..4 {
            if e[k] >= 2 {
                let mut d = *e;
                d[k] -= 2;
                m[row_of[&d]][j] = BigRational::from_int((e[k] * (e[k] - 1)) as i64);
            }
        }
    }
    (cols, m)
}

/// Exact null space of a rational matrix with `ncols` columns, one vector
/// per free column.
fn rational_nullspace(mut m: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::from_int(1) / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..ncols {
                    let delta = factor.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::from_int(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// A basis of the degree-`n` harmonic polynomials (not orthonormal), of size `(n+1)²`.
pub fn harmonic_basis(n: u32) -> Vec<RationalPoly> {
    let (cols, lap) = laplacian_matrix(n);
    rational_nullspace(lap, cols.len())
        .into_iter()
        .map(|v| {
            Polynomial4::from_terms(n, cols.iter().copied().zip(v)).expect("monomials have degree n")
        })
        .collect()
}

/// `G[i][j] = ∫ x^{r_i} x^{c_j} dΩ`.
pub fn monomial_gram(rows: &[Exponents], cols: &[Exponents]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        let (a, b) = (rows[i], cols[j]);
        monomial_sphere_integral(&[a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    })
}

/// One energy level: the exact harmonic kernel and its orthonormalized form.
#[derive(Clone, Debug)]
pub struct Level {
    degree: u32,
    monomials: Vec<Exponents>,
    harmonic: Vec<RationalPoly>,
    /// Orthonormal basis as columns over `monomials`.
    coeffs: DMatrix<f64>,
}

impl Level {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn monomials(&self) -> &[Exponents] {
        &self.monomials
    }

    /// The exact (non-orthonormal) harmonic kernel.
    pub fn harmonic(&self) -> &[RationalPoly] {
        &self.harmonic
    }

    /// Orthonormal basis coefficients: one column per basis element.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn basis_polynomial(&self, k: usize) -> ComplexPoly {
        self.polynomial_from(self.coeffs.column(k).iter().map(|&x| Complex64::new(x, 0.0)))
    }

    fn polynomial_from(&self, column: impl Iterator<Item = Complex64>) -> ComplexPoly {
        Polynomial4::from_terms(self.degree, self.monomials.iter().copied().zip(column))
            .expect("level monomials share one degree")
    }
}

/// Orthonormal harmonic bases for levels `0..=N`, stacked level by level.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    levels: Vec<Level>,
    offsets: Vec<usize>,
}

impl TruncatedSpace {
    /// Builds and orthonormalizes every level up to `max_level`.
    pub fn orthonormalize(max_level: usize) -> Result<Self> {
        let mut levels = Vec::with_capacity(max_level + 1);
        let mut offsets = vec![0];
        for n in 0..=max_level {
            let level = build_level(n)?;
            offsets.push(offsets[n] + level.dim());
            levels.push(level);
        }
        Ok(Self { levels, offsets })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn offset(&self, n: usize) -> usize {
        self.offsets[n]
    }

    /// Block boundaries; `offsets()[n]..offsets()[n+1]` is level `n`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn level_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    pub fn basis_polynomial(&self, index: usize) -> ComplexPoly {
        let n = self.level_of(index);
        self.levels[n].basis_polynomial(index - self.offsets[n])
    }

    /// Gram matrix of two levels' orthonormal bases, `⟨e_i(m), e_j(n)⟩`.
    pub fn gram(&self, m: usize, n: usize) -> DMatrix<f64> {
        let (lm, ln) = (&self.levels[m], &self.levels[n]);
        lm.coeffs.transpose() * monomial_gram(&lm.monomials, &ln.monomials) * &ln.coeffs
    }

    /// The polynomial represented by the level-`n` slice of a state vector.
    pub fn level_polynomial(&self, n: usize, state: &DVector<Complex64>) -> ComplexPoly {
        let level = &self.levels[n];
        let slice = state.rows(self.offsets[n], level.dim());
        let coeffs = level.coeffs.map(|x| Complex64::new(x, 0.0)) * slice;
        level.polynomial_from(coeffs.iter().copied())
    }

    /// Matrix of a linear map given by its action on monomials.
    ///
    /// `image(e)` must be a homogeneous polynomial; entry `(k, l)` is
    /// `⟨e_k, O e_l⟩`, which is the orthogonal projection of `O e_l` onto the
    /// truncated space.
    pub fn represent(&self, image: impl Fn(&Exponents) -> ComplexPoly) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for (n, src) in self.levels.iter().enumerate() {
            let images: Vec<ComplexPoly> = src.monomials.iter().map(&image).collect();
            let Some(degree) = images.iter().find(|p| !p.is_zero()).map(|p| p.degree()) else {
                continue;
            };
            let targets = monomials(degree);
            let index: BTreeMap<Exponents, usize> =
                targets.iter().enumerate().map(|(i, e)| (*e, i)).collect();
            let mut img = DMatrix::<Complex64>::zeros(targets.len(), src.monomials.len());
            for (j, p) in images.iter().enumerate() {
                for (e, c) in p.terms() {
                    img[(index[e], j)] += c;
                }
            }
            let img_basis = img * src.coeffs.map(|x| Complex64::new(x, 0.0));
            for (m, dst) in self.levels.iter().enumerate() {
                if (m as u32 + degree) % 2 == 1 {
                    continue;
                }
                let g = dst.coeffs.transpose() * monomial_gram(&dst.monomials, &targets);
                let block = g.map(|x| Complex64::new(x, 0.0)) * &img_basis;
                out.view_mut((self.offsets[m], self.offsets[n]), (dst.dim(), src.dim()))
                    .copy_from(&block);
            }
        }
        out
    }

    pub fn export(&self) -> BasisExport {
        BasisExport {
            max_level: self.max_level(),
            dimension: self.dim(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelExport {
                    level: l.degree as usize,
                    basis: (0..l.dim())
                        .map(|k| {
                            l.basis_polynomial(k)
                                .terms()
                                .map(|(e, c)| TermExport {
                                    exponents: *e,
                                    re: c.re,
                                    im: c.im,
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BasisExport {
    pub max_level: usize,
    pub dimension: usize,
    pub levels: Vec<LevelExport>,
}

#[derive(Debug, Serialize)]
pub struct LevelExport {
    pub level: usize,
    pub basis: Vec<Vec<TermExport>>,
}

#[derive(Debug, Serialize)]
pub struct TermExport {
    pub exponents: Exponents,
    pub re: f64,
    pub im: f64,
}

fn build_level(n: usize) -> Result<Level> {
    let degree = n as u32;
    let harmonic = harmonic_basis(degree);
    let monos = monomials(degree);
    let kernel = DMatrix::from_fn(monos.len(), harmonic.len(), |i, j| {
        harmonic[j].coefficient(&monos[i]).to_f64().unwrap_or(f64::NAN)
    });
    let gram = kernel.transpose() * monomial_gram(&monos, &monos) * &kernel;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if min.is_nan() || min <= max * 1e-13 {
        return Err(Error::SingularGram {
            level: n,
            min_eigenvalue: min,
        });
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    let s = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    Ok(Level {
        degree,
        monomials: monos,
        harmonic,
        coeffs: kernel * s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(degree: u32, terms: &[(Exponents, f64)]) -> ComplexPoly {
        Polynomial4::from_terms(degree, terms.iter().map(|(e, c)| (*e, Complex64::new(*c, 0.0)))).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let l = poly(2, &[([2, 0, 0, 0], 1.0)]).laplacian();
        assert_eq!(l, poly(0, &[([0, 0, 0, 0], 2.0)]));
        assert!(poly(2, &[([1, 1, 0, 0], 1.0)]).laplacian().is_zero());
        assert!(poly(2, &[([2, 0, 0, 0], 1.0), ([0, 2, 0, 0], -1.0)]).laplacian().is_zero());
        let low = poly(1, &[([0, 0, 1, 0], 3.0)]).laplacian();
        assert!(low.is_zero());
        assert_eq!(low.degree(), 0);
    }

    #[test]
    fn inhomogeneous_terms_are_rejected() {
        let err = ComplexPoly::from_terms(2, [([1, 0, 0, 0], Complex64::new(1.0, 0.0))]);
        assert!(matches!(err, Err(Error::NotHomogeneous { expected: 2, found: 1, .. })));
    }

    #[test]
    fn harmonic_basis_small_degrees() {
        let b0 = harmonic_basis(0);
        assert_eq!(b0, vec![RationalPoly::constant(BigRational::from_int(1))]);
        let b1 = harmonic_basis(1);
        assert_eq!(b1.len(), 4);
        for (k, p) in b1.iter().enumerate() {
            let mut e = [0; 4];
            e[k] = 1;
            assert_eq!(p, &RationalPoly::monomial(e, BigRational::from_int(1)));
        }
        assert_eq!(harmonic_basis(2).len(), 9);
    }

    #[test]
    fn harmonic_kernels_are_exact() {
        for n in 0..=7 {
            let basis = harmonic_basis(n);
            assert_eq!(basis.len(), ((n + 1) * (n + 1)) as usize);
            for p in &basis {
                assert!(p.laplacian().is_zero(), "degree {n}");
            }
        }
    }

    #[test]
    fn sphere_integral_examples() {
        let one = poly(0, &[([0; 4], 1.0)]);
        assert!((sphere_integral(&one).re - 2.0 * PI * PI).abs() < 1e-14);
        assert_eq!(sphere_integral(&poly(1, &[([1, 0, 0, 0], 1.0)])), Complex64::zero());
        assert!((sphere_integral(&poly(2, &[([2, 0, 0, 0], 1.0)])).re - PI * PI / 2.0).abs() < 1e-14);
        assert!((sphere_integral(&poly(4, &[([4, 0, 0, 0], 1.0)])).re - PI * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn monomial_integral_matches_gamma_form() {
        // independent route through the Γ function
        let gamma_form = |a: &Exponents| {
            let b: Vec<f64> = a.iter().map(|&x| (x as f64 + 1.0) / 2.0).collect();
            2.0 * b.iter().map(|&x| libm::tgamma(x)).product::<f64>() / libm::tgamma(b.iter().sum())
        };
        for n in 0..=8 {
            for a in monomials(n) {
                if a.iter().all(|x| x % 2 == 0) {
                    let (v, w) = (monomial_sphere_integral(&a), gamma_form(&a));
                    assert!((v - w).abs() <= 1e-13 * w, "{a:?}: {v} vs {w}");
                }
            }
        }
    }

    #[test]
    fn orthonormal_levels() {
        let space = TruncatedSpace::orthonormalize(5).unwrap();
        assert_eq!(space.dim(), 1 + 4 + 9 + 16 + 25 + 36);
        for m in 0..=5 {
            for n in 0..=5 {
                let g = space.gram(m, n);
                let target = if m == n { DMatrix::identity(g.nrows(), g.ncols()) } else { DMatrix::zeros(g.nrows(), g.ncols()) };
                let err = (g - target).abs().max();
                if (m + n) % 2 == 1 {
                    assert_eq!(err, 0.0, "levels {m},{n}");
                } else {
                    assert!(err <= 1e-12, "levels {m},{n}: {err}");
                }
            }
        }
    }

    #[test]
    fn normalized_constant_and_linear_elements() {
        let space = TruncatedSpace::orthonormalize(1).unwrap();
        let c0 = space.basis_polynomial(0).coefficient(&[0; 4]).re;
        assert!((c0 - 1.0 / (2.0 * PI * PI).sqrt()).abs() < 1e-15);
        // x1 only mixes with itself at level 1 (the kernel is already orthogonal there)
        let e1 = space.basis_polynomial(1);
        assert_eq!(e1.len(), 1);
        assert!((e1.coefficient(&[1, 0, 0, 0]).re - 1.0 / (PI * PI / 2.0).sqrt()).abs() < 1e-15);
        assert_eq!(TruncatedSpace::orthonormalize(3).unwrap().dim(), 30);
    }

    #[test]
    fn level_lookup() {
        let space = TruncatedSpace::orthonormalize(3).unwrap();
        assert_eq!(space.offsets(), &[0, 1, 5, 14, 30]);
        assert_eq!(space.level_of(0), 0);
        assert_eq!(space.level_of(4), 1);
        assert_eq!(space.level_of(5), 2);
        assert_eq!(space.level_of(29), 3);
    }
}
