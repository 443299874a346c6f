use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex64;

/// Coefficients with modulus at or below this are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// An exponent vector `m ∈ Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i32>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    /// `±e_j` in dimension `dim`.
    pub fn basis(dim: usize, j: usize, sign: i32) -> Self {
        let mut v = vec![0; dim];
        v[j] = sign;
        LatticePoint(v)
    }

    pub fn max_abs(&self) -> u32 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }
}

impl From<Vec<i32>> for LatticePoint {
    fn from(v: Vec<i32>) -> Self {
        LatticePoint(v)
    }
}

/// A finitely supported coefficient map `Z^n → C`, read as the trigonometric
/// polynomial `Σ c_m e^{2πi m·t}` on `T^n`.
///
/// Terms are kept in lexicographic order of their exponents so that iteration
/// and serialization are deterministic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct SparseTrigPoly {
    dim: usize,
    coeffs: BTreeMap<LatticePoint, Complex64>,
}

impl SparseTrigPoly {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        let mut p = Self::zero(dim)?;
        p.add_term(LatticePoint::zero(dim), c)?;
        Ok(p)
    }

    /// Builds a polynomial, summing repeated exponents and pruning zeros.
    pub fn from_terms<I, M>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, Complex64)>,
        M: Into<LatticePoint>,
    {
        let mut p = Self::zero(dim)?;
        for (m, c) in terms {
            p.accumulate(m.into(), c)?;
        }
        p.prune();
        Ok(p)
    }

    /// Adds `c` to the coefficient at `m`.
    pub fn add_term(&mut self, m: LatticePoint, c: Complex64) -> Result<()> {
        self.accumulate(m.clone(), c)?;
        if self.coeffs.get(&m).is_some_and(|v| v.norm() <= PRUNE_TOL) {
            self.coeffs.remove(&m);
        }
        Ok(())
    }

    fn accumulate(&mut self, m: LatticePoint, c: Complex64) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient at {:?}", m.0)));
        }
        *self.coeffs.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() > PRUNE_TOL);
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, coeffs: BTreeMap<LatticePoint, Complex64>) -> Self {
        let mut p = Self { dim, coeffs };
        p.prune();
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &[i32]) -> Complex64 {
        self.coeffs
            .get(&LatticePoint(m.to_vec()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(LatticePoint::max_abs).max().unwrap_or(0)
    }

    /// `Σ_m |c_m|`: the norm of the coefficient map in `ℓ¹(Z^n)`, i.e. the
    /// `A(T^n)` norm of the polynomial.
    pub fn a_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        Self::from_sorted_unchecked(self.dim, coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.accumulate(m.clone(), *c)?;
        }
        out.prune();
        Ok(out)
    }

    /// Product of polynomials (convolution of coefficient maps).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut coeffs: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                let m: Vec<i32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                *coeffs.entry(LatticePoint(m)).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        Ok(Self::from_sorted_unchecked(self.dim, coeffs))
    }

    /// Complex conjugate function: `c_m ↦ conj(c_{-m})`.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| (LatticePoint(m.0.iter().map(|x| -x).collect()), c.conj()))
            .collect();
        Self::from_sorted_unchecked(self.dim, coeffs)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Value at `t ∈ [0,1)^n` (fractions of a turn).
    pub fn eval(&self, t: &[f64]) -> Complex64 {
        debug_assert_eq!(t.len(), self.dim);
        let z: Vec<Complex64> = t.iter().map(|&x| Complex64::from_polar(1.0, TAU * x)).collect();
        self.eval_unimodular(&z)
    }

    /// Value at a point of `T^n` given as unit complex numbers `z_j`.
    pub fn eval_unimodular(&self, z: &[Complex64]) -> Complex64 {
        let deg = self.max_degree() as usize;
        let powers = PowerTable::new(z, deg);
        self.coeffs.iter().map(|(m, c)| c * powers.monomial(m.coords())).sum()
    }
}

/// `z_j^k` for `|k| ≤ deg`, built by repeated multiplication.
pub(crate) struct PowerTable {
    deg: usize,
    table: Vec<Complex64>,
}

impl PowerTable {
    pub(crate) fn new(z: &[Complex64], deg: usize) -> Self {
        let width = 2 * deg + 1;
        let mut table = vec![Complex64::new(1.0, 0.0); z.len() * width];
        for (j, &zj) in z.iter().enumerate() {
            let row = &mut table[j * width..(j + 1) * width];
            let inv = zj.conj();
            for k in 1..=deg {
                row[deg + k] = row[deg + k - 1] * zj;
                row[deg - k] = row[deg - k + 1] * inv;
            }
        }
        Self { deg, table }
    }

    pub(crate) fn monomial(&self, m: &[i32]) -> Complex64 {
        let width = 2 * self.deg + 1;
        let mut acc = Complex64::new(1.0, 0.0);
        for (j, &k) in m.iter().enumerate() {
            if k != 0 {
                acc *= self.table[j * width + (self.deg as i64 + k as i64) as usize];
            }
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    m: Vec<i32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    dim: usize,
    terms: Vec<TermRepr>,
}

impl TryFrom<PolyRepr> for SparseTrigPoly {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        SparseTrigPoly::from_terms(
            r.dim,
            r.terms
                .into_iter()
                .map(|t| (LatticePoint(t.m), Complex64::new(t.re, t.im))),
        )
    }
}

impl From<SparseTrigPoly> for PolyRepr {
    fn from(p: SparseTrigPoly) -> Self {
        PolyRepr {
            dim: p.dim,
            terms: p
                .coeffs
                .into_iter()
                .map(|(m, c)| TermRepr {
                    m: m.0,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zeros_are_pruned_and_duplicates_summed() {
        let p =
            SparseTrigPoly::from_terms(1, vec![(vec![1], c(0.5)), (vec![1], c(-0.5)), (vec![2], c(1e-16))]).unwrap();
        assert!(p.is_empty());
        let q = SparseTrigPoly::from_terms(1, vec![(vec![1], c(0.25)), (vec![1], c(0.25))]).unwrap();
        assert_eq!(q.coeff(&[1]), c(0.5));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = SparseTrigPoly::from_terms(2, vec![(vec![1], c(1.0))]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
        assert!(SparseTrigPoly::zero(0).is_err());
    }

    #[test]
    fn a_norm_examples() {
        let one = SparseTrigPoly::constant(1, c(1.0)).unwrap();
        assert_eq!(one.a_norm(), 1.0);
        let cos = SparseTrigPoly::from_terms(1, vec![(vec![1], c(0.5)), (vec![-1], c(0.5))]).unwrap();
        assert_eq!(cos.a_norm(), 1.0);
        assert_eq!(SparseTrigPoly::zero(3).unwrap().a_norm(), 0.0);
    }

    #[test]
    fn eval_cosine() {
        let cos = SparseTrigPoly::from_terms(1, vec![(vec![1], c(0.5)), (vec![-1], c(0.5))]).unwrap();
        for &t in &[0.0, 0.1, 0.25, 0.7] {
            let v = cos.eval(&[t]);
            assert!((v.re - (TAU * t).cos()).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn json_layout() {
        let p = SparseTrigPoly::from_terms(2, vec![(vec![1, -1], Complex64::new(0.5, -0.25))]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"dim":2,"terms":[{"m":[1,-1],"re":0.5,"im":-0.25}]}"#);
        let back: SparseTrigPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<SparseTrigPoly>(r#"{"dim":1,"terms":[{"m":[1,2],"re":1,"im":0}]}"#).is_err());
    }
}
