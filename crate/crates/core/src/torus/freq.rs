use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Floats closer than this (circular distance) are the same frequency.
pub const FLOAT_FREQ_TOL: f64 = 1e-12;

/// A point of the circle `T = R/Z`, in fractions of a full turn.
///
/// Exact rationals are kept in lowest terms with value in `[0, 1)`. Floats are
/// reduced modulo one on construction.
#[derive(Clone, Copy, Debug)]
pub enum Frequency {
    Exact(Rational64),
    Float(f64),
}

impl Frequency {
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        // i128 keeps the reduction from overflowing on extreme inputs.
        let (n, d) = (num as i128, den as i128);
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let n = n.rem_euclid(d);
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        Ok(Frequency::Exact(Rational64::new_raw(n as i64, d as i64)))
    }

    pub fn float(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Parse(format!("non-finite frequency {x}")));
        }
        let mut r = x.rem_euclid(1.0);
        if r >= 1.0 {
            r = 0.0;
        }
        Ok(Frequency::Float(r))
    }

    pub fn value(&self) -> f64 {
        match self {
            Frequency::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Frequency::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Frequency::Exact(_))
    }

    /// The inverse element `-λ` of the circle group.
    pub fn neg(&self) -> Self {
        match self {
            Frequency::Exact(r) => Frequency::rational(-*r.numer(), *r.denom()).expect("nonzero denominator"),
            Frequency::Float(x) => Frequency::float(-x).expect("finite"),
        }
    }

    /// `g·λ mod 1` as a float in `[0, 1)`; exact reduction for rationals.
    pub fn times(&self, g: i64) -> f64 {
        match self {
            Frequency::Exact(r) => {
                let q = *r.denom() as i128;
                let p = (*r.numer() as i128 * g as i128).rem_euclid(q);
                p as f64 / q as f64
            }
            Frequency::Float(x) => (x * g as f64).rem_euclid(1.0),
        }
    }

    /// `e^{2πi g λ}`.
    pub fn character(&self, g: i64) -> crate::Complex64 {
        let phase = std::f64::consts::TAU * self.times(g);
        crate::Complex64::new(phase.cos(), phase.sin())
    }

    /// Same point of the circle: exact equality for two rationals, float tolerance otherwise.
    pub fn same_point(&self, other: &Frequency) -> bool {
        match (self, other) {
            (Frequency::Exact(a), Frequency::Exact(b)) => a == b,
            _ => circular_distance(self.value(), other.value()) <= FLOAT_FREQ_TOL,
        }
    }
}

/// Structural equality: an exact and a float frequency are never equal.
impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Frequency::Exact(a), Frequency::Exact(b)) => a == b,
            (Frequency::Float(a), Frequency::Float(b)) => a == b,
            _ => false,
        }
    }
}

/// Distance on `R/Z` between two reals.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Frequency::Float(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Frequency {
    type Err = Error;

    /// Accepts `"p/q"`, a bare integer `"p"`, or a decimal float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad numerator in {s:?}: {e}")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad denominator in {s:?}: {e}")))?;
            return Frequency::rational(p, q);
        }
        if let Ok(p) = s.parse::<i64>() {
            return Frequency::rational(p, 1);
        }
        let x: f64 = s
            .parse()
            .map_err(|e| Error::Parse(format!("bad frequency {s:?}: {e}")))?;
        Frequency::float(x)
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Frequency::Exact(_) => serializer.serialize_str(&self.to_string()),
            Frequency::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(x) => Frequency::float(x).map_err(serde::de::Error::custom),
        }
    }
}

/// A finite set of pairwise distinct circle frequencies.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteFrequencySet {
    freqs: Vec<Frequency>,
}

impl FiniteFrequencySet {
    pub fn new(freqs: Vec<Frequency>) -> Result<Self> {
        for (i, a) in freqs.iter().enumerate() {
            for b in &freqs[..i] {
                if a.same_point(b) {
                    return Err(Error::InvalidArgument(format!("duplicate frequency {a}")));
                }
            }
        }
        Ok(Self { freqs })
    }

    pub fn from_floats(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Frequency::float(x)).collect::<Result<_>>()?)
    }

    pub fn freqs(&self) -> &[Frequency] {
        &self.freqs
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.freqs.iter().map(Frequency::value).collect()
    }

    pub fn all_exact(&self) -> bool {
        self.freqs.iter().all(Frequency::is_exact)
    }

    /// `K⁻¹ = {-λ : λ ∈ K}`.
    pub fn inverse(&self) -> Self {
        Self {
            freqs: self.freqs.iter().map(Frequency::neg).collect(),
        }
    }

    /// Circular distance from `x` to the nearest element, `+∞` when empty.
    pub fn distance_to(&self, x: f64) -> f64 {
        self.freqs
            .iter()
            .map(|f| circular_distance(f.value(), x))
            .fold(f64::INFINITY, f64::min)
    }
}

impl<'de> Deserialize<'de> for FiniteFrequencySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Wrapped { freqs: Vec<Frequency> },
            Bare(Vec<Frequency>),
        }
        let freqs = match Raw::deserialize(deserializer)? {
            Raw::Wrapped { freqs } | Raw::Bare(freqs) => freqs,
        };
        FiniteFrequencySet::new(freqs).map_err(serde::de::Error::custom)
    }
}
