use serde::{Deserialize, Serialize};

use super::freq::Frequency;
use crate::error::{Error, Result};
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "AtomRepr", into = "AtomRepr")]
pub struct Atom {
    pub freq: Frequency,
    pub weight: Complex64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct AtomRepr {
    freq: Frequency,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl From<AtomRepr> for Atom {
    fn from(r: AtomRepr) -> Self {
        Atom {
            freq: r.freq,
            weight: Complex64::new(r.re, r.im),
        }
    }
}

impl From<Atom> for AtomRepr {
    fn from(a: Atom) -> Self {
        AtomRepr {
            freq: a.freq,
            re: a.weight.re,
            im: a.weight.im,
        }
    }
}

/// A complex measure on the circle with finitely many atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct AtomicCircleMeasure {
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    atoms: Vec<Atom>,
}

impl TryFrom<MeasureRepr> for AtomicCircleMeasure {
    type Error = Error;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        AtomicCircleMeasure::new(r.atoms)
    }
}

impl From<AtomicCircleMeasure> for MeasureRepr {
    fn from(m: AtomicCircleMeasure) -> Self {
        MeasureRepr { atoms: m.atoms }
    }
}

impl AtomicCircleMeasure {
    /// Rejects repeated frequencies and non-finite weights.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if let Some(a) = atoms
            .iter()
            .find(|a| !(a.weight.re.is_finite() && a.weight.im.is_finite()))
        {
            return Err(Error::InvalidArgument(format!("non-finite weight at {}", a.freq)));
        }
        let mut order: Vec<usize> = (0..atoms.len()).collect();
        order.sort_by(|&i, &j| atoms[i].freq.value().total_cmp(&atoms[j].freq.value()));
        for w in order.windows(2) {
            if atoms[w[0]].freq.same_point(&atoms[w[1]].freq) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate atom at {}",
                    atoms[w[0]].freq
                )));
            }
        }
        if order.len() > 1 {
            let (first, last) = (&atoms[order[0]], &atoms[order[order.len() - 1]]);
            if first.freq.same_point(&last.freq) {
                return Err(Error::InvalidArgument(format!("duplicate atom at {}", first.freq)));
            }
        }
        Ok(Self { atoms })
    }

    /// Real positive weights at float frequencies.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let atoms = pairs
            .iter()
            .map(|&(f, w)| {
                Ok(Atom {
                    freq: Frequency::float(f)?,
                    weight: Complex64::new(w, 0.0),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.norm()).sum()
    }

    /// `σ̂(g) = Σ_j w_j e^{2πi g λ_j}`.
    pub fn fourier_coeff(&self, g: i64) -> Complex64 {
        self.atoms.iter().map(|a| a.weight * a.freq.character(g)).sum()
    }

    /// `σ̃(B) = conj(σ(B⁻¹))`, whose coefficients are `conj(σ̂(g))`.
    pub fn reflected(&self) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    freq: a.freq.neg(),
                    weight: a.weight.conj(),
                })
                .collect(),
        }
    }

    /// Atoms in increasing order of frequency.
    pub fn sorted_atoms(&self) -> Vec<Atom> {
        let mut v = self.atoms.clone();
        v.sort_by(|a, b| a.freq.value().total_cmp(&b.freq.value()));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn coefficient_examples() {
        let mu = AtomicCircleMeasure::from_pairs(&[(0.25, 1.0)]).unwrap();
        assert!(approx(mu.fourier_coeff(2), Complex64::new(-1.0, 0.0)));
        let two = AtomicCircleMeasure::from_pairs(&[(0.0, 0.5), (0.5, 0.5)]).unwrap();
        assert!(approx(two.fourier_coeff(1), Complex64::new(0.0, 0.0)));
        assert!(approx(two.fourier_coeff(2), Complex64::new(1.0, 0.0)));
        assert!(approx(two.fourier_coeff(0), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn reflection_conjugates_coefficients() {
        let mu = AtomicCircleMeasure::new(vec![
            Atom {
                freq: Frequency::rational(1, 7).unwrap(),
                weight: Complex64::new(0.3, 0.4),
            },
            Atom {
                freq: Frequency::float(0.61).unwrap(),
                weight: Complex64::new(-1.0, 0.2),
            },
        ])
        .unwrap();
        let r = mu.reflected();
        for g in -5..=5 {
            assert!(approx(r.fourier_coeff(g), mu.fourier_coeff(g).conj()));
        }
    }

    #[test]
    fn duplicates_rejected_including_wraparound() {
        assert!(AtomicCircleMeasure::from_pairs(&[(0.2, 1.0), (0.2, 2.0)]).is_err());
        assert!(AtomicCircleMeasure::from_pairs(&[(0.0, 1.0), (0.999_999_999_999_99, 2.0)]).is_err());
    }

    #[test]
    fn json_layout() {
        let text = r#"{"atoms":[{"freq":"1/4","re":1.0,"im":0.0},{"freq":0.5,"re":0.5,"im":-0.5}]}"#;
        let mu: AtomicCircleMeasure = serde_json::from_str(text).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(serde_json::to_string(&mu).unwrap(), text);
    }
}
