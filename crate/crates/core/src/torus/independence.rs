use serde::Serialize;

use super::freq::{FiniteFrequencySet, Frequency};
use crate::error::{Error, Result};

pub const MAX_SET_SIZE: usize = 12;
pub const MAX_COEFF_BOUND: u32 = 20;
pub const SEARCH_BUDGET: u128 = 100_000_000;
/// Float tolerance for "is an integer".
pub const FLOAT_INT_TOL: f64 = 1e-9;

/// Outcome of the weak-independence search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Independence {
    /// No violation within the coefficient box (exact arithmetic).
    Independent,
    /// `Σ n_j λ_j ∈ Z` while some `n_j λ_j ∉ Z`.
    DependentWitness { witness: Vec<i64> },
    /// Float input: independence cannot be certified. A near-violation found
    /// at tolerance `1e-9` is reported when present.
    Inconclusive { near_witness: Option<Vec<i64>> },
}

/// Searches `|n_j| ≤ coeff_bound` for a violation of
/// `Σ n_j λ_j ∈ Z ⇒ n_j λ_j ∈ Z for all j`.
///
/// The reported witness is canonical: first nonzero entry positive, smallest
/// `ℓ¹` norm, then lexicographically smallest.
pub fn independence_check(k: &FiniteFrequencySet, coeff_bound: u32) -> Result<Independence> {
    if k.len() > MAX_SET_SIZE {
        return Err(Error::InvalidArgument(format!("|K| = {} > {MAX_SET_SIZE}", k.len())));
    }
    if coeff_bound > MAX_COEFF_BOUND {
        return Err(Error::InvalidArgument(format!(
            "bound {coeff_bound} > {MAX_COEFF_BOUND}"
        )));
    }
    let required = (2 * coeff_bound as u128 + 1).pow(k.len() as u32);
    if required > SEARCH_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            limit: SEARCH_BUDGET,
        });
    }
    if k.is_empty() || coeff_bound == 0 {
        return Ok(if k.all_exact() {
            Independence::Independent
        } else {
            Independence::Inconclusive { near_witness: None }
        });
    }
    if k.all_exact() {
        exact_search(k.freqs(), coeff_bound as i64).map(|w| match w {
            Some(witness) => Independence::DependentWitness { witness },
            None => Independence::Independent,
        })
    } else {
        let near_witness = float_search(&k.values(), coeff_bound as i64);
        Ok(Independence::Inconclusive { near_witness })
    }
}

fn better(candidate: &[i64], best: &Option<Vec<i64>>) -> bool {
    let first = candidate.iter().find(|&&x| x != 0);
    if first.is_none_or(|&x| x < 0) {
        return false;
    }
    match best {
        None => true,
        Some(b) => {
            let l1 = |v: &[i64]| v.iter().map(|x| x.abs()).sum::<i64>();
            (l1(candidate), candidate) < (l1(b), b.as_slice())
        }
    }
}

/// Odometer over `[-b, b]^k`, calling `visit` with the vector and the index of
/// the most significant coordinate that changed.
fn for_each_vector(k: usize, b: i64, mut visit: impl FnMut(&[i64], usize)) {
    let mut n = vec![-b; k];
    visit(&n, 0);
    while let Some(d) = (0..k).rev().find(|&d| n[d] < b) {
        n[d] += 1;
        for x in n.iter_mut().skip(d + 1) {
            *x = -b;
        }
        visit(&n, d);
    }
}

fn exact_search(freqs: &[Frequency], b: i64) -> Result<Option<Vec<i64>>> {
    let (nums, dens): (Vec<i128>, Vec<i128>) = freqs
        .iter()
        .map(|f| match f {
            Frequency::Exact(r) => (*r.numer() as i128, *r.denom() as i128),
            Frequency::Float(_) => unreachable!("exact path"),
        })
        .unzip();
    let mut lcm: i128 = 1;
    for &d in &dens {
        let g = num_integer::gcd(lcm, d);
        lcm = (lcm / g)
            .checked_mul(d)
            .filter(|l| *l < (1i128 << 100))
            .ok_or_else(|| Error::InvalidArgument("common denominator overflows".into()))?;
    }
    // residue of λ_j in (1/lcm)Z / Z
    let res: Vec<i128> = nums.iter().zip(&dens).map(|(p, q)| p * (lcm / q)).collect();
    let k = freqs.len();
    let mut prefix = vec![0i128; k + 1];
    let mut best: Option<Vec<i64>> = None;
    for_each_vector(k, b, |n, from| {
        for j in from..k {
            prefix[j + 1] = (prefix[j] + n[j] as i128 * res[j]).rem_euclid(lcm);
        }
        if prefix[k] != 0 || n.iter().all(|&x| x == 0) {
            return;
        }
        let violates = n.iter().zip(&dens).any(|(&nj, &q)| (nj as i128) % q != 0);
        if violates && better(n, &best) {
            best = Some(n.to_vec());
        }
    });
    Ok(best)
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= FLOAT_INT_TOL
}

fn float_search(lambda: &[f64], b: i64) -> Option<Vec<i64>> {
    let k = lambda.len();
    let mut prefix = vec![0.0f64; k + 1];
    let mut best: Option<Vec<i64>> = None;
    for_each_vector(k, b, |n, from| {
        for j in from..k {
            prefix[j + 1] = prefix[j] + n[j] as f64 * lambda[j];
        }
        if !near_integer(prefix[k]) || n.iter().all(|&x| x == 0) {
            return;
        }
        let violates = n.iter().zip(lambda).any(|(&nj, &l)| !near_integer(nj as f64 * l));
        if violates && better(n, &best) {
            best = Some(n.to_vec());
        }
    });
    best
}
