//! Text and JSON entry points for everything read from files or the command line.
//!
//! Every function here accepts arbitrary input and reports malformed data as
//! [`Error::Parse`] (or the validation error of the target type) rather than
//! panicking; the fuzz targets call these directly.

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::helson::RotationModel;
use crate::mela::SignedGridMeasure;
use crate::riesz::RieszProductSpec;
use crate::torus::{AtomicCircleMeasure, FiniteFrequencySet, Frequency, SparseTrigPoly};

/// Inputs above this size are refused before parsing.
pub const MAX_INPUT_BYTES: usize = 16 << 20;
/// Largest lattice dimension accepted from JSON.
pub const MAX_JSON_DIM: usize = 64;

fn json<T: DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T> {
    if bytes.len() > MAX_INPUT_BYTES {
        return Err(Error::Parse(format!("{what}: input exceeds {MAX_INPUT_BYTES} bytes")));
    }
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// `"p/q"`, an integer, or a decimal in `[0, 1)` after reduction mod 1.
pub fn parse_frequency(s: &str) -> Result<Frequency> {
    s.trim().parse()
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Comma-separated integers, e.g. `"3,9,27"`.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    split_list(s)
        .map(|t| {
            t.parse::<i64>()
                .map_err(|e| Error::Parse(format!("integer {t:?}: {e}")))
        })
        .collect()
}

/// Comma-separated finite reals, e.g. `"2,4,8"`.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    split_list(s)
        .map(|t| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            Ok(_) => Err(Error::Parse(format!("non-finite value {t:?}"))),
            Err(e) => Err(Error::Parse(format!("real {t:?}: {e}"))),
        })
        .collect()
}

/// Comma-separated frequencies, e.g. `"0,1/2"` or `"0.414,0.732"`.
pub fn parse_frequency_list(s: &str) -> Result<FiniteFrequencySet> {
    FiniteFrequencySet::new(split_list(s).map(parse_frequency).collect::<Result<_>>()?)
}

pub fn parse_poly_json(bytes: &[u8]) -> Result<SparseTrigPoly> {
    #[derive(serde::Deserialize)]
    struct Dim {
        dim: usize,
    }
    let d: Dim = json(bytes, "polynomial")?;
    if d.dim > MAX_JSON_DIM {
        return Err(Error::Parse(format!("polynomial: dim {} > {MAX_JSON_DIM}", d.dim)));
    }
    json(bytes, "polynomial")
}

pub fn parse_measure_json(bytes: &[u8]) -> Result<AtomicCircleMeasure> {
    json(bytes, "measure")
}

/// `{"freqs": [...]}` or a bare array of frequencies.
pub fn parse_frequency_set_json(bytes: &[u8]) -> Result<FiniteFrequencySet> {
    json(bytes, "frequency set")
}

pub fn parse_signed_measure_json(bytes: &[u8]) -> Result<SignedGridMeasure> {
    json(bytes, "signed grid measure")
}

pub fn parse_riesz_spec_json(bytes: &[u8]) -> Result<RieszProductSpec> {
    json(bytes, "Riesz product")
}

pub fn parse_rotation_model_json(bytes: &[u8]) -> Result<RotationModel> {
    let m: RotationModel = json(bytes, "rotation model")?;
    RotationModel::new(m.alpha_rot, m.modes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_int_list("3, 9,27").unwrap(), vec![3, 9, 27]);
        assert!(parse_int_list("3,x").is_err());
        assert_eq!(parse_float_list("2,4.5").unwrap(), vec![2.0, 4.5]);
        assert!(parse_float_list("inf").is_err());
        let k = parse_frequency_list("0, 1/2").unwrap();
        assert!(k.all_exact() && k.len() == 2);
        assert!(parse_frequency_list("1/2,2/4").is_err());
    }

    #[test]
    fn json_inputs() {
        let p = parse_poly_json(br#"{"dim":1,"terms":[{"m":[1],"re":0.5,"im":0}]}"#).unwrap();
        assert_eq!(p.len(), 1);
        assert!(parse_poly_json(br#"{"dim":1,"terms":[{"m":[1,2],"re":0.5,"im":0}]}"#).is_err());
        assert!(parse_poly_json(br#"{"dim":100000000,"terms":[]}"#).is_err());
        let mu = parse_measure_json(br#"{"atoms":[{"freq":"1/4","re":1}]}"#).unwrap();
        assert_eq!(mu.len(), 1);
        assert!(parse_measure_json(b"{").is_err());
        let k = parse_frequency_set_json(br#"["1/3", 0.25]"#).unwrap();
        assert_eq!(k.len(), 2);
        let r = parse_riesz_spec_json(br#"{"alpha":0.5,"freqs":[1,2,3]}"#);
        assert!(r.unwrap_err().to_string().contains("dissociate"));
        let m = parse_rotation_model_json(br#"{"alpha_rot":0.4,"modes":[[1,[1.0,0.0]],[1,[0.0,1.0]]]}"#);
        assert!(m.is_err());
    }
}
