//! Coefficient descriptors: `Z`, `Z/n`, `random:SEED` and `@file.json`.

use std::fs;

use orbit_site_core::fincat::FinCat;
use orbit_site_core::linalg::AbGroup;
use orbit_site_core::presheaf::{z_constant, AbPresheaf};

use crate::battery::random_coefficients;
use crate::codec::{CodecError, PresheafJson};

pub fn parse_coeff(spec: &str, c: &FinCat) -> Result<AbPresheaf, CodecError> {
    let s = spec.trim();
    if s == "Z" {
        return Ok(z_constant(c));
    }
    if let Some(n) = s.strip_prefix("Z/") {
        let n: u64 = n.trim().parse().map_err(|_| CodecError::Invalid(format!("bad modulus in {s:?}")))?;
        return Ok(AbPresheaf::constant(c, &AbGroup::cyclic(n)));
    }
    if let Some(seed) = s.strip_prefix("random:") {
        let seed: u64 = seed.trim().parse().map_err(|_| CodecError::Invalid(format!("bad seed in {s:?}")))?;
        let [a, _] = random_coefficients(c, "coefficient", seed);
        return Ok(a);
    }
    if let Some(path) = s.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| CodecError::Invalid(format!("{path}: {e}")))?;
        let p: PresheafJson = serde_json::from_str(&text)?;
        return p.to_abelian(c);
    }
    Err(CodecError::Invalid(format!("unknown coefficient {s:?}; expected Z, Z/n, random:SEED or @file")))
}
