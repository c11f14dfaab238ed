//! On-disk cache of the Mellin-derived constants, stored as decimal strings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use mahler_core::mellin_asym::{AsymptoticModel, OscTerm};
use mahler_core::{BigReal, Real};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsCache {
    pub schema_version: u32,
    pub prec_bits: u32,
    pub entries: BTreeMap<String, String>,
}

const SCALARS: [&str; 8] = [
    "c0", "c1", "lg_rho", "L0", "L0prime", "lambda", "Mtilde0", "alpha",
];

/// Enough decimal digits for the string to parse back to the same binary value.
fn exact(x: &BigReal) -> String {
    let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1;
    x.to_sci(digits)
}

impl ConstantsCache {
    pub fn from_model(model: &AsymptoticModel<BigReal>) -> Self {
        let mut entries = BTreeMap::new();
        let scalars = [
            &model.c0,
            &model.c1,
            &model.lg_rho,
            &model.l0,
            &model.l0_prime,
            &model.lambda,
            &model.m_tilde_zero,
            &model.alpha,
        ];
        for (name, v) in SCALARS.iter().zip(scalars) {
            entries.insert(name.to_string(), exact(v));
        }
        for t in &model.osc {
            entries.insert(format!("A_{}", t.k), exact(&t.a));
            entries.insert(format!("B_{}", t.k), exact(&t.b));
            entries.insert(format!("C_{}", t.k), exact(&t.c));
        }
        ConstantsCache {
            schema_version: SCHEMA_VERSION,
            prec_bits: model.prec,
            entries,
        }
    }

    /// Rebuilds a model at `prec ≤ prec_bits` with `terms` oscillatory terms, if
    /// every needed entry is present.
    pub fn model(&self, terms: usize, prec: u32) -> Option<AsymptoticModel<BigReal>> {
        if self.schema_version != SCHEMA_VERSION || self.prec_bits < prec {
            return None;
        }
        let get =
            |k: &str| -> Option<BigReal> { BigReal::parse_decimal(self.entries.get(k)?, prec) };
        let osc = (1..=terms)
            .map(|k| {
                Some(OscTerm {
                    k,
                    a: get(&format!("A_{k}"))?,
                    b: get(&format!("B_{k}"))?,
                    c: get(&format!("C_{k}"))?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(AsymptoticModel {
            prec,
            c0: get("c0")?,
            c1: get("c1")?,
            lg_rho: get("lg_rho")?,
            l0: get("L0")?,
            l0_prime: get("L0prime")?,
            lambda: get("lambda")?,
            m_tilde_zero: get("Mtilde0")?,
            alpha: get("alpha")?,
            osc,
        })
    }
}

/// Reads the cache; a missing file is silent, an unreadable one logs a warning.
pub fn load(path: &Path) -> Option<ConstantsCache> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
        Err(e) => {
            log::warn!("ignoring constants cache {}: {e}", path.display());
            return None;
        }
    };
    match serde_json::from_str::<ConstantsCache>(&text) {
        Ok(c) if c.schema_version == SCHEMA_VERSION => Some(c),
        Ok(c) => {
            log::warn!(
                "ignoring constants cache {}: schema version {} is not {SCHEMA_VERSION}",
                path.display(),
                c.schema_version
            );
            None
        }
        Err(e) => {
            log::warn!("ignoring corrupt constants cache {}: {e}", path.display());
            None
        }
    }
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn store(path: &Path, cache: &ConstantsCache) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, cache).map_err(std::io::Error::from)?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// The model for `(terms, prec)`, from the cache when possible.
pub fn model_with_cache(
    path: Option<&Path>,
    terms: usize,
    prec: u32,
) -> CliResult<AsymptoticModel<BigReal>> {
    if let Some(path) = path {
        if let Some(m) = load(path).and_then(|c| c.model(terms, prec)) {
            return Ok(m);
        }
    }
    let model = AsymptoticModel::<BigReal>::build(terms, prec)?;
    if let Some(path) = path {
        store(path, &ConstantsCache::from_model(&model))?;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let m = model_with_cache(Some(&path), 1, 96).unwrap();
        let cached = load(&path).unwrap();
        assert_eq!(cached.prec_bits, 96);
        let back = cached.model(1, 96).unwrap();
        assert_eq!(back.c0, m.c0);
        assert_eq!(back.osc[0].a, m.osc[0].a);
        assert!(cached.model(1, 128).is_none());
        assert!(cached.model(2, 96).is_none());
    }

    #[test]
    fn corrupt_file_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, "{ not json").unwrap();
        assert!(load(&path).is_none());
        assert!(load(&dir.path().join("missing.json")).is_none());
    }
}
