//! On-disk cache of reference values for convergence sweeps.
//!
//! One JSON file per `(nu, alpha, c, integrand, digits)` in the directory
//! named by `BESSELQUAD_CACHE_DIR`. Nothing is cached when it is unset.

use std::fs;
use std::path::PathBuf;

use besselquad::scalar::{parse_real, to_decimal, PrecisionContext, Real};
use besselquad::estimators::ReferenceValue;
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "BESSELQUAD_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub nu: String,
    pub alpha: String,
    pub c: String,
    pub integrand: String,
    pub digits: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    n_ref: usize,
    value: String,
    discrepancy: String,
    /// `-log10(discrepancy)`
    agreement_digits: f64,
}

impl CacheKey {
    fn file_name(&self) -> String {
        let raw = format!(
            "ref_nu{}_a{}_c{}_{}_d{}.json",
            self.nu, self.alpha, self.c, self.integrand, self.digits
        );
        raw.chars()
            .map(|ch| if ch.is_ascii_alphanumeric() || "._-".contains(ch) { ch } else { '_' })
            .collect()
    }
}

pub struct RefCache {
    dir: Option<PathBuf>,
}

impl RefCache {
    pub fn from_env() -> Self {
        Self {
            dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// Cached reference for `key`, if present, readable and for the same key.
    pub fn load(&self, key: &CacheKey, ctx: &PrecisionContext) -> Option<ReferenceValue> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != *key {
            return None;
        }
        Some(ReferenceValue {
            value: parse_real(&entry.value, ctx.bits()).ok()?,
            n_ref: entry.n_ref,
            discrepancy: parse_real(&entry.discrepancy, ctx.bits()).ok()?,
        })
    }

    /// Best effort; a cache that cannot be written is skipped.
    pub fn store(&self, key: &CacheKey, rv: &ReferenceValue) {
        let Some(path) = self.path(key) else { return };
        let entry = Entry {
            key: key.clone(),
            n_ref: rv.n_ref,
            value: to_decimal(&rv.value),
            discrepancy: to_decimal(&rv.discrepancy),
            agreement_digits: agreement_digits(&rv.discrepancy),
        };
        if let Some(dir) = path.parent() {
            let _ = fs::create_dir_all(dir);
        }
        if let Ok(text) = serde_json::to_string_pretty(&entry) {
            let _ = fs::write(path, text);
        }
    }
}

fn agreement_digits(d: &Real) -> f64 {
    if d.is_zero() {
        f64::from(d.prec()) * std::f64::consts::LOG10_2
    } else {
        -besselquad::scalar::log10_abs(d)
    }
}
