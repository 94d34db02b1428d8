use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use super::{curve_coeffs, fourier_from_parametrization, load_record, CurveRecord};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Loaded from a record file in the data directory.
    Vendored,
    /// Regenerated from the cubic in this process.
    Bootstrapped,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Vendored => "vendored",
            Provenance::Bootstrapped => "bootstrapped",
        }
    }
}

/// Lazily filled map from level to curve record. Orders grow on demand.
pub struct LevelRegistry {
    data_dir: Option<PathBuf>,
    cache: Mutex<HashMap<u32, (Arc<CurveRecord>, Provenance)>>,
}

impl LevelRegistry {
    pub fn new(data_dir: Option<PathBuf>) -> Self {
        LevelRegistry {
            data_dir,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Registry reading records from `$SI_DATA_DIR` when set.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("SI_DATA_DIR").map(PathBuf::from))
    }

    pub fn global() -> &'static LevelRegistry {
        static REG: OnceLock<LevelRegistry> = OnceLock::new();
        REG.get_or_init(LevelRegistry::from_env)
    }

    pub fn record_path(dir: &Path, level: u32) -> PathBuf {
        dir.join(format!("N{level:03}.rec"))
    }

    /// Record for `level` with at least `min_order` trusted coefficients.
    pub fn record(&self, level: u32, min_order: usize) -> Result<Arc<CurveRecord>> {
        self.record_with_provenance(level, min_order).map(|(r, _)| r)
    }

    pub fn record_with_provenance(
        &self,
        level: u32,
        min_order: usize,
    ) -> Result<(Arc<CurveRecord>, Provenance)> {
        let cubic = curve_coeffs(level)?;
        if let Some((r, p)) = self.cache.lock().unwrap().get(&level) {
            if r.order >= min_order {
                return Ok((r.clone(), *p));
            }
        }
        let mut found = None;
        if let Some(dir) = &self.data_dir {
            let path = Self::record_path(dir, level);
            if path.exists() {
                let rec = load_record(&path)?;
                if rec.level != level || rec.cubic != cubic {
                    return Err(Error::Malformed(format!(
                        "{} does not describe level {level}",
                        path.display()
                    )));
                }
                if rec.order >= min_order {
                    found = Some((rec.truncated(rec.order), Provenance::Vendored));
                }
            }
        }
        let (rec, prov) = match found {
            Some(f) => f,
            None => (
                fourier_from_parametrization(level, &cubic, min_order.max(DEFAULT_ORDER))?,
                Provenance::Bootstrapped,
            ),
        };
        let rec = Arc::new(rec);
        let mut cache = self.cache.lock().unwrap();
        let entry = cache.entry(level).or_insert_with(|| (rec.clone(), prov));
        if entry.0.order < rec.order {
            *entry = (rec.clone(), prov);
        }
        Ok((entry.0.clone(), entry.1))
    }
}
