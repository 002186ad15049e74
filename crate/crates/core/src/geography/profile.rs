use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{build_composite_x, Composite, GeoError, Realizer};
use crate::catalog::{load_catalog, Catalog};

/// Which composite X the realizer repeats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompositeConfig {
    /// Base wedge only.
    None,
    /// A synthetic catalog block, looked up by name.
    Synthetic { block: String },
    /// Y(x)♯_Σ ⋯ ♯_Σ Y(x) (k copies) ♯_Σ Z(g).
    Paper { x: i64, g: i64, k: i64 },
}

/// Run configuration: catalog, composite X and enumeration bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub version: u32,
    pub name: String,
    /// Catalog file; relative paths resolve against the profile's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<PathBuf>,
    pub composite: CompositeConfig,
    pub chi_max: i64,
}

impl Profile {
    /// Small synthetic X = (10, 96), so enumeration stays fast.
    pub fn desk() -> Profile {
        Profile {
            version: 1,
            name: "desk".into(),
            catalog: None,
            composite: CompositeConfig::Synthetic { block: "Xd".into() },
            chi_max: 200,
        }
    }

    /// The composite with x = 10, g = 3, k = 100.
    pub fn paper() -> Profile {
        Profile {
            version: 1,
            name: "paper".into(),
            catalog: None,
            composite: CompositeConfig::Paper { x: 10, g: 3, k: 100 },
            chi_max: 200,
        }
    }

    pub fn load(path: &Path) -> Result<Profile, GeoError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeoError::Profile(format!("{}: {e}", path.display())))?;
        let mut p: Profile =
            serde_json::from_str(&text).map_err(|e| GeoError::Profile(format!("{}: {e}", path.display())))?;
        if p.version != 1 {
            return Err(GeoError::Profile(format!("unsupported profile version {}", p.version)));
        }
        if p.chi_max < 1 {
            return Err(GeoError::Profile("chi_max must be at least 1".into()));
        }
        if let Some(c) = &p.catalog {
            if c.is_relative() {
                let dir = path.parent().unwrap_or(Path::new("."));
                p.catalog = Some(dir.join(c));
            }
        }
        Ok(p)
    }

    /// `desk`, `paper`, or a path to a profile file.
    pub fn resolve(spec: &str) -> Result<Profile, GeoError> {
        match spec {
            "desk" => Ok(Profile::desk()),
            "paper" => Ok(Profile::paper()),
            path => Profile::load(Path::new(path)),
        }
    }

    pub fn catalog(&self) -> Result<Catalog, GeoError> {
        match &self.catalog {
            Some(p) => load_catalog(p).map_err(|e| GeoError::Profile(e.to_string())),
            None => Ok(Catalog::default_catalog()),
        }
    }

    pub fn composite(&self) -> Result<Option<Composite>, GeoError> {
        match &self.composite {
            CompositeConfig::None => Ok(None),
            CompositeConfig::Synthetic { block } => {
                let cat = self.catalog()?;
                let b = cat
                    .blocks
                    .iter()
                    .find(|b| &b.name == block)
                    .cloned()
                    .ok_or_else(|| GeoError::Profile(format!("catalog has no block `{block}`")))?;
                Composite::from_block(b).map(Some)
            }
            CompositeConfig::Paper { x, g, k } => build_composite_x(*x, *g, *k)?.composite().map(Some),
        }
    }

    pub fn realizer(&self) -> Result<Realizer, GeoError> {
        Ok(Realizer {
            composite: self.composite()?,
        })
    }
}
