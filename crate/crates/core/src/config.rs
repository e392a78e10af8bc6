//! Engine configuration file (TOML).
//!
//! ```toml
//! [colors]
//! preset = "TypeFocus"
//! overrides = { class = "#FF0000" }
//!
//! [glyph]
//! scaling = "log"
//! typeRadius = 9.0
//!
//! [layout.force]
//! tractionThreshold = 0.5
//!
//! [relations.typeOf]
//! color = "#888888"
//! thickness = 1.0
//!
//! [relationVisibility]
//! typeOf = true
//! ```
//!
//! Every key is optional. `HELGRAPH_CONFIG` names the file to load.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glyph::{Color, ColorKey, ColorPreset, GlyphConstants, GlyphStyle, PresetName, ScalingMode};
use crate::layout::{ForceConfig, TidyConfig};
use crate::model::RelationName;

pub const CONFIG_ENV: &str = "HELGRAPH_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Parse(#[from] toml::de::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColorConfig {
    pub preset: PresetName,
    pub overrides: BTreeMap<ColorKey, Color>,
}

impl ColorConfig {
    pub fn resolve(&self) -> ColorPreset {
        let mut preset = ColorPreset::named(self.preset);
        preset.mapping.extend(self.overrides.iter().map(|(k, v)| (*k, *v)));
        preset
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GlyphConfig {
    pub scaling: ScalingMode,
    #[serde(flatten)]
    pub constants: GlyphConstants,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub tidy: TidyConfig,
    pub force: ForceConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationStyle {
    pub color: Color,
    pub thickness: f64,
}

pub fn default_relation_styles() -> BTreeMap<RelationName, RelationStyle> {
    use RelationName::*;
    [
        (Declares, "#7F7F7F", 2.0),
        (InheritsFrom, "#4C9F38", 2.5),
        (TypeOf, "#3A7BD5", 1.0),
        (Returns, "#D98E04", 1.0),
        (DependsOn, "#C0392B", 3.0),
        (References, "#8E44AD", 0.75),
    ]
    .into_iter()
    .map(|(r, c, t)| {
        (r, RelationStyle { color: c.parse().expect("valid literal"), thickness: t })
    })
    .collect()
}

/// Relations shown when a session starts: the structural skeleton,
/// inheritance and project dependencies.
pub fn default_relation_visibility() -> BTreeMap<RelationName, bool> {
    RelationName::ALL
        .into_iter()
        .map(|r| {
            let on = matches!(
                r,
                RelationName::Declares | RelationName::InheritsFrom | RelationName::DependsOn
            );
            (r, on)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct EngineConfig {
    pub colors: ColorConfig,
    pub glyph: GlyphConfig,
    pub layout: LayoutConfig,
    /// Per-relation overrides of the default styles.
    pub relations: BTreeMap<RelationName, RelationStyle>,
    /// Per-relation overrides of the default visibility.
    pub relation_visibility: BTreeMap<RelationName, bool>,
}

impl EngineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Loads the file named by `HELGRAPH_CONFIG`, else `fallback` if it
    /// exists, else defaults.
    pub fn discover(fallback: Option<&Path>) -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => match fallback {
                Some(p) if p.exists() => Self::load(p),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn glyph_style(&self) -> GlyphStyle {
        GlyphStyle {
            preset: self.colors.resolve(),
            scaling: self.glyph.scaling,
            constants: self.glyph.constants.clone(),
        }
    }

    pub fn relation_styles(&self) -> BTreeMap<RelationName, RelationStyle> {
        let mut styles = default_relation_styles();
        styles.extend(self.relations.iter().map(|(k, v)| (*k, *v)));
        styles
    }

    pub fn relation_visibility(&self) -> BTreeMap<RelationName, bool> {
        let mut vis = default_relation_visibility();
        vis.extend(self.relation_visibility.iter().map(|(k, v)| (*k, *v)));
        vis
    }
}
