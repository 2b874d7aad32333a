//! Named example classes, loaded from a JSON file.

use std::collections::BTreeMap;
use std::path::Path;

use gwpower::expr::{parse_expression, Kind};
use serde::Deserialize;

/// The catalog shipped with the binary.
pub const BUNDLED: &str = include_str!("../catalog.json");

/// Overrides the bundled catalog when `--catalog` is not given.
pub const CATALOG_ENV: &str = "GWPOWER_CATALOG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Gw,
    Variety,
}

impl From<EntryKind> for Kind {
    fn from(k: EntryKind) -> Kind {
        match k {
            EntryKind::Gw => Kind::Gw,
            EntryKind::Variety => Kind::Variety,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub kind: EntryKind,
    pub expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: BTreeMap<String, Entry>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Catalog {
    /// Parses catalog text. Every entry must have a well-formed, unique name
    /// and an expression that parses under its kind.
    pub fn parse(text: &str) -> Result<Catalog, String> {
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| format!("catalog: {e}"))?;
        let mut entries = BTreeMap::new();
        for e in file.entries {
            if !valid_name(&e.name) {
                return Err(format!("catalog: invalid entry name '{}'", e.name));
            }
            parse_expression(&e.expr, e.kind.into()).map_err(|err| format!("catalog entry '{}': {err}", e.name))?;
            if entries.insert(e.name.clone(), e.clone()).is_some() {
                return Err(format!("catalog: duplicate entry '{}'", e.name));
            }
        }
        Ok(Catalog { entries })
    }

    /// Loads from `path`, else from `$GWPOWER_CATALOG`, else the bundled file.
    pub fn load(path: Option<&Path>) -> Result<Catalog, String> {
        let env = std::env::var_os(CATALOG_ENV);
        let chosen = path.map(Path::to_path_buf).or_else(|| env.map(Into::into));
        match chosen {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| format!("catalog {}: {e}", p.display()))?;
                Catalog::parse(&text)
            }
            None => Catalog::parse(BUNDLED),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    /// Resolves `@name` references; anything else is returned unchanged.
    pub fn resolve<'a>(&'a self, text: &'a str) -> Result<(&'a str, Option<EntryKind>), String> {
        match text.strip_prefix('@') {
            Some(name) => self
                .get(name)
                .map(|e| (e.expr.as_str(), Some(e.kind)))
                .ok_or_else(|| format!("unknown catalog entry '{name}'")),
            None => Ok((text, None)),
        }
    }
}
