//! On-disk character tables.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use frobchar_core::weylchar::DominantCharacterTable;
use frobchar_core::{Character, Error, Result, RootSystem, WeightVector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub root_type: String,
    pub p: u64,
    pub level: u32,
    pub e1_source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub lambda: WeightVector,
    pub character: Character,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTableFile {
    pub header: TableHeader,
    pub entries: Vec<TableEntry>,
}

impl CharacterTableFile {
    pub fn new(root: &RootSystem, p: u64, level: u32, e1_source: &str) -> Self {
        CharacterTableFile {
            header: TableHeader {
                schema_version: SCHEMA_VERSION,
                root_type: root.label(),
                p,
                level,
                e1_source: e1_source.to_string(),
            },
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, lambda: WeightVector, character: Character) {
        self.entries.push(TableEntry { lambda, character });
        self.entries.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables always serialise");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let file: CharacterTableFile =
            serde_json::from_str(text).map_err(|e| Error::domain("table", format!("malformed table: {e}")))?;
        if file.header.schema_version != SCHEMA_VERSION {
            return Err(Error::unsupported(
                "schema_version",
                format!("table schema {} is not supported", file.header.schema_version),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = file.entries.iter().find(|e| !seen.insert(e.lambda.clone())) {
            return Err(Error::domain("table", format!("duplicate entry for {}", dup.lambda)));
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::resource("table", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::resource("table", format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn root(&self) -> Result<RootSystem> {
        RootSystem::parse(&self.header.root_type)
    }

    /// Validated in-memory table.
    pub fn to_dominant_table(&self) -> Result<DominantCharacterTable> {
        let mut table = DominantCharacterTable::new(self.root()?);
        for e in &self.entries {
            table.insert(e.lambda.clone(), e.character.clone())?;
        }
        Ok(table)
    }
}
