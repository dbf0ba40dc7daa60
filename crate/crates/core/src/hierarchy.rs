//! The supersense inventory and its tree.
//!
//! The inventory is read from a line-based data file:
//!
//! ```text
//! name <TAB> parent-or-"-" <TAB> group [<TAB> flags]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Flags are a
//! comma-separated list; the only flag currently in use is
//! `placement-uncertain`.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The inventory shipped with the crate.
pub const BUILTIN_HIERARCHY: &str = include_str!("../data/hierarchy.tsv");

/// Separator between scene role and function in a construal label.
pub const CONSTRUAL_ARROW: char = '↝';

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    Circumstance,
    Participant,
    Configuration,
    Context,
    Special,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::Circumstance,
        Group::Participant,
        Group::Configuration,
        Group::Context,
        Group::Special,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Circumstance => "Circumstance",
            Group::Participant => "Participant",
            Group::Configuration => "Configuration",
            Group::Context => "Context",
            Group::Special => "Special",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| format!("unknown group {s:?}"))
    }
}

/// One node of the inventory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Supersense {
    pub name: String,
    pub group: Group,
    pub parent: Option<String>,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl Supersense {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }

    pub fn placement_uncertain(&self) -> bool {
        self.flags.iter().any(|f| f == "placement-uncertain")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate label {name:?} (first defined on line {first_line})")]
    Duplicate {
        name: String,
        line: usize,
        first_line: usize,
    },
    #[error("line {line}: label {name:?} names unknown parent {parent:?}")]
    DanglingParent {
        name: String,
        parent: String,
        line: usize,
    },
    #[error("line {line}: label {name:?} is part of a parent cycle")]
    Cycle { name: String, line: usize },
    #[error("line {line}: label {name:?} is in group {group} but its parent {parent:?} is in group {parent_group}")]
    GroupMismatch {
        name: String,
        group: Group,
        parent: String,
        parent_group: Group,
        line: usize,
    },
    #[error("no roots")]
    NoRoots,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("no common ancestor for {0:?} and {1:?}")]
    NoCommonAncestor(String, String),
    #[error("reading hierarchy file: {0}")]
    Io(String),
}

/// The supersense forest. Immutable once loaded.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    nodes: Vec<Supersense>,
    index: HashMap<String, usize>,
}

struct RawRow {
    name: String,
    parent: Option<String>,
    group: Group,
    flags: Vec<String>,
    line: usize,
}

impl Hierarchy {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_HIERARCHY).expect("builtin hierarchy is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HierarchyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| HierarchyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses and checks an inventory file.
    pub fn parse(text: &str) -> Result<Self, HierarchyError> {
        let mut rows: Vec<RawRow> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() < 3 || cols.len() > 4 {
                return Err(HierarchyError::Syntax {
                    line,
                    message: format!("expected 3 or 4 tab-separated columns, found {}", cols.len()),
                });
            }
            let name = cols[0].trim();
            if name.is_empty() {
                return Err(HierarchyError::Syntax {
                    line,
                    message: "empty label name".into(),
                });
            }
            let parent = match cols[1].trim() {
                "-" => None,
                "" => {
                    return Err(HierarchyError::Syntax {
                        line,
                        message: "empty parent column (use \"-\" for roots)".into(),
                    })
                }
                p => Some(p.to_string()),
            };
            let group: Group = cols[2]
                .trim()
                .parse()
                .map_err(|message| HierarchyError::Syntax { line, message })?;
            let flags = cols
                .get(3)
                .map(|f| {
                    f.split(',')
                        .map(str::trim)
                        .filter(|f| !f.is_empty())
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default();

            if let Some(&first) = index.get(name) {
                return Err(HierarchyError::Duplicate {
                    name: name.to_string(),
                    line,
                    first_line: rows[first].line,
                });
            }
            index.insert(name.to_string(), rows.len());
            rows.push(RawRow {
                name: name.to_string(),
                parent,
                group,
                flags,
                line,
            });
        }

        if rows.is_empty() {
            return Err(HierarchyError::NoRoots);
        }

        for row in &rows {
            if let Some(parent) = &row.parent {
                match index.get(parent) {
                    None => {
                        return Err(HierarchyError::DanglingParent {
                            name: row.name.clone(),
                            parent: parent.clone(),
                            line: row.line,
                        })
                    }
                    Some(&p) if rows[p].group != row.group => {
                        return Err(HierarchyError::GroupMismatch {
                            name: row.name.clone(),
                            group: row.group,
                            parent: parent.clone(),
                            parent_group: rows[p].group,
                            line: row.line,
                        })
                    }
                    Some(_) => {}
                }
            }
        }

        let mut depths = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut depth = 0usize;
            let mut cursor = row;
            while let Some(parent) = &cursor.parent {
                depth += 1;
                if depth > rows.len() {
                    return Err(HierarchyError::Cycle {
                        name: row.name.clone(),
                        line: row.line,
                    });
                }
                cursor = &rows[index[parent]];
            }
            depths.push(depth);
        }

        if !rows.iter().any(|r| r.parent.is_none()) {
            return Err(HierarchyError::NoRoots);
        }

        let nodes = rows
            .into_iter()
            .zip(depths)
            .map(|(row, depth)| Supersense {
                name: row.name,
                group: row.group,
                parent: row.parent,
                depth,
                flags: row.flags,
            })
            .collect();
        Ok(Hierarchy { nodes, index })
    }

    pub fn get(&self, name: &str) -> Option<&Supersense> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn require(&self, name: &str) -> Result<&Supersense, HierarchyError> {
        self.get(name)
            .ok_or_else(|| HierarchyError::UnknownLabel(name.to_string()))
    }

    /// Nodes in file order.
    pub fn iter(&self) -> impl Iterator<Item = &Supersense> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = &Supersense> {
        self.nodes.iter().filter(|n| n.is_root())
    }

    pub fn children<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Supersense> + 'a {
        self.nodes
            .iter()
            .filter(move |n| n.parent.as_deref() == Some(name))
    }

    /// The label itself followed by its parent chain up to the root.
    pub fn ancestors(&self, name: &str) -> Result<Vec<&Supersense>, HierarchyError> {
        let mut chain = vec![self.require(name)?];
        while let Some(parent) = &chain[chain.len() - 1].parent {
            chain.push(&self.nodes[self.index[parent]]);
        }
        Ok(chain)
    }

    pub fn root_of(&self, name: &str) -> Result<&Supersense, HierarchyError> {
        Ok(*self.ancestors(name)?.last().expect("chain is non-empty"))
    }

    /// Reflexive ancestor test.
    pub fn subsumes(&self, ancestor: &str, descendant: &str) -> Result<bool, HierarchyError> {
        self.require(ancestor)?;
        Ok(self
            .ancestors(descendant)?
            .iter()
            .any(|n| n.name == ancestor))
    }

    /// Deepest common ancestor of two labels in the same tree.
    pub fn lca(&self, a: &str, b: &str) -> Result<&Supersense, HierarchyError> {
        let chain_a = self.ancestors(a)?;
        let chain_b = self.ancestors(b)?;
        chain_a
            .iter()
            .find(|n| chain_b.iter().any(|m| m.name == n.name))
            .copied()
            .ok_or_else(|| HierarchyError::NoCommonAncestor(a.to_string(), b.to_string()))
    }

    /// Both members of the construal must be inventory labels.
    pub fn check_construal(&self, label: &ConstrualLabel) -> Result<(), HierarchyError> {
        self.require(&label.scene)?;
        self.require(&label.function)?;
        Ok(())
    }
}

/// A scene role paired with the marker's lexical function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConstrualLabel {
    pub scene: String,
    pub function: String,
}

impl ConstrualLabel {
    pub fn new(scene: impl Into<String>, function: impl Into<String>) -> Self {
        ConstrualLabel {
            scene: scene.into(),
            function: function.into(),
        }
    }

    pub fn congruent(label: impl Into<String>) -> Self {
        let label = label.into();
        ConstrualLabel {
            scene: label.clone(),
            function: label,
        }
    }

    pub fn is_congruent(&self) -> bool {
        self.scene == self.function
    }

    /// Same scene, different function.
    pub fn with_function(&self, function: impl Into<String>) -> Self {
        ConstrualLabel::new(self.scene.clone(), function)
    }
}

impl fmt::Display for ConstrualLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_congruent() {
            f.write_str(&self.scene)
        } else {
            write!(f, "{}{}{}", self.scene, CONSTRUAL_ARROW, self.function)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed construal label {0:?}")]
pub struct ConstrualParseError(pub String);

impl FromStr for ConstrualLabel {
    type Err = ConstrualParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let valid = |part: &str| !part.is_empty() && !part.chars().any(char::is_whitespace);
        match s.split_once(CONSTRUAL_ARROW) {
            Some((scene, function)) if valid(scene) && valid(function) && !function.contains(CONSTRUAL_ARROW) => {
                Ok(ConstrualLabel::new(scene, function))
            }
            None if valid(s) => Ok(ConstrualLabel::congruent(s)),
            _ => Err(ConstrualParseError(s.to_string())),
        }
    }
}

impl TryFrom<String> for ConstrualLabel {
    type Error = ConstrualParseError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<ConstrualLabel> for String {
    fn from(label: ConstrualLabel) -> Self {
        label.to_string()
    }
}
