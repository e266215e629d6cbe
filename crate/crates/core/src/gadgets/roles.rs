use std::fmt::Write as _;

use crate::error::GraphError;
use crate::graph::{data_lines, parse_field, Vertex};

/// Role name to vertex bindings, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleMap {
    entries: Vec<(String, Vertex)>,
}

impl RoleMap {
    pub fn bind(&mut self, name: impl Into<String>, v: Vertex) {
        self.entries.push((name.into(), v));
    }

    pub fn get(&self, name: &str) -> Option<Vertex> {
        self.entries.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// Like [`get`](Self::get) for names the builders always bind.
    pub fn expect(&self, name: &str) -> Vertex {
        self.get(name).unwrap_or_else(|| panic!("role {name} is not bound"))
    }

    /// Vertices named `prefix` followed by a decimal index, in index order.
    pub fn members(&self, prefix: &str) -> Vec<Vertex> {
        let mut found: Vec<(usize, Vertex)> = self
            .entries
            .iter()
            .filter_map(|(n, v)| {
                let rest = n.strip_prefix(prefix)?;
                if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) {
                    return None;
                }
                Some((rest.parse().ok()?, *v))
            })
            .collect();
        found.sort_unstable();
        found.into_iter().map(|(_, v)| v).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Vertex)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    /// True iff no vertex carries two names and no name is bound twice.
    pub fn is_injective(&self) -> bool {
        let mut names: Vec<&str> = self.entries.iter().map(|(n, _)| n.as_str()).collect();
        let mut vs: Vec<Vertex> = self.entries.iter().map(|&(_, v)| v).collect();
        names.sort_unstable();
        vs.sort_unstable();
        names.windows(2).all(|w| w[0] != w[1]) && vs.windows(2).all(|w| w[0] != w[1])
    }

    /// One `role vertex` pair per line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (n, v) in &self.entries {
            writeln!(out, "{n} {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<RoleMap, GraphError> {
        let mut map = RoleMap::default();
        for (no, line) in data_lines(text) {
            let mut fields = line.split_whitespace();
            let name = fields.next().expect("data lines are non-empty");
            let v: Vertex = parse_field(fields.next(), no, "vertex")?;
            if fields.next().is_some() {
                return Err(GraphError::Parse {
                    line: no,
                    message: "role line has extra fields".into(),
                });
            }
            if map.get(name).is_some() {
                return Err(GraphError::Parse {
                    line: no,
                    message: format!("role {name} bound twice"),
                });
            }
            map.bind(name, v);
        }
        Ok(map)
    }
}

/// `key=value` lines, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            writeln!(out, "{k}={v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Metadata, GraphError> {
        let mut meta = Metadata::default();
        for (no, line) in data_lines(text) {
            let (k, v) = line.split_once('=').ok_or_else(|| GraphError::Parse {
                line: no,
                message: "expected key=value".into(),
            })?;
            let k = k.trim();
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(GraphError::Parse {
                    line: no,
                    message: format!("invalid key `{k}`"),
                });
            }
            if meta.get(k).is_some() {
                return Err(GraphError::Parse {
                    line: no,
                    message: format!("key {k} repeated"),
                });
            }
            meta.set(k, v.trim());
        }
        Ok(meta)
    }
}
