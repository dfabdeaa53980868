//! Flat `name = value` text records.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored. Keys
//! are kept in file order; duplicates are rejected.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rec = Record::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `name = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "empty key".into(),
                });
            }
            if rec.get(key).is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            rec.entries.push((key.to_string(), value.trim().to_string()));
        }
        Ok(rec)
    }

    /// Inserts or replaces `key`.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fails on the first key not listed in `allowed`.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(Error::Parse {
                line: 0,
                msg: format!("unknown key `{k}`"),
            }),
            None => Ok(()),
        }
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| Error::Parse {
                    line: 0,
                    msg: format!("`{key}`: {e}"),
                })
            })
            .transpose()
    }

    pub fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parsed(key)?.ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing key `{key}`"),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_comments_and_blank_lines() {
        let rec = Record::parse("# header\nalpha = 2\n\n q=1.5  # trailing\n").unwrap();
        assert_eq!(rec.get("alpha"), Some("2"));
        assert_eq!(rec.required::<f64>("q").unwrap(), 1.5);
        assert_eq!(rec.keys().collect::<Vec<_>>(), ["alpha", "q"]);
    }

    #[test]
    fn parse_errors() {
        assert!(Record::parse("alpha 2").is_err());
        assert!(Record::parse("= 2").is_err());
        assert!(Record::parse("a = 1\na = 2").is_err());
        let rec = Record::parse("a = x").unwrap();
        assert!(rec.required::<f64>("a").is_err());
        assert!(rec.required::<f64>("b").is_err());
        assert!(rec.reject_unknown(&["b"]).is_err());
        assert!(rec.reject_unknown(&["a", "b"]).is_ok());
    }

    #[test]
    fn set_overrides() {
        let mut rec = Record::parse("a = 1").unwrap();
        rec.set("a", 2);
        rec.set("b", "x");
        assert_eq!(rec.to_text(), "a = 2\nb = x\n");
    }
}
