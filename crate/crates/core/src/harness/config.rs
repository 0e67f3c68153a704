use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// Raw `key=value` pairs as read from a config file.
///
/// One pair per line, `#` starts a comment, blank lines are ignored. Keys
/// carry a section prefix (`grid.num_points`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected key=value, got `{line}`", no + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Config(format!("line {}: malformed key `{key}`", no + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", no + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Defaults only when `path` is `None`.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Config::default()), Self::load)
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// A documented key with its default.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

pub(crate) const fn key(name: &'static str, default: &'static str, doc: &'static str) -> Key {
    Key { name, default, doc }
}

/// Every key of an experiment resolved against its defaults. This is the
/// snapshot stored in a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Rejects keys the experiment does not declare.
    pub fn resolve(experiment: &str, keys: &[Key], config: &Config) -> Result<Self> {
        if let Some((bad, _)) = config.iter().find(|(k, _)| !keys.iter().any(|d| d.name == *k)) {
            let valid: Vec<&str> = keys.iter().map(|d| d.name).collect();
            return Err(Error::Config(format!(
                "unknown key `{bad}` for {experiment}; valid keys: {}",
                valid.join(", ")
            )));
        }
        let values = keys
            .iter()
            .map(|d| (d.name.to_string(), config.get(d.name).unwrap_or(d.default).to_string()))
            .collect();
        Ok(Settings { values })
    }

    pub fn snapshot(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// The snapshot as config text; parsing it back resolves to `self`.
    pub fn to_config_text(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).expect("declared key")
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        number(self.str(key)).map_err(|e| bad(key, &e))
    }

    pub fn i64(&self, key: &str) -> Result<i64> {
        self.str(key).parse().map_err(|e| bad(key, &format!("{e}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.str(key).parse().map_err(|e| bad(key, &format!("{e}")))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        split(self.str(key)).map(|s| number(s).map_err(|e| bad(key, &e))).collect()
    }

    /// Comma-separated integers; `a..=b` expands to the inclusive range.
    pub fn i64_list(&self, key: &str) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        for item in split(self.str(key)) {
            if let Some((a, b)) = item.split_once("..=") {
                let (a, b): (i64, i64) = (
                    a.trim().parse().map_err(|e| bad(key, &format!("{e}")))?,
                    b.trim().parse().map_err(|e| bad(key, &format!("{e}")))?,
                );
                out.extend(a..=b);
            } else {
                out.push(item.parse().map_err(|e| bad(key, &format!("{e}")))?);
            }
        }
        Ok(out)
    }

    /// Comma-separated `a:b` pairs.
    pub fn pair_list(&self, key: &str) -> Result<Vec<(f64, f64)>> {
        split(self.str(key))
            .map(|item| {
                let (a, b) = item.split_once(':').ok_or_else(|| bad(key, &format!("expected a:b, got `{item}`")))?;
                Ok((number(a.trim()).map_err(|e| bad(key, &e))?, number(b.trim()).map_err(|e| bad(key, &e))?))
            })
            .collect()
    }

    pub fn str_list(&self, key: &str) -> Vec<String> {
        split(self.str(key)).map(str::to_string).collect()
    }
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn bad(key: &str, why: &str) -> Error {
    Error::Config(format!("bad value for `{key}`: {why}"))
}

/// A decimal or a fraction `p/q`.
fn number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let q: f64 = q.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            if q == 0.0 {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|e| format!("`{s}`: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: &[Key] = &[key("grid.num_points", "64", ""), key("params.eps", "1,1/4", ""), key("count.ks", "0..=3,7", "")];

    #[test]
    fn parse_and_resolve() {
        let c = Config::parse("# comment\n\ngrid.num_points = 128  # trailing\n").unwrap();
        let s = Settings::resolve("x", KEYS, &c).unwrap();
        assert_eq!(s.usize("grid.num_points").unwrap(), 128);
        assert_eq!(s.f64_list("params.eps").unwrap(), vec![1.0, 0.25]);
        assert_eq!(s.i64_list("count.ks").unwrap(), vec![0, 1, 2, 3, 7]);
        let again = Settings::resolve("x", KEYS, &Config::parse(&s.to_config_text()).unwrap()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejections() {
        assert!(matches!(Config::parse("novalue"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("a=1\na=2"), Err(Error::Config(_))));
        let c = Config::parse("grid.points=3").unwrap();
        assert!(matches!(Settings::resolve("x", KEYS, &c), Err(Error::Config(_))));
        let c = Config::parse("params.eps=1/0").unwrap();
        assert!(Settings::resolve("x", KEYS, &c).unwrap().f64_list("params.eps").is_err());
    }
}
