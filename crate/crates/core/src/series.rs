//! Time-stamped named norm records and their CSV form (`t,name,value`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub t: f64,
    pub name: String,
    pub value: f64,
}

/// Run identification carried alongside a series.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesOrigin {
    pub run_id: String,
    pub seed: u64,
    pub grid: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormSeries {
    entries: Vec<NormRecord>,
    last_time: BTreeMap<String, f64>,
    pub origin: Option<SeriesOrigin>,
}

pub const CSV_HEADER: &str = "t,name,value";

impl NormSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record; times must increase strictly per name and values
    /// must be finite and non-negative.
    pub fn push(&mut self, t: f64, name: &str, value: f64) -> Result<()> {
        if name.is_empty() || name.contains([',', '\n', '\r', '"']) {
            return Err(Error::Format(format!("invalid series name {name:?}")));
        }
        if !t.is_finite() {
            return Err(Error::domain(format!("{name}: non-finite time {t}")));
        }
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::domain(format!("{name}: value {value} at t = {t} is not finite and non-negative")));
        }
        if let Some(&last) = self.last_time.get(name) {
            if !(t > last) {
                return Err(Error::domain(format!("{name}: time {t} does not follow {last}")));
            }
        }
        self.last_time.insert(name.to_string(), t);
        self.entries.push(NormRecord {
            t,
            name: name.to_string(),
            value,
        });
        Ok(())
    }

    pub fn extend(&mut self, other: &NormSeries) -> Result<()> {
        for e in &other.entries {
            self.push(e.t, &e.name, e.value)?;
        }
        Ok(())
    }

    pub fn entries(&self) -> &[NormRecord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct names in first-appearance order.
    pub fn names(&self) -> Vec<&str> {
        let mut seen = Vec::<&str>::new();
        for e in &self.entries {
            if !seen.contains(&e.name.as_str()) {
                seen.push(&e.name);
            }
        }
        seen
    }

    pub fn contains(&self, name: &str) -> bool {
        self.last_time.contains_key(name)
    }

    /// `(t, value)` pairs of one name, in time order.
    pub fn get(&self, name: &str) -> Vec<(f64, f64)> {
        self.entries.iter().filter(|e| e.name == name).map(|e| (e.t, e.value)).collect()
    }

    pub fn require(&self, name: &str) -> Result<Vec<(f64, f64)>> {
        if !self.contains(name) {
            return Err(Error::domain(format!("series has no entries named {name}")));
        }
        Ok(self.get(name))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(32 * self.entries.len() + 16);
        s.push_str(CSV_HEADER);
        s.push('\n');
        for e in &self.entries {
            // `Display` for f64 prints the shortest decimal that round-trips.
            let _ = writeln!(s, "{},{},{}", e.t, e.name, e.value);
        }
        s
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == CSV_HEADER => {}
            other => return Err(Error::Format(format!("expected header {CSV_HEADER:?}, found {other:?}"))),
        }
        let mut out = NormSeries::new();
        for (k, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.splitn(3, ',');
            let (t, name, value) = match (parts.next(), parts.next(), parts.next()) {
                (Some(t), Some(n), Some(v)) => (t, n, v),
                _ => return Err(Error::Format(format!("line {}: expected three fields", k + 2))),
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {s:?}: {e}", k + 2)))
            };
            out.push(parse(t)?, name, parse(value)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_exact() {
        let mut s = NormSeries::new();
        s.push(0.0, "a", 0.1 + 0.2).unwrap();
        s.push(0.1, "a", 1e-300).unwrap();
        s.push(0.0, "u[s=0.5]", 123456.789).unwrap();
        let text = s.to_csv();
        assert!(text.starts_with("t,name,value\n"));
        assert!(!text.contains("e-"), "decimal notation expected: {text}");
        let back = NormSeries::from_csv(&text).unwrap();
        assert_eq!(back.entries(), s.entries());
        assert_eq!(back.names(), vec!["a", "u[s=0.5]"]);
    }

    #[test]
    fn invariants_enforced() {
        let mut s = NormSeries::new();
        s.push(1.0, "x", 1.0).unwrap();
        assert!(s.push(1.0, "x", 1.0).is_err());
        assert!(s.push(2.0, "x", -1.0).is_err());
        assert!(s.push(2.0, "x", f64::NAN).is_err());
        assert!(s.push(2.0, "x,y", 1.0).is_err());
        s.push(0.5, "y", 0.0).unwrap();
        assert!(NormSeries::from_csv("time,name,value\n").is_err());
        assert!(NormSeries::from_csv("t,name,value\n1,a\n").is_err());
    }
}
