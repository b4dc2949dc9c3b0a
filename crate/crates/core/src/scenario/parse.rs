use std::cell::RefCell;
use std::collections::BTreeSet;

use toml::{Table, Value};

use crate::error::{Error, Result};

/// A TOML table being consumed key by key; leftover keys are reported as
/// unknown fields.
pub(super) struct Section<'a> {
    path: String,
    table: &'a Table,
    used: RefCell<BTreeSet<&'a str>>,
}

impl<'a> Section<'a> {
    pub fn root(table: &'a Table) -> Self {
        Section {
            path: String::new(),
            table,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn field(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    pub fn err(&self, key: &str, message: impl Into<String>) -> Error {
        Error::invalid(self.field(key), message)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.table.get_key_value(key)?;
        self.used.borrow_mut().insert(k.as_str());
        Some(v)
    }

    pub fn section(&self, key: &str) -> Result<Option<Section<'a>>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Table(t)) => Ok(Some(Section {
                path: self.field(key),
                table: t,
                used: RefCell::new(BTreeSet::new()),
            })),
            Some(_) => Err(self.err(key, "expected a table")),
        }
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        let v = match self.get(key) {
            None => return Ok(None),
            Some(Value::Float(f)) => *f,
            Some(Value::Integer(i)) => *i as f64,
            Some(Value::String(s)) if matches!(s.trim(), "inf" | "+inf") => f64::INFINITY,
            Some(_) => return Err(self.err(key, "expected a number")),
        };
        if v.is_nan() {
            return Err(self.err(key, "NaN is not allowed"));
        }
        Ok(Some(v))
    }

    pub fn finite(&self, key: &str) -> Result<Option<f64>> {
        match self.number(key)? {
            Some(v) if !v.is_finite() => Err(self.err(key, "must be finite")),
            v => Ok(v),
        }
    }

    pub fn integer(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(self.err(key, "expected a non-negative integer")),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(self.err(key, "expected a string")),
        }
    }

    pub fn strings(&self, key: &str) -> Result<Option<Vec<&'a str>>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| self.err(key, "expected an array of strings"))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.err(key, "expected an array of strings")),
        }
    }

    /// Angle in radians, given as a number or as a string such as `"pi/2"`,
    /// `"0.25pi"` or `"-pi"`.
    pub fn angle(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(f)) if f.is_finite() => Ok(Some(*f)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(Value::String(s)) => parse_angle(s).map(Some).map_err(|m| self.err(key, m)),
            Some(_) => Err(self.err(key, "expected an angle in rad or a multiple of pi")),
        }
    }

    /// A quantity that may be given under one of several unit-suffixed keys,
    /// `<base>_<unit>`. Returns the value in SI units and the key used.
    pub fn quantity(&self, base: &str, units: &[(&str, f64)]) -> Result<Option<(f64, String)>> {
        let mut found: Option<(f64, String)> = None;
        for (unit, scale) in units {
            let key = format!("{base}_{unit}");
            if let Some(v) = self.number(&key)? {
                if let Some((_, prev)) = &found {
                    return Err(self.err(&key, format!("conflicts with `{}`", self.field(prev))));
                }
                found = Some((v * scale, key));
            }
        }
        Ok(found)
    }

    /// Like [`quantity`](Self::quantity) for a `{start, stop, points}` table.
    pub fn sweep(
        &self,
        base: &str,
        units: &[(&str, f64)],
    ) -> Result<Option<(super::Sweep, String)>> {
        let mut found = None;
        for (unit, scale) in units {
            let key = format!("{base}_{unit}");
            if let Some(s) = self.section(&key)? {
                if found.is_some() {
                    return Err(self.err(&key, "more than one sweep given"));
                }
                let start = s
                    .finite("start")?
                    .ok_or_else(|| s.err("start", "missing"))?;
                let stop = s.finite("stop")?.ok_or_else(|| s.err("stop", "missing"))?;
                let points = s
                    .integer("points")?
                    .ok_or_else(|| s.err("points", "missing"))?;
                s.finish()?;
                found = Some((sweep(&s, start * scale, stop * scale, points)?, key));
            }
        }
        Ok(found)
    }

    pub fn angle_sweep(&self, key: &str) -> Result<Option<super::Sweep>> {
        let Some(s) = self.section(key)? else {
            return Ok(None);
        };
        let start = s.angle("start")?.ok_or_else(|| s.err("start", "missing"))?;
        let stop = s.angle("stop")?.ok_or_else(|| s.err("stop", "missing"))?;
        let points = s
            .integer("points")?
            .ok_or_else(|| s.err("points", "missing"))?;
        s.finish()?;
        sweep(&s, start, stop, points).map(Some)
    }

    /// Fails on the first key that was never read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        match self.table.keys().find(|k| !used.contains(k.as_str())) {
            Some(k) => Err(self.err(k, "unknown field")),
            None => Ok(()),
        }
    }
}

fn sweep(s: &Section<'_>, start: f64, stop: f64, points: u64) -> Result<super::Sweep> {
    if points == 0 || points > 1_000_000 {
        return Err(s.err("points", "must be between 1 and 1000000"));
    }
    Ok(super::Sweep::Linear {
        start,
        stop,
        points: points as usize,
    })
}

/// Parses `"1.5"`, `"pi"`, `"-pi/2"`, `"0.25pi"`, `"3pi/4"`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim().replace(' ', "");
    let bad = || format!("cannot read `{text}` as an angle (use rad or forms like pi/2, 0.25pi)");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        c * std::f64::consts::PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
