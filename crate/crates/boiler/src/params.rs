//! Boiler constants and the in-equations they must satisfy.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Number of identical pumps feeding the boiler.
pub const NPUMPS: i64 = 5;

/// Largest sample period accepted; the pump-delay queue holds `2^INTERVAL` values.
pub const MAX_INTERVAL: i64 = 12;

const REFERENCE: &str = include_str!("../data/reference.params");

/// The constant assignment of the case study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoilerParams {
    /// Capacity of the boiler (litres).
    pub c: i64,
    /// Lower and upper limits in rescue mode.
    pub m1: i64,
    pub m2: i64,
    /// Lower and upper limits in normal mode.
    pub n1: i64,
    pub n2: i64,
    /// Lower and upper bounds of the best operating band.
    pub b1: i64,
    pub b2: i64,
    /// Maximal steam output (litres/sec).
    pub w: i64,
    /// Steam-rate increase and decrease per second.
    pub u1: i64,
    pub u2: i64,
    /// Minimal steam output.
    pub vminout: i64,
    /// Throughput of one pump (litres/sec).
    pub p: i64,
    /// Controller thresholds below `b1` and above `b2`.
    pub ftrd: i64,
    pub ftru: i64,
    /// Initial water quantity.
    pub initq: i64,
    /// Sample period in ticks, equal to the pump start-up delay.
    pub interval: i64,
}

/// One failed in-equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violated {} ({})", self.constraint, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing constant(s): {}", .0.join(", "))]
    Missing(Vec<&'static str>),
    #[error("invalid constants: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl BoilerParams {
    /// Parameter names in file and emission order.
    pub const KEYS: [&'static str; 16] = [
        "C", "M1", "N1", "B1", "B2", "N2", "M2", "W", "U1", "U2", "VMINOUT", "P", "FTRD", "FTRU",
        "INITQ", "INTERVAL",
    ];

    /// The constants shipped in `data/reference.params`.
    pub fn reference() -> BoilerParams {
        REFERENCE
            .parse()
            .expect("bundled reference parameters are valid")
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        Some(match key {
            "C" => self.c,
            "M1" => self.m1,
            "N1" => self.n1,
            "B1" => self.b1,
            "B2" => self.b2,
            "N2" => self.n2,
            "M2" => self.m2,
            "W" => self.w,
            "U1" => self.u1,
            "U2" => self.u2,
            "VMINOUT" => self.vminout,
            "P" => self.p,
            "FTRD" => self.ftrd,
            "FTRU" => self.ftru,
            "INITQ" => self.initq,
            "INTERVAL" => self.interval,
            _ => return None,
        })
    }

    fn slot(&mut self, key: &str) -> Option<&mut i64> {
        Some(match key {
            "C" => &mut self.c,
            "M1" => &mut self.m1,
            "N1" => &mut self.n1,
            "B1" => &mut self.b1,
            "B2" => &mut self.b2,
            "N2" => &mut self.n2,
            "M2" => &mut self.m2,
            "W" => &mut self.w,
            "U1" => &mut self.u1,
            "U2" => &mut self.u2,
            "VMINOUT" => &mut self.vminout,
            "P" => &mut self.p,
            "FTRD" => &mut self.ftrd,
            "FTRU" => &mut self.ftru,
            "INITQ" => &mut self.initq,
            "INTERVAL" => &mut self.interval,
            _ => return None,
        })
    }

    /// Returns a copy with `key` set to `value`.
    pub fn with(mut self, key: &str, value: i64) -> Option<BoilerParams> {
        *self.slot(key)? = value;
        Some(self)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&'static str, i64)> + '_ {
        Self::KEYS
            .iter()
            .map(|k| (*k, self.get(k).expect("every key has a field")))
    }

    /// Maximal total pump throughput.
    pub fn max_throughput(&self) -> i64 {
        NPUMPS * self.p
    }

    /// The bit marking a pump that starts delivering `interval` ticks from now.
    pub fn pump_bit(&self) -> i64 {
        1 << (self.interval - 1)
    }

    /// Every violated constraint, in a fixed order; empty when the constants are usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |ok: bool, constraint: &'static str, detail: String| {
            if !ok {
                out.push(Violation { constraint, detail });
            }
        };
        let s = self;
        check(
            0 < s.m1 && s.m1 < s.n1 && s.n1 < s.n2 && s.n2 < s.m2 && s.m2 < s.c,
            "0<M1<N1<N2<M2<C",
            format!("M1={} N1={} N2={} M2={} C={}", s.m1, s.n1, s.n2, s.m2, s.c),
        );
        check(
            s.n1 < s.b1 && s.b1 < s.b2 && s.b2 < s.n2,
            "N1<B1<B2<N2",
            format!("N1={} B1={} B2={} N2={}", s.n1, s.b1, s.b2, s.n2),
        );
        check(
            0 < s.vminout && s.vminout < s.u1.min(s.u2),
            "0<VMINOUT<min{U1,U2}",
            format!("VMINOUT={} U1={} U2={}", s.vminout, s.u1, s.u2),
        );
        check(
            s.vminout <= s.w,
            "VMINOUT<=W",
            format!("VMINOUT={} W={}", s.vminout, s.w),
        );
        check(
            0 <= s.ftrd && s.ftrd <= s.b2 - s.b1,
            "0<=FTRD<=B2-B1",
            format!("FTRD={} B2-B1={}", s.ftrd, s.b2 - s.b1),
        );
        check(
            0 <= s.ftru && s.ftru <= s.b2 - s.b1,
            "0<=FTRU<=B2-B1",
            format!("FTRU={} B2-B1={}", s.ftru, s.b2 - s.b1),
        );
        check(
            s.b1 + s.ftrd <= s.b2 - s.ftru + 1,
            "B1+FTRD<=B2-FTRU+1",
            format!("B1+FTRD={} B2-FTRU={}", s.b1 + s.ftrd, s.b2 - s.ftru),
        );
        check(0 < s.p, "0<P", format!("P={}", s.p));
        check(
            0 <= s.initq && s.initq <= s.c,
            "0<=INITQ<=C",
            format!("INITQ={} C={}", s.initq, s.c),
        );
        check(
            (1..=MAX_INTERVAL).contains(&s.interval),
            "1<=INTERVAL<=12",
            format!("INTERVAL={}", s.interval),
        );
        out
    }

    pub fn validated(self) -> Result<BoilerParams, ParamsError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(ParamsError::Invalid(v))
        }
    }

    /// Parses `KEY = value` lines without validating the in-equations.
    /// Blank lines and `#` comments are ignored; every key must appear exactly once.
    pub fn parse_unchecked(text: &str) -> Result<BoilerParams, ParamsError> {
        let mut params = BoilerParams::zero();
        let mut seen = [false; 16];
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |msg: String| ParamsError::Syntax { line, msg };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected KEY = value, found `{content}`")))?;
            let key = key.trim();
            let idx = Self::KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| syntax(format!("unknown constant `{key}`")))?;
            if seen[idx] {
                return Err(syntax(format!("`{key}` given twice")));
            }
            seen[idx] = true;
            let value: i64 = value
                .trim()
                .parse()
                .map_err(|_| syntax(format!("`{}` is not an integer", value.trim())))?;
            *params.slot(key).expect("key is known") = value;
        }
        let missing: Vec<&'static str> = Self::KEYS
            .iter()
            .zip(seen)
            .filter(|(_, s)| !s)
            .map(|(k, _)| *k)
            .collect();
        if !missing.is_empty() {
            return Err(ParamsError::Missing(missing));
        }
        Ok(params)
    }

    fn zero() -> BoilerParams {
        BoilerParams {
            c: 0,
            m1: 0,
            m2: 0,
            n1: 0,
            n2: 0,
            b1: 0,
            b2: 0,
            w: 0,
            u1: 0,
            u2: 0,
            vminout: 0,
            p: 0,
            ftrd: 0,
            ftru: 0,
            initq: 0,
            interval: 0,
        }
    }
}

impl FromStr for BoilerParams {
    type Err = ParamsError;

    /// Parses and validates.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        BoilerParams::parse_unchecked(text)?.validated()
    }
}

impl fmt::Display for BoilerParams {
    /// Renders the parameter file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
