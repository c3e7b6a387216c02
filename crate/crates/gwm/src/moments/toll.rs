//! Toll sequences `b_n` and their spec strings.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::{mu_alpha, mu_prime};
use crate::offspring::OffspringLaw;
use crate::series::TruncatedSeries;

/// How `b_n` is formed.
#[derive(Debug, Clone, PartialEq)]
pub enum TollKind {
    /// `n^α`
    Power(Complex64),
    /// `ln n`
    Log,
    /// `n^α − μ`
    CenteredPower { alpha: Complex64, mu: Complex64 },
    /// `ln n − μ′`
    CenteredLog { mu_prime: f64 },
    /// Explicit `b_1, b_2, …`; zero beyond the list.
    Custom(Vec<Complex64>),
}

/// A toll sequence defining `F(T) = Σ_v b_{|T_v|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TollSequence {
    kind: TollKind,
}

impl TollSequence {
    pub fn power(alpha: Complex64) -> Self {
        Self { kind: TollKind::Power(alpha) }
    }

    pub fn log() -> Self {
        Self { kind: TollKind::Log }
    }

    /// Centering is supplied by the caller; see [`TollSpec::resolve`].
    pub fn centered_power(alpha: Complex64, mu: Complex64) -> Self {
        Self { kind: TollKind::CenteredPower { alpha, mu } }
    }

    pub fn centered_log(mu_prime: f64) -> Self {
        Self { kind: TollKind::CenteredLog { mu_prime } }
    }

    /// `values[k]` is `b_{k+1}`.
    pub fn custom(values: Vec<Complex64>) -> Self {
        Self { kind: TollKind::Custom(values) }
    }

    pub fn kind(&self) -> &TollKind {
        &self.kind
    }

    /// `b_n` for `n ≥ 1`.
    pub fn eval(&self, n: usize) -> Complex64 {
        let ln = (n as f64).ln();
        match &self.kind {
            TollKind::Power(a) => (a * ln).exp(),
            TollKind::Log => Complex64::new(ln, 0.0),
            TollKind::CenteredPower { alpha, mu } => (alpha * ln).exp() - mu,
            TollKind::CenteredLog { mu_prime } => Complex64::new(ln - mu_prime, 0.0),
            TollKind::Custom(v) => v.get(n.wrapping_sub(1)).copied().unwrap_or_default(),
        }
    }

    /// `B(z) = Σ_{n≥1} b_n z^n`.
    pub fn series(&self, n: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(n, |k| if k == 0 { Complex64::new(0.0, 0.0) } else { self.eval(k) })
    }

    /// `b_1..b_n`.
    pub fn table(&self, n: usize) -> Vec<Complex64> {
        (1..=n).map(|k| self.eval(k)).collect()
    }

    /// Short spec-like label, e.g. `pow:0.5`, `clog`.
    pub fn label(&self) -> String {
        match &self.kind {
            TollKind::Power(a) => format!("pow:{}", format_complex(*a)),
            TollKind::Log => "log".into(),
            TollKind::CenteredPower { alpha, .. } => format!("cpow:{}", format_complex(*alpha)),
            TollKind::CenteredLog { .. } => "clog".into(),
            TollKind::Custom(v) => format!("custom[{}]", v.len()),
        }
    }

    /// The conjugate sequence `b̄_n`.
    pub fn conj(&self) -> Self {
        let kind = match &self.kind {
            TollKind::Power(a) => TollKind::Power(a.conj()),
            TollKind::CenteredPower { alpha, mu } => {
                TollKind::CenteredPower { alpha: alpha.conj(), mu: mu.conj() }
            }
            TollKind::Custom(v) => TollKind::Custom(v.iter().map(|c| c.conj()).collect()),
            k => k.clone(),
        };
        Self { kind }
    }
}

/// A toll as written on the command line: `pow:A`, `log`, `cpow:A`, `clog`.
/// The centered forms are resolved against a law.
#[derive(Debug, Clone, PartialEq)]
pub enum TollSpec {
    Pow(Complex64),
    Log,
    CPow(Complex64),
    CLog,
}

impl TollSpec {
    /// Build the sequence, computing μ(α) or μ′ for the centered forms.
    pub fn resolve(&self, law: &OffspringLaw) -> Result<TollSequence> {
        Ok(match *self {
            TollSpec::Pow(a) => TollSequence::power(a),
            TollSpec::Log => TollSequence::log(),
            TollSpec::CPow(a) => TollSequence::centered_power(a, mu_alpha(law, a)?),
            TollSpec::CLog => TollSequence::centered_log(mu_prime(law)),
        })
    }

    /// Comma-separated list of specs.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse()).collect()
    }
}

impl FromStr for TollSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "log" => return Ok(TollSpec::Log),
            "clog" => return Ok(TollSpec::CLog),
            _ => {}
        }
        if let Some(a) = s.strip_prefix("pow:") {
            return Ok(TollSpec::Pow(parse_complex(a)?));
        }
        if let Some(a) = s.strip_prefix("cpow:") {
            return Ok(TollSpec::CPow(parse_complex(a)?));
        }
        Err(Error::Parse(format!("unknown toll '{s}'; expected pow:A, cpow:A, log or clog")))
    }
}

impl fmt::Display for TollSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TollSpec::Pow(a) => write!(f, "pow:{}", format_complex(*a)),
            TollSpec::CPow(a) => write!(f, "cpow:{}", format_complex(*a)),
            TollSpec::Log => f.write_str("log"),
            TollSpec::CLog => f.write_str("clog"),
        }
    }
}

/// Parse `RE`, `IMi`, `RE+IMi`, `RE-IMi`, with `i` alone meaning 1i.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot read complex number '{s}'"));
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, num(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

/// Shortest form accepted by [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    let im = |v: f64| {
        if v == 1.0 {
            "i".to_string()
        } else if v == -1.0 {
            "-i".to_string()
        } else {
            format!("{v}i")
        }
    };
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        im(z.im)
    } else {
        let i = im(z.im);
        if i.starts_with('-') {
            format!("{}{i}", z.re)
        } else {
            format!("{}+{i}", z.re)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let cases = [
            ("0.3", Complex64::new(0.3, 0.0)),
            ("-1", Complex64::new(-1.0, 0.0)),
            ("i", Complex64::new(0.0, 1.0)),
            ("-2i", Complex64::new(0.0, -2.0)),
            ("0.3+0.1i", Complex64::new(0.3, 0.1)),
            ("1-i", Complex64::new(1.0, -1.0)),
            ("1e-3+2e-2i", Complex64::new(1e-3, 2e-2)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
            assert_eq!(parse_complex(&format_complex(want)).unwrap(), want);
        }
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["pow:-1", "pow:0.3", "pow:i", "cpow:-2i", "log", "clog", "pow:0.5+2i"] {
            let t: TollSpec = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert!("power:1".parse::<TollSpec>().is_err());
        assert_eq!(TollSpec::parse_list("pow:1, log").unwrap().len(), 2);
    }

    #[test]
    fn toll_values() {
        let i = Complex64::new(0.0, 1.0);
        let t = TollSequence::power(i);
        assert!((t.eval(3) - (i * 3f64.ln()).exp()).norm() < 1e-16);
        assert_eq!(TollSequence::log().eval(1), Complex64::new(0.0, 0.0));
        let c = TollSequence::centered_log(1.5);
        assert_eq!(c.eval(1), Complex64::new(-1.5, 0.0));
        assert_eq!(t.conj().eval(5), t.eval(5).conj());
        let s = TollSequence::custom(vec![Complex64::new(2.0, 0.0)]).series(3);
        assert_eq!(s.coeff(1), Complex64::new(2.0, 0.0));
        assert_eq!(s.coeff(2), Complex64::new(0.0, 0.0));
    }
}
