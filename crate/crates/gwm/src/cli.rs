//! Command-line front end for the `gwm` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::comparison::{complete_monotonicity_check, mu_order_check, phi_order, MuArg};
use crate::error::{Error, Result};
use crate::limits::{imag_variance, mean2_coeff, mu_alpha, mu_prime, shape_variance_const};
use crate::moments::{enumerate_moment, parse_complex, MomentTable, Route, TollSpec};
use crate::offspring::OffspringLaw;
use crate::simulator::{monte_carlo_with, McOptions};
use crate::treesize::TreeSizeLaw;
use crate::verify::{run_suite, Suite};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Series,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Quick,
    Full,
}

/// Output options shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct OutputArgs {
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

/// The parsed invocation; also the run configuration.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "gwm", version, about = "Moments of additive functionals on conditioned Galton-Watson trees")]
pub struct RunConfig {
    /// Worker threads for sampling; 1 forces strict sequential mode.
    #[arg(long, global = true, env = "GWM_THREADS")]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Limit constants of one law.
    Constants {
        #[arg(long)]
        law: String,
        /// α for μ(α) and the second mean coefficient.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        alpha: String,
        /// t for the variance of X_n(it).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Tree-size probabilities q_n.
    Qn {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Exact conditional moments of products of functionals.
    Moments {
        #[arg(long)]
        law: String,
        /// Comma-separated: pow:A, cpow:A, log, clog.
        #[arg(long)]
        tolls: String,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Series truncation; defaults to the largest size.
        #[arg(long, default_value_t = 0)]
        trunc: usize,
        #[arg(long, value_enum, default_value = "series")]
        route: RouteArg,
    },
    /// Brute-force moment by tree enumeration.
    Oracle {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tolls: String,
    },
    /// Monte Carlo statistics.
    Simulate {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        tolls: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        batches: Option<usize>,
    },
    /// μ orderings and complete monotonicity across laws.
    Compare {
        #[arg(long, value_delimiter = ',', required = true)]
        laws: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        #[arg(long)]
        mu_prime: bool,
        /// Check complete monotonicity for consecutive pairs up to this order.
        #[arg(long)]
        cm_order: Option<u32>,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        suite: SuiteArg,
    },
}

impl RunConfig {
    /// Flags that parse back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec!["gwm".to_string()];
        let mut push = |k: &str, v: String| a.push(format!("--{k}={v}"));
        if let Some(t) = self.threads {
            push("threads", t.to_string());
        }
        if let Some(f) = self.out.format {
            push("format", if f == Format::Json { "json".into() } else { "csv".into() });
        }
        if let Some(p) = &self.out.output {
            push("output", p.display().to_string());
        }
        if self.out.json {
            a.push("--json".into());
        }
        let join = |v: &[String]| v.join(",");
        let mut sub = Vec::new();
        // `--k=v` keeps values such as `-1` from reading as flags.
        let mut kv = |k: &str, v: String| sub.push(format!("--{k}={v}"));
        let name = match &self.command {
            Command::Constants { law, alpha, t } => {
                kv("law", law.clone());
                kv("alpha", alpha.clone());
                kv("t", t.to_string());
                "constants"
            }
            Command::Qn { law, n_max } => {
                kv("law", law.clone());
                kv("n-max", n_max.to_string());
                "qn"
            }
            Command::Moments { law, tolls, n, trunc, route } => {
                kv("law", law.clone());
                kv("tolls", tolls.clone());
                kv("n", join(&n.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
                kv("trunc", trunc.to_string());
                kv("route", if *route == RouteArg::Series { "series".into() } else { "enumeration".into() });
                "moments"
            }
            Command::Oracle { law, n, tolls } => {
                kv("law", law.clone());
                kv("n", n.to_string());
                kv("tolls", tolls.clone());
                "oracle"
            }
            Command::Simulate { law, n, reps, tolls, seed, batches } => {
                kv("law", law.clone());
                kv("n", n.to_string());
                kv("reps", reps.to_string());
                kv("tolls", tolls.clone());
                kv("seed", seed.to_string());
                if let Some(b) = batches {
                    kv("batches", b.to_string());
                }
                "simulate"
            }
            Command::Compare { laws, alphas, mu_prime, cm_order } => {
                kv("laws", join(laws));
                if !alphas.is_empty() {
                    kv("alphas", join(&alphas.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
                }
                if let Some(r) = cm_order {
                    kv("cm-order", r.to_string());
                }
                if *mu_prime {
                    sub.push("--mu-prime".into());
                }
                "compare"
            }
            Command::Verify { suite } => {
                kv("suite", if *suite == SuiteArg::Quick { "quick".into() } else { "full".into() });
                "verify"
            }
        };
        a.push(name.into());
        a.extend(sub);
        a
    }

    fn format(&self) -> Option<Format> {
        if self.out.json {
            Some(Format::Json)
        } else {
            self.out.format
        }
    }
}

/// 17 significant digits.
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn with_schema<T: Serialize>(v: &T) -> Value {
    let mut v = serde_json::to_value(v).expect("serializable");
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn cjson(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn parse_law(s: &str) -> Result<OffspringLaw> {
    OffspringLaw::parse(s)
}

fn set_threads(threads: Option<usize>) {
    if let Some(k) = threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

/// Run with explicit streams; returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    set_threads(cfg.threads);
    match execute(&cfg) {
        Ok((text, code)) => {
            let written = match &cfg.out.output {
                Some(p) => File::create(p).and_then(|mut f| f.write_all(text.as_bytes())),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "{}", json!({"error": "io", "message": e.to_string()}));
                return 1;
            }
            code
        }
        Err(e) => {
            let kind = match &e {
                Error::Validation(_) => "validation",
                Error::Domain(_) => "domain",
                Error::Divergence(_) => "divergence",
                Error::Division(_) => "division",
                Error::Pole(_) => "pole",
                Error::Unattainable { .. } => "unattainable",
                Error::Guard(_) => "guard",
                Error::Sampling(_) => "sampling",
                Error::Parse(_) => "parse",
                Error::Precondition(_) => "precondition",
            };
            let _ = writeln!(stderr, "{}", json!({"error": kind, "message": e.to_string()}));
            if matches!(e, Error::Parse(_)) {
                2
            } else {
                1
            }
        }
    }
}

/// Entry point for the binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

fn execute(cfg: &RunConfig) -> Result<(String, i32)> {
    let fmt = cfg.format();
    let csv = fmt == Some(Format::Csv);
    let out = match &cfg.command {
        Command::Constants { law, alpha, t } => {
            let l = parse_law(law)?;
            let a = parse_complex(alpha)?;
            let v = json!({
                "schema": SCHEMA,
                "law": l.name(),
                "sigma2": l.variance(),
                "alpha": cjson(a),
                "t": t,
                "mu_alpha": cjson(mu_alpha(&l, a)?),
                "mu_prime": mu_prime(&l),
                "shape_var_const": shape_variance_const(&l),
                "imag_var": imag_variance(&l, *t)?,
                "mean2_coeff": cjson(mean2_coeff(&l, a)?),
            });
            if csv {
                let mut s = String::from("key,value\n");
                for (k, val) in v.as_object().expect("object") {
                    match val {
                        Value::Object(o) => {
                            for (part, x) in o {
                                s += &format!("{k}.{part},{}\n", csv_num(x.as_f64().unwrap_or(f64::NAN)));
                            }
                        }
                        Value::Number(x) => s += &format!("{k},{}\n", csv_num(x.as_f64().unwrap_or(f64::NAN))),
                        other => s += &format!("{k},{}\n", other.as_str().unwrap_or_default()),
                    }
                }
                s
            } else {
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            }
        }
        Command::Qn { law, n_max } => {
            let l = parse_law(law)?;
            let size = TreeSizeLaw::new(&l, *n_max);
            let rows: Vec<(usize, f64, f64)> = (1..=*n_max)
                .filter(|&n| l.is_attainable(n))
                .map(|n| Ok((n, size.q(n), size.q_asymptotic_ratio(n)?)))
                .collect::<Result<_>>()?;
            if fmt == Some(Format::Json) {
                let v = json!({
                    "schema": SCHEMA,
                    "law": l.name(),
                    "rows": rows.iter().map(|&(n, q, r)| json!({"n": n, "q_n": q, "asymptotic_ratio": r})).collect::<Vec<_>>(),
                });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            } else {
                let mut s = String::from("n,q_n,asymptotic_ratio\n");
                for (n, q, r) in rows {
                    s += &format!("{n},{},{}\n", csv_num(q), csv_num(r));
                }
                s
            }
        }
        Command::Moments { law, tolls, n, trunc, route } => {
            let l = parse_law(law)?;
            let specs = TollSpec::parse_list(tolls)?;
            let route = match route {
                RouteArg::Series => Route::Series,
                RouteArg::Enumeration => Route::Enumeration,
            };
            let table = MomentTable::compute(&l, &specs, n, *trunc, route)?;
            if csv {
                let mut s = String::from("n,re,im\n");
                for v in &table.values {
                    s += &format!("{},{},{}\n", v.n, csv_num(v.re), csv_num(v.im));
                }
                s
            } else {
                format!("{}\n", serde_json::to_string_pretty(&with_schema(&table)).expect("json"))
            }
        }
        Command::Oracle { law, n, tolls } => {
            let l = parse_law(law)?;
            let specs = TollSpec::parse_list(tolls)?;
            let seqs = specs.iter().map(|s| s.resolve(&l)).collect::<Result<Vec<_>>>()?;
            let v = enumerate_moment(&l, *n, &seqs)?;
            match fmt {
                Some(Format::Json) => format!(
                    "{}\n",
                    json!({"schema": SCHEMA, "law": l.name(), "n": n, "tolls": specs.iter().map(|s| s.to_string()).collect::<Vec<_>>(), "re": v.re, "im": v.im})
                ),
                Some(Format::Csv) => format!("n,re,im\n{n},{},{}\n", csv_num(v.re), csv_num(v.im)),
                None if v.im == 0.0 => format!("{}\n", v.re),
                None => format!("{}\n", crate::moments::format_complex(v)),
            }
        }
        Command::Simulate { law, n, reps, tolls, seed, batches } => {
            let l = parse_law(law)?;
            let specs = TollSpec::parse_list(tolls)?;
            let seqs = specs.iter().map(|s| s.resolve(&l)).collect::<Result<Vec<_>>>()?;
            let opts = McOptions { n: *n, reps: *reps, seed: *seed, batches: *batches, threads: cfg.threads };
            let s = monte_carlo_with(&l, &seqs, &opts)?;
            if csv {
                let mut o = String::from("toll,mean_re,mean_im,var,m4,abs2,se_mean_re,se_mean_im,se_var,se_m4\n");
                for r in &s.results {
                    o += &format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        r.toll,
                        csv_num(r.mean.re),
                        csv_num(r.mean.im),
                        csv_num(r.var),
                        csv_num(r.m4),
                        csv_num(r.abs2),
                        csv_num(r.se.mean.re),
                        csv_num(r.se.mean.im),
                        csv_num(r.se.var),
                        csv_num(r.se.m4)
                    );
                }
                o
            } else {
                format!("{}\n", serde_json::to_string_pretty(&with_schema(&s)).expect("json"))
            }
        }
        Command::Compare { laws, alphas, mu_prime: with_prime, cm_order } => {
            let ls = laws.iter().map(|s| parse_law(s)).collect::<Result<Vec<_>>>()?;
            let mut args: Vec<MuArg> = alphas.iter().map(|&a| MuArg::Alpha(a)).collect();
            if *with_prime || args.is_empty() {
                args.push(MuArg::Prime);
            }
            let reports = args.iter().map(|&a| mu_order_check(&ls, a)).collect::<Result<Vec<_>>>()?;
            let orders = ls
                .windows(2)
                .map(|w| phi_order(&w[0], &w[1], 10_000))
                .collect::<Result<Vec<_>>>()?;
            let mut cm = Vec::new();
            if let Some(r) = cm_order {
                for w in ls.windows(2) {
                    let (a, b) = (TreeSizeLaw::new(&w[0], 4096), TreeSizeLaw::new(&w[1], 4096));
                    cm.push(complete_monotonicity_check(&a, &b, *r, &[0.5, 1.0, 2.0, 5.0])?);
                }
            }
            let verdict = json!({
                "schema": SCHEMA,
                "laws": ls.iter().map(|l| l.name()).collect::<Vec<_>>(),
                "phi_order": orders,
                "mu_order": reports,
                "complete_monotonicity": cm,
            });
            if fmt == Some(Format::Json) {
                format!("{}\n", serde_json::to_string_pretty(&verdict).expect("json"))
            } else {
                let head: Vec<String> = args
                    .iter()
                    .map(|a| match a {
                        MuArg::Alpha(x) => format!("mu({x})"),
                        MuArg::Prime => "mu_prime".into(),
                    })
                    .collect();
                let mut s = format!("law,{}\n", head.join(","));
                for (i, l) in ls.iter().enumerate() {
                    let vals: Vec<String> = reports.iter().map(|r| csv_num(r.values[i])).collect();
                    s += &format!("{},{}\n", l.name(), vals.join(","));
                }
                s += "\n";
                s += &serde_json::to_string(&verdict).expect("json");
                s += "\n";
                s
            }
        }
        Command::Verify { suite } => {
            let suite = if *suite == SuiteArg::Quick { Suite::Quick } else { Suite::Full };
            let report = run_suite(suite);
            let code = if report.all_passed { 0 } else { 1 };
            let text = if fmt == Some(Format::Json) {
                format!("{}\n", serde_json::to_string_pretty(&report).expect("json"))
            } else {
                let mut s = String::new();
                for c in &report.checks {
                    s += &format!("{c}\n");
                }
                let passed = report.checks.iter().filter(|c| c.passed).count();
                s += &format!("{passed}/{} checks passed\n", report.checks.len());
                s
            };
            return Ok((text, code));
        }
    };
    Ok((out, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(args.iter().copied(), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn config_round_trip() {
        for argv in [
            vec!["gwm", "constants", "--law", "binary", "--alpha", "0.3+1i", "--json"],
            vec!["gwm", "--threads", "3", "simulate", "--law", "poisson", "--n", "64", "--reps", "2000", "--tolls", "clog,pow:i", "--seed", "9"],
            vec!["gwm", "moments", "--law", "geometric", "--tolls", "log", "--n", "4,5", "--route", "enumeration", "--format", "csv"],
            vec!["gwm", "compare", "--laws", "binary,poisson", "--alphas", "-1,0.25", "--mu-prime", "--cm-order", "2"],
            vec!["gwm", "verify", "--suite", "full", "-o", "/tmp/x.txt"],
            vec!["gwm", "qn", "--law", "fullbinary", "--n-max", "9"],
            vec!["gwm", "oracle", "--law", "binary", "--n", "3", "--tolls", "pow:1"],
        ] {
            let cfg = RunConfig::try_parse_from(&argv).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
            let again = RunConfig::try_parse_from(cfg.to_args()).unwrap();
            assert_eq!(cfg, again, "{argv:?}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["gwm", "constants", "--law", "binary", "--bogus"]).0, 2);
        assert_eq!(run_capture(&["gwm", "nope"]).0, 2);
        assert_eq!(run_capture(&["gwm", "oracle", "--law", "nosuch", "--n", "3", "--tolls", "log"]).0, 2);
        let (code, _, err) = run_capture(&["gwm", "oracle", "--law", "fullbinary", "--n", "4", "--tolls", "log"]);
        assert_eq!(code, 1);
        assert!(err.contains("unattainable"));
    }

    #[test]
    fn oracle_example() {
        let (code, out, _) = run_capture(&["gwm", "oracle", "--law", "fullbinary", "--n", "3", "--tolls", "pow:1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "5");
    }

    #[test]
    fn csv_precision() {
        assert_eq!(csv_num(0.1), "1.0000000000000001e-1");
        let (_, out, _) = run_capture(&["gwm", "qn", "--law", "binary", "--n-max", "3"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,q_n,asymptotic_ratio");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,2.5000000000000000e-1,"));
    }
}
