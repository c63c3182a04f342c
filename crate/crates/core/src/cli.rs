//! Command line front end: picks suites, runs them and writes one report.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::modes::{KMode, OracleConfig, Sample};
use crate::report::{Check, Report};
use crate::scalars::Rational;
use crate::superspace::Config;
use crate::wgens::{
    census_suite, cor_suite, current_suite, kernel_suite, ope3_suite, ope45_suite, tho1_suite,
    vertex_props_suite, w1w2_suite, HookAlgebra, Reading,
};
use crate::yangian::{
    check_all, side_checks, CartanConvention, ImageReading, MapKind, YangianOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    VertexProps,
    Kernel,
    Generators,
    Tho1,
    W1w2,
    Cor,
    Ope3,
    Ope45,
    Current,
    YangianPhi,
    YangianEvtilde,
    YangianEvgln,
    All,
}

impl Suite {
    const EVERY: [Suite; 12] = [
        Suite::VertexProps,
        Suite::Kernel,
        Suite::Generators,
        Suite::Tho1,
        Suite::W1w2,
        Suite::Cor,
        Suite::Ope3,
        Suite::Ope45,
        Suite::Current,
        Suite::YangianPhi,
        Suite::YangianEvtilde,
        Suite::YangianEvgln,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KArg {
    Symbolic,
    Rational,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// Which reading of the printed formulas to check where the two differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readings {
    Corrected,
    Literal,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanArg {
    Cyclic,
    Literal,
}

#[derive(Clone, Debug, Parser, Serialize, Deserialize)]
#[command(
    name = "hookwalg",
    version,
    about = "Exact OPE and affine Yangian checks for the hook-type W-algebra of gl(m+n)"
)]
pub struct RunConfig {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Comma separated suites.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<Suite>,
    /// Conformal weight bound D of the oracle test vectors.
    #[arg(long, default_value_t = 4)]
    pub truncation: i64,
    #[arg(long, value_enum, default_value_t = KArg::Symbolic)]
    pub k: KArg,
    /// The level for `--k rational`, e.g. 3 or -7/2.
    #[arg(long, default_value = "3")]
    pub k_value: String,
    /// How many levels `--k random` draws.
    #[arg(long, default_value_t = 3)]
    pub k_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep only checks whose id contains this text.
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Readings::Corrected)]
    pub readings: Readings,
    #[arg(long, value_enum, default_value_t = CartanArg::Cyclic)]
    pub cartan: CartanArg,
    /// Test all basis vectors up to `--sample-full-below` and this many
    /// sampled ones above it.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub sample_full_below: i64,
    /// Random cases per identity in the vertex-props suite.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    /// Keep wall-clock times in the report (which then differs run to run).
    #[arg(long)]
    pub timings: bool,
}

/// A configuration problem, reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl RunConfig {
    fn hook(&self) -> Result<Config, ConfigError> {
        let cfg = Config::new(self.m, self.n).map_err(|e| ConfigError(e.to_string()))?;
        if self.truncation < 1 {
            return Err(ConfigError(format!(
                "D ≥ 1 is required (got {})",
                self.truncation
            )));
        }
        Ok(cfg)
    }

    pub fn oracle(&self) -> Result<OracleConfig, ConfigError> {
        let k_mode = match self.k {
            KArg::Symbolic => KMode::Symbolic,
            KArg::Rational => {
                let k: Rational = self
                    .k_value
                    .parse()
                    .map_err(|e| ConfigError(format!("--k-value: {e}")))?;
                KMode::Rational(k)
            }
            KArg::Random => KMode::Random {
                count: self.k_count,
                seed: self.seed,
            },
        };
        let sample = self.sample.map(|count| Sample {
            full_below: self.sample_full_below,
            count,
            seed: self.seed,
        });
        Ok(OracleConfig {
            depth: self.truncation,
            k_mode,
            sample,
        })
    }

    fn suites(&self) -> Vec<Suite> {
        let mut out: Vec<Suite> = if self.suite.contains(&Suite::All) {
            Suite::EVERY.to_vec()
        } else {
            self.suite.clone()
        };
        out.sort();
        out.dedup();
        out
    }

    fn readings(&self) -> Vec<Reading> {
        match self.readings {
            Readings::Corrected => vec![Reading::Corrected],
            Readings::Literal => vec![Reading::Literal],
            Readings::Both => vec![Reading::Literal, Reading::Corrected],
        }
    }
}

fn image_reading(r: Reading) -> ImageReading {
    match r {
        Reading::Literal => ImageReading::Literal,
        Reading::Corrected => ImageReading::Corrected,
    }
}

/// Runs the suites of a validated configuration.
pub fn run_checks(rc: &RunConfig) -> Result<Vec<Check>, ConfigError> {
    let cfg = rc.hook()?;
    let oracle = rc.oracle()?;
    let suites = rc.suites();
    let needs_hook = suites.iter().any(|s| {
        !matches!(
            s,
            Suite::YangianPhi | Suite::YangianEvtilde | Suite::YangianEvgln
        )
    });
    let h = needs_hook.then(|| HookAlgebra::new(cfg));
    let cartan = match rc.cartan {
        CartanArg::Cyclic => CartanConvention::Cyclic,
        CartanArg::Literal => CartanConvention::Literal,
    };
    let mut checks = Vec::new();
    for suite in suites {
        match suite {
            Suite::YangianPhi | Suite::YangianEvtilde | Suite::YangianEvgln => {
                let kind = match suite {
                    Suite::YangianPhi => MapKind::Phi,
                    Suite::YangianEvtilde => MapKind::EvTilde,
                    _ => MapKind::EvGln,
                };
                let readings = if kind == MapKind::EvGln {
                    vec![Reading::Corrected]
                } else {
                    rc.readings()
                };
                for r in readings {
                    let opts = YangianOptions {
                        cartan,
                        reading: image_reading(r),
                        eps: None,
                        only: rc.only.clone(),
                        jobs: rc.jobs,
                    };
                    let err = |e: crate::yangian::YangianError| ConfigError(e.to_string());
                    checks.extend(check_all(kind, cfg, &oracle, &opts).map_err(err)?);
                    checks.extend(side_checks(kind, cfg, &oracle, &opts).map_err(err)?);
                }
            }
            _ => {
                let h = h.as_ref().expect("built for every non-Yangian suite");
                match suite {
                    Suite::VertexProps => checks.extend(vertex_props_suite(h, rc.cases, rc.seed)),
                    Suite::Kernel => checks.extend(kernel_suite(h)),
                    Suite::Generators => checks.extend(census_suite(h)),
                    Suite::Tho1 => checks.extend(tho1_suite(h)),
                    Suite::W1w2 => checks.extend(w1w2_suite(h)),
                    Suite::Cor => checks.extend(cor_suite(h, &oracle)),
                    Suite::Current => checks.extend(current_suite(h, &oracle)),
                    Suite::Ope3 => {
                        for r in rc.readings() {
                            checks.extend(ope3_suite(h, r));
                        }
                    }
                    Suite::Ope45 => {
                        for r in rc.readings() {
                            checks.extend(ope45_suite(h, r, &oracle, rc.truncation));
                        }
                    }
                    _ => unreachable!("Yangian suites handled above"),
                }
            }
        }
    }
    if let Some(f) = &rc.only {
        checks.retain(|c| c.id.contains(f.as_str()));
    }
    if !rc.timings {
        for c in &mut checks {
            c.millis = 0;
        }
    }
    Ok(checks)
}

/// Parses `argv` (program name first) and runs it into a report.
pub fn report_for<I, T>(argv: I) -> Result<(RunConfig, Report), ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let rc = RunConfig::try_parse_from(argv).map_err(|e| ConfigError(e.to_string()))?;
    let checks = run_checks(&rc)?;
    let report = Report::new(
        serde_json::to_value(&rc).expect("config serializes"),
        checks,
    );
    Ok((rc, report))
}

/// Parses `argv`, runs, writes the report and returns the exit code: 0 when
/// every check passes, 1 on any failure, 2 on a configuration error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = RunConfig::try_parse_from(&argv) {
        let _ = e.print();
        return if e.use_stderr() { 2 } else { 0 };
    }
    let (rc, report) = match report_for(argv) {
        Ok(r) => r,
        Err(ConfigError(msg)) => {
            eprintln!("configuration error: {msg}");
            return 2;
        }
    };
    let text = match rc.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &rc.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("cannot write {}: {e}", p.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    if report.all_passed() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_errors_exit_two() {
        assert_eq!(
            run(["hookwalg", "--m", "3", "--n", "3", "--suite", "kernel"]),
            2
        );
        assert_eq!(
            run(["hookwalg", "--m", "4", "--n", "2", "--suite", "kernel"]),
            2
        );
        assert_eq!(
            run([
                "hookwalg",
                "--m",
                "4",
                "--n",
                "3",
                "--truncation",
                "0",
                "--suite",
                "kernel"
            ]),
            2
        );
        assert_eq!(
            run(["hookwalg", "--m", "4", "--n", "3", "--suite", "nope"]),
            2
        );
    }

    #[test]
    fn hook_errors_quote_the_constraint() {
        let rc = RunConfig::try_parse_from(["hookwalg", "--m", "3", "--n", "3"]).unwrap();
        assert!(rc.hook().unwrap_err().0.contains("m > n"));
        let rc = RunConfig::try_parse_from(["hookwalg", "--m", "5", "--n", "2"]).unwrap();
        assert!(rc.hook().unwrap_err().0.contains("n ≥ 3"));
    }

    #[test]
    fn kernel_suite_runs_clean() {
        let rc =
            RunConfig::try_parse_from(["hookwalg", "--m", "4", "--n", "3", "--suite", "kernel"])
                .unwrap();
        let checks = run_checks(&rc).unwrap();
        assert_eq!(checks.len(), 25);
        assert!(checks.iter().all(Check::passed));
    }

    #[test]
    fn suite_list_expands_all() {
        let rc = RunConfig::try_parse_from([
            "hookwalg",
            "--m",
            "4",
            "--n",
            "3",
            "--suite",
            "all,kernel",
        ])
        .unwrap();
        assert_eq!(rc.suites(), Suite::EVERY.to_vec());
        let rc = RunConfig::try_parse_from([
            "hookwalg",
            "--m",
            "4",
            "--n",
            "3",
            "--suite",
            "tho1,kernel,tho1",
        ])
        .unwrap();
        assert_eq!(rc.suites(), vec![Suite::Kernel, Suite::Tho1]);
    }
}
