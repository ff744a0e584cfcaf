//! Command-line front end: degree-tuple parsing, dispatch into the
//! certification engine, and JSON/CSV/text report emission.
//!
//! Exit codes: 0 all requested checks pass, 1 at least one failure,
//! 2 inconclusive results without failures, 64 usage error. Usage
//! errors never emit partial reports.

use clap::{Args, Parser, Subcommand};
use fanocert_core::analytic::{self, LemmaId, SAMPLE_TS};
use fanocert_core::bounds::{closed_form_bound, params_from, BoundName};
use fanocert_core::certify::{
    certify_tuple, hypothesis_check, sweep, Certificate, CertifyConfig, CheckResult, GridSpec,
    LevelRule, MRule, Params, ShapeRule, Status,
};
use fanocert_core::error::Error;
use fanocert_core::report::{Format, ReportDocument, SpecEcho};
use fanocert_core::signcert::SignCertificate;
use fanocert_core::slopes::{gamma_threshold, slope_sequence, tail_product};
use fanocert_core::tuple::{DegreeTuple, SingularityLevel};
use std::process::ExitCode;
use std::str::FromStr;

const USAGE_EXIT: u8 = 64;

#[derive(Parser)]
#[command(
    name = "fanocert",
    version,
    about = "Exact and interval-certified verification of codimension bounds for Fano complete intersections",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format: json, csv or text
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report to a file instead of standard output
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct LevelArgs {
    /// Singularity level l (default 0 for slopes/gamma, all for certify)
    #[arg(long)]
    l: Option<u64>,
    /// Examine every level l = 0..k
    #[arg(long, conflicts_with = "l")]
    all_l: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the hypertangent slope sequence, its tail product and the
    /// exclusion threshold
    Slopes {
        /// Degree tuple, e.g. "2,3,3" or "25^20" or "2^3,5"
        #[arg(long)]
        degrees: String,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact minimum of the binomial codimension gamma(e, d, l) over e
    Gamma {
        #[arg(long)]
        degrees: String,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full certification chain for one tuple
    Certify {
        #[arg(long)]
        degrees: String,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify a grid of tuples
    Sweep {
        /// k range, e.g. "20..25" (inclusive) or a single "20"
        #[arg(long)]
        k: String,
        /// M rule: "smallest" (default) or an explicit value
        #[arg(long = "M", default_value = "smallest")]
        m: String,
        /// Degree shape: equal, star, or explicit
        #[arg(long, default_value = "equal")]
        shape: String,
        /// Explicit tuples for --shape explicit, separated by ';'
        #[arg(long)]
        degrees: Option<String>,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run an analytic claim suite
    VerifyAnalytic {
        /// One of: 1.3, 3.1, 3.2, 3.3-sample, 3.4, 3.5, 3.6-sample
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long = "M")]
        m: Option<u64>,
        /// Degree tuple (only for --lemma 1.3)
        #[arg(long)]
        degrees: Option<String>,
        /// Working precision in bits
        #[arg(long, default_value_t = 128)]
        precision: u32,
        /// Bisection depth limit
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the closed-form bound catalog for given parameters
    Bounds {
        #[arg(long)]
        k: u64,
        #[arg(long = "M")]
        m: u64,
        /// Level for the level-dependent bounds (default k)
        #[arg(long)]
        l: Option<u64>,
        /// Degree tuple supplying d_k for the binomial-based entries
        #[arg(long)]
        degrees: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(USAGE_EXIT);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(USAGE_EXIT)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    let (echo, doc) = build_report(cmd)?;
    let format = Format::from_str(&echo.1)?;
    let rendered = doc.render(format)?;
    match &echo.0 {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{}", rendered),
    }
    Ok(doc.exit_code() as u8)
}

type OutSpec = (Option<std::path::PathBuf>, String);

fn echo_of(command: &str, pairs: &[(&str, String)]) -> SpecEcho {
    SpecEcho {
        command: command.to_string(),
        args: pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
    }
}

fn levels_of(d: &DegreeTuple, levels: &LevelArgs, default_all: bool) -> Result<Vec<u64>, Error> {
    if levels.all_l {
        return Ok((0..=d.k()).collect());
    }
    match levels.l {
        Some(l) => {
            SingularityLevel::checked(l, d)?;
            Ok(vec![l])
        }
        None => Ok(if default_all { (0..=d.k()).collect() } else { vec![0] }),
    }
}

fn info_check(name: &str, l: Option<u64>, value: String, anchor: &str) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        l,
        status: Status::Pass,
        value,
        bound: String::new(),
        anchor: anchor.to_string(),
    }
}

fn fmt_rat(r: &fanocert_core::num_rational::BigRational) -> String {
    fanocert_core::certify::fmt_rat(r)
}

fn build_report(cmd: Command) -> Result<(OutSpec, ReportDocument), Error> {
    match cmd {
        Command::Slopes { degrees, levels, output } => {
            let d = DegreeTuple::parse(&degrees)?;
            let ls = levels_of(&d, &levels, false)?;
            let mut checks = Vec::new();
            for &l in &ls {
                let lv = SingularityLevel(l);
                let seq = slope_sequence(&d, lv)?;
                let blocks: Vec<String> = seq
                    .blocks()
                    .iter()
                    .map(|b| format!("{}/{} x{}", b.j + 1, b.j, b.count))
                    .collect();
                checks.push(info_check(
                    "slope_sequence",
                    Some(l),
                    blocks.join(", "),
                    "slopes (j+1)/j in standard order, with multiplicities",
                ));
                checks.push(info_check("length", Some(l), seq.len().to_string(), "M - l"));
                checks.push(info_check(
                    "N_l",
                    Some(l),
                    seq.cutoff().to_string(),
                    "N_l = M - max(floor(2 ln k), l)",
                ));
                let beta = tail_product(&d, lv)?;
                checks.push(info_check(
                    "tail_product",
                    Some(l),
                    fmt_rat(&beta),
                    "beta(l): product of slopes past N_l",
                ));
                let gamma = gamma_threshold(&d, lv)?;
                checks.push(info_check(
                    "gamma_threshold",
                    Some(l),
                    fmt_rat(&gamma),
                    "gamma_l = (4/3) beta(l)^(-1)",
                ));
            }
            checks.push(info_check(
                "counting_convention",
                None,
                "m(j) counts pairs (i, alpha) with 2 <= alpha <= min(j, d_i - 1)".to_string(),
                "the printed lower bound alpha >= 1 would break the length M - l; flagged, not adopted",
            ));
            let hyp = hypothesis_check(d.k(), d.m());
            let cert = Certificate {
                params: Params::Tuple { degrees: d.degrees().to_vec(), k: d.k(), m: d.m() },
                levels: ls,
                hypothesis_ok: hyp,
                overall: Certificate::derive_overall(hyp, &checks),
                checks,
            };
            let echo = echo_of("slopes", &[("degrees", degrees)]);
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, vec![cert], vec![]),
            ))
        }
        Command::Gamma { degrees, levels, output } => {
            let d = DegreeTuple::parse(&degrees)?;
            let ls = levels_of(&d, &levels, false)?;
            let mut checks = Vec::new();
            let target = closed_form_bound(
                BoundName::Thm31Target,
                &params_from(&[("M", d.m() as i64), ("k", d.k() as i64)]),
            )?;
            for &l in &ls {
                let lv = SingularityLevel(l);
                let (e_star, value) = fanocert_core::bounds::gamma_min(&d, lv)?;
                checks.push(info_check(
                    "gamma_argmin",
                    Some(l),
                    e_star.to_string(),
                    "argmin_e gamma(e, d, l), smallest e on ties",
                ));
                checks.push(info_check(
                    "gamma_min",
                    Some(l),
                    value.to_string(),
                    "min_e gamma(e, d, l), exhaustive exact scan",
                ));
                let ok = fanocert_core::num_rational::BigRational::from_integer(value.clone()) >= target;
                checks.push(CheckResult {
                    name: "gamma_min_ge_target".to_string(),
                    l: Some(l),
                    status: if ok { Status::Pass } else { Status::Fail },
                    value: value.to_string(),
                    bound: fmt_rat(&target),
                    anchor: "Theorem 3.1: min_e gamma(e,d,l) >= (M-5k)(M-6k)/2 + M + k".to_string(),
                });
            }
            let hyp = hypothesis_check(d.k(), d.m());
            let cert = Certificate {
                params: Params::Tuple { degrees: d.degrees().to_vec(), k: d.k(), m: d.m() },
                levels: ls,
                hypothesis_ok: hyp,
                overall: Certificate::derive_overall(hyp, &checks),
                checks,
            };
            let echo = echo_of("gamma", &[("degrees", degrees)]);
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, vec![cert], vec![]),
            ))
        }
        Command::Certify { degrees, levels, output } => {
            let d = DegreeTuple::parse(&degrees)?;
            let config = CertifyConfig {
                levels: match (levels.all_l, levels.l) {
                    (false, Some(l)) => LevelRule::Single(l),
                    _ => LevelRule::All,
                },
            };
            let cert = certify_tuple(&d, &config)?;
            let echo = echo_of("certify", &[("degrees", degrees)]);
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, vec![cert], vec![]),
            ))
        }
        Command::Sweep { k, m, shape, degrees, levels, output } => {
            let (k_lo, k_hi) = parse_k_range(&k)?;
            let m_rule = match m.as_str() {
                "smallest" => MRule::Smallest,
                other => MRule::Explicit(
                    other
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad M rule '{}'", other)))?,
                ),
            };
            let shape_rule = match shape.as_str() {
                "equal" => ShapeRule::Equal,
                "star" => ShapeRule::Star,
                "explicit" => {
                    let list = degrees.as_deref().ok_or_else(|| {
                        Error::Parse("--shape explicit needs --degrees \"t1;t2;...\"".to_string())
                    })?;
                    let tuples = list
                        .split(';')
                        .map(DegreeTuple::parse)
                        .collect::<Result<Vec<_>, _>>()?;
                    ShapeRule::Explicit(tuples)
                }
                other => return Err(Error::Parse(format!("unknown shape '{}'", other))),
            };
            let spec = GridSpec { k_lo, k_hi, m_rule, shape: shape_rule };
            let config = CertifyConfig {
                levels: match (levels.all_l, levels.l) {
                    (false, Some(l)) => LevelRule::Single(l),
                    _ => LevelRule::All,
                },
            };
            let certs = sweep(&spec, &config)?;
            let echo = echo_of(
                "sweep",
                &[("k", k), ("M", m), ("shape", shape)],
            );
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, certs, vec![]),
            ))
        }
        Command::VerifyAnalytic { lemma, k, m, degrees, precision, max_depth, output } => {
            let id = LemmaId::from_str(&lemma)?;
            let mut echo_pairs: Vec<(&str, String)> = vec![
                ("lemma", lemma.clone()),
                ("precision", precision.to_string()),
                ("max_depth", max_depth.to_string()),
            ];
            let need_km = |k: Option<u64>, m: Option<u64>| -> Result<(u64, u64), Error> {
                match (k, m) {
                    (Some(k), Some(m)) => Ok((k, m)),
                    _ => Err(Error::Parse(format!("--lemma {} needs --k and --M", lemma))),
                }
            };
            let (certs, signs): (Vec<Certificate>, Vec<SignCertificate>) = match id {
                LemmaId::L13 => {
                    let text = degrees.ok_or_else(|| {
                        Error::Parse("--lemma 1.3 needs --degrees".to_string())
                    })?;
                    echo_pairs.push(("degrees", text.clone()));
                    let d = DegreeTuple::parse(&text)?;
                    let out = analytic::lemma13_check(&d)?;
                    (vec![out.certificate], out.sign_certificates)
                }
                LemmaId::L31 => {
                    let (k, m) = need_km(k, m)?;
                    echo_pairs.push(("k", k.to_string()));
                    echo_pairs.push(("M", m.to_string()));
                    let out = analytic::lemma31_suite(k, m, precision, max_depth)?;
                    (vec![out.certificate], out.sign_certificates)
                }
                LemmaId::L32 => {
                    let (k, m) = need_km(k, m)?;
                    echo_pairs.push(("k", k.to_string()));
                    echo_pairs.push(("M", m.to_string()));
                    let r = analytic::lemma32_check(k, m, precision)?;
                    (vec![r.outcome.certificate], r.outcome.sign_certificates)
                }
                LemmaId::L33Sample => {
                    let ts: Vec<u64> = k.map(|t| vec![t]).unwrap_or_else(|| SAMPLE_TS.to_vec());
                    let out = analytic::lemma33_samples(&ts, precision)?;
                    (vec![out.certificate], out.sign_certificates)
                }
                LemmaId::L34 => {
                    let out = analytic::lemma34_certify(precision, max_depth)?;
                    (vec![out.certificate], out.sign_certificates)
                }
                LemmaId::L35 => {
                    let out = analytic::lemma35_certify(precision, max_depth)?;
                    (vec![out.certificate], out.sign_certificates)
                }
                LemmaId::L36Sample => {
                    let ts: Vec<u64> = k.map(|t| vec![t]).unwrap_or_else(|| SAMPLE_TS.to_vec());
                    let out = analytic::prop36_suite(&ts, precision, max_depth)?;
                    (vec![out.certificate], out.sign_certificates)
                }
            };
            let echo = echo_of("verify-analytic", &echo_pairs);
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, certs, signs),
            ))
        }
        Command::Bounds { k, m, l, degrees, output } => {
            let l = l.unwrap_or(k);
            let mk = params_from(&[("M", m as i64), ("k", k as i64)]);
            let mut checks = Vec::new();
            for name in [
                BoundName::A,
                BoundName::Thm01,
                BoundName::Thm02,
                BoundName::Thm04,
                BoundName::Thm31Target,
                BoundName::HypSingular,
            ] {
                let v = closed_form_bound(name, &mk)?;
                checks.push(info_check(name.as_str(), None, fmt_rat(&v), "closed-form catalog"));
            }
            let kl = params_from(&[("k", k as i64), ("l", l as i64)]);
            let v = closed_form_bound(BoundName::BOf, &kl)?;
            checks.push(info_check("b_of", Some(l), fmt_rat(&v), "b = max(k+l+1, 4l+2)"));
            let mkl = params_from(&[("M", m as i64), ("k", k as i64), ("l", l as i64)]);
            let v = closed_form_bound(BoundName::Prop22, &mkl)?;
            checks.push(info_check(
                "prop22",
                Some(l),
                fmt_rat(&v),
                "(M+3-b)(M+4-b)/2 - (l-1)",
            ));
            let mut echo_pairs = vec![("k", k.to_string()), ("M", m.to_string()), ("l", l.to_string())];
            if let Some(text) = &degrees {
                let d = DegreeTuple::parse(text)?;
                echo_pairs.push(("degrees", text.clone()));
                let p = params_from(&[("M", m as i64), ("k", k as i64), ("d_k", d.max_degree() as i64)]);
                let v = closed_form_bound(BoundName::HypReducible, &p)?;
                checks.push(info_check(
                    "hyp_reducible",
                    None,
                    fmt_rat(&v),
                    "C(M+k+d_k-1, d_k) - (M+k+1)",
                ));
                let p = params_from(&[
                    ("M", m as i64),
                    ("k", k as i64),
                    ("d_j", d.degrees()[0] as i64),
                    ("j", 1),
                ]);
                let v = closed_form_bound(BoundName::StepIrreducible, &p)?;
                checks.push(info_check(
                    "step_irreducible",
                    None,
                    fmt_rat(&v),
                    "C(M+k+d_j-1, d_j) - (M+k+1) - (k-j), at j = 1",
                ));
            }
            let hyp = hypothesis_check(k, m);
            let cert = Certificate {
                params: Params::Pair { k, m },
                levels: vec![l],
                hypothesis_ok: hyp,
                overall: Certificate::derive_overall(hyp, &checks),
                checks,
            };
            let echo = echo_of("bounds", &echo_pairs);
            Ok((
                (output.out, output.format),
                ReportDocument::new(echo, vec![cert], vec![]),
            ))
        }
    }
}

fn parse_k_range(text: &str) -> Result<(u64, u64), Error> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad k range '{}'", text)))?;
        let hi = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| Error::Parse(format!("bad k range '{}'", text)))?;
        Ok((lo, hi))
    } else {
        let k = text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad k '{}'", text)))?;
        Ok((k, k))
    }
}
