//! Command-line surface: input validation, report emission, and the
//! reproduction harness for the three worked examples.
//!
//! Exit codes: 0 determinate result, 1 parse/validation failure,
//! 2 precondition violation, 3 undetermined classification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{json, Value};

use torocoh::bundle::{invariants, normalize, BundleInvariants, Homomorphism};
use torocoh::classify::{classify, Case, ClassifyOptions};
use torocoh::dbar::{check_closed, solve, witness_non_hausdorff, FourierForm};
use torocoh::diophantine::{certify, refute, scan, CondStatus};
use torocoh::report::{cvec_json, mat_json, sigma0_json};
use torocoh::scalars::lacunary::{LacExt, LacGen, WitnessRule};
use torocoh::scalars::{render_rational, CScalar, Scalar};
use torocoh::spectral::{find_sigma0, k_sigma, m0, pivot, LatticeIndex};
use torocoh::torus::{build_frame, check_irrationality, IrStatus, PeriodMatrix, RealCoordFrame};

const EXIT_OK: u8 = 0;
const EXIT_PARSE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "torocoh",
    about = "Certified classification of cohomology of homogeneous line bundles over toroidal groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    #[value(name = "factorial-pow10")]
    FactorialPow10,
    #[value(name = "supergap")]
    Supergap,
}

impl From<RuleArg> for WitnessRule {
    fn from(r: RuleArg) -> WitnessRule {
        match r {
            RuleArg::FactorialPow10 => WitnessRule::FactorialPow10,
            RuleArg::Supergap => WitnessRule::Supergap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a group file: period-matrix shape and the irrationality condition
    Validate {
        #[arg(long)]
        group: PathBuf,
        /// search bound for violations when the data is not exactly decidable
        #[arg(long, default_value_t = 20)]
        tau_bound: u64,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the real coordinate frame (A, B, C) of a group
    Frame {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalize a bundle and emit its invariants (alpha, beta, d(L))
    Bundle {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the exceptional lattice mode, if any
    Sigma0 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the spectral shift vectors at one lattice index
    Shift {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        /// comma-separated lattice index of length n+m, e.g. 1,1,2
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shell scan of the minimal shifted norms
    Scan {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 12)]
        radius: i64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attempt a certified lower-bound proof of the small-denominators condition
    Certify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attempt a certified refutation via a lacunary witness family
    Refute {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long, default_value_t = 3)]
        nu_max: u32,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the degree-raising equation per mode on a truncated form
    Solve {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, name = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the divergent-preimage/convergent-image witness family
    Witness {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long, default_value_t = 3)]
        nu_max: u32,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full three-way classification
    Classify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        accept_evidence: bool,
        /// allow an analytically trivial bundle (reported as a citation stub)
        #[arg(long)]
        allow_trivial: bool,
        /// also emit externally known dimensions (not computed here)
        #[arg(long)]
        external_facts: bool,
        #[arg(long, default_value_t = 12)]
        radius: i64,
        #[arg(long, value_enum)]
        witness_rule: Option<RuleArg>,
        #[arg(long, default_value_t = 3)]
        nu_max: u32,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a worked example end to end and compare against the golden report
    Examples {
        /// one of: 10.1, 10.2, 10.3
        id: String,
        /// rewrite the golden file instead of comparing
        #[arg(long)]
        bless: bool,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    msg: String,
}

fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError { code: EXIT_PARSE, msg: e.to_string() }
}

fn precond(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_PRECONDITION, msg: msg.into() }
}

fn precision_of(flag: Option<u32>) -> Result<u32, CliError> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var("TOROCOH_PRECISION") {
            Ok(v) => v.parse::<u32>().map_err(|_| parse_err("TOROCOH_PRECISION must be an integer"))?,
            Err(_) => 30,
        },
    };
    if p < 6 {
        return Err(parse_err("precision must be >= 6"));
    }
    Ok(p)
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<(PeriodMatrix, RealCoordFrame), CliError> {
    let v = read_json(path)?;
    let p = PeriodMatrix::from_json(&v).map_err(parse_err)?;
    let frame = build_frame(&p).map_err(parse_err)?;
    Ok((p, frame))
}

fn load_bundle(
    path: &Path,
    frame: &RealCoordFrame,
) -> Result<(Homomorphism, BundleInvariants), CliError> {
    let v = read_json(path)?;
    let d = Homomorphism::from_json(&v, frame.n, frame.m).map_err(parse_err)?;
    let (norm, _cert) = normalize(&d, frame).map_err(parse_err)?;
    let inv = invariants(&norm, frame).map_err(parse_err)?;
    Ok((norm, inv))
}

/// Write the report body (timestamp-free) plus a sidecar metadata file; with
/// no output path, print to stdout.
fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
            let meta = json!({
                "tool": "torocoh",
                "version": env!("CARGO_PKG_VERSION"),
                "generated_unix_time": std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            });
            let meta_path = path.with_extension(format!(
                "{}{}",
                path.extension().and_then(|e| e.to_str()).map(|e| format!("{e}.")).unwrap_or_default(),
                "meta.json"
            ));
            std::fs::write(&meta_path, serde_json::to_string_pretty(&meta).unwrap())
                .map_err(|e| parse_err(format!("{}: {e}", meta_path.display())))?;
        }
        None => println!("{body}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<(), CliError> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).unwrap()))
}

// ---------------------------------------------------------------------------
// subcommands

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Validate { group, tau_bound, precision, out } => {
            let digits = precision_of(precision)?;
            let (p, frame) = load_group(&group)?;
            let rep = check_irrationality(&p, tau_bound.max(1)).map_err(parse_err)?;
            let body = json!({
                "n": p.n,
                "m": p.m,
                "irrationality": serde_json::to_value(&rep).unwrap(),
                "frame_invertible": true,
                "precision": digits,
            });
            emit_json(&out, &body)?;
            if rep.status == IrStatus::CertifiedFails {
                return Err(CliError {
                    code: EXIT_PARSE,
                    msg: format!(
                        "irrationality condition fails; witness tau = {:?}",
                        rep.violating_tau.unwrap_or_default()
                    ),
                });
            }
            let _ = frame;
            Ok(EXIT_OK)
        }
        Cmd::Frame { group, precision, out } => {
            let digits = precision_of(precision)?;
            let (p, frame) = load_group(&group)?;
            let body = json!({
                "n": p.n,
                "m": p.m,
                "A": mat_json(&frame.a, digits),
                "B": mat_json(&frame.b, digits),
                "C": mat_json(&frame.c, digits),
                "AC": mat_json(&frame.ac, digits),
            });
            emit_json(&out, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::Bundle { group, bundle, precision, out } => {
            let digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (norm, inv) = load_bundle(&bundle, &frame)?;
            let body = json!({
                "normalized_d_e": cvec_json(&norm.d_e, digits),
                "normalized_d_s": cvec_json(&norm.d_s, digits),
                "alpha": cvec_json(&inv.alpha, digits),
                "beta_over_pi": cvec_json(&inv.beta_over_pi, digits),
                "d_L": cvec_json(&inv.d_l, digits),
                "trivial": inv.trivial,
            });
            emit_json(&out, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::Sigma0 { group, bundle, precision, out } => {
            let digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let residual = match &z.sigma0 {
                Some(idx) => {
                    let sh = k_sigma(idx, &frame, &inv).map_err(parse_err)?;
                    Some(cvec_json(&sh.k_plus_dl, digits))
                }
                None => None,
            };
            let m0_val = m0(&frame, &inv, &z, digits).ok().map(|(enc, arg)| {
                json!({
                    "value": enc.render(digits),
                    "enclosure": [render_rational(&enc.lo, digits), render_rational(&enc.hi, digits)],
                    "argmin_sigma3": arg.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect::<Vec<_>>(),
                })
            });
            let body = json!({
                "sigma0": sigma0_json(&z),
                "residual": residual,
                "m0": m0_val,
            });
            emit_json(&out, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::Shift { group, bundle, sigma, precision, out } => {
            let digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let parts: Result<Vec<i64>, _> = sigma.split(',').map(|x| x.trim().parse::<i64>()).collect();
            let parts = parts.map_err(|_| parse_err("sigma must be a comma-separated integer list"))?;
            if parts.len() != frame.n + frame.m {
                return Err(precond(format!(
                    "sigma must have n+m = {} components",
                    frame.n + frame.m
                )));
            }
            let idx = LatticeIndex::from_i64(&parts, frame.n, frame.m).map_err(parse_err)?;
            let sh = k_sigma(&idx, &frame, &inv).map_err(parse_err)?;
            let piv = pivot(&sh).ok();
            let body = json!({
                "sigma": parts,
                "K": cvec_json(&sh.k, digits),
                "Ktilde_over_pi": cvec_json(&sh.ktilde_over_pi, digits),
                "shifted_over_pi": cvec_json(&sh.shifted_over_pi, digits),
                "K_plus_dL": cvec_json(&sh.k_plus_dl, digits),
                "pivot": piv,
                "note": "Ktilde and the shifted vector carry an implicit factor pi",
            });
            emit_json(&out, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::Scan { group, bundle, radius, format, precision, out } => {
            let _digits = precision_of(precision)?;
            if radius < 1 {
                return Err(parse_err("radius must be >= 1"));
            }
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let sc = scan(&frame, &inv, &z, radius).map_err(parse_err)?;
            match format {
                FormatArg::Csv => {
                    let mut body = String::from("shell,min_gap_log10_lo,min_gap_log10_hi,sigma\n");
                    for r in &sc.records {
                        let sigma = r
                            .sigma
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        body.push_str(&format!(
                            "{},{},{},{}\n",
                            r.shell, r.min_gap_log10_lo, r.min_gap_log10_hi, sigma
                        ));
                    }
                    emit(&out, &body)?;
                }
                FormatArg::Json => emit_json(&out, &serde_json::to_value(&sc).unwrap())?,
            }
            Ok(EXIT_OK)
        }
        Cmd::Certify { group, bundle, precision, out } => {
            let _digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let rep = certify(&frame, &inv, &z).map_err(parse_err)?;
            emit_json(&out, &serde_json::to_value(&rep).unwrap())?;
            Ok(EXIT_OK)
        }
        Cmd::Refute { group, bundle, rule, nu_max, precision, out } => {
            let _digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let rep = refute(&frame, &inv, &z, rule.into(), nu_max).map_err(parse_err)?;
            emit_json(&out, &serde_json::to_value(&rep).unwrap())?;
            Ok(EXIT_OK)
        }
        Cmd::Solve { group, bundle, input, mode, precision, out } => {
            let _digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let phi = FourierForm::from_json(&read_json(&input)?).map_err(parse_err)?;
            let rel_tol = match mode {
                ModeArg::Exact => 0.0,
                ModeArg::Numeric => 1e-12,
            };
            let violations = check_closed(&phi, &frame, &inv, rel_tol).map_err(parse_err)?;
            if !violations.is_empty() {
                return Err(precond(format!(
                    "input form is not closed: {} violation(s), first {:?}",
                    violations.len(),
                    violations[0]
                )));
            }
            let res = solve(&phi, &frame, &inv, &z).map_err(parse_err)?;
            let harmonic = res.harmonic.as_ref().map(|(sigma, coeffs)| {
                let cmap: serde_json::Map<String, Value> = coeffs
                    .iter()
                    .map(|(idx, v)| {
                        let key: String = idx.iter().map(|i| i.to_string()).collect();
                        let (re, im) = v.to_f64();
                        (key, json!({ "re": re, "im": im }))
                    })
                    .collect();
                json!({ "sigma": sigma, "coeffs": cmap })
            });
            let body = json!({
                "psi": res.psi.to_json().map_err(parse_err)?,
                "harmonic": harmonic,
                "residual_sup": res.residual_sup,
            });
            emit_json(&out, &body)?;
            Ok(EXIT_OK)
        }
        Cmd::Witness { group, bundle, rule, nu_max, precision, out } => {
            let _digits = precision_of(precision)?;
            let (_, frame) = load_group(&group)?;
            let (_, inv) = load_bundle(&bundle, &frame)?;
            let res = witness_non_hausdorff(&frame, &inv, rule.into(), nu_max).map_err(precond_dbar)?;
            emit_json(&out, &serde_json::to_value(&res).unwrap())?;
            Ok(EXIT_OK)
        }
        Cmd::Classify {
            group,
            bundle,
            accept_evidence,
            allow_trivial,
            external_facts,
            radius,
            witness_rule,
            nu_max,
            precision,
            out,
        } => {
            let _digits = precision_of(precision)?;
            if radius < 1 {
                return Err(parse_err("radius must be >= 1"));
            }
            let (_, frame) = load_group(&group)?;
            let (norm, inv) = load_bundle(&bundle, &frame)?;
            if inv.trivial && !allow_trivial {
                return Err(precond(
                    "the bundle is analytically trivial; pass --allow-trivial for the citation stub",
                ));
            }
            let opts = ClassifyOptions {
                scan_radius: radius,
                witness_rule: witness_rule.map(Into::into),
                nu_max,
                accept_evidence,
                external_facts,
            };
            let res = classify(&frame, &norm, &opts).map_err(parse_err)?;
            emit_json(&out, &serde_json::to_value(&res).unwrap())?;
            if res.case == Case::Undetermined {
                return Ok(EXIT_UNDETERMINED);
            }
            Ok(EXIT_OK)
        }
        Cmd::Examples { id, bless, precision, out } => {
            let digits = precision_of(precision)?;
            let report = run_example(&id, digits)?;
            let body = format!("{}\n", serde_json::to_string_pretty(&report).unwrap());
            let golden_path = golden_path(&id)?;
            if bless {
                std::fs::create_dir_all(golden_path.parent().unwrap())
                    .map_err(parse_err)?;
                std::fs::write(&golden_path, &body).map_err(parse_err)?;
                eprintln!("golden written: {}", golden_path.display());
                emit(&out, &body)?;
                return Ok(EXIT_OK);
            }
            let golden = std::fs::read_to_string(&golden_path).map_err(|e| {
                parse_err(format!("golden file {}: {e}", golden_path.display()))
            })?;
            emit(&out, &body)?;
            if golden != body {
                return Err(CliError {
                    code: EXIT_PRECONDITION,
                    msg: format!("report does not match the golden file {}", golden_path.display()),
                });
            }
            eprintln!("matches golden: {}", golden_path.display());
            Ok(EXIT_OK)
        }
    }
}

fn precond_dbar(e: torocoh::dbar::DbarError) -> CliError {
    precond(e.to_string())
}

// ---------------------------------------------------------------------------
// worked examples

fn golden_path(id: &str) -> Result<PathBuf, CliError> {
    let tag = match id {
        "10.1" => "example_10_1",
        "10.2" => "example_10_2",
        "10.3" => "example_10_3",
        _ => return Err(parse_err("example id must be one of 10.1, 10.2, 10.3")),
    };
    Ok(PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(format!("{tag}.json")))
}

fn half() -> Scalar {
    Scalar::Rat(num::BigRational::new(num::BigInt::from(1), num::BigInt::from(2)))
}

/// Worked instance builders (two-variable groups with a one-dimensional base).
fn example_group_bundle(id: &str) -> Result<(PeriodMatrix, Homomorphism), CliError> {
    match id {
        // S column (i*sqrt2; i), d(s_1) = 1/2
        "10.1" => {
            let s = vec![
                vec![CScalar::imaginary(Scalar::sqrt_of(2))],
                vec![CScalar::i()],
            ];
            let p = PeriodMatrix::new(2, 1, s).map_err(parse_err)?;
            let d = Homomorphism {
                d_e: vec![CScalar::zero(), CScalar::zero()],
                d_s: vec![CScalar::real(half())],
            };
            Ok((p, d))
        }
        // S column (i; sqrt2), d(s_1) = sqrt2
        "10.2" => {
            let s = vec![vec![CScalar::i()], vec![CScalar::real(Scalar::sqrt_of(2))]];
            let p = PeriodMatrix::new(2, 1, s).map_err(parse_err)?;
            let d = Homomorphism {
                d_e: vec![CScalar::zero(), CScalar::zero()],
                d_s: vec![CScalar::real(Scalar::sqrt_of(2))],
            };
            Ok((p, d))
        }
        _ => Err(parse_err("example id must be one of 10.1, 10.2, 10.3")),
    }
}

fn lacunary_instance(rule: WitnessRule) -> Result<(PeriodMatrix, Homomorphism), CliError> {
    let gen = std::sync::Arc::new(LacGen { rule: rule.series_rule() });
    let alpha = Scalar::Lac(LacExt::alpha(gen));
    let s = vec![vec![CScalar::i()], vec![CScalar::real(alpha.clone())]];
    let p = PeriodMatrix::new(2, 1, s).map_err(parse_err)?;
    let d = Homomorphism {
        d_e: vec![CScalar::zero(), CScalar::zero()],
        d_s: vec![CScalar::real(alpha)],
    };
    Ok((p, d))
}

fn run_example(id: &str, digits: u32) -> Result<Value, CliError> {
    match id {
        "10.1" | "10.2" => {
            let (p, d) = example_group_bundle(id)?;
            let frame = build_frame(&p).map_err(parse_err)?;
            let ir = check_irrationality(&p, 20).map_err(parse_err)?;
            let (norm, inv) = {
                let (norm, _) = normalize(&d, &frame).map_err(parse_err)?;
                let inv = invariants(&norm, &frame).map_err(parse_err)?;
                (norm, inv)
            };
            let z = find_sigma0(&frame, &inv).map_err(parse_err)?;
            let cert = certify(&frame, &inv, &z).map_err(parse_err)?;
            let res = classify(&frame, &norm, &ClassifyOptions::default()).map_err(parse_err)?;
            Ok(json!({
                "example": id,
                "irrationality": serde_json::to_value(&ir).unwrap(),
                "frame_C": mat_json(&frame.c, digits),
                "d_L": cvec_json(&inv.d_l, digits),
                "sigma0": sigma0_json(&z),
                "condition": serde_json::to_value(&cert).unwrap(),
                "classification": serde_json::to_value(&res).unwrap(),
            }))
        }
        "10.3" => {
            // probe the printed inequality on the factorial-exponent series,
            // then fall back to the supergap series for the certified refutation
            let (p_probe, d_probe) = lacunary_instance(WitnessRule::FactorialPow10)?;
            let frame_probe = build_frame(&p_probe).map_err(parse_err)?;
            let (_, inv_probe) = {
                let (norm, _) = normalize(&d_probe, &frame_probe).map_err(parse_err)?;
                let inv = invariants(&norm, &frame_probe).map_err(parse_err)?;
                (norm, inv)
            };
            let z_probe = find_sigma0(&frame_probe, &inv_probe).map_err(parse_err)?;
            let probe =
                refute(&frame_probe, &inv_probe, &z_probe, WitnessRule::FactorialPow10, 2)
                    .map_err(parse_err)?;

            let (p_fall, d_fall) = lacunary_instance(WitnessRule::Supergap)?;
            let frame_fall = build_frame(&p_fall).map_err(parse_err)?;
            let (norm_fall, inv_fall) = {
                let (norm, _) = normalize(&d_fall, &frame_fall).map_err(parse_err)?;
                let inv = invariants(&norm, &frame_fall).map_err(parse_err)?;
                (norm, inv)
            };
            let z_fall = find_sigma0(&frame_fall, &inv_fall).map_err(parse_err)?;
            let fallback = refute(&frame_fall, &inv_fall, &z_fall, WitnessRule::Supergap, 3)
                .map_err(parse_err)?;
            let witness = witness_non_hausdorff(&frame_fall, &inv_fall, WitnessRule::Supergap, 3)
                .map_err(precond_dbar)?;
            let opts = ClassifyOptions {
                witness_rule: Some(WitnessRule::Supergap),
                ..Default::default()
            };
            let res = classify(&frame_fall, &norm_fall, &opts).map_err(parse_err)?;
            Ok(json!({
                "example": "10.3",
                "probe": serde_json::to_value(&probe).unwrap(),
                "fallback": serde_json::to_value(&fallback).unwrap(),
                "witness": serde_json::to_value(&witness).unwrap(),
                "classification": serde_json::to_value(&res).unwrap(),
            }))
        }
        _ => Err(parse_err("example id must be one of 10.1, 10.2, 10.3")),
    }
}

// keep the unused-status lint quiet on the shared imports used only in
// certain subcommands
#[allow(dead_code)]
fn _type_uses(_: CondStatus) {}
