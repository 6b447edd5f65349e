//! Command-line front end: parse curve specifications, run the analyses, and
//! emit deterministic CSV/JSON reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 numerical-stage failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use toruslab::asymptotics::{
    characteristic_direct, characteristic_profile, growth_exponent, order_estimate,
    polynomial_bound_constant,
};
use toruslab::error::{Error, Result};
use toruslab::level_sets::level_set_report;
use toruslab::numerics::radius_grid;
use toruslab::recovery::{poly_circle_samples, recover_polynomial, theorem1_verify, CircleSamples};
use toruslab::report::{
    csv_table, fmt_f64, load_samples_csv, load_spec, ReportEnvelope,
};
use toruslab::verify::{all_passed, run_verification, VerifyConfig, DEFAULT_SEED};
use toruslab::Polynomial;

#[derive(Parser)]
#[command(
    name = "toruslab",
    version,
    about = "Growth analysis of entire holomorphic curves in the algebraic torus",
    long_about = "Analyzes curves [1 : e^{g_1} : ... : e^{g_n}] given by polynomial exponents.\n\
        Curve specs are JSON: {\"label\": \"optional\", \"polynomials\": [[[re,im], ...], ...]}\n\
        with coefficients in ascending powers.\n\n\
        CSV outputs carry a header row, '.' decimal separators, and\n\
        shortest-round-trip number formatting, so they parse back losslessly.\n\n\
        Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 numerical failure."
)]
struct Cli {
    /// Worker threads for per-radius fan-out (default: machine parallelism;
    /// env TORUSLAB_THREADS overrides the default, this flag overrides both)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Full growth report: m, growth exponent, bound constant, order, and the
    /// degree/growth round-trip verdict
    Analyze {
        /// Curve spec JSON file
        #[arg(long)]
        spec: PathBuf,
        /// Smallest radius of the geometric grid
        #[arg(long, default_value_t = 1.0)]
        rmin: f64,
        /// Largest radius of the geometric grid (the order estimate caps its
        /// own grid at min(rmax, 1e4); see --help)
        #[arg(long, default_value_t = 1e6)]
        rmax: f64,
        /// Angular grid for circle maxima (power of two)
        #[arg(long, default_value_t = 4096)]
        angles: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Angular level-set measures |Re g| <= r^delta against their decay bound.
    /// CSV columns: r,measure,bound,ratio,r0_empirical
    Levelset {
        /// Curve spec JSON file (used with --index)
        #[arg(long, conflicts_with = "poly")]
        spec: Option<PathBuf>,
        /// Component index into the spec
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Inline polynomial, ascending powers, entries "re" or "re:im"
        /// (e.g. "0,0,1" is z^2)
        #[arg(long)]
        poly: Option<String>,
        /// Threshold exponent delta in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 10.0)]
        rmin: f64,
        #[arg(long, default_value_t = 1e4)]
        rmax: f64,
        /// Radius grid points per decade
        #[arg(long, default_value_t = 4)]
        ppd: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Shimizu-Ahlfors characteristic T(r, f) on a geometric radius grid plus
    /// the order estimate. CSV columns: r,T,oracle_discrepancy
    Characteristic {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 100.0)]
        rmax: f64,
        #[arg(long, default_value_t = 13)]
        ppd: usize,
        /// Angular quadrature start size (power of two)
        #[arg(long, default_value_t = 256)]
        angles: usize,
        /// Cross-check against the direct double integral at grid radii <= 10
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Schwarz-formula coefficient recovery from circle samples of log|f|.
    /// CSV columns: component,k,coeff_re,coeff_im,discrepancy,detected_degree
    Recover {
        /// First samples CSV (columns theta_index,value) taken at radius --r1
        #[arg(long, requires = "samples2", conflicts_with = "spec")]
        samples: Option<PathBuf>,
        /// Second samples CSV taken at radius --r2
        #[arg(long)]
        samples2: Option<PathBuf>,
        /// Curve spec: sample every component internally (log domain, no
        /// exponentiation) and recover each one
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Treat the spec curve as a black box sampled on circles
        #[arg(long, requires = "spec")]
        blackbox: bool,
        /// Radius of the first sample circle
        #[arg(long, default_value_t = 2.0)]
        r1: f64,
        /// Radius of the second sample circle
        #[arg(long, default_value_t = 5.0)]
        r2: f64,
        /// Samples per circle when sampling a spec (power of two)
        #[arg(long, default_value_t = 4096)]
        n_samples: usize,
        /// Highest recovered coefficient index
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        /// Noise threshold for zeroing coefficients
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full verification suite (ten deterministic checks); exit 0 iff
    /// every check passes
    Verify {
        /// Seed for the randomized curve generators
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Reduced grids and sample counts (same checks, faster)
        #[arg(long)]
        quick: bool,
        /// Comma-separated check ids to run (e.g. "4,7"); default: all
        #[arg(long)]
        only: Option<String>,
        /// Test hook: corrupt the level-set bound constant (check 4 must
        /// then fail, demonstrating exit code 1)
        #[arg(long, hide = true)]
        corrupt_bound: bool,
        /// Output file for the check table (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::ConstantCurve => 2,
                Error::Numerical { .. } => 3,
            }
        }
    };
    std::process::exit(code);
}

fn init_threads(flag: Option<usize>) {
    let from_env = std::env::var("TORUSLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = flag.or(from_env).filter(|&n| n > 0) {
        // ignore failure: the global pool can only be built once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Analyze {
            spec,
            rmin,
            rmax,
            angles,
            output,
        } => cmd_analyze(&spec, rmin, rmax, angles, &output),
        Command::Levelset {
            spec,
            index,
            poly,
            delta,
            rmin,
            rmax,
            ppd,
            output,
        } => cmd_levelset(spec.as_deref(), index, poly.as_deref(), delta, rmin, rmax, ppd, &output),
        Command::Characteristic {
            spec,
            rmax,
            ppd,
            angles,
            oracle,
            output,
        } => cmd_characteristic(&spec, rmax, ppd, angles, oracle, &output),
        Command::Recover {
            samples,
            samples2,
            spec,
            blackbox,
            r1,
            r2,
            n_samples,
            kmax,
            tol,
            output,
        } => cmd_recover(
            samples.as_deref(),
            samples2.as_deref(),
            spec.as_deref(),
            blackbox,
            r1,
            r2,
            n_samples,
            kmax,
            tol,
            &output,
        ),
        Command::Verify {
            seed,
            quick,
            only,
            corrupt_bound,
            out,
        } => cmd_verify(seed, quick, only.as_deref(), corrupt_bound, out.as_deref()),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_report(output: &OutputArgs, envelope: &ReportEnvelope, csv: String) -> Result<i32> {
    let content = match output.format {
        Format::Json => envelope.to_json(),
        Format::Csv => csv,
    };
    emit(&output.out, &content)?;
    Ok(0)
}

fn cmd_analyze(
    spec_path: &std::path::Path,
    rmin: f64,
    rmax: f64,
    angles: usize,
    output: &OutputArgs,
) -> Result<i32> {
    let spec = load_spec(&spec_path.to_string_lossy())?;
    let curve = spec.to_curve()?;
    if angles < 64 || !angles.is_power_of_two() {
        return Err(Error::invalid("--angles must be a power of two >= 64"));
    }
    let m = curve.growth_degree();
    let mut results = json!({
        "m": m,
        "constant": curve.is_constant(),
        "growth": serde_json::Value::Null,
        "bound_constant": serde_json::Value::Null,
        "order": serde_json::Value::Null,
        "theorem1": serde_json::Value::Null,
        "verdict": if curve.is_constant() { "constant map" } else { "pending" },
    });
    let mut rows = vec![
        vec!["m".to_string(), m.to_string()],
        vec!["constant".to_string(), curve.is_constant().to_string()],
    ];
    if !curve.is_constant() {
        let growth = growth_exponent(&curve, rmin.max(1.0), rmax, 13)?;
        let bound = polynomial_bound_constant(&curve, m.max(0) as f64, rmin.max(1.0), rmax)?;
        let order = if rmax > 10.0 {
            Some(order_estimate(&curve, rmax.min(1e4))?)
        } else {
            None
        };
        let t1 = theorem1_verify(&curve, rmax.min(1e5))?;
        let verdict = if t1.pass { "pass" } else { "fail" };
        results["growth"] = json!({
            "slope": growth.slope,
            "window": growth.window,
            "residual": growth.residual,
        });
        results["bound_constant"] = json!({
            "exponent": m.max(0),
            "c_hat": bound.c_hat,
            "monotone_ok": bound.monotone_ok,
        });
        if let Some(order) = &order {
            results["order"] = json!({
                "slope": order.slope,
                "window": order.window,
                "residual": order.residual,
            });
        }
        results["theorem1"] = serde_json::to_value(&t1).expect("report serialization");
        results["verdict"] = json!(verdict);
        rows.push(vec!["growth_slope".to_string(), fmt_f64(growth.slope)]);
        rows.push(vec!["growth_residual".to_string(), fmt_f64(growth.residual)]);
        rows.push(vec!["c_hat".to_string(), fmt_f64(bound.c_hat)]);
        rows.push(vec!["monotone_ok".to_string(), bound.monotone_ok.to_string()]);
        if let Some(order) = &order {
            rows.push(vec!["order_slope".to_string(), fmt_f64(order.slope)]);
        }
        rows.push(vec!["verdict".to_string(), verdict.to_string()]);
    } else {
        rows.push(vec!["verdict".to_string(), "constant map".to_string()]);
    }
    let inputs = json!({
        "spec": spec,
        "rmin": rmin,
        "rmax": rmax,
        "angles": angles,
    });
    let envelope = ReportEnvelope::new("analyze", inputs, results);
    emit_report(output, &envelope, csv_table(&["key", "value"], &rows))
}

/// Inline polynomial syntax: comma-separated coefficients in ascending powers,
/// each "re" or "re:im".
fn parse_inline_poly(text: &str) -> Result<Polynomial> {
    let mut pairs = Vec::new();
    for (i, entry) in text.split(',').enumerate() {
        let entry = entry.trim();
        let (re_s, im_s) = match entry.split_once(':') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (entry, "0"),
        };
        let re: f64 = re_s
            .parse()
            .map_err(|_| Error::invalid(format!("bad coefficient {i}: {entry:?}")))?;
        let im: f64 = im_s
            .parse()
            .map_err(|_| Error::invalid(format!("bad coefficient {i}: {entry:?}")))?;
        pairs.push((re, im));
    }
    Polynomial::from_pairs(&pairs)
}

#[allow(clippy::too_many_arguments)]
fn cmd_levelset(
    spec_path: Option<&std::path::Path>,
    index: usize,
    inline: Option<&str>,
    delta: f64,
    rmin: f64,
    rmax: f64,
    ppd: usize,
    output: &OutputArgs,
) -> Result<i32> {
    let (g, spec_echo) = match (spec_path, inline) {
        (Some(path), None) => {
            let spec = load_spec(&path.to_string_lossy())?;
            let curve = spec.to_curve()?;
            let g = curve.exponent(index)?.clone();
            (g, json!({"spec": spec, "index": index}))
        }
        (None, Some(text)) => {
            let g = parse_inline_poly(text)?;
            (g, json!({"poly": text}))
        }
        _ => return Err(Error::invalid("levelset needs exactly one of --spec or --poly")),
    };
    if !(rmin > 0.0 && rmin < rmax) {
        return Err(Error::invalid("need 0 < rmin < rmax"));
    }
    let radii = radius_grid(rmin, rmax, ppd);
    let reports = level_set_report(&g, delta, &radii, 4096, 8.0)?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.r),
                fmt_f64(r.measure),
                fmt_f64(r.bound),
                fmt_f64(r.ratio),
                r.r0_empirical.map(fmt_f64).unwrap_or_default(),
            ]
        })
        .collect();
    let inputs = json!({
        "curve": spec_echo,
        "delta": delta,
        "rmin": rmin,
        "rmax": rmax,
        "ppd": ppd,
    });
    let envelope = ReportEnvelope::new(
        "levelset",
        inputs,
        serde_json::to_value(&reports).expect("report serialization"),
    );
    emit_report(
        output,
        &envelope,
        csv_table(&["r", "measure", "bound", "ratio", "r0_empirical"], &rows),
    )
}

fn cmd_characteristic(
    spec_path: &std::path::Path,
    rmax: f64,
    ppd: usize,
    angles: usize,
    oracle: bool,
    output: &OutputArgs,
) -> Result<i32> {
    let spec = load_spec(&spec_path.to_string_lossy())?;
    let curve = spec.to_curve()?;
    if !(rmax > 1.0) {
        return Err(Error::invalid("need rmax > 1"));
    }
    let profile = characteristic_profile(&curve, rmax, ppd, angles)?;
    let order = if rmax > 10.0 && !curve.is_constant() {
        Some(order_estimate(&curve, rmax.min(1e4))?)
    } else {
        None
    };
    let mut discrepancies: Vec<Option<f64>> = vec![None; profile.radii.len()];
    if oracle {
        for (i, &r) in profile.radii.iter().enumerate() {
            if r <= 10.0 {
                let direct = characteristic_direct(&curve, r, 256, angles.max(256))?;
                let t = profile.values[i];
                discrepancies[i] = Some((t - direct).abs() / direct.abs().max(1e-12));
            }
        }
    }
    let rows: Vec<Vec<String>> = profile
        .radii
        .iter()
        .zip(&profile.values)
        .zip(&discrepancies)
        .map(|((&r, &t), d)| vec![fmt_f64(r), fmt_f64(t), d.map(fmt_f64).unwrap_or_default()])
        .collect();
    let results = json!({
        "radii": profile.radii,
        "values": profile.values,
        "order": order.as_ref().map(|o| json!({
            "slope": o.slope,
            "window": o.window,
            "residual": o.residual,
        })),
        "oracle_discrepancies": discrepancies,
    });
    let inputs = json!({
        "spec": spec,
        "rmax": rmax,
        "ppd": ppd,
        "angles": angles,
        "oracle": oracle,
    });
    let envelope = ReportEnvelope::new("characteristic", inputs, results);
    emit_report(
        output,
        &envelope,
        csv_table(&["r", "T", "oracle_discrepancy"], &rows),
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_recover(
    samples_path: Option<&std::path::Path>,
    samples2_path: Option<&std::path::Path>,
    spec_path: Option<&std::path::Path>,
    blackbox: bool,
    r1: f64,
    r2: f64,
    n_samples: usize,
    kmax: usize,
    tol: f64,
    output: &OutputArgs,
) -> Result<i32> {
    let _ = blackbox; // spec input always samples the curve as a black box
    let (pairs, inputs): (Vec<(CircleSamples, CircleSamples)>, serde_json::Value) =
        match (samples_path, samples2_path, spec_path) {
            (Some(p1), Some(p2), None) => {
                let s1 = load_samples_csv(&p1.to_string_lossy(), r1)?;
                let s2 = load_samples_csv(&p2.to_string_lossy(), r2)?;
                let inputs = json!({
                    "samples": p1.to_string_lossy(),
                    "samples2": p2.to_string_lossy(),
                    "r1": r1, "r2": r2,
                });
                (vec![(s1, s2)], inputs)
            }
            (None, None, Some(path)) => {
                let spec = load_spec(&path.to_string_lossy())?;
                let curve = spec.to_curve()?;
                let mut pairs = Vec::with_capacity(curve.n());
                for g in curve.exponents() {
                    pairs.push((
                        poly_circle_samples(g, r1, n_samples)?,
                        poly_circle_samples(g, r2, n_samples)?,
                    ));
                }
                let inputs = json!({
                    "spec": spec,
                    "r1": r1, "r2": r2, "n_samples": n_samples,
                });
                (pairs, inputs)
            }
            _ => {
                return Err(Error::invalid(
                    "recover needs either --samples/--samples2 or --spec",
                ))
            }
        };

    let mut recovered = Vec::with_capacity(pairs.len());
    for (s1, s2) in &pairs {
        recovered.push(recover_polynomial(s1, s2, kmax, tol)?);
    }
    let degrees: Vec<usize> = recovered.iter().map(|r| r.degree).collect();
    let mut rows = Vec::new();
    for (comp, rec) in recovered.iter().enumerate() {
        for (k, &(re, im)) in rec.coefficients.iter().enumerate() {
            rows.push(vec![
                comp.to_string(),
                k.to_string(),
                fmt_f64(re),
                fmt_f64(im),
                fmt_f64(rec.discrepancies[k]),
                rec.degree.to_string(),
            ]);
        }
    }
    let results = json!({
        "components": recovered,
        "detected_degrees": degrees,
        "gauge": "Im a_0 is unrecoverable from |f| and fixed to 0",
    });
    let mut inputs = inputs;
    inputs["kmax"] = json!(kmax);
    inputs["tol"] = json!(tol);
    let envelope = ReportEnvelope::new("recover", inputs, results);
    emit_report(
        output,
        &envelope,
        csv_table(
            &[
                "component",
                "k",
                "coeff_re",
                "coeff_im",
                "discrepancy",
                "detected_degree",
            ],
            &rows,
        ),
    )
}

fn cmd_verify(
    seed: u64,
    quick: bool,
    only: Option<&str>,
    corrupt_bound: bool,
    out: Option<&std::path::Path>,
) -> Result<i32> {
    let only = match only {
        None => None,
        Some(text) => {
            let ids = text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|id| (1..=10).contains(id))
                        .ok_or_else(|| Error::invalid(format!("bad check id {s:?} in --only")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if ids.is_empty() {
                return Err(Error::invalid("--only selected no checks"));
            }
            Some(ids)
        }
    };
    let cfg = VerifyConfig {
        seed,
        quick,
        corrupt_bound,
        only,
    };
    let results = run_verification(&cfg);
    let mut table = String::new();
    for c in &results {
        table.push_str(&format!(
            "check {:>2} [{}] {}: {}\n",
            c.id,
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let n_pass = results.iter().filter(|c| c.passed).count();
    let ok = all_passed(&results);
    table.push_str(&format!(
        "verify: {n_pass}/{} checks passed (seed {seed}{})\n",
        results.len(),
        if quick { ", quick" } else { "" }
    ));
    if !ok {
        let failing: Vec<String> = results
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id.to_string())
            .collect();
        table.push_str(&format!("failing checks: {}\n", failing.join(", ")));
    }
    emit(&out.map(|p| p.to_path_buf()), &table)?;
    Ok(if ok { 0 } else { 1 })
}
