//! Command-line front end: complex ingestion (text format or built-in
//! generators), subcommand dispatch, deterministic report emission.
//!
//! Exit codes: 0 when every reported check passes, 1 on an assertion or
//! check failure, 2 on an input error.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cellcurv::complex::{
    build_interval_grid, build_simplex_boundary, build_torus_grid, product, validate, CellComplex,
    FaceVector,
};
use cellcurv::forman;
use cellcurv::forms::{bochner_ric_raw, OneForm};
use cellcurv::io::{parse_complex, serialize_complex};
use cellcurv::lly;
use cellcurv::rational::{display_rat, display_rat_decimal, parse_rat};
use cellcurv::spectral;
use cellcurv::transport;

#[derive(Parser)]
#[command(
    name = "cellcurv",
    version,
    about = "Discrete Ricci curvatures on cell complexes: combinatorial and Lin-Lu-Yau, \
             with exact transport certificates and spectral bounds"
)]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tab-separated with a header row
    Tsv,
    /// Space-aligned columns
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Complex file in the cell/face format, or '-' for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Built-in generator spec instead of a file, e.g. "torus 4 4"
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct JobArgs {
    /// Worker threads for per-vector computations
    #[arg(long, env = "CELLCURV_JOBS", default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print a built-in complex in the text format.
    ///
    /// Specs: `simplex-boundary n`, `grid l1 l2 ...`, `torus k1 k2`,
    /// `product <spec> <spec>`.
    Gen {
        #[arg(required = true)]
        spec: Vec<String>,
    },
    /// Structural checks: boundary squared, diamond property,
    /// quasiconvexity, the counting identity, and optionally the Bochner
    /// identity on random 1-forms.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        /// Sample count for the Bochner identity check
        #[arg(long, value_name = "SAMPLES")]
        bochner: Option<usize>,
        /// RNG seed for --bochner
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Tolerance for the Bochner identity
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Combinatorial curvature per vector:
    /// `tau sigma ric d_tau d_sigma n_tau n_sigma n2`.
    Forman {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lin-Lu-Yau curvature per vector as `tau sigma kappa` (exact
    /// rational); with --alpha, the alpha-Ricci curvature at that alpha
    /// instead, as `tau sigma kappa_alpha`.
    Lly {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "P/Q")]
        alpha: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        jobs: JobArgs,
    },
    /// Per-vector comparison of the transport curvature against the closed
    /// formula: `tau sigma ric kappa_formula kappa_lp match`.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        jobs: JobArgs,
    },
    /// Exact Wasserstein distance between the lazy measures around two
    /// cells, printed as a reduced fraction and a 12-decimal value, with
    /// the optimal coupling as `source target mass_num mass_den`.
    Transport {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "CELL")]
        source: String,
        #[arg(long, value_name = "CELL")]
        target: String,
        #[arg(long, value_name = "P/Q", default_value = "1/2")]
        alpha: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Laplacian spectrum of the face-incidence graph plus the curvature
    /// bounds.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        /// Zero-cluster threshold on eigenvalues
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Just the curvature-driven diameter and eigenvalue bounds.
    Bound {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
}

enum CliError {
    /// Bad input: exit code 2.
    Input(String),
    /// A check or assertion failed: exit code 1.
    Check(String),
}

impl From<cellcurv::io::ParseError> for CliError {
    fn from(e: cellcurv::io::ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<cellcurv::ComplexError> for CliError {
    fn from(e: cellcurv::ComplexError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<transport::TransportError> for CliError {
    fn from(e: transport::TransportError) -> Self {
        use transport::TransportError::*;
        match e {
            BadAlpha(_)
            | UndefinedMeasure(_)
            | NotProbability(_)
            | NegativeMass(_)
            | DisconnectedSupports { .. }
            | AlphaInfeasible { .. }
            | Complex(_) => CliError::Input(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

impl From<lly::LlyError> for CliError {
    fn from(e: lly::LlyError) -> Self {
        use lly::LlyError::*;
        match e {
            SameCell | BadAlpha(_) | Disconnected { .. } | Complex(_) => {
                CliError::Input(e.to_string())
            }
            Transport(t) => CliError::from(t),
            _ => CliError::Check(e.to_string()),
        }
    }
}

impl From<spectral::SpectralError> for CliError {
    fn from(e: spectral::SpectralError) -> Self {
        match e {
            spectral::SpectralError::Lly(inner) => CliError::from(inner),
            other => CliError::Check(other.to_string()),
        }
    }
}

impl From<forman::FormanError> for CliError {
    fn from(e: forman::FormanError) -> Self {
        match e {
            forman::FormanError::Complex(inner) => CliError::Input(inner.to_string()),
            other => CliError::Check(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let mut report = String::new();
    let outcome = run(&config, &mut report);
    // reports are buffered and emitted in one canonical write; a consumer
    // closing the pipe early is not an error
    use std::io::Write as _;
    if let Err(e) = std::io::stdout().write_all(report.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("cellcurv: writing output: {e}");
            return ExitCode::from(2);
        }
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("cellcurv: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("cellcurv: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(config: &RunConfig, report: &mut String) -> Result<(), CliError> {
    match &config.command {
        Command::Gen { spec } => cmd_gen(spec, report),
        Command::Validate {
            input,
            bochner,
            seed,
            tol,
        } => cmd_validate(&load(input)?, *bochner, *seed, *tol, report),
        Command::Forman { input, out } => cmd_forman(&load(input)?, out.format, report),
        Command::Lly {
            input,
            alpha,
            out,
            jobs,
        } => cmd_lly(
            &load(input)?,
            alpha.as_deref(),
            out.format,
            jobs.jobs,
            report,
        ),
        Command::Compare { input, out, jobs } => {
            cmd_compare(&load(input)?, out.format, jobs.jobs, report)
        }
        Command::Transport {
            input,
            source,
            target,
            alpha,
            out,
        } => cmd_transport(&load(input)?, source, target, alpha, out.format, report),
        Command::Spectrum { input, eps } => cmd_spectrum(&load(input)?, *eps, true, report),
        Command::Bound { input, eps } => cmd_spectrum(&load(input)?, *eps, false, report),
    }
}

// ---------------------------------------------------------------------------
// input handling
// ---------------------------------------------------------------------------

fn load(input: &InputArgs) -> Result<CellComplex, CliError> {
    if let Some(spec) = &input.gen {
        if input.input != "-" {
            return Err(CliError::Input(
                "exactly one input source: drop either --gen or the file argument".into(),
            ));
        }
        let tokens: Vec<String> = spec.split_whitespace().map(str::to_string).collect();
        return generate(&tokens);
    }
    let text = if input.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&input.input)
            .map_err(|e| CliError::Input(format!("reading {}: {e}", input.input)))?
    };
    Ok(parse_complex(&text)?)
}

fn generate(tokens: &[String]) -> Result<CellComplex, CliError> {
    let (c, used) = parse_generator(tokens)?;
    if used != tokens.len() {
        return Err(CliError::Input(format!(
            "trailing generator tokens: {}",
            tokens[used..].join(" ")
        )));
    }
    Ok(c)
}

fn parse_generator(tokens: &[String]) -> Result<(CellComplex, usize), CliError> {
    let head = tokens
        .first()
        .ok_or_else(|| CliError::Input("empty generator spec".into()))?;
    let parse_num = |i: usize, what: &str| -> Result<usize, CliError> {
        tokens
            .get(i)
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| CliError::Input(format!("generator `{head}` expects {what}")))
    };
    match head.as_str() {
        "simplex-boundary" => {
            let n = parse_num(1, "a dimension n")?;
            Ok((build_simplex_boundary(n)?, 2))
        }
        "torus" => {
            let k1 = parse_num(1, "two side lengths")?;
            let k2 = parse_num(2, "two side lengths")?;
            Ok((build_torus_grid(k1, k2)?, 3))
        }
        "grid" => {
            let mut lengths = Vec::new();
            let mut i = 1;
            while let Some(n) = tokens.get(i).and_then(|t| t.parse::<usize>().ok()) {
                lengths.push(n);
                i += 1;
            }
            if lengths.is_empty() {
                return Err(CliError::Input(
                    "generator `grid` expects edge counts".into(),
                ));
            }
            Ok((build_interval_grid(&lengths)?, i))
        }
        "product" => {
            let (a, used_a) = parse_generator(&tokens[1..])?;
            let (b, used_b) = parse_generator(&tokens[1 + used_a..])?;
            Ok((product(&a, &b)?, 1 + used_a + used_b))
        }
        other => Err(CliError::Input(format!("unknown generator `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// table emission
// ---------------------------------------------------------------------------

fn emit_table(out: &mut String, format: Format, header: &[&str], rows: &[Vec<String>]) {
    match format {
        Format::Tsv => {
            let _ = writeln!(out, "{}", header.join("\t"));
            for row in rows {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
        }
        Format::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let fmt_row = |cells: Vec<&str>| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", fmt_row(header.to_vec()));
            for row in rows {
                let _ = writeln!(out, "{}", fmt_row(row.iter().map(String::as_str).collect()));
            }
        }
    }
}

/// Fans per-vector work across `jobs` threads; results come back in
/// canonical vector order regardless of completion order.
fn map_vectors<T, F>(c: &CellComplex, vectors: &[FaceVector], jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&CellComplex, FaceVector) -> T + Sync,
{
    let jobs = jobs.max(1).min(vectors.len().max(1));
    if jobs == 1 {
        return vectors.iter().map(|&v| f(c, v)).collect();
    }
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..vectors.len()).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= vectors.len() {
                    break;
                }
                let out = f(c, vectors[i]);
                results.lock().expect("worker poisoned the results")[i] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .expect("worker poisoned the results")
        .into_iter()
        .map(|x| x.expect("every index filled"))
        .collect()
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_gen(spec: &[String], out: &mut String) -> Result<(), CliError> {
    let c = generate(spec)?;
    out.push_str(&serialize_complex(&c));
    Ok(())
}

fn cmd_validate(
    c: &CellComplex,
    bochner: Option<usize>,
    seed: u64,
    tol: f64,
    out: &mut String,
) -> Result<(), CliError> {
    let report = validate(c);
    let _ = write!(out, "{report}");
    let mut failed = !report.all_passed();

    if report.regular_quasiconvex() {
        match forman::counting_check_all(c) {
            Ok(records) => {
                let _ = writeln!(out, "counting-identity\tPASS\t{} vectors", records.len());
            }
            Err(e) => {
                let _ = writeln!(out, "counting-identity\tFAIL\t{e}");
                failed = true;
            }
        }
    } else {
        let _ = writeln!(out, "counting-identity\tSKIPPED\tstructural checks failed");
    }

    if let Some(samples) = bochner {
        if !report.regular_quasiconvex() {
            let _ = writeln!(out, "bochner-identity\tSKIPPED\tstructural checks failed");
            failed = true;
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vectors = c.vectors();
            let mut max_dev: f64 = 0.0;
            let mut done = 0;
            'outer: loop {
                let w =
                    OneForm::from_entries(vectors.iter().map(|&v| (v, rng.gen_range(-1.0..1.0))));
                for &v in &vectors {
                    let got = bochner_ric_raw(c, &w, v).map_err(CliError::from)?;
                    let n0 = forman::neighbor_sets(c, v)
                        .map_err(CliError::from)?
                        .zero
                        .len();
                    let x: f64 = w.get(v);
                    let expected = (2.0 - n0 as f64) * x * x;
                    max_dev = max_dev.max((got - expected).abs());
                    done += 1;
                    if done >= samples {
                        break 'outer;
                    }
                }
            }
            let pass = max_dev <= tol;
            let _ = writeln!(
                out,
                "bochner-identity\t{}\t{} samples, max deviation {:.3e}",
                if pass { "PASS" } else { "FAIL" },
                done,
                max_dev
            );
            failed |= !pass;
        }
    }

    if failed {
        Err(CliError::Check("validation failed".into()))
    } else {
        Ok(())
    }
}

fn cmd_forman(c: &CellComplex, format: Format, out: &mut String) -> Result<(), CliError> {
    refuse_unless_regular(c)?;
    let mut rows = Vec::new();
    for v in c.vectors() {
        let r = forman::counting_check(c, v)?;
        rows.push(vec![
            c.label(v.tau).to_string(),
            c.label(v.sigma).to_string(),
            r.ric.to_string(),
            r.d_tau.to_string(),
            r.d_sigma.to_string(),
            r.n_tau.to_string(),
            r.n_sigma.to_string(),
            r.n2.to_string(),
        ]);
    }
    emit_table(
        out,
        format,
        &[
            "tau", "sigma", "ric", "d_tau", "d_sigma", "n_tau", "n_sigma", "n2",
        ],
        &rows,
    );
    Ok(())
}

fn cmd_lly(
    c: &CellComplex,
    alpha: Option<&str>,
    format: Format,
    jobs: usize,
    out: &mut String,
) -> Result<(), CliError> {
    refuse_unless_regular(c)?;
    let vectors = c.vectors();
    match alpha {
        Some(text) => {
            let alpha = parse_rat(text).map_err(CliError::Input)?;
            let results = map_vectors(c, &vectors, jobs, |c, v| {
                lly::alpha_ricci(c, v.tau, v.sigma, &alpha)
            });
            let mut rows = Vec::new();
            for (v, res) in vectors.iter().zip(results) {
                rows.push(vec![
                    c.label(v.tau).to_string(),
                    c.label(v.sigma).to_string(),
                    display_rat(&res?),
                ]);
            }
            emit_table(out, format, &["tau", "sigma", "kappa_alpha"], &rows);
        }
        None => {
            let results = map_vectors(c, &vectors, jobs, lly::lly_ricci);
            let mut rows = Vec::new();
            for (v, res) in vectors.iter().zip(results) {
                rows.push(vec![
                    c.label(v.tau).to_string(),
                    c.label(v.sigma).to_string(),
                    display_rat(&res?),
                ]);
            }
            emit_table(out, format, &["tau", "sigma", "kappa"], &rows);
        }
    }
    Ok(())
}

fn cmd_compare(
    c: &CellComplex,
    format: Format,
    jobs: usize,
    out: &mut String,
) -> Result<(), CliError> {
    refuse_unless_regular(c)?;
    let vectors = c.vectors();
    let results = map_vectors(c, &vectors, jobs, |c, v| -> Result<_, lly::LlyError> {
        let rec = forman::counting_check(c, v)?;
        let formula = lly::comparison_formula(c, v)?;
        let kappa = lly::lly_ricci(c, v)?;
        Ok((rec.ric, formula, kappa))
    });
    let mut rows = Vec::new();
    let mut mismatches = 0usize;
    for (v, res) in vectors.iter().zip(results) {
        let (ric, formula, kappa) = res?;
        let matched = formula == kappa;
        if !matched {
            mismatches += 1;
        }
        rows.push(vec![
            c.label(v.tau).to_string(),
            c.label(v.sigma).to_string(),
            ric.to_string(),
            display_rat(&formula),
            display_rat(&kappa),
            if matched { "yes".into() } else { "no".into() },
        ]);
    }
    emit_table(
        out,
        format,
        &["tau", "sigma", "ric", "kappa_formula", "kappa_lp", "match"],
        &rows,
    );
    if mismatches > 0 {
        Err(CliError::Check(format!(
            "{mismatches} vectors disagree with the comparison formula"
        )))
    } else {
        Ok(())
    }
}

fn cmd_transport(
    c: &CellComplex,
    source: &str,
    target: &str,
    alpha: &str,
    format: Format,
    out: &mut String,
) -> Result<(), CliError> {
    let alpha = parse_rat(alpha).map_err(CliError::Input)?;
    let a = c.require(source)?;
    let b = c.require(target)?;
    let mu = transport::measure_alpha(c, a, &alpha)?;
    let nu = transport::measure_alpha(c, b, &alpha)?;
    let cert = transport::wasserstein(c, &mu, &nu)?;
    let _ = writeln!(
        out,
        "W = {} = {}",
        display_rat(&cert.value),
        display_rat_decimal(&cert.value)
    );
    let _ = writeln!(
        out,
        "dual = {} (primal = dual: {})",
        display_rat(&cert.dual_value),
        cert.primal_cost == cert.dual_value
    );
    let rows: Vec<Vec<String>> = cert
        .optimal_coupling
        .flow
        .iter()
        .map(|(&(x, y), m)| {
            vec![
                c.label(x).to_string(),
                c.label(y).to_string(),
                m.numer().to_string(),
                m.denom().to_string(),
            ]
        })
        .collect();
    emit_table(
        out,
        format,
        &["source", "target", "mass_num", "mass_den"],
        &rows,
    );
    Ok(())
}

fn cmd_spectrum(c: &CellComplex, eps: f64, full: bool, out: &mut String) -> Result<(), CliError> {
    let report = spectral::eigen_bound(c, eps)?;
    if full {
        for e in &report.eigenvalues {
            let _ = writeln!(out, "eigenvalue\t{:.12}", e);
        }
    }
    let _ = writeln!(out, "lambda1\t{:.12}", report.lambda1);
    let _ = writeln!(out, "zero_multiplicity\t{}", report.zero_multiplicity);
    match report.diameter {
        Some(d) => {
            let _ = writeln!(out, "diameter\t{d}");
        }
        None => {
            let _ = writeln!(out, "diameter\tinf");
        }
    }
    let _ = writeln!(out, "kappa_min\t{}", display_rat(&report.kappa_min));
    match &report.bounds {
        None => {
            let _ = writeln!(
                out,
                "bounds\tnot applicable (kappa_min <= 0 or disconnected)"
            );
            Ok(())
        }
        Some(b) => {
            let _ = writeln!(
                out,
                "myers_bound\t{}\t{}",
                display_rat(&b.myers_bound),
                if b.myers_pass { "PASS" } else { "FAIL" }
            );
            let _ = writeln!(
                out,
                "lambda1_bound\t{}\t{}",
                display_rat(&b.lambda1_bound),
                if b.lambda1_pass { "PASS" } else { "FAIL" }
            );
            if b.myers_pass && b.lambda1_pass {
                Ok(())
            } else {
                Err(CliError::Check("a spectral bound failed".into()))
            }
        }
    }
}

fn refuse_unless_regular(c: &CellComplex) -> Result<(), CliError> {
    let report = validate(c);
    if report.regular_quasiconvex() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "complex failed structural validation; curvature is undefined:\n{report}"
        )))
    }
}
