//! Command-line front end: validation, potential sampling, Weyl functions,
//! inverse problems, lattice evolution reports, and nonlinear-wave grids.
//!
//! Exit codes: 0 success, 1 domain/precondition failure, 2 I/O or parse
//! failure. All data goes to standard output, diagnostics to standard error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;

use dirac_pe::document::{QuadrupleDocument, RealizationDocument, SCHEMA_VERSION};
use dirac_pe::{continuous, discrete, evolution, inverse};
use dirac_pe::{AdmissibleQuadruple, CMat, Convention, StateSpaceRealization};

#[derive(Parser)]
#[command(name = "dirac-pe", version, about = "Explicit Dirac-system and discrete-magnet computations")]
struct Cli {
    /// Admissibility tolerance used when parsing quadruple documents.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized self-checks (accepted for reproducibility; the
    /// current commands are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit machine-readable JSON instead of CSV where both exist.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Continuous system on the half-line x >= 0.
    C,
    /// Discrete system indexed by k = 0, 1, ...
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Flow {
    Nls,
    Mkdv,
}

#[derive(Subcommand)]
enum Command {
    /// Check a quadruple document for admissibility and strength.
    Validate { file: String },
    /// Sample the potential v(x) (mode c) or C_k (mode d) as CSV.
    Potential {
        file: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Right endpoint of the x-grid (mode c).
        #[arg(long, default_value_t = 1.0)]
        xmax: f64,
        /// Number of x-grid intervals (mode c); rows = steps + 1.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Largest lattice index (mode d); rows = kmax + 1.
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Emit the Weyl function as a realization document.
    Weyl {
        file: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Evolve the discrete Weyl function to time T (mode d only).
        #[arg(long)]
        t: Option<f64>,
    },
    /// Recover a quadruple from a Weyl-function realization document.
    Invert {
        file: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Evolution report: C_k(t) diagnostics, residuals, evolved Weyl function.
    Evolve {
        file: String,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Spectral point "re,im" for the zero-curvature residual.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Option<Complex<f64>>,
        /// Central-difference step for the residuals.
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Sample v(x, t) for the NLS (p = 2) or mKdV (p = 3) family as CSV.
    Nlwave {
        file: String,
        #[arg(long, value_enum)]
        flow: Flow,
        /// Grid "x0:x1:xsteps,t0:t1:tsteps".
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        /// Central-difference step for the residual summary
        /// (default 5e-4 for nls, 2e-3 for mkdv).
        #[arg(long)]
        h: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug)]
struct Grid {
    x0: f64,
    x1: f64,
    xsteps: usize,
    t0: f64,
    t1: f64,
    tsteps: usize,
}

fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| e.to_string());
    match parts.as_slice() {
        [re] => Ok(Complex::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex::new(parse(re)?, parse(im)?)),
        _ => Err("expected \"re\" or \"re,im\"".into()),
    }
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("axis {s:?} is not of the form a:b:steps"));
    };
    let steps: usize = n.trim().parse().map_err(|e| format!("{e}"))?;
    if steps == 0 {
        return Err("axis needs at least 1 step".into());
    }
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
        steps,
    ))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, t] = parts.as_slice() else {
        return Err("expected \"x0:x1:xsteps,t0:t1:tsteps\"".into());
    };
    let (x0, x1, xsteps) = parse_axis(x)?;
    let (t0, t1, tsteps) = parse_axis(t)?;
    Ok(Grid {
        x0,
        x1,
        xsteps,
        t0,
        t1,
        tsteps,
    })
}

/// Failure modes mapped onto the exit-code contract.
enum Failure {
    /// Exit 1: the input parsed but violates a mathematical precondition.
    Domain(String),
    /// Exit 2: I/O or JSON parse problem.
    Io(String),
}

impl From<dirac_pe::Error> for Failure {
    fn from(e: dirac_pe::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read_input(path: &str) -> std::result::Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Io(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {path}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> std::result::Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Io(format!("parsing JSON: {e}")))
}

fn load_quadruple(path: &str, tol: f64) -> std::result::Result<AdmissibleQuadruple, Failure> {
    let doc: QuadrupleDocument = parse_json(&read_input(path)?)?;
    Ok(doc.to_quadruple(tol)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

/// CSV cell list for one complex matrix: entries row-major, re then im.
fn matrix_cells(m: &CMat, out: &mut Vec<String>) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(format!("{}", m[(r, c)].re));
            out.push(format!("{}", m[(r, c)].im));
        }
    }
}

fn matrix_headers(prefix: &str, rows: usize, cols: usize, out: &mut Vec<String>) {
    for r in 0..rows {
        for c in 0..cols {
            out.push(format!("re_{prefix}{r}_{c}"));
            out.push(format!("im_{prefix}{r}_{c}"));
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StrongReport {
    controllable: bool,
    spectrum_in_upper_half_plane: bool,
    i_not_eigenvalue: bool,
    strong: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ValidateReport {
    schema_version: &'static str,
    n: usize,
    m1: usize,
    m2: usize,
    admissible: bool,
    hermitian_residual: f64,
    min_eigenvalue: f64,
    admissibility_residual: f64,
    failure: Option<String>,
    spectrum: Vec<[f64; 2]>,
    strong: Option<StrongReport>,
}

fn cmd_validate(file: &str, tol: f64) -> CmdResult {
    let doc: QuadrupleDocument = parse_json(&read_input(file)?)?;
    let (alpha, s0, theta1, theta2) = doc.matrices()?;
    let report = dirac_pe::quadruple::validate(&alpha, &s0, &theta1, &theta2, tol)?;
    let mut out = ValidateReport {
        schema_version: SCHEMA_VERSION,
        n: doc.n,
        m1: doc.m1,
        m2: doc.m2,
        admissible: report.passes,
        hermitian_residual: report.hermitian_residual,
        min_eigenvalue: report.min_eigenvalue,
        admissibility_residual: report.admissibility_residual,
        failure: report.failure.clone(),
        spectrum: Vec::new(),
        strong: None,
    };
    if report.passes {
        let q = doc.to_quadruple(tol)?;
        out.spectrum = q
            .alpha_eigenvalues()
            .iter()
            .map(|z| [z.re, z.im])
            .collect();
        let flag = q.is_strong()?;
        out.strong = Some(StrongReport {
            controllable: flag.controllable,
            spectrum_in_upper_half_plane: flag.spectrum_in_upper_half_plane,
            i_not_eigenvalue: flag.i_not_eigenvalue,
            strong: flag.is_strong(),
        });
    }
    print_json(&out);
    if report.passes {
        Ok(())
    } else {
        Err(Failure::Domain(
            report.failure.unwrap_or_else(|| "not admissible".into()),
        ))
    }
}

fn emit_rows(headers: Vec<String>, rows: Vec<Vec<String>>, json: bool) {
    if json {
        let obj = serde_json::json!({
            "schemaVersion": SCHEMA_VERSION,
            "columns": headers,
            "rows": rows
                .iter()
                .map(|r| r.iter().map(|cell| cell.parse::<f64>().expect("numeric cell")).collect::<Vec<f64>>())
                .collect::<Vec<_>>(),
        });
        print_json(&obj);
    } else {
        println!("{}", headers.join(","));
        for row in rows {
            println!("{}", row.join(","));
        }
    }
}

fn cmd_potential(
    file: &str,
    mode: Mode,
    xmax: f64,
    steps: usize,
    kmax: usize,
    tol: f64,
    json: bool,
) -> CmdResult {
    let q = load_quadruple(file, tol)?;
    match mode {
        Mode::C => {
            if steps == 0 {
                return Err(Failure::Domain("steps must be positive".into()));
            }
            let xs: Vec<f64> = (0..=steps).map(|i| xmax * i as f64 / steps as f64).collect();
            let series = continuous::sample_potential(&q, &xs)?;
            let mut headers = vec!["x".to_string()];
            matrix_headers("v", q.m2(), q.m1(), &mut headers);
            let rows = series
                .iter()
                .map(|(x, v)| {
                    let mut row = vec![format!("{x}")];
                    matrix_cells(v, &mut row);
                    row
                })
                .collect();
            emit_rows(headers, rows, json);
        }
        Mode::D => {
            let seq = discrete::potential_seq(&q, kmax)?;
            let mut headers = vec!["k".to_string()];
            matrix_headers("c", q.m(), q.m(), &mut headers);
            let rows = (0..=kmax)
                .map(|k| {
                    let mut row = vec![format!("{k}")];
                    matrix_cells(seq.c(k), &mut row);
                    row
                })
                .collect();
            emit_rows(headers, rows, json);
        }
    }
    Ok(())
}

fn cmd_weyl(file: &str, mode: Mode, t: Option<f64>, tol: f64) -> CmdResult {
    let q = load_quadruple(file, tol)?;
    let realization: StateSpaceRealization = match (mode, t) {
        (Mode::C, None) => continuous::weyl(&q),
        (Mode::C, Some(_)) => {
            return Err(Failure::Domain(
                "--t applies to the discrete Weyl evolution only (mode d)".into(),
            ))
        }
        (Mode::D, None) => discrete::weyl_d(&q),
        (Mode::D, Some(t)) => evolution::weyl_evolution(&q, t)?,
    };
    print_json(&RealizationDocument::from_realization(&realization));
    Ok(())
}

fn cmd_invert(file: &str, mode: Mode, tol: f64) -> CmdResult {
    let doc: RealizationDocument = parse_json(&read_input(file)?)?;
    let realization = doc.to_realization()?;
    let expected = match mode {
        Mode::C => Convention::Continuous,
        Mode::D => Convention::Discrete,
    };
    if realization.convention() != expected {
        return Err(Failure::Domain(format!(
            "document convention {:?} does not match requested mode",
            doc.convention
        )));
    }
    let q = match mode {
        Mode::C => inverse::invert_continuous(&realization)?,
        Mode::D => inverse::invert_discrete(&realization)?,
    };
    let _ = tol;
    print_json(&QuadrupleDocument::from_quadruple(&q));
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvolveRow {
    k: usize,
    hermitian_residual: f64,
    involution_residual: f64,
    rank_plus: usize,
    rank_minus: usize,
    annihilation_residual: f64,
    gdhm_residual: f64,
    zcc_residual: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvolveReport {
    schema_version: &'static str,
    t: f64,
    k_max: usize,
    h: f64,
    z: Option<[f64; 2]>,
    per_k: Vec<EvolveRow>,
    weyl: RealizationDocument,
}

fn cmd_evolve(
    file: &str,
    t: f64,
    kmax: usize,
    z: Option<Complex<f64>>,
    h: f64,
    tol: f64,
) -> CmdResult {
    let q = load_quadruple(file, tol)?;
    let m = q.m();
    let id = CMat::identity(m, m);
    let mut per_k = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let ck = evolution::gdhm_c(&q, t, k)?;
        let inv = discrete::involution_check(&ck)?;
        let (h_plus, h_minus) = evolution::gdhm_h(&q, t, k)?;
        let (h1_plus, h1_minus) = evolution::gdhm_h(&q, t, k + 1)?;
        let annihilation_residual = ((&id - &ck) * &h_plus)
            .norm()
            .max((&h1_plus * (&id - &ck)).norm())
            .max(((&id + &ck) * &h_minus).norm())
            .max((&h1_minus * (&id + &ck)).norm());
        per_k.push(EvolveRow {
            k,
            hermitian_residual: inv.hermitian_residual,
            involution_residual: inv.involution_residual,
            rank_plus: inv.rank_plus,
            rank_minus: inv.rank_minus,
            annihilation_residual,
            gdhm_residual: evolution::gdhm_residual(&q, t, k, h)?,
            zcc_residual: match z {
                Some(z) => Some(evolution::zcc_residual(&q, t, k, z, h)?),
                None => None,
            },
        });
    }
    let weyl = evolution::weyl_evolution(&q, t)?;
    print_json(&EvolveReport {
        schema_version: SCHEMA_VERSION,
        t,
        k_max: kmax,
        h,
        z: z.map(|z| [z.re, z.im]),
        per_k,
        weyl: RealizationDocument::from_realization(&weyl),
    });
    Ok(())
}

fn cmd_nlwave(file: &str, flow: Flow, grid: Grid, h: Option<f64>, tol: f64, json: bool) -> CmdResult {
    let q = load_quadruple(file, tol)?;
    let (p, h) = match flow {
        Flow::Nls => (2u32, h.unwrap_or(5e-4)),
        Flow::Mkdv => (3u32, h.unwrap_or(2e-3)),
    };
    let mut headers = vec!["x".to_string(), "t".to_string()];
    matrix_headers("v", q.m2(), q.m1(), &mut headers);
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for it in 0..=grid.tsteps {
        let t = grid.t0 + (grid.t1 - grid.t0) * it as f64 / grid.tsteps as f64;
        for ix in 0..=grid.xsteps {
            let x = grid.x0 + (grid.x1 - grid.x0) * ix as f64 / grid.xsteps as f64;
            let v = evolution::vxt(&q, x, t, p)?;
            let mut row = vec![format!("{x}"), format!("{t}")];
            matrix_cells(&v, &mut row);
            rows.push(row);
            let r = match flow {
                Flow::Nls => evolution::nls_residual(&q, x, t, h)?,
                Flow::Mkdv => evolution::mkdv_residual(&q, x, t, h)?,
            };
            max_residual = max_residual.max(r);
        }
    }
    emit_rows(headers, rows, json);
    eprintln!("max {} residual over the grid (h = {h}): {max_residual:e}",
        match flow { Flow::Nls => "NLS", Flow::Mkdv => "mKdV" });
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { ref file } => cmd_validate(file, cli.tol),
        Command::Potential {
            ref file,
            mode,
            xmax,
            steps,
            kmax,
        } => cmd_potential(file, mode, xmax, steps, kmax, cli.tol, cli.json),
        Command::Weyl { ref file, mode, t } => cmd_weyl(file, mode, t, cli.tol),
        Command::Invert { ref file, mode } => cmd_invert(file, mode, cli.tol),
        Command::Evolve {
            ref file,
            t,
            kmax,
            z,
            h,
        } => cmd_evolve(file, t, kmax, z, h, cli.tol),
        Command::Nlwave {
            ref file,
            flow,
            grid,
            h,
        } => cmd_nlwave(file, flow, grid, h, cli.tol, cli.json),
    }
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE (e.g. when piped into `head`) instead of
    // panicking on a failed stdout write.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
