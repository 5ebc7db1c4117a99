//! `krylov` — deterministic CSV tables for spread-complexity dynamics.
//!
//! Every subcommand evolves a lowest-weight operator state under a coherent
//! drive (or reads operators from files) and emits a CSV table: `#` comment
//! lines echoing the resolved parameters, a header row, then data rows with
//! 17 significant digits per float. Output carries no timestamps or other
//! run-dependent state, so identical invocations produce byte-identical
//! tables.
//!
//! Exit codes: `0` on success, `2` for usage and input errors (bad flags,
//! malformed files, invalid parameters), `3` for domain and numerical
//! failures (deformation out of range, truncation overflow, lost
//! conservation). Diagnostics go to stderr; log verbosity is set by the
//! `KRYLOV_LOG` environment variable (default `warn`).

mod io;

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use krylov_core::dynamics::{quench_trace, symmetry_trace};
use krylov_core::geometry::{height_weights, profile_radius, DeformationParams, HeightTable};
use krylov_core::lanczos::{lanczos_basis, DEFAULT_TERM_TOL};
use krylov_core::opspace::{vectorize, CommutatorAction, OperatorMatrix};
use krylov_core::symmetry::{GroupParams, SU11Params, SU2Params};
use krylov_core::{KrylovError, Result};

#[derive(Parser)]
#[command(
    name = "krylov",
    version,
    about = "Spread-complexity tables for coherent drives, deformed spheres, and quenches"
)]
struct Cli {
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Command,
}

/// Time-grid flags shared by the evolution subcommands. The grid is
/// uniform: `t_i = i · tmax / (grid − 1)`.
#[derive(Args)]
struct TimeArgs {
    /// Largest time on the grid (default: 2π for spin drives, 3 for the
    /// hyperbolic drive).
    #[arg(long, value_name = "T")]
    tmax: Option<f64>,

    /// Number of uniformly spaced grid points, at least 2.
    #[arg(long, default_value_t = 512, value_name = "N")]
    grid: usize,
}

impl TimeArgs {
    fn grid_points(&self, default_tmax: f64) -> Result<(f64, Vec<f64>)> {
        let tmax = self.tmax.unwrap_or(default_tmax);
        if !(tmax.is_finite() && tmax > 0.0) {
            return Err(KrylovError::InvalidInput(format!(
                "tmax must be positive and finite, got {tmax}"
            )));
        }
        if self.grid < 2 {
            return Err(KrylovError::InvalidInput(format!(
                "grid must have at least 2 points, got {}",
                self.grid
            )));
        }
        let n = self.grid;
        let ts = (0..n)
            .map(|i| i as f64 * tmax / (n - 1) as f64)
            .collect();
        Ok((tmax, ts))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spread and circuit complexity of the compact coherent orbit.
    ///
    /// Columns: t, ck_num, ck_analytic, circuit, theta, psi — the numeric
    /// chain spread, its closed form ell·(1 − cos Bt), the geodesic arc
    /// ell·Bt, and the Euler angles recovered from the evolved state.
    Su2 {
        /// Spin of the representation (a half-integer: 0.5, 1, 1.5, …).
        #[arg(long)]
        ell: f64,
        /// Drive coupling.
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        #[command(flatten)]
        time: TimeArgs,
    },

    /// Spread complexity of the non-compact (hyperbolic) coherent orbit.
    ///
    /// Columns: t, ck_num, ck_analytic, circuit, leak — the truncated-chain
    /// spread, its closed form k·(cosh Bt − 1), the arc k·Bt, and the
    /// evolved weight beyond the trusted core of the truncation.
    Su11 {
        /// Bargmann index of the representation (k > 0).
        #[arg(long)]
        k: f64,
        /// Drive coupling.
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        #[command(flatten)]
        time: TimeArgs,
    },

    /// Spread complexity re-weighted by squashed-sphere heights, swept
    /// over deformation parameters.
    ///
    /// Columns: t, then per lambda the height-weighted spread raw and
    /// divided by 2·ell, then the circuit arc. lambda = 1 reproduces the
    /// plain spread exactly.
    Deform {
        /// Spin of the representation (a half-integer).
        #[arg(long)]
        ell: f64,
        /// Drive coupling.
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        /// Deformation parameter; repeat the flag for a sweep
        /// (default sweep: 0.9, 1, 1.2). Valid range 0 < lambda ≤ √3.
        #[arg(long = "lambda", value_name = "L")]
        lambdas: Vec<f64>,
        #[command(flatten)]
        time: TimeArgs,
    },

    /// Complexity through a drive quench: a spin rotation up to t*, then a
    /// z-axis rotation, measured in the pre-quench chain and its dual.
    ///
    /// Columns: t, ck, ck_per2ell, ck_prime, ck_prime_per2ell, circuit —
    /// the primary-chain spread freezes at the quench while the dual-chain
    /// spread starts moving, and the circuit arc stalls.
    Quench {
        /// Spin of the representation (a half-integer).
        #[arg(long)]
        ell: f64,
        /// Drive coupling (non-zero).
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        /// Quench time.
        #[arg(long, default_value_t = FRAC_PI_2)]
        tstar: f64,
        #[command(flatten)]
        time: TimeArgs,
    },

    /// Height profile of the deformed sphere.
    ///
    /// Default columns: n, theta_n, h_theta_n — the chain site, its polar
    /// angle arccos(1 − n/ell), and the surface height there (the weights
    /// of the deformed complexity). With --profile-points, emits the full
    /// profile (theta, radius, height) on a uniform grid instead.
    Heights {
        /// Spin of the representation (a half-integer).
        #[arg(long)]
        ell: f64,
        /// Deformation parameter, 0 < lambda ≤ √3.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Emit (theta, radius, height) on this many uniform nodes instead
        /// of per-site weights.
        #[arg(long, value_name = "N")]
        profile_points: Option<usize>,
    },

    /// Hopping coefficients of the Krylov chain built from operators on
    /// file: the flow of the Hamiltonian applied to the seed operator.
    ///
    /// Columns: m, beta_m. Matrix files hold one row per line with
    /// comma-separated `re im` entries; the Hamiltonian must be Hermitian
    /// and the seed is normalized if it does not arrive so.
    Lanczos {
        /// File holding the Hamiltonian matrix.
        #[arg(long, value_name = "FILE")]
        hamiltonian: PathBuf,
        /// File holding the seed operator matrix.
        #[arg(long, value_name = "FILE")]
        seed: PathBuf,
        /// Largest chain length to build (default: the full operator-space
        /// dimension d²).
        #[arg(long, value_name = "N")]
        max_dim: Option<usize>,
        /// Chain termination tolerance on the hop size.
        #[arg(long, default_value_t = DEFAULT_TERM_TOL)]
        term_tol: f64,
    },
}

/// A CSV table: comment lines, a header, and formatted rows.
struct Table {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write_to(&self, sink: &mut dyn std::io::Write) -> std::io::Result<()> {
        for c in &self.comments {
            writeln!(sink, "# {c}")?;
        }
        writeln!(sink, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(sink, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// 17-significant-digit cell, enough to reproduce any f64 exactly.
fn cell(x: f64) -> String {
    format!("{x:.16e}")
}

fn run(cli: Cli) -> Result<()> {
    let table = match cli.cmd {
        Command::Su2 { ell, b, time } => su2_table(ell, b, &time)?,
        Command::Su11 { k, b, time } => su11_table(k, b, &time)?,
        Command::Deform {
            ell,
            b,
            lambdas,
            time,
        } => deform_table(ell, b, &lambdas, &time)?,
        Command::Quench { ell, b, tstar, time } => quench_table(ell, b, tstar, &time)?,
        Command::Heights {
            ell,
            lambda,
            profile_points,
        } => heights_table(ell, lambda, profile_points)?,
        Command::Lanczos {
            hamiltonian,
            seed,
            max_dim,
            term_tol,
        } => lanczos_table(&hamiltonian, &seed, max_dim, term_tol)?,
    };
    write_table(cli.out.as_deref(), &table)
}

fn write_table(out: Option<&Path>, table: &Table) -> Result<()> {
    let io_err = |what: &str, e: std::io::Error| {
        KrylovError::InvalidInput(format!("cannot write {what}: {e}"))
    };
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock).map_err(|e| io_err("stdout", e))
        }
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| io_err(&path.display().to_string(), e))?;
            let mut sink = BufWriter::new(file);
            table
                .write_to(&mut sink)
                .and_then(|()| sink.flush())
                .map_err(|e| io_err(&path.display().to_string(), e))
        }
    }
}

fn su2_table(ell: f64, b: f64, time: &TimeArgs) -> Result<Table> {
    let p = SU2Params::new(ell, b)?;
    let (tmax, grid) = time.grid_points(TAU)?;
    let trace = symmetry_trace(&GroupParams::Su2(p), &grid, None)?;
    let analytic = trace.ck_analytic.as_ref().expect("su2 trace is analytic");
    let angles = trace.angles.as_ref().expect("su2 trace carries angles");
    let rows = (0..grid.len())
        .map(|i| {
            vec![
                cell(trace.times[i]),
                cell(trace.ck[i]),
                cell(analytic[i]),
                cell(trace.circuit[i]),
                cell(angles[i].theta()),
                cell(angles[i].psi()),
            ]
        })
        .collect();
    Ok(Table {
        comments: vec![format!(
            "krylov su2: ell = {ell}, B = {b}, tmax = {tmax}, grid = {}",
            grid.len()
        )],
        header: vec!["t", "ck_num", "ck_analytic", "circuit", "theta", "psi"],
        rows,
    })
}

fn su11_table(k: f64, b: f64, time: &TimeArgs) -> Result<Table> {
    let (tmax, grid) = time.grid_points(3.0)?;
    let p = SU11Params::new(k, b, tmax)?;
    let comments = vec![
        format!(
            "krylov su11: k = {k}, B = {b}, tmax = {tmax}, grid = {}",
            grid.len()
        ),
        format!(
            "truncated chain: n_max = {}, trusted core = {}",
            p.n_max(),
            p.n_core()
        ),
    ];
    let trace = symmetry_trace(&GroupParams::Su11(p), &grid, None)?;
    let analytic = trace.ck_analytic.as_ref().expect("su11 trace is analytic");
    let rows = (0..grid.len())
        .map(|i| {
            vec![
                cell(trace.times[i]),
                cell(trace.ck[i]),
                cell(analytic[i]),
                cell(trace.circuit[i]),
                cell(trace.leak[i]),
            ]
        })
        .collect();
    Ok(Table {
        comments,
        header: vec!["t", "ck_num", "ck_analytic", "circuit", "leak"],
        rows,
    })
}

fn deform_table(ell: f64, b: f64, lambdas: &[f64], time: &TimeArgs) -> Result<Table> {
    let p = SU2Params::new(ell, b)?;
    let (tmax, grid) = time.grid_points(TAU)?;
    let sweep: Vec<f64> = if lambdas.is_empty() {
        vec![0.9, 1.0, 1.2]
    } else {
        lambdas.to_vec()
    };

    let mut columns = Vec::with_capacity(sweep.len());
    let mut circuit = None;
    for &lambda in &sweep {
        let d = DeformationParams::new(lambda, ell)?;
        let trace = symmetry_trace(&GroupParams::Su2(p.clone()), &grid, Some(&d))?;
        let deformed = trace
            .ck_deformed
            .clone()
            .expect("deformed trace carries height-weighted spread");
        columns.push(deformed);
        circuit.get_or_insert(trace.circuit);
    }
    let circuit = circuit.expect("sweep is non-empty");

    // Header strings live for the program's lifetime; the sweep is small.
    let mut header: Vec<&'static str> = vec!["t"];
    for &lambda in &sweep {
        header.push(Box::leak(format!("ck_lambda_{lambda}").into_boxed_str()));
        header.push(Box::leak(
            format!("ck_lambda_{lambda}_per2ell").into_boxed_str(),
        ));
    }
    header.push("circuit");

    let two_ell = 2.0 * ell;
    let rows = (0..grid.len())
        .map(|i| {
            let mut row = vec![cell(grid[i])];
            for col in &columns {
                row.push(cell(col[i]));
                row.push(cell(col[i] / two_ell));
            }
            row.push(cell(circuit[i]));
            row
        })
        .collect();
    let sweep_names: Vec<String> = sweep.iter().map(|l| l.to_string()).collect();
    Ok(Table {
        comments: vec![format!(
            "krylov deform: ell = {ell}, B = {b}, tmax = {tmax}, grid = {}, lambda = [{}]",
            grid.len(),
            sweep_names.join(", ")
        )],
        header,
        rows,
    })
}

fn quench_table(ell: f64, b: f64, tstar: f64, time: &TimeArgs) -> Result<Table> {
    let p = SU2Params::new(ell, b)?;
    let (tmax, grid) = time.grid_points(TAU)?;
    let trace = quench_trace(&p, tstar, &grid, None)?;
    let prime = trace.ck_prime.as_ref().expect("quench trace carries the dual");
    let two_ell = 2.0 * ell;
    let rows = (0..grid.len())
        .map(|i| {
            vec![
                cell(trace.times[i]),
                cell(trace.ck[i]),
                cell(trace.ck[i] / two_ell),
                cell(prime[i]),
                cell(prime[i] / two_ell),
                cell(trace.circuit[i]),
            ]
        })
        .collect();
    Ok(Table {
        comments: vec![format!(
            "krylov quench: ell = {ell}, B = {b}, tstar = {tstar}, tmax = {tmax}, grid = {}",
            grid.len()
        )],
        header: vec![
            "t",
            "ck",
            "ck_per2ell",
            "ck_prime",
            "ck_prime_per2ell",
            "circuit",
        ],
        rows,
    })
}

fn heights_table(ell: f64, lambda: f64, profile_points: Option<usize>) -> Result<Table> {
    let d = DeformationParams::new(lambda, ell)?;
    match profile_points {
        None => {
            let weights = height_weights(&d)?;
            let rows = weights
                .iter()
                .enumerate()
                .map(|(n, &h)| {
                    let theta_n = (1.0 - n as f64 / ell).clamp(-1.0, 1.0).acos();
                    vec![n.to_string(), cell(theta_n), cell(h)]
                })
                .collect();
            Ok(Table {
                comments: vec![format!(
                    "krylov heights: ell = {ell}, lambda = {lambda}, per-site weights"
                )],
                header: vec!["n", "theta_n", "h_theta_n"],
                rows,
            })
        }
        Some(n) => {
            let table = HeightTable::with_points(&d, n)?;
            let rows = table
                .thetas()
                .iter()
                .zip(table.heights())
                .map(|(&theta, &h)| {
                    let r = profile_radius(theta, &d)?;
                    Ok(vec![cell(theta), cell(r), cell(h)])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Table {
                comments: vec![format!(
                    "krylov heights: ell = {ell}, lambda = {lambda}, profile on {n} nodes"
                )],
                header: vec!["theta", "radius", "height"],
                rows,
            })
        }
    }
}

fn lanczos_table(
    hamiltonian: &Path,
    seed: &Path,
    max_dim: Option<usize>,
    term_tol: f64,
) -> Result<Table> {
    let h_op = io::load_operator_file(hamiltonian)?;
    let d = h_op.dim();
    let h = OperatorMatrix::hamiltonian(h_op.into_matrix())?;
    let seed_op = io::load_operator_file(seed)?;
    if seed_op.dim() != d {
        return Err(KrylovError::InvalidInput(format!(
            "seed operator is {0}x{0} but the Hamiltonian acts on dimension {d}",
            seed_op.dim()
        )));
    }
    let state = vectorize(&seed_op);
    let state = if state.is_normalized() {
        state
    } else {
        log::info!(
            "seed operator normalized before the chain build (norm was {:.6e})",
            state.norm()
        );
        state.normalized()?
    };
    let action = CommutatorAction::new(h)?;
    let max_dim = max_dim.unwrap_or(d * d);
    let basis = lanczos_basis(&action, &state, max_dim, term_tol)?;
    let rows = basis
        .hops()
        .iter()
        .enumerate()
        .map(|(i, &beta)| vec![(i + 1).to_string(), cell(beta)])
        .collect();
    Ok(Table {
        comments: vec![
            format!(
                "krylov lanczos: hamiltonian = {}, seed = {}, max_dim = {max_dim}, term_tol = {term_tol:e}",
                hamiltonian.display(),
                seed.display()
            ),
            format!("chain closed at dimension {}", basis.dim()),
        ],
        header: vec!["m", "beta_m"],
        rows,
    })
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KRYLOV_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = match &e {
            KrylovError::InvalidInput(_) => 2,
            _ => 3,
        };
        std::process::exit(code);
    }
}
