//! `cocycle`: experiments on projective-derivative cocycles, written as CSV.

mod csv;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mobius_cocycle::analysis::{
    boundedness_bounds, drift_grid, drift_sequence, enlarged_drift_sequence, reduce_with_conjugacy, DriftRecord,
};
use mobius_cocycle::enlarged::{diagonal_probe, enlarged_cocycle, Triple};
use mobius_cocycle::projective::{cocycle_iterates, projective_derivative};
use mobius_cocycle::sweep::uniform_grid;
use mobius_cocycle::{parse_map_spec, Angle, CircleMap, CircleMapExpr, MobiusMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csv::{Cell, Table};

const MAP_HELP: &str = "Map spec, e.g. `rot:0.5`, `arnold:a=0,b=0.5`, \
`mobius:kappa=0,sigma=0.3+0i`, `comp(f,g)`, `inv(f)`, `pow(f,n)`, `conj(phi,f)`";

#[derive(Parser)]
#[command(
    name = "cocycle",
    version,
    about = "Projective-derivative cocycles of circle maps, as CSV"
)]
struct Cli {
    /// Seed for random sample points
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the table here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Projective derivative of a map at one point
    #[command(
        allow_negative_numbers = true,
        after_help = "Columns:\n  theta     base point (radians)\n  value     f(theta) in [0, 2pi)\n  \
d1        Df(theta)\n  d2        D^2 f(theta)\n  kappa     rotation parameter, in (-pi, pi], of the osculating Mobius map\n  \
sigma_re  real part of its sigma\n  sigma_im  imaginary part of its sigma\n  r         |sigma|"
    )]
    Fit {
        #[command(flatten)]
        at: MapAt,
    },
    /// Cocycle iterates P_{f^n, theta} for n = 1..N
    #[command(
        allow_negative_numbers = true,
        after_help = "Columns:\n  n         iterate\n  kappa     rotation parameter, in (-pi, pi], of P_{f^n,theta}\n  \
sigma_re  real part of sigma_n\n  sigma_im  imaginary part of sigma_n\n  r         |sigma_n|"
    )]
    Iterate {
        #[command(flatten)]
        at: MapAt,
        /// Number of iterates
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Hyperbolic drift of the projective cocycle
    #[command(
        allow_negative_numbers = true,
        after_help = "Columns:\n  theta          base point; present only with --grid or --random\n  \
n              iterate\n  r_n            |sigma_n|\n  dist           log((1 + r_n)/(1 - r_n))\n  \
drift          dist / n\n  d_n            Df^n(theta)\n  delta_n        D^2 f^n(theta)\n  \
one_minus_r_sq 1 - r_n^2 from the composed cocycle\n\n\
Rows are ordered by base point (grid points first, then random points) and then by n."
    )]
    Drift {
        #[command(flatten)]
        at: MapAt,
        /// Number of iterates
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Sweep the uniform grid 2 pi j / K instead of --theta
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        grid: Option<u64>,
        /// Add this many uniformly random base points drawn from --seed
        #[arg(long)]
        random: Option<u64>,
    },
    /// Reduction B(f theta) P_{f,theta} B(theta)^-1 with B(theta) = P_{conj,theta}
    #[command(after_help = "Columns:\n  theta     grid point 2 pi j / K\n  \
kappa     rotation parameter, in (-pi, pi], of the reduced map\n  sigma_re  real part of its sigma\n  \
sigma_im  imaginary part of its sigma\n  residual  hyperbolic distance of sigma from 0\n  \
angle     kappa in [0, 2pi)")]
    Reduce {
        #[arg(long, help = MAP_HELP, value_parser = parse_map)]
        map: CircleMapExpr,
        /// Conjugating map used to build B
        #[arg(long, value_parser = parse_map)]
        conj: CircleMapExpr,
        /// Grid size K
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        grid: u64,
    },
    /// Three-point cocycle on shrinking symmetric triples (theta - eps, theta, theta + eps)
    #[command(
        allow_negative_numbers = true,
        after_help = "Columns:\n  eps              half-width eps0 * factor^k\n  \
gamma_over       (1 - cos gamma)/eps^2\n  gamma_plus_over  (1 - cos(gamma + 2 eps))/eps^2\n  \
rho_defect_over  (1 - |tau|)/eps\n  kappa            rotation parameter, in (-pi, pi], of the three-point map\n  \
sigma_re         real part of its sigma\n  sigma_im         imaginary part of its sigma\n\n\
gamma = (f(theta + eps) - f(theta - eps))/2 - eps."
    )]
    Diagonal {
        #[command(flatten)]
        at: MapAt,
        /// Initial half-width, in (0, pi/2)
        #[arg(long)]
        eps: f64,
        /// Shrink factor, in (0, 1)
        #[arg(long)]
        factor: f64,
        /// Number of probes
        #[arg(long)]
        steps: usize,
    },
    /// Three-point cocycle of a triple, or its drift along the orbit with --n
    #[command(
        after_help = "Columns without --n:\n  kappa     rotation parameter, in (-pi, pi], of the three-point map\n  \
sigma_re  real part of its sigma\n  sigma_im  imaginary part of its sigma\n  \
min_gap   smallest circular distance in the triple\n\n\
Columns with --n:\n  n              iterate\n  r_n            |sigma_n|\n  \
dist           hyperbolic distance of sigma_n from 0\n  drift          dist / n\n  \
one_minus_r_sq 1 - r_n^2 from the composed cocycle"
    )]
    Enlarged {
        #[arg(long, help = MAP_HELP, value_parser = parse_map)]
        map: CircleMapExpr,
        /// Points t1,t2,t3 in radians
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        triple: Triple,
        /// Number of iterates
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
    },
    /// Derivative bounds implied by |sigma| <= lambda
    #[command(after_help = "Columns:\n  lambda     the given bound on |sigma|\n  \
d_max      (1 + lambda)/(1 - lambda)\n  delta_max  2(1 + lambda)/(1 - lambda)^2")]
    Bounds {
        /// Bound on |sigma|, in [0, 1)
        #[arg(long)]
        lambda: f64,
    },
}

#[derive(Args)]
struct MapAt {
    #[arg(long, help = MAP_HELP, value_parser = parse_map)]
    map: CircleMapExpr,
    /// Base point in radians
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
}

fn parse_map(s: &str) -> Result<CircleMapExpr, String> {
    parse_map_spec(s).map_err(|e| e.to_string())
}

fn parse_triple(s: &str) -> Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected t1,t2,t3, got {} values", parts.len()));
    }
    let mut t = [0.0; 3];
    for (slot, p) in t.iter_mut().zip(&parts) {
        *slot = p.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", p.trim()))?;
    }
    Ok(Triple::from_radians(t[0], t[1], t[2]))
}

/// Representative in `(−π, π]`, so that rotation parameters near zero do
/// not jump between `0` and `2π`.
fn signed(a: Angle) -> f64 {
    a.signed_difference(Angle::ZERO)
}

fn mobius_cells(m: &MobiusMap) -> Vec<Cell> {
    vec![signed(m.kappa()).into(), m.sigma().re.into(), m.sigma().im.into()]
}

fn drift_cells(r: &DriftRecord) -> Vec<Cell> {
    vec![
        r.n.into(),
        r.r_n.into(),
        r.dist.into(),
        r.drift.into(),
        r.d_n.unwrap_or(f64::NAN).into(),
        r.delta_n.unwrap_or(f64::NAN).into(),
        r.one_minus_r_sq.into(),
    ]
}

const DRIFT_COLUMNS: [&str; 7] = ["n", "r_n", "dist", "drift", "d_n", "delta_n", "one_minus_r_sq"];

fn run(cli: &Cli) -> mobius_cocycle::Result<String> {
    let table = match &cli.command {
        Command::Fit { at } => {
            let theta = Angle::new(at.theta);
            let j = at.map.jet(theta)?;
            let m = projective_derivative(&at.map, theta)?;
            let mut t = Table::new(&["theta", "value", "d1", "d2", "kappa", "sigma_re", "sigma_im", "r"]);
            let mut row: Vec<Cell> = vec![at.theta.into(), j.value.radians().into(), j.d1.into(), j.d2.into()];
            row.extend(mobius_cells(&m));
            row.push(m.r().into());
            t.row(row);
            t
        }
        Command::Iterate { at, n } => {
            let mut t = Table::new(&["n", "kappa", "sigma_re", "sigma_im", "r"]);
            for (k, m) in cocycle_iterates(&at.map, Angle::new(at.theta), *n as usize)?
                .iter()
                .enumerate()
            {
                let mut row: Vec<Cell> = vec![(k + 1).into()];
                row.extend(mobius_cells(m));
                row.push(m.r().into());
                t.row(row);
            }
            t
        }
        Command::Drift { at, n, grid, random } => {
            let n = *n as usize;
            if grid.is_none() && random.is_none() {
                let mut t = Table::new(&DRIFT_COLUMNS);
                for r in drift_sequence(&at.map, Angle::new(at.theta), n)? {
                    t.row(drift_cells(&r));
                }
                t
            } else {
                let mut thetas = grid.map_or_else(Vec::new, |k| uniform_grid(k as usize, 0.0));
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                for _ in 0..random.unwrap_or(0) {
                    thetas.push(Angle::new(rng.random_range(0.0..std::f64::consts::TAU)));
                }
                let mut header = vec!["theta"];
                header.extend(DRIFT_COLUMNS);
                let mut t = Table::new(&header);
                for (theta, recs) in thetas.iter().zip(drift_grid(&at.map, &thetas, n)?) {
                    for r in recs {
                        let mut row: Vec<Cell> = vec![theta.radians().into()];
                        row.extend(drift_cells(&r));
                        t.row(row);
                    }
                }
                t
            }
        }
        Command::Reduce { map, conj, grid } => {
            let mut t = Table::new(&["theta", "kappa", "sigma_re", "sigma_im", "residual", "angle"]);
            for r in reduce_with_conjugacy(map, conj, *grid as usize)? {
                let mut row: Vec<Cell> = vec![r.theta.radians().into()];
                row.extend(mobius_cells(&r.reduced));
                row.push(r.residual.into());
                row.push(r.angle.radians().into());
                t.row(row);
            }
            t
        }
        Command::Diagonal { at, eps, factor, steps } => {
            let mut t = Table::new(&[
                "eps",
                "gamma_over",
                "gamma_plus_over",
                "rho_defect_over",
                "kappa",
                "sigma_re",
                "sigma_im",
            ]);
            for r in diagonal_probe(&at.map, Angle::new(at.theta), *eps, *factor, *steps)? {
                t.row(vec![
                    r.eps.into(),
                    r.gamma_over.into(),
                    r.gamma_plus_over.into(),
                    r.rho_defect_over.into(),
                    signed(r.kappa_eps).into(),
                    r.sigma_eps.re.into(),
                    r.sigma_eps.im.into(),
                ]);
            }
            t
        }
        Command::Enlarged { map, triple, n: None } => {
            let m = enlarged_cocycle(map, triple)?;
            let mut t = Table::new(&["kappa", "sigma_re", "sigma_im", "min_gap"]);
            let mut row = mobius_cells(&m);
            row.push(triple.min_distance().into());
            t.row(row);
            t
        }
        Command::Enlarged {
            map,
            triple,
            n: Some(n),
        } => {
            let mut t = Table::new(&["n", "r_n", "dist", "drift", "one_minus_r_sq"]);
            for r in enlarged_drift_sequence(map, triple, *n as usize)? {
                t.row(vec![
                    r.n.into(),
                    r.r_n.into(),
                    r.dist.into(),
                    r.drift.into(),
                    r.one_minus_r_sq.into(),
                ]);
            }
            t
        }
        Command::Bounds { lambda } => {
            let (d_max, delta_max) = boundedness_bounds(*lambda)?;
            let mut t = Table::new(&["lambda", "d_max", "delta_max"]);
            t.row(vec![(*lambda).into(), d_max.into(), delta_max.into()]);
            t
        }
    };
    Ok(table.into_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Csv = cli.format;
    let text = match run(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(1)
        }
    }
}

/// 2 for invalid arguments that passed the parser, 1 for numerical failures.
fn exit_code(e: &mobius_cocycle::Error) -> u8 {
    use mobius_cocycle::Error::*;
    match e {
        InvalidArgument(_) | LambdaOutOfRange(_) | Parse(_) | DegenerateTriple(_) => 2,
        _ => 1,
    }
}
