//! Command-line surface of the monovex toolkit.
//!
//! All subcommands read complexes in the canonical JSON format (stdin by
//! default), print a JSON result to stdout, and write report files into
//! the output directory. Exit codes: 0 success, 2 parse error, 3
//! dimension mismatch, 4 precondition failure, 5 invariant violation,
//! 1 everything else. `MONOVEX_THREADS` caps the worker pool.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use monovex::extension::{extend, ExtensionError, LatticeSample};
use monovex::format;
use monovex::fuzz::{run_fuzz, sample_points, ClosednessMode, FuzzConfig};
use monovex::geom::{BoxRegion, GeomError, Lattice, Point, SpanComplex};
use monovex::homology::{betti_report, inferred_grid};
use monovex::homotopy::{cantor_schedule, contract_to_point, ContractionParams, HomotopyError};
use monovex::instances;
use monovex::num::Dyadic;
use monovex::path::{is_monovex, monotone_reachable, PathError};
use monovex::raster::rasterize_minkowski;
use monovex::retraction::{
    iterate_retraction, local_radius, neighborhood_map, sandwich_audit, thicken, RetractionError,
};

const EXIT_PARSE: u8 = 2;
const EXIT_DIMENSION: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_INVARIANT: u8 = 5;

#[derive(Parser)]
#[command(
    name = "monovex",
    about = "Exact toolkit for monovex box complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExampleName {
    Example1,
    Example2,
    Example2Closed,
    Example3,
    Example4,
    Lshape,
    Sshape,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FuzzMode {
    Closed,
    Open,
    HalfOpen,
}

#[derive(Subcommand)]
enum Command {
    /// Decide monovexity; prints the verdict and any witness pair.
    Check {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a monotone path between two points.
    Path {
        #[arg(long, default_value = "-")]
        input: String,
        /// comma-separated dyadic coordinates, e.g. "1,1/2^1"
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti numbers of a closed, grid-aligned complex.
    Betti {
        #[arg(long, default_value = "-")]
        input: String,
        /// grid step (dyadic); inferred from the endpoints when omitted
        #[arg(long)]
        resolution: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a random vertex seed over a box domain into the complex,
    /// with hull-confinement and spread-halving reports.
    Extend {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// dimension of the box domain the seed lives on
        #[arg(long, default_value_t = 2)]
        domain_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the sampled contraction to a base point.
    Contract {
        #[arg(long, default_value = "-")]
        input: String,
        /// base tolerance delta_0
        #[arg(long, default_value = "1/2^2")]
        delta: String,
        /// ternary levels
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// dyadic samples per scheduled interval (2^depth + 1)
        #[arg(long, default_value_t = 2)]
        depth: u32,
        /// base point (defaults to the lexicographically smallest box corner)
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate the retraction from an exterior point with a certified
    /// decay table.
    Retract {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        from: String,
        #[arg(long, default_value_t = 4)]
        iterations: u32,
        #[arg(long, default_value_t = 200)]
        probes: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minkowski sum with a single box.
    Minkowski {
        #[arg(long, default_value = "-")]
        input: String,
        /// the box as a JSON list of interval records
        #[arg(long = "box")]
        box_spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in example complex in the canonical format.
    Examples {
        #[arg(value_enum)]
        name: ExampleName,
        /// truncation depth of the staircase
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// closed-model margin
        #[arg(long, default_value = "1/2^2")]
        eps: String,
        /// raster resolution
        #[arg(long, default_value = "1/2^3")]
        resolution: String,
        /// diagonal truncation parameter
        #[arg(long, default_value = "1")]
        truncation: String,
    },
    /// Randomized property harness: accepted monovex instances must be
    /// acyclic in closed mode.
    Fuzz {
        #[arg(long, value_enum, default_value = "closed")]
        mode: FuzzMode,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        boxes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(1, format!("io error: {e}"))
    }
}

impl From<format::FormatError> for CliError {
    fn from(e: format::FormatError) -> Self {
        let code = match &e {
            format::FormatError::Geometry(GeomError::DimensionMismatch { .. }) => EXIT_DIMENSION,
            _ => EXIT_PARSE,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        let code = match &e {
            GeomError::DimensionMismatch { .. } => EXIT_DIMENSION,
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        let code = match &e {
            PathError::Geometry(GeomError::DimensionMismatch { .. }) => EXIT_DIMENSION,
            PathError::EndpointOutsideComplex(_) | PathError::EndpointOutsideBox(_) => {
                EXIT_PRECONDITION
            }
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        CliError::new(EXIT_PRECONDITION, e.to_string())
    }
}

impl From<HomotopyError> for CliError {
    fn from(e: HomotopyError) -> Self {
        CliError::new(EXIT_PRECONDITION, e.to_string())
    }
}

impl From<RetractionError> for CliError {
    fn from(e: RetractionError) -> Self {
        let code = match &e {
            RetractionError::StepBound { .. }
            | RetractionError::Decay { .. }
            | RetractionError::ProjectionNotInterval(_) => EXIT_INVARIANT,
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<monovex::homology::HomologyError> for CliError {
    fn from(e: monovex::homology::HomologyError) -> Self {
        let code = match &e {
            monovex::homology::HomologyError::BoundarySquare(_)
            | monovex::homology::HomologyError::EulerMismatch { .. } => EXIT_INVARIANT,
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MONOVEX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_input(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(input)?)
    }
}

fn load_complex(input: &str) -> Result<SpanComplex<Dyadic>, CliError> {
    Ok(format::parse_complex(&read_input(input)?)?)
}

fn parse_point(text: &str, dim: usize) -> Result<Point<Dyadic>, CliError> {
    let coords = text
        .split(',')
        .map(|part| part.trim().parse::<Dyadic>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?;
    if coords.len() != dim {
        return Err(CliError::new(
            EXIT_DIMENSION,
            format!(
                "point has {} coordinates, complex has dimension {dim}",
                coords.len()
            ),
        ));
    }
    Ok(Point::new(coords))
}

fn parse_dyadic(text: &str) -> Result<Dyadic, CliError> {
    text.parse::<Dyadic>()
        .map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))
}

fn write_report(out: &Option<PathBuf>, name: &str, content: &str) -> Result<(), CliError> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(Path::new(dir).join(name), content)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check { input, out } => {
            let complex = load_complex(&input)?;
            let verdict = is_monovex(&complex);
            let report = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
            println!("{report}");
            write_report(&out, "report.json", &report)?;
            Ok(())
        }
        Command::Path {
            input,
            from,
            to,
            out,
        } => {
            let complex = load_complex(&input)?;
            let from = parse_point(&from, complex.dim())?;
            let to = parse_point(&to, complex.dim())?;
            let found = monotone_reachable(&complex, &from, &to)?;
            let report = match &found {
                Some(path) => format::path_to_json(path),
                None => "null".to_string(),
            };
            println!("{report}");
            write_report(&out, "report.json", &report)?;
            Ok(())
        }
        Command::Betti {
            input,
            resolution,
            out,
        } => {
            let complex = load_complex(&input)?;
            let grid = match resolution {
                Some(step) => Lattice::uniform(complex.dim(), parse_dyadic(&step)?),
                None => inferred_grid(&complex, 16).ok_or_else(|| {
                    CliError::new(
                        EXIT_PRECONDITION,
                        "no aligned grid within 2^-16; pass --resolution",
                    )
                })?,
            };
            let report = betti_report(&complex, &grid)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            Ok(())
        }
        Command::Extend {
            input,
            depth,
            seed,
            domain_dim,
            out,
        } => {
            let complex = load_complex(&input)?;
            let field = extend_with_random_seed(&complex, domain_dim, depth, seed)?;
            let hull = field.hull_property_report();
            let spread = field.spread_report();
            let ok = hull.violations.is_empty() && spread.violations.is_empty();
            let text = serde_json::to_string_pretty(&json!({
                "depth": depth,
                "domain_dim": domain_dim,
                "samples": field.samples().len(),
                "hull_report": hull,
                "spread_report": spread,
            }))
            .expect("report serializes");
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            write_report(&out, "samples.csv", &field.to_csv())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::new(
                    EXIT_INVARIANT,
                    "extension reports carry violations",
                ))
            }
        }
        Command::Contract {
            input,
            delta,
            levels,
            depth,
            base,
            out,
        } => {
            let complex = load_complex(&input)?;
            let delta0 = parse_dyadic(&delta)?;
            let base_point = match base {
                Some(text) => parse_point(&text, complex.dim())?,
                None => default_base_point(&complex)?,
            };
            let params = ContractionParams {
                levels,
                delta0: delta0.clone(),
                time_depth: depth,
            };
            let field = contract_to_point(&complex, &base_point, &params)?;
            let schedule = cantor_schedule(levels, &delta0);
            let audit = field.audit(&complex, &schedule);
            let ok = audit.range_violations == 0
                && audit.identity_violations == 0
                && audit.base_violations == 0
                && audit.junction_violations == 0;
            let text = serde_json::to_string_pretty(&json!({
                "base_point": field.base_point(),
                "levels": levels,
                "delta0": delta0,
                "samples": audit.samples,
                "range_violations": audit.range_violations,
                "identity_violations": audit.identity_violations,
                "base_violations": audit.base_violations,
                "junction_violations": audit.junction_violations,
                "junction_checks": audit.junction_defects.len(),
            }))
            .expect("report serializes");
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            write_report(&out, "contract.csv", &field.to_csv())?;
            write_report(&out, "mesh.off", &field.to_off())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::new(
                    EXIT_INVARIANT,
                    "homotopy audit carries violations",
                ))
            }
        }
        Command::Retract {
            input,
            from,
            iterations,
            probes,
            out,
        } => {
            let complex = load_complex(&input)?;
            let from = parse_point(&from, complex.dim())?;
            let trajectory = iterate_retraction(&complex, &from, iterations)?;
            let entry = thicken(&complex, &from)?;
            let radius = local_radius(&complex, &from, probes)?;
            let neighborhood =
                neighborhood_map(&complex, &from, std::slice::from_ref(&from), probes)?;
            let f_in_g = entry.nearest.subset_of(&neighborhood.complex)?;
            let sandwich = sandwich_audit(&complex, &from)?;
            let text = serde_json::to_string_pretty(&json!({
                "start": from,
                "iterations": iterations,
                "distances": trajectory.dists,
                "decay_certified": trajectory.decay_certified(),
                "scales": entry.scales,
                "local_radius": radius,
                "nearest_in_neighborhood": f_in_g,
                "ball_bound": sandwich.ball_bound,
                "graph_inclusion_witnesses": sandwich.witnesses.len(),
                "graph_inclusion_ok": sandwich.witnesses.iter().all(|w| w.ok),
            }))
            .expect("report serializes");
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            write_report(&out, "decay.csv", &trajectory.to_decay_csv())?;
            if f_in_g && trajectory.decay_certified() && sandwich.all_ok() {
                Ok(())
            } else {
                Err(CliError::new(
                    EXIT_INVARIANT,
                    "retraction audit carries violations",
                ))
            }
        }
        Command::Minkowski {
            input,
            box_spec,
            out,
        } => {
            let complex = load_complex(&input)?;
            let summand = format::parse_box(&box_spec, complex.dim())?;
            let sum = complex.minkowski_box(&summand)?;
            let text = format::complex_to_json(&sum);
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            Ok(())
        }
        Command::Examples {
            name,
            k,
            eps,
            resolution,
            truncation,
        } => {
            let complex = build_example(name, k, &eps, &resolution, &truncation)?;
            println!("{}", format::complex_to_json(&complex));
            Ok(())
        }
        Command::Fuzz {
            mode,
            trials,
            seed,
            dim,
            boxes,
            out,
        } => {
            let config = FuzzConfig {
                seed,
                dim,
                box_budget: boxes,
                mode: match mode {
                    FuzzMode::Closed => ClosednessMode::Closed,
                    FuzzMode::Open => ClosednessMode::Open,
                    FuzzMode::HalfOpen => ClosednessMode::HalfOpen,
                },
                trials,
            };
            let report = run_fuzz(&config);
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{text}");
            write_report(&out, "report.json", &text)?;
            if report.violations == 0 {
                Ok(())
            } else {
                Err(CliError::new(
                    EXIT_INVARIANT,
                    format!("{} monovex instances failed acyclicity", report.violations),
                ))
            }
        }
    }
}

/// Seeds the extension with deterministic random set points on the
/// corners of the unit box domain.
fn extend_with_random_seed(
    complex: &SpanComplex<Dyadic>,
    domain_dim: usize,
    depth: u32,
    seed: u64,
) -> Result<monovex::extension::ExtensionField, CliError> {
    if complex.is_empty() {
        return Err(CliError::new(
            EXIT_PRECONDITION,
            "cannot extend into an empty complex",
        ));
    }
    let lattice = Lattice::uniform(domain_dim, Dyadic::from(1));
    let domain = SpanComplex::from_box(BoxRegion::closed_from_corners(
        &Point::new(vec![Dyadic::from(0); domain_dim]),
        &Point::new(vec![Dyadic::from(1); domain_dim]),
    ));
    let corners: Vec<Point<Dyadic>> = domain.boxes()[0].vertices();
    let pool = sample_points(complex, corners.len().max(8), seed);
    let values = corners
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), pool[i % pool.len()].clone()))
        .collect();
    let sample = LatticeSample::new(lattice, domain, values, complex)?;
    Ok(extend(&sample, depth, complex)?)
}

fn default_base_point(complex: &SpanComplex<Dyadic>) -> Result<Point<Dyadic>, CliError> {
    let candidates = sample_points(complex, 1, 0);
    candidates
        .into_iter()
        .next()
        .ok_or_else(|| CliError::new(EXIT_PRECONDITION, "cannot contract an empty complex"))
}

fn build_example(
    name: ExampleName,
    k: u32,
    eps: &str,
    resolution: &str,
    truncation: &str,
) -> Result<SpanComplex<Dyadic>, CliError> {
    match name {
        ExampleName::Example1 => Ok(instances::example1(k)),
        ExampleName::Example2 => Ok(instances::example2()),
        ExampleName::Example2Closed => {
            let eps = parse_dyadic(eps)?;
            if eps <= Dyadic::from(0) || eps > Dyadic::from(1) {
                return Err(CliError::new(EXIT_PRECONDITION, "eps must lie in (0, 1]"));
            }
            Ok(instances::example2_closed(&eps))
        }
        ExampleName::Example3 => {
            let h = parse_dyadic(resolution)?;
            let (a, b) = instances::example3_segments();
            let window = BoxRegion::closed_from_corners(
                &Point::from_ints(&[-2, -2, -1]),
                &Point::from_ints(&[2, 2, 5]),
            );
            let grid = rasterize_minkowski(&a, &b, &h, &window)
                .map_err(|e| CliError::new(EXIT_PRECONDITION, e.to_string()))?;
            Ok(grid.to_complex())
        }
        ExampleName::Example4 => {
            let h = parse_dyadic(resolution)?;
            let t = parse_dyadic(truncation)?;
            if t <= Dyadic::from(0) {
                return Err(CliError::new(
                    EXIT_PRECONDITION,
                    "truncation must be positive",
                ));
            }
            let (a, b) = instances::example4_segments(&t);
            let margin = t.clone() + Dyadic::from(2);
            let lo = Point::new(vec![-margin.clone(); 3]);
            let hi = Point::new(vec![margin; 3]);
            let window = BoxRegion::closed_from_corners(&lo, &hi);
            let grid = rasterize_minkowski(&a, &b, &h, &window)
                .map_err(|e| CliError::new(EXIT_PRECONDITION, e.to_string()))?;
            Ok(grid.to_complex())
        }
        ExampleName::Lshape => Ok(instances::lshape()),
        ExampleName::Sshape => Ok(instances::sshape()),
    }
}
