use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vrpbench::evaluate::{RouteFlags, RouteReport};
use vrpbench::extract::{extract_network, DEFAULT_EPSILON};
use vrpbench::format::{
    parse_instance, parse_network, parse_solution, parse_streets, serialize_instance,
    serialize_network, serialize_solution, serialize_streets,
};
use vrpbench::fixtures::synthetic_city;
use vrpbench::{
    batch_generate, evaluate, generate, generate_grid_network, render_svg, solve, Algorithm,
    BatchConfig, EvalError, GenerationSpec, GridStyle, Instance, Objective, PenaltyTable, Preset,
    RenderStyle, Solution, SolverConfig, StreetAttributes,
};

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "vrpbench", version, about = "Street-network benchmark instances for mail-delivery routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a routable network from a streets file.
    Extract {
        streets: PathBuf,
        /// Endpoint merge tolerance in meters.
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value = "network")]
        name: String,
        #[command(flatten)]
        out: Out,
    },
    /// Write the synthetic benchmark city as a streets file.
    City {
        #[arg(long, default_value_t = 2016)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Write a synthetic Manhattan grid network.
    Grid {
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        /// Block length in meters.
        #[arg(long, default_value_t = 100.0)]
        block: f64,
        /// Attributes of east-west streets as region,type,zone.
        #[arg(long, default_value = "central,street,mixed")]
        horizontal: String,
        /// Attributes of north-south streets as region,type,zone.
        #[arg(long, default_value = "central,avenue,mixed")]
        vertical: String,
        #[command(flatten)]
        out: Out,
    },
    /// Generate one instance on a network.
    Gen {
        network: PathBuf,
        #[arg(long)]
        deliveries: usize,
        #[command(flatten)]
        seed: Seed,
        /// Fleet size.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        max_route_length: Option<f64>,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        penalties: Penalties,
        #[command(flatten)]
        out: Out,
    },
    /// Generate a whole benchmark set into a directory.
    Batch {
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = PresetArg::Paper)]
        preset: PresetArg,
        /// Instance sizes for the custom preset, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Instances per size for the custom preset.
        #[arg(long, default_value_t = 10)]
        per_size: usize,
        #[command(flatten)]
        seed: Seed,
        /// Fleet size; defaults to one vehicle per hundred deliveries.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_route_length: Option<f64>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        penalties: Penalties,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a solution; exit 0 when feasible, 1 when infeasible.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Print the route report of a solution.
    Eval {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long, default_value = "total_length")]
        objective: Objective,
    },
    /// Solve an instance with a reference heuristic.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "local_search")]
        algorithm: Algorithm,
        #[arg(long, default_value = "total_length")]
        objective: Objective,
        /// Maximum number of accepted improving moves.
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: usize,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        out: Out,
    },
    /// Draw an instance, and optionally a solution, as SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Canvas width in pixels.
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Out {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "VRPBENCH_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Penalties {
    /// Penalty overrides, one `axis level multiplier` per line.
    #[arg(long)]
    penalties: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Paper,
    Custom,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn error(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn write_out(out: &Out, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::error(format!("{}:{e}", path.display())))
}

fn load_solution(path: &Path, instance: &Instance) -> Result<Solution, Failure> {
    let (solution, k) =
        parse_solution(&read(path)?).map_err(|e| Failure::error(format!("{}:{e}", path.display())))?;
    if k != instance.vehicles {
        return Err(Failure::error(format!(
            "solution has {k} routes but the instance has {} vehicles",
            instance.vehicles
        )));
    }
    Ok(solution)
}

fn load_table(penalties: &Penalties) -> Result<PenaltyTable, Failure> {
    match &penalties.penalties {
        None => Ok(PenaltyTable::DEFAULT),
        Some(path) => PenaltyTable::parse_overrides(&read(path)?)
            .map_err(|e| Failure::error(format!("{}:{e}", path.display()))),
    }
}

fn parse_attributes(text: &str) -> Result<StreetAttributes, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let [region, stype, zone] = parts[..] else {
        return Err(Failure::usage(format!("expected region,type,zone, got '{text}'")));
    };
    Ok(StreetAttributes::new(
        region.parse().map_err(|e: vrpbench::DensityError| Failure::usage(e.to_string()))?,
        stype.parse().map_err(|e: vrpbench::DensityError| Failure::usage(e.to_string()))?,
        zone.parse().map_err(|e: vrpbench::DensityError| Failure::usage(e.to_string()))?,
    ))
}

fn flag_names(flags: &RouteFlags) -> String {
    let names: Vec<&str> = [
        (flags.empty, "empty"),
        (flags.capacity, "capacity"),
        (flags.max_length, "max_length"),
        (flags.time_window, "time_window"),
    ]
    .iter()
    .filter(|(on, _)| *on)
    .map(|(_, n)| *n)
    .collect();
    if names.is_empty() {
        "none".into()
    } else {
        names.join(",")
    }
}

fn format_report(report: &RouteReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "objective={}", report.objective);
    let _ = writeln!(out, "feasible={}", report.feasible());
    let _ = writeln!(out, "cost={}", report.cost);
    let _ = writeln!(out, "total_length={}", report.total_length);
    let _ = writeln!(out, "average_length={}", report.average_length);
    let _ = writeln!(out, "fairness_variance={}", report.fairness_variance);
    let _ = writeln!(out, "vehicles={}", report.vehicles);
    for (i, r) in report.routes.iter().enumerate() {
        let _ = writeln!(
            out,
            "route={} length={} stops={} load={} flags={}",
            i + 1,
            r.length,
            r.stops,
            r.load,
            flag_names(&r.flags)
        );
    }
    out
}

/// Structural problems are errors; everything else is a report.
fn evaluate_or_fail(
    instance: &Instance,
    solution: &Solution,
    objective: Objective,
) -> Result<RouteReport, Failure> {
    evaluate(instance, solution, objective).map_err(|e| match e {
        EvalError::Structural(_) => Failure::error(format!("invalid solution: {e}")),
        other => Failure::error(other.to_string()),
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Extract {
            streets,
            epsilon,
            name,
            out,
        } => {
            let polylines = parse_streets(&read(&streets)?)
                .map_err(|e| Failure::error(format!("{}:{e}", streets.display())))?;
            let (build, split) =
                extract_network(&polylines, epsilon).map_err(|e| Failure::error(e.to_string()))?;
            eprintln!(
                "vertices={} edges={} streets={} components={} dropped_segments={} duplicate_segments={}",
                build.network.vertex_count(),
                build.network.edge_count(),
                build.network.streets().len(),
                build.components,
                split.dropped.len(),
                split.duplicates_removed
            );
            write_out(&out, &serialize_network(&name, &build.network))?;
            Ok(0)
        }
        Command::City { seed, out } => {
            write_out(&out, &serialize_streets(&synthetic_city(seed)))?;
            Ok(0)
        }
        Command::Grid {
            rows,
            cols,
            block,
            horizontal,
            vertical,
            out,
        } => {
            let style = GridStyle {
                horizontal: parse_attributes(&horizontal)?,
                vertical: parse_attributes(&vertical)?,
            };
            let net = generate_grid_network(rows, cols, block, style)
                .map_err(|e| Failure::usage(e.to_string()))?;
            write_out(&out, &serialize_network(&format!("grid-{rows}x{cols}"), &net))?;
            Ok(0)
        }
        Command::Gen {
            network,
            deliveries,
            seed,
            k,
            max_route_length,
            name,
            penalties,
            out,
        } => {
            let (_, net) = parse_network(&read(&network)?)
                .map_err(|e| Failure::error(format!("{}:{e}", network.display())))?;
            let table = load_table(&penalties)?;
            let mut spec = GenerationSpec::new(deliveries, seed.seed, k);
            spec.max_route_length = max_route_length;
            if let Some(name) = name {
                spec.name = name;
            }
            let instance = generate(&net, &table, &spec).map_err(|e| Failure::error(e.to_string()))?;
            write_out(&out, &serialize_instance(&instance))?;
            Ok(0)
        }
        Command::Batch {
            network,
            preset,
            sizes,
            per_size,
            seed,
            k,
            max_route_length,
            threads,
            penalties,
            out,
        } => {
            let preset = match preset {
                PresetArg::Paper => {
                    if !sizes.is_empty() {
                        return Err(Failure::usage("--sizes only applies to --preset custom"));
                    }
                    Preset::Paper
                }
                PresetArg::Custom => {
                    if sizes.is_empty() {
                        return Err(Failure::usage("--preset custom needs --sizes"));
                    }
                    Preset::Custom { sizes, per_size }
                }
            };
            let (_, net) = parse_network(&read(&network)?)
                .map_err(|e| Failure::error(format!("{}:{e}", network.display())))?;
            let table = load_table(&penalties)?;
            let mut config = BatchConfig::new(preset, seed.seed);
            config.vehicles = k;
            config.max_route_length = max_route_length;
            config.threads = threads;
            let paths = batch_generate(&net, &table, &config, &out)
                .map_err(|e| Failure::error(e.to_string()))?;
            for p in &paths {
                println!("{}", p.display());
            }
            Ok(0)
        }
        Command::Validate { instance, solution } => {
            let inst = load_instance(&instance)?;
            let sol = load_solution(&solution, &inst)?;
            let report = evaluate_or_fail(&inst, &sol, Objective::TotalLength)?;
            if report.feasible() {
                println!("feasible total_length={}", report.total_length);
                return Ok(0);
            }
            for (i, r) in report.routes.iter().enumerate() {
                if r.flags.any() {
                    let mut line = format!("route={} violations={}", i + 1, flag_names(&r.flags));
                    if !r.window_misses.is_empty() {
                        let misses: Vec<String> = r.window_misses.iter().map(|v| v.to_string()).collect();
                        let _ = write!(line, " window_misses={}", misses.join(","));
                    }
                    println!("{line}");
                }
            }
            println!("infeasible");
            Ok(EXIT_INFEASIBLE)
        }
        Command::Eval {
            instance,
            solution,
            objective,
        } => {
            let inst = load_instance(&instance)?;
            let sol = load_solution(&solution, &inst)?;
            let report = evaluate_or_fail(&inst, &sol, objective)?;
            print!("{}", format_report(&report));
            Ok(if report.feasible() { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Solve {
            instance,
            algorithm,
            objective,
            max_iterations,
            time_budget,
            seed,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let time_budget = match time_budget {
                Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => return Err(Failure::usage(format!("invalid time budget {s}"))),
                None => None,
            };
            let config = SolverConfig {
                algorithm,
                seed: seed.seed,
                max_iterations,
                time_budget,
                objective,
                ..SolverConfig::default()
            };
            let outcome = solve(&inst, &config, |entry| eprintln!("{entry}"))
                .map_err(|e| Failure::error(e.to_string()))?;
            let text = serialize_solution(&outcome.solution, inst.vehicles)
                .map_err(|e| Failure::error(e.to_string()))?;
            write_out(&out, &text)?;
            eprintln!("final objective={} cost={}", objective, outcome.cost);
            Ok(if outcome.cost.is_infinite() { EXIT_INFEASIBLE } else { 0 })
        }
        Command::Render {
            instance,
            solution,
            width,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let sol = solution.map(|p| load_solution(&p, &inst)).transpose()?;
            let style = RenderStyle {
                width,
                ..RenderStyle::default()
            };
            let svg = render_svg(&inst, sol.as_ref(), &style).map_err(|e| match e {
                EvalError::Structural(_) => Failure::error(format!("invalid solution: {e}")),
                other => Failure::error(other.to_string()),
            })?;
            write_out(&out, &svg)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
