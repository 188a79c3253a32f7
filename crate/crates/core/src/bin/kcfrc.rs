use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Point2, Point3};

use kcfrc::bench::{bench_scenario, BenchConfig, Method};
use kcfrc::io::Encoding;
use kcfrc::reach::CheckOrder;
use kcfrc::robot::RobotModel;
use kcfrc::scaling::{run_scaling, ScalingConfig, MIN_CASES};
use kcfrc::scene::{scene_sdf, Scenario, SceneConfig, SceneKind};
use kcfrc::swing::{plan_swing, PlanConfig};

#[derive(Parser)]
#[command(name = "kcfrc", version, about = "Foothold reachability checks and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scene and write the map plus its gait-state sidecar.
    Generate {
        #[command(flatten)]
        scene: SceneArgs,
        /// Map file; `.json` selects the JSON container, anything else binary.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare reachability methods against the sampling-based ground truth.
    Bench {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated subset of kcfrc_key, kcfrc_conv, fec, rrt_1ms, rrt_50us.
        #[arg(long, value_parser = parse_methods, default_value = "kcfrc_key,kcfrc_conv,fec,rrt_1ms,rrt_50us")]
        methods: MethodList,
        /// Keep every n-th lattice row and column instead of all 30 x 30.
        #[arg(long)]
        subsample: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Time corridor checks against intersection border length.
    Scaling {
        #[arg(long, default_value_t = 1000, value_parser = parse_cases)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OrderArg::BorderFirst)]
        order: OrderArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check one foothold and print the verdict with its witness.
    Check {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the initialized and smoothed swing trajectory for one foothold.
    Traj {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SceneArgs {
    /// Load this scenario instead of generating one.
    #[arg(long, conflicts_with_all = ["kind", "resolution"])]
    scenario: Option<PathBuf>,
    #[arg(long, default_value = "dense")]
    kind: SceneKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = RobotArg::ElspiderAir)]
    robot: RobotArg,
    /// Grid cell size in meters; the scene extent is kept.
    #[arg(long)]
    resolution: Option<f64>,
    /// Ten transitions over a longer map instead of one desk-scale step.
    #[arg(long)]
    long: bool,
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long, default_value_t = 0)]
    transition: usize,
    #[arg(long, default_value_t = 0)]
    swing: usize,
    /// Candidate lattice row and column; the center of the lattice by default.
    #[arg(long, num_args = 2, value_names = ["ROW", "COL"], conflicts_with = "xy")]
    cell: Option<Vec<usize>>,
    /// Foothold position; its height is taken from the ground.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    xy: Option<Vec<f64>>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum RobotArg {
    ElspiderAir,
    A1,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    BorderFirst,
    VisibleFirst,
}

#[derive(Clone)]
struct MethodList(Vec<Method>);

fn parse_methods(s: &str) -> Result<MethodList, String> {
    Method::parse_list(s).map(MethodList).map_err(|e| e.to_string())
}

fn parse_cases(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_CASES {
        return Err(format!("at least {MIN_CASES} cases are needed for a fit"));
    }
    Ok(n)
}

/// Failure after argument parsing, split by exit code.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<kcfrc::Error> for Failure {
    fn from(e: kcfrc::Error) -> Self {
        match e {
            kcfrc::Error::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("KCFRC_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("KCFRC_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { scene, out } => {
            let (scenario, _) = load_scene(&scene)?;
            create_parent(&out)?;
            scenario.save(&out, Encoding::from_path(&out))?;
            eprintln!("wrote {} and {}", out.display(), kcfrc::scene::states_path(&out).display());
            Ok(())
        }
        Command::Bench { scene, methods, subsample, output } => {
            let (scenario, robot) = load_scene(&scene)?;
            let config = BenchConfig { seed: scene.seed, subsample: subsample.map(|s| (s.max(1), 0)), ..BenchConfig::default() };
            let report = bench_scenario(&scenario, &robot, &methods.0, &config)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json()?,
            };
            emit(&output, &text)
        }
        Command::Scaling { cases, seed, order, output } => {
            let order = match order {
                OrderArg::BorderFirst => CheckOrder::BorderFirst,
                OrderArg::VisibleFirst => CheckOrder::VisibleFirst,
            };
            let report = run_scaling(cases, seed, &ScalingConfig { order, ..ScalingConfig::default() })?;
            if let Some(f) = &report.fit {
                eprintln!(
                    "fit: slope {:.3e} ms/cell, intercept {:.3e} ms, R^2 {:.3}; median {:.4} ms, p95 {:.4} ms",
                    f.slope, f.intercept, f.r_squared, report.median_ms, report.p95_ms
                );
            }
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json()?,
            };
            emit(&output, &text)
        }
        Command::Check { scene, target, output } => {
            let (scenario, robot) = load_scene(&scene)?;
            let sdf = scene_sdf(&scenario.map, &robot)?;
            let setup = scenario.setup(&robot, &sdf, target.transition, target.swing)?;
            let q = target_point(&scenario, &target)?;
            let plan = plan_swing(&setup, &q, &PlanConfig { samples: 2, ..PlanConfig::default() })?;
            let r = &plan.result;
            let g = scenario.map.geometry();
            let text = match output.format {
                Some(Format::Json) => serde_json::to_string_pretty(r).map_err(kcfrc::Error::from)?,
                Some(Format::Csv) => {
                    let mut s = String::from("i,j,x,y\n");
                    for c in &r.witness {
                        let xy = g.cell_center(*c);
                        s.push_str(&format!("{},{},{:.4},{:.4}\n", c.i, c.j, xy.x, xy.y));
                    }
                    s
                }
                None => {
                    let mut s = format!(
                        "p = ({:.4}, {:.4}, {:.4})\nq = ({:.4}, {:.4}, {:.4})\nreachable: {}\nverdict: {:?}\n",
                        setup.p.x, setup.p.y, setup.p.z, q.x, q.y, q.z, r.reachable, r.verdict
                    );
                    s.push_str(&format!("start cell: ({}, {})  goal cell: ({}, {})\n", r.p_cell.i, r.p_cell.j, r.q_cell.i, r.q_cell.j));
                    if let Some(b) = &r.border {
                        s.push_str(&format!("border: {} cells, {} concave\n", b.len(), r.concave.len()));
                    }
                    s.push_str("witness:\n");
                    for c in &r.witness {
                        let xy = g.cell_center(*c);
                        s.push_str(&format!("  ({}, {})  ({:.4}, {:.4})\n", c.i, c.j, xy.x, xy.y));
                    }
                    s
                }
            };
            emit(&output, &text)
        }
        Command::Traj { scene, target, output } => {
            let (scenario, robot) = load_scene(&scene)?;
            let sdf = scene_sdf(&scenario.map, &robot)?;
            let setup = scenario.setup(&robot, &sdf, target.transition, target.swing)?;
            let q = target_point(&scenario, &target)?;
            let plan = plan_swing(&setup, &q, &PlanConfig::default())?;
            let (Some(initial), Some(smoothed)) = (&plan.initial, &plan.smoothed) else {
                return Err(Failure::Runtime(format!("foothold is not reachable ({:?})", plan.result.verdict)));
            };
            eprintln!(
                "acceleration cost: initial {:.4}, smoothed {:.4}",
                initial.acceleration_cost(),
                smoothed.acceleration_cost()
            );
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("stage,t,x,y,z\n");
                    for (stage, traj) in [("initial", initial), ("smoothed", smoothed)] {
                        for w in &traj.waypoints {
                            let [x, y, z] = w.position;
                            s.push_str(&format!("{stage},{:.6},{x:.6},{y:.6},{z:.6}\n", w.t));
                        }
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&plan).map_err(kcfrc::Error::from)?,
            };
            emit(&output, &text)
        }
    }
}

fn load_scene(args: &SceneArgs) -> Result<(Scenario, RobotModel), Failure> {
    let robot = RobotModel::by_name(match args.robot {
        RobotArg::ElspiderAir => "elspider_air",
        RobotArg::A1 => "a1",
    })?;
    if let Some(path) = &args.scenario {
        let scenario = Scenario::load(path)?;
        if scenario.states.robot != robot.name {
            return Err(Failure::Usage(format!(
                "{} was generated for {}; pass --robot accordingly",
                path.display(),
                scenario.states.robot
            )));
        }
        return Ok((scenario, robot));
    }
    let mut config = if args.long { SceneConfig::bench() } else { SceneConfig::desk() };
    if let Some(r) = args.resolution {
        config = config.with_resolution(r)?;
    }
    Ok((Scenario::generate(args.kind, args.seed, &robot, &config)?, robot))
}

fn target_point(scenario: &Scenario, target: &TargetArgs) -> Result<Point3<f64>, Failure> {
    let xy = match (&target.xy, &target.cell) {
        (Some(v), _) => Point2::new(v[0], v[1]),
        (None, cell) => {
            let lattice = scenario.lattice(target.transition, target.swing)?;
            let (r, c) = cell.as_ref().map(|v| (v[0], v[1])).unwrap_or((lattice.rows / 2, lattice.cols / 2));
            if r >= lattice.rows || c >= lattice.cols {
                return Err(Failure::Usage(format!("lattice cell ({r}, {c}) outside {}x{}", lattice.rows, lattice.cols)));
            }
            lattice.point(r, c)
        }
    };
    let z = scenario.map.ground_at(xy).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Point3::new(xy.x, xy.y, z))
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                // A closed reader (`| head`) is not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    create_parent(path)?;
    Ok(fs::write(path, text)?)
}

fn create_parent(path: &Path) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}
