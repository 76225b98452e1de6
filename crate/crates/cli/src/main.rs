//! `robocomm` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 runtime failure.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use robocomm::connectivity::{critical_radius, epsilon_for_probability};
use robocomm::harness::{find_nonmonotone_witness, run_experiment, ExperimentPlan};
use robocomm::{engine, AssertLevel, Error, ExecutionMode, GaConfig, Scenario, SimConfig, Strategy};

#[derive(Parser, Debug)]
#[command(name = "robocomm", version, about = "Multi-robot target assignment under limited communication range")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one scenario with one strategy; writes result.json and events.jsonl.
    Run {
        /// Scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        /// rba, ststc or greedy.
        #[arg(long, default_value = "ststc")]
        strategy: Strategy,
        /// Override the scenario's communication range (meters).
        #[arg(long)]
        range: Option<f64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Run an experiment plan; writes results.csv and summary.json.
    Sweep {
        /// Experiment plan JSON file.
        #[arg(long)]
        plan: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Search for a scenario where STSTC does worse with the larger range.
    Witness {
        #[arg(long, default_value_t = 5)]
        targets: usize,
        #[arg(long, default_value_t = 4)]
        robots: usize,
        /// Workspace edge length (meters).
        #[arg(long, default_value_t = 100.0)]
        edge: f64,
        /// Range pair as LOW,HIGH; repeatable.
        #[arg(long = "pair", value_parser = parse_pair, default_value = "25,30")]
        pairs: Vec<(f64, f64)>,
        #[arg(long, default_value_t = 500)]
        max_scenarios: usize,
        /// Output directory; writes witness.json when a witness is found.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Print the critical communication radius.
    Radius {
        #[arg(long)]
        robots: usize,
        /// Connectivity margin; ignored when --probability is given.
        #[arg(long, default_value_t = 5.0)]
        epsilon: f64,
        /// Target connection probability in (0, 1); sets epsilon = -ln(-ln p).
        #[arg(long)]
        probability: Option<f64>,
        /// Workspace edge length (meters).
        #[arg(long, default_value_t = 1000.0)]
        edge: f64,
    },
    /// Check a scenario file and print a one-line summary.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

/// Simulation options shared by `run`, `sweep` and `witness`.
#[derive(Args, Debug, Default)]
struct SimFlags {
    /// Time step (seconds).
    #[arg(long)]
    dt: Option<f64>,
    /// Simulated-time guard (seconds); defaults to a bound derived from the scenario.
    #[arg(long)]
    max_time: Option<f64>,
    /// Seed: the scenario seed for `run`, the plan seed for `sweep` and `witness`.
    #[arg(long)]
    seed: Option<u64>,
    /// Runtime invariant checks.
    #[arg(long = "assert", value_parser = ["off", "cheap", "full"])]
    assert_level: Option<String>,
    /// Worker threads; 1 runs sequentially, 0 uses all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// GA parameters JSON file (missing fields take defaults).
    #[arg(long)]
    ga_config: Option<PathBuf>,
    /// Record positions every N steps in result.json.
    #[arg(long)]
    trajectory_stride: Option<usize>,
}

impl SimFlags {
    fn apply(&self, cfg: &mut SimConfig) -> Result<(), Failure> {
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(t) = self.max_time {
            cfg.max_time = Some(t);
        }
        if let Some(level) = &self.assert_level {
            cfg.assert_level = level.parse::<AssertLevel>().map_err(Failure::input)?;
        }
        if let Some(path) = &self.ga_config {
            let text = read(path)?;
            cfg.ga = serde_json::from_str::<GaConfig>(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        if let Some(stride) = self.trajectory_stride {
            cfg.trajectory_stride = Some(stride);
        }
        cfg.validate().map_err(Failure::input)
    }

    fn mode(&self) -> ExecutionMode {
        ExecutionMode::from_jobs(self.jobs)
    }
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl Failure {
    fn input(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }

    fn classify(e: Error) -> Failure {
        match e {
            Error::Io(_) | Error::Json(_) | Error::InvalidScenario(_) | Error::InvalidArgument(_) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LOW,HIGH")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = read(path)?;
    Scenario::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            scenario,
            strategy,
            range,
            out,
            sim,
        } => {
            let mut scn = load_scenario(&scenario)?;
            if let Some(r) = range {
                scn = scn.with_range(r);
            }
            if let Some(seed) = sim.seed {
                scn.seed = seed;
            }
            scn.validate().map_err(Failure::input)?;
            let mut cfg = SimConfig {
                strategy,
                ..SimConfig::default()
            };
            sim.apply(&mut cfg)?;
            let result = engine::run(&scn, &cfg).map_err(Failure::classify)?;
            serde_json::to_writer_pretty(create(&out, "result.json")?, &result)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            result
                .write_events_jsonl(create(&out, "events.jsonl")?)
                .map_err(Failure::classify)?;
            println!(
                "{} f={:.3} end={:.3} visits={}",
                result.strategy,
                result.total_f,
                result.end_time,
                result.visits.len()
            );
        }
        Command::Sweep { plan, out, sim } => {
            let text = read(&plan)?;
            let mut plan: ExperimentPlan =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", plan.display())))?;
            if let Some(seed) = sim.seed {
                plan.seed = seed;
            }
            sim.apply(&mut plan.sim)?;
            plan.validate().map_err(Failure::input)?;
            let output = run_experiment(&plan, sim.mode()).map_err(Failure::classify)?;
            output
                .write_results_csv(create(&out, "results.csv")?)
                .map_err(Failure::classify)?;
            output
                .write_summary_json(create(&out, "summary.json")?)
                .map_err(Failure::classify)?;
            for row in &output.rows {
                println!(
                    "r={:.1} {} mean_q={:.4} std_q={:.4} runs={}",
                    row.r, row.strategy, row.mean_q, row.std_q, row.runs
                );
            }
        }
        Command::Witness {
            targets,
            robots,
            edge,
            pairs,
            max_scenarios,
            out,
            sim,
        } => {
            let mut cfg = SimConfig::default();
            sim.apply(&mut cfg)?;
            let found = find_nonmonotone_witness(
                targets,
                robots,
                edge,
                &pairs,
                max_scenarios,
                sim.seed.unwrap_or(0),
                &cfg,
                sim.mode(),
            )
            .map_err(Failure::classify)?;
            match found {
                Some(w) => {
                    println!(
                        "witness: scenario {} seed {} f({})={:.3} < f({})={:.3}",
                        w.scenario_index, w.scenario_seed, w.r_low, w.f_low, w.r_high, w.f_high
                    );
                    if let Some(dir) = out {
                        serde_json::to_writer_pretty(create(&dir, "witness.json")?, &w)
                            .map_err(|e| Failure::Runtime(e.to_string()))?;
                    }
                }
                None => println!("no witness in {max_scenarios} scenarios"),
            }
        }
        Command::Radius {
            robots,
            epsilon,
            probability,
            edge,
        } => {
            let eps = match probability {
                Some(p) => epsilon_for_probability(p).map_err(Failure::input)?,
                None => epsilon,
            };
            let r = critical_radius(robots, eps, edge).map_err(Failure::input)?;
            println!("{r:.1}");
        }
        Command::Validate { scenario } => {
            let scn = load_scenario(&scenario)?;
            println!(
                "ok: n={} m={} E_l={} r={}",
                scn.n(),
                scn.m(),
                scn.edge_length,
                scn.comm_range
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
