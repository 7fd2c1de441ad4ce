use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use log::info;
use yui_core::protocol::Topic;
use yui_teleop::calib;
use yui_teleop::clock::{Clock, SystemClock, VirtualClock};
use yui_teleop::config::Config;
use yui_teleop::net::{self, StopFlag};
use yui_teleop::offline::{replay, run_offline, RunOptions, RunReport};
use yui_teleop::scenario::Scenario;
use yui_teleop::session::Session;
use yui_teleop::{sweep, tables, Error, Result};

#[derive(Parser)]
#[command(name = "yui", version, about = "Yui head telepresence simulator")]
struct Cli {
    /// TOML configuration; defaults apply to anything left out.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override bus.port.
    #[arg(long, global = true)]
    port: Option<u16>,
    /// Drive daemons from a virtual clock that jumps instead of sleeping.
    #[arg(long, global = true)]
    virtual_clock: bool,
    /// Run operator and avatar in one process on the local bus, no sockets.
    #[arg(long, global = true)]
    offline: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Avatar daemon.
    Avatar {
        #[command(subcommand)]
        cmd: DaemonCmd,
    },
    /// Operator daemon.
    Operator {
        #[command(subcommand)]
        cmd: OperatorCmd,
    },
    /// Scenario scripts.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// Run a scenario offline and record the bus to a session file.
    Record {
        scenario: String,
        out: PathBuf,
    },
    /// Re-drive a fresh avatar from a session and check its joint states.
    Replay { session: PathBuf },
    /// Eight-position audio check, as CSV.
    SweepAudio {
        #[arg(long, default_value_t = 1000)]
        duration_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the expression map to calibration samples.
    FitMapping {
        samples: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rig, AU and preset tables.
    Tables {
        #[command(subcommand)]
        cmd: TablesCmd,
    },
    /// Configuration helpers.
    Config {
        #[command(subcommand)]
        cmd: ConfigCmd,
    },
}

#[derive(Subcommand)]
enum DaemonCmd {
    Run(AvatarRun),
}

#[derive(Args)]
struct AvatarRun {
    /// Stop after this many cycles.
    #[arg(long)]
    cycles: Option<u64>,
    /// Scenario whose tones and objects populate the surroundings.
    #[arg(long)]
    world: Option<String>,
}

#[derive(Subcommand)]
enum OperatorCmd {
    Run {
        /// Scenario file or built-in name.
        scenario: String,
        /// Seconds to keep retrying the connection.
        #[arg(long, default_value_t = 10)]
        wait: u64,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Run offline on a virtual clock and print a summary.
    Play {
        scenario: String,
        /// Write the avatar trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also record the bus.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Print a built-in scenario as JSON Lines.
    Show { name: String },
    /// List built-in scenarios.
    List,
}

#[derive(Subcommand)]
enum TablesCmd {
    /// Write rig.toml, au_table.toml and presets.toml.
    Export { dir: PathBuf },
    /// Parse and check table files.
    Check { dir: PathBuf },
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// Print the default configuration.
    Default,
    /// Validate a configuration and print the derived delays.
    Check,
}

const BUILTINS: [&str; 2] = ["greeting", "object-following"];

fn load_scenario(arg: &str) -> Result<Scenario> {
    match Scenario::builtin(arg) {
        Some(s) => Ok(s),
        None => Scenario::load(Path::new(arg)),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn clock(virtual_clock: bool) -> Box<dyn Clock> {
    if virtual_clock {
        Box::new(VirtualClock::new())
    } else {
        Box::new(SystemClock::new())
    }
}

fn trajectory_csv(report: &RunReport) -> String {
    let mut out = String::from("t_ms");
    for i in 1..=yui_core::MOTOR_COUNT {
        out.push_str(&format!(",target{i},angle{i}"));
    }
    out.push('\n');
    for s in &report.trajectory {
        out.push_str(&format!("{}", s.t_ns as f64 / 1e6));
        for (t, a) in s.targets.as_slice().iter().zip(&s.angles) {
            out.push_str(&format!(",{t:.6},{a:.6}"));
        }
        out.push('\n');
    }
    out
}

fn summary(name: &str, report: &RunReport) {
    println!("scenario {name}: {} cycles", report.cycles);
    println!(
        "targets sent {}, received {}",
        report.operator.targets_sent, report.avatar.targets_received
    );
    let a = report.final_angles();
    println!(
        "final eyes L/R/pitch {:.2}/{:.2}/{:.2} deg, neck motors {:.2}/{:.2}/{:.2} deg",
        a[0], a[1], a[2], a[18], a[19], a[20]
    );
    println!(
        "presented audio latency {}..{} ms, camera {}..{} ms",
        report.operator.audio.min_ns / 1_000_000,
        report.operator.audio.max_ns / 1_000_000,
        report.operator.camera.min_ns / 1_000_000,
        report.operator.camera.max_ns / 1_000_000
    );
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(port) = cli.port {
        cfg.bus.port = port;
    }
    let addr = format!("{}:{}", cfg.bus.host, cfg.bus.port);
    match cli.cmd {
        Cmd::Avatar {
            cmd: DaemonCmd::Run(a),
        } => {
            if cli.offline {
                return Err(Error::Config("avatar run serves a socket; use `operator run --offline`".into()));
            }
            let world = a.world.as_deref().map(load_scenario).transpose()?;
            let listener = TcpListener::bind(&addr).map_err(Error::Net)?;
            info!("avatar listening on {addr}");
            let clock = clock(cli.virtual_clock);
            let (_, report) = net::run_avatar(
                &cfg,
                listener,
                clock.as_ref(),
                world.as_ref(),
                a.cycles,
                &StopFlag::default(),
            )?;
            println!(
                "avatar ran {} cycles, {} operator connection(s)",
                report.cycles, report.connections
            );
        }
        Cmd::Operator {
            cmd: OperatorCmd::Run { scenario, wait },
        } => {
            let sc = load_scenario(&scenario)?;
            if cli.offline {
                let report = run_offline(&cfg, &sc, RunOptions::default())?;
                summary(&sc.name, &report);
                return Ok(());
            }
            let stream = net::connect(&addr, Duration::from_secs(wait))?;
            info!("operator connected to {addr}");
            let clock = clock(cli.virtual_clock);
            let (op, report) = net::run_operator(&cfg, stream, &sc, clock.as_ref(), &StopFlag::default())?;
            println!("operator ran {} cycles", report.cycles);
            if let Some(s) = op.latest_state() {
                let p: Vec<String> = s.positions().map(|v| format!("{v:.2}")).collect();
                println!("last joint states: {}", p.join(" "));
            }
        }
        Cmd::Scenario { cmd } => match cmd {
            ScenarioCmd::Play { scenario, csv, record } => {
                let sc = load_scenario(&scenario)?;
                let report = run_offline(
                    &cfg,
                    &sc,
                    RunOptions {
                        record: record.is_some(),
                        ..RunOptions::default()
                    },
                )?;
                summary(&sc.name, &report);
                if let Some(p) = csv {
                    write_out(Some(&p), &trajectory_csv(&report))?;
                }
                if let (Some(p), Some(s)) = (record, &report.session) {
                    s.save(&p)?;
                    println!("recorded {} messages to {}", s.records.len(), p.display());
                }
            }
            ScenarioCmd::Show { name } => {
                let sc = Scenario::builtin(&name)
                    .ok_or_else(|| Error::Config(format!("no built-in scenario {name:?}")))?;
                print!("{}", sc.to_jsonl());
            }
            ScenarioCmd::List => {
                for b in BUILTINS {
                    println!("{b}");
                }
            }
        },
        Cmd::Record { scenario, out } => {
            let sc = load_scenario(&scenario)?;
            let report = run_offline(
                &cfg,
                &sc,
                RunOptions {
                    record: true,
                    ..RunOptions::default()
                },
            )?;
            let s = report.session.expect("recording was requested");
            s.save(&out)?;
            println!(
                "recorded {} messages ({} joint_states) over {} cycles to {}",
                s.records.len(),
                s.on(Topic::JointStates).count(),
                report.cycles,
                out.display()
            );
        }
        Cmd::Replay { session } => {
            let s = Session::load(&session)?;
            let n = replay(&cfg, &s)?;
            println!("replay matched {n} joint_states messages bit for bit");
        }
        Cmd::SweepAudio { duration_ms, out } => {
            let rows = sweep::run_sweep(&cfg, duration_ms)?;
            write_out(out.as_deref(), &sweep::to_csv(&rows))?;
        }
        Cmd::FitMapping { samples, out } => {
            let fit = calib::fit_file(&samples)?;
            eprintln!("max residual {:.3e}", fit.max_residual());
            write_out(out.as_deref(), &calib::params_to_toml(&fit.params))?;
        }
        Cmd::Tables { cmd } => match cmd {
            TablesCmd::Export { dir } => {
                tables::export_builtin(&dir)?;
                println!("wrote tables to {}", dir.display());
            }
            TablesCmd::Check { dir } => {
                let read = |name: &str| {
                    let p = dir.join(name);
                    std::fs::read_to_string(&p).map_err(|e| Error::io(p, e))
                };
                let rig = tables::rig_from_toml(&read(tables::RIG_FILE)?)?;
                tables::au_table_from_toml(&read(tables::AU_FILE)?)?;
                tables::PresetTable::from_toml(&read(tables::PRESET_FILE)?)?;
                println!(
                    "tables ok: rig version {}, {} motors, {} motions",
                    rig.version(),
                    rig.motors().len(),
                    rig.motions().len()
                );
            }
        },
        Cmd::Config { cmd } => match cmd {
            ConfigCmd::Default => print!("{}", Config::default().to_toml()),
            ConfigCmd::Check => {
                cfg.validate()?;
                let d = cfg.delays()?;
                println!("config ok");
                println!("motor settle      {:>6.1} ms", d.motor_settle_ns as f64 / 1e6);
                println!("operator audio    {:>6.1} ms", d.operator_audio_ns as f64 / 1e6);
                println!("avatar audio      {:>6.1} ms", d.avatar_audio_ns as f64 / 1e6);
                println!("camera            {:>6.1} ms", d.camera_ns as f64 / 1e6);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
