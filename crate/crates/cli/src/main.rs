use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use harp_core::checker::{check, levels_needed, CheckError};
use harp_core::harp::{build_harp, Configuration, HarpError};
use harp_core::heptagrid::build_patch;
use harp_core::machine::TuringMachine;
use harp_core::reduction::{compile, validate_tileset, TileSet};
use harp_core::render::{layout, to_svg, RenderStyle};
use harp_core::search::{find_finite_tiling, SearchBudget, Verdict};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (formats: tileset v1, config v1)");

#[derive(Parser)]
#[command(name = "harp", version = VERSION, about = "Halting machines as finite tilings of the heptagrid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a machine into a tile set.
    Compile {
        #[arg(short, long)]
        machine: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a machine and lay out its harp.
    Harp {
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the compiled tile set here and reference it from the configuration.
        #[arg(short, long)]
        tileset: Option<PathBuf>,
    },
    /// Check that a configuration is a valid finite tiling.
    Check {
        /// Tile set; defaults to the one the configuration references.
        #[arg(short, long)]
        tileset: Option<PathBuf>,
        #[arg(short, long)]
        config: PathBuf,
        /// Patch depth; defaults to the smallest that surrounds every cell.
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Look for a finite tiling around the central tile.
    Search {
        #[arg(short, long)]
        tileset: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write a found configuration here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a patch, and optionally a configuration on it, as SVG.
    Render {
        #[arg(short, long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        tileset: Option<PathBuf>,
        #[arg(long)]
        depth: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Compile, build the harp, check it, render it and search.
    Demo {
        #[arg(short, long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        /// Write the harp picture here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 20)]
    max_cells: usize,
    #[arg(long, default_value_t = 3)]
    radius: u32,
    /// Search nodes allowed per tile tried at the center.
    #[arg(long, default_value_t = 200_000)]
    max_nodes: u64,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget, Failure> {
        if self.max_cells == 0 || self.max_nodes == 0 || self.threads == 0 {
            return Err(Failure::input(anyhow!(
                "--max-cells, --max-nodes and --threads must be positive"
            )));
        }
        let time_limit = match self.time_limit {
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Failure::input(anyhow!("--time-limit must be positive, got {s}"))),
            None => None,
        };
        Ok(SearchBudget {
            radius: self.radius,
            max_cells: self.max_cells,
            max_nodes: self.max_nodes,
            time_limit,
            threads: self.threads,
        })
    }
}

#[derive(Args)]
struct StyleArgs {
    /// Radius of the disc in pixels.
    #[arg(long, default_value_t = 400)]
    size: u32,
    /// Stroke width as a fraction of the disc radius.
    #[arg(long, default_value_t = 0.002)]
    stroke: f64,
    /// Leave out cells below this level.
    #[arg(long)]
    depth_limit: Option<u32>,
    /// Draw guide lines along the borders of the harp.
    #[arg(long)]
    guides: bool,
}

impl StyleArgs {
    fn style(&self) -> RenderStyle {
        RenderStyle {
            disc_radius_px: self.size,
            stroke_width: self.stroke,
            depth_limit: self.depth_limit,
            guides: self.guides,
            ..RenderStyle::default()
        }
    }
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }

    fn budget(error: anyhow::Error) -> Self {
        Failure { code: 3, error }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure::input(error)
    }
}

fn harp_failure(e: HarpError) -> Failure {
    match e {
        HarpError::NotHaltedWithinBudget { .. } | HarpError::TooDeep { .. } => Failure::budget(e.into()),
        e => Failure::input(e.into()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_machine(path: &Path) -> anyhow::Result<TuringMachine> {
    TuringMachine::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_tileset(path: &Path) -> anyhow::Result<TileSet> {
    let ts = TileSet::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if let Some(v) = validate_tileset(&ts).first() {
        return Err(anyhow!("{}: invalid tile set: {v}", path.display()));
    }
    Ok(ts)
}

fn load_config(path: &Path) -> anyhow::Result<Configuration> {
    Configuration::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// The tile set given on the command line, or else the one `cfg` references,
/// resolved against the configuration's directory.
fn tileset_for(explicit: Option<&Path>, cfg: &Configuration, cfg_path: &Path) -> anyhow::Result<TileSet> {
    match (explicit, &cfg.tileset) {
        (Some(p), _) => load_tileset(p),
        (None, Some(r)) => load_tileset(&cfg_path.parent().unwrap_or(Path::new(".")).join(r)),
        (None, None) => Err(anyhow!("{} names no tile set; pass --tileset", cfg_path.display())),
    }
}

/// How a configuration written to `cfg_out` names the tile set at `ts`:
/// the bare file name when both sit in the same directory, else an absolute
/// path, since references are read relative to the configuration file.
fn reference(ts: &Path, cfg_out: Option<&Path>) -> String {
    let dir = |p: &Path| {
        std::path::absolute(p)
            .ok()
            .and_then(|a| a.parent().map(Path::to_path_buf))
    };
    match (cfg_out.and_then(dir), dir(ts), ts.file_name()) {
        (Some(a), Some(b), Some(name)) if a == b => name.to_string_lossy().into_owned(),
        _ => std::path::absolute(ts)
            .unwrap_or_else(|_| ts.to_path_buf())
            .display()
            .to_string(),
    }
}

fn verdict_line(verdict: &Verdict, budget: &SearchBudget) -> String {
    match verdict {
        Verdict::Found(cfg) => format!("FOUND {}", cfg.len()),
        Verdict::NoneInSpace => format!("NONE radius={}", budget.radius),
        Verdict::BudgetExhausted { nodes, .. } => format!("EXHAUSTED nodes={nodes}"),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compile { machine, output } => {
            let ts = compile(&load_machine(&machine)?);
            emit(output.as_deref(), &ts.to_text())?;
            Ok(0)
        }
        Command::Harp {
            machine,
            max_steps,
            output,
            tileset,
        } => {
            let tm = load_machine(&machine)?;
            let mut h = build_harp(&tm, max_steps).map_err(harp_failure)?;
            if let Some(ts_path) = &tileset {
                emit(Some(ts_path), &h.tileset.to_text())?;
                h.config.tileset = Some(reference(ts_path, output.as_deref()));
            }
            emit(output.as_deref(), &h.config.to_text())?;
            eprintln!("halt_time={} tiles={}", h.halt_time, h.config.len());
            Ok(0)
        }
        Command::Check {
            tileset,
            config,
            radius,
        } => {
            let cfg = load_config(&config)?;
            let ts = tileset_for(tileset.as_deref(), &cfg, &config)?;
            let levels = radius.unwrap_or_else(|| levels_needed(&cfg));
            let patch = build_patch(levels).map_err(|e| Failure::input(e.into()))?;
            let violations = check(&cfg, &ts, &patch).map_err(|e: CheckError| Failure::input(e.into()))?;
            for v in &violations {
                println!("{}", v.line());
            }
            if violations.is_empty() {
                println!("OK tiles={}", cfg.len());
                Ok(0)
            } else {
                println!("INVALID violations={}", violations.len());
                Ok(1)
            }
        }
        Command::Search {
            tileset,
            budget,
            output,
        } => {
            let ts = load_tileset(&tileset)?;
            let budget = budget.budget()?;
            let out = find_finite_tiling(&ts, &budget).map_err(|e| Failure::input(e.into()))?;
            println!("{}", verdict_line(&out.verdict, &budget));
            match out.verdict {
                Verdict::Found(mut cfg) => {
                    cfg.tileset = Some(reference(&tileset, output.as_deref()));
                    emit(output.as_deref(), &cfg.to_text())?;
                    Ok(0)
                }
                Verdict::NoneInSpace => Ok(1),
                Verdict::BudgetExhausted { .. } => Ok(3),
            }
        }
        Command::Render {
            config,
            tileset,
            depth,
            output,
            style,
        } => {
            let placed = match &config {
                Some(path) => {
                    let cfg = load_config(path)?;
                    let ts = tileset_for(tileset.as_deref(), &cfg, path)?;
                    Some((cfg, ts))
                }
                None => None,
            };
            let patch = build_patch(depth).map_err(|e| Failure::input(e.into()))?;
            let svg = to_svg(&layout(&patch), placed.as_ref().map(|(c, t)| (c, t)), &style.style())
                .map_err(|e| Failure::input(e.into()))?;
            emit(output.as_deref(), &svg)?;
            Ok(0)
        }
        Command::Demo {
            machine,
            max_steps,
            output,
            budget,
        } => demo(&machine, max_steps, output.as_deref(), &budget.budget()?),
    }
}

fn demo(machine: &Path, max_steps: usize, output: Option<&Path>, budget: &SearchBudget) -> Result<u8, Failure> {
    let tm = load_machine(machine)?;
    let ts = compile(&tm);
    println!(
        "machine={} states={} symbols={} rules={}",
        machine.display(),
        tm.state_count(),
        tm.symbol_count(),
        tm.rule_count()
    );
    println!("prototiles={}", ts.len());
    match build_harp(&tm, max_steps) {
        Ok(h) => {
            let patch = build_patch(levels_needed(&h.config)).map_err(|e| Failure::input(e.into()))?;
            let violations = check(&h.config, &h.tileset, &patch).map_err(|e| Failure::input(e.into()))?;
            let ok = violations.is_empty();
            println!(
                "halts=yes halt_time={} tiles={} check={}",
                h.halt_time,
                h.config.len(),
                if ok { "OK" } else { "FAIL" }
            );
            for v in &violations {
                println!("{}", v.line());
            }
            let svg = to_svg(&layout(&patch), Some((&h.config, &h.tileset)), &RenderStyle::default())
                .map_err(|e| Failure::input(e.into()))?;
            if let Some(p) = output {
                emit(Some(p), &svg)?;
                println!("svg={}", p.display());
            }
            if ok {
                println!("equivalence=witnessed (machine halts, harp is a finite tiling)");
                Ok(0)
            } else {
                println!("equivalence=not witnessed");
                Ok(1)
            }
        }
        Err(HarpError::NotHaltedWithinBudget { steps }) => {
            println!("halts=unknown steps={steps}");
            let out = find_finite_tiling(&ts, budget).map_err(|e| Failure::input(e.into()))?;
            println!("search: {}", verdict_line(&out.verdict, budget));
            match out.verdict {
                Verdict::NoneInSpace => {
                    println!(
                        "equivalence=witnessed within bounds (no halt in {steps} steps, no finite tiling of at most {} tiles in radius {})",
                        budget.max_cells, budget.radius
                    );
                    Ok(0)
                }
                Verdict::Found(_) => {
                    println!("equivalence=not witnessed (a finite tiling exists but no halt was seen)");
                    Ok(1)
                }
                Verdict::BudgetExhausted { .. } => {
                    println!("equivalence=undecided (search budget exhausted)");
                    Ok(3)
                }
            }
        }
        Err(e) => Err(harp_failure(e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
