use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use sweepdec::lattices::{LatticeFamily, LatticeSpec};
use sweepdec::sweep::Rule;
use sweepdec_cli::*;

#[derive(Parser)]
#[command(name = "sweepdec", version, about = "Sweep-rule decoder simulator")]
struct Cli {
    /// Worker threads (default: SWEEPDEC_THREADS or one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Lattice family: cubic3d | bcc3d | square2d | parallelogram2d
    #[arg(long)]
    family: LatticeFamily,
    /// Linear size (shortest non-contractible path length)
    #[arg(long)]
    size: u32,
    /// Code type: qubits on k-cells
    #[arg(long, default_value_t = 2)]
    k: u8,
    /// Sweep direction override, e.g. "1,1,1"
    #[arg(long, value_parser = parse_direction)]
    direction: Option<std::vec::Vec<i64>>,
}

fn parse_direction(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| e.to_string()))
        .collect()
}

impl SpecArgs {
    fn spec(&self) -> LatticeSpec {
        let mut spec = LatticeSpec::new(self.family, self.size);
        spec.k = self.k;
        spec.sweep_direction = self.direction.clone();
        spec
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice and export its complex as JSON
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Trace the rule's action on the wall of an error chain
    Sweep {
        #[command(subcommand)]
        cmd: SweepCmd,
    },
    /// Decode a syndrome file
    Decode {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        syndrome: PathBuf,
        #[arg(long, default_value = "greedy")]
        rule: Rule,
        #[arg(long)]
        tmax: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-cycle memory experiments
    Memory {
        #[command(subcommand)]
        cmd: MemoryCmd,
    },
    /// Failure-curve scans and crossing-point fits
    Threshold {
        #[command(subcommand)]
        cmd: ThresholdCmd,
    },
    /// Sustainable-threshold ansatz fits
    Sustainable {
        #[command(subcommand)]
        cmd: SustainableCmd,
    },
    /// Lattice validation and dynamical-invariant checks
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    Trace {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        error: PathBuf,
        #[arg(long, default_value = "greedy")]
        rule: Rule,
        #[arg(long, default_value_t = 1000)]
        max_steps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MemoryCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ThresholdCmd {
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Restrict the fit to this error-rate window, e.g. "0.07,0.09"
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        /// Also write an n_cyc,p_th,p_th_err CSV for the sustainable fit
        #[arg(long)]
        thresholds_out: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected lo,hi".into());
    }
    let lo = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let hi = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

#[derive(Subcommand)]
enum SustainableCmd {
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Co-fit the single-cycle threshold instead of pinning it
        #[arg(long)]
        cofit_pth1: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Lattice {
        #[command(flatten)]
        spec: SpecArgs,
        /// Sample budget for the order checks (the flip-set existence check
        /// is always exhaustive)
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Run the larger sampling budget
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Lemmas {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0.02)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_parallelism(cli.threads)?;
    match cli.command {
        Command::Lattice {
            cmd: LatticeCmd::Build { spec, out },
        } => cmd_lattice_build(&spec.spec(), &out),
        Command::Sweep {
            cmd:
                SweepCmd::Trace {
                    lattice,
                    error,
                    rule,
                    max_steps,
                    out,
                },
        } => {
            let body = cmd_sweep_trace(&lattice, &error, rule, max_steps, out.as_deref())?;
            println!("{body}");
            Ok(())
        }
        Command::Decode {
            lattice,
            syndrome,
            rule,
            tmax,
            out,
        } => {
            let body = cmd_decode(&lattice, &syndrome, rule, tmax, out.as_deref())?;
            println!("{body}");
            Ok(())
        }
        Command::Memory {
            cmd:
                MemoryCmd::Run {
                    config,
                    trials,
                    seed,
                    out,
                },
        } => cmd_scan(&config, trials, seed, &out),
        Command::Threshold { cmd } => match cmd {
            ThresholdCmd::Scan {
                config,
                trials,
                seed,
                out,
            } => cmd_scan(&config, trials, seed, &out),
            ThresholdCmd::Fit {
                input,
                out,
                window,
                thresholds_out,
            } => {
                let body = cmd_threshold_fit(&input, &out, window, thresholds_out.as_deref())?;
                println!("{body}");
                Ok(())
            }
        },
        Command::Sustainable {
            cmd: SustainableCmd::Fit {
                input,
                out,
                cofit_pth1,
            },
        } => {
            let body = cmd_sustainable_fit(&input, &out, cofit_pth1)?;
            println!("{body}");
            Ok(())
        }
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Lattice {
                spec,
                samples,
                exhaustive,
                seed,
                out,
            } => {
                let budget = if exhaustive { samples.max(2000) } else { samples };
                let body = cmd_verify_lattice(&spec.spec(), budget, seed, out.as_deref())?;
                println!("{body}");
                Ok(())
            }
            VerifyCmd::Lemmas {
                spec,
                trials,
                p,
                radius,
                seed,
                out,
            } => {
                let body = cmd_verify_lemmas(&spec.spec(), trials, p, radius, seed, out.as_deref())?;
                println!("{body}");
                Ok(())
            }
        },
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        // machine-readable error envelope on stderr
        let doc = serde_json::json!({ "error": format!("{err:#}") });
        eprintln!("{doc}");
        std::process::exit(1);
    }
}
