// SPDX-License-Identifier: Apache-2.0

use clap::{Args, Parser, Subcommand, ValueEnum};
use latentbench_cli::*;
use latentbench_core::render::{AblationMode, RenderStyle};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "latentbench", version, about = "Synthetic video reasoning benchmark toolkit")]
struct Cli {
    /// JSON config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, short, global = true, conflicts_with = "verbose")]
    quiet: bool,
    /// Print debug logs.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate scenarios, questions and the manifest.
    Gen {
        /// Benchmark spec JSON; defaults to the config's spec.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Output directory; defaults to the config's output root.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the spec's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render frame sequences, vid2txt transcripts and ablation bundles.
    Render {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Also write vid2txt.txt next to each frames directory.
        #[arg(long)]
        vid2txt: bool,
        /// Export an ablation bundle under ablation/MODE/.
        #[arg(long, value_name = "MODE")]
        ablate: Option<AblationMode>,
        /// Do not write the full frame directories.
        #[arg(long)]
        no_frames: bool,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Score model responses.
    Score {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Responses JSONL: {"question_id", "response", "model"?} per line.
        #[arg(long)]
        responses: PathBuf,
        #[arg(long, value_enum, default_value_t = Judge::Deterministic)]
        judge: Judge,
        /// Report directory; defaults to the manifest's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every scenario and check questions, answers and witnesses.
    Verify {
        #[command(flatten)]
        manifest: ManifestArg,
    },
    /// Print dataset balance statistics.
    Stats {
        #[command(flatten)]
        manifest: ManifestArg,
    },
    /// Write scripted oracle or blank responses for calibration.
    Respond {
        #[command(flatten)]
        manifest: ManifestArg,
        #[arg(long, value_enum, default_value_t = Who::Oracle)]
        with: Who,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ManifestArg {
    /// manifest.json or the directory holding it; defaults to the config's output root.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl ManifestArg {
    fn resolve(&self, cfg: &GlobalConfig) -> PathBuf {
        self.manifest.clone().unwrap_or_else(|| cfg.output_root.join("manifest.json"))
    }
}

#[derive(Args)]
struct StyleArgs {
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long)]
    keyframes_per_op: Option<u32>,
    #[arg(long)]
    op_ms: Option<u32>,
}

impl StyleArgs {
    fn apply(&self, mut style: RenderStyle) -> RenderStyle {
        style.width = self.width.unwrap_or(style.width);
        style.height = self.height.unwrap_or(style.height);
        style.keyframes_per_op = self.keyframes_per_op.unwrap_or(style.keyframes_per_op);
        style.op_ms = self.op_ms.unwrap_or(style.op_ms);
        style
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Judge {
    Deterministic,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum Who {
    Oracle,
    Blank,
}

fn init_logging(cli: &Cli, cfg_level: &str) {
    let level = if cli.quiet {
        "error"
    } else if cli.verbose {
        "debug"
    } else {
        cfg_level
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn report_dir(out: Option<PathBuf>, manifest: &Path) -> PathBuf {
    out.unwrap_or_else(|| manifest_root(manifest))
}

fn run(cli: Cli, cfg: GlobalConfig) -> Result<(), CliError> {
    let say = |s: &str| {
        if !cli.quiet {
            println!("{s}");
        }
    };
    match cli.command {
        Command::Gen { spec, out, seed } => {
            let mut spec = match spec {
                Some(p) => read_spec(&p)?,
                None => cfg.spec.clone(),
            };
            if let Some(seed) = seed {
                spec.master_seed = seed;
            }
            let out = out.unwrap_or_else(|| cfg.output_root.clone());
            let manifest = cmd_gen(&spec, &out)?;
            say(&manifest.summary.line());
            say(&format!("manifest: {} (digest {})", out.join("manifest.json").display(), manifest.digest()));
        }
        Command::Render { manifest, vid2txt, ablate, no_frames, style } => {
            let path = manifest.resolve(&cfg);
            let opts = RenderOptions { vid2txt, ablate, skip_frames: no_frames };
            let r = cmd_render(&path, &style.apply(cfg.style.clone()), &opts)?;
            say(&format!("rendered {} scenarios, {} frames", r.scenarios, r.frames));
            if let Some(mode) = ablate {
                say(&format!("ablation {}: {} frames kept", mode.as_str(), r.ablation_frames));
            }
        }
        Command::Score { manifest, responses, judge, out } => {
            let path = manifest.resolve(&cfg);
            let records = read_responses(&responses)?;
            let choice = match judge {
                Judge::Deterministic => JudgeChoice::Deterministic,
                Judge::External => JudgeChoice::External,
            };
            let report = cmd_score(&path, &records, choice, cfg.judge.as_ref())?;
            let (json, csv) = write_report(&report, &report_dir(out, &path))?;
            say(&report.table());
            if report.missing > 0 {
                say(&format!("{} questions had no response", report.missing));
            }
            if report.fallbacks > 0 {
                say(&format!("{} verdicts fell back to deterministic judging", report.fallbacks));
            }
            say(&format!("wrote {} and {}", json.display(), csv.display()));
        }
        Command::Verify { manifest } => {
            let (_, bench) = open_benchmark(&manifest.resolve(&cfg))?;
            let outcome = verify_benchmark(&bench);
            for (id, problem) in &outcome.failures {
                eprintln!("{id}: {problem}");
            }
            if !outcome.failures.is_empty() {
                return Err(CliError::Verify(outcome.failing_ids()));
            }
            say(&format!("{} scenarios verified", outcome.scenarios));
        }
        Command::Stats { manifest } => print!("{}", cmd_stats(&manifest.resolve(&cfg))?),
        Command::Respond { manifest, with, out } => {
            let who = match with {
                Who::Oracle => Responder::Oracle,
                Who::Blank => Responder::Blank,
            };
            let records = scripted_responses(&manifest.resolve(&cfg), who)?;
            write_responses(&out, &records)?;
            say(&format!("wrote {} responses to {}", records.len(), out.display()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match GlobalConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    init_logging(&cli, &cfg.log_level);
    match run(cli, cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
