use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kanex::certify::bundle::example_bundles;
use kanex::certify::{
    certify_section2, certify_section3_recovery, cayley_probe, conservativity_probe, falsify_necessity, lan_target, load,
    maschke_split, monoid_of_trimodule, replay_diagram, save, ProbeConfig, Report,
};
use kanex::encat::Shape;
use kanex::KanError;

#[derive(Parser)]
#[command(name = "kanex", version, about = "Conservativity certificates for enriched left Kan extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Named probe configuration in the bundle (default: `default` if present).
    #[arg(long)]
    probe: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Write the machine-readable report here instead of printing the
    /// human-readable one.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lan,
    Cayley,
}

#[derive(Subcommand)]
enum Command {
    /// Load a bundle, running every law checker.
    CheckLaws { bundle: PathBuf },
    /// Certify conservativity of Lan_N from an opcategory structure.
    CertifyS2 {
        bundle: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        opcat: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Rebuild the comparison diagram at one copresheaf and object.
    ReplayS2 {
        bundle: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        opcat: String,
        #[arg(long)]
        copresheaf: String,
        #[arg(long)]
        at: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Certify through the representable family of N and compare.
    CertifyS3 {
        bundle: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        opcat: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Split the canonical epis onto coends over a category.
    Maschke {
        bundle: PathBuf,
        #[arg(long)]
        category: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Sample transformations and look for a reflected non-iso.
    Probe {
        bundle: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Functor for `--mode lan`.
        #[arg(long)]
        functor: Option<String>,
        /// Monoid trimodule for `--mode cayley`.
        #[arg(long)]
        trimodule: Option<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Instances where the sufficient conditions fail, and a non-mono
    /// functor that is caught.
    Falsify {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Write the example bundles into a directory.
    WriteExamples { dir: PathBuf },
}

fn config(bundle: Option<&kanex::certify::Bundle>, opts: &RunOpts) -> Result<ProbeConfig, KanError> {
    let mut cfg = match (bundle, &opts.probe) {
        (Some(b), Some(name)) => b.probe(name)?.clone(),
        (Some(b), None) => b.probes.get("default").cloned().unwrap_or_default(),
        (None, Some(name)) => return Err(KanError::Unresolved(format!("probe `{name}` needs a bundle"))),
        (None, None) => ProbeConfig::default(),
    };
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(k) = opts.samples {
        cfg.samples = k;
    }
    Ok(cfg)
}

fn emit(report: &Report, opts: &RunOpts) -> Result<ExitCode, KanError> {
    match &opts.report {
        Some(path) => {
            std::fs::write(path, report.to_json()).map_err(|e| KanError::Io(format!("{}: {e}", path.display())))?;
            println!("{:?}", report.status());
        }
        None => print!("{}", report.to_human()),
    }
    Ok(ExitCode::from(report.status().exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode, KanError> {
    match cli.command {
        Command::CheckLaws { bundle } => {
            let b = load(&bundle)?;
            println!(
                "lawful: {} categories, {} functors, {} modules, {} opcategory structures",
                b.categories.len(),
                b.functors.len(),
                b.copresheaves.len() + b.presheaves.len() + b.bimodules.len() + b.trimodules.len(),
                b.opcats.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CertifyS2 { bundle, functor, opcat, opts } => {
            let b = load(&bundle)?;
            let cfg = config(Some(&b), &opts)?;
            emit(&certify_section2(b.functor(&functor)?, b.opcat(&opcat)?, &cfg)?, &opts)
        }
        Command::ReplayS2 { bundle, functor, opcat, copresheaf, at, opts } => {
            let b = load(&bundle)?;
            let n = b.functor(&functor)?;
            let at = n.source().object(&at)?;
            emit(&replay_diagram(n, b.opcat(&opcat)?, b.module(Shape::Copresheaf, &copresheaf)?, at)?, &opts)
        }
        Command::CertifyS3 { bundle, functor, opcat, opts } => {
            let b = load(&bundle)?;
            let cfg = config(Some(&b), &opts)?;
            emit(&certify_section3_recovery(b.functor(&functor)?, b.opcat(&opcat)?, &cfg)?, &opts)
        }
        Command::Maschke { bundle, category, opts } => {
            let b = load(&bundle)?;
            let cfg = config(Some(&b), &opts)?;
            emit(&maschke_split(b.category(&category)?, &cfg)?, &opts)
        }
        Command::Probe { bundle, mode, functor, trimodule, opts } => {
            let b = load(&bundle)?;
            let cfg = config(Some(&b), &opts)?;
            let report = match mode {
                Mode::Lan => {
                    let name = functor.ok_or_else(|| KanError::Unresolved("--mode lan needs --functor".into()))?;
                    let n = b.functor(&name)?;
                    let battery = cfg.battery(n.source())?;
                    let mut report = Report::new("conservativity probe", format!("functor {name}"), &cfg);
                    conservativity_probe(&lan_target(n, &battery)?, &battery, &cfg, "probe", &mut report)?;
                    report
                }
                Mode::Cayley => {
                    let name = trimodule.ok_or_else(|| KanError::Unresolved("--mode cayley needs --trimodule".into()))?;
                    cayley_probe(&monoid_of_trimodule(b.module(Shape::TriModule, &name)?)?, &cfg)?
                }
            };
            emit(&report, &opts)
        }
        Command::Falsify { opts } => {
            let cfg = config(None, &opts)?;
            emit(&falsify_necessity(&cfg)?, &opts)
        }
        Command::WriteExamples { dir } => {
            std::fs::create_dir_all(&dir).map_err(|e| KanError::Io(format!("{}: {e}", dir.display())))?;
            for (name, b) in example_bundles()? {
                save(&b, dir.join(format!("{name}.json")))?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
