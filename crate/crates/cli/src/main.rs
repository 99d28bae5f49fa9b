//! `godeaux`: linear systems of singular plane curves, double-plane
//! invariants and torsion criteria from the command line.

mod commands;
mod reproduce;
mod report;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use godeaux_core::algebra::{NumberField, Rationals};
use godeaux_core::plane::Eigenspace;

use commands::Options;
use report::Report;
use scene::{parse_scene, FieldDecl};

#[derive(Parser, Debug)]
#[command(name = "godeaux", version, about = "Exact linear systems of singular plane curves and double-plane invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Prime for modular prefilters.
    #[arg(long, global = true)]
    modp: Option<u64>,
    /// Eigenspace of the scene's symmetry (overrides the scene).
    #[arg(long, global = true, value_enum)]
    eigenspace: Option<EigenArg>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Projective dimension of the scene's linear system.
    Dim { scene: PathBuf },
    /// Solution curves of the scene's linear system.
    Solve { scene: PathBuf },
    /// Check a curve against the scene's singularities.
    Verify {
        scene: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// χ, K², p_g and 2-torsion of the double plane branched along the scene.
    Invariants { scene: PathBuf },
    /// Du Val torsion criterion (and the Campedelli obstruction with --curve).
    Torsion {
        scene: PathBuf,
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Rebuild one of the built-in examples end to end.
    Reproduce {
        target: Target,
        /// Where ex-z4 writes its curve.
        #[arg(long, default_value = "ex-z4.curve")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EigenArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    ExZ4,
    ExDeg11,
    ExDeg11Full,
}

fn scene_task(task: &str, path: &PathBuf, opts: &Options) -> Report {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Report::error(task, vec![format!("{}: {e}", path.display())]),
    };
    let scene = match parse_scene(&text) {
        Ok(s) => s,
        Err(errs) => {
            let msgs = errs.iter().map(|e| format!("{}:{}: {}", path.display(), e.line, e.message)).collect();
            return Report::error(task, msgs);
        }
    };
    match &scene.field {
        FieldDecl::Rational => commands::run(&Rationals, task, &scene, opts),
        FieldDecl::Number(mp) => match NumberField::new(mp) {
            Ok(nf) => commands::run(&nf, task, &scene, opts),
            Err(e) => Report::error(task, vec![e.to_string()]),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut opts = Options {
        modp: cli.modp,
        eigenspace: cli.eigenspace.map(|e| match e {
            EigenArg::Plus => Eigenspace::Plus,
            EigenArg::Minus => Eigenspace::Minus,
        }),
        curve: None,
    };
    let report = match &cli.command {
        Command::Dim { scene } => scene_task("dim", scene, &opts),
        Command::Solve { scene } => scene_task("solve", scene, &opts),
        Command::Verify { scene, curve } => {
            opts.curve = Some(curve.display().to_string());
            scene_task("verify", scene, &opts)
        }
        Command::Invariants { scene } => scene_task("invariants", scene, &opts),
        Command::Torsion { scene, curve } => {
            opts.curve = curve.as_ref().map(|c| c.display().to_string());
            scene_task("torsion", scene, &opts)
        }
        Command::Reproduce { target, out } => match target {
            Target::ExZ4 => reproduce::ex_z4_target(out, cli.modp),
            Target::ExDeg11 => reproduce::ex_deg11_target(),
            Target::ExDeg11Full => reproduce::ex_deg11_full_target(),
        },
    };
    let text = report.render(cli.json);
    if report.status == report::Status::Error && !cli.json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(report.status.exit_code() as u8)
}
