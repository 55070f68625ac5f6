mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use buchsbaum_core::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::{Options, Output};

const SCHEMA: &str = "buchsbaum-lab/1";

#[derive(Parser)]
#[command(name = "buchsbaum-lab", version, about = "Cohomology, Buchsbaum tests and Omega-resolutions of projective subschemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Ideal file (or a shape JSON file for `construct`).
    file: PathBuf,
    /// Degree window `a:b` for cohomology tables.
    #[arg(long, default_value = "-10:10", allow_hyphen_values = true, value_parser = parse_window)]
    window: (i32, i32),
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random trials for probabilistic isomorphism tests.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Graded Betti tables of I and R/I.
    Betti(Common),
    /// Local cohomology table of R/I.
    Cohomology(Common),
    /// Saturation, depth, regularity, e(X), aCM and Buchsbaum verdicts.
    Check(Common),
    /// Omega-resolution of an arithmetically Buchsbaum scheme.
    Omega {
        #[command(flatten)]
        common: Common,
        /// Expand the mapping cone and check the derived bounds.
        #[arg(long)]
        expand: bool,
    },
    /// Weak Omega-resolution of a quasi-Buchsbaum scheme.
    WeakOmega(Common),
    /// q-presentation of I (q defaults to codim - 1).
    Qpres {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Random hyperplane section and the transformed Omega-resolution.
    Hyperplane(Common),
    /// Build an ideal from an Omega-resolution shape (JSON).
    Construct(Common),
    /// Lifting test for quasi-Buchsbaum surfaces in P^4.
    SurfaceLift(Common),
}

fn parse_window(s: &str) -> std::result::Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a: i32 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty window {a}:{b}"));
    }
    Ok((a, b))
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn run(cmd: &Cmd) -> (String, Common, Result<(Value, Output)>) {
    let (name, common, expand, q) = match cmd {
        Cmd::Betti(c) => ("betti", c, false, None),
        Cmd::Cohomology(c) => ("cohomology", c, false, None),
        Cmd::Check(c) => ("check", c, false, None),
        Cmd::Omega { common, expand } => ("omega", common, *expand, None),
        Cmd::WeakOmega(c) => ("weak-omega", c, false, None),
        Cmd::Qpres { common, q } => ("qpres", common, false, *q),
        Cmd::Hyperplane(c) => ("hyperplane", c, false, None),
        Cmd::Construct(c) => ("construct", c, false, None),
        Cmd::SurfaceLift(c) => ("surface-lift", c, false, None),
    };
    let o = Options { window: common.window, seed: common.seed, trials: common.trials, expand, q };
    let result = (|| {
        let src = read(&common.file)?;
        if name == "construct" {
            let input = json!({"digest": input::digest(&src)});
            return Ok((input, commands::construct(&src, &o)?));
        }
        let file = input::parse_ideal(&src)?;
        let input = json!({
            "digest": file.digest,
            "name": file.name,
            "ring": {"p": file.ring.p, "vars": file.names},
            "generators": file.gens.len(),
        });
        let out = match name {
            "betti" => commands::betti(&file, &o),
            "cohomology" => commands::cohomology(&file, &o),
            "check" => commands::check(&file, &o),
            "omega" => commands::omega_cmd(&file, &o),
            "weak-omega" => commands::weak_omega(&file, &o),
            "qpres" => commands::qpres_cmd(&file, &o),
            "hyperplane" => commands::hyperplane(&file, &o),
            _ => commands::surface_lift(&file, &o),
        }?;
        Ok((input, out))
    })();
    (name.to_string(), common.clone(), result)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, result) = run(&cli.cmd);
    let envelope = |input: Value| {
        json!({
            "schema": SCHEMA,
            "command": name,
            "input": input,
            "seed": common.seed,
            "trials": common.trials,
            "window": [common.window.0, common.window.1],
        })
    };
    match result {
        Ok((input, out)) => {
            if common.json {
                let mut v = envelope(input);
                v["result"] = out.json;
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            if common.json {
                let mut v = envelope(Value::Null);
                v["error"] = json!({"exit_code": code, "message": e.to_string()});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
