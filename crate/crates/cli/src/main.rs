mod commands;
mod inputs;

use clap::{Parser, Subcommand, ValueEnum};
use inputs::CliError;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "twistcoh", version, about = "Exact twisted and gerbe cohomology of finite algebra models")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for generated inputs.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a CDGA, site or gerbe description.
    Validate { input: String },
    /// Betti numbers of the two-periodic and z-graded twisted complexes.
    Twisted {
        model: String,
        /// Twist as `index:p/q` pairs, e.g. `7:1`.
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Chain-map and invertibility verdicts for the comparison maps over a range of p.
    Psi {
        model: String,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        p_max: Option<usize>,
        /// Use only the lower half of the form degrees.
        #[arg(long)]
        truncated: bool,
    },
    /// Pages of the form-degree spectral sequence.
    Spectral {
        model: String,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Curvature, total-complex cohomology and the comparison with the z-graded complex.
    Gerbe {
        input: String,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Use all cochains instead of the normalized ones.
        #[arg(long)]
        full: bool,
    },
    /// Sheafification, flabbiness and adjunction checks on a site.
    Site {
        input: String,
        /// Number of random presheaves.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Cohomology of the bar complex of the point with circle fibre.
    Bs1 {
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Write the bundled fixtures as JSON.
    ExportFixtures { dir: PathBuf },
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Twisted { .. } => "twisted",
        Command::Psi { .. } => "psi",
        Command::Spectral { .. } => "spectral",
        Command::Gerbe { .. } => "gerbe",
        Command::Site { .. } => "site",
        Command::Bs1 { .. } => "bs1",
        Command::ExportFixtures { .. } => "export-fixtures",
    }
}

fn run(cli: &Cli) -> Result<commands::Report, CliError> {
    match &cli.command {
        Command::Validate { input } => commands::validate(input),
        Command::Twisted { model, lambda, max_degree } => commands::twisted(model, lambda, *max_degree),
        Command::Psi { model, lambda, p_max, truncated } => commands::psi(model, lambda, *p_max, *truncated),
        Command::Spectral { model, lambda, r_max } => commands::spectral(model, lambda, *r_max),
        Command::Gerbe { input, max_degree, full } => commands::gerbe(input, *max_degree, *full),
        Command::Site { input, samples } => commands::site(input, *samples, cli.seed),
        Command::Bs1 { max_degree } => commands::bs1(*max_degree),
        Command::ExportFixtures { dir } => {
            let files = inputs::export_fixtures(dir).map_err(inputs::invalid)?;
            let names: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
            Ok(commands::Report { text: names.join("\n") + "\n", result: json!({ "files": names }), ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = name(&cli.command);
    let (report, code, to_stderr) = match run(&cli) {
        Ok(r) => {
            let code = if r.ok { 0 } else { 1 };
            (r, code, false)
        }
        Err(e) => {
            let code = match e {
                CliError::Parse(_) => 2,
                CliError::Invalid(_) => 1,
            };
            let r = commands::Report { text: format!("error: {e}\n"), result: json!({ "error": e.to_string() }), ok: false };
            (r, code, true)
        }
    };
    match cli.format {
        Format::Text if !to_stderr => print!("{}", report.text),
        Format::Text => eprint!("{}", report.text),
        Format::Json => {
            let out = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "seed": cli.seed,
                "ok": code == 0,
                "result": report.result,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
    }
    ExitCode::from(code)
}
