use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use superlax::verify::{self, spectrum, Mode, SuiteOptions};
use superlax::{Bundle, Error, Model, ModelSpec};

#[derive(Parser)]
#[command(name = "superlax", version, about = "Exact verification of super Lax and Dunkl operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity catalog for one model.
    Verify {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Glob over identity ids, e.g. `app4.*`.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
        /// Permit N = 4 (slow).
        #[arg(long)]
        allow_n4: bool,
    },
    /// Print one bundle operator or matrix in canonical text.
    BuildOp {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allow_n4: bool,
    },
    /// Excited states of the oscillator model from the ladder traces.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Representation matrices and Dunkl blocks as JSON.
    Export {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allow_n4: bool,
    },
    /// List the catalog or the operator keys of a model.
    List {
        #[arg(long)]
        model: Option<Model>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

fn spec_for(model: Model, n: usize, allow_n4: bool) -> superlax::Result<ModelSpec> {
    if n >= 4 && !allow_n4 {
        return Err(Error::Usage(format!("N={n} needs --allow-n4")));
    }
    if n > 4 {
        return Err(Error::Usage(format!("N={n} is beyond the supported range 2..=4")));
    }
    ModelSpec::new(model, n)
}

fn emit(text: &str, out: Option<&PathBuf>) -> superlax::Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> superlax::Result<bool> {
    match cli.command {
        Command::Verify { model, n, filter, mode, format, jobs, allow_n4 } => {
            let spec = spec_for(model, n, allow_n4)?;
            let report = verify::run_suite(spec, &SuiteOptions { filter, mode, jobs })?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.passed())
        }
        Command::BuildOp { model, n, name, out, allow_n4 } => {
            let bundle = Bundle::new(spec_for(model, n, allow_n4)?);
            let item = bundle.get(&name)?;
            let mut text = match &*item {
                superlax::model::Item::Op(op) => op.to_text(),
                superlax::model::Item::Mat(m) => m.to_text(),
            };
            text.push('\n');
            emit(&text, out.as_ref())?;
            Ok(true)
        }
        Command::Spectrum { n, depth, format } => {
            let s = spectrum::spectrum(n, depth)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&s).expect("spectrum serializes")),
                Format::Text => print!("{}", s.to_text()),
            }
            Ok(s.ok())
        }
        Command::Export { model, n, out, allow_n4 } => {
            let value = superlax::jacobi::export_json(&spec_for(model, n, allow_n4)?)?;
            let mut text = serde_json::to_string_pretty(&value).expect("export serializes");
            text.push('\n');
            emit(&text, out.as_ref())?;
            Ok(true)
        }
        Command::List { model, n } => {
            match model {
                Some(model) => {
                    for key in Bundle::new(ModelSpec::new(model, n)?).keys() {
                        println!("{key}");
                    }
                }
                None => {
                    for id in verify::catalog() {
                        println!("{:<18} {}", id.id, id.statement);
                    }
                }
            }
            Ok(true)
        }
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
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
