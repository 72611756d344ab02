use std::process::ExitCode;

use clap::Parser;
use maglab_cli::{configure_threads, run, Cli, CliError, Command};

fn output_args(cmd: &Command) -> &maglab_cli::config::OutputArgs {
    match cmd {
        Command::Expand(a) => &a.output,
        Command::Compare(a) => &a.output,
        Command::Symbols(a) => &a.output,
        Command::Magnitude(a) => &a.output,
        Command::Fit(a) => &a.output,
        Command::PdProbe(a) => &a.output,
        Command::Models(a) => a,
    }
}

fn main_inner(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let art = run(&cli.command)?;
    let out = output_args(&cli.command);
    print!("{}", art.json_text()?);
    if let Some(dir) = &out.out {
        for path in art.write(dir, out.plot)? {
            log::info!("wrote {}", path.display());
        }
    }
    match art.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("maglab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
