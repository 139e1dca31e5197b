use std::io;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = vcm_mapper_cli::Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = vcm_mapper_cli::run(cli, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
