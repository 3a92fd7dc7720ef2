use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nowait_cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version are not usage errors
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let code = nowait_cli::guard(|| {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let result = nowait_cli::execute(cli, &mut out);
        let _ = out.flush();
        result
    });
    ExitCode::from(code as u8)
}
