use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_depth = std::env::var("LC_DEPTH").ok();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = bcontinuum_cli::run(std::env::args_os(), env_depth.as_deref(), &mut out, &mut err);
    let _ = io::stdout().write_all(&out);
    let _ = io::stderr().write_all(&err);
    ExitCode::from(code)
}
