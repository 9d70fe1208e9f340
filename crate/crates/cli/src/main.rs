use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_cache = std::env::var_os("CMKIT_CACHE").filter(|v| !v.is_empty()).map(Into::into);
    let (code, out) = cmkit_cli::run(std::env::args_os(), env_cache);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code as u8)
}
