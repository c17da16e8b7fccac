use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_digits = std::env::var(means_lab::DIGITS_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = means_lab::run(std::env::args_os(), env_digits.as_deref(), &mut out, &mut err);
    let flushed = out.flush().is_ok();
    ExitCode::from(if flushed { code as u8 } else { 1 })
}
