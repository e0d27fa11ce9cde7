use std::io::Write;

fn main() {
    let out = genop::cli::run_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
