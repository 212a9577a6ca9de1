use std::io::Write;

fn main() {
    let out = rtpack::cli::dispatch(std::env::args_os());
    std::io::stdout().write_all(&out.stdout).ok();
    std::io::stderr().write_all(&out.stderr).ok();
    std::process::exit(out.code);
}
