use std::io::Write;

fn main() {
    let (out, code) = eqdescent_cli::run_args(std::env::args_os());
    if code == 0 {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
