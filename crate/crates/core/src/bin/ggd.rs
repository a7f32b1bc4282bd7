fn main() {
    let (code, out) = groupoid_calculus::cli::run_command(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
