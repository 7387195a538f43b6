fn main() {
    let (code, out) = prenash::cli::run_cli(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
