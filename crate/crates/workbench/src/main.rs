fn main() {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let mut out = std::io::stdout();
    let code = souslin_workbench::cli::run(std::env::args_os(), &mut input, &mut out);
    std::process::exit(code);
}
