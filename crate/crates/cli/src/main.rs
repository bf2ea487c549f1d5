fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(dioph_cli::run(&argv));
}
