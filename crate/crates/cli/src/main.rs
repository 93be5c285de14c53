fn main() {
    let code = residua_cli::run(std::env::args().collect(), std::env::var("RESIDUA_SEED").ok());
    std::process::exit(code);
}
