fn main() {
    let code = match rklab_cli::parse_args(std::env::args_os()) {
        Ok(cfg) => rklab_cli::execute(&cfg),
        Err(e) => e.report(),
    };
    std::process::exit(code);
}
