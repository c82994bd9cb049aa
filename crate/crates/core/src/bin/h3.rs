fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("H3_LOG")).init();
    std::process::exit(h3cycles::cli::run(std::env::args_os()));
}
