fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ANDREEV_LOG")).init();
    std::process::exit(andreev::io::run_cli(std::env::args_os()));
}
