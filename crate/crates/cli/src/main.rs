use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let args = urriemann_cli::Args::parse();
    if let Err(e) = urriemann_cli::run(&args) {
        eprintln!("urriemann: {e}");
        std::process::exit(e.exit_code());
    }
}
