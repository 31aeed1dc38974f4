use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = cghist_cli::Cli::parse();
    match cghist_cli::execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let record = serde_json::json!({
                "error": { "message": format!("{err:#}") }
            });
            eprintln!("{record}");
            std::process::exit(1);
        }
    }
}
