use clap::Parser;
use ringlab_cli::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_usage_error = err.use_stderr();
            let _ = err.print();
            if is_usage_error && std::env::args().any(|a| a == "--json") {
                eprintln!(
                    "{}",
                    serde_json::json!({"error": "usage error", "exit": 2})
                );
            }
            // help and version requests exit cleanly
            std::process::exit(if is_usage_error { 2 } else { 0 });
        }
    };
    std::process::exit(ringlab_cli::run(cli));
}
