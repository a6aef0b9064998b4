use clap::Parser;

use gluing::cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (report, text) = run(&cli);
    print!("{text}");
    std::process::exit(report.exit_code);
}
