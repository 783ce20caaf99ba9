use clap::error::ErrorKind;
use clap::Parser;
use memdrift::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = cli::resolve_spec(cli).and_then(|spec| cli::execute(&spec)) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_status());
    }
}
