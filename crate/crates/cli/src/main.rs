use clap::Parser;
use confined2d_cli::{run, Cli, Status};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { Status::Config.code() } else { 0 });
        }
    };
    std::process::exit(run(&cli).code());
}
