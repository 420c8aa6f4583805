use std::io::Write;

use clap::Parser;

use ballmap::cli_io::commands::{run, Cli};
use ballmap::cli_io::exit;

fn main() {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let r = run(&cli);
    let out = r.render(cli.global.json);
    if r.report.verdict == "error" && !cli.global.json {
        let _ = writeln!(std::io::stderr(), "{out}");
    } else {
        let _ = writeln!(std::io::stdout(), "{out}");
    }
    std::process::exit(r.report.exit_code);
}
