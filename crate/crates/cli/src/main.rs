mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use output::Header;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("birat: {e}");
            return ExitCode::from(2);
        }
    }
    let mut header = Header::new(cli.command.name());
    header.set(
        "threads",
        match cli.threads {
            Some(n) if n > 0 => n.to_string(),
            _ => "auto".into(),
        },
    );
    match commands::run(&cli.command, &mut header) {
        Ok(out) => {
            let rendered = output::render(cli.format, &header, &out);
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(rendered.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("birat: {e}");
            ExitCode::from(2)
        }
    }
}
