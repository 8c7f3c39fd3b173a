use std::io::{ErrorKind, Write};

use beurling_cli::Cli;
use clap::Parser;

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (report, files) = cli.run()?;
    let mut out = std::io::stdout().lock();
    let res = if files.is_empty() {
        serde_json::to_writer_pretty(&mut out, &report).map_err(std::io::Error::from).and_then(|_| writeln!(out))
    } else {
        files.iter().try_for_each(|f| writeln!(out, "{}", f.display()))
    };
    match res {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}
