use std::io::Write;

use clap::Parser;
use lesac::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let out = run(&cfg);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
