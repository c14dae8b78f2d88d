use std::io::{self, Write};
use std::process;

use clap::Parser;
use weylwalks::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(&cli, &mut out, &mut stderr.lock());
    let _ = out.flush();
    process::exit(code as i32);
}
