use clap::Parser;

use cctt::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, out, err) = run(&cli);
    print!("{out}");
    eprint!("{err}");
    std::process::exit(code);
}
