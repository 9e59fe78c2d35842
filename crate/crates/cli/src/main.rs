use std::io::{IsTerminal, Read, Write};

fn main() {
    koszulkit_cli::configure_threads();
    let args: Vec<String> = std::env::args().collect();
    let mut input = String::new();
    // only commands naming `-` read standard input
    if args.iter().any(|a| a == "-") && !std::io::stdin().is_terminal() {
        let _ = std::io::stdin().read_to_string(&mut input);
    }
    let out = koszulkit_cli::run(&args, &input);
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
