use clap::Parser;

fn main() {
    let cli = daha_cli::Cli::parse();
    let code = daha_cli::run(&cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
