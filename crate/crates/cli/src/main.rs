use clap::Parser;

fn main() {
    let cli = torus_wrt_cli::Cli::parse();
    let code = torus_wrt_cli::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
