use clap::Parser;

fn main() {
    let cli = freearr_cli::Cli::parse();
    match freearr_cli::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
