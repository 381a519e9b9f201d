use clap::Parser;

fn main() {
    let cli = cutwave_cli::Cli::parse();
    match cutwave_cli::execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("cutwave: error: {e}");
            std::process::exit(1);
        }
    }
}
