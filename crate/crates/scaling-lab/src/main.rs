fn main() {
    if let Err(e) = scaling_lab::cli::run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
