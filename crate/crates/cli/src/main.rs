fn main() {
    // Unlocked handles: `serve` logs from worker threads.
    let code = qubitgeo_cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
