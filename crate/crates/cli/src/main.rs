use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("WLC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|n| *n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let code = wlc_cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
