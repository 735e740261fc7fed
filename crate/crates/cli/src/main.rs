use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var(tracelab_cli::config::SEED_ENV).ok();
    let code = tracelab_cli::run(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
