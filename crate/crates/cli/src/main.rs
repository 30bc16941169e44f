use std::process::ExitCode;

use clap::Parser;
use fracseries_cli::{emit, run, thread_count, RunConfig, EXIT_ERROR};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };

    let result = thread_count().and_then(|threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| fracseries_cli::CliError::Usage(e.to_string()))?;
        let outcome = run(&cfg)?;
        emit(&cfg, &outcome)?;
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fracseries: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
