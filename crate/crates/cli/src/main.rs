use std::process::ExitCode;

use hcp_cli::{parse_args, run, Format};

fn main() -> ExitCode {
    let spec = match parse_args(std::env::args_os()) {
        Ok(s) => s,
        Err(e) => e.exit(),
    };
    let report = match run(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    if spec.command.is_randomized() && spec.format != Format::Json {
        eprintln!("seed: {}", spec.seed);
    }
    print!("{}", report.render(spec.format));
    if let Some(path) = &spec.output {
        let body = report
            .artifact
            .clone()
            .unwrap_or_else(|| serde_json::to_string_pretty(&report.json).expect("report values serialise"));
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    ExitCode::SUCCESS
}
