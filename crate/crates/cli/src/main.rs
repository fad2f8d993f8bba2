use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(blender_cli::run(std::env::args_os()))
}
