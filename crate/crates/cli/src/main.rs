use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = brane_cli::run(std::env::args_os());
    if code == brane_cli::EXIT_INPUT {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(code as u8)
}
