use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = frobdiff::run(std::env::args_os());
    if let Some(rendered) = result.rendered() {
        print!("{rendered}");
        if result.json_mode {
            println!();
        }
    }
    if let Some(message) = &result.error {
        if result.exit_code == 0 {
            // clap help/version text
            println!("{message}");
        } else {
            let _ = writeln!(std::io::stderr(), "frobdiff: {message}");
        }
    }
    ExitCode::from(result.exit_code as u8)
}
