use std::io;

fn main() -> std::process::ExitCode {
    let code = raise_forge::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    code.into()
}
