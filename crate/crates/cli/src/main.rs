use std::io;

fn main() {
    let code = phax_cli::dispatch(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
