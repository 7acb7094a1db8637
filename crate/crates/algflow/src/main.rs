use algflow::cli;
use algflow::report::timed;

fn main() {
    let code = timed("wall time", || match cli::main_entry() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    });
    std::process::exit(code);
}
