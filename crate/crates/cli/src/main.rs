use std::process::exit;

fn main() {
    match qubokit_cli::run(std::env::args_os()) {
        Ok(code) => exit(code),
        Err(err) => {
            // clap handles --help/--version by "erroring" with a rendered
            // message and exit code 0
            if let Some(clap_err) = err.downcast_ref::<clap::Error>() {
                clap_err.exit();
            }
            eprintln!("error: {err:#}");
            exit(1);
        }
    }
}
