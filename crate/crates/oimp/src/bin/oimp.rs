use std::process::exit;

fn main() {
    exit(oimp::harness::cli::cli_main(std::env::args_os()));
}
