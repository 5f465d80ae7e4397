fn main() {
    std::process::exit(ribbon_surface::cli::cli_main(std::env::args_os()));
}
