fn main() -> std::process::ExitCode {
    apn_search::cli::main_with_args(std::env::args_os())
}
