fn main() -> std::process::ExitCode {
    dispersive_swe::app::cli::cli_main()
}
