fn main() -> std::process::ExitCode {
    rosetta_service::cli::main()
}
