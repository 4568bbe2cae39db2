fn main() -> std::process::ExitCode {
    mdms::cli::main()
}
