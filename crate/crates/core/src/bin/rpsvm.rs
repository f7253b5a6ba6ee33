fn main() -> std::process::ExitCode {
    rpsvm::cli::main()
}
