fn main() -> std::process::ExitCode {
    symlab::cli::main()
}
