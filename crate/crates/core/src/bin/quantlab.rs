fn main() -> std::process::ExitCode {
    quantlab::cli::main()
}
