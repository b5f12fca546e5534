fn main() -> std::process::ExitCode {
    nepg::cli::main()
}
