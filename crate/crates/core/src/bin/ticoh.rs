fn main() -> std::process::ExitCode {
    ti_coherence::cli::main()
}
