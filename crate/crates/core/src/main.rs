fn main() {
    std::process::exit(ovf_lab::cli::main_with_env());
}
