fn main() {
    std::process::exit(cqineq::cli::main());
}
