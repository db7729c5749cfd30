fn main() {
    std::process::exit(ptlattice::sweep::main_with_args(std::env::args_os()));
}
