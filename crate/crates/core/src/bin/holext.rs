fn main() {
    std::process::exit(holext::commands::main_from(std::env::args_os()));
}
