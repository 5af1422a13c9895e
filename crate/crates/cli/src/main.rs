fn main() {
    std::process::exit(fiberlink::main_with_args(std::env::args_os()));
}
