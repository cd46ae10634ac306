fn main() {
    std::process::exit(firmfrob::shell::run(std::env::args_os()));
}
