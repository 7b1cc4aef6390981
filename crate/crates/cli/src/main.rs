fn main() {
    std::process::exit(gxrepair::run_main());
}
