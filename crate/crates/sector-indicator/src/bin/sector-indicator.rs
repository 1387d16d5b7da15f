fn main() {
    std::process::exit(sector_indicator::cli::run());
}
