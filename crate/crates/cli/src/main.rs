mod commands;
mod config;

fn main() {
    std::process::exit(commands::run());
}
