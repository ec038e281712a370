fn main() {
    std::process::exit(netgame_cli::dispatch(std::env::args_os()));
}
