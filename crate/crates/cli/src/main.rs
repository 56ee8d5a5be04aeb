fn main() {
    let (code, out) = bwsynth_cli::run(std::env::args());
    println!("{out}");
    std::process::exit(code);
}
