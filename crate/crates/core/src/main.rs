fn main() {
    let out = symtens::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    if !out.stdout.ends_with('\n') {
        println!();
    }
    std::process::exit(out.code);
}
