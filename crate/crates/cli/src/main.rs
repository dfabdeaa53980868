fn main() {
    let code = nlkg_cli::run(
        std::env::args_os(),
        std::env::var_os("NLKG_OUT"),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
