//! Writes a CSV of mu over the real (s1, s2) plane of E_{1/2,2}, the same
//! format as `symell slice`.
//!
//!     cargo run --example slice_csv > slice.csv

fn main() {
    let args = ["symell", "slice", "--p", "1/2", "--n", "2", "--dir2", "0,0 1,0", "--range", "1.5", "--grid", "31"];
    let code = symell::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
