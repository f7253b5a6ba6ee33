//! Write a dataset in LIBSVM format, read it back, and show a parse error.

use rpsvm::experiments::{generate_synthetic, SyntheticSpec};
use rpsvm::io::{format_libsvm, parse_libsvm, parse_libsvm_str, write_libsvm};

fn main() -> rpsvm::Result<()> {
    let (x, y) = generate_synthetic(&SyntheticSpec { n: 5, d: 8, mu: 0.0, sigma: 1.0, seed: 0 })?;
    print!("{}", &format_libsvm(&x, &y)?[..200]);
    println!("...");

    let dir = std::env::temp_dir().join("rpsvm-libsvm-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("toy.svm");
    write_libsvm(&path, &x, &y)?;
    let (back, labels) = parse_libsvm(&path, None)?;
    println!("read {}x{} with {} nonzeros, labels {labels:?}", back.rows(), back.cols(), back.nnz());
    assert_eq!(back.to_dense(), x.to_dense());

    match parse_libsvm_str("+1 1:0.5 3:2\n-1 4:1 2:3\n", None) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
