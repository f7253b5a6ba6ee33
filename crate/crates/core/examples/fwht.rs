//! The normalized Walsh-Hadamard transform is orthogonal and its own inverse.

use rpsvm::linalg::{fwht_inplace, norm2};

fn main() -> rpsvm::Result<()> {
    let mut v = vec![1.0, 0.0, 0.0, 0.0];
    fwht_inplace(&mut v)?;
    println!("H e1       = {v:?}");

    let original: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
    let mut w = original.clone();
    fwht_inplace(&mut w)?;
    println!("norm before {:.12}, after {:.12}", norm2(&original), norm2(&w));
    fwht_inplace(&mut w)?;
    let err = original.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("H H v = v up to {err:.1e}");

    // lengths must be powers of two
    println!("{}", fwht_inplace(&mut [1.0, 2.0, 3.0]).unwrap_err());
    Ok(())
}
