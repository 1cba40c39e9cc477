//! Enumerate canonical monic cubic forms by height and check the `(I, J)`
//! parametrisation on the way.
//!
//!     cargo run --release --example enumerate_forms -- 100000

use monocubic::cubicforms::{self, SignFilter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ymax: i128 = std::env::args().nth(1).map_or(Ok(100_000), |s| s.parse())?;

    let (mut pos, mut neg, mut reducible) = (0u64, 0u64, 0u64);
    for e in cubicforms::enumerate(ymax, SignFilter::Both)? {
        let e = e?;
        assert_eq!(cubicforms::form_from_ij(e.inv.i, e.inv.j), Some(e.form));
        match e.inv.disc > 0 {
            true => pos += 1,
            false => neg += 1,
        }
        reducible += u64::from(!e.irreducible);
    }
    let y = ymax as f64;
    println!("forms with H < {ymax}:");
    println!("  positive discriminant  {pos:>8}   (8/135)·Y^(5/6)  = {:.1}", 8.0 / 135.0 * y.powf(5.0 / 6.0));
    println!("  negative discriminant  {neg:>8}   (32/135)·Y^(5/6) = {:.1}", 32.0 / 135.0 * y.powf(5.0 / 6.0));
    println!("  of which reducible     {reducible:>8}");

    println!("\nthe first few positive ones:");
    for e in cubicforms::enumerate(ymax, SignFilter::Positive)?.take(5) {
        let e = e?;
        println!("  I = {:>4}  J = {:>5}  f = {}  disc = {}", e.inv.i, e.inv.j, e.form, e.inv.disc);
    }
    Ok(())
}
