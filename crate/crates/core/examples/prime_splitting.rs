//! Dedekind–Kummer splitting of small primes in `Z[θ]`, with the ideal
//! lattices and a norm check `Π N(P)^e = p³`.
//!
//!     cargo run --example prime_splitting -- 0 -1 1

use monocubic::cubicfield::{self, CubicFieldData};
use monocubic::cubicforms::BinaryCubicForm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<i128> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let (f1, f2, f3) = match args[..] {
        [a, b, c] => (a, b, c),
        _ => (0, -1, 1),
    };
    let f = BinaryCubicForm::monic(f1, f2, f3);
    let k = CubicFieldData::from_form(&f)?;
    println!("θ root of {}, disc {}, signature {:?}, maximal: {}", k.minpoly, k.disc, k.signature, k.maximal);
    if !k.maximal {
        return Ok(());
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        let ideals = cubicfield::prime_ideals_above(&k, p)?;
        let mut total = 1i128;
        println!("p = {p}:");
        for q in &ideals {
            total *= q.norm().pow(q.ramification);
            println!(
                "  ({p}, {}) e = {} f = {}  HNF {}",
                q.local_factor, q.ramification, q.residue_degree, q.lattice
            );
        }
        assert_eq!(total, (p as i128).pow(3));
    }
    Ok(())
}
