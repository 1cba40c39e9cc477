//! Class groups of a few fields, with the factor base and relation count.
//!
//!     cargo run --release --example class_groups

use monocubic::classgroup::{self, ClassGroupConfig, FactorBase};
use monocubic::cubicfield::CubicFieldData;
use monocubic::cubicforms::BinaryCubicForm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let forms = [(0, -1, 1), (0, -3, 1), (-1, -3, 1), (0, 33, 73), (0, 33, 71), (1, -30, -14), (-1, 31, -26)];
    let config = ClassGroupConfig::default();
    println!("{:<20} {:>9} {:>8} {:>4} {:>10} {:>6} {:>6}", "form", "disc", "bound", "|FB|", "group", "rounds", "rels");
    for (f1, f2, f3) in forms {
        let f = BinaryCubicForm::monic(f1, f2, f3);
        let k = CubicFieldData::from_form(&f)?;
        if !k.maximal {
            println!("{f:<20} {:>9}  (Z[θ] not maximal)", k.disc);
            continue;
        }
        let fb = FactorBase::new(&k)?;
        let r = classgroup::class_group(&f, &k, &config)?;
        println!(
            "{:<20} {:>9} {:>8.2} {:>4} {:>10} {:>6} {:>6}{}",
            f.to_string(),
            k.disc,
            fb.bound,
            fb.len(),
            r.group.to_string(),
            r.search_rounds,
            r.relations.rows.len(),
            if r.stabilized { "" } else { "  (not stabilized)" }
        );
        for p in [2, 3] {
            let t = classgroup::p_torsion_size(&r.group, p)?;
            if t > 1 {
                println!("{:>20} |Cl[{p}]| = {t}", "");
            }
        }
    }
    Ok(())
}
