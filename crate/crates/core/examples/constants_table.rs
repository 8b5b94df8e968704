//! Model constants for the pairs with closed-form expressions, computed both
//! from moments and from the pair formulas.

use fpt::moments::{model_constants, model_constants_lemma};
use fpt::DistributionSpec;

fn main() -> fpt::Result<()> {
    let pairs = [
        ("exp:1", "exp:1"),
        ("erlang:1.2,2", "erlang:1,2"),
        ("mix2exp:1,2,0.6667", "pareto:4,0.35"),
        ("erlang:6,4", "pareto:4,0.4"),
        ("pareto:4,0.4", "pareto:4,0.4"),
    ];
    println!("{:<20} {:<15} {:>9} {:>9} {:>9} {:>9}", "T", "Y", "c*", "D^2", "K_F*c", "K_S*c");
    for (t, y) in pairs {
        let (ts, ys): (DistributionSpec, DistributionSpec) = (t.parse()?, y.parse()?);
        let k = model_constants(&ts, &ys)?;
        let l = model_constants_lemma(&ts, &ys)?;
        println!(
            "{t:<20} {y:<15} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            k.c_star, k.d2, k.kf_coeff, k.ks_coeff
        );
        println!(
            "{:<36} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            "  (pair formula)", l.c_star, l.d2, l.kf_coeff, l.ks_coeff
        );
    }
    Ok(())
}
