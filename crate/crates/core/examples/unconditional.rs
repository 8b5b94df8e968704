//! Crossing probability when the first gap is Exponential too, obtained by
//! integrating the conditional probability over T1.

use fpt::exact::{exact_conditional, unconditional_exp_t1};
use fpt::{CrossingQuery, ExpExpModel};

fn main() -> fpt::Result<()> {
    let m = ExpExpModel::new(1.0, 1.0)?;
    for c in [0.8, 1.0, 1.2] {
        let given_zero = exact_conditional(&m, &CrossingQuery::new(10.0, c, 0.0, 100.0)?)?;
        let p = unconditional_exp_t1(&m, 10.0, c, 100.0)?;
        println!("c = {c}: P(T1 = 0) version {given_zero:.6}, unconditional {p:.6}");
    }
    Ok(())
}
