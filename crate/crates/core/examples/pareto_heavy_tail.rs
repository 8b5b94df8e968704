//! Pareto jumps have no exponential moment, so the classical ruin estimates
//! do not apply; the approximations here only need three moments.

use fpt::moments::model_constants;
use fpt::sim::simulate_conditional;
use fpt::{approx, CrossingQuery, DistributionSpec};

fn main() -> fpt::Result<()> {
    let t_law: DistributionSpec = "erlang:6,4".parse()?;
    let y_law: DistributionSpec = "pareto:4,0.4".parse()?;
    if let Some(w) = y_law.approximation_warning() {
        eprintln!("warning: {w}");
    }
    let k = model_constants(&t_law, &y_law)?;
    println!("c* = {:.4}", k.c_star);
    for c in [1.0, 1.2, 1.25, 1.3, 1.5, 2.0] {
        let q = CrossingQuery::new(40.0, c, 0.0, 1000.0)?;
        let a = approx::corrected(&q, &k);
        let s = simulate_conditional(&t_law, &y_law, &q, 4000, 77)?;
        println!(
            "c = {c:4.2}  main {:.4}  corrected {:.4}  sim {:.4} [{:.4}, {:.4}]",
            a.main, a.corrected, s.estimate, s.ci_low, s.ci_high
        );
    }
    Ok(())
}
