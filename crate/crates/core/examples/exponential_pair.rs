//! Exponential gaps and jumps: exact probability against the main term, the
//! corrected approximation and a simulated estimate, over a range of c.

use fpt::exact::exact_conditional;
use fpt::moments::model_constants;
use fpt::sim::simulate_conditional;
use fpt::{approx, CrossingQuery, DistributionSpec, ExpExpModel};

fn main() -> fpt::Result<()> {
    let (t_law, y_law) = (DistributionSpec::exponential(1.0)?, DistributionSpec::exponential(1.0)?);
    let model = ExpExpModel::new(1.0, 1.0)?;
    let k = model_constants(&t_law, &y_law)?;

    println!("   c      exact       main  corrected        sim  (95% CI)");
    for i in 1..=8 {
        let c = 0.25 * i as f64;
        let q = CrossingQuery::new(10.0, c, 0.0, 100.0)?;
        let a = approx::corrected(&q, &k);
        let s = simulate_conditional(&t_law, &y_law, &q, 2000, 1000 + i)?;
        println!(
            "{c:5.2} {:10.6} {:10.6} {:10.6} {:10.4}  ({:.4}, {:.4})",
            exact_conditional(&model, &q)?,
            a.main,
            a.corrected,
            s.estimate,
            s.ci_low,
            s.ci_high
        );
    }

    let q = CrossingQuery::new(10.0, 1.5, 0.0, f64::INFINITY)?;
    println!("\nt = inf, c = 1.5: exact {:.6}", exact_conditional(&model, &q)?);
    Ok(())
}
