//! Inverse-transform draws from the reproducible LCG stream, with sample
//! moments against the exact ones.

use fpt::rng::substream_seed;
use fpt::{DistributionSpec, RngState};

fn main() -> fpt::Result<()> {
    let n = 200_000;
    for (i, s) in ["exp:2", "erlang:1.5,3", "mix2exp:1,2,0.6667", "pareto:5,0.5"].iter().enumerate() {
        let law: DistributionSpec = s.parse()?;
        let mut rng = RngState::new(substream_seed(20170101, i as u64));
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        println!(
            "{s:<20} mean {mean:.4} ({:.4})  variance {var:.4} ({:.4})",
            law.mean()?,
            law.variance()?
        );
    }
    let mut rng = RngState::new(1);
    let head: Vec<u32> = (0..4).map(|_| { rng.next_uniform(); rng.0 }).collect();
    println!("LCG states after seed 1: {head:?}");
    Ok(())
}
