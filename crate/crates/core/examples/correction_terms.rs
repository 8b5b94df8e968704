//! The pieces of the corrected approximation at one point, and the closed
//! forms checked against direct quadrature of their integrals.

use fpt::approx::{self, integral_oracle, IntegralKind};
use fpt::moments::model_constants;
use fpt::CrossingQuery;

fn main() -> fpt::Result<()> {
    let k = model_constants(&"erlang:1.2,2".parse()?, &"erlang:1,2".parse()?)?;
    let q = CrossingQuery::new(40.0, 1.0, 0.0, 1000.0)?;
    let r = approx::corrected(&q, &k);

    println!("K_F = {:.6}, K_S = {:.6} at c = {}", k.kf(q.c), k.ks(q.c), q.c);
    let parts = [
        ("I^M", IntegralKind::M, approx::i_m_closed(&q, &k)),
        ("I^F", IntegralKind::F, approx::i_f_closed(&q, &k)),
        ("I^S", IntegralKind::S, approx::i_s_closed(&q, &k)),
    ];
    for (name, kind, closed) in parts {
        let quad = integral_oracle(kind, &q, &k, 1e-10)?;
        println!("{name}: closed {closed:+.10}  quadrature {quad:+.10}");
    }
    println!("main {:.6}  corrected {:.6}", r.main, r.corrected);
    Ok(())
}
