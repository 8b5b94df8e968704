use fpt::approx::{self, integral_oracle, IntegralKind};
use fpt::exact::exact_conditional;
use fpt::moments::{model_constants, model_constants_generic, model_constants_lemma};
use fpt::rng::substream_seed;
use fpt::sim::crossing_times;
use fpt::{CrossingQuery, DistributionSpec, ExpExpModel};
use proptest::prelude::*;

fn any_law() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        (0.1..10.0f64).prop_map(|r| DistributionSpec::exponential(r).unwrap()),
        (0.1..10.0f64, 1..10u32).prop_map(|(r, k)| DistributionSpec::erlang(r, k).unwrap()),
        (0.1..5.0f64, 1.05..5.0f64, 0.0..=1.0f64)
            .prop_map(|(r, f, p)| DistributionSpec::mix2exp(r, r * f, p).unwrap()),
        (0.1..5.0f64, 0.5..=1.0f64).prop_map(|(r, p)| DistributionSpec::mix2exp(r, 2.0 * r, p).unwrap()),
        (3.1..10.0f64, 0.05..5.0f64).prop_map(|(a, b)| DistributionSpec::pareto(a, b).unwrap()),
    ]
}

fn erlang_like() -> impl Strategy<Value = DistributionSpec> {
    (0.2..5.0f64, 1..8u32).prop_map(|(r, k)| DistributionSpec::erlang(r, k).unwrap())
}

fn pareto() -> impl Strategy<Value = DistributionSpec> {
    (3.2..9.0f64, 0.1..3.0f64).prop_map(|(a, b)| DistributionSpec::pareto(a, b).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quantile_inverts_cdf(law in any_law(), u in 1e-9..(1.0 - 1e-9f64)) {
        let x = law.quantile(u).unwrap();
        prop_assert!(x >= 0.0 && x.is_finite());
        // compare on the smaller tail to keep relative precision
        let (got, want) = if u < 0.5 { (law.cdf(x), u) } else { (law.survival(x), 1.0 - u) };
        prop_assert!((got - want).abs() <= 1e-9 * want, "{law} u={u}: {got} vs {want}");
    }

    #[test]
    fn constants_agree_erlang_pareto(t in erlang_like(), y in pareto()) {
        let g = model_constants_generic(&t.moments().unwrap(), &y.moments().unwrap()).unwrap();
        let l = model_constants_lemma(&t, &y).unwrap();
        prop_assert!(close(g.d2, l.d2, 1e-9) && close(g.kf_coeff, l.kf_coeff, 1e-9));
        prop_assert!(close(g.ks_coeff, l.ks_coeff, 1e-9));
    }

    #[test]
    fn constants_agree_pareto_pareto(t in pareto(), y in pareto()) {
        let g = model_constants_generic(&t.moments().unwrap(), &y.moments().unwrap()).unwrap();
        let l = model_constants_lemma(&t, &y).unwrap();
        prop_assert!(close(g.m, l.m, 1e-9) && close(g.kf_coeff, l.kf_coeff, 1e-9));
        prop_assert!(close(g.ks_coeff, l.ks_coeff, 1e-9));
    }

    #[test]
    fn main_term_is_a_probability_increasing_in_t(
        t in erlang_like(), y in erlang_like(),
        u in 1.0..100.0f64, rel_c in 0.3..3.0f64, v in 0.0..10.0f64,
        h1 in 0.0..500.0f64, h2 in 0.0..500.0f64,
    ) {
        let k = model_constants(&t, &y).unwrap();
        let (a, b) = (h1.min(h2), h1.max(h2));
        let q = CrossingQuery::new(u, rel_c * k.c_star, v, v + a).unwrap();
        let (pa, pb) = (approx::i_m_closed(&q, &k), approx::i_m_closed(&q.with_t(v + b), &k));
        let pinf = approx::i_m_closed(&q.with_t(f64::INFINITY), &k);
        for p in [pa, pb, pinf] {
            prop_assert!((0.0..=1.0 + 1e-9).contains(&p), "{p}");
        }
        prop_assert!(pb >= pa - 1e-12 && pinf >= pb - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closed_forms_match_quadrature(
        t in any_law(), y in pareto(),
        u in 5.0..60.0f64, rel_c in 0.5..2.0f64, span in 5.0..800.0f64,
    ) {
        prop_assume!(!matches!(t, DistributionSpec::Pareto { shape, .. } if shape <= 3.0));
        let k = model_constants(&t, &y).unwrap();
        let q = CrossingQuery::new(u, rel_c * k.c_star, 0.0, span).unwrap();
        let pairs = [
            (IntegralKind::M, approx::i_m_closed(&q, &k)),
            (IntegralKind::F, approx::i_f_closed(&q, &k)),
            (IntegralKind::S, approx::i_s_closed(&q, &k)),
        ];
        for (kind, closed) in pairs {
            let quad = integral_oracle(kind, &q, &k, 1e-9).unwrap();
            prop_assert!((closed - quad).abs() <= 1e-6, "{kind:?}: {closed} vs {quad}");
        }
    }

    // The conditional probability leaves out a crossing at the first epoch,
    // which has probability e^{-μu} at v = 0; only the sum is monotone in u.
    #[test]
    fn exact_monotone_in_t_and_u(
        lam in 0.3..3.0f64, mu in 0.3..3.0f64, c in 0.2..3.0f64,
        u in 0.5..30.0f64, du in 0.0..10.0f64, t in 1.0..300.0f64, dt in 0.0..300.0f64,
    ) {
        let m = ExpExpModel::new(lam, mu).unwrap();
        let p = |u, t| exact_conditional(&m, &CrossingQuery::new(u, c, 0.0, t).unwrap()).unwrap();
        let base = p(u, t);
        prop_assert!(p(u, t + dt) >= base - 1e-9);
        let with_jump = |u: f64| p(u, t) + (-mu * u).exp();
        prop_assert!(with_jump(u + du) <= with_jump(u) + 1e-9);
    }

    // Scaling time by s: gaps become s T (rate λ/s), the drift c/s, and the
    // horizon and first epoch s t and s v. The crossing event is unchanged.
    #[test]
    fn exact_invariant_under_time_rescaling(
        lam in 0.3..3.0f64, mu in 0.3..3.0f64, c in 0.3..2.5f64,
        u in 1.0..20.0f64, v in 0.0..5.0f64, t in 5.0..200.0f64, s in 0.2..5.0f64,
    ) {
        let a = exact_conditional(&ExpExpModel::new(lam, mu).unwrap(), &CrossingQuery::new(u, c, v, v + t).unwrap()).unwrap();
        let b = exact_conditional(
            &ExpExpModel::new(lam / s, mu).unwrap(),
            &CrossingQuery::new(u, c / s, s * v, s * (v + t)).unwrap(),
        ).unwrap();
        prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // Thresholding one record of crossing epochs at increasing horizons
    // cannot lose crossings.
    #[test]
    fn simulated_counts_nondecreasing_in_t(seed in any::<u32>(), c in 0.5..1.5f64) {
        let (t_law, y_law) = ("erlang:1.2,2".parse().unwrap(), "erlang:1,2".parse().unwrap());
        let q = CrossingQuery::new(10.0, c, 0.0, 400.0).unwrap();
        let tau = crossing_times(&t_law, &y_law, &q, 500, seed).unwrap();
        let counts: Vec<usize> = [10.0, 50.0, 100.0, 200.0, 400.0]
            .iter()
            .map(|&h| tau.iter().filter(|x| x.is_some_and(|x| x <= h)).count())
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }

    // With one substream per trajectory the same uniforms drive every level,
    // so a path that crosses a higher level by t has crossed the lower one.
    #[test]
    fn simulated_counts_nonincreasing_in_u(master in any::<u64>(), c in 0.5..1.5f64) {
        let (t_law, y_law) = ("exp:1".parse().unwrap(), "pareto:4,0.35".parse().unwrap());
        let count = |u: f64| {
            let q = CrossingQuery::new(u, c, 0.0, 100.0).unwrap();
            (0..300u64)
                .filter(|&i| crossing_times(&t_law, &y_law, &q, 1, substream_seed(master, i)).unwrap()[0].is_some())
                .count()
        };
        let counts: Vec<usize> = [0.5, 2.0, 5.0, 10.0, 20.0].into_iter().map(count).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    }
}
