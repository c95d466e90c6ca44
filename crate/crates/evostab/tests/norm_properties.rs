//! Property tests for adapted norms: the norm axioms, the sandwich against
//! the growth constants, monotonicity in the exponent, and agreement with
//! the literal rescan oracle.

use evostab::adapted_norms::AlphaContext;
use evostab::dynamics::{EvolutionCache, FamilyFile};
use evostab::linalg::VectorNorm;
use evostab::oracles;
use ndarray::Array1;
use proptest::prelude::*;

fn dense_cache(d: usize, h: usize, entries: &[f64]) -> EvolutionCache<f64> {
    let steps: Vec<Vec<f64>> = entries.chunks(d * d).map(|c| c.to_vec()).collect();
    let file = FamilyFile::MatrixList { dimension: d, data: steps };
    EvolutionCache::build(file.into_family::<f64>().unwrap(), h, VectorNorm::Sup).unwrap()
}

fn family_and_vectors() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>, f64)> {
    (1usize..=3, 4usize..=20).prop_flat_map(|(d, h)| {
        (
            Just(d),
            Just(h),
            proptest::collection::vec(-1.2f64..1.2, d * d * h..=d * d * h),
            proptest::collection::vec(-2.0f64..2.0, 2 * d..=2 * d),
            -0.8f64..0.8,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Homogeneity, the triangle inequality, and the growth-constant
    /// sandwich `|x| <= |x|_{n,alpha} <= M_n |x|` on random dense families.
    #[test]
    fn norm_axioms_and_sandwich((d, h, entries, xy, alpha) in family_and_vectors()) {
        let cache = dense_cache(d, h, &entries);
        let ctx = AlphaContext::new(&cache, alpha, None).unwrap();
        let x = Array1::from_iter(xy[..d].iter().copied());
        let y = Array1::from_iter(xy[d..].iter().copied());
        let sum = &x + &y;
        for n in 0..=h {
            let nx = ctx.adapted_norm(n, x.view()).unwrap().value;
            let ny = ctx.adapted_norm(n, y.view()).unwrap().value;
            let nsum = ctx.adapted_norm(n, sum.view()).unwrap().value;

            // triangle inequality
            prop_assert!(nsum <= nx + ny + 1e-12 * (nx + ny + 1.0));

            // homogeneity
            let scaled = ctx.adapted_norm(n, (&x * -3.5f64).view()).unwrap().value;
            prop_assert!((scaled - 3.5 * nx).abs() <= 1e-12 * (1.0 + scaled));

            // sandwich against the plain norm and the growth constant
            let plain = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let m_n = ctx.growth(n);
            prop_assert!(nx >= plain * (1.0 - 1e-12));
            prop_assert!(
                nx <= m_n * plain * (1.0 + 1e-9) + 1e-300,
                "norm {nx} above M_n bound {m_n} * {plain} at n = {n}"
            );
        }
    }

    /// The growth table is at least 1 and shrinks as the exponent grows.
    #[test]
    fn growth_tables_monotone_in_alpha((d, h, entries, _xy, alpha) in family_and_vectors()) {
        let cache = dense_cache(d, h, &entries);
        let beta = alpha + 0.3;
        let lo = AlphaContext::new(&cache, alpha, None).unwrap();
        let hi = AlphaContext::new(&cache, beta, None).unwrap();
        for n in 0..=h {
            prop_assert!(lo.growth(n) >= 1.0 - 1e-12);
            prop_assert!(
                hi.growth(n) <= lo.growth(n) * (1.0 + 1e-12),
                "M_n not monotone at n = {}: {} vs {}",
                n,
                hi.growth(n),
                lo.growth(n)
            );
        }
    }

    /// Single-vector queries agree with the literal rescan oracle.
    #[test]
    fn adapted_norm_matches_rescan_oracle((d, h, entries, xy, alpha) in family_and_vectors()) {
        let cache = dense_cache(d, h, &entries);
        let ctx = AlphaContext::new(&cache, alpha, None).unwrap();
        let x = Array1::from_iter(xy[..d].iter().copied());
        for n in 0..=h {
            let fast = ctx.adapted_norm(n, x.view()).unwrap().value;
            let slow = oracles::adapted_norm_rescan(&cache, alpha, h, n, x.view()).unwrap();
            prop_assert!(
                (fast - slow).abs() <= 1e-12 * (1.0 + slow),
                "rescan mismatch at n = {n}: {fast} vs {slow}"
            );
        }
    }
}

#[test]
fn log_domain_queries_match_rescan_bit_for_bit() {
    let h = 96usize;
    for file in [FamilyFile::Example1 { dimension: 1 }, FamilyFile::Example2 { dimension: 1 }] {
        let cache =
            EvolutionCache::build(file.into_family::<f64>().unwrap(), h, VectorNorm::Sup).unwrap();
        for alpha in [-0.4f64, 0.0, 0.5] {
            let ctx = AlphaContext::new(&cache, alpha, None).unwrap();
            let x = Array1::from_elem(1, -1.75f64);
            for n in (0..=h).step_by(5) {
                let fast = ctx.adapted_norm(n, x.view()).unwrap().value;
                let slow = oracles::adapted_norm_rescan(&cache, alpha, h, n, x.view()).unwrap();
                assert_eq!(fast.to_bits(), slow.to_bits(), "alpha {alpha}, n {n}");
            }
        }
    }
}

#[test]
fn identity_adapted_norm_is_the_plain_norm() {
    let cache = EvolutionCache::build(
        FamilyFile::Identity { dimension: 3 }.into_family::<f64>().unwrap(),
        24,
        VectorNorm::Sup,
    )
    .unwrap();
    let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
    let x = Array1::from_vec(vec![0.3, -2.0, 1.1]);
    for n in 0..=24 {
        let v = ctx.adapted_norm(n, x.view()).unwrap().value;
        assert_eq!(v, 2.0);
        assert_eq!(ctx.growth(n), 1.0);
    }
}

#[test]
fn geometric_contraction_norm_peaks_at_the_start() {
    let cache = EvolutionCache::build(
        FamilyFile::Geometric { dimension: 1, data: (-1.0f64).exp() }
            .into_family::<f64>()
            .unwrap(),
        64,
        VectorNorm::Sup,
    )
    .unwrap();
    let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
    let one = Array1::from_elem(1, 1.0f64);
    for n in 0..=64 {
        assert_eq!(ctx.adapted_norm(n, one.view()).unwrap().value, 1.0);
    }
}

#[test]
fn alternating_family_odd_starts_carry_the_growth() {
    // at the attained floor the odd starts pay e^{2n/3} and the even ones
    // see no growth at all
    let cache = EvolutionCache::build(
        FamilyFile::Example1 { dimension: 1 }.into_family::<f64>().unwrap(),
        256,
        VectorNorm::Sup,
    )
    .unwrap();
    let ctx = AlphaContext::new(&cache, -1.0 / 3.0, None).unwrap();
    let one = Array1::from_elem(1, 1.0f64);
    for n in [1usize, 3, 9, 31] {
        let v = ctx.adapted_norm(n, one.view()).unwrap().value;
        let expect = (2.0 * n as f64 / 3.0).exp();
        assert!(
            (v - expect).abs() <= 1e-10 * expect,
            "odd start {n}: {v} vs {expect}"
        );
    }
    for n in [0usize, 2, 10, 32] {
        let v = ctx.adapted_norm(n, one.view()).unwrap().value;
        assert!((v - 1.0).abs() <= 1e-12, "even start {n}: {v}");
    }
}

#[test]
fn window_norm_is_the_max_of_slot_norms() {
    let cache = EvolutionCache::build(
        FamilyFile::Example1 { dimension: 1 }.into_family::<f64>().unwrap(),
        48,
        VectorNorm::Sup,
    )
    .unwrap();
    let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
    let mut w = evostab::window::SequenceWindow::zeros(48, 1);
    for k in 0..=48usize {
        w.set_slot(k, Array1::from_elem(1, ((k % 7) as f64 - 3.0) / 4.0).view());
    }
    let whole = ctx.window_norm(&w).unwrap();
    let mut best: f64 = 0.0;
    for k in 0..=48 {
        best = best.max(ctx.slot_norm_ln(&w, k).unwrap().exp());
    }
    assert!((whole - best).abs() <= 1e-12 * (1.0 + best), "{whole} vs {best}");
}
