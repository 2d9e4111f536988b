use hexastix::alt::{
    alt_directions, alt_formula_config, alt_min_sq_dist, alt_pair_sq_dist, alt_search, alt_search_with,
    reference_sq_dist, AltConfig, SearchParams,
};
use hexastix::{rat, Rat, RatVec};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

/// Squared distance between lines `u_i + P + R v_i` and `u_j + R v_j`,
/// minimised over integer translates `P` with entries in `-2..=2`.
fn brute_force(cfg: &AltConfig, i: usize, j: usize) -> f64 {
    let n = cfg.n;
    let ui: Vec<f64> = cfg.offsets[i].to_f64();
    let uj: Vec<f64> = cfg.offsets[j].to_f64();
    let vi: Vec<f64> = cfg.directions[i].iter().map(|&x| x as f64).collect();
    let vj: Vec<f64> = cfg.directions[j].iter().map(|&x| x as f64).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (pp, pq, qq) = (dot(&vi, &vi), dot(&vi, &vj), dot(&vj, &vj));
    let det = pp * qq - pq * pq;
    let mut best = f64::INFINITY;
    for code in 0..5usize.pow(n as u32) {
        let mut rest = code;
        let d: Vec<f64> = (0..n)
            .map(|k| {
                let p = (rest % 5) as f64 - 2.0;
                rest /= 5;
                ui[k] + p - uj[k]
            })
            .collect();
        let (dp, dq) = (dot(&d, &vi), dot(&d, &vj));
        let t = (pq * dq - qq * dp) / det;
        let s = (pp * dq - pq * dp) / det;
        let dist: f64 = (0..n).map(|k| (d[k] + t * vi[k] - s * vj[k]).powi(2)).sum();
        best = best.min(dist);
    }
    best
}

fn binary_config(n: usize, bits: &[u32]) -> AltConfig {
    let dirs = alt_directions(n).unwrap();
    let offsets = bits
        .iter()
        .map(|&b| (0..n).map(|k| if b >> k & 1 == 1 { rat(1, 2) } else { Rat::zero() }).collect())
        .collect();
    AltConfig::new(n, dirs, offsets).unwrap()
}

#[test]
fn formula_offsets_attain_five_thirty_sixths() {
    let cfg = alt_formula_config();
    let mut at_min = 0;
    for i in 0..8 {
        for j in i + 1..8 {
            let d = alt_pair_sq_dist(&cfg, i, j).unwrap().sq_dist;
            assert!(d >= rat(5, 36));
            at_min += usize::from(d == rat(5, 36));
        }
    }
    assert!(at_min > 0);
    assert_eq!(alt_min_sq_dist(&cfg).unwrap(), rat(5, 36));
}

#[test]
fn split_formula_matches_explicit_lines() {
    let cfg = alt_formula_config();
    for i in 0..8 {
        for j in i + 1..8 {
            let exact = alt_pair_sq_dist(&cfg, i, j).unwrap().sq_dist.to_f64().unwrap();
            assert!((exact - brute_force(&cfg, i, j)).abs() < 1e-9, "({i}, {j})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binary_offsets_match_explicit_lines(bits in prop::collection::vec(0u32..32, 16), i in 0usize..16, j in 0usize..16) {
        prop_assume!(i != j);
        let cfg = binary_config(5, &bits);
        let w = alt_pair_sq_dist(&cfg, i, j).unwrap();
        prop_assert_eq!(w.w_prime.dim() + w.w_double_prime.dim(), 5);
        prop_assert!(w.w_prime.dim() >= 1 && w.w_double_prime.dim() >= 1);
        let exact = w.sq_dist.to_f64().unwrap();
        prop_assert!((exact - brute_force(&cfg, i, j)).abs() < 1e-9);
    }

    #[test]
    fn rational_offsets_match_explicit_lines(num in prop::collection::vec(-12i64..12, 32), i in 0usize..8, j in 0usize..8) {
        prop_assume!(i != j);
        let dirs = alt_directions(4).unwrap();
        let offsets = num.chunks(4).map(|c| c.iter().map(|&a| rat(a, 12)).collect()).collect();
        let cfg = AltConfig::new(4, dirs, offsets).unwrap();
        let exact = alt_pair_sq_dist(&cfg, i, j).unwrap().sq_dist.to_f64().unwrap();
        prop_assert!((exact - brute_force(&cfg, i, j)).abs() < 1e-9);
    }

    #[test]
    fn symmetric_and_translation_invariant(num in prop::collection::vec(-12i64..12, 32), z in prop::collection::vec(-3i64..3, 4), i in 0usize..8, j in 0usize..8) {
        prop_assume!(i != j);
        let dirs = alt_directions(4).unwrap();
        let offsets: Vec<RatVec> = num.chunks(4).map(|c| c.iter().map(|&a| rat(a, 12)).collect()).collect();
        let cfg = AltConfig::new(4, dirs.clone(), offsets.clone()).unwrap();
        let a = alt_pair_sq_dist(&cfg, i, j).unwrap().sq_dist;
        prop_assert_eq!(&a, &alt_pair_sq_dist(&cfg, j, i).unwrap().sq_dist);
        let shift = RatVec::from_ints(&z);
        let moved = offsets.iter().map(|u| u + &shift).collect();
        let cfg2 = AltConfig::new(4, dirs, moved).unwrap();
        prop_assert_eq!(a, alt_pair_sq_dist(&cfg2, i, j).unwrap().sq_dist);
    }

    #[test]
    fn negating_a_coordinate_preserves_the_minimum(num in prop::collection::vec(-12i64..12, 32), k in 0usize..3) {
        let dirs = alt_directions(4).unwrap();
        let offsets: Vec<RatVec> = num.chunks(4).map(|c| c.iter().map(|&a| rat(a, 12)).collect()).collect();
        let cfg = AltConfig::new(4, dirs.clone(), offsets.clone()).unwrap();
        let flip = |v: &[i64]| -> Vec<i64> { v.iter().enumerate().map(|(m, &x)| if m == k { -x } else { x }).collect() };
        let neg_dirs = dirs.iter().map(|d| flip(d)).collect();
        let neg_offsets = offsets
            .iter()
            .map(|u| u.iter().enumerate().map(|(m, x)| if m == k { -x } else { x.clone() }).collect())
            .collect();
        let neg = AltConfig::new(4, neg_dirs, neg_offsets).unwrap();
        prop_assert_eq!(alt_min_sq_dist(&cfg).unwrap(), alt_min_sq_dist(&neg).unwrap());
    }
}

#[test]
fn binary_components_have_closed_form() {
    // one direction pair per (agreeing size, halves) pattern, n = 6
    for m in 1..=6i64 {
        for c in 0..=m {
            let w: RatVec = (0..m).map(|k| if k < c { rat(1, 2) } else { Rat::zero() }).collect();
            let d = hexastix::lattice::nearest_sq_dist(
                &hexastix::lattice::proj_t(&w).unwrap(),
                hexastix::lattice::LatticeRef::a_star(m as usize - 1),
            )
            .unwrap()
            .0;
            assert_eq!(d.into_inner(), rat(c * (m - c), 4 * m));
        }
    }
}

#[test]
fn fixtures_meet_reported_bounds() {
    for n in 5..=8 {
        let path = format!("{}/../../fixtures/n{n}.json", env!("CARGO_MANIFEST_DIR"));
        let cfg: AltConfig = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(cfg.n, n);
        let score = alt_min_sq_dist(&cfg).unwrap();
        assert!(score >= reference_sq_dist(n).unwrap(), "n = {n}: {score}");
        assert!(cfg.offsets.iter().flat_map(|u| u.iter()).all(|x| x.is_zero() || *x == rat(1, 2)));
    }
}

#[test]
fn search_is_seeded_and_reverified() {
    let a = alt_search(5, 3, 4000).unwrap();
    let b = alt_search(5, 3, 4000).unwrap();
    assert_eq!(a, b);
    assert_eq!(alt_min_sq_dist(&a.0).unwrap(), a.1);
    let (cfg, s) = alt_search(6, 1, 0).unwrap();
    assert_eq!(alt_min_sq_dist(&cfg).unwrap(), s);
    let params = SearchParams { restarts: 2, patience: 500 };
    let (cfg, s) = alt_search_with(5, 9, 20_000, &params).unwrap();
    assert_eq!(alt_min_sq_dist(&cfg).unwrap(), s);
    assert!(s >= rat(1, 6));
    assert!(alt_search(9, 0, 10).is_err());
    assert!(alt_search(3, 0, 10).is_err());
}
