use hexastix::field::{log_matrix, offsets_from_matrix, verify_row_difference, FieldTable, LogMatrix, OffsetFamily};
use hexastix::lattice::max_sq_dist;
use hexastix::lines::{all_pairs, check_optimal, pair_min_sq_dist, parallel_is_closer};
use hexastix::{rat, Error, Rat, RatVec};
use num_traits::Zero;

const PRIME_POWERS: [usize; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

fn all_rows_ok(m: &LogMatrix) -> bool {
    (0..=m.n).all(|i| (0..=m.n).filter(|&j| j != i).all(|j| verify_row_difference(m, i, j)))
}

#[test]
fn row_differences_cover_all_residues() {
    for n in PRIME_POWERS {
        let m = log_matrix(&FieldTable::new(n as u64).unwrap());
        assert!(all_rows_ok(&m), "n = {n}");
    }
}

#[test]
fn row_and_column_shifts_preserve_residues() {
    for n in [4usize, 5, 7, 8, 9] {
        let m = log_matrix(&FieldTable::new(n as u64).unwrap());
        let k = (n - 1) as u64;
        for c in 1..k {
            let mut rows = m.clone();
            for x in rows.entries[1].iter_mut() {
                *x = (*x + c) % k;
            }
            assert!(all_rows_ok(&rows), "n = {n}, row shift {c}");
            let mut cols = m.clone();
            for row in cols.entries.iter_mut() {
                row[2] = (row[2] + c) % k;
            }
            assert!(all_rows_ok(&cols), "n = {n}, column shift {c}");
        }
    }
}

#[test]
fn mutated_matrix_fails() {
    for n in [4usize, 5, 7, 8, 9, 11, 13] {
        let mut m = log_matrix(&FieldTable::new(n as u64).unwrap());
        // swap two off-diagonal entries of row 0
        m.entries[0].swap(1, 2);
        assert!(!all_rows_ok(&m), "n = {n}");
        assert!(matches!(offsets_from_matrix(&m), Err(Error::Precondition(_))));
    }
}

#[test]
fn field_axioms() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let f = FieldTable::new(q).unwrap();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                let inv = f.exp((q - 1 - f.log(a).unwrap()) % (q - 1));
                assert_eq!(f.mul(a, inv), 1, "q = {q}, a = {a}");
                assert_eq!(f.exp(f.log(a).unwrap()), a);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
        assert_eq!(f.pow(f.alpha, q - 1), 1);
        let powers: std::collections::BTreeSet<u64> = (0..q - 1).map(|e| f.pow(f.alpha, e)).collect();
        assert_eq!(powers.len() as u64, q - 1);
    }
}

#[test]
fn not_a_prime_power() {
    for n in [1usize, 6, 10, 12, 15] {
        assert!(matches!(OffsetFamily::construct(n), Err(Error::NotPrimePower(_))));
    }
}

#[test]
fn constructed_families_are_optimal() {
    for n in [3usize, 4, 5, 7, 8, 9] {
        let fam = OffsetFamily::construct(n).unwrap();
        let bound = rat((n * (n - 2)) as i64, (12 * (n - 1)) as i64);
        assert_eq!(bound, max_sq_dist(n - 2));
        let pairs = all_pairs(&fam).unwrap();
        assert_eq!(pairs.len(), (n + 1) * n / 2);
        for p in &pairs {
            assert_eq!(p.sq_dist.value(), &bound, "n = {n}, pair ({}, {})", p.i, p.j);
        }
        assert!(check_optimal(&fam));
    }
}

#[test]
fn hexastix_family() {
    let fam = OffsetFamily::hexastix();
    for p in all_pairs(&fam).unwrap() {
        assert_eq!(p.sq_dist.into_inner(), rat(1, 8));
    }
    assert!(check_optimal(&fam));
    assert_eq!(OffsetFamily::construct(3).unwrap().u, fam.u);
}

#[test]
fn alternative_field_choices_stay_optimal() {
    let base = FieldTable::new(4).unwrap();
    for f in [
        base.clone().with_alpha(3).unwrap(),
        base.clone().with_ordering(vec![0, 1, 3, 2]).unwrap(),
        base.with_ordering(vec![0, 2, 1, 3]).unwrap().with_alpha(3).unwrap(),
    ] {
        let fam = offsets_from_matrix(&log_matrix(&f)).unwrap();
        assert!(check_optimal(&fam));
    }
    for (q, alphas) in [(5u64, vec![2, 3]), (7, vec![3, 5]), (9, vec![4, 5])] {
        for a in alphas {
            let f = FieldTable::new(q).unwrap().with_alpha(a).unwrap();
            assert!(check_optimal(&offsets_from_matrix(&log_matrix(&f)).unwrap()), "q = {q}, alpha = {a}");
        }
    }
}

#[test]
fn perturbation_breaks_optimality() {
    let fam = OffsetFamily::construct(5).unwrap();
    let mut u = fam.u.clone();
    let mut c = u[1].clone().into_inner();
    c[0] += rat(1, 7);
    c[2] -= rat(1, 7);
    u[1] = RatVec::new(c);
    let bent = OffsetFamily::new(5, u).unwrap();
    assert!(!check_optimal(&bent));
    assert!(all_pairs(&bent).unwrap().iter().any(|p| *p.sq_dist.value() < max_sq_dist(3)));
    assert!(!check_optimal(&OffsetFamily::zero(5).unwrap()));
}

/// Squared distance between the lines `a + R p` and `b + R q` through
/// exact least squares.
fn line_line_sq_dist(a: &RatVec, p: &RatVec, b: &RatVec, q: &RatVec) -> Rat {
    let d = a - b;
    let (pp, pq, qq) = (p.dot(p), p.dot(q), q.dot(q));
    let (dp, dq) = (d.dot(p), d.dot(q));
    // minimise |d + t p - s q|^2
    let det = &pp * &qq - &pq * &pq;
    let t = (&pq * &dq - &qq * &dp) / &det;
    let s = (&pp * &dq - &pq * &dp) / &det;
    (&(&d + &p.scale(&t)) - &q.scale(&s)).norm_sq()
}

/// Minimum over lattice translates `P ∈ A_n` with coordinates in `-r..=r`.
fn brute_force_pair(fam: &OffsetFamily, i: usize, j: usize, r: i64) -> Rat {
    let m = fam.n + 1;
    let mut best: Option<Rat> = None;
    let span = (2 * r + 1) as usize;
    for code in 0..span.pow((m - 1) as u32) {
        let mut z = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m - 1 {
            z.push((rest % span) as i64 - r);
            rest /= span;
        }
        z.push(-z.iter().sum::<i64>());
        let p = RatVec::from_ints(&z);
        let d = line_line_sq_dist(&(&fam.u[i] + &p), &fam.v[i], &fam.u[j], &fam.v[j]);
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    best.unwrap()
}

#[test]
fn pair_distances_match_explicit_lines() {
    let perturbed = {
        let fam = OffsetFamily::construct(4).unwrap();
        let mut u = fam.u.clone();
        let mut c = u[2].clone().into_inner();
        c[0] += rat(1, 5);
        c[1] -= rat(1, 5);
        u[2] = RatVec::new(c);
        OffsetFamily::new(4, u).unwrap()
    };
    let cases = [
        (OffsetFamily::construct(3).unwrap(), 2),
        (OffsetFamily::construct(4).unwrap(), 2),
        (perturbed, 2),
        (OffsetFamily::zero(4).unwrap(), 1),
        (OffsetFamily::construct(5).unwrap(), 1),
    ];
    for (fam, r) in &cases {
        for i in 0..=fam.n {
            for j in i + 1..=fam.n {
                let w = pair_min_sq_dist(fam, i, j).unwrap();
                assert_eq!(w.sq_dist.value(), &brute_force_pair(fam, i, j, *r), "n = {}, ({i}, {j})", fam.n);
            }
        }
    }
}

#[test]
fn pair_errors() {
    let fam = OffsetFamily::construct(4).unwrap();
    assert!(matches!(pair_min_sq_dist(&fam, 1, 1), Err(Error::SameIndex(1))));
    assert!(pair_min_sq_dist(&fam, 0, 5).is_err());
}

#[test]
fn parallel_crossover_at_thirteen() {
    for n in 3..=20usize {
        assert_eq!(parallel_is_closer(n).unwrap(), n >= 13, "n = {n}");
    }
    assert!(Rat::zero() < max_sq_dist(1));
}
