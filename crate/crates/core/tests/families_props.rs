use amls::families::{
    build_covering, build_intersection_family, family_size_bound, verify_family, FamilyKind, SetFamily,
    DEFAULT_FAMILY_LIMIT as L,
};
use proptest::prelude::*;

/// Every `p`-subset meets some member in at least (weak) or exactly (strong)
/// `r` elements, checked over raw bitmasks.
fn intersection_ok(n: usize, p: usize, r: usize, strong: bool, members: &[u64]) -> bool {
    (0u64..1 << n).filter(|m| m.count_ones() as usize == p).all(|t| {
        members.iter().any(|&x| {
            let i = (t & x).count_ones() as usize;
            if strong {
                i == r
            } else {
                i >= r
            }
        })
    })
}

fn covering_ok(n: usize, k: usize, members: &[u64]) -> bool {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .all(|s| members.iter().any(|&x| s & x == s))
}

fn valid_tuples(max_n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for p in 1..=n {
            for r in 1..=p {
                for q in r..=(n - p + r) {
                    out.push((n, p, q, r));
                }
            }
        }
    }
    out
}

#[test]
fn intersection_families_verify_and_respect_bound() {
    // Full range up to n = 9; a slice of larger universes keeps runtime low.
    let mut tuples = valid_tuples(9);
    tuples.extend(
        valid_tuples(12)
            .into_iter()
            .filter(|&(n, p, q, _)| n >= 10 && (p <= 3 || q <= 3 || p == n)),
    );
    for (n, p, q, r) in tuples {
        for strong in [false, true] {
            let mut f = build_intersection_family(n, p, q, r, strong, L).unwrap();
            assert!(f.members.iter().all(|m| m.count_ones() as usize == q && m >> n == 0));
            assert!(
                intersection_ok(n, p, r, strong, &f.members),
                "({n},{p},{q},{r}) strong={strong}"
            );
            assert!(verify_family(&mut f) && f.verified);
            if strong {
                assert!(intersection_ok(n, p, r, false, &f.members));
            }
            if n >= 2 {
                assert!(f.len() as f64 <= family_size_bound(n, p, q, r).unwrap());
            }
        }
    }
}

#[test]
fn coverings_verify_up_to_12() {
    for n in 0..=12 {
        for t in 0..=n {
            for k in 0..=t {
                if n >= 10 && k > 3 && t < n && k < t {
                    continue;
                }
                let mut f = build_covering(n, t, k, L).unwrap();
                assert!(covering_ok(n, k, &f.members), "({n},{t},{k})");
                assert!(verify_family(&mut f));
            }
        }
    }
}

#[test]
fn reverse_covering_agrees_with_covering_semantics() {
    // With r = q, "|T ∩ X| >= q" means X ⊆ T: every p-set contains a member.
    for (n, p, q, r) in valid_tuples(8).into_iter().filter(|&(_, _, q, r)| q == r) {
        let f = build_intersection_family(n, p, q, r, false, L).unwrap();
        let ok = (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == p)
            .all(|t| f.members.iter().any(|&x| x & !t == 0));
        assert!(ok, "({n},{p},{q})");
    }
}

#[test]
fn reference_families() {
    let f = build_covering(4, 3, 2, L).unwrap();
    assert_eq!(f.len(), 3);
    let f = build_intersection_family(4, 2, 2, 1, false, L).unwrap();
    assert!(f.len() <= 3);
    assert_eq!(build_intersection_family(5, 2, 2, 2, true, L).unwrap().len(), 10);
    assert_eq!(build_covering(5, 3, 1, L).unwrap().len(), 2);
    assert_eq!(build_covering(6, 6, 2, L).unwrap().members, vec![0b111111]);
    let bound = family_size_bound(4, 2, 2, 1).unwrap();
    assert!((bound - 1.5 * 3.0 * 4f64.ln() * (1.0 + 6f64.ln())).abs() < 1e-9);
    assert!(build_covering(15, 3, 2, L).is_err());
    assert!(build_intersection_family(5, 2, 5, 1, false, L).is_err());
}

#[test]
fn incomplete_family_fails_verification() {
    let mut f = build_intersection_family(4, 2, 2, 1, false, L).unwrap();
    f.members = vec![0b0011];
    assert!(!verify_family(&mut f));
    assert!(!f.verified);
    assert_eq!(f.kind, FamilyKind::IntersectionWeak);
}

proptest! {
    #[test]
    fn text_format_round_trips(n in 1usize..9, seed in 0usize..1000) {
        let tuples = valid_tuples(n);
        let (n, p, q, r) = tuples[seed % tuples.len()];
        let f = build_intersection_family(n, p, q, r, seed % 2 == 0, L).unwrap();
        let text = f.to_text();
        let back = SetFamily::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.members, f.members);
    }
}
