use dfoperad::finset::FinSet;
use dfoperad::multicat::{
    block_permutation, check_comm_monoid, check_multicat, discrete_multicat, endomorphism_multicat, monoid_corpus,
    shifted_permutation, CommMonoid, Profile,
};
use proptest::prelude::*;

#[test]
fn endomorphisms_of_three_points_at_arity_two() {
    let m = endomorphism_multicat(&FinSet::canonical(3), 2).unwrap();
    let r = check_multicat(&m).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(m.hom_size(&Profile::new(vec![0, 0], 0)), 3usize.pow(9));
}

#[test]
fn discrete_multicategories_recover_their_monoids() {
    for m in monoid_corpus() {
        assert!(check_comm_monoid(&m).passed(), "{}", m.name());
        let d = discrete_multicat(&m, 3);
        assert!(check_multicat(&d).unwrap().passed(), "{}", m.name());
        let back = d.discrete_monoid().expect("discrete");
        assert_eq!(back.table(), m.table(), "{}", m.name());
        assert_eq!(back.unit(), m.unit());
    }
}

#[test]
fn tabulation_preserves_the_laws() {
    let m = discrete_multicat(&CommMonoid::klein_four(), 3);
    let t = m.tabulate().unwrap();
    assert_eq!(check_multicat(&m).unwrap(), {
        let mut r = check_multicat(&t).unwrap();
        r.subject = format!("multicategory {}", m.name());
        r
    });
}

#[test]
fn noncommutative_table_is_rejected() {
    // left projection: associative with no unit, and not commutative
    let m = CommMonoid::from_fn("left", 2, |a, _| a, 0).unwrap();
    let r = check_comm_monoid(&m);
    assert!(!r.passed());
    assert!(r.witnesses().count() > 0);
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn block_permutations_are_permutations(sizes in proptest::collection::vec(0usize..3, 1..4), seed in any::<u64>()) {
        let n = sizes.len();
        let mut p: Vec<usize> = (0..n).collect();
        p.rotate_left(seed as usize % n);
        let q = block_permutation(&p, &sizes);
        let mut sorted = q.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..sizes.iter().sum()).collect::<Vec<_>>());
        // the identity on blocks is the identity on positions
        let id: Vec<usize> = (0..n).collect();
        prop_assert_eq!(block_permutation(&id, &sizes), (0..sizes.iter().sum()).collect::<Vec<_>>());
    }

    #[test]
    fn shifted_permutations_fix_the_outside(q in (1usize..4).prop_flat_map(permutation), before in 0usize..3, after in 0usize..3) {
        let total = before + q.len() + after;
        let s = shifted_permutation(&q, before, total);
        for r in (0..before).chain(before + q.len()..total) {
            prop_assert_eq!(s[r], r);
        }
        for (t, &v) in q.iter().enumerate() {
            prop_assert_eq!(s[before + t], before + v);
        }
    }

    #[test]
    fn profile_permutation_composes(p in permutation(3), q in permutation(3)) {
        let a = Profile::new(vec![0, 1, 2], 0);
        let pq: Vec<usize> = q.iter().map(|&t| p[t]).collect();
        prop_assert_eq!(a.permute(&p).permute(&q), a.permute(&pq));
    }
}
