use std::sync::Arc;

use dfoperad::finset::{
    all_maps, check_extensive, compose, disjoint_sum, fiber_decompose, is_injective, is_pullback_square, is_sum,
    pullback, sum_of_maps, ExtensiveDiagram, FinMap, FinSet,
};
use proptest::prelude::*;

fn set(name: &str, n: usize) -> Arc<FinSet> {
    Arc::new(FinSet::new(name, (0..n).map(|i| format!("{name}{i}"))).unwrap())
}

/// A random map between fresh sets of the given sizes (target nonempty
/// whenever the source is).
fn map_strategy(src: &'static str, tgt: &'static str) -> impl Strategy<Value = FinMap> {
    (0usize..4, 1usize..4).prop_flat_map(move |(m, n)| {
        proptest::collection::vec(0..n, m)
            .prop_map(move |a| FinMap::new(set(src, m), set(tgt, n), a).unwrap())
    })
}

/// A cospan `A -f-> C <-g- B` with random sizes.
fn cospan() -> impl Strategy<Value = (FinMap, FinMap)> {
    (0usize..4, 0usize..4, 1usize..4).prop_flat_map(|(a, b, c)| {
        (proptest::collection::vec(0..c, a), proptest::collection::vec(0..c, b)).prop_map(move |(fa, ga)| {
            let cc = set("C", c);
            (
                FinMap::new(set("A", a), cc.clone(), fa).unwrap(),
                FinMap::new(set("B", b), cc, ga).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_universal((f, g) in cospan(), d in 0usize..3) {
        let w = pullback(&f, &g).unwrap();
        prop_assert!(is_pullback_square(&w.left, &w.right, &g, &f).unwrap());
        let expected: usize = (0..f.target().len()).map(|c| f.preimage(c).len() * g.preimage(c).len()).sum();
        prop_assert_eq!(w.apex.len(), expected);
        // every cone from a small set factors uniquely through the apex
        let dd = set("D", d);
        for p in all_maps(&dd, f.source()) {
            for q in all_maps(&dd, g.source()) {
                if compose(&p, &f).unwrap() != compose(&q, &g).unwrap() {
                    continue;
                }
                let factor = all_maps(&dd, &w.apex)
                    .into_iter()
                    .filter(|u| compose(u, &w.left).unwrap() == p && compose(u, &w.right).unwrap() == q)
                    .count();
                prop_assert_eq!(factor, 1);
            }
        }
    }

    #[test]
    fn pullback_is_symmetric((f, g) in cospan()) {
        let w = pullback(&f, &g).unwrap();
        let v = pullback(&g, &f).unwrap();
        prop_assert_eq!(w.apex.len(), v.apex.len());
        prop_assert!(is_pullback_square(&w.right, &w.left, &f, &g).unwrap());
    }

    #[test]
    fn sum_is_universal(a in 0usize..4, b in 0usize..4, t in 1usize..3) {
        let (aa, bb, tt) = (set("A", a), set("B", b), set("T", t));
        let s = disjoint_sum(&aa, &bb);
        prop_assert!(is_sum(&s.inj_left, &s.inj_right).unwrap());
        prop_assert_eq!(s.carrier.len(), a + b);
        for p in all_maps(&aa, &tt) {
            for q in all_maps(&bb, &tt) {
                let factor = all_maps(&s.carrier, &tt)
                    .into_iter()
                    .filter(|u| compose(&s.inj_left, u).unwrap() == p && compose(&s.inj_right, u).unwrap() == q)
                    .count();
                prop_assert_eq!(factor, 1);
            }
        }
    }

    #[test]
    fn fibers_reassemble(f in map_strategy("I", "J")) {
        let fibers = fiber_decompose(&f);
        prop_assert_eq!(fibers.len(), f.target().len());
        let mut covered = vec![0usize; f.source().len()];
        for fib in &fibers {
            prop_assert!(is_injective(&fib.inclusion));
            for &i in fib.inclusion.assignment() {
                covered[i] += 1;
                prop_assert_eq!(f.apply(i), fib.point);
            }
        }
        prop_assert!(covered.iter().all(|&c| c == 1));
    }

    #[test]
    fn composition_is_associative(f in map_strategy("A", "B"), n in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let c = set("C", n);
        let d = set("D", m);
        let g = FinMap::new(f.target().clone(), c.clone(), (0..f.target().len()).map(|i| (seed as usize + i) % n).collect()).unwrap();
        let h = FinMap::new(c, d, (0..n).map(|i| (seed as usize / 7 + 3 * i) % m).collect()).unwrap();
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose(&FinMap::identity(f.source().clone()), &f).unwrap(), f.clone());
    }

    #[test]
    fn sums_of_maps_are_extensive(f in map_strategy("I", "J"), g in map_strategy("K", "L")) {
        let (top, bottom, middle) = sum_of_maps(&f, &g);
        let v = check_extensive(&ExtensiveDiagram {
            bottom,
            top_left: top.inj_left,
            top_right: top.inj_right,
            left: f,
            middle,
            right: g,
        })
        .unwrap();
        prop_assert!(v.top_is_sum && v.left_is_pullback && v.right_is_pullback);
        prop_assert!(v.holds());
    }

    #[test]
    fn pullback_is_deterministic((f, g) in cospan()) {
        prop_assert_eq!(pullback(&f, &g).unwrap(), pullback(&f, &g).unwrap());
    }
}
