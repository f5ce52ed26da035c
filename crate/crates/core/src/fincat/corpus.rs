//! Small categories and seeded random profunctors and functors over them,
//! used for exhaustive algebra checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cat::FinCat;
use super::functor::{all_functors, CatFunctor};
use super::profunctor::{
    corepresentable_of, hom_profunctor, representable_of, same_cat, sum_profunctor, Profunctor,
};

const FUNCTOR_LIMIT: usize = 256;

/// Stock categories with at most three objects and at most two parallel
/// arrows.
pub fn categories() -> Vec<Arc<FinCat>> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let z2 = FinCat::monoid("Z2", names(&["e", "s"]), &[vec![0, 1], vec![1, 0]], 0)
        .expect("Z/2 table");
    let idem = FinCat::monoid("idem", names(&["e", "i"]), &[vec![0, 1], vec![1, 1]], 0)
        .expect("idempotent table");
    let pair = FinCat::new(
        "parallel",
        names(&["a", "b"]),
        vec![
            super::ArrowInfo {
                name: "id_a".into(),
                source: 0,
                target: 0,
            },
            super::ArrowInfo {
                name: "id_b".into(),
                source: 1,
                target: 1,
            },
            super::ArrowInfo {
                name: "u".into(),
                source: 0,
                target: 1,
            },
            super::ArrowInfo {
                name: "v".into(),
                source: 0,
                target: 1,
            },
        ],
        vec![0, 1],
        |g, f| {
            let src = [0, 1, 0, 0];
            let tgt = [0, 1, 1, 1];
            if tgt[f] != src[g] {
                None
            } else if f < 2 {
                Some(g)
            } else {
                Some(f)
            }
        },
    )
    .expect("parallel pair tables");
    let v = FinCat::poset("V", names(&["l", "r", "t"]), |x, y| x == y || y == 2);
    let cospan = FinCat::poset("span", names(&["b", "l", "r"]), |x, y| x == y || x == 0);
    vec![
        FinCat::terminal(),
        FinCat::chain(2),
        FinCat::chain(3),
        FinCat::discrete("disc2", names(&["a", "b"])),
        FinCat::discrete("disc3", names(&["a", "b", "c"])),
        z2,
        idem,
        pair,
        v,
        cospan,
    ]
    .into_iter()
    .map(Arc::new)
    .collect()
}

/// `Φ(x, y) = C(x, c) × D(d, y)`, pairs numbered `h * |D(d,y)| + k`.
pub fn free_bimodule(src: &Arc<FinCat>, tgt: &Arc<FinCat>, c: usize, d: usize) -> Profunctor {
    let (cc, dd) = (src.clone(), tgt.clone());
    let n = |y: usize| dd.hom(d, y).len();
    Profunctor::from_fn(
        src.clone(),
        tgt.clone(),
        |x, y| cc.hom(x, c).len() * n(y),
        |a, y, e| {
            let (h, k) = (e / n(y), e % n(y));
            let h2 = cc.hom_pos(cc.comp(cc.hom(cc.target(a), c)[h], a));
            h2 * n(y) + k
        },
        |_, b, e| {
            let (s, t) = (dd.source(b), dd.target(b));
            let (h, k) = (e / n(s), e % n(s));
            let k2 = dd.hom_pos(dd.comp(b, dd.hom(d, s)[k]));
            h * n(t) + k2
        },
    )
    .expect("free bimodule tables are in range")
}

fn random_functor(rng: &mut ChaCha8Rng, a: &Arc<FinCat>, b: &Arc<FinCat>) -> CatFunctor {
    let all = all_functors(a, b, FUNCTOR_LIMIT);
    all.choose(rng).cloned().expect("constant functors always exist")
}

/// A stock category chosen by `seed`.
pub fn seeded_category(seed: u64) -> Arc<FinCat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    categories().choose(&mut rng).expect("nonempty").clone()
}

/// A random profunctor `src ⇸ tgt`: a free bimodule, a representable or
/// corepresentable of a random functor, the hom profunctor, or a sum.
pub fn random_profunctor(
    rng: &mut ChaCha8Rng,
    src: &Arc<FinCat>,
    tgt: &Arc<FinCat>,
    depth: usize,
) -> Profunctor {
    let kind = rng.gen_range(0..if depth > 0 { 5 } else { 4 });
    match kind {
        0 => {
            let c = rng.gen_range(0..src.object_count());
            let d = rng.gen_range(0..tgt.object_count());
            free_bimodule(src, tgt, c, d)
        }
        1 => representable_of(&random_functor(rng, src, tgt)),
        2 => corepresentable_of(&random_functor(rng, tgt, src)),
        3 if same_cat(src, tgt) => hom_profunctor(src),
        3 => representable_of(&random_functor(rng, src, tgt)),
        _ => {
            let a = random_profunctor(rng, src, tgt, depth - 1);
            let b = random_profunctor(rng, src, tgt, depth - 1);
            sum_profunctor(&a, &b).expect("parallel summands")
        }
    }
}

/// `count` seeded random profunctors between random stock categories.
pub fn profunctors(seed: u64, count: usize) -> Vec<Arc<Profunctor>> {
    let cats = categories();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = cats.choose(&mut rng).expect("nonempty").clone();
            let b = cats.choose(&mut rng).expect("nonempty").clone();
            Arc::new(random_profunctor(&mut rng, &a, &b, 1))
        })
        .collect()
}

/// `count` seeded composable triples `Φ: A ⇸ B`, `Ψ: B ⇸ C`, `Ξ: C ⇸ D`.
pub fn composable_triples(seed: u64, count: usize) -> Vec<[Arc<Profunctor>; 3]> {
    let cats = categories();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c: Vec<Arc<FinCat>> = (0..4)
                .map(|_| cats.choose(&mut rng).expect("nonempty").clone())
                .collect();
            [0, 1, 2].map(|i| Arc::new(random_profunctor(&mut rng, &c[i], &c[i + 1], 1)))
        })
        .collect()
}

/// `count` seeded composable functor pairs `F: A -> B`, `G: B -> C`.
pub fn functor_pairs(seed: u64, count: usize) -> Vec<(CatFunctor, CatFunctor)> {
    let cats = categories();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c: Vec<Arc<FinCat>> = (0..3)
                .map(|_| cats.choose(&mut rng).expect("nonempty").clone())
                .collect();
            let f = random_functor(&mut rng, &c[0], &c[1]);
            let g = random_functor(&mut rng, &c[1], &c[2]);
            (f, g)
        })
        .collect()
}
