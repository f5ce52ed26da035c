use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::cat::{power_category, FinCat};
use super::FinCatError;
use crate::finset::FinMap;
use crate::radix;

/// A functor between finite categories, given on objects and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<usize>,
    arr_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FunctorViolation {
    Endpoints { arrow: String },
    Identity { object: String },
    Composite { g: String, f: String },
}

impl CatFunctor {
    /// Builds a functor after checking that arrow images have the right
    /// endpoints. Preservation of identities and composites is left to
    /// [`check_functor`].
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<usize>,
        arr_map: Vec<usize>,
    ) -> Result<Self, FinCatError> {
        if obj_map.len() != source.object_count() || arr_map.len() != source.arrow_count() {
            return Err(FinCatError::Invalid(format!(
                "functor {} -> {}: table sizes do not match the source",
                source.name(),
                target.name()
            )));
        }
        if obj_map.iter().any(|&o| o >= target.object_count())
            || arr_map.iter().any(|&a| a >= target.arrow_count())
        {
            return Err(FinCatError::Invalid(format!(
                "functor {} -> {}: image out of range",
                source.name(),
                target.name()
            )));
        }
        for (a, info) in source.arrows().iter().enumerate() {
            let fa = arr_map[a];
            if target.source(fa) != obj_map[info.source] || target.target(fa) != obj_map[info.target] {
                return Err(FinCatError::Invalid(format!(
                    "functor {} -> {}: image of {} has wrong endpoints",
                    source.name(),
                    target.name(),
                    info.name
                )));
            }
        }
        Ok(CatFunctor {
            source,
            target,
            obj_map,
            arr_map,
        })
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        CatFunctor {
            obj_map: (0..c.object_count()).collect(),
            arr_map: (0..c.arrow_count()).collect(),
            source: c.clone(),
            target: c,
        }
    }

    /// The functor constant at an object of the target.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, object: usize) -> Self {
        let id = target.identity(object);
        CatFunctor {
            obj_map: vec![object; source.object_count()],
            arr_map: vec![id; source.arrow_count()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn arr(&self, a: usize) -> usize {
        self.arr_map[a]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &[usize] {
        &self.arr_map
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.name(),
            "target": self.target.name(),
            "objects": self.obj_map.iter().enumerate()
                .map(|(x, &y)| [self.source.objects()[x].clone(), self.target.objects()[y].clone()])
                .collect::<Vec<_>>(),
        })
    }
}

/// Diagrammatic composite: first `f`, then `g`.
pub fn compose_functors(f: &CatFunctor, g: &CatFunctor) -> Result<CatFunctor, FinCatError> {
    if f.target != g.source {
        return Err(FinCatError::MismatchedEndpoints {
            left: f.target.name().to_string(),
            right: g.source.name().to_string(),
        });
    }
    Ok(CatFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        obj_map: f.obj_map.iter().map(|&x| g.obj_map[x]).collect(),
        arr_map: f.arr_map.iter().map(|&a| g.arr_map[a]).collect(),
    })
}

/// Whether two functors agree on objects and arrows.
pub fn functors_equal(f: &CatFunctor, g: &CatFunctor) -> bool {
    f.obj_map == g.obj_map && f.arr_map == g.arr_map
}

pub fn check_functor(f: &CatFunctor) -> Result<(), FunctorViolation> {
    let (s, t) = (&f.source, &f.target);
    for (a, info) in s.arrows().iter().enumerate() {
        let fa = f.arr_map[a];
        if t.source(fa) != f.obj_map[info.source] || t.target(fa) != f.obj_map[info.target] {
            return Err(FunctorViolation::Endpoints {
                arrow: info.name.clone(),
            });
        }
    }
    for x in 0..s.object_count() {
        if f.arr_map[s.identity(x)] != t.identity(f.obj_map[x]) {
            return Err(FunctorViolation::Identity {
                object: s.objects()[x].clone(),
            });
        }
    }
    let n = s.arrow_count();
    for g in 0..n {
        for a in 0..n {
            if let Some(ga) = s.compose(g, a) {
                if f.arr_map[ga] != t.comp(f.arr_map[g], f.arr_map[a]) {
                    return Err(FunctorViolation::Composite {
                        g: s.arrow(g).name.clone(),
                        f: s.arrow(a).name.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The reindexing functor `A^K -> A^J`, `X ↦ X ∘ l`, for `l: J -> K`.
pub fn reindex(base: &FinCat, l: &FinMap) -> Result<CatFunctor, FinCatError> {
    let src = Arc::new(power_category(base, l.target())?);
    let tgt = Arc::new(power_category(base, l.source())?);
    Ok(reindex_between(base, l, src, tgt))
}

/// As [`reindex`], with the two power categories supplied by the caller.
pub fn reindex_between(
    base: &FinCat,
    l: &FinMap,
    power_target_side: Arc<FinCat>,
    power_source_side: Arc<FinCat>,
) -> CatFunctor {
    let (no, na) = (base.object_count(), base.arrow_count());
    let (k, j) = (l.target().len(), l.source().len());
    let pick = |code: usize, base_size: usize| {
        let d = radix::decode_uniform(code, base_size, k);
        let picked: Vec<usize> = l.assignment().iter().map(|&t| d[t]).collect();
        radix::encode_uniform(&picked, base_size)
    };
    debug_assert_eq!(power_source_side.object_count(), no.pow(j as u32));
    let obj_map = (0..power_target_side.object_count()).map(|x| pick(x, no)).collect();
    let arr_map = (0..power_target_side.arrow_count()).map(|a| pick(a, na)).collect();
    CatFunctor {
        source: power_target_side,
        target: power_source_side,
        obj_map,
        arr_map,
    }
}

/// The comparison `A^{I+J} -> A^I x A^J` style functor into a product
/// category, from two functors out of a common source.
pub fn pairing(
    f: &CatFunctor,
    g: &CatFunctor,
    product: Arc<FinCat>,
) -> Result<CatFunctor, FinCatError> {
    if f.source != g.source {
        return Err(FinCatError::MismatchedEndpoints {
            left: f.source.name().to_string(),
            right: g.source.name().to_string(),
        });
    }
    let (nob, nab) = (g.target.object_count(), g.target.arrow_count());
    CatFunctor::new(
        f.source.clone(),
        product,
        (0..f.source.object_count())
            .map(|x| f.obj_map[x] * nob + g.obj_map[x])
            .collect(),
        (0..f.source.arrow_count())
            .map(|a| f.arr_map[a] * nab + g.arr_map[a])
            .collect(),
    )
}

/// Whether a functor is bijective on objects and on arrows.
pub fn is_isomorphism(f: &CatFunctor) -> bool {
    fn bijective(m: &[usize], n: usize) -> bool {
        if m.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }
    bijective(&f.obj_map, f.target.object_count()) && bijective(&f.arr_map, f.target.arrow_count())
}

/// All functors `source -> target`, by backtracking over object images and
/// generator images, in lexicographic order of the object map. Stops after
/// `limit` results.
pub fn all_functors(source: &Arc<FinCat>, target: &Arc<FinCat>, limit: usize) -> Vec<CatFunctor> {
    let mut out = Vec::new();
    let no = source.object_count();
    let mut objs = vec![0; no];
    if no == 0 {
        if let Ok(f) = CatFunctor::new(source.clone(), target.clone(), vec![], vec![]) {
            out.push(f);
        }
        return out;
    }
    if target.object_count() == 0 {
        return out;
    }
    loop {
        functors_over_objects(source, target, &objs, limit, &mut out);
        if out.len() >= limit {
            out.truncate(limit);
            return out;
        }
        // next object assignment
        let mut i = no;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            objs[i] += 1;
            if objs[i] < target.object_count() {
                break;
            }
            objs[i] = 0;
        }
    }
}

fn functors_over_objects(
    source: &Arc<FinCat>,
    target: &Arc<FinCat>,
    objs: &[usize],
    limit: usize,
    out: &mut Vec<CatFunctor>,
) {
    struct Search<'a> {
        source: &'a FinCat,
        target: &'a FinCat,
        choices: Vec<Vec<usize>>,
        assign: Vec<usize>,
    }
    impl Search<'_> {
        // composites among arrows assigned so far, involving arrow `upto`
        fn consistent(&self, upto: usize) -> bool {
            (0..=upto).all(|other| {
                [(upto, other), (other, upto)].iter().all(|&(g, f)| {
                    match self.source.compose(g, f) {
                        Some(gf) if gf <= upto => {
                            self.assign[gf] == self.target.comp(self.assign[g], self.assign[f])
                        }
                        _ => true,
                    }
                })
            })
        }

        fn run(&mut self, a: usize, emit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if a == self.choices.len() {
                return emit(&self.assign);
            }
            for i in 0..self.choices[a].len() {
                self.assign[a] = self.choices[a][i];
                if self.consistent(a) && !self.run(a + 1, emit) {
                    return false;
                }
            }
            true
        }
    }

    let n = source.arrow_count();
    let choices = (0..n)
        .map(|a| {
            if source.is_identity(a) {
                vec![target.identity(objs[source.source(a)])]
            } else {
                target
                    .hom(objs[source.source(a)], objs[source.target(a)])
                    .to_vec()
            }
        })
        .collect();
    let mut search = Search {
        source,
        target,
        choices,
        assign: vec![usize::MAX; n],
    };
    let mut emit = |arr: &[usize]| {
        out.push(CatFunctor {
            source: source.clone(),
            target: target.clone(),
            obj_map: objs.to_vec(),
            arr_map: arr.to_vec(),
        });
        out.len() < limit
    };
    search.run(0, &mut emit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::cat::check_category;
    use crate::finset::FinSet;

    #[test]
    fn reindex_examples() {
        let c = FinCat::chain(2);
        let ab = Arc::new(FinSet::new("AB", ["a", "b"]).unwrap());
        let id = reindex(&c, &FinMap::identity(ab.clone())).unwrap();
        assert!(functors_equal(&id, &CatFunctor::identity(id.source().clone())));

        let swap = FinMap::new(ab.clone(), ab.clone(), vec![1, 0]).unwrap();
        let s = reindex(&c, &swap).unwrap();
        // (0,1) ↦ (1,0)
        assert_eq!(s.obj(1), 2);
        let ss = compose_functors(&s, &s).unwrap();
        assert!(functors_equal(&ss, &CatFunctor::identity(s.source().clone())));

        let j = Arc::new(FinSet::new("J", ["j"]).unwrap());
        let k = Arc::new(FinSet::new("K", ["k1", "k2"]).unwrap());
        let pick2 = FinMap::new(j, k, vec![1]).unwrap();
        let p = reindex(&c, &pick2).unwrap();
        for x in 0..4 {
            assert_eq!(p.obj(x), x % 2, "second projection");
        }
        assert!(check_functor(&p).is_ok());
    }

    #[test]
    fn reindex_is_contravariant() {
        let c = FinCat::chain(2);
        let s2 = Arc::new(FinSet::canonical(2));
        let s3 = Arc::new(FinSet::canonical(3));
        let m = FinMap::new(s2.clone(), s3.clone(), vec![2, 0]).unwrap();
        let l = FinMap::new(s3.clone(), s2.clone(), vec![1, 1, 0]).unwrap();
        let ml = crate::finset::compose(&m, &l).unwrap();
        let lhs = reindex(&c, &ml).unwrap();
        let rhs = compose_functors(&reindex(&c, &l).unwrap(), &reindex(&c, &m).unwrap()).unwrap();
        assert!(functors_equal(&lhs, &rhs));
    }

    #[test]
    fn functor_enumeration() {
        let c2 = Arc::new(FinCat::chain(2));
        let fs = all_functors(&c2, &c2, 100);
        // monotone maps of a 2-chain to itself: 3
        assert_eq!(fs.len(), 3);
        for f in &fs {
            assert!(check_functor(f).is_ok());
        }
        let t = Arc::new(FinCat::terminal());
        assert!(check_category(&t).is_ok());
        assert_eq!(all_functors(&t, &c2, 100).len(), 2);
    }
}
