use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::cell::ProfCell;
use super::functor::CatFunctor;
use super::profunctor::{element_generators, same_cat, Profunctor, Sides};

/// Candidate extensions tried before a search gives up.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Why two structures are not isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Fibers over `(x, y)` have different sizes.
    FiberSize {
        x: String,
        y: String,
        left: usize,
        right: usize,
    },
    /// `D(Fx, Gx)` contains no isomorphism.
    NoIsoAt { object: String },
    /// Every candidate family was tried and none was natural.
    Naturality { explored: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoSearchError {
    #[error("not isomorphic: {0:?}")]
    NotIsomorphic(Obstruction),
    #[error("search budget of {budget} exhausted with {assigned} of {total} positions fixed")]
    BudgetExceeded {
        budget: u64,
        assigned: usize,
        total: usize,
    },
    #[error("not parallel: {0}")]
    NotParallel(String),
}

impl IsoSearchError {
    pub fn to_json(&self) -> Value {
        match self {
            IsoSearchError::NotIsomorphic(o) => json!({"not_isomorphic": o}),
            IsoSearchError::BudgetExceeded {
                budget,
                assigned,
                total,
            } => json!({"budget_exceeded": {"budget": budget, "assigned": assigned, "total": total}}),
            IsoSearchError::NotParallel(s) => json!({"not_parallel": s}),
        }
    }
}

/// A natural isomorphism `F ≅ G`; `components[x]` is an arrow `Fx -> Gx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatIso {
    pub source: CatFunctor,
    pub target: CatFunctor,
    pub components: Vec<usize>,
}

impl NatIso {
    pub fn to_json(&self) -> Value {
        let c = self.source.source();
        let d = self.source.target();
        let comps: serde_json::Map<String, Value> = self
            .components
            .iter()
            .enumerate()
            .map(|(x, &a)| (c.objects()[x].clone(), Value::String(d.arrow(a).name.clone())))
            .collect();
        json!({ "components": comps })
    }
}

/// Checks that `components` is a natural isomorphism `F ≅ G`; on failure
/// names the offending object or generating arrow.
pub fn check_nat_iso(f: &CatFunctor, g: &CatFunctor, components: &[usize]) -> Result<(), String> {
    let (c, d) = (f.source(), f.target());
    if components.len() != c.object_count() {
        return Err("component count".into());
    }
    for (x, &a) in components.iter().enumerate() {
        if d.source(a) != f.obj(x) || d.target(a) != g.obj(x) {
            return Err(format!("component at {} has the wrong type", c.objects()[x]));
        }
        if !d.is_iso(a) {
            return Err(format!("component at {} is not invertible", c.objects()[x]));
        }
    }
    for &m in c.generators() {
        let (s, t) = (c.source(m), c.target(m));
        if d.comp(g.arr(m), components[s]) != d.comp(components[t], f.arr(m)) {
            return Err(format!("naturality fails at {}", c.arrow(m).name));
        }
    }
    Ok(())
}

/// Object-by-object search over invertible components, pruned by
/// naturality on generating arrows between objects already fixed.
pub fn find_natural_iso(f: &CatFunctor, g: &CatFunctor, budget: u64) -> Result<NatIso, IsoSearchError> {
    if !same_cat(f.source(), g.source()) || !same_cat(f.target(), g.target()) {
        return Err(IsoSearchError::NotParallel(format!(
            "{} -> {} vs {} -> {}",
            f.source().name(),
            f.target().name(),
            g.source().name(),
            g.target().name()
        )));
    }
    let (c, d) = (f.source().clone(), f.target().clone());
    let n = c.object_count();
    let mut candidates = Vec::with_capacity(n);
    for x in 0..n {
        let isos: Vec<usize> = d
            .hom(f.obj(x), g.obj(x))
            .iter()
            .copied()
            .filter(|&a| d.is_iso(a))
            .collect();
        if isos.is_empty() {
            return Err(IsoSearchError::NotIsomorphic(Obstruction::NoIsoAt {
                object: c.objects()[x].clone(),
            }));
        }
        candidates.push(isos);
    }
    // generators checked once both endpoints are fixed, i.e. at the later one
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &m in c.generators() {
        checks[c.source(m).max(c.target(m))].push(m);
    }
    let mut chosen = vec![usize::MAX; n];
    let mut spent = 0u64;
    let mut deepest = 0usize;

    fn go(
        x: usize,
        s: &NatState<'_>,
        chosen: &mut Vec<usize>,
        spent: &mut u64,
        deepest: &mut usize,
    ) -> Option<bool> {
        if x == chosen.len() {
            return Some(true);
        }
        *deepest = (*deepest).max(x);
        for &a in &s.candidates[x] {
            *spent += 1;
            if *spent > s.budget {
                return None;
            }
            chosen[x] = a;
            let ok = s.checks[x].iter().all(|&m| {
                let (src, tgt) = (s.c.source(m), s.c.target(m));
                s.d.comp(s.g.arr(m), chosen[src]) == s.d.comp(chosen[tgt], s.f.arr(m))
            });
            if ok && go(x + 1, s, chosen, spent, deepest)? {
                return Some(true);
            }
        }
        chosen[x] = usize::MAX;
        Some(false)
    }

    struct NatState<'a> {
        c: &'a super::FinCat,
        d: &'a super::FinCat,
        f: &'a CatFunctor,
        g: &'a CatFunctor,
        candidates: Vec<Vec<usize>>,
        checks: Vec<Vec<usize>>,
        budget: u64,
    }

    let st = NatState {
        c: &c,
        d: &d,
        f,
        g,
        candidates,
        checks,
        budget,
    };
    match go(0, &st, &mut chosen, &mut spent, &mut deepest) {
        Some(true) => Ok(NatIso {
            source: f.clone(),
            target: g.clone(),
            components: chosen,
        }),
        Some(false) => Err(IsoSearchError::NotIsomorphic(Obstruction::Naturality {
            explored: spent,
        })),
        None => Err(IsoSearchError::BudgetExceeded {
            budget,
            assigned: deepest,
            total: n,
        }),
    }
}

struct ProfSearch<'a> {
    phi: &'a Profunctor,
    psi: &'a Profunctor,
    map: Vec<u32>,
    used: Vec<bool>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl ProfSearch<'_> {
    fn set(&mut self, i: usize, j: usize) -> bool {
        let cur = self.map[i];
        if cur != u32::MAX {
            return cur as usize == j;
        }
        if self.used[j] {
            return false;
        }
        self.map[i] = j as u32;
        self.used[j] = true;
        self.trail.push(i);
        self.queue.push(i);
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().expect("trail is longer than mark");
            self.used[self.map[i] as usize] = false;
            self.map[i] = u32::MAX;
        }
        self.queue.clear();
    }

    /// Fixes `i ↦ j` and closes under the generating actions; false on a
    /// clash with an earlier value or with injectivity.
    fn assign(&mut self, i: usize, j: usize) -> bool {
        if !self.set(i, j) {
            return false;
        }
        let (c, d) = (self.phi.source().clone(), self.phi.target().clone());
        while let Some(i) = self.queue.pop() {
            let j = self.map[i] as usize;
            let (x, y, e) = self.phi.unflat(i);
            let e2 = self.psi.unflat(j).2;
            for &m in c.generators() {
                if c.target(m) != x {
                    continue;
                }
                let s = c.source(m);
                let i2 = self.phi.flat(s, y, self.phi.act_left(m, y, e));
                let j2 = self.psi.flat(s, y, self.psi.act_left(m, y, e2));
                if !self.set(i2, j2) {
                    return false;
                }
            }
            for &m in d.generators() {
                if d.source(m) != y {
                    continue;
                }
                let t = d.target(m);
                let i2 = self.phi.flat(x, t, self.phi.act_right(x, m, e));
                let j2 = self.psi.flat(x, t, self.psi.act_right(x, m, e2));
                if !self.set(i2, j2) {
                    return false;
                }
            }
        }
        true
    }
}

/// Searches for a family of bijections `Φ(x,y) ≅ Ψ(x,y)` natural in both
/// variables, returned as a cell over identity functors.
///
/// Fiber sizes are compared first. The search then fixes images of a
/// minimum set of two-sided orbit generators of `Φ`; every other value is
/// forced by propagation along generating arrows, which also checks
/// naturality on every edge.
pub fn find_profunctor_iso(
    phi: &Arc<Profunctor>,
    psi: &Arc<Profunctor>,
    budget: u64,
) -> Result<ProfCell, IsoSearchError> {
    if !same_cat(phi.source(), psi.source()) || !same_cat(phi.target(), psi.target()) {
        return Err(IsoSearchError::NotParallel(format!("{phi:?} vs {psi:?}")));
    }
    let (c, d) = (phi.source().clone(), phi.target().clone());
    for x in 0..c.object_count() {
        for y in 0..d.object_count() {
            if phi.size(x, y) != psi.size(x, y) {
                return Err(IsoSearchError::NotIsomorphic(Obstruction::FiberSize {
                    x: c.objects()[x].clone(),
                    y: d.objects()[y].clone(),
                    left: phi.size(x, y),
                    right: psi.size(x, y),
                }));
            }
        }
    }
    let gens = element_generators(phi, Sides::Both);
    let mut st = ProfSearch {
        phi,
        psi,
        map: vec![u32::MAX; phi.total()],
        used: vec![false; psi.total()],
        trail: Vec::new(),
        queue: Vec::new(),
    };
    let mut spent = 0u64;
    let mut deepest = 0usize;

    fn go(
        k: usize,
        gens: &[(usize, usize, usize)],
        st: &mut ProfSearch<'_>,
        spent: &mut u64,
        deepest: &mut usize,
        budget: u64,
    ) -> Option<bool> {
        let Some(&(x, y, e)) = gens.get(k) else {
            return Some(true);
        };
        *deepest = (*deepest).max(st.trail.len());
        let i = st.phi.flat(x, y, e);
        if st.map[i] != u32::MAX {
            return go(k + 1, gens, st, spent, deepest, budget);
        }
        for e2 in 0..st.psi.size(x, y) {
            let j = st.psi.flat(x, y, e2);
            if st.used[j] {
                continue;
            }
            *spent += 1;
            if *spent > budget {
                return None;
            }
            let mark = st.trail.len();
            if st.assign(i, j) && go(k + 1, gens, st, spent, deepest, budget)? {
                return Some(true);
            }
            st.undo(mark);
        }
        Some(false)
    }

    match go(0, &gens, &mut st, &mut spent, &mut deepest, budget) {
        Some(true) => {
            let map = st.map;
            ProfCell::from_fn(
                phi.clone(),
                psi.clone(),
                CatFunctor::identity(c),
                CatFunctor::identity(d),
                |x, y, e| psi.unflat(map[phi.flat(x, y, e)] as usize).2,
            )
            .map_err(|e| IsoSearchError::NotParallel(e.to_string()))
        }
        Some(false) => Err(IsoSearchError::NotIsomorphic(Obstruction::Naturality {
            explored: spent,
        })),
        None => Err(IsoSearchError::BudgetExceeded {
            budget,
            assigned: deepest,
            total: phi.total(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{
        check_cell, compose_profunctors, hom_profunctor, is_bijective_cell, power_category,
        representable_of, sum_profunctor, FinCat,
    };
    use crate::finset::FinSet;

    fn swap_d2() -> (Arc<FinCat>, CatFunctor) {
        let d = Arc::new(FinCat::discrete("D", vec!["a".into(), "b".into()]));
        let swap = CatFunctor::new(d.clone(), d.clone(), vec![1, 0], vec![1, 0]).unwrap();
        (d, swap)
    }

    #[test]
    fn profunctor_iso_with_itself() {
        let c = Arc::new(FinCat::chain(3));
        let h = Arc::new(hom_profunctor(&c));
        let cell = find_profunctor_iso(&h, &h, DEFAULT_BUDGET).unwrap();
        assert!(check_cell(&cell).is_ok());
        assert!(is_bijective_cell(&cell));
    }

    #[test]
    fn fiber_sizes_obstruct() {
        let c = Arc::new(FinCat::chain(2));
        let h = Arc::new(hom_profunctor(&c));
        let hh = Arc::new(sum_profunctor(&h, &h).unwrap());
        let err = find_profunctor_iso(&h, &hh, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(
            err,
            IsoSearchError::NotIsomorphic(Obstruction::FiberSize { left: 1, right: 2, .. })
        ));
    }

    #[test]
    fn naturality_obstructs_equal_fiber_sizes() {
        // over Z/2: the trivial action on two points vs the free action
        let z2 = Arc::new(
            FinCat::monoid("Z2", vec!["e".into(), "s".into()], &[vec![0, 1], vec![1, 0]], 0).unwrap(),
        );
        let t = Arc::new(FinCat::terminal());
        let triv = Arc::new(
            Profunctor::from_fn(z2.clone(), t.clone(), |_, _| 2, |_, _, e| e, |_, _, e| e).unwrap(),
        );
        let free = Arc::new(
            Profunctor::from_fn(z2.clone(), t.clone(), |_, _| 2, |a, _, e| if a == 1 { 1 - e } else { e }, |_, _, e| e)
                .unwrap(),
        );
        let err = find_profunctor_iso(&triv, &free, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, IsoSearchError::NotIsomorphic(Obstruction::Naturality { .. })));
    }

    #[test]
    fn representables_of_isomorphic_functors() {
        // two isomorphic objects of a non-skeletal category
        let c = Arc::new(FinCat::poset("iso2", vec!["p".into(), "q".into()], |_, _| true));
        let t = Arc::new(FinCat::terminal());
        let fp = CatFunctor::constant(t.clone(), c.clone(), 0);
        let fq = CatFunctor::constant(t.clone(), c.clone(), 1);
        let a = Arc::new(representable_of(&fp));
        let b = Arc::new(representable_of(&fq));
        let cell = find_profunctor_iso(&a, &b, DEFAULT_BUDGET).unwrap();
        assert!(check_cell(&cell).is_ok() && is_bijective_cell(&cell));
        assert!(find_natural_iso(&fp, &fq, DEFAULT_BUDGET).is_ok());
    }

    #[test]
    fn unit_laws_for_hom() {
        let c = Arc::new(FinCat::chain(3));
        let h = Arc::new(hom_profunctor(&c));
        let comp = compose_profunctors(&h, &h).unwrap();
        let p = Arc::new(comp.profunctor.clone());
        assert!(find_profunctor_iso(&p, &h, DEFAULT_BUDGET).is_ok());
    }

    #[test]
    fn natural_iso_with_itself() {
        let c = Arc::new(FinCat::chain(3));
        let id = CatFunctor::identity(c.clone());
        let n = find_natural_iso(&id, &id, DEFAULT_BUDGET).unwrap();
        assert_eq!(n.components, c.identities());
        assert!(check_nat_iso(&id, &id, &n.components).is_ok());
    }

    #[test]
    fn different_object_images_in_skeletal_category() {
        let c = Arc::new(FinCat::chain(2));
        let t = Arc::new(FinCat::terminal());
        let a = CatFunctor::constant(t.clone(), c.clone(), 0);
        let b = CatFunctor::constant(t.clone(), c.clone(), 1);
        let err = find_natural_iso(&a, &b, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, IsoSearchError::NotIsomorphic(Obstruction::NoIsoAt { .. })));
    }

    #[test]
    fn fiberwise_joins_agree_up_to_reordering() {
        // V = chain2 with a duplicated top: objects 0, 1, 1' with 1 ≅ 1'
        let v = Arc::new(FinCat::poset(
            "L",
            vec!["0".into(), "1".into(), "1'".into()],
            |x, y| x == 0 || y != 0,
        ));
        let two = FinSet::canonical(2);
        let p = Arc::new(power_category(&v, &two).unwrap());
        // join of the two coordinates, landing in either copy of the top
        let join = |top: usize| {
            let objs: Vec<usize> = (0..p.object_count())
                .map(|o| {
                    let (a, b) = (o / 3, o % 3);
                    if a == 0 && b == 0 {
                        0
                    } else {
                        top
                    }
                })
                .collect();
            let arrs: Vec<usize> = (0..p.arrow_count())
                .map(|m| {
                    let (s, t) = (objs[p.source(m)], objs[p.target(m)]);
                    v.hom(s, t)[0]
                })
                .collect();
            CatFunctor::new(p.clone(), v.clone(), objs, arrs).unwrap()
        };
        let (j1, j2) = (join(1), join(2));
        let n = find_natural_iso(&j1, &j2, DEFAULT_BUDGET).unwrap();
        assert!(check_nat_iso(&j1, &j2, &n.components).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        let (d, _) = swap_d2();
        let h = Arc::new(hom_profunctor(&d));
        let err = find_profunctor_iso(&h, &h, 0).unwrap_err();
        assert!(matches!(err, IsoSearchError::BudgetExceeded { .. }));
    }
}
