use std::sync::Arc;

use serde_json::{json, Value};

use super::MonoidalError;
use crate::dblcat::DfOperad;
use crate::fincat::{representable_of, CatFunctor, ProfCell, Profunctor};
use crate::finset::FinMap;

/// A representation `Φ_f ≅ MJ(f_! -, -)`: the functor `f_!`, a universal
/// element `u_X ∈ Φ_f(X, f_! X)` per object and the resulting iso cell
/// `MJ(f_! X, Y) -> Φ_f(X, Y)`, `h ↦ u_X · h`.
#[derive(Debug, Clone)]
pub struct TensorWitness {
    pub map: FinMap,
    pub functor: CatFunctor,
    pub universal: Vec<usize>,
    pub iso: ProfCell,
}

impl TensorWitness {
    pub fn to_json(&self) -> Value {
        let mi = self.functor.source();
        let mj = self.functor.target();
        let tensor: serde_json::Map<String, Value> = (0..mi.object_count())
            .map(|x| {
                let r = self.functor.obj(x);
                (mi.objects()[x].clone(), json!({"object": mj.objects()[r], "universal": self.universal[x]}))
            })
            .collect();
        json!({"map": self.map.to_json(), "tensor": tensor})
    }
}

/// Whether `h ↦ u · h` is a bijection `MJ(r, Y) -> Φ(x, Y)` for every `Y`.
pub(crate) fn is_universal(phi: &Profunctor, x: usize, r: usize, u: usize) -> bool {
    let mj = phi.target();
    if u >= phi.size(x, r) {
        return false;
    }
    let mut seen = Vec::new();
    (0..mj.object_count()).all(|y| {
        let hom = mj.hom(r, y);
        if hom.len() != phi.size(x, y) {
            return false;
        }
        seen.clear();
        seen.resize(hom.len(), false);
        hom.iter().all(|&h| !std::mem::replace(&mut seen[phi.act_right(x, h, u)], true))
    })
}

/// Searches a universal element for every object of `MI`, objects `R` of
/// `MJ` in order and elements in table order, the first one winning; `f_!`
/// on arrows is forced by universality.
pub fn find_representing_functor(d: &DfOperad, f: &FinMap, budget: u64) -> Result<TensorWitness, MonoidalError> {
    let phi = d.proarrow(f)?;
    let (mi, mj) = (phi.source().clone(), phi.target().clone());
    let mut spent = 0u64;
    let mut objs = Vec::with_capacity(mi.object_count());
    let mut universal = Vec::with_capacity(mi.object_count());
    for x in 0..mi.object_count() {
        let mut found = None;
        'search: for r in 0..mj.object_count() {
            for u in 0..phi.size(x, r) {
                spent += 1;
                if spent > budget {
                    return Err(MonoidalError::SearchBudgetExceeded { budget });
                }
                if is_universal(&phi, x, r, u) {
                    found = Some((r, u));
                    break 'search;
                }
            }
        }
        let (r, u) = found.ok_or_else(|| MonoidalError::NotRepresentable {
            map: f.to_string(),
            object: mi.objects()[x].clone(),
        })?;
        objs.push(r);
        universal.push(u);
    }
    // c: x1 -> x goes to the unique h with u_{x1} · h = c · u_x
    let arrs = (0..mi.arrow_count())
        .map(|c| {
            let (x1, x) = (mi.source(c), mi.target(c));
            let want = phi.act_left(c, objs[x], universal[x]);
            mj.hom(objs[x1], objs[x])
                .iter()
                .copied()
                .find(|&h| phi.act_right(x1, h, universal[x1]) == want)
                .expect("universality forces the arrow")
        })
        .collect();
    let functor = CatFunctor::new(mi.clone(), mj.clone(), objs, arrs)?;
    let iso = witness_cell(&phi, &functor, &universal)?;
    Ok(TensorWitness {
        map: f.clone(),
        functor,
        universal,
        iso,
    })
}

pub(crate) fn witness_cell(
    phi: &Arc<Profunctor>,
    functor: &CatFunctor,
    universal: &[usize],
) -> Result<ProfCell, MonoidalError> {
    let (mi, mj) = (phi.source().clone(), phi.target().clone());
    let rep = Arc::new(representable_of(functor));
    Ok(ProfCell::from_fn(
        rep,
        phi.clone(),
        CatFunctor::identity(mi),
        CatFunctor::identity(mj.clone()),
        |x, y, e| phi.act_right(x, mj.hom(functor.obj(x), y)[e], universal[x]),
    )?)
}

/// One witness per site map, in map id order.
pub fn tensor_witnesses(d: &DfOperad, budget: u64) -> Result<Vec<TensorWitness>, MonoidalError> {
    d.site().maps().iter().map(|f| find_representing_functor(d, f, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::df_from_multicat;
    use crate::dblcat::BoundedSite;
    use crate::fincat::{check_cell, is_bijective_cell, DEFAULT_BUDGET};
    use crate::multicat::{discrete_multicat, identities_only_multicat, CommMonoid};

    fn site() -> Arc<BoundedSite> {
        Arc::new(BoundedSite::new(2).unwrap())
    }

    #[test]
    fn z2_tensor_is_addition() {
        let s = site();
        let d = df_from_multicat(Arc::new(discrete_multicat(&CommMonoid::cyclic(2), 2)), s.clone()).unwrap();
        let f = s.map(s.maps_between(2, 1).start);
        let w = find_representing_functor(&d, f, DEFAULT_BUDGET).unwrap();
        // objects of M^2 in radix order
        assert_eq!(w.functor.obj_map(), &[0, 1, 1, 0]);
        assert!(check_cell(&w.iso).is_ok());
        assert!(is_bijective_cell(&w.iso));
    }

    #[test]
    fn identity_tensor() {
        let s = site();
        let d = df_from_multicat(Arc::new(discrete_multicat(&CommMonoid::cyclic(3), 2)), s.clone()).unwrap();
        let w = find_representing_functor(&d, s.map(s.identity_id(2)), DEFAULT_BUDGET).unwrap();
        assert!(w.functor.obj_map().iter().enumerate().all(|(x, &r)| x == r));
    }

    #[test]
    fn identities_only_is_not_representable() {
        let s = site();
        let m = identities_only_multicat(vec!["a".into(), "b".into()], 2);
        let d = df_from_multicat(Arc::new(m), s.clone()).unwrap();
        let err = find_representing_functor(&d, s.map(s.maps_between(2, 1).start), DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, MonoidalError::NotRepresentable { .. }));
    }

    #[test]
    fn budget_is_enforced() {
        let s = site();
        let d = df_from_multicat(Arc::new(discrete_multicat(&CommMonoid::cyclic(2), 2)), s.clone()).unwrap();
        let err = find_representing_functor(&d, s.map(s.maps_between(2, 1).start), 1).unwrap_err();
        assert!(matches!(err, MonoidalError::SearchBudgetExceeded { .. }));
    }
}
