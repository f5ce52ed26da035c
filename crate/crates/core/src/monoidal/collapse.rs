use petgraph::unionfind::UnionFind;

use super::bc::check_beck_chevalley;
use super::represent::TensorWitness;
use super::MonoidalError;
use crate::bridge::DfMonoid;
use crate::dblcat::DfOperad;
use crate::fincat::FinCat;

/// Isomorphism classes of a finite category: `class[x]` and one
/// representative (the least object) per class, classes ordered by
/// representative.
pub fn iso_classes(c: &FinCat) -> (Vec<usize>, Vec<usize>) {
    let n = c.object_count();
    let mut uf = UnionFind::<usize>::new(n);
    for a in 0..c.arrow_count() {
        if c.is_iso(a) {
            uf.union(c.source(a), c.target(a));
        }
    }
    let mut reps = Vec::new();
    let mut index = vec![usize::MAX; n];
    let class = (0..n)
        .map(|x| {
            let r = uf.find_mut(x);
            if index[r] == usize::MAX {
                index[r] = reps.len();
                reps.push(x);
            }
            index[r]
        })
        .collect();
    (class, reps)
}

/// The DF monoid `I ↦ |MI|` of a DF monoidal category: restriction and
/// transfer act on classes through `l*` and `f_!`. Refused unless the
/// Beck-Chevalley check passes.
pub fn iso_class_monoid(d: &DfOperad, witnesses: &[TensorWitness], budget: u64) -> Result<DfMonoid, MonoidalError> {
    let bc = check_beck_chevalley(d, witnesses, budget)?;
    if !bc.passed() {
        return Err(MonoidalError::BCViolation(Box::new(bc)));
    }
    let site = d.site().clone();
    let mut classes = Vec::new();
    let mut elements = Vec::new();
    for s in site.seeds() {
        let c = d.category(s)?;
        let (class, reps) = iso_classes(&c);
        elements.push(reps.iter().map(|&r| c.objects()[r].clone()).collect());
        classes.push((class, reps));
    }
    let mut restrict = Vec::with_capacity(site.map_count());
    let mut transfer = Vec::with_capacity(site.map_count());
    for (id, f) in site.maps().iter().enumerate() {
        let (i, j) = (f.source().len(), f.target().len());
        let ls = d.reindex(f)?;
        restrict.push(classes[j].1.iter().map(|&y| classes[i].0[ls.obj(y)]).collect());
        let push = &witnesses[id].functor;
        transfer.push(classes[i].1.iter().map(|&x| classes[j].0[push.obj(x)]).collect());
    }
    Ok(DfMonoid::new(site, format!("|{}|", d.name()), elements, restrict, transfer)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bridge::{check_df_monoid, df_from_multicat, mackey_from_monoid};
    use crate::dblcat::BoundedSite;
    use crate::fincat::DEFAULT_BUDGET;
    use crate::monoidal::{indexed_monoidal, tensor_witnesses, Mode};
    use crate::multicat::{discrete_multicat, CommMonoid};

    #[test]
    fn chain_collapses_to_or() {
        let s = Arc::new(BoundedSite::new(2).unwrap());
        let (d, ws) = indexed_monoidal(Arc::new(FinCat::chain(2)), Mode::Sums, s.clone()).unwrap();
        let fm = iso_class_monoid(&d, &ws, DEFAULT_BUDGET).unwrap();
        assert!(check_df_monoid(&fm).passed());
        let want = mackey_from_monoid(&CommMonoid::boolean_or(), s.clone());
        for f in 0..s.map_count() {
            assert_eq!(fm.restrict(f), want.restrict(f));
            assert_eq!(fm.transfer(f), want.transfer(f));
        }
    }

    #[test]
    fn discrete_operad_collapses_to_its_monoid() {
        let s = Arc::new(BoundedSite::new(2).unwrap());
        let m = CommMonoid::cyclic(3);
        let d = df_from_multicat(Arc::new(discrete_multicat(&m, 2)), s.clone()).unwrap();
        let ws = tensor_witnesses(&d, DEFAULT_BUDGET).unwrap();
        let fm = iso_class_monoid(&d, &ws, DEFAULT_BUDGET).unwrap();
        let want = mackey_from_monoid(&m, s.clone());
        for f in 0..s.map_count() {
            assert_eq!(fm.transfer(f), want.transfer(f));
        }
    }

    #[test]
    fn isomorphic_objects_share_a_class() {
        let c = FinCat::poset("pre", vec!["a".into(), "b".into(), "c".into()], |x, y| x == y || x + y == 1);
        let (class, reps) = iso_classes(&c);
        assert_eq!(class, vec![0, 0, 1]);
        assert_eq!(reps, vec![0, 2]);
    }
}
