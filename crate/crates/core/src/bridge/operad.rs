use std::sync::Arc;

use super::BridgeError;
use crate::dblcat::{BoundedSite, DblCatError, DfOperad, DfOperadRules, Kernel1, Kernel2, Square};
use crate::fincat::{power_category, reindex_between, ArrowInfo, CatFunctor, FinCat, Profunctor};
use crate::finset::{FinMap, FinSet};
use crate::multicat::{MulticatError, Profile, SymMulticat};
use crate::radix;

/// The category of unary operations of a multicategory.
pub struct UnderlyingCategory {
    pub category: Arc<FinCat>,
    /// `(source, target, index in the hom set)` per arrow.
    pub unary: Vec<(usize, usize, usize)>,
    offsets: Vec<usize>,
}

impl UnderlyingCategory {
    pub fn new(m: &SymMulticat) -> Result<Self, BridgeError> {
        let no = m.object_count();
        let mut arrows = Vec::new();
        let mut unary = Vec::new();
        let mut offsets = Vec::with_capacity(no * no);
        for a in 0..no {
            for b in 0..no {
                offsets.push(arrows.len());
                let p = Profile::new(vec![a], b);
                for u in 0..m.hom_size(&p) {
                    let name = if no == 1 {
                        m.arrow_name(&p, u)
                    } else {
                        format!("{}:{}->{}", m.arrow_name(&p, u), m.objects()[a], m.objects()[b])
                    };
                    arrows.push(ArrowInfo {
                        name,
                        source: a,
                        target: b,
                    });
                    unary.push((a, b, u));
                }
            }
        }
        let identities = (0..no).map(|a| offsets[a * no + a] + m.identity(a)).collect();
        let compose = |g: usize, f: usize| {
            let (a, b, fu) = unary[f];
            let (b2, c, gu) = unary[g];
            if b != b2 {
                return None;
            }
            let r = m
                .compose(&Profile::new(vec![b], c), gu, 0, &Profile::new(vec![a], b), fu)
                .ok()?;
            Some(offsets[a * no + c] + r)
        };
        let category = FinCat::new(format!("{}0", m.name()), m.objects().to_vec(), arrows, identities, compose)
            .map_err(|e| BridgeError::Dbl(e.into()))?;
        Ok(UnderlyingCategory {
            category: Arc::new(category),
            unary,
            offsets,
        })
    }

    /// The arrow of the underlying category for a unary operation.
    pub fn arrow_of(&self, a: usize, b: usize, u: usize) -> usize {
        self.offsets[a * self.category.object_count() + b] + u
    }
}

/// Most seeds any fiber plan has to hold; the site bound is at most 5.
const MAX_FIBERS: usize = 8;

/// The DF operad of a multicategory `M`: `MI = M₀^I`, `Φ_f(X, Y)` the
/// product over `j` of `M(X|f⁻¹(j); Y_j)` with each fiber listed in
/// element order, laxity by substitution followed by the permutation that
/// sorts the concatenated fibers, and square cells by the permutations
/// that the pullback induces between fibers.
pub struct MulticatDf {
    m: Arc<SymMulticat>,
    base: UnderlyingCategory,
}

pub fn df_from_multicat(m: Arc<SymMulticat>, site: Arc<BoundedSite>) -> Result<DfOperad, BridgeError> {
    if m.arity_bound() < site.bound() {
        return Err(BridgeError::Multicat(MulticatError::ArityExceeded {
            arity: site.bound(),
            bound: m.arity_bound(),
        }));
    }
    let base = UnderlyingCategory::new(&m)?;
    Ok(DfOperad::new(site, MulticatDf { m, base }))
}

impl MulticatDf {
    pub fn multicat(&self) -> &Arc<SymMulticat> {
        &self.m
    }

    fn objects(&self, code: usize, n: usize) -> Vec<usize> {
        radix::decode_uniform(code, self.m.object_count(), n)
    }

    fn fiber_profiles(&self, f: &FinMap, x: usize, y: usize) -> Vec<Profile> {
        let xs = self.objects(x, f.source().len());
        let ys = self.objects(y, f.target().len());
        (0..f.target().len())
            .map(|j| Profile::new(f.preimage(j).iter().map(|&i| xs[i]).collect(), ys[j]))
            .collect()
    }

    fn sizes(&self, profiles: &[Profile]) -> Vec<usize> {
        profiles.iter().map(|p| self.m.hom_size(p)).collect()
    }
}

/// One step of a multi-composition: plug `part` at `position` of the
/// current operation, whose profile is `before`.
struct Step {
    before: Profile,
    position: usize,
    part: usize,
    part_profile: Profile,
}

/// The plan for `ψ ∘ (φ₀..φᵣ₋₁)`: nullary parts first, each group from the
/// last slot to the first, so no intermediate arity exceeds both `r` and
/// the final arity.
fn composition_plan(outer: &Profile, parts: &[Profile]) -> (Vec<Step>, Profile) {
    let r = parts.len();
    let mut done = vec![false; r];
    let order: Vec<usize> = (0..r)
        .rev()
        .filter(|&t| parts[t].arity() == 0)
        .chain((0..r).rev().filter(|&t| parts[t].arity() != 0))
        .collect();
    let mut cur = outer.clone();
    let mut steps = Vec::with_capacity(r);
    for t in order {
        let position = (0..t).map(|u| if done[u] { parts[u].arity() } else { 1 }).sum();
        let next = cur.substitute(position, &parts[t]);
        steps.push(Step {
            before: std::mem::replace(&mut cur, next),
            position,
            part: t,
            part_profile: parts[t].clone(),
        });
        done[t] = true;
    }
    (steps, cur)
}

impl DfOperadRules for MulticatDf {
    fn name(&self) -> String {
        format!("df({})", self.m.name())
    }

    fn category(&self, set: &FinSet) -> Result<FinCat, DblCatError> {
        Ok(power_category(&self.base.category, set)?)
    }

    fn reindex(&self, op: &DfOperad, l: &FinMap) -> Result<CatFunctor, DblCatError> {
        let src = op.category(l.target())?;
        let tgt = op.category(l.source())?;
        Ok(reindex_between(&self.base.category, l, src, tgt))
    }

    fn proarrow(&self, op: &DfOperad, f: &FinMap) -> Result<Profunctor, DblCatError> {
        let (ci, cj) = (op.category(f.source())?, op.category(f.target())?);
        let (ni, nj) = (f.source().len(), f.target().len());
        let na = self.base.category.arrow_count();
        let m = &self.m;
        let fibers: Vec<Vec<usize>> = (0..nj).map(|j| f.preimage(j)).collect();
        let size = |x: usize, y: usize| self.sizes(&self.fiber_profiles(f, x, y)).iter().product();
        // precompose every fiber operation with the components of c
        let left = |c: usize, y: usize, e: usize| {
            let cs = radix::decode_uniform(c, na, ni);
            let x = ci.target(c);
            let ps = self.fiber_profiles(f, x, y);
            let sizes = self.sizes(&ps);
            let mut phis = radix::decode(e, &sizes);
            let mut out_sizes = Vec::with_capacity(nj);
            for j in 0..nj {
                let mut p = ps[j].clone();
                for (t, &i) in fibers[j].iter().enumerate() {
                    let (a, b, u) = self.base.unary[cs[i]];
                    let v = m.compose(&p, phis[j], t, &Profile::new(vec![a], b), u).expect("unary precomposition");
                    p.sources[t] = a;
                    phis[j] = v;
                }
                out_sizes.push(m.hom_size(&p));
            }
            radix::encode(&phis, &out_sizes)
        };
        let right = |x: usize, d: usize, e: usize| {
            let ds = radix::decode_uniform(d, na, nj);
            let y = cj.source(d);
            let ps = self.fiber_profiles(f, x, y);
            let sizes = self.sizes(&ps);
            let mut phis = radix::decode(e, &sizes);
            let mut out_sizes = Vec::with_capacity(nj);
            for j in 0..nj {
                let (a, b, u) = self.base.unary[ds[j]];
                phis[j] = m.compose(&Profile::new(vec![a], b), u, 0, &ps[j], phis[j]).expect("unary postcomposition");
                out_sizes.push(m.hom_size(&Profile::new(ps[j].sources.clone(), b)));
            }
            radix::encode(&phis, &out_sizes)
        };
        Ok(Profunctor::from_fn(ci.clone(), cj.clone(), size, left, right)?)
    }

    fn laxity<'a>(
        &'a self,
        _op: &'a DfOperad,
        f: &FinMap,
        g: &FinMap,
        x: usize,
        y: usize,
        z: usize,
    ) -> Result<Kernel2<'a>, DblCatError> {
        let pf = self.fiber_profiles(f, x, y);
        let pg = self.fiber_profiles(g, y, z);
        let nk = g.target().len();
        let xs = self.objects(x, f.source().len());
        let zs = self.objects(z, nk);
        let (sf, sg) = (self.sizes(&pf), self.sizes(&pg));
        let mut plans = Vec::with_capacity(nk);
        let mut out_sizes = Vec::with_capacity(nk);
        for k in 0..nk {
            let js = g.preimage(k);
            let parts: Vec<Profile> = js.iter().map(|&j| pf[j].clone()).collect();
            let (steps, composite) = composition_plan(&pg[k], &parts);
            // concatenated fibers against the fiber of f;g in element order
            let concat: Vec<usize> = js.iter().flat_map(|&j| f.preimage(j)).collect();
            let mut sorted = concat.clone();
            sorted.sort_unstable();
            let perm: Vec<usize> = sorted
                .iter()
                .map(|i| concat.iter().position(|c| c == i).expect("fiber element"))
                .collect();
            let target = Profile::new(sorted.iter().map(|&i| xs[i]).collect(), zs[k]);
            out_sizes.push(self.m.hom_size(&target));
            plans.push((js, steps, composite, perm));
        }
        let m = &self.m;
        Ok(Box::new(move |a, b| {
            let mut phis = [0; MAX_FIBERS];
            let mut psis = [0; MAX_FIBERS];
            radix::decode_into(a, &sf, &mut phis[..sf.len()]);
            radix::decode_into(b, &sg, &mut psis[..sg.len()]);
            let mut out = 0;
            for (k, (js, steps, composite, perm)) in plans.iter().enumerate() {
                let mut cur = psis[k];
                for s in steps {
                    let part = phis[js[s.part]];
                    cur = m
                        .compose(&s.before, cur, s.position, &s.part_profile, part)
                        .expect("arity within the site bound");
                }
                let v = m.act(composite, perm, cur).expect("permutation of the fiber");
                out = out * out_sizes[k] + v;
            }
            out
        }))
    }

    fn square_cell<'a>(
        &'a self,
        _op: &'a DfOperad,
        sq: &Square<'_>,
        x: usize,
        a: usize,
    ) -> Result<Kernel1<'a>, DblCatError> {
        let pg = self.fiber_profiles(sq.g, x, a);
        let sg = self.sizes(&pg);
        let nj = sq.f.target().len();
        let mut plan = Vec::with_capacity(nj);
        let mut out_sizes = Vec::with_capacity(nj);
        for j in 0..nj {
            let lj = sq.l.apply(j);
            let over = sq.g.preimage(lj);
            let perm: Vec<usize> = sq
                .f
                .preimage(j)
                .iter()
                .map(|&i| {
                    let ki = sq.k.apply(i);
                    over.iter().position(|&t| t == ki)
                })
                .collect::<Option<_>>()
                .ok_or_else(|| DblCatError::Rules("square is not a pullback".into()))?;
            if perm.len() != over.len() {
                return Err(DblCatError::Rules("square is not a pullback".into()));
            }
            let p = pg[lj].permute(&perm);
            out_sizes.push(self.m.hom_size(&p));
            plan.push((lj, pg[lj].clone(), perm));
        }
        let m = &self.m;
        Ok(Box::new(move |e| {
            let mut psis = [0; MAX_FIBERS];
            radix::decode_into(e, &sg, &mut psis[..sg.len()]);
            let mut out = 0;
            for (j, (lj, p, perm)) in plan.iter().enumerate() {
                let v = m.act(p, perm, psis[*lj]).expect("permutation of the fiber");
                out = out * out_sizes[j] + v;
            }
            out
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dblcat::{check_lax_functor, check_pb_functoriality, check_product_preservation};
    use crate::multicat::{discrete_multicat, terminal_multicat, CommMonoid};

    fn site(b: usize) -> Arc<BoundedSite> {
        Arc::new(BoundedSite::new(b).unwrap())
    }

    fn to_one(s: &BoundedSite, n: usize) -> &FinMap {
        s.map(s.maps_between(n, 1).start)
    }

    #[test]
    fn plan_keeps_arity_low() {
        let outer = Profile::new(vec![0, 0], 0);
        let parts = [Profile::new(vec![], 0), Profile::new(vec![0, 0, 0], 0)];
        let (steps, out) = composition_plan(&outer, &parts);
        assert_eq!(steps[0].part, 0);
        assert_eq!(steps[1].position, 0);
        assert_eq!(out.arity(), 3);
    }

    #[test]
    fn terminal_fibers_are_singletons() {
        let s = site(2);
        let d = df_from_multicat(Arc::new(terminal_multicat(3)), s.clone()).unwrap();
        for f in s.maps() {
            let p = d.proarrow(f).unwrap();
            assert!(p.sizes().iter().all(|&n| n == 1));
        }
    }

    #[test]
    fn z2_binary_fibers() {
        let s = site(2);
        let d = df_from_multicat(Arc::new(discrete_multicat(&CommMonoid::cyclic(2), 3)), s.clone()).unwrap();
        let p = d.proarrow(to_one(&s, 2)).unwrap();
        // objects of M^2 in radix order: (1,1) is 3
        assert_eq!(p.size(3, 0), 1);
        assert_eq!(p.size(3, 1), 0);
    }

    #[test]
    fn discrete_df_passes() {
        let s = site(2);
        let d = df_from_multicat(Arc::new(discrete_multicat(&CommMonoid::cyclic(3), 3)), s).unwrap();
        assert!(check_lax_functor(&d).unwrap().passed());
        assert!(check_pb_functoriality(&d).unwrap().passed());
        assert!(check_product_preservation(&d).unwrap().passed());
    }

    #[test]
    fn arity_must_cover_the_site() {
        let err = df_from_multicat(Arc::new(terminal_multicat(2)), site(3)).unwrap_err();
        assert!(matches!(err, BridgeError::Multicat(MulticatError::ArityExceeded { .. })));
    }
}
