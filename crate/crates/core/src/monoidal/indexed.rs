use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use super::represent::{witness_cell, TensorWitness};
use super::MonoidalError;
use crate::dblcat::{BoundedSite, DblCatError, DfOperad, DfOperadRules, Kernel1, Kernel2, Square};
use crate::fincat::{power_category, reindex_between, representable_of, CatFunctor, FinCat, Profunctor};
use crate::finset::{FinMap, FinSet};
use crate::radix;

/// Which universal construction the transfer `f_!` takes fiberwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sums,
    Products,
}

impl Mode {
    fn diagram(self) -> &'static str {
        match self {
            Mode::Sums => "coproduct",
            Mode::Products => "product",
        }
    }
}

/// A chosen (co)limit of a family: the apex and its injections or
/// projections, one per member.
#[derive(Debug, Clone)]
struct Limit {
    apex: usize,
    legs: Vec<usize>,
}

struct Limits {
    a: Arc<FinCat>,
    mode: Mode,
    table: HashMap<Vec<usize>, Limit>,
}

impl Limits {
    /// Every family of up to `bound` objects, the empty family first.
    fn build(a: Arc<FinCat>, mode: Mode, bound: usize) -> Result<Self, MonoidalError> {
        let no = a.object_count();
        let mut limits = Limits {
            a,
            mode,
            table: HashMap::new(),
        };
        for n in 0..=bound {
            for code in 0..no.pow(n as u32) {
                let family = radix::decode_uniform(code, no, n);
                let found = limits.search(&family).ok_or_else(|| {
                    let names: Vec<&str> = family.iter().map(|&x| limits.a.objects()[x].as_str()).collect();
                    MonoidalError::MissingLimits {
                        diagram: format!("{} of ({})", mode.diagram(), names.join(",")),
                    }
                })?;
                limits.table.insert(family, found);
            }
        }
        Ok(limits)
    }

    /// Apexes in object order, legs in table order; a single member is its
    /// own (co)limit.
    fn search(&self, family: &[usize]) -> Option<Limit> {
        let a = &self.a;
        if let [x] = family {
            return Some(Limit {
                apex: *x,
                legs: vec![a.identity(*x)],
            });
        }
        for c in 0..a.object_count() {
            let homs: Vec<&[usize]> = family
                .iter()
                .map(|&x| match self.mode {
                    Mode::Sums => a.hom(x, c),
                    Mode::Products => a.hom(c, x),
                })
                .collect();
            let radices: Vec<usize> = homs.iter().map(|h| h.len()).collect();
            let Some(count) = radix::volume(&radices) else { continue };
            for code in 0..count {
                let picks = radix::decode(code, &radices);
                let legs: Vec<usize> = picks.iter().zip(&homs).map(|(&p, h)| h[p]).collect();
                let lim = Limit { apex: c, legs };
                if self.is_universal(family, &lim) {
                    return Some(lim);
                }
            }
        }
        None
    }

    fn is_universal(&self, family: &[usize], lim: &Limit) -> bool {
        let a = &self.a;
        let mut seen = HashSet::new();
        (0..a.object_count()).all(|y| {
            let (hom, expected): (&[usize], usize) = match self.mode {
                Mode::Sums => (a.hom(lim.apex, y), family.iter().map(|&x| a.hom(x, y).len()).product()),
                Mode::Products => (a.hom(y, lim.apex), family.iter().map(|&x| a.hom(y, x).len()).product()),
            };
            seen.clear();
            hom.len() == expected
                && hom.iter().all(|&h| {
                    let image: Vec<usize> = lim
                        .legs
                        .iter()
                        .map(|&leg| match self.mode {
                            Mode::Sums => a.comp(h, leg),
                            Mode::Products => a.comp(leg, h),
                        })
                        .collect();
                    seen.insert(image)
                })
        })
    }

    fn get(&self, family: &[usize]) -> &Limit {
        &self.table[family]
    }

    /// Sums: the `h: apex -> y` with `h ∘ leg_p = arrows[p]`. Products:
    /// the `h: y -> apex` with `leg_p ∘ h = arrows[p]`.
    fn factor(&self, lim: &Limit, y: usize, arrows: &[usize]) -> usize {
        let a = &self.a;
        let hom = match self.mode {
            Mode::Sums => a.hom(lim.apex, y),
            Mode::Products => a.hom(y, lim.apex),
        };
        *hom.iter()
            .find(|&&h| {
                lim.legs.iter().zip(arrows).all(|(&leg, &want)| match self.mode {
                    Mode::Sums => a.comp(h, leg) == want,
                    Mode::Products => a.comp(leg, h) == want,
                })
            })
            .expect("universal property")
    }

    /// The comparison from the (co)limit of `source` to that of `target`
    /// when `target[sigma[p]] = source[p]` for a bijection `sigma`; in the
    /// direction `source -> target` for both modes.
    fn relabel(&self, source: &[usize], target: &[usize], sigma: &[usize]) -> usize {
        let (p, q) = (self.get(source), self.get(target));
        match self.mode {
            Mode::Sums => {
                let arrows: Vec<usize> = sigma.iter().map(|&s| q.legs[s]).collect();
                self.factor(p, q.apex, &arrows)
            }
            Mode::Products => {
                let mut arrows = vec![0; sigma.len()];
                for (t, &s) in sigma.iter().enumerate() {
                    arrows[s] = p.legs[t];
                }
                self.factor(q, p.apex, &arrows)
            }
        }
    }
}

struct Inner {
    limits: Limits,
    name: String,
    pushforwards: RwLock<HashMap<FinMap, Arc<CatFunctor>>>,
}

impl Inner {
    fn a(&self) -> &FinCat {
        &self.limits.a
    }

    /// The fiberwise (co)product functor `f_!: A^I -> A^J`.
    fn pushforward(&self, op: &DfOperad, f: &FinMap) -> Result<Arc<CatFunctor>, DblCatError> {
        if let Some(p) = self.pushforwards.read().expect("memo lock").get(f) {
            return Ok(p.clone());
        }
        let (mi, mj) = (op.category(f.source())?, op.category(f.target())?);
        let a = self.a();
        let (no, na) = (a.object_count(), a.arrow_count());
        let (ni, nj) = (f.source().len(), f.target().len());
        let fibers: Vec<Vec<usize>> = (0..nj).map(|j| f.preimage(j)).collect();
        let objs = (0..mi.object_count())
            .map(|x| {
                let xs = radix::decode_uniform(x, no, ni);
                let apexes: Vec<usize> = fibers
                    .iter()
                    .map(|fib| self.limits.get(&pick(&xs, fib)).apex)
                    .collect();
                radix::encode_uniform(&apexes, no)
            })
            .collect();
        let arrs = (0..mi.arrow_count())
            .map(|c| {
                let cs = radix::decode_uniform(c, na, ni);
                let src: Vec<usize> = cs.iter().map(|&u| a.source(u)).collect();
                let tgt: Vec<usize> = cs.iter().map(|&u| a.target(u)).collect();
                let parts: Vec<usize> = fibers
                    .iter()
                    .map(|fib| {
                        let (p, q) = (self.limits.get(&pick(&src, fib)), self.limits.get(&pick(&tgt, fib)));
                        match self.limits.mode {
                            Mode::Sums => {
                                let arrows: Vec<usize> =
                                    fib.iter().zip(&q.legs).map(|(&i, &leg)| a.comp(leg, cs[i])).collect();
                                self.limits.factor(p, q.apex, &arrows)
                            }
                            Mode::Products => {
                                let arrows: Vec<usize> =
                                    fib.iter().zip(&p.legs).map(|(&i, &leg)| a.comp(cs[i], leg)).collect();
                                self.limits.factor(q, p.apex, &arrows)
                            }
                        }
                    })
                    .collect();
                radix::encode_uniform(&parts, na)
            })
            .collect();
        let functor = Arc::new(CatFunctor::new(mi, mj, objs, arrs)?);
        let mut w = self.pushforwards.write().expect("memo lock");
        Ok(w.entry(f.clone()).or_insert(functor).clone())
    }

    /// `(f;g)_! X -> g_!(f_! X)`, the canonical comparison.
    fn associativity(&self, f: &FinMap, g: &FinMap, x: usize) -> usize {
        let a = self.a();
        let (no, na) = (a.object_count(), a.arrow_count());
        let xs = radix::decode_uniform(x, no, f.source().len());
        let lims = &self.limits;
        let parts: Vec<usize> = (0..g.target().len())
            .map(|k| {
                let js = g.preimage(k);
                let all: Vec<usize> = (0..f.source().len()).filter(|&i| js.contains(&f.apply(i))).collect();
                let p = lims.get(&pick(&xs, &all));
                let inner: Vec<(Vec<usize>, &Limit)> = js
                    .iter()
                    .map(|&j| {
                        let fib = f.preimage(j);
                        let l = lims.get(&pick(&xs, &fib));
                        (fib, l)
                    })
                    .collect();
                let apexes: Vec<usize> = inner.iter().map(|(_, l)| l.apex).collect();
                let q = lims.get(&apexes);
                match lims.mode {
                    Mode::Sums => {
                        let arrows: Vec<usize> = all
                            .iter()
                            .map(|&i| {
                                let s = js.iter().position(|&j| j == f.apply(i)).expect("fiber");
                                let t = inner[s].0.iter().position(|&u| u == i).expect("fiber");
                                a.comp(q.legs[s], inner[s].1.legs[t])
                            })
                            .collect();
                        lims.factor(p, q.apex, &arrows)
                    }
                    Mode::Products => {
                        let into_inner: Vec<usize> = inner
                            .iter()
                            .map(|(fib, l)| {
                                let arrows: Vec<usize> = fib
                                    .iter()
                                    .map(|i| p.legs[all.iter().position(|u| u == i).expect("fiber")])
                                    .collect();
                                lims.factor(l, p.apex, &arrows)
                            })
                            .collect();
                        lims.factor(q, p.apex, &into_inner)
                    }
                }
            })
            .collect();
        radix::encode_uniform(&parts, na)
    }

    /// `f_!(k* X) -> l*(g_! X)` for a pullback square, matching fibers
    /// through `k`.
    fn exchange(&self, sq: &Square<'_>, x: usize) -> usize {
        let a = self.a();
        let (no, na) = (a.object_count(), a.arrow_count());
        let xs = radix::decode_uniform(x, no, sq.k.target().len());
        let parts: Vec<usize> = (0..sq.f.target().len())
            .map(|j| {
                let over = sq.g.preimage(sq.l.apply(j));
                let fib = sq.f.preimage(j);
                let source: Vec<usize> = fib.iter().map(|&i| xs[sq.k.apply(i)]).collect();
                let target = pick(&xs, &over);
                let sigma: Vec<usize> = fib
                    .iter()
                    .map(|&i| over.iter().position(|&t| t == sq.k.apply(i)).expect("pullback"))
                    .collect();
                self.limits.relabel(&source, &target, &sigma)
            })
            .collect();
        radix::encode_uniform(&parts, na)
    }
}

fn pick(xs: &[usize], positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|&i| xs[i]).collect()
}

struct IndexedRules(Arc<Inner>);

impl DfOperadRules for IndexedRules {
    fn name(&self) -> String {
        self.0.name.clone()
    }

    fn category(&self, set: &FinSet) -> Result<FinCat, DblCatError> {
        Ok(power_category(self.0.a(), set)?)
    }

    fn reindex(&self, op: &DfOperad, l: &FinMap) -> Result<CatFunctor, DblCatError> {
        let (src, tgt) = (op.category(l.target())?, op.category(l.source())?);
        Ok(reindex_between(self.0.a(), l, src, tgt))
    }

    fn proarrow(&self, op: &DfOperad, f: &FinMap) -> Result<Profunctor, DblCatError> {
        Ok(representable_of(&*self.0.pushforward(op, f)?))
    }

    fn laxity<'a>(
        &'a self,
        op: &'a DfOperad,
        f: &FinMap,
        g: &FinMap,
        x: usize,
        y: usize,
        z: usize,
    ) -> Result<Kernel2<'a>, DblCatError> {
        let (pf, pg) = (self.0.pushforward(op, f)?, self.0.pushforward(op, g)?);
        let (mj, mk) = (pf.target().clone(), pg.target().clone());
        let can = self.0.associativity(f, g, x);
        let (fx, gy) = (pf.obj(x), pg.obj(y));
        Ok(Box::new(move |a, b| {
            let first = mj.hom(fx, y)[a];
            let second = mk.hom(gy, z)[b];
            mk.hom_pos(mk.comp(second, mk.comp(pg.arr(first), can)))
        }))
    }

    fn square_cell<'a>(
        &'a self,
        op: &'a DfOperad,
        sq: &Square<'_>,
        x: usize,
        a: usize,
    ) -> Result<Kernel1<'a>, DblCatError> {
        let pg = self.0.pushforward(op, sq.g)?;
        let ls = op.reindex(sq.l)?;
        let mk = pg.target().clone();
        let mj = ls.target().clone();
        let bc = self.0.exchange(sq, x);
        let gx = pg.obj(x);
        Ok(Box::new(move |e| {
            let arrow = mk.hom(gx, a)[e];
            mj.hom_pos(mj.comp(ls.arr(arrow), bc))
        }))
    }
}

/// The DF operad `I ↦ A^I` with `Φ_f = A^J(f_! -, -)` for `f_!` the
/// fiberwise coproduct (`Sums`) or product (`Products`), together with a
/// tensor witness per site map (universal elements the identities).
pub fn indexed_monoidal(
    a: Arc<FinCat>,
    mode: Mode,
    site: Arc<BoundedSite>,
) -> Result<(DfOperad, Vec<TensorWitness>), MonoidalError> {
    let name = match mode {
        Mode::Sums => format!("cocart({})", a.name()),
        Mode::Products => format!("cart({})", a.name()),
    };
    let limits = Limits::build(a, mode, site.bound())?;
    let inner = Arc::new(Inner {
        limits,
        name,
        pushforwards: RwLock::default(),
    });
    let d = DfOperad::new(site.clone(), IndexedRules(inner.clone()));
    let witnesses = site
        .maps()
        .iter()
        .map(|f| {
            let functor = inner.pushforward(&d, f)?;
            let mj = functor.target().clone();
            let universal: Vec<usize> = (0..functor.source().object_count())
                .map(|x| mj.hom_pos(mj.identity(functor.obj(x))))
                .collect();
            let phi = d.proarrow(f)?;
            let iso = witness_cell(&phi, &functor, &universal)?;
            Ok(TensorWitness {
                map: f.clone(),
                functor: (*functor).clone(),
                universal,
                iso,
            })
        })
        .collect::<Result<Vec<_>, MonoidalError>>()?;
    Ok((d, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dblcat::{check_lax_functor, check_pb_functoriality, check_product_preservation};

    fn site(b: usize) -> Arc<BoundedSite> {
        Arc::new(BoundedSite::new(b).unwrap())
    }

    #[test]
    fn chain_sums_are_joins() {
        let s = site(2);
        let (d, ws) = indexed_monoidal(Arc::new(FinCat::chain(2)), Mode::Sums, s.clone()).unwrap();
        let w = &ws[s.maps_between(2, 1).start];
        assert_eq!(w.functor.obj_map(), &[0, 1, 1, 1]);
        let empty = &ws[s.maps_between(0, 1).start];
        assert_eq!(empty.functor.obj_map(), &[0]);
        assert!(check_lax_functor(&d).unwrap().passed());
        assert!(check_pb_functoriality(&d).unwrap().passed());
        assert!(check_product_preservation(&d).unwrap().passed());
    }

    #[test]
    fn chain_products_are_meets() {
        let s = site(2);
        let (d, ws) = indexed_monoidal(Arc::new(FinCat::chain(2)), Mode::Products, s.clone()).unwrap();
        assert_eq!(ws[s.maps_between(2, 1).start].functor.obj_map(), &[0, 0, 0, 1]);
        assert_eq!(ws[s.maps_between(0, 1).start].functor.obj_map(), &[1]);
        assert!(check_lax_functor(&d).unwrap().passed());
        assert!(check_pb_functoriality(&d).unwrap().passed());
    }

    #[test]
    fn terminal_base_is_degenerate() {
        let s = site(2);
        let (d, _) = indexed_monoidal(Arc::new(FinCat::terminal()), Mode::Products, s).unwrap();
        assert!(check_lax_functor(&d).unwrap().passed());
        assert!(check_pb_functoriality(&d).unwrap().passed());
    }

    #[test]
    fn discrete_base_lacks_products() {
        let a = Arc::new(FinCat::discrete("two", vec!["p".into(), "q".into()]));
        let err = indexed_monoidal(a, Mode::Products, site(2)).err().unwrap();
        // the empty family is searched first and has no terminal object
        assert!(matches!(err, MonoidalError::MissingLimits { ref diagram } if diagram == "product of ()"));
    }
}
