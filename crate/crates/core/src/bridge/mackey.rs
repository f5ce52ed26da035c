use std::collections::HashSet;
use std::sync::Arc;

use serde_json::{json, Value};

use super::BridgeError;
use crate::dblcat::{BoundedSite, DblCatError, DfOperad, DfOperadRules, Kernel1, Kernel2, Square};
use crate::fincat::{CatFunctor, FinCat, Profunctor};
use crate::finset::{FinMap, FinSet};
use crate::multicat::CommMonoid;
use crate::radix;
use crate::report::{CheckOutcome, Report};

/// A DF monoid on the bounded site: a set `F(n)` per seed, a restriction
/// `l*: F(K) -> F(J)` and a transfer `f_!: F(I) -> F(J)` per site map.
#[derive(Debug, Clone)]
pub struct DfMonoid {
    site: Arc<BoundedSite>,
    name: String,
    elements: Vec<Vec<String>>,
    restrict: Vec<Vec<usize>>,
    transfer: Vec<Vec<usize>>,
}

impl DfMonoid {
    /// Validates shapes and ranges only; the laws are left to
    /// [`check_df_monoid`].
    pub fn new(
        site: Arc<BoundedSite>,
        name: impl Into<String>,
        elements: Vec<Vec<String>>,
        restrict: Vec<Vec<usize>>,
        transfer: Vec<Vec<usize>>,
    ) -> Result<Self, BridgeError> {
        let bad = |msg: String| Err(BridgeError::Invalid(msg));
        if elements.len() != site.bound() + 1 {
            return bad(format!("{} element lists for {} seeds", elements.len(), site.bound() + 1));
        }
        if restrict.len() != site.map_count() || transfer.len() != site.map_count() {
            return bad(format!("tables must cover all {} site maps", site.map_count()));
        }
        for f in 0..site.map_count() {
            let (i, j) = (site.source_size(f), site.target_size(f));
            let (ni, nj) = (elements[i].len(), elements[j].len());
            if restrict[f].len() != nj || restrict[f].iter().any(|&x| x >= ni) {
                return bad(format!("restriction along {} is not a map F({j}) -> F({i})", site.map(f)));
            }
            if transfer[f].len() != ni || transfer[f].iter().any(|&y| y >= nj) {
                return bad(format!("transfer along {} is not a map F({i}) -> F({j})", site.map(f)));
            }
        }
        Ok(DfMonoid {
            site,
            name: name.into(),
            elements,
            restrict,
            transfer,
        })
    }

    pub fn site(&self) -> &Arc<BoundedSite> {
        &self.site
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self, n: usize) -> usize {
        self.elements[n].len()
    }

    pub fn elements(&self, n: usize) -> &[String] {
        &self.elements[n]
    }

    /// `l*` as a table indexed by elements of `F(K)`.
    pub fn restrict(&self, l: usize) -> &[usize] {
        &self.restrict[l]
    }

    /// `f_!` as a table indexed by elements of `F(I)`.
    pub fn transfer(&self, f: usize) -> &[usize] {
        &self.transfer[f]
    }

    pub fn with_transfer_entry(mut self, f: usize, x: usize, y: usize) -> Self {
        self.transfer[f][x] = y;
        self
    }

    pub fn with_restrict_entry(mut self, l: usize, y: usize, x: usize) -> Self {
        self.restrict[l][y] = x;
        self
    }

    pub fn to_json(&self) -> Value {
        let maps: Vec<Value> = (0..self.site.map_count())
            .map(|f| {
                json!({
                    "map": self.site.map(f).to_json(),
                    "restrict": self.restrict[f],
                    "transfer": self.transfer[f],
                })
            })
            .collect();
        json!({
            "name": self.name,
            "site_bound": self.site.bound(),
            "elements": self.elements,
            "maps": maps,
        })
    }

    fn map_id(&self, f: &FinMap) -> Result<usize, DblCatError> {
        canonical_id(&self.site, f)
    }
}

/// The site id of the map with the same assignment between seeds.
fn canonical_id(site: &BoundedSite, f: &FinMap) -> Result<usize, DblCatError> {
    let (m, n) = (f.source().len(), f.target().len());
    site.require(|| format!("map {f}"), m.max(n))?;
    let g = FinMap::new(site.seed(m).clone(), site.seed(n).clone(), f.assignment().to_vec())?;
    site.map_id(&g).ok_or_else(|| DblCatError::NotInSite(f.to_string()))
}

/// `F(I) = M^I`, restriction by precomposition, transfer by multiplying
/// over each fiber (the unit over an empty fiber).
pub fn mackey_from_monoid(m: &CommMonoid, site: Arc<BoundedSite>) -> DfMonoid {
    let q = m.order();
    let names = m.carrier().elements();
    let elements: Vec<Vec<String>> = (0..=site.bound())
        .map(|n| {
            (0..q.pow(n as u32))
                .map(|code| {
                    let xs = radix::decode_uniform(code, q, n);
                    let parts: Vec<&str> = xs.iter().map(|&x| names[x].as_str()).collect();
                    format!("({})", parts.join(","))
                })
                .collect()
        })
        .collect();
    let mut restrict = Vec::with_capacity(site.map_count());
    let mut transfer = Vec::with_capacity(site.map_count());
    for f in site.maps() {
        let (i, j) = (f.source().len(), f.target().len());
        restrict.push(
            (0..q.pow(j as u32))
                .map(|code| {
                    let ys = radix::decode_uniform(code, q, j);
                    let xs: Vec<usize> = f.assignment().iter().map(|&t| ys[t]).collect();
                    radix::encode_uniform(&xs, q)
                })
                .collect(),
        );
        transfer.push(
            (0..q.pow(i as u32))
                .map(|code| {
                    let xs = radix::decode_uniform(code, q, i);
                    let ys: Vec<usize> = (0..j).map(|t| m.product(f.preimage(t).iter().map(|&s| xs[s]))).collect();
                    radix::encode_uniform(&ys, q)
                })
                .collect(),
        );
    }
    DfMonoid {
        name: format!("mackey({})", m.name()),
        site,
        elements,
        restrict,
        transfer,
    }
}

fn fmap(site: &BoundedSite, f: usize) -> Value {
    site.map(f).to_json()
}

/// Functoriality of restriction and transfer, product preservation of
/// restriction along the seed injections `m -> m+n` and `n -> m+n`, and
/// the exchange `f_! k* = l* g_!` over every site pullback square.
pub fn check_df_monoid(fm: &DfMonoid) -> Report {
    let site = &fm.site;
    let mut report = Report::new(format!("DF monoid {}", fm.name), site.bound(), site.bound());
    let mut restrict = CheckOutcome::new("restrict_functoriality");
    let mut transfer = CheckOutcome::new("transfer_functoriality");
    for n in 0..=site.bound() {
        let id = site.identity_id(n);
        for x in 0..fm.size(n) {
            restrict.expect(fm.restrict[id][x] == x, || json!({"identity": n, "element": x}));
            transfer.expect(fm.transfer[id][x] == x, || json!({"identity": n, "element": x}));
        }
    }
    for (f, g) in site.composable_pairs() {
        let (f, g) = (f as usize, g as usize);
        let fg = site.compose_ids(f, g);
        let k = site.target_size(g);
        for z in 0..fm.size(k) {
            let ok = fm.restrict[fg][z] == fm.restrict[f][fm.restrict[g][z]];
            restrict.expect(ok, || json!({"f": fmap(site, f), "g": fmap(site, g), "element": z}));
        }
        for x in 0..fm.size(site.source_size(f)) {
            let ok = fm.transfer[fg][x] == fm.transfer[g][fm.transfer[f][x]];
            transfer.expect(ok, || json!({"f": fmap(site, f), "g": fmap(site, g), "element": x}));
        }
    }
    let mut products = CheckOutcome::new("restrict_products");
    products.expect(fm.size(0) == 1, || json!({"empty": fm.size(0)}));
    for m in 0..=site.bound() {
        for n in 0..=site.bound() - m {
            let s = m + n;
            let left = site.map_id(&seed_injection(site, m, s, 0)).expect("seed map");
            let right = site.map_id(&seed_injection(site, n, s, m)).expect("seed map");
            let mut seen = HashSet::new();
            let bijective = fm.size(s) == fm.size(m) * fm.size(n)
                && (0..fm.size(s)).all(|z| seen.insert((fm.restrict[left][z], fm.restrict[right][z])));
            products.expect(bijective, || {
                json!({"sum": [m, n], "sizes": [fm.size(m), fm.size(n), fm.size(s)]})
            });
        }
    }
    let mut squares = CheckOutcome::new("mackey_squares");
    for i in 0..site.square_count() {
        let [f, k, g, l] = site.square_ids(i).map(|t| t as usize);
        let failing = (0..fm.size(site.source_size(g))).find(|&x| {
            fm.transfer[f][fm.restrict[k][x]] != fm.restrict[l][fm.transfer[g][x]]
        });
        squares.expect(failing.is_none(), || {
            json!({"square": site.square(i).to_json(), "element": failing})
        });
    }
    report.push(restrict);
    report.push(transfer);
    report.push(products);
    report.push(squares);
    report
}

fn seed_injection(site: &BoundedSite, m: usize, s: usize, shift: usize) -> FinMap {
    FinMap::new(site.seed(m).clone(), site.seed(s).clone(), (shift..shift + m).collect()).expect("injection")
}

/// The commutative monoid of a DF monoid: carrier `F(1)`, product the
/// transfer along `2 -> 1` of the pair with the given restrictions, unit
/// the transfer along `0 -> 1`.
pub fn monoid_from_mackey(fm: &DfMonoid) -> Result<CommMonoid, BridgeError> {
    let site = &fm.site;
    site.require(|| "monoid extraction".into(), 3)?;
    let report = check_df_monoid(fm);
    if !report.passed() {
        let failed = ["mackey_squares", "restrict_products", "transfer_functoriality", "restrict_functoriality"]
            .into_iter()
            .filter_map(|c| report.check(c))
            .find(|c| !c.passed())
            .expect("a failing check");
        return Err(BridgeError::MackeyViolation {
            check: failed.check.clone(),
            witness: failed.witnesses.first().cloned().unwrap_or(Value::Null),
        });
    }
    let q = fm.size(1);
    let inl = site.map_id(&seed_injection(site, 1, 2, 0)).expect("seed map");
    let inr = site.map_id(&seed_injection(site, 1, 2, 1)).expect("seed map");
    let mut pair = vec![0; q * q];
    for z in 0..fm.size(2) {
        pair[fm.restrict[inl][z] * q + fm.restrict[inr][z]] = z;
    }
    let mult = site.maps_between(2, 1).start;
    let unit = fm.transfer[site.maps_between(0, 1).start][0];
    let carrier = Arc::new(FinSet::new(fm.name.clone(), fm.elements[1].clone()).map_err(DblCatError::from)?);
    let table: Vec<Vec<usize>> = (0..q)
        .map(|a| (0..q).map(|b| fm.transfer[mult][pair[a * q + b]]).collect())
        .collect();
    Ok(CommMonoid::new(format!("mon({})", fm.name), carrier, &table, unit)?)
}

/// The discrete DF operad of a DF monoid: `D(I)` discrete on `F(I)`,
/// `Φ_f(x, y)` a singleton exactly when `f_!(x) = y`.
pub fn df_from_monoid(fm: Arc<DfMonoid>) -> Result<DfOperad, BridgeError> {
    let report = check_df_monoid(&fm);
    if !report.passed() {
        return Err(BridgeError::CheckFailed(Box::new(report)));
    }
    Ok(DfOperad::new(fm.site.clone(), MonoidDf { fm }))
}

struct MonoidDf {
    fm: Arc<DfMonoid>,
}

impl DfOperadRules for MonoidDf {
    fn name(&self) -> String {
        format!("disc({})", self.fm.name)
    }

    fn category(&self, set: &FinSet) -> Result<FinCat, DblCatError> {
        let n = set.len();
        self.fm.site.require(|| format!("category over {}", set.name()), n)?;
        Ok(FinCat::discrete(format!("{}({n})", self.fm.name), self.fm.elements[n].clone()))
    }

    fn reindex(&self, op: &DfOperad, l: &FinMap) -> Result<CatFunctor, DblCatError> {
        let table = self.fm.restrict[self.fm.map_id(l)?].clone();
        let (src, tgt) = (op.category(l.target())?, op.category(l.source())?);
        // a discrete category has one arrow per object, in object order
        Ok(CatFunctor::new(src, tgt, table.clone(), table)?)
    }

    fn proarrow(&self, op: &DfOperad, f: &FinMap) -> Result<Profunctor, DblCatError> {
        let t = &self.fm.transfer[self.fm.map_id(f)?];
        let (ci, cj) = (op.category(f.source())?, op.category(f.target())?);
        Ok(Profunctor::from_fn(
            ci,
            cj,
            |x, y| usize::from(t[x] == y),
            |_, _, e| e,
            |_, _, e| e,
        )?)
    }

    fn laxity<'a>(
        &'a self,
        _op: &'a DfOperad,
        _f: &FinMap,
        _g: &FinMap,
        _x: usize,
        _y: usize,
        _z: usize,
    ) -> Result<Kernel2<'a>, DblCatError> {
        Ok(Box::new(|_, _| 0))
    }

    fn square_cell<'a>(
        &'a self,
        _op: &'a DfOperad,
        _sq: &Square<'_>,
        _x: usize,
        _a: usize,
    ) -> Result<Kernel1<'a>, DblCatError> {
        Ok(Box::new(|_| 0))
    }
}

/// Reads a DF monoid off a DF operad whose categories are discrete and
/// whose proarrows are graphs of mappings.
pub fn df_monoid_of_mappings(d: &DfOperad) -> Result<DfMonoid, BridgeError> {
    let site = d.site().clone();
    let mut elements = Vec::new();
    for s in site.seeds() {
        let c = d.category(s)?;
        if c.arrow_count() != c.object_count() {
            return Err(BridgeError::Invalid(format!("{} is not discrete", c.name())));
        }
        elements.push(c.objects().to_vec());
    }
    let mut restrict = Vec::with_capacity(site.map_count());
    let mut transfer = Vec::with_capacity(site.map_count());
    for f in site.maps() {
        restrict.push(d.reindex(f)?.obj_map().to_vec());
        let p = d.proarrow(f)?;
        let nj = f.target().len();
        let row = (0..elements[f.source().len()].len())
            .map(|x| {
                let ys: Vec<usize> = (0..elements[nj].len()).filter(|&y| p.size(x, y) > 0).collect();
                match ys.as_slice() {
                    [y] if p.size(x, *y) == 1 => Ok(*y),
                    _ => Err(BridgeError::Invalid(format!(
                        "Φ along {f} at {} is not the graph of a mapping",
                        elements[f.source().len()][x]
                    ))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        transfer.push(row);
    }
    DfMonoid::new(site, format!("maps({})", d.name()), elements, restrict, transfer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::df_from_multicat;
    use crate::dblcat::{check_lax_functor, check_pb_functoriality, check_product_preservation};
    use crate::multicat::{check_comm_monoid, discrete_multicat, monoid_corpus};

    fn site(b: usize) -> Arc<BoundedSite> {
        Arc::new(BoundedSite::new(b).unwrap())
    }

    #[test]
    fn fiber_products_over_z3() {
        let s = site(3);
        let fm = mackey_from_monoid(&CommMonoid::cyclic(3), s.clone());
        let f = FinMap::new(s.seed(3).clone(), s.seed(2).clone(), vec![0, 0, 1]).unwrap();
        let id = s.map_id(&f).unwrap();
        // (a, b, c) = (1, 2, 2) in base 3 is 17; (a+b, c) = (0, 2) is 2
        assert_eq!(fm.transfer(id)[17], 2);
        let empty = s.maps_between(0, 1).start;
        assert_eq!(fm.transfer(empty), &[0]);
    }

    #[test]
    fn corpus_round_trips() {
        let s = site(3);
        for m in monoid_corpus() {
            let fm = mackey_from_monoid(&m, s.clone());
            let r = check_df_monoid(&fm);
            assert!(r.passed(), "{}: {r:?}", m.name());
            let back = monoid_from_mackey(&fm).unwrap();
            assert_eq!(back.table(), m.table(), "{}", m.name());
            assert_eq!(back.unit(), m.unit());
            assert!(check_comm_monoid(&back).passed());
        }
    }

    #[test]
    fn wrong_transfer_is_caught_by_a_square() {
        let s = site(3);
        let fm = mackey_from_monoid(&CommMonoid::cyclic(3), s.clone());
        let f = s.maps_between(2, 1).start;
        let bad = fm.with_transfer_entry(f, 1, 0);
        let r = check_df_monoid(&bad);
        assert!(!r.check("mackey_squares").unwrap().passed());
        let err = monoid_from_mackey(&bad).unwrap_err();
        assert!(matches!(err, BridgeError::MackeyViolation { ref check, .. } if check == "mackey_squares"));
    }

    #[test]
    fn broken_exponent_law_is_caught() {
        let s = site(2);
        let fm = mackey_from_monoid(&CommMonoid::cyclic(2), s.clone());
        let inl = s.map_id(&seed_injection(&s, 1, 2, 0)).unwrap();
        let bad = fm.with_restrict_entry(inl, 2, 0);
        assert!(!check_df_monoid(&bad).check("restrict_products").unwrap().passed());
    }

    #[test]
    fn discrete_operad_collapses_to_mackey() {
        let s = site(2);
        for m in [CommMonoid::cyclic(2), CommMonoid::boolean_or()] {
            let d = df_from_multicat(Arc::new(discrete_multicat(&m, 2)), s.clone()).unwrap();
            let got = df_monoid_of_mappings(&d).unwrap();
            let want = mackey_from_monoid(&m, s.clone());
            for f in 0..s.map_count() {
                assert_eq!(got.restrict(f), want.restrict(f));
                assert_eq!(got.transfer(f), want.transfer(f));
            }
        }
    }

    #[test]
    fn monoid_df_operad_passes() {
        let s = site(2);
        let fm = Arc::new(mackey_from_monoid(&CommMonoid::klein_four(), s));
        let d = df_from_monoid(fm).unwrap();
        assert!(check_lax_functor(&d).unwrap().passed());
        assert!(check_pb_functoriality(&d).unwrap().passed());
        assert!(check_product_preservation(&d).unwrap().passed());
    }
}
