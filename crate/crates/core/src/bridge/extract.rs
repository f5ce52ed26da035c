use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use super::operad::{df_from_multicat, UnderlyingCategory};
use super::BridgeError;
use crate::dblcat::{
    check_double_transform, check_lax_functor, check_pb_functoriality, check_product_preservation,
    BoundedSite, DblCatError, DfOperad, DoubleTransform, Square,
};
use crate::fincat::{is_bijective_cell, is_isomorphism, CatFunctor, ProfCell};
use crate::finset::{FinMap, FinSet};
use crate::multicat::{
    check_morphism, ActionTable, CompositionTable, MulticatMorphism, MulticatTables, Profile,
    SymMulticat,
};
use crate::radix;
use crate::report::{CheckOutcome, Report};

/// The product comparison `D(n) -> D(1)ⁿ` of a DF operad on objects,
/// inverted, for every seed up to a bound; plus the site maps the
/// decomposition of proarrows into fibers needs.
pub struct PointDecomposition {
    site: Arc<BoundedSite>,
    ones: usize,
    /// `objects[n][code]`: the object of `D(n)` whose points are the
    /// radix digits of `code`.
    objects: Vec<Vec<usize>>,
    points: Vec<Vec<Arc<CatFunctor>>>,
}

impl PointDecomposition {
    pub fn new(d: &DfOperad, upto: usize) -> Result<Self, BridgeError> {
        let site = d.site().clone();
        site.require(|| format!("seeds up to {upto}"), upto)?;
        let ones = d.category(site.seed(1))?.object_count();
        let mut objects = Vec::new();
        let mut points = Vec::new();
        for n in 0..=upto {
            let pts = (0..n)
                .map(|t| d.reindex(site.map(point_map(&site, n, t))))
                .collect::<Result<Vec<_>, _>>()?;
            let dn = d.category(site.seed(n))?;
            let total = ones.pow(n as u32);
            let mut table = vec![usize::MAX; total];
            for x in 0..dn.object_count() {
                let digits: Vec<usize> = pts.iter().map(|p| p.obj(x)).collect();
                let code = radix::encode_uniform(&digits, ones);
                if std::mem::replace(&mut table[code], x) != usize::MAX {
                    return Err(BridgeError::NotAProduct(format!(
                        "two objects of D({n}) share the points {digits:?}"
                    )));
                }
            }
            if table.contains(&usize::MAX) || dn.object_count() != total {
                return Err(BridgeError::NotAProduct(format!("D({n}) -> D(1)^{n} is not bijective on objects")));
            }
            objects.push(table);
            points.push(pts);
        }
        Ok(PointDecomposition {
            site,
            ones,
            objects,
            points,
        })
    }

    pub fn object(&self, family: &[usize]) -> usize {
        self.objects[family.len()][radix::encode_uniform(family, self.ones)]
    }

    pub fn points(&self, n: usize, x: usize) -> Vec<usize> {
        self.points[n].iter().map(|p| p.obj(x)).collect()
    }

    pub fn point_functors(&self, n: usize) -> &[Arc<CatFunctor>] {
        &self.points[n]
    }

    /// The squares `(fiber -> 1, fiber ⊂ I, f, j: 1 -> J)` of a seed map,
    /// fibers listed in element order.
    pub fn fiber_squares(&self, f: usize) -> Vec<[u32; 4]> {
        fiber_square_ids(&self.site, f)
    }
}

fn point_map(site: &BoundedSite, n: usize, t: usize) -> usize {
    site.maps_between(1, n).start + t
}

fn to_one(site: &BoundedSite, n: usize) -> usize {
    site.maps_between(n, 1).start
}

fn seed_map(site: &BoundedSite, m: usize, n: usize, assignment: Vec<usize>) -> usize {
    let f = FinMap::new(site.seed(m).clone(), site.seed(n).clone(), assignment).expect("seed map");
    site.map_id(&f).expect("seed maps are site maps")
}

pub(crate) fn fiber_square_ids(site: &BoundedSite, f: usize) -> Vec<[u32; 4]> {
    let fm = site.map(f);
    let (ni, nj) = (fm.source().len(), fm.target().len());
    (0..nj)
        .map(|j| {
            let members = fm.preimage(j);
            let r = members.len();
            [
                to_one(site, r) as u32,
                seed_map(site, r, ni, members) as u32,
                f as u32,
                point_map(site, nj, j) as u32,
            ]
        })
        .collect()
}

fn square_of<'a>(site: &'a BoundedSite, ids: [u32; 4]) -> Square<'a> {
    let [f, k, g, l] = ids.map(|i| site.map(i as usize));
    Square { f, k, g, l }
}

/// The multicategory of a DF operad, without checking the operad first:
/// objects those of `D(1)`, `M(A₁..Aₙ; B) = Φ_{n->1}(X, B)` for the object
/// `X` of `D(n)` with points `Aᵢ`, composition through the laxity cells and
/// the symmetric action through the square cells over permutations.
pub fn extract_multicat(d: &DfOperad, arity_bound: usize) -> Result<SymMulticat, BridgeError> {
    let site = d.site().clone();
    let pd = PointDecomposition::new(d, arity_bound)?;
    let d1 = d.category(site.seed(1))?;
    let no = d1.object_count();
    let objects = d1.objects().to_vec();
    let mut homs = Vec::new();
    let mut sizes: HashMap<Profile, usize> = HashMap::new();
    for n in 0..=arity_bound {
        let bang = d.proarrow(site.map(to_one(&site, n)))?;
        for code in 0..no.pow(n as u32) {
            let sources = radix::decode_uniform(code, no, n);
            let x = pd.object(&sources);
            for b in 0..no {
                let size = bang.size(x, b);
                if size > 0 {
                    let p = Profile::new(sources.clone(), b);
                    sizes.insert(p.clone(), size);
                    homs.push((p, (0..size).map(|e| e.to_string()).collect()));
                }
            }
        }
    }
    let identities: Vec<usize> = (0..no).map(|a| d1.hom_pos(d1.identity(a))).collect();
    let inhabited: Vec<Profile> = homs.iter().map(|(p, _)| p.clone()).collect();
    let mut compositions = Vec::new();
    let mut actions = Vec::new();
    for pf in &inhabited {
        let n = pf.arity();
        let xn = pd.object(&pf.sources);
        let nf = sizes[pf];
        for i in 0..n {
            for pg in inhabited.iter().filter(|p| p.target == pf.sources[i]) {
                let m = pg.arity();
                let r = n + m - 1;
                if r > arity_bound {
                    continue;
                }
                let pr = pf.substitute(i, pg);
                let xr = pd.object(&pr.sources);
                // collapse the block i..i+m of r onto i
                let collapse: Vec<usize> = (0..r)
                    .map(|t| if t < i { t } else if t < i + m { i } else { t + 1 - m })
                    .collect();
                let h = seed_map(&site, r, n, collapse);
                let phi_h = d.proarrow(site.map(h))?;
                let squares = fiber_square_ids(&site, h);
                let kernels = squares
                    .iter()
                    .map(|&ids| d.square_cell(&square_of(&site, ids), xr, xn))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut by_components = HashMap::new();
                for e in 0..phi_h.size(xr, xn) {
                    let comps: Vec<usize> = kernels.iter().map(|k| k(e)).collect();
                    by_components.insert(comps, e);
                }
                let mu = d.laxity(site.map(h), site.map(to_one(&site, n)), xr, xn, pf.target)?;
                let ng = sizes[pg];
                let mut table = vec![vec![0; ng]; nf];
                for g in 0..ng {
                    let comps: Vec<usize> =
                        (0..n).map(|j| if j == i { g } else { identities[pf.sources[j]] }).collect();
                    let e = *by_components.get(&comps).ok_or_else(|| {
                        BridgeError::NotAProduct(format!("Φ over the collapse {r} -> {n} misses {comps:?}"))
                    })?;
                    for (f, row) in table.iter_mut().enumerate() {
                        row[g] = mu(e, f);
                    }
                }
                compositions.push(CompositionTable {
                    f: pf.clone(),
                    slot: i,
                    g: pg.clone(),
                    table,
                });
            }
        }
        let bang = to_one(&site, n) as u32;
        let id1 = site.identity_id(1) as u32;
        for p in radix::permutations(n) {
            let k = seed_map(&site, n, n, p.clone()) as u32;
            let sq = site
                .square_id([bang, k, bang, id1])
                .ok_or_else(|| BridgeError::Dbl(DblCatError::NotInSite(format!("permutation square {p:?}"))))?;
            let cell = d.square_cell(&site.square(sq), xn, pf.target)?;
            actions.push(ActionTable {
                profile: pf.clone(),
                perm: p,
                table: (0..nf).map(&cell).collect(),
            });
        }
    }
    let tables = MulticatTables {
        homs,
        identities,
        compositions,
        actions,
    };
    Ok(SymMulticat::from_tables(format!("ext({})", d.name()), objects, arity_bound, tables)?)
}

/// As [`extract_multicat`], refusing operads that fail any double functor
/// check.
pub fn multicat_from_df(d: &DfOperad, arity_bound: usize) -> Result<SymMulticat, BridgeError> {
    let report = check_df_operad(d)?;
    if !report.passed() {
        return Err(BridgeError::CheckFailed(Box::new(report)));
    }
    extract_multicat(d, arity_bound)
}

fn check_df_operad(d: &DfOperad) -> Result<Report, BridgeError> {
    let mut report = check_lax_functor(d)?;
    report.subject = format!("DF operad {}", d.name());
    report.extend(check_pb_functoriality(d)?);
    report.extend(check_product_preservation(d)?);
    Ok(report)
}

/// The comparison `D -> df(ext(D))`: on objects and arrows the product
/// comparison `D(I) -> D(1)^I`, on proarrows the decomposition of
/// `Φ_f(x, y)` into its fibers.
pub struct ComparisonTransform {
    pd: PointDecomposition,
    base: UnderlyingCategory,
}

impl ComparisonTransform {
    pub fn new(d: &DfOperad, extracted: &SymMulticat) -> Result<Self, BridgeError> {
        Ok(ComparisonTransform {
            pd: PointDecomposition::new(d, d.site().bound())?,
            base: UnderlyingCategory::new(extracted)?,
        })
    }
}

impl DoubleTransform for ComparisonTransform {
    fn functor(&self, m: &DfOperad, n: &DfOperad, set: &FinSet) -> Result<CatFunctor, DblCatError> {
        let (src, tgt) = (m.category(set)?, n.category(set)?);
        let k = set.len();
        let d1 = m.category(m.site().seed(1))?;
        let pts = self.pd.point_functors(k);
        let ones = d1.object_count();
        let na = self.base.category.arrow_count();
        let objs = (0..src.object_count())
            .map(|x| radix::encode_uniform(&self.pd.points(k, x), ones))
            .collect();
        let arrs = (0..src.arrow_count())
            .map(|c| {
                let digits: Vec<usize> = pts
                    .iter()
                    .map(|p| {
                        let u = p.arr(c);
                        self.base.arrow_of(d1.source(u), d1.target(u), d1.hom_pos(u))
                    })
                    .collect();
                radix::encode_uniform(&digits, na)
            })
            .collect();
        Ok(CatFunctor::new(src, tgt, objs, arrs)?)
    }

    fn cell(&self, m: &DfOperad, n: &DfOperad, f: &FinMap) -> Result<ProfCell, DblCatError> {
        let site = m.site();
        let id = site.map_id(f).ok_or_else(|| DblCatError::NotInSite(f.to_string()))?;
        let top = self.functor(m, n, f.source())?;
        let bottom = self.functor(m, n, f.target())?;
        let (left, right) = (m.proarrow(f)?, n.proarrow(f)?);
        let squares = fiber_square_ids(site, id);
        // Φ_{F_j -> 1} with the reindexings along F_j ⊂ I and j: 1 -> J
        let fibers = squares
            .iter()
            .map(|&[fj, inc, _, pt]| {
                let [fj, inc, pt] = [fj, inc, pt].map(|t| site.map(t as usize));
                Ok((m.proarrow(fj)?, m.reindex(inc)?, m.reindex(pt)?))
            })
            .collect::<Result<Vec<_>, DblCatError>>()?;
        let mut err = None;
        let cell = ProfCell::from_blocks(left.clone(), right, top, bottom, |x, y, out| {
            let kernels: Result<Vec<_>, _> =
                squares.iter().map(|&ids| m.square_cell(&square_of(site, ids), x, y)).collect();
            match kernels {
                Ok(ks) => {
                    let radices: Vec<usize> =
                        fibers.iter().map(|(p, inc, pt)| p.size(inc.obj(x), pt.obj(y))).collect();
                    out.extend((0..left.size(x, y)).map(|e| {
                        let digits: Vec<usize> = ks.iter().map(|k| k(e)).collect();
                        radix::encode(&digits, &radices)
                    }));
                }
                Err(e) => {
                    err.get_or_insert(e);
                    out.resize(left.size(x, y), 0);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(cell?),
        }
    }
}

/// The operad round trip for `m` over a site whose bound is `m`'s arity
/// bound:
///
/// * `m ≅ ext(df(m))` by the identity on objects and on operation indices,
///   checked as a pair of mutually inverse multicategory morphisms;
/// * `df(m) ≅ df(ext(df(m)))` through [`ComparisonTransform`], checked as an
///   invertible double natural transformation.
pub fn roundtrip_check(m: Arc<SymMulticat>, site: Arc<BoundedSite>) -> Result<Report, BridgeError> {
    if site.bound() != m.arity_bound() {
        return Err(BridgeError::Dbl(DblCatError::MismatchedEndpoints(format!(
            "site bound {} vs arity bound {}",
            site.bound(),
            m.arity_bound()
        ))));
    }
    let d = df_from_multicat(m.clone(), site.clone())?;
    let mut report = Report::new(format!("round trip {}", m.name()), site.bound(), m.arity_bound());
    let checks = check_df_operad(&d)?;
    let ok = checks.passed();
    report.extend(checks);
    if !ok {
        report.note("extraction skipped: df(M) fails the double functor checks");
        return Ok(report);
    }
    let ext = Arc::new(extract_multicat(&d, m.arity_bound())?);
    // names differ (D(1) labels points as 1-tuples); indices must agree
    let mut objects = CheckOutcome::new("identity_on_objects");
    objects.expect(ext.object_count() == m.object_count(), || {
        json!({"original": m.objects(), "extracted": ext.objects()})
    });
    let mut sizes = CheckOutcome::new("hom_bijections");
    for p in m.profiles() {
        let (a, b) = (m.hom_size(&p), ext.hom_size(&p));
        sizes.expect(a == b, || json!({"profile": m.profile_json(&p), "original": a, "extracted": b}));
    }
    let typed = objects.passed() && sizes.passed();
    report.push(objects);
    report.push(sizes);
    if !typed {
        return Ok(report);
    }
    let id = || MulticatMorphism {
        objects: (0..m.object_count()).collect(),
        arrows: Box::new(|_, a| a),
    };
    for (tag, r) in [
        ("forward", check_morphism(&m, &ext, &id())?),
        ("backward", check_morphism(&ext, &m, &id())?),
    ] {
        for mut c in r.checks {
            c.check = format!("{tag}_{}", c.check);
            report.push(c);
        }
    }
    let rebuilt = df_from_multicat(ext.clone(), site.clone())?;
    let h = ComparisonTransform::new(&d, &ext)?;
    let t = check_double_transform(&d, &rebuilt, &h)?;
    for mut c in t.checks {
        c.check = format!("comparison_{}", c.check);
        report.push(c);
    }
    let mut inv = CheckOutcome::new("comparison_invertible");
    for s in site.seeds() {
        let f = h.functor(&d, &rebuilt, s)?;
        inv.expect(is_isomorphism(&f), || json!({"set": s.name()}));
    }
    for f in site.maps() {
        let c = h.cell(&d, &rebuilt, f)?;
        inv.expect(is_bijective_cell(&c), || json!({"map": f.to_json()}));
    }
    report.push(inv);
    report.note(format!(
        "bounded equivalence: compared on the site of bound {} only",
        site.bound()
    ));
    Ok(report)
}
