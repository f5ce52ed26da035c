use std::sync::Arc;

use serde_json::json;

use super::operad::DfOperad;
use super::DblCatError;
use crate::fincat::{
    check_cell, check_functor, compose_functors, compose_profunctors, element_generators,
    functors_equal, same_cat, CatFunctor, ProfCell, Sides,
};
use crate::finset::{FinMap, FinSet};
use crate::report::{CheckOutcome, Report};

/// A candidate double natural transformation `h: M -> N`: a functor
/// `h_I : MI -> NI` per set and a cell `h_f : Φ^M_f -> Φ^N_f` over
/// `(h_I, h_J)` per map.
pub trait DoubleTransform {
    fn functor(&self, m: &DfOperad, n: &DfOperad, set: &FinSet) -> Result<CatFunctor, DblCatError>;

    fn cell(&self, m: &DfOperad, n: &DfOperad, f: &FinMap) -> Result<ProfCell, DblCatError>;
}

/// The identity transformation of a DF operad (`m` and `n` the same).
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityTransform;

impl DoubleTransform for IdentityTransform {
    fn functor(&self, m: &DfOperad, _n: &DfOperad, set: &FinSet) -> Result<CatFunctor, DblCatError> {
        Ok(CatFunctor::identity(m.category(set)?))
    }

    fn cell(&self, m: &DfOperad, _n: &DfOperad, f: &FinMap) -> Result<ProfCell, DblCatError> {
        let p = m.proarrow(f)?;
        Ok(crate::fincat::identity_cell(&p))
    }
}

/// Checks a double natural transformation over the common site: component
/// functors and cells are well formed, `h` commutes strictly with
/// reindexing, `h_id` is `h` on arrows, and `h` commutes with the laxity
/// cells and the square cells.
pub fn check_double_transform(
    m: &DfOperad,
    n: &DfOperad,
    h: &dyn DoubleTransform,
) -> Result<Report, DblCatError> {
    if !Arc::ptr_eq(m.site(), n.site()) && m.site().bound() != n.site().bound() {
        return Err(DblCatError::MismatchedEndpoints(format!(
            "sites of bound {} and {}",
            m.site().bound(),
            n.site().bound()
        )));
    }
    let site = m.site().clone();
    let mut report = Report::new(
        format!("double transformation {} -> {}", m.name(), n.name()),
        site.bound(),
        site.bound(),
    );
    let mut functors = CheckOutcome::new("component_functors");
    let mut hs = Vec::new();
    for s in site.seeds() {
        let f = h.functor(m, n, s)?;
        let ok = same_cat(f.source(), &m.category(s)?)
            && same_cat(f.target(), &n.category(s)?)
            && check_functor(&f).is_ok();
        functors.expect(ok, || json!({"set": s.name()}));
        hs.push(f);
    }
    let mut horizontal = CheckOutcome::new("horizontal_naturality");
    for l in 0..site.map_count() {
        let lm = site.map(l);
        let (j, k) = (lm.source().len(), lm.target().len());
        let via_n = compose_functors(&hs[k], &*n.reindex(lm)?);
        let via_m = compose_functors(&*m.reindex(lm)?, &hs[j]);
        let ok = matches!((via_n, via_m), (Ok(a), Ok(b)) if functors_equal(&a, &b));
        horizontal.expect(ok, || json!({"map": lm.to_json()}));
    }
    let mut cells = CheckOutcome::new("component_cells");
    let mut normality = CheckOutcome::new("normality");
    let mut hc = Vec::new();
    for f in 0..site.map_count() {
        let fm = site.map(f);
        let c = h.cell(m, n, fm)?;
        let (i, j) = (fm.source().len(), fm.target().len());
        let ok = c.left.same_tables(&*m.proarrow(fm)?)
            && c.right.same_tables(&*n.proarrow(fm)?)
            && functors_equal(&c.top, &hs[i])
            && functors_equal(&c.bottom, &hs[j]);
        let verdict = if ok { check_cell(&c).map_err(|v| v.to_json()) } else { Err(json!("boundary")) };
        if let Err(v) = verdict {
            cells.fail_with(|| json!({"map": fm.to_json(), "violation": v}));
        }
        cells.tick();
        if fm.is_identity() && ok {
            let mi = m.category(fm.source())?;
            let ni = n.category(fm.source())?;
            for x in 0..mi.object_count() {
                for y in 0..mi.object_count() {
                    for (e, &arrow) in mi.hom(x, y).iter().enumerate() {
                        let want = ni.hom_pos(hs[i].arr(arrow));
                        normality.expect(c.apply(x, y, e) == want, || {
                            json!({"set": fm.source().name(), "arrow": mi.arrow(arrow).name})
                        });
                    }
                }
            }
        }
        hc.push(c);
    }
    report.push(functors);
    report.push(horizontal);
    let ok_so_far = report.passed() && cells.passed();
    report.push(cells);
    report.push(normality);
    if !ok_so_far {
        report.note("laxity and square compatibility skipped: components are malformed");
        return Ok(report);
    }
    let mut laxity = CheckOutcome::new("laxity_compatibility");
    for (f, g) in site.composable_pairs() {
        let (f, g) = (f as usize, g as usize);
        let (fm, gm) = (site.map(f), site.map(g));
        let gf = site.compose_ids(f, g);
        let comp = compose_profunctors(&m.proarrow(fm)?, &m.proarrow(gm)?)?;
        for (x, z, k) in element_generators(&comp.profunctor, Sides::Both) {
            let (y, a, b) = comp.rep(x, z, k);
            let lhs = hc[gf].apply(x, z, m.laxity(fm, gm, x, y, z)?(a, b));
            let (hx, hy, hz) = (hc[f].top.obj(x), hc[f].bottom.obj(y), hc[g].bottom.obj(z));
            let rhs = n.laxity(fm, gm, hx, hy, hz)?(hc[f].apply(x, y, a), hc[g].apply(y, z, b));
            laxity.expect(lhs == rhs, || json!({"f": fm.to_json(), "g": gm.to_json(), "a": a, "b": b}));
        }
    }
    report.push(laxity);
    let mut squares = CheckOutcome::new("square_compatibility");
    for i in 0..site.square_count() {
        let sq = site.square(i);
        let [fi, _, gi, _] = site.square_ids(i).map(|v| v as usize);
        let phi_g = m.proarrow(sq.g)?;
        let (mk_, ml_) = (m.reindex(sq.k)?, m.reindex(sq.l)?);
        for (x, a, e) in element_generators(&phi_g, Sides::Both) {
            let lhs = hc[fi].apply(mk_.obj(x), ml_.obj(a), m.square_cell(&sq, x, a)?(e));
            let (hx, ha) = (hc[gi].top.obj(x), hc[gi].bottom.obj(a));
            let rhs = n.square_cell(&sq, hx, ha)?(hc[gi].apply(x, a, e));
            squares.expect(lhs == rhs, || json!({"square": sq.to_json(), "e": e}));
        }
    }
    report.push(squares);
    Ok(report)
}
