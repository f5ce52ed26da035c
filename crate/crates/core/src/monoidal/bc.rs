use std::sync::Arc;

use serde_json::{json, Value};

use super::represent::{is_universal, TensorWitness};
use super::MonoidalError;
use crate::dblcat::DfOperad;
use crate::fincat::{compose_functors, corepresentable_of, find_natural_iso, find_profunctor_iso, same_cat, IsoSearchError};
use crate::report::{CheckOutcome, Report};

/// The verdict on one site square `(f, k, g, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BcSquare {
    /// Site map ids `[f, k, g, l]`.
    pub square: [u32; 4],
    /// Components of the natural iso `f_! k* ≅ l* g_!` found, if any.
    pub components: Option<Vec<usize>>,
    pub obstruction: Option<Value>,
    /// Whether the comparison induced by the universal elements is itself
    /// invertible.
    pub canonical: bool,
}

#[derive(Debug, Clone)]
pub struct BCReport {
    pub report: Report,
    pub squares: Vec<BcSquare>,
}

impl BCReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Validates the witnesses against `D`, then searches a natural iso
/// `f_! ∘ k* ≅ l* ∘ g_!` for every site square. Any natural iso is
/// accepted; whether the canonical comparison (the unique `h` with
/// `u_{k*X} · h = α(u_X)`) is invertible is recorded alongside.
pub fn check_beck_chevalley(
    d: &DfOperad,
    witnesses: &[TensorWitness],
    budget: u64,
) -> Result<BCReport, MonoidalError> {
    let site = d.site().clone();
    if witnesses.len() != site.map_count() {
        return Err(MonoidalError::Invalid(format!(
            "{} tensor witnesses for {} site maps",
            witnesses.len(),
            site.map_count()
        )));
    }
    let mut report = Report::new(format!("Beck-Chevalley {}", d.name()), site.bound(), site.bound());
    let mut valid = CheckOutcome::new("tensor_witnesses");
    let mut ok = Vec::with_capacity(witnesses.len());
    for (id, w) in witnesses.iter().enumerate() {
        let fm = site.map(id);
        let phi = d.proarrow(fm)?;
        let typed = w.map == *fm
            && same_cat(w.functor.source(), phi.source())
            && same_cat(w.functor.target(), phi.target())
            && w.universal.len() == phi.source().object_count();
        let bad = if typed {
            (0..phi.source().object_count()).find(|&x| !is_universal(&phi, x, w.functor.obj(x), w.universal[x]))
        } else {
            Some(0)
        };
        ok.push(bad.is_none());
        valid.expect(bad.is_none(), || {
            json!({"map": fm.to_json(), "object": bad.map(|x| phi.source().objects().get(x).cloned())})
        });
    }
    let mut bc = CheckOutcome::new("beck_chevalley");
    let mut squares = Vec::with_capacity(site.square_count());
    let mut canonical_count = 0;
    for i in 0..site.square_count() {
        let ids = site.square_ids(i);
        let [f, _, g, _] = ids.map(|t| t as usize);
        let sq = site.square(i);
        if !ok[f] || !ok[g] {
            bc.fail_with(|| json!({"square": sq.to_json(), "reason": "invalid tensor witness"}));
            bc.tick();
            squares.push(BcSquare {
                square: ids,
                components: None,
                obstruction: Some(json!("invalid tensor witness")),
                canonical: false,
            });
            continue;
        }
        let (ks, ls) = (d.reindex(sq.k)?, d.reindex(sq.l)?);
        let lhs = compose_functors(&ks, &witnesses[f].functor)?;
        let rhs = compose_functors(&witnesses[g].functor, &ls)?;
        let found = find_natural_iso(&lhs, &rhs, budget);
        if let Err(IsoSearchError::BudgetExceeded { .. }) = found {
            return Err(MonoidalError::SearchBudgetExceeded { budget });
        }
        let canonical = canonical_is_iso(d, &witnesses[f], &witnesses[g], i)?;
        canonical_count += usize::from(canonical);
        let verdict = match found {
            Ok(iso) => BcSquare {
                square: ids,
                components: Some(iso.components),
                obstruction: None,
                canonical,
            },
            Err(e) => {
                bc.fail_with(|| json!({"square": sq.to_json(), "obstruction": e.to_json()}));
                BcSquare {
                    square: ids,
                    components: None,
                    obstruction: Some(e.to_json()),
                    canonical,
                }
            }
        };
        bc.tick();
        squares.push(verdict);
    }
    report.push(valid);
    report.push(bc);
    report.note(format!(
        "canonical comparison invertible on {canonical_count} of {} squares",
        site.square_count()
    ));
    Ok(BCReport { report, squares })
}

/// For the square `(f, k, g, l)` and each `X` of `ML`, the unique
/// `h: f_!(k*X) -> l*(g_!X)` with `u_{k*X} · h = α(u_X)` must be invertible.
fn canonical_is_iso(d: &DfOperad, wf: &TensorWitness, wg: &TensorWitness, i: usize) -> Result<bool, MonoidalError> {
    let site = d.site();
    let sq = site.square(i);
    let (ks, ls) = (d.reindex(sq.k)?, d.reindex(sq.l)?);
    let phi_f = d.proarrow(sq.f)?;
    let mj = phi_f.target().clone();
    let ml = ks.source().clone();
    for x in 0..ml.object_count() {
        let gx = wg.functor.obj(x);
        let alpha = d.square_cell(&sq, x, gx)?;
        let target = alpha(wg.universal[x]);
        let kx = ks.obj(x);
        let h = mj
            .hom(wf.functor.obj(kx), ls.obj(gx))
            .iter()
            .copied()
            .find(|&h| phi_f.act_right(kx, h, wf.universal[kx]) == target);
        if !h.is_some_and(|h| mj.is_iso(h)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every site map, searches an iso `Φ_f ≅ MI(-, f* -)`. Every failing
/// map keeps its witness.
pub fn check_fibration(d: &DfOperad, budget: u64) -> Result<Report, MonoidalError> {
    let site = d.site().clone();
    let mut report = Report::new(format!("fibration {}", d.name()), site.bound(), site.bound());
    let mut out = CheckOutcome::new("corepresented_by_reindexing");
    for f in site.maps() {
        let phi = d.proarrow(f)?;
        let co = Arc::new(corepresentable_of(&*d.reindex(f)?));
        match find_profunctor_iso(&phi, &co, budget) {
            Ok(_) => out.tick(),
            Err(IsoSearchError::BudgetExceeded { .. }) => {
                return Err(MonoidalError::SearchBudgetExceeded { budget })
            }
            Err(e) => {
                out.tick();
                out.fail_pinned(json!({"map": f.to_json(), "obstruction": e.to_json()}));
            }
        }
    }
    report.push(out);
    Ok(report)
}
