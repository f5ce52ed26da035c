use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use super::DblCatError;
use crate::fincat::{
    check_cell, compose_profunctors, is_isomorphism, pairing, paste_horizontal, paste_vertical,
    product_category, product_profunctor, CatFunctor, CellViolation, FinCat, ProfCell, Profunctor,
};

/// A candidate binary product in the double category of categories and
/// profunctors: an apex proarrow `P: A ⇸ B` with projection cells
/// `π_i : P -> Φ_i` over `(p_i : A -> A_i, q_i : B -> B_i)`.
#[derive(Debug, Clone)]
pub struct ProductDiagramWitness {
    pub apex: Arc<Profunctor>,
    pub factors: [Arc<Profunctor>; 2],
    pub projections: [ProfCell; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductDiagramViolation {
    /// A projection cell does not run from the apex to its factor.
    Boundary { index: usize },
    /// `(p_1, p_2) : A -> A_1 × A_2` is not an isomorphism.
    SourceNotProduct,
    /// `(q_1, q_2) : B -> B_1 × B_2` is not an isomorphism.
    TargetNotProduct,
    ProjectionNotNatural {
        index: usize,
        violation: CellViolation,
    },
    /// `(π_1, π_2)` is not a bijection `P(x, y) -> Φ_1 × Φ_2` at `(x, y)`.
    NotBijective { x: String, y: String },
}

impl ProductDiagramViolation {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// The two projections out of a product category built by
/// [`product_category`].
pub fn product_projections(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    product: &Arc<FinCat>,
) -> Result<(CatFunctor, CatFunctor), DblCatError> {
    let (nob, nab) = (b.object_count(), b.arrow_count());
    let p1 = CatFunctor::new(
        product.clone(),
        a.clone(),
        (0..product.object_count()).map(|o| o / nob).collect(),
        (0..product.arrow_count()).map(|m| m / nab).collect(),
    )?;
    let p2 = CatFunctor::new(
        product.clone(),
        b.clone(),
        (0..product.object_count()).map(|o| o % nob).collect(),
        (0..product.arrow_count()).map(|m| m % nab).collect(),
    )?;
    Ok((p1, p2))
}

/// The standard product diagram of [`product_profunctor`].
pub fn product_witness(
    phi: &Arc<Profunctor>,
    psi: &Arc<Profunctor>,
) -> Result<ProductDiagramWitness, DblCatError> {
    let apex = Arc::new(product_profunctor(phi, psi)?);
    let (p1, p2) = product_projections(phi.source(), psi.source(), apex.source())?;
    let (q1, q2) = product_projections(phi.target(), psi.target(), apex.target())?;
    let (n2s, n2t) = (psi.source().object_count(), psi.target().object_count());
    let pi1 = ProfCell::from_fn(apex.clone(), phi.clone(), p1, q1, |x, y, e| {
        e / psi.size(x % n2s, y % n2t)
    })?;
    let pi2 = ProfCell::from_fn(apex.clone(), psi.clone(), p2, q2, |x, y, e| {
        e % psi.size(x % n2s, y % n2t)
    })?;
    Ok(ProductDiagramWitness {
        apex,
        factors: [phi.clone(), psi.clone()],
        projections: [pi1, pi2],
    })
}

/// Checks the product property: both boundary categories are products
/// via the projection functors, both projection cells are natural, and
/// the paired cell `P -> Φ_1 × Φ_2` is bijective. The last two give
/// existence and uniqueness of mediating cells.
pub fn check_product_diagram(w: &ProductDiagramWitness) -> Result<(), ProductDiagramViolation> {
    for (i, p) in w.projections.iter().enumerate() {
        if !p.left.same_tables(&w.apex) || !p.right.same_tables(&w.factors[i]) {
            return Err(ProductDiagramViolation::Boundary { index: i });
        }
    }
    let [pi1, pi2] = &w.projections;
    let [phi1, phi2] = &w.factors;
    let src = Arc::new(
        product_category(phi1.source(), phi2.source())
            .map_err(|_| ProductDiagramViolation::SourceNotProduct)?,
    );
    let tgt = Arc::new(
        product_category(phi1.target(), phi2.target())
            .map_err(|_| ProductDiagramViolation::TargetNotProduct)?,
    );
    let ps = pairing(&pi1.top, &pi2.top, src).map_err(|_| ProductDiagramViolation::SourceNotProduct)?;
    if !is_isomorphism(&ps) {
        return Err(ProductDiagramViolation::SourceNotProduct);
    }
    let pt =
        pairing(&pi1.bottom, &pi2.bottom, tgt).map_err(|_| ProductDiagramViolation::TargetNotProduct)?;
    if !is_isomorphism(&pt) {
        return Err(ProductDiagramViolation::TargetNotProduct);
    }
    for (index, p) in w.projections.iter().enumerate() {
        check_cell(p).map_err(|violation| ProductDiagramViolation::ProjectionNotNatural { index, violation })?;
    }
    let (a, b) = (w.apex.source(), w.apex.target());
    for x in 0..a.object_count() {
        for y in 0..b.object_count() {
            let (x1, y1) = (pi1.top.obj(x), pi1.bottom.obj(y));
            let (x2, y2) = (pi2.top.obj(x), pi2.bottom.obj(y));
            let (n1, n2) = (phi1.size(x1, y1), phi2.size(x2, y2));
            let n = w.apex.size(x, y);
            let mut seen = vec![false; n1 * n2];
            let ok = n == n1 * n2
                && (0..n).all(|e| {
                    let code = pi1.apply(x, y, e) * n2 + pi2.apply(x, y, e);
                    !std::mem::replace(&mut seen[code], true)
                });
            if !ok {
                return Err(ProductDiagramViolation::NotBijective {
                    x: a.objects()[x].clone(),
                    y: b.objects()[y].clone(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PasteDirection {
    /// Along the functor edges: `α: Φ -> Ψ` then `β: Ψ -> Ξ`.
    Horizontal,
    /// Along the proarrow edges: `α` on top of `β`.
    Vertical,
}

/// Pastes two cells; vertical pasting composes the boundary proarrows
/// through their coends.
pub fn paste_cells(dir: PasteDirection, a: &ProfCell, b: &ProfCell) -> Result<ProfCell, DblCatError> {
    match dir {
        PasteDirection::Horizontal => Ok(paste_horizontal(a, b)?),
        PasteDirection::Vertical => {
            let from = compose_profunctors(&a.left, &b.left)?;
            let to = compose_profunctors(&a.right, &b.right)?;
            Ok(paste_vertical(a, b, &from, &to)?)
        }
    }
}
