use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use super::coend::Composite;
use super::functor::{compose_functors, CatFunctor};
use super::profunctor::{representable_of, same_cat, Profunctor};
use super::FinCatError;

/// A cell
///
/// ```text
///        F
///    A ----> C
///    |       |
///  Φ |   α   | Ψ
///    v       v
///    B ----> D
///        G
/// ```
///
/// with components `α_{x,y}: Φ(x, y) -> Ψ(Fx, Gy)`.
#[derive(Debug, Clone)]
pub struct ProfCell {
    pub left: Arc<Profunctor>,
    pub right: Arc<Profunctor>,
    pub top: CatFunctor,
    pub bottom: CatFunctor,
    components: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellViolation {
    pub side: &'static str,
    pub arrow: String,
    pub x: String,
    pub y: String,
    pub element: usize,
    pub expected: usize,
    pub got: usize,
}

impl CellViolation {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

impl ProfCell {
    pub fn from_fn(
        left: Arc<Profunctor>,
        right: Arc<Profunctor>,
        top: CatFunctor,
        bottom: CatFunctor,
        component: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self, FinCatError> {
        let l = left.clone();
        Self::from_blocks(left, right, top, bottom, |x, y, out| {
            out.extend((0..l.size(x, y)).map(|e| component(x, y, e)))
        })
    }

    /// Builds a cell one `(x, y)` component at a time; `block` appends the
    /// images of `Φ(x, y)` in order.
    pub fn from_blocks(
        left: Arc<Profunctor>,
        right: Arc<Profunctor>,
        top: CatFunctor,
        bottom: CatFunctor,
        mut block: impl FnMut(usize, usize, &mut Vec<usize>),
    ) -> Result<Self, FinCatError> {
        if !same_cat(left.source(), top.source())
            || !same_cat(left.target(), bottom.source())
            || !same_cat(right.source(), top.target())
            || !same_cat(right.target(), bottom.target())
        {
            return Err(FinCatError::MismatchedEndpoints {
                left: format!("{left:?}"),
                right: format!("{right:?}"),
            });
        }
        let (na, nb) = (left.source().object_count(), left.target().object_count());
        let mut components = Vec::with_capacity(na * nb);
        let mut buf = Vec::new();
        for x in 0..na {
            for y in 0..nb {
                let (fx, gy) = (top.obj(x), bottom.obj(y));
                let bound = right.size(fx, gy);
                buf.clear();
                block(x, y, &mut buf);
                if buf.len() != left.size(x, y) {
                    return Err(FinCatError::Invalid(format!(
                        "cell component at ({},{}) has {} entries for {} elements",
                        left.source().objects()[x],
                        left.target().objects()[y],
                        buf.len(),
                        left.size(x, y)
                    )));
                }
                if let Some(e) = buf.iter().position(|&r| r >= bound) {
                    return Err(FinCatError::Invalid(format!(
                        "cell component at ({},{}) sends {e} out of range",
                        left.source().objects()[x],
                        left.target().objects()[y]
                    )));
                }
                components.push(buf.iter().map(|&r| r as u32).collect());
            }
        }
        Ok(ProfCell {
            left,
            right,
            top,
            bottom,
            components,
        })
    }

    pub fn apply(&self, x: usize, y: usize, e: usize) -> usize {
        self.components[x * self.left.target().object_count() + y][e] as usize
    }

    pub fn component(&self, x: usize, y: usize) -> &[u32] {
        &self.components[x * self.left.target().object_count() + y]
    }

    /// Replaces one component entry; for building defective cells in tests.
    pub fn with_entry(mut self, x: usize, y: usize, e: usize, value: usize) -> Self {
        let nb = self.left.target().object_count();
        self.components[x * nb + y][e] = value as u32;
        self
    }

    /// Whether two cells with the same boundary have equal components.
    pub fn same_components(&self, other: &ProfCell) -> bool {
        self.components == other.components
    }
}

/// Naturality of a cell on generating arrows of both sides.
pub fn check_cell(a: &ProfCell) -> Result<(), CellViolation> {
    let (src, tgt) = (a.left.source(), a.left.target());
    let (phi, psi) = (&a.left, &a.right);
    for &c in src.generators() {
        let (s, t) = (src.source(c), src.target(c));
        let fc = a.top.arr(c);
        for y in 0..tgt.object_count() {
            let gy = a.bottom.obj(y);
            for e in 0..phi.size(t, y) {
                let lhs = a.apply(s, y, phi.act_left(c, y, e));
                let rhs = psi.act_left(fc, gy, a.apply(t, y, e));
                if lhs != rhs {
                    return Err(CellViolation {
                        side: "left",
                        arrow: src.arrow(c).name.clone(),
                        x: src.objects()[t].clone(),
                        y: tgt.objects()[y].clone(),
                        element: e,
                        expected: rhs,
                        got: lhs,
                    });
                }
            }
        }
    }
    for &d in tgt.generators() {
        let (s, t) = (tgt.source(d), tgt.target(d));
        let gd = a.bottom.arr(d);
        for x in 0..src.object_count() {
            let fx = a.top.obj(x);
            for e in 0..phi.size(x, s) {
                let lhs = a.apply(x, t, phi.act_right(x, d, e));
                let rhs = psi.act_right(fx, gd, a.apply(x, s, e));
                if lhs != rhs {
                    return Err(CellViolation {
                        side: "right",
                        arrow: tgt.arrow(d).name.clone(),
                        x: src.objects()[x].clone(),
                        y: tgt.objects()[s].clone(),
                        element: e,
                        expected: rhs,
                        got: lhs,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Whether every component is a bijection.
pub fn is_bijective_cell(a: &ProfCell) -> bool {
    let (na, nb) = (a.left.source().object_count(), a.left.target().object_count());
    (0..na).all(|x| {
        (0..nb).all(|y| {
            let comp = a.component(x, y);
            let n = a.right.size(a.top.obj(x), a.bottom.obj(y));
            if comp.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            comp.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
        })
    })
}

pub fn identity_cell(p: &Arc<Profunctor>) -> ProfCell {
    ProfCell::from_fn(
        p.clone(),
        p.clone(),
        CatFunctor::identity(p.source().clone()),
        CatFunctor::identity(p.target().clone()),
        |_, _, e| e,
    )
    .expect("identity cell is well typed")
}

/// The cell between representables induced by a commuting square of
/// functors `L ∘ F = G ∘ H` (with `F: A -> B`, `H: A -> C`, `L: B -> D`,
/// `G: C -> D`): components send `h: Fx -> y` to `L(h)`.
pub fn embed_square(
    f: &CatFunctor,
    h: &CatFunctor,
    l: &CatFunctor,
    g: &CatFunctor,
) -> Result<ProfCell, FinCatError> {
    let lf = compose_functors(f, l)?;
    let gh = compose_functors(h, g)?;
    if lf.obj_map() != gh.obj_map() || lf.arr_map() != gh.arr_map() {
        let a = f.source();
        let x = (0..a.object_count())
            .find(|&x| lf.obj(x) != gh.obj(x))
            .map(|x| a.objects()[x].clone())
            .unwrap_or_else(|| {
                let i = (0..a.arrow_count()).find(|&i| lf.arr(i) != gh.arr(i)).unwrap_or(0);
                a.arrow(i).name.clone()
            });
        return Err(FinCatError::NonCommuting(x));
    }
    let left = Arc::new(representable_of(f));
    let right = Arc::new(representable_of(g));
    let (b, d) = (f.target().clone(), g.target().clone());
    ProfCell::from_fn(left, right, h.clone(), l.clone(), |x, y, e| {
        let arrow = b.hom(f.obj(x), y)[e];
        d.hom_pos(l.arr(arrow))
    })
}

/// Horizontal pasting: `α: Φ -> Ψ` followed by `β: Ψ -> Ξ`.
pub fn paste_horizontal(a: &ProfCell, b: &ProfCell) -> Result<ProfCell, FinCatError> {
    if !Arc::ptr_eq(&a.right, &b.left) && !a.right.same_tables(&b.left) {
        return Err(FinCatError::MismatchedEndpoints {
            left: format!("{:?}", a.right),
            right: format!("{:?}", b.left),
        });
    }
    let top = compose_functors(&a.top, &b.top)?;
    let bottom = compose_functors(&a.bottom, &b.bottom)?;
    ProfCell::from_fn(a.left.clone(), b.right.clone(), top, bottom, |x, y, e| {
        b.apply(a.top.obj(x), a.bottom.obj(y), a.apply(x, y, e))
    })
}

/// Vertical pasting through coend representatives: `α: Φ -> Ψ` over
/// `(F, G)` on top of `β: Φ' -> Ψ'` over `(G, H)` gives
/// `Φ;Φ' -> Ψ;Ψ'` over `(F, H)`, `[a, b] ↦ [α a, β b]`.
/// `from` is the composite `Φ;Φ'` and `to` is `Ψ;Ψ'`.
pub fn paste_vertical(
    a: &ProfCell,
    b: &ProfCell,
    from: &Composite,
    to: &Composite,
) -> Result<ProfCell, FinCatError> {
    if !same_cat(a.bottom.source(), b.top.source())
        || a.bottom.obj_map() != b.top.obj_map()
        || a.bottom.arr_map() != b.top.arr_map()
    {
        return Err(FinCatError::MismatchedEndpoints {
            left: "bottom of the upper cell".into(),
            right: "top of the lower cell".into(),
        });
    }
    let left = Arc::new(from.profunctor.clone());
    let right = Arc::new(to.profunctor.clone());
    ProfCell::from_fn(left, right, a.top.clone(), b.bottom.clone(), |x, z, k| {
        let (y, u, v) = from.rep(x, z, k);
        let gy = a.bottom.obj(y);
        to.class_of(
            a.top.obj(x),
            b.bottom.obj(z),
            gy,
            a.apply(x, y, u),
            b.apply(y, z, v),
        )
    })
}

/// `C(-,-);Φ -> Φ`, `[m, e] ↦ m·e`.
pub fn left_unitor(comp: &Composite) -> Result<ProfCell, FinCatError> {
    let phi = comp.second().clone();
    let left = Arc::new(comp.profunctor.clone());
    ProfCell::from_fn(
        left,
        phi.clone(),
        CatFunctor::identity(phi.source().clone()),
        CatFunctor::identity(phi.target().clone()),
        |x, z, k| {
            let (y, m, e) = comp.rep(x, z, k);
            let arrow = phi.source().hom(x, y)[m];
            phi.act_left(arrow, z, e)
        },
    )
}

/// `Φ;D(-,-) -> Φ`, `[e, m] ↦ e·m`.
pub fn right_unitor(comp: &Composite) -> Result<ProfCell, FinCatError> {
    let phi = comp.first().clone();
    let left = Arc::new(comp.profunctor.clone());
    ProfCell::from_fn(
        left,
        phi.clone(),
        CatFunctor::identity(phi.source().clone()),
        CatFunctor::identity(phi.target().clone()),
        |x, z, k| {
            let (y, e, m) = comp.rep(x, z, k);
            let arrow = phi.target().hom(y, z)[m];
            phi.act_right(x, arrow, e)
        },
    )
}

/// The canonical comparison `(Φ;Ψ);Ξ -> Φ;(Ψ;Ξ)`, `[[a,b],c] ↦ [a,[b,c]]`.
///
/// `outer_left` is `(Φ;Ψ);Ξ` built on `inner_left = Φ;Ψ`, and `outer_right`
/// is `Φ;(Ψ;Ξ)` built on `inner_right = Ψ;Ξ`.
pub fn associator(
    inner_left: &Composite,
    outer_left: &Composite,
    inner_right: &Composite,
    outer_right: &Composite,
) -> Result<ProfCell, FinCatError> {
    let src = Arc::new(outer_left.profunctor.clone());
    let tgt = Arc::new(outer_right.profunctor.clone());
    ProfCell::from_fn(
        src.clone(),
        tgt,
        CatFunctor::identity(src.source().clone()),
        CatFunctor::identity(src.target().clone()),
        |x, w, k| {
            let (z, k1, c) = outer_left.rep(x, w, k);
            let (y, a, b) = inner_left.rep(x, z, k1);
            let bc = inner_right.class_of(y, w, z, b, c);
            outer_right.class_of(x, w, y, a, bc)
        },
    )
}
