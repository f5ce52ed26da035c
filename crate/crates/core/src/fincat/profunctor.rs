use std::sync::Arc;

use serde::Serialize;

use super::cat::{product_category, FinCat};
use super::functor::CatFunctor;
use super::FinCatError;

/// A profunctor `Φ: C ⇸ D`, i.e. a functor `C^op × D -> Set`, as tables.
///
/// The fiber over `(x, y)` is `0..size(x, y)`. For an arrow `c: x' -> x` of
/// `C` the left action sends `Φ(x, y)` to `Φ(x', y)`; for `d: y -> y'` of
/// `D` the right action sends `Φ(x, y)` to `Φ(x, y')`.
#[derive(Clone, PartialEq, Eq)]
pub struct Profunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
}

impl std::fmt::Debug for Profunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Profunctor({} ⇸ {}, {} elements)",
            self.source.name(),
            self.target.name(),
            self.total()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProfunctorViolation {
    LeftIdentity { x: String, y: String },
    RightIdentity { x: String, y: String },
    LeftComposite { g: String, f: String, y: String },
    RightComposite { e: String, d: String, x: String },
    Interchange { c: String, d: String },
}

pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Profunctor {
    /// Tabulates a profunctor from fiber sizes and action functions. Action
    /// results are range checked; functoriality is left to
    /// [`check_profunctor`].
    pub fn from_fn(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        size: impl Fn(usize, usize) -> usize,
        left: impl Fn(usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self, FinCatError> {
        let (nc, nd) = (source.object_count(), target.object_count());
        let sizes: Vec<usize> = (0..nc * nd).map(|i| size(i / nd, i % nd)).collect();
        let mut left_t = Vec::with_capacity(source.arrow_count() * nd);
        for c in 0..source.arrow_count() {
            let (s, t) = (source.source(c), source.target(c));
            for y in 0..nd {
                let (from, to) = (sizes[t * nd + y], sizes[s * nd + y]);
                let mut v = Vec::with_capacity(from);
                for e in 0..from {
                    let r = left(c, y, e);
                    if r >= to {
                        return Err(FinCatError::Invalid(format!(
                            "left action of {} sends element {e} of ({},{}) out of range",
                            source.arrow(c).name,
                            source.objects()[t],
                            target.objects()[y]
                        )));
                    }
                    v.push(r as u32);
                }
                left_t.push(v);
            }
        }
        let mut right_t = Vec::with_capacity(target.arrow_count() * nc);
        for d in 0..target.arrow_count() {
            let (s, t) = (target.source(d), target.target(d));
            for x in 0..nc {
                let (from, to) = (sizes[x * nd + s], sizes[x * nd + t]);
                let mut v = Vec::with_capacity(from);
                for e in 0..from {
                    let r = right(x, d, e);
                    if r >= to {
                        return Err(FinCatError::Invalid(format!(
                            "right action of {} sends element {e} of ({},{}) out of range",
                            target.arrow(d).name,
                            source.objects()[x],
                            target.objects()[s]
                        )));
                    }
                    v.push(r as u32);
                }
                right_t.push(v);
            }
        }
        Ok(Self::from_parts(source, target, sizes, left_t, right_t))
    }

    fn from_parts(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        sizes: Vec<usize>,
        left: Vec<Vec<u32>>,
        right: Vec<Vec<u32>>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets.push(acc);
        Profunctor {
            source,
            target,
            sizes,
            offsets,
            left,
            right,
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn size(&self, x: usize, y: usize) -> usize {
        self.sizes[x * self.target.object_count() + y]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Total number of elements over all fibers.
    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Flat index of element `e` of fiber `(x, y)`.
    pub fn flat(&self, x: usize, y: usize, e: usize) -> usize {
        self.offsets[x * self.target.object_count() + y] + e
    }

    /// Inverse of [`Profunctor::flat`].
    pub fn unflat(&self, i: usize) -> (usize, usize, usize) {
        let fib = self.offsets.partition_point(|&o| o <= i) - 1;
        let nd = self.target.object_count();
        (fib / nd, fib % nd, i - self.offsets[fib])
    }

    /// `c · e` for `c: x' -> x` and `e ∈ Φ(x, y)`; lands in `Φ(x', y)`.
    pub fn act_left(&self, c: usize, y: usize, e: usize) -> usize {
        self.left[c * self.target.object_count() + y][e] as usize
    }

    /// `e · d` for `d: y -> y'` and `e ∈ Φ(x, y)`; lands in `Φ(x, y')`.
    pub fn act_right(&self, x: usize, d: usize, e: usize) -> usize {
        self.right[d * self.source.object_count() + x][e] as usize
    }

    pub fn left_table(&self, c: usize, y: usize) -> &[u32] {
        &self.left[c * self.target.object_count() + y]
    }

    pub fn right_table(&self, x: usize, d: usize) -> &[u32] {
        &self.right[d * self.source.object_count() + x]
    }

    /// Targets `y` with `Φ(x, y)` inhabited.
    pub fn inhabited_right_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let nd = self.target.object_count();
        (0..nd).filter(move |&y| self.sizes[x * nd + y] > 0)
    }

    /// Structural equality of fiber sizes and action tables.
    pub fn same_tables(&self, other: &Profunctor) -> bool {
        self.sizes == other.sizes && self.left == other.left && self.right == other.right
    }

    /// Replaces one entry of a left action table. Used to build defective
    /// variants in tests.
    pub fn with_left_entry(mut self, c: usize, y: usize, e: usize, value: usize) -> Self {
        let nd = self.target.object_count();
        self.left[c * nd + y][e] = value as u32;
        self
    }

    /// Replaces one entry of a right action table.
    pub fn with_right_entry(mut self, x: usize, d: usize, e: usize, value: usize) -> Self {
        let nc = self.source.object_count();
        self.right[d * nc + x][e] = value as u32;
        self
    }
}

/// Checks identity, composition and interchange laws of both actions.
pub fn check_profunctor(p: &Profunctor) -> Result<(), ProfunctorViolation> {
    let (c, d) = (&p.source, &p.target);
    let (nc, nd) = (c.object_count(), d.object_count());
    let on = |x: usize, y: usize| (c.objects()[x].clone(), d.objects()[y].clone());
    for x in 0..nc {
        for y in 0..nd {
            let n = p.size(x, y);
            if (0..n).any(|e| p.act_left(c.identity(x), y, e) != e) {
                let (x, y) = on(x, y);
                return Err(ProfunctorViolation::LeftIdentity { x, y });
            }
            if (0..n).any(|e| p.act_right(x, d.identity(y), e) != e) {
                let (x, y) = on(x, y);
                return Err(ProfunctorViolation::RightIdentity { x, y });
            }
        }
    }
    for g in 0..c.arrow_count() {
        for w in 0..nc {
            for &f in c.hom(w, c.source(g)) {
                let gf = c.comp(g, f);
                for y in 0..nd {
                    for e in 0..p.size(c.target(g), y) {
                        if p.act_left(gf, y, e) != p.act_left(f, y, p.act_left(g, y, e)) {
                            return Err(ProfunctorViolation::LeftComposite {
                                g: c.arrow(g).name.clone(),
                                f: c.arrow(f).name.clone(),
                                y: d.objects()[y].clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    for e_arr in 0..d.arrow_count() {
        for w in 0..nd {
            for &dd in d.hom(w, d.source(e_arr)) {
                let ed = d.comp(e_arr, dd);
                for x in 0..nc {
                    for e in 0..p.size(x, w) {
                        if p.act_right(x, ed, e) != p.act_right(x, e_arr, p.act_right(x, dd, e)) {
                            return Err(ProfunctorViolation::RightComposite {
                                e: d.arrow(e_arr).name.clone(),
                                d: d.arrow(dd).name.clone(),
                                x: c.objects()[x].clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    for cc in c.generators().iter().copied() {
        for dd in d.generators().iter().copied() {
            let (xs, xt) = (c.source(cc), c.target(cc));
            let (ys, yt) = (d.source(dd), d.target(dd));
            for e in 0..p.size(xt, ys) {
                let a = p.act_right(xs, dd, p.act_left(cc, ys, e));
                let b = p.act_left(cc, yt, p.act_right(xt, dd, e));
                if a != b {
                    return Err(ProfunctorViolation::Interchange {
                        c: c.arrow(cc).name.clone(),
                        d: d.arrow(dd).name.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The unit proarrow `C(-, -)`; elements are hom positions.
pub fn hom_profunctor(c: &Arc<FinCat>) -> Profunctor {
    let cc = c.clone();
    let c2 = c.clone();
    Profunctor::from_fn(
        c.clone(),
        c.clone(),
        |x, y| cc.hom(x, y).len(),
        |a, y, e| {
            let h = c2.hom(c2.target(a), y)[e];
            c2.hom_pos(c2.comp(h, a))
        },
        |x, d, e| {
            let h = c.hom(x, c.source(d))[e];
            c.hom_pos(c.comp(d, h))
        },
    )
    .expect("hom tables are in range")
}

/// `D(F-, -)` for `F: C -> D`.
pub fn representable_of(f: &CatFunctor) -> Profunctor {
    let (c, d) = (f.source().clone(), f.target().clone());
    Profunctor::from_fn(
        c.clone(),
        d.clone(),
        |x, y| d.hom(f.obj(x), y).len(),
        |a, y, e| {
            let h = d.hom(f.obj(c.target(a)), y)[e];
            d.hom_pos(d.comp(h, f.arr(a)))
        },
        |x, b, e| {
            let h = d.hom(f.obj(x), d.source(b))[e];
            d.hom_pos(d.comp(b, h))
        },
    )
    .expect("hom tables are in range")
}

/// `C(-, G-)` for `G: D -> C`, a profunctor `C ⇸ D`.
pub fn corepresentable_of(g: &CatFunctor) -> Profunctor {
    let (d, c) = (g.source().clone(), g.target().clone());
    Profunctor::from_fn(
        c.clone(),
        d.clone(),
        |x, y| c.hom(x, g.obj(y)).len(),
        |a, y, e| {
            let h = c.hom(c.target(a), g.obj(y))[e];
            c.hom_pos(c.comp(h, a))
        },
        |x, b, e| {
            let h = c.hom(x, g.obj(d.source(b)))[e];
            c.hom_pos(c.comp(g.arr(b), h))
        },
    )
    .expect("hom tables are in range")
}

/// `(Φ × Ψ)((x,x'),(y,y')) = Φ(x,y) × Ψ(x',y')`, pairs numbered
/// `e * |Ψ(x',y')| + e'`.
pub fn product_profunctor(phi: &Profunctor, psi: &Profunctor) -> Result<Profunctor, FinCatError> {
    let src = Arc::new(product_category(&phi.source, &psi.source)?);
    let tgt = Arc::new(product_category(&phi.target, &psi.target)?);
    let (nc2, nd2) = (psi.source.object_count(), psi.target.object_count());
    let (na2, nb2) = (psi.source.arrow_count(), psi.target.arrow_count());
    let split = |e: usize, x2: usize, y2: usize| {
        let m = psi.size(x2, y2);
        (e / m, e % m)
    };
    Profunctor::from_fn(
        src.clone(),
        tgt.clone(),
        |x, y| phi.size(x / nc2, y / nd2) * psi.size(x % nc2, y % nd2),
        |c, y, e| {
            let (c1, c2) = (c / na2, c % na2);
            let (y1, y2) = (y / nd2, y % nd2);
            let x2 = psi.source.target(c2);
            let (e1, e2) = split(e, x2, y2);
            let s2 = psi.source.source(c2);
            phi.act_left(c1, y1, e1) * psi.size(s2, y2) + psi.act_left(c2, y2, e2)
        },
        |x, d, e| {
            let (d1, d2) = (d / nb2, d % nb2);
            let (x1, x2) = (x / nc2, x % nc2);
            let y2 = psi.target.source(d2);
            let (e1, e2) = split(e, x2, y2);
            let t2 = psi.target.target(d2);
            phi.act_right(x1, d1, e1) * psi.size(x2, t2) + psi.act_right(x2, d2, e2)
        },
    )
}

/// Fiberwise disjoint union of two parallel profunctors: `Φ` first.
pub fn sum_profunctor(phi: &Profunctor, psi: &Profunctor) -> Result<Profunctor, FinCatError> {
    if !same_cat(&phi.source, &psi.source) || !same_cat(&phi.target, &psi.target) {
        return Err(FinCatError::MismatchedEndpoints {
            left: format!("{:?}", phi),
            right: format!("{:?}", psi),
        });
    }
    let c = phi.source.clone();
    let d = phi.target.clone();
    Profunctor::from_fn(
        c.clone(),
        d.clone(),
        |x, y| phi.size(x, y) + psi.size(x, y),
        |a, y, e| {
            let t = c.target(a);
            let s = c.source(a);
            if e < phi.size(t, y) {
                phi.act_left(a, y, e)
            } else {
                phi.size(s, y) + psi.act_left(a, y, e - phi.size(t, y))
            }
        },
        |x, b, e| {
            let s = d.source(b);
            let t = d.target(b);
            if e < phi.size(x, s) {
                phi.act_right(x, b, e)
            } else {
                phi.size(x, t) + psi.act_right(x, b, e - phi.size(x, s))
            }
        },
    )
}

/// Which actions an orbit may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    Left,
    Right,
    Both,
}

/// A minimum set of elements `(x, y, e)` whose orbits under the chosen
/// actions cover every fiber: the least element of each strongly connected
/// component of the action graph that no other component reaches.
pub fn element_generators(p: &Profunctor, sides: Sides) -> Vec<(usize, usize, usize)> {
    let edges = action_edges(p, sides);
    source_components(p.total(), &edges)
        .into_iter()
        .map(|i| p.unflat(i))
        .collect()
}

fn action_edges(p: &Profunctor, sides: Sides) -> Vec<(u32, u32)> {
    let (c, d) = (&p.source, &p.target);
    let (nc, nd) = (c.object_count(), d.object_count());
    let mut edges = Vec::new();
    if sides != Sides::Right {
        for &g in c.generators() {
            let (s, t) = (c.source(g), c.target(g));
            for y in 0..nd {
                for e in 0..p.size(t, y) {
                    edges.push((p.flat(t, y, e) as u32, p.flat(s, y, p.act_left(g, y, e)) as u32));
                }
            }
        }
    }
    if sides != Sides::Left {
        for &g in d.generators() {
            let (s, t) = (d.source(g), d.target(g));
            for x in 0..nc {
                for e in 0..p.size(x, s) {
                    edges.push((p.flat(x, s, e) as u32, p.flat(x, t, p.act_right(x, g, e)) as u32));
                }
            }
        }
    }
    edges
}

/// Least node of every source component of a directed graph, ascending.
pub(crate) fn source_components(nodes: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    use petgraph::graph::{DiGraph, NodeIndex};
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(nodes, edges.len());
    for _ in 0..nodes {
        g.add_node(());
    }
    for &(u, v) in edges {
        if u != v {
            g.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), ());
        }
    }
    let sccs = petgraph::algo::tarjan_scc(&g);
    let mut comp = vec![0usize; nodes];
    for (k, scc) in sccs.iter().enumerate() {
        for n in scc {
            comp[n.index()] = k;
        }
    }
    let mut entered = vec![false; sccs.len()];
    for &(u, v) in edges {
        let (cu, cv) = (comp[u as usize], comp[v as usize]);
        if cu != cv {
            entered[cv] = true;
        }
    }
    let mut out: Vec<usize> = sccs
        .iter()
        .enumerate()
        .filter(|(k, _)| !entered[*k])
        .map(|(_, scc)| scc.iter().map(|n| n.index()).min().expect("components are nonempty"))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::functor::CatFunctor;

    #[test]
    fn hom_examples() {
        let t = Arc::new(FinCat::terminal());
        let h = hom_profunctor(&t);
        assert_eq!(h.sizes(), &[1]);
        let c = Arc::new(FinCat::chain(2));
        let h = hom_profunctor(&c);
        assert_eq!(h.size(1, 0), 0);
        assert_eq!(h.size(0, 1), 1);
        assert!(check_profunctor(&h).is_ok());
        let d = Arc::new(FinCat::discrete("D", vec!["a".into(), "b".into()]));
        let h = hom_profunctor(&d);
        assert_eq!(h.sizes(), &[1, 0, 0, 1]);
    }

    #[test]
    fn representable_examples() {
        let c = Arc::new(FinCat::chain(2));
        let id = CatFunctor::identity(c.clone());
        assert!(representable_of(&id).same_tables(&hom_profunctor(&c)));

        let t = Arc::new(FinCat::terminal());
        // the terminal object of the 2-chain is 1
        let top = CatFunctor::constant(t.clone(), c.clone(), 1);
        let r = representable_of(&top);
        assert_eq!(r.sizes(), &[0, 1]);
        let to_t = CatFunctor::constant(c.clone(), t.clone(), 0);
        assert_eq!(representable_of(&to_t).sizes(), &[1, 1]);

        let zero = CatFunctor::constant(c.clone(), c.clone(), 0);
        let r = representable_of(&zero);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(r.size(x, y), c.hom(0, y).len());
            }
        }
        assert!(check_profunctor(&r).is_ok());
    }

    #[test]
    fn product_examples() {
        let c = Arc::new(FinCat::chain(2));
        let t = Arc::new(FinCat::terminal());
        let h = hom_profunctor(&c);
        let p = product_profunctor(&h, &hom_profunctor(&t)).unwrap();
        assert_eq!(p.sizes(), h.sizes());
        assert!(check_profunctor(&p).is_ok());

        let one = hom_profunctor(&t);
        assert_eq!(product_profunctor(&one, &one).unwrap().sizes(), &[1]);

        let two = sum_profunctor(&one, &one).unwrap();
        let three = sum_profunctor(&two, &one).unwrap();
        let six = product_profunctor(&two, &three).unwrap();
        assert_eq!(six.sizes(), &[6]);
    }

    #[test]
    fn corrupted_action_is_caught() {
        let c = Arc::new(FinCat::chain(3));
        let h = hom_profunctor(&c);
        let bad = h.clone().with_right_entry(0, c.identity(0), 0, 0);
        assert!(check_profunctor(&bad).is_ok(), "identity already sends 0 to 0");
        let two = sum_profunctor(&h, &h).unwrap();
        let bad = two.with_right_entry(0, c.identity(0), 0, 1);
        assert!(matches!(
            check_profunctor(&bad),
            Err(ProfunctorViolation::RightIdentity { .. })
        ));
    }

    #[test]
    fn generators_cover() {
        let c = Arc::new(FinCat::chain(3));
        let h = hom_profunctor(&c);
        let both = element_generators(&h, Sides::Both);
        assert_eq!(both, vec![(0, 0, 0), (1, 1, 0), (2, 2, 0)]);
        let left = element_generators(&h, Sides::Left);
        assert_eq!(left, vec![(0, 0, 0), (1, 1, 0), (2, 2, 0)]);
        let right = element_generators(&h, Sides::Right);
        assert_eq!(right, vec![(0, 0, 0), (1, 1, 0), (2, 2, 0)]);
        let z = Arc::new(
            FinCat::monoid("Z2", vec!["0".into(), "1".into()], &[vec![0, 1], vec![1, 0]], 0).unwrap(),
        );
        assert_eq!(element_generators(&hom_profunctor(&z), Sides::Left).len(), 1);
    }
}
