//! Finite sets and mappings: the base category of finite sets at desk scale.
//!
//! Sets carry an explicit element order. That order is the canonical
//! enumeration `I -> {1..n}` used whenever a family indexed by `I` has to be
//! laid out as a list. Constructed sets (pullback apexes, sums) are named
//! deterministically from their constituents.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinSetError {
    #[error("set {set}: element {element:?} occurs twice")]
    DuplicateElement { set: String, element: String },
    #[error("set {set} has no element {element:?}")]
    UnknownElement { set: String, element: String },
    #[error("map {source_set} -> {target_set}: expected {expected} assignments, got {got}")]
    WrongArity {
        source_set: String,
        target_set: String,
        expected: usize,
        got: usize,
    },
    #[error("map into {target_set} assigns out-of-range index {index}")]
    OutOfRange { target_set: String, index: usize },
    #[error("mismatched endpoints: {left} vs {right}")]
    MismatchedEndpoints { left: String, right: String },
    #[error("squares do not commute at {element}")]
    NonCommuting { element: String },
}

/// A named finite set with a fixed element order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinSet {
    name: String,
    elements: Vec<String>,
}

impl FinSet {
    pub fn new(
        name: impl Into<String>,
        elements: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, FinSetError> {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = HashSet::with_capacity(elements.len());
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(FinSetError::DuplicateElement {
                    set: name,
                    element: e.clone(),
                });
            }
        }
        Ok(FinSet { name, elements })
    }

    /// The standard `n`-element set `{1, .., n}`, named `n`.
    pub fn canonical(n: usize) -> Self {
        FinSet {
            name: n.to_string(),
            elements: (1..=n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn singleton(name: impl Into<String>, element: impl Into<String>) -> Self {
        FinSet {
            name: name.into(),
            elements: vec![element.into()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == element)
    }

    pub fn into_arc(self) -> Arc<FinSet> {
        Arc::new(self)
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name, self.elements.join(","))
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A total mapping between finite sets, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    source: Arc<FinSet>,
    target: Arc<FinSet>,
    assignment: Vec<usize>,
}

impl FinMap {
    pub fn new(
        source: Arc<FinSet>,
        target: Arc<FinSet>,
        assignment: Vec<usize>,
    ) -> Result<Self, FinSetError> {
        if assignment.len() != source.len() {
            return Err(FinSetError::WrongArity {
                source_set: source.name.clone(),
                target_set: target.name.clone(),
                expected: source.len(),
                got: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&j| j >= target.len()) {
            return Err(FinSetError::OutOfRange {
                target_set: target.name.clone(),
                index: bad,
            });
        }
        Ok(FinMap {
            source,
            target,
            assignment,
        })
    }

    /// Builds a map from `(source element, target element)` name pairs.
    pub fn from_names(
        source: Arc<FinSet>,
        target: Arc<FinSet>,
        pairs: &[(&str, &str)],
    ) -> Result<Self, FinSetError> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (s, t) in pairs {
            let i = source
                .index_of(s)
                .ok_or_else(|| FinSetError::UnknownElement {
                    set: source.name.clone(),
                    element: s.to_string(),
                })?;
            let j = target
                .index_of(t)
                .ok_or_else(|| FinSetError::UnknownElement {
                    set: target.name.clone(),
                    element: t.to_string(),
                })?;
            assignment[i] = j;
        }
        if assignment.contains(&usize::MAX) {
            return Err(FinSetError::WrongArity {
                source_set: source.name.clone(),
                target_set: target.name.clone(),
                expected: source.len(),
                got: pairs.len(),
            });
        }
        FinMap::new(source, target, assignment)
    }

    pub fn identity(set: Arc<FinSet>) -> Self {
        let assignment = (0..set.len()).collect();
        FinMap {
            source: set.clone(),
            target: set,
            assignment,
        }
    }

    /// The constant map at target index `j`.
    pub fn constant(source: Arc<FinSet>, target: Arc<FinSet>, j: usize) -> Result<Self, FinSetError> {
        let assignment = vec![j; source.len()];
        FinMap::new(source, target, assignment)
    }

    pub fn source(&self) -> &Arc<FinSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinSet> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Source indices mapped to `j`, in source order.
    pub fn preimage(&self, j: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == j)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.assignment.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Replayable description: endpoints by name and the image of each element.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.name,
            "target": self.target.name,
            "map": self.assignment.iter().map(|&j| self.target.elements[j].clone()).collect::<Vec<_>>(),
        })
    }

    /// The inverse map when `self` is a bijection.
    pub fn inverse(&self) -> Option<FinMap> {
        if !is_bijection(self) {
            return None;
        }
        let mut inv = vec![0; self.target.len()];
        for (i, &j) in self.assignment.iter().enumerate() {
            inv[j] = i;
        }
        Some(FinMap {
            source: self.target.clone(),
            target: self.source.clone(),
            assignment: inv,
        })
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[", self.source.name, self.target.name)?;
        for (i, &j) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}>{}", self.source.elements[i], self.target.elements[j])?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A pullback square given by its apex and two projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanWitness {
    pub apex: Arc<FinSet>,
    pub left: FinMap,
    pub right: FinMap,
}

/// A binary sum with its two injections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumWitness {
    pub carrier: Arc<FinSet>,
    pub inj_left: FinMap,
    pub inj_right: FinMap,
}

fn check_same(a: &FinSet, b: &FinSet) -> Result<(), FinSetError> {
    if a == b {
        Ok(())
    } else {
        Err(FinSetError::MismatchedEndpoints {
            left: a.name.clone(),
            right: b.name.clone(),
        })
    }
}

/// Diagrammatic composite: first `f`, then `g`.
pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap, FinSetError> {
    check_same(&f.target, &g.source)?;
    Ok(FinMap {
        source: f.source.clone(),
        target: g.target.clone(),
        assignment: f.assignment.iter().map(|&j| g.assignment[j]).collect(),
    })
}

/// The canonical pullback of the cospan `I -f-> K <-g- L`.
///
/// Apex elements are the commuting pairs `(i,l)` in lexicographic order of
/// the two source orders.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<SpanWitness, FinSetError> {
    check_same(&f.target, &g.target)?;
    let mut pairs = Vec::new();
    for i in 0..f.source.len() {
        for l in 0..g.source.len() {
            if f.assignment[i] == g.assignment[l] {
                pairs.push((i, l));
            }
        }
    }
    let apex = Arc::new(FinSet {
        name: format!("{}x[{}]{}", f.source.name, f.target.name, g.source.name),
        elements: pairs
            .iter()
            .map(|&(i, l)| format!("({},{})", f.source.elements[i], g.source.elements[l]))
            .collect(),
    });
    let left = FinMap {
        source: apex.clone(),
        target: f.source.clone(),
        assignment: pairs.iter().map(|p| p.0).collect(),
    };
    let right = FinMap {
        source: apex.clone(),
        target: g.source.clone(),
        assignment: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(SpanWitness { apex, left, right })
}

/// Tagged disjoint union: left elements `(l,i)` first, then right `(r,j)`.
pub fn disjoint_sum(left: &Arc<FinSet>, right: &Arc<FinSet>) -> SumWitness {
    let mut elements = Vec::with_capacity(left.len() + right.len());
    elements.extend(left.elements.iter().map(|e| format!("(l,{e})")));
    elements.extend(right.elements.iter().map(|e| format!("(r,{e})")));
    let carrier = Arc::new(FinSet {
        name: format!("{}+{}", left.name, right.name),
        elements,
    });
    let inj_left = FinMap {
        source: left.clone(),
        target: carrier.clone(),
        assignment: (0..left.len()).collect(),
    };
    let inj_right = FinMap {
        source: right.clone(),
        target: carrier.clone(),
        assignment: (left.len()..left.len() + right.len()).collect(),
    };
    SumWitness {
        carrier,
        inj_left,
        inj_right,
    }
}

/// `f + g : I + K -> J + L` together with the two sums it runs between.
pub fn sum_of_maps(f: &FinMap, g: &FinMap) -> (SumWitness, SumWitness, FinMap) {
    let top = disjoint_sum(&f.source, &g.source);
    let bottom = disjoint_sum(&f.target, &g.target);
    let offset = f.target.len();
    let assignment = f
        .assignment
        .iter()
        .copied()
        .chain(g.assignment.iter().map(|&j| j + offset))
        .collect();
    let map = FinMap {
        source: top.carrier.clone(),
        target: bottom.carrier.clone(),
        assignment,
    };
    (top, bottom, map)
}

/// One fiber of a map: `f_j : f^{-1}(j) -> {j}` plus its inclusion into the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub point: usize,
    pub inclusion: FinMap,
    pub map: FinMap,
}

pub fn fiber_decompose(f: &FinMap) -> Vec<Fiber> {
    (0..f.target.len())
        .map(|j| {
            let members = f.preimage(j);
            let point_name = &f.target.elements[j];
            let fiber_set = Arc::new(FinSet {
                name: format!("{}|{}", f.source.name, point_name),
                elements: members.iter().map(|&i| f.source.elements[i].clone()).collect(),
            });
            let point = Arc::new(FinSet::singleton(format!("{{{point_name}}}"), point_name.clone()));
            Fiber {
                point: j,
                inclusion: FinMap {
                    source: fiber_set.clone(),
                    target: f.source.clone(),
                    assignment: members,
                },
                map: FinMap {
                    source: fiber_set,
                    target: point,
                    assignment: vec![0; f.preimage(j).len()],
                },
            }
        })
        .collect()
}

pub fn is_injective(f: &FinMap) -> bool {
    let mut seen = vec![false; f.target.len()];
    f.assignment.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
}

pub fn is_surjective(f: &FinMap) -> bool {
    let mut hit = vec![false; f.target.len()];
    for &j in &f.assignment {
        hit[j] = true;
    }
    hit.into_iter().all(|h| h)
}

pub fn is_bijection(f: &FinMap) -> bool {
    f.source.len() == f.target.len() && is_injective(f)
}

/// Whether the commuting square `k;g = f;l` is a pullback, i.e. the induced
/// map from `I` into the canonical pullback of `(l, g)` is a bijection.
///
/// `f: I -> J`, `k: I -> L`, `g: L -> K`, `l: J -> K`.
pub fn is_pullback_square(
    f: &FinMap,
    k: &FinMap,
    g: &FinMap,
    l: &FinMap,
) -> Result<bool, FinSetError> {
    check_same(&f.source, &k.source)?;
    check_same(&k.target, &g.source)?;
    check_same(&f.target, &l.source)?;
    check_same(&g.target, &l.target)?;
    for i in 0..f.source.len() {
        if g.assignment[k.assignment[i]] != l.assignment[f.assignment[i]] {
            return Err(FinSetError::NonCommuting {
                element: f.source.elements[i].clone(),
            });
        }
    }
    let mut count = 0usize;
    for j in 0..l.source.len() {
        for x in 0..g.source.len() {
            if l.assignment[j] == g.assignment[x] {
                count += 1;
            }
        }
    }
    if count != f.source.len() {
        return Ok(false);
    }
    let mut seen = HashSet::with_capacity(count);
    Ok((0..f.source.len()).all(|i| seen.insert((f.assignment[i], k.assignment[i]))))
}

/// Whether `I -a-> R <-b- K` exhibits `R` as a sum.
pub fn is_sum(a: &FinMap, b: &FinMap) -> Result<bool, FinSetError> {
    check_same(&a.target, &b.target)?;
    let mut hits = vec![0usize; a.target.len()];
    for &j in a.assignment.iter().chain(b.assignment.iter()) {
        hits[j] += 1;
    }
    Ok(hits.into_iter().all(|h| h == 1))
}

/// A double square over a sum:
///
/// ```text
///   I --top_left--> R <--top_right-- K
///   |left           |middle          |right
///   J ---inj_l---> J+L <---inj_r---- L
/// ```
#[derive(Debug, Clone)]
pub struct ExtensiveDiagram {
    pub bottom: SumWitness,
    pub top_left: FinMap,
    pub top_right: FinMap,
    pub left: FinMap,
    pub middle: FinMap,
    pub right: FinMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensiveVerdict {
    pub top_is_sum: bool,
    pub left_is_pullback: bool,
    pub right_is_pullback: bool,
}

impl ExtensiveVerdict {
    /// The extensivity equivalence: top row a sum iff both squares are pullbacks.
    pub fn holds(&self) -> bool {
        self.top_is_sum == (self.left_is_pullback && self.right_is_pullback)
    }
}

pub fn check_extensive(d: &ExtensiveDiagram) -> Result<ExtensiveVerdict, FinSetError> {
    let left_is_pullback = is_pullback_square(&d.left, &d.top_left, &d.middle, &d.bottom.inj_left)?;
    let right_is_pullback =
        is_pullback_square(&d.right, &d.top_right, &d.middle, &d.bottom.inj_right)?;
    let top_is_sum = is_sum(&d.top_left, &d.top_right)?;
    Ok(ExtensiveVerdict {
        top_is_sum,
        left_is_pullback,
        right_is_pullback,
    })
}

/// All maps `source -> target`, assignments in lexicographic order.
pub fn all_maps(source: &Arc<FinSet>, target: &Arc<FinSet>) -> Vec<FinMap> {
    let n = source.len();
    let m = target.len();
    if m == 0 && n > 0 {
        return Vec::new();
    }
    let total = m.pow(n as u32);
    (0..total)
        .map(|code| FinMap {
            source: source.clone(),
            target: target.clone(),
            assignment: crate::radix::decode_uniform(code, m.max(1), n),
        })
        .collect()
}

/// All bijections `source -> target` (empty unless the sizes agree).
pub fn all_bijections(source: &Arc<FinSet>, target: &Arc<FinSet>) -> Vec<FinMap> {
    if source.len() != target.len() {
        return Vec::new();
    }
    crate::radix::permutations(source.len())
        .into_iter()
        .map(|p| FinMap {
            source: source.clone(),
            target: target.clone(),
            assignment: p,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, els: &[&str]) -> Arc<FinSet> {
        Arc::new(FinSet::new(name, els.iter().copied()).unwrap())
    }

    #[test]
    fn duplicate_elements_rejected() {
        assert!(matches!(
            FinSet::new("A", ["a", "a"]),
            Err(FinSetError::DuplicateElement { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let ab = set("AB", &["a", "b"]);
        let x = set("X", &["x"]);
        let f = FinMap::constant(ab.clone(), x.clone(), 0).unwrap();
        assert_eq!(compose(&FinMap::identity(ab.clone()), &f).unwrap(), f);

        let a = set("A", &["a"]);
        let y = set("Y", &["y"]);
        let fa = FinMap::new(a.clone(), x.clone(), vec![0]).unwrap();
        let gx = FinMap::new(x.clone(), y.clone(), vec![0]).unwrap();
        let h = compose(&fa, &gx).unwrap();
        assert_eq!(h.assignment(), &[0]);
        assert_eq!(h.target().as_ref(), y.as_ref());

        let xy = set("XY", &["x", "y"]);
        let z = set("Z", &["z"]);
        let f2 = FinMap::new(ab.clone(), xy.clone(), vec![0, 1]).unwrap();
        let g2 = FinMap::constant(xy, z.clone(), 0).unwrap();
        assert_eq!(
            compose(&f2, &g2).unwrap(),
            FinMap::constant(ab, z, 0).unwrap()
        );
    }

    #[test]
    fn compose_mismatch_errors() {
        let a = set("A", &["a"]);
        let b = set("B", &["b"]);
        let f = FinMap::identity(a);
        let g = FinMap::identity(b);
        assert!(matches!(
            compose(&f, &g),
            Err(FinSetError::MismatchedEndpoints { .. })
        ));
    }

    #[test]
    fn pullback_examples() {
        let ab = set("AB", &["a", "b"]);
        let c = set("C", &["c"]);
        let pt = set("*", &["*"]);
        let f = FinMap::constant(ab.clone(), pt.clone(), 0).unwrap();
        let g = FinMap::constant(c.clone(), pt.clone(), 0).unwrap();
        let w = pullback(&f, &g).unwrap();
        assert_eq!(w.apex.elements(), &["(a,c)", "(b,c)"]);

        let ones = set("I", &["1", "2"]);
        let xy = set("XY", &["x", "y"]);
        let pq = set("PQ", &["p", "q"]);
        let f = FinMap::new(ones, xy.clone(), vec![0, 1]).unwrap();
        let g = FinMap::new(pq.clone(), xy.clone(), vec![0, 0]).unwrap();
        let w = pullback(&f, &g).unwrap();
        assert_eq!(w.apex.elements(), &["(1,p)", "(1,q)"]);
        assert_eq!(w.left.assignment(), &[0, 0]);
        assert_eq!(w.right.assignment(), &[0, 1]);

        // along an identity the apex is the graph of g
        let g = FinMap::new(pq, xy.clone(), vec![1, 0]).unwrap();
        let w = pullback(&FinMap::identity(xy), &g).unwrap();
        assert_eq!(w.apex.elements(), &["(x,q)", "(y,p)"]);
        assert!(is_bijection(&w.right));
    }

    #[test]
    fn sum_examples() {
        let empty = set("E", &[]);
        let j = set("J", &["a", "b"]);
        let s = disjoint_sum(&empty, &j);
        assert_eq!(s.carrier.len(), 2);
        assert!(is_bijection(&s.inj_right));

        let a = set("A", &["a"]);
        let s = disjoint_sum(&a, &a);
        assert_eq!(s.carrier.elements(), &["(l,a)", "(r,a)"]);

        let s = disjoint_sum(&set("AB", &["a", "b"]), &set("C", &["c"]));
        assert_eq!(s.carrier.len(), 3);
        assert!(is_sum(&s.inj_left, &s.inj_right).unwrap());
    }

    #[test]
    fn fiber_examples() {
        let i = set("I", &["1", "2", "3"]);
        let rs = set("J", &["r", "s"]);
        let f = FinMap::new(i, rs, vec![0, 0, 1]).unwrap();
        let fibers = fiber_decompose(&f);
        assert_eq!(fibers[0].map.source().elements(), &["1", "2"]);
        assert_eq!(fibers[0].map.target().elements(), &["r"]);
        assert_eq!(fibers[1].map.source().elements(), &["3"]);

        let ab = set("AB", &["a", "b"]);
        let fib = fiber_decompose(&FinMap::identity(ab.clone()));
        assert!(fib.iter().all(|x| x.map.source().len() == 1));

        let xy = set("XY", &["x", "y"]);
        let fib = fiber_decompose(&FinMap::constant(ab, xy, 0).unwrap());
        assert_eq!(fib[0].map.source().len(), 2);
        assert!(fib[1].map.source().is_empty());
    }

    #[test]
    fn bijection_examples() {
        let ab = set("AB", &["a", "b"]);
        assert!(is_bijection(&FinMap::identity(ab.clone())));
        assert!(is_bijection(&FinMap::new(ab.clone(), ab.clone(), vec![1, 0]).unwrap()));
        let x = set("X", &["x"]);
        assert!(!is_bijection(&FinMap::constant(ab, x, 0).unwrap()));
    }

    fn canonical_extensive(f: &FinMap, g: &FinMap) -> ExtensiveDiagram {
        let (top, bottom, middle) = sum_of_maps(f, g);
        ExtensiveDiagram {
            bottom,
            top_left: top.inj_left,
            top_right: top.inj_right,
            left: f.clone(),
            middle,
            right: g.clone(),
        }
    }

    #[test]
    fn extensive_on_sum_of_maps() {
        let i = set("I", &["1", "2", "3"]);
        let j = set("J", &["r", "s"]);
        let k = set("K", &["p"]);
        let l = set("L", &["q"]);
        let f = FinMap::new(i, j, vec![0, 0, 1]).unwrap();
        let g = FinMap::new(k, l, vec![0]).unwrap();
        let v = check_extensive(&canonical_extensive(&f, &g)).unwrap();
        assert!(v.top_is_sum && v.left_is_pullback && v.right_is_pullback);
        assert!(v.holds());
    }

    #[test]
    fn extensive_from_pullbacks_over_injections() {
        let jl = disjoint_sum(&set("J", &["x", "y"]), &set("L", &["z"]));
        let r = set("R", &["1", "2", "3", "4"]);
        let middle = FinMap::new(r, jl.carrier.clone(), vec![2, 0, 1, 0]).unwrap();
        let pl = pullback(&jl.inj_left, &middle).unwrap();
        let pr = pullback(&jl.inj_right, &middle).unwrap();
        let d = ExtensiveDiagram {
            bottom: jl,
            top_left: pl.right.clone(),
            top_right: pr.right.clone(),
            left: pl.left.clone(),
            middle,
            right: pr.left.clone(),
        };
        let v = check_extensive(&d).unwrap();
        assert!(v.top_is_sum, "pullbacks along injections cover R");
        assert!(v.holds());
    }

    #[test]
    fn extensive_detects_non_commuting() {
        let jl = disjoint_sum(&set("J", &["x"]), &set("L", &["z"]));
        let i = set("I", &["1"]);
        let k = set("K", &["2"]);
        let r = set("R", &["1", "2"]);
        let d = ExtensiveDiagram {
            top_left: FinMap::new(i.clone(), r.clone(), vec![0]).unwrap(),
            top_right: FinMap::new(k.clone(), r.clone(), vec![1]).unwrap(),
            left: FinMap::new(i, jl.inj_left.source().clone(), vec![0]).unwrap(),
            // sends 1 to the right summand although 1 sits over J
            middle: FinMap::new(r, jl.carrier.clone(), vec![1, 1]).unwrap(),
            right: FinMap::new(k, jl.inj_right.source().clone(), vec![0]).unwrap(),
            bottom: jl,
        };
        assert!(matches!(
            check_extensive(&d),
            Err(FinSetError::NonCommuting { .. })
        ));
    }

    #[test]
    fn all_maps_counts() {
        let a = Arc::new(FinSet::canonical(2));
        let b = Arc::new(FinSet::canonical(3));
        let e = Arc::new(FinSet::canonical(0));
        assert_eq!(all_maps(&a, &b).len(), 9);
        assert_eq!(all_maps(&e, &b).len(), 1);
        assert_eq!(all_maps(&a, &e).len(), 0);
        assert_eq!(all_maps(&e, &e).len(), 1);
        assert_eq!(all_bijections(&b, &b).len(), 6);
    }
}
