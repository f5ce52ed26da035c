use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::FinCatError;
use crate::finset::FinSet;
use crate::radix;

/// Largest arrow count a constructed category may have; the composition
/// table is dense and quadratic in it.
pub const MAX_ARROWS: usize = 4096;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArrowInfo {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category given by explicit tables.
///
/// Composition is stored densely: `comp[g * n + f]` is `g ∘ f` when
/// `target(f) = source(g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<ArrowInfo>,
    identities: Vec<usize>,
    comp: Vec<u32>,
    homs: Vec<Vec<usize>>,
    hom_pos: Vec<usize>,
    generators: Vec<usize>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}, {} objects, {} arrows)",
            self.name,
            self.objects.len(),
            self.arrows.len()
        )
    }
}

/// A violated category law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CategoryViolation {
    LeftIdentity { object: String, arrow: String },
    RightIdentity { object: String, arrow: String },
    Associativity { h: String, g: String, f: String },
}

impl CategoryViolation {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

impl FinCat {
    /// Builds a category from tables. Only typing is validated here: the
    /// composite is defined exactly on composable pairs and has the right
    /// endpoints, and identities are endomorphisms. The laws are checked by
    /// [`check_category`].
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<ArrowInfo>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, FinCatError> {
        Self::build(name.into(), objects, arrows, identities, compose, None)
    }

    fn build(
        name: String,
        objects: Vec<String>,
        arrows: Vec<ArrowInfo>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self, FinCatError> {
        let n = arrows.len();
        if n > MAX_ARROWS {
            return Err(FinCatError::SizeExceeded {
                what: format!("category {name}"),
                size: n,
                bound: MAX_ARROWS,
            });
        }
        let no = objects.len();
        if identities.len() != no {
            return Err(FinCatError::Invalid(format!(
                "{name}: {} identities for {no} objects",
                identities.len()
            )));
        }
        for a in &arrows {
            if a.source >= no || a.target >= no {
                return Err(FinCatError::Invalid(format!(
                    "{name}: arrow {} has an endpoint out of range",
                    a.name
                )));
            }
        }
        for (x, &i) in identities.iter().enumerate() {
            if i >= n || arrows[i].source != x || arrows[i].target != x {
                return Err(FinCatError::Invalid(format!(
                    "{name}: identity of object {} is not an endomorphism of it",
                    objects[x]
                )));
            }
        }
        let mut comp = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                let c = compose(g, f);
                let composable = arrows[f].target == arrows[g].source;
                match (composable, c) {
                    (true, Some(h)) => {
                        if h >= n
                            || arrows[h].source != arrows[f].source
                            || arrows[h].target != arrows[g].target
                        {
                            return Err(FinCatError::Invalid(format!(
                                "{name}: composite {} ∘ {} is mistyped",
                                arrows[g].name, arrows[f].name
                            )));
                        }
                        comp[g * n + f] = h as u32;
                    }
                    (true, None) => {
                        return Err(FinCatError::Invalid(format!(
                            "{name}: composite {} ∘ {} is missing",
                            arrows[g].name, arrows[f].name
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(FinCatError::Invalid(format!(
                            "{name}: composite {} ∘ {} given for a non-composable pair",
                            arrows[g].name, arrows[f].name
                        )))
                    }
                    (false, None) => {}
                }
            }
        }
        let mut cat = FinCat {
            name,
            objects,
            arrows,
            identities,
            comp,
            homs: Vec::new(),
            hom_pos: Vec::new(),
            generators: Vec::new(),
        };
        cat.index_homs();
        cat.generators = match generators {
            Some(g) => g,
            None => cat.greedy_generators(),
        };
        Ok(cat)
    }

    fn index_homs(&mut self) {
        let no = self.objects.len();
        let mut homs = vec![Vec::new(); no * no];
        let mut hom_pos = vec![0; self.arrows.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            let h = &mut homs[a.source * no + a.target];
            hom_pos[i] = h.len();
            h.push(i);
        }
        self.homs = homs;
        self.hom_pos = hom_pos;
    }

    /// Non-identity arrows such that every arrow is a composite of chosen
    /// ones: all indecomposable arrows, then greedily in index order.
    fn greedy_generators(&self) -> Vec<usize> {
        let n = self.arrows.len();
        let mut decomposable = vec![false; n];
        for f in 0..n {
            for g in 0..n {
                if self.is_identity(f) || self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.compose(g, f) {
                    decomposable[h] = true;
                }
            }
        }
        let mut gens: Vec<usize> = (0..n)
            .filter(|&a| !self.is_identity(a) && !decomposable[a])
            .collect();
        let mut reached = self.closure(&gens);
        for a in 0..n {
            if !reached[a] {
                gens.push(a);
                reached = self.closure(&gens);
            }
        }
        gens.sort_unstable();
        gens
    }

    /// Arrows reachable from identities by post-composing generators.
    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut reached = vec![false; self.arrows.len()];
        let mut queue: VecDeque<usize> = self.identities.iter().copied().collect();
        for &i in &self.identities {
            reached[i] = true;
        }
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                if let Some(y) = self.compose(g, x) {
                    if !reached[y] {
                        reached[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        reached
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrows(&self) -> &[ArrowInfo] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: usize) -> &ArrowInfo {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].target
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identities[self.arrows[a].source] == a
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let c = self.comp[g * self.arrows.len() + f];
        (c != NONE).then_some(c as usize)
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.comp[g * self.arrows.len() + f] as usize
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Position of an arrow inside its hom-set.
    pub fn hom_pos(&self, a: usize) -> usize {
        self.hom_pos[a]
    }

    /// Arrows from which every arrow is a composite (identities excluded).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// A two-sided inverse of `a`, if any.
    pub fn inverse(&self, a: usize) -> Option<usize> {
        let (s, t) = (self.source(a), self.target(a));
        self.hom(t, s).iter().copied().find(|&b| {
            self.comp(b, a) == self.identities[s] && self.comp(a, b) == self.identities[t]
        })
    }

    pub fn is_iso(&self, a: usize) -> bool {
        self.inverse(a).is_some()
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn into_arc(self) -> Arc<FinCat> {
        Arc::new(self)
    }

    // stock categories

    /// One object, one arrow.
    pub fn terminal() -> Self {
        FinCat::poset("1", vec!["*".to_string()], |_, _| true)
    }

    /// The chain `0 ≤ 1 ≤ .. ≤ n-1` as a poset category.
    pub fn chain(n: usize) -> Self {
        FinCat::poset(
            format!("chain{n}"),
            (0..n).map(|i| i.to_string()).collect(),
            |x, y| x <= y,
        )
    }

    /// Discrete category on the given object names.
    pub fn discrete(name: impl Into<String>, objects: Vec<String>) -> Self {
        FinCat::poset(name, objects, |x, y| x == y)
    }

    /// The category of a preorder `le`; arrows are named `x<=y`.
    pub fn poset(
        name: impl Into<String>,
        objects: Vec<String>,
        le: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let no = objects.len();
        let mut arrows = Vec::new();
        let mut index = vec![usize::MAX; no * no];
        for x in 0..no {
            for y in 0..no {
                if le(x, y) {
                    index[x * no + y] = arrows.len();
                    let name = if x == y {
                        format!("id_{}", objects[x])
                    } else {
                        format!("{}<={}", objects[x], objects[y])
                    };
                    arrows.push(ArrowInfo {
                        name,
                        source: x,
                        target: y,
                    });
                }
            }
        }
        let identities = (0..no).map(|x| index[x * no + x]).collect();
        let arrs = arrows.clone();
        FinCat::new(name, objects, arrows, identities, |g, f| {
            (arrs[f].target == arrs[g].source).then(|| index[arrs[f].source * no + arrs[g].target])
        })
        .expect("preorder tables are well typed")
    }

    /// One-object category of a monoid given by its multiplication table
    /// `table[a][b] = a·b` (composite `a ∘ b`), unit `unit`.
    pub fn monoid(
        name: impl Into<String>,
        elements: Vec<String>,
        table: &[Vec<usize>],
        unit: usize,
    ) -> Result<Self, FinCatError> {
        let arrows = elements
            .iter()
            .map(|e| ArrowInfo {
                name: e.clone(),
                source: 0,
                target: 0,
            })
            .collect();
        FinCat::new(name, vec!["*".into()], arrows, vec![unit], |g, f| {
            table.get(g).and_then(|row| row.get(f)).copied()
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "objects": self.objects,
            "arrows": self.arrows.iter().map(|a| json!({
                "name": a.name,
                "source": self.objects[a.source],
                "target": self.objects[a.target],
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks identity laws at every object and associativity on every
/// composable triple; returns the first violation.
pub fn check_category(c: &FinCat) -> Result<(), CategoryViolation> {
    for (a, info) in c.arrows.iter().enumerate() {
        if c.comp(c.identities[info.target], a) != a {
            return Err(CategoryViolation::LeftIdentity {
                object: c.objects[info.target].clone(),
                arrow: info.name.clone(),
            });
        }
        if c.comp(a, c.identities[info.source]) != a {
            return Err(CategoryViolation::RightIdentity {
                object: c.objects[info.source].clone(),
                arrow: info.name.clone(),
            });
        }
    }
    let no = c.objects.len();
    for w in 0..no {
        for x in 0..no {
            for &f in c.hom(w, x) {
                for y in 0..no {
                    for &g in c.hom(x, y) {
                        let gf = c.comp(g, f);
                        for z in 0..no {
                            for &h in c.hom(y, z) {
                                if c.comp(h, gf) != c.comp(c.comp(h, g), f) {
                                    return Err(CategoryViolation::Associativity {
                                        h: c.arrows[h].name.clone(),
                                        g: c.arrows[g].name.clone(),
                                        f: c.arrows[f].name.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn family_name(parts: impl Iterator<Item = impl AsRef<str>>) -> String {
    let mut s = String::from("(");
    for (i, p) in parts.enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(p.as_ref());
    }
    s.push(')');
    s
}

/// `A^I`: families indexed by `I` in its element order, composed pointwise.
///
/// Objects and arrows are numbered in mixed radix with the first element of
/// `I` most significant. The generators are the arrows that are identities
/// in all coordinates but one, where they carry a generator of `A`.
pub fn power_category(a: &FinCat, index: &FinSet) -> Result<FinCat, FinCatError> {
    let k = index.len();
    let no = a.object_count();
    let na = a.arrow_count();
    let obj_count = radix::volume(&vec![no; k]).filter(|&v| v <= MAX_ARROWS);
    let arr_count = radix::volume(&vec![na; k]).filter(|&v| v <= MAX_ARROWS);
    let (Some(obj_count), Some(arr_count)) = (obj_count, arr_count) else {
        return Err(FinCatError::SizeExceeded {
            what: format!("{}^{}", a.name, index.name()),
            size: na.saturating_pow(k as u32),
            bound: MAX_ARROWS,
        });
    };
    let objects: Vec<String> = (0..obj_count)
        .map(|o| {
            family_name(
                radix::decode_uniform(o, no, k)
                    .into_iter()
                    .map(|d| a.objects[d].as_str()),
            )
        })
        .collect();
    let digits: Vec<Vec<usize>> = (0..arr_count)
        .map(|x| radix::decode_uniform(x, na, k))
        .collect();
    let arrows: Vec<ArrowInfo> = digits
        .iter()
        .map(|d| ArrowInfo {
            name: family_name(d.iter().map(|&x| a.arrows[x].name.as_str())),
            source: radix::encode_uniform(&d.iter().map(|&x| a.source(x)).collect::<Vec<_>>(), no),
            target: radix::encode_uniform(&d.iter().map(|&x| a.target(x)).collect::<Vec<_>>(), no),
        })
        .collect();
    let identities = (0..obj_count)
        .map(|o| {
            let d = radix::decode_uniform(o, no, k);
            radix::encode_uniform(&d.iter().map(|&x| a.identity(x)).collect::<Vec<_>>(), na)
        })
        .collect();
    let mut gens = Vec::new();
    for x in 0..arr_count {
        let d = &digits[x];
        let mut moving = d.iter().enumerate().filter(|(_, &c)| !a.is_identity(c));
        if let (Some((_, &c)), None) = (moving.next(), moving.next()) {
            if a.generators.contains(&c) {
                gens.push(x);
            }
        }
    }
    FinCat::build(
        format!("{}^{}", a.name, index.name()),
        objects,
        arrows,
        identities,
        |g, f| {
            let (dg, df) = (&digits[g], &digits[f]);
            let mut out = 0;
            for i in 0..k {
                out = out * na + a.compose(dg[i], df[i])?;
            }
            Some(out)
        },
        Some(gens),
    )
}

/// Binary product of categories; pairs numbered `a * |B| + b`.
pub fn product_category(a: &FinCat, b: &FinCat) -> Result<FinCat, FinCatError> {
    let (na, nb) = (a.arrow_count(), b.arrow_count());
    if na.saturating_mul(nb) > MAX_ARROWS {
        return Err(FinCatError::SizeExceeded {
            what: format!("{}x{}", a.name, b.name),
            size: na.saturating_mul(nb),
            bound: MAX_ARROWS,
        });
    }
    let nob = b.object_count();
    let objects = a
        .objects
        .iter()
        .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
        .collect();
    let arrows = (0..na * nb)
        .map(|p| {
            let (f, g) = (p / nb, p % nb);
            ArrowInfo {
                name: format!("({},{})", a.arrows[f].name, b.arrows[g].name),
                source: a.source(f) * nob + b.source(g),
                target: a.target(f) * nob + b.target(g),
            }
        })
        .collect();
    let identities = (0..a.object_count() * nob)
        .map(|o| a.identity(o / nob) * nb + b.identity(o % nob))
        .collect();
    let mut gens = Vec::new();
    for &g in a.generators() {
        for y in 0..nob {
            gens.push(g * nb + b.identity(y));
        }
    }
    for x in 0..a.object_count() {
        for &g in b.generators() {
            gens.push(a.identity(x) * nb + g);
        }
    }
    gens.sort_unstable();
    FinCat::build(
        format!("{}x{}", a.name, b.name),
        objects,
        arrows,
        identities,
        |g, f| Some(a.compose(g / nb, f / nb)? * nb + b.compose(g % nb, f % nb)?),
        Some(gens),
    )
}
