use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::monoid::CommMonoid;
use super::MulticatError;
use crate::finset::FinSet;
use crate::radix;

/// Default bound on the arity of tabulated operations.
pub const DEFAULT_ARITY_BOUND: usize = 3;

/// Largest hom set an endomorphism multicategory may have.
pub const ENDO_HOM_LIMIT: usize = 1 << 20;

/// The type `(A₁..Aₙ; B)` of an operation, objects by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile {
    pub sources: Vec<usize>,
    pub target: usize,
}

impl Profile {
    pub fn new(sources: Vec<usize>, target: usize) -> Self {
        Profile { sources, target }
    }

    pub fn arity(&self) -> usize {
        self.sources.len()
    }

    /// The profile of `f ∘_i g`: slot `i` replaced by the sources of `g`.
    pub fn substitute(&self, i: usize, g: &Profile) -> Profile {
        let mut sources = Vec::with_capacity(self.arity() + g.arity() - 1);
        sources.extend_from_slice(&self.sources[..i]);
        sources.extend_from_slice(&g.sources);
        sources.extend_from_slice(&self.sources[i + 1..]);
        Profile {
            sources,
            target: self.target,
        }
    }

    /// The profile of `p · a`: slot `t` carries source `p[t]` of `a`.
    pub fn permute(&self, p: &[usize]) -> Profile {
        Profile {
            sources: p.iter().map(|&t| self.sources[t]).collect(),
            target: self.target,
        }
    }
}

/// A partial composition table `f ∘_slot g`, indexed `[f][g]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionTable {
    pub f: Profile,
    pub slot: usize,
    pub g: Profile,
    pub table: Vec<Vec<usize>>,
}

/// The action of one permutation on one hom set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTable {
    pub profile: Profile,
    pub perm: Vec<usize>,
    pub table: Vec<usize>,
}

/// Explicit presentation of a multicategory. Profiles not listed have
/// empty hom sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticatTables {
    pub homs: Vec<(Profile, Vec<String>)>,
    pub identities: Vec<usize>,
    pub compositions: Vec<CompositionTable>,
    pub actions: Vec<ActionTable>,
}

#[derive(Debug, Clone)]
struct Tables {
    homs: BTreeMap<Profile, Vec<String>>,
    identities: Vec<usize>,
    comp: HashMap<(Profile, usize, Profile), Vec<u32>>,
    action: HashMap<(Profile, Vec<usize>), Vec<u32>>,
}

#[derive(Debug, Clone)]
enum Backing {
    Discrete(CommMonoid),
    Endo { s: usize },
    Table(Box<Tables>),
}

/// A symmetric multicategory with operations of arity at most
/// `arity_bound`.
///
/// Composition is partial: `f ∘_i g` plugs `g` into slot `i` of `f`
/// (slots from 0). A permutation `p` of `0..n` acts on `a: (A₀..Aₙ₋₁; B)`
/// giving `p · a : (A_{p[0]}..A_{p[n-1]}; B)`, so that
/// `q · (p · a) = (p ∘ q) · a`.
#[derive(Debug, Clone)]
pub struct SymMulticat {
    name: String,
    objects: Vec<String>,
    arity_bound: usize,
    backing: Backing,
    inhabited: Vec<Profile>,
}

impl SymMulticat {
    fn assemble(name: String, objects: Vec<String>, arity_bound: usize, backing: Backing) -> Self {
        let mut m = SymMulticat {
            name,
            objects,
            arity_bound,
            backing,
            inhabited: Vec::new(),
        };
        m.inhabited = m.profiles().filter(|p| m.hom_size(p) > 0).collect();
        m
    }

    /// Builds a multicategory from explicit tables, validating that every
    /// table the laws need is present and in range. The laws themselves are
    /// left to [`check_multicat`](super::check_multicat).
    pub fn from_tables(
        name: impl Into<String>,
        objects: Vec<String>,
        arity_bound: usize,
        t: MulticatTables,
    ) -> Result<Self, MulticatError> {
        let name = name.into();
        let no = objects.len();
        let mut homs = BTreeMap::new();
        for (p, arrows) in t.homs {
            if p.arity() > arity_bound {
                return Err(MulticatError::ArityExceeded {
                    arity: p.arity(),
                    bound: arity_bound,
                });
            }
            if p.target >= no || p.sources.iter().any(|&s| s >= no) {
                return Err(MulticatError::Invalid(format!("profile {p:?} names an unknown object")));
            }
            if homs.insert(p.clone(), arrows).is_some() {
                return Err(MulticatError::Invalid(format!("profile {p:?} listed twice")));
            }
        }
        if t.identities.len() != no {
            return Err(MulticatError::Invalid(format!("{} identities for {no} objects", t.identities.len())));
        }
        for (a, &id) in t.identities.iter().enumerate() {
            let size = homs.get(&Profile::new(vec![a], a)).map_or(0, Vec::len);
            if id >= size {
                return Err(MulticatError::Invalid(format!("identity of {} out of range", objects[a])));
            }
        }
        let size_of = |p: &Profile| homs.get(p).map_or(0, Vec::len);
        let mut comp = HashMap::new();
        for c in t.compositions {
            let ok_slot = c.slot < c.f.arity() && c.f.sources[c.slot] == c.g.target;
            if !ok_slot {
                return Err(MulticatError::Invalid(format!(
                    "composition ({:?}, {}, {:?}) is not typed",
                    c.f, c.slot, c.g
                )));
            }
            let out = c.f.substitute(c.slot, &c.g);
            let (nf, ng, nr) = (size_of(&c.f), size_of(&c.g), size_of(&out));
            if c.table.len() != nf || c.table.iter().any(|r| r.len() != ng) {
                return Err(MulticatError::Invalid(format!(
                    "composition ({:?}, {}, {:?}) has the wrong shape",
                    c.f, c.slot, c.g
                )));
            }
            let mut flat = Vec::with_capacity(nf * ng);
            for (f, row) in c.table.iter().enumerate() {
                for (g, &r) in row.iter().enumerate() {
                    if r >= nr {
                        return Err(MulticatError::Invalid(format!(
                            "composition ({:?}, {}, {:?}) sends ({f}, {g}) out of range",
                            c.f, c.slot, c.g
                        )));
                    }
                    flat.push(r as u32);
                }
            }
            comp.insert((c.f, c.slot, c.g), flat);
        }
        let mut action = HashMap::new();
        for a in t.actions {
            let n = a.profile.arity();
            let mut sorted = a.perm.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(MulticatError::Invalid(format!("{:?} is not a permutation of {n}", a.perm)));
            }
            let out = a.profile.permute(&a.perm);
            let (na, nr) = (size_of(&a.profile), size_of(&out));
            if a.table.len() != na || a.table.iter().any(|&r| r >= nr) {
                return Err(MulticatError::Invalid(format!(
                    "action of {:?} on {:?} is out of range",
                    a.perm, a.profile
                )));
            }
            action.insert((a.profile, a.perm), a.table.iter().map(|&r| r as u32).collect());
        }
        let tables = Tables {
            homs,
            identities: t.identities,
            comp,
            action,
        };
        let m = Self::assemble(name, objects, arity_bound, Backing::Table(Box::new(tables)));
        m.require_total()?;
        Ok(m)
    }

    fn require_total(&self) -> Result<(), MulticatError> {
        let Backing::Table(t) = &self.backing else {
            return Ok(());
        };
        for pf in &self.inhabited {
            for i in 0..pf.arity() {
                for pg in self.inhabited_into(pf.sources[i]) {
                    if pf.arity() + pg.arity() - 1 > self.arity_bound {
                        continue;
                    }
                    if !t.comp.contains_key(&(pf.clone(), i, pg.clone())) {
                        return Err(MulticatError::Invalid(format!(
                            "missing composition ({pf:?}, {i}, {pg:?})"
                        )));
                    }
                }
            }
            for p in radix::permutations(pf.arity()) {
                if !t.action.contains_key(&(pf.clone(), p.clone())) {
                    return Err(MulticatError::Invalid(format!("missing action of {p:?} on {pf:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    /// Every profile of arity at most the bound, by arity, then sources,
    /// then target.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let no = self.objects.len();
        (0..=self.arity_bound).flat_map(move |n| {
            (0..no.pow(n as u32)).flat_map(move |code| {
                let sources = radix::decode_uniform(code, no, n);
                (0..no).map(move |t| Profile::new(sources.clone(), t))
            })
        })
    }

    /// Profiles with a nonempty hom set, in [`profiles`](Self::profiles) order.
    pub fn inhabited(&self) -> &[Profile] {
        &self.inhabited
    }

    pub fn inhabited_into(&self, target: usize) -> impl Iterator<Item = &Profile> + '_ {
        self.inhabited.iter().filter(move |p| p.target == target)
    }

    pub fn hom_size(&self, p: &Profile) -> usize {
        if p.arity() > self.arity_bound {
            return 0;
        }
        match &self.backing {
            Backing::Discrete(m) => usize::from(m.product(p.sources.iter().copied()) == p.target),
            Backing::Endo { s } => s.pow(s.pow(p.arity() as u32) as u32),
            Backing::Table(t) => t.homs.get(p).map_or(0, Vec::len),
        }
    }

    pub fn arrow_name(&self, p: &Profile, a: usize) -> String {
        match &self.backing {
            Backing::Discrete(_) => "!".into(),
            Backing::Endo { s } => {
                let values = radix::decode_uniform(a, *s, s.pow(p.arity() as u32));
                values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
            }
            Backing::Table(t) => t.homs[p][a].clone(),
        }
    }

    pub fn profile_json(&self, p: &Profile) -> Value {
        json!({
            "sources": p.sources.iter().map(|&s| &self.objects[s]).collect::<Vec<_>>(),
            "target": self.objects[p.target],
        })
    }

    pub fn identity(&self, a: usize) -> usize {
        match &self.backing {
            Backing::Discrete(_) => 0,
            // the identity function, read as a truth table
            Backing::Endo { s } => radix::encode_uniform(&(0..*s).collect::<Vec<_>>(), *s),
            Backing::Table(t) => t.identities[a],
        }
    }

    /// `f ∘_i g`.
    pub fn compose(
        &self,
        pf: &Profile,
        f: usize,
        i: usize,
        pg: &Profile,
        g: usize,
    ) -> Result<usize, MulticatError> {
        if i >= pf.arity() || pf.sources[i] != pg.target {
            return Err(MulticatError::Invalid(format!("cannot plug {pg:?} into slot {i} of {pf:?}")));
        }
        let arity = pf.arity() + pg.arity() - 1;
        if arity > self.arity_bound {
            return Err(MulticatError::ArityExceeded {
                arity,
                bound: self.arity_bound,
            });
        }
        match &self.backing {
            Backing::Discrete(_) => Ok(0),
            Backing::Endo { s } => Ok(endo_compose(*s, pf.arity(), f, i, pg.arity(), g)),
            Backing::Table(t) => {
                let key = (pf.clone(), i, pg.clone());
                let ng = t.homs.get(pg).map_or(0, Vec::len);
                let table = t.comp.get(&key).ok_or_else(|| {
                    MulticatError::Invalid(format!("no composition ({pf:?}, {i}, {pg:?})"))
                })?;
                Ok(table[f * ng + g] as usize)
            }
        }
    }

    /// `p · a`.
    pub fn act(&self, pa: &Profile, p: &[usize], a: usize) -> Result<usize, MulticatError> {
        if p.len() != pa.arity() {
            return Err(MulticatError::Invalid(format!("{p:?} does not act on {pa:?}")));
        }
        match &self.backing {
            Backing::Discrete(_) => Ok(0),
            Backing::Endo { s } => Ok(endo_act(*s, p, a)),
            Backing::Table(t) => {
                let table = t
                    .action
                    .get(&(pa.clone(), p.to_vec()))
                    .ok_or_else(|| MulticatError::Invalid(format!("no action of {p:?} on {pa:?}")))?;
                Ok(table[a] as usize)
            }
        }
    }

    /// The same multicategory with explicit tables for everything.
    pub fn tabulate(&self) -> Result<SymMulticat, MulticatError> {
        SymMulticat::from_tables(self.name.clone(), self.objects.clone(), self.arity_bound, self.to_tables()?)
    }

    pub fn to_tables(&self) -> Result<MulticatTables, MulticatError> {
        let homs = self
            .inhabited
            .iter()
            .map(|p| (p.clone(), (0..self.hom_size(p)).map(|a| self.arrow_name(p, a)).collect()))
            .collect();
        let identities = (0..self.object_count()).map(|a| self.identity(a)).collect();
        let mut compositions = Vec::new();
        let mut actions = Vec::new();
        for pf in &self.inhabited {
            for i in 0..pf.arity() {
                for pg in self.inhabited_into(pf.sources[i]) {
                    if pf.arity() + pg.arity() - 1 > self.arity_bound {
                        continue;
                    }
                    let (nf, ng) = (self.hom_size(pf), self.hom_size(pg));
                    let mut table = Vec::with_capacity(nf);
                    for f in 0..nf {
                        let row = (0..ng).map(|g| self.compose(pf, f, i, pg, g)).collect::<Result<_, _>>()?;
                        table.push(row);
                    }
                    compositions.push(CompositionTable {
                        f: pf.clone(),
                        slot: i,
                        g: pg.clone(),
                        table,
                    });
                }
            }
            for p in radix::permutations(pf.arity()) {
                let table = (0..self.hom_size(pf)).map(|a| self.act(pf, &p, a)).collect::<Result<_, _>>()?;
                actions.push(ActionTable {
                    profile: pf.clone(),
                    perm: p,
                    table,
                });
            }
        }
        Ok(MulticatTables {
            homs,
            identities,
            compositions,
            actions,
        })
    }

    /// Overwrites one action entry; only for tabulated multicategories.
    pub fn with_action_entry(
        mut self,
        pa: &Profile,
        p: &[usize],
        a: usize,
        value: usize,
    ) -> Result<Self, MulticatError> {
        let Backing::Table(t) = &mut self.backing else {
            return Err(MulticatError::Invalid("only tabulated multicategories can be edited".into()));
        };
        let entry = t
            .action
            .get_mut(&(pa.clone(), p.to_vec()))
            .and_then(|table| table.get_mut(a))
            .ok_or_else(|| MulticatError::Invalid(format!("no action entry {p:?} {pa:?} {a}")))?;
        *entry = value as u32;
        Ok(self)
    }

    /// Overwrites one composition entry; only for tabulated multicategories.
    pub fn with_composition_entry(
        mut self,
        pf: &Profile,
        f: usize,
        i: usize,
        pg: &Profile,
        g: usize,
        value: usize,
    ) -> Result<Self, MulticatError> {
        let ng = self.hom_size(pg);
        let Backing::Table(t) = &mut self.backing else {
            return Err(MulticatError::Invalid("only tabulated multicategories can be edited".into()));
        };
        let entry = t
            .comp
            .get_mut(&(pf.clone(), i, pg.clone()))
            .and_then(|table| table.get_mut(f * ng + g))
            .ok_or_else(|| MulticatError::Invalid(format!("no composition entry ({pf:?}, {i}, {pg:?})")))?;
        *entry = value as u32;
        Ok(self)
    }

    /// The commutative monoid of a discrete multicategory: objects with one
    /// operation `(a, b) -> c` exactly when `c = a·b`, and one nullary
    /// operation into the unit.
    pub fn discrete_monoid(&self) -> Option<CommMonoid> {
        let no = self.object_count();
        let unique_target = |sources: Vec<usize>| {
            let mut hits = (0..no).filter(|&t| self.hom_size(&Profile::new(sources.clone(), t)) > 0);
            let t = hits.next()?;
            (hits.next().is_none() && self.hom_size(&Profile::new(sources, t)) == 1).then_some(t)
        };
        let unit = unique_target(vec![])?;
        let mut table = vec![vec![0; no]; no];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = unique_target(vec![a, b])?;
            }
        }
        let carrier = Arc::new(FinSet::new(self.name.clone(), self.objects.clone()).ok()?);
        CommMonoid::new(self.name.clone(), carrier, &table, unit).ok()
    }
}

// value tables never exceed 16 entries under the hom size limit
const ENDO_VALUES: usize = 16;
const ENDO_ARITY: usize = 16;

fn endo_values(s: usize, len: usize, mut code: usize, out: &mut [usize; ENDO_VALUES]) {
    for v in out[..len].iter_mut().rev() {
        *v = code % s;
        code /= s;
    }
}

fn odometer(digits: &mut [usize], s: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < s {
            return;
        }
        *d = 0;
    }
}

fn endo_compose(s: usize, n: usize, f: usize, i: usize, m: usize, g: usize) -> usize {
    let (mut vf, mut vg) = ([0; ENDO_VALUES], [0; ENDO_VALUES]);
    endo_values(s, s.pow(n as u32), f, &mut vf);
    endo_values(s, s.pow(m as u32), g, &mut vg);
    let r = n + m - 1;
    let mut ys = [0; ENDO_ARITY];
    let mut code = 0;
    for _ in 0..s.pow(r as u32) {
        let gi = ys[i..i + m].iter().fold(0, |acc, &d| acc * s + d);
        let mut xi = ys[..i].iter().fold(0, |acc, &d| acc * s + d);
        xi = xi * s + vg[gi];
        xi = ys[i + m..r].iter().fold(xi, |acc, &d| acc * s + d);
        code = code * s + vf[xi];
        odometer(&mut ys[..r], s);
    }
    code
}

fn endo_act(s: usize, p: &[usize], a: usize) -> usize {
    let n = p.len();
    let mut va = [0; ENDO_VALUES];
    endo_values(s, s.pow(n as u32), a, &mut va);
    let (mut ys, mut x) = ([0; ENDO_ARITY], [0; ENDO_ARITY]);
    let mut code = 0;
    for _ in 0..s.pow(n as u32) {
        for (t, &pt) in p.iter().enumerate() {
            x[pt] = ys[t];
        }
        code = code * s + va[x[..n].iter().fold(0, |acc, &d| acc * s + d)];
        odometer(&mut ys[..n], s);
    }
    code
}

/// One object `S`; the operations of arity `n` are all functions
/// `Sⁿ -> S`, composed by substitution and permuted by their arguments.
/// An operation is named by its value table over `Sⁿ` in lexicographic
/// order.
pub fn endomorphism_multicat(set: &FinSet, arity_bound: usize) -> Result<SymMulticat, MulticatError> {
    let s = set.len();
    if arity_bound >= ENDO_ARITY {
        return Err(MulticatError::ArityExceeded {
            arity: arity_bound,
            bound: ENDO_ARITY - 1,
        });
    }
    for n in 0..=arity_bound {
        let size = radix::volume(&vec![s; s.checked_pow(n as u32).unwrap_or(usize::MAX)]);
        match size {
            Some(v) if v <= ENDO_HOM_LIMIT => {}
            _ => {
                return Err(MulticatError::SizeExceeded {
                    what: format!("End({})({n})", set.name()),
                    bound: ENDO_HOM_LIMIT,
                })
            }
        }
    }
    Ok(SymMulticat::assemble(
        format!("End({})", set.name()),
        vec![set.name().to_string()],
        arity_bound,
        Backing::Endo { s },
    ))
}

/// Objects the elements of `m`, one operation `(A₁..Aₙ) -> A` exactly
/// when `A` is the product of the `Aᵢ`.
pub fn discrete_multicat(m: &CommMonoid, arity_bound: usize) -> SymMulticat {
    SymMulticat::assemble(
        format!("disc({})", m.name()),
        m.carrier().elements().to_vec(),
        arity_bound,
        Backing::Discrete(m.clone()),
    )
}

/// One object and exactly one operation of every arity.
pub fn terminal_multicat(arity_bound: usize) -> SymMulticat {
    let one = CommMonoid::from_fn("terminal", 1, |_, _| 0, 0).expect("trivial monoid");
    SymMulticat::assemble("terminal".into(), vec!["*".into()], arity_bound, Backing::Discrete(one))
}

/// Objects given, only identity operations.
pub fn identities_only_multicat(objects: Vec<String>, arity_bound: usize) -> SymMulticat {
    let no = objects.len();
    let tables = MulticatTables {
        homs: (0..no).map(|a| (Profile::new(vec![a], a), vec![format!("id_{}", objects[a])])).collect(),
        identities: vec![0; no],
        compositions: (0..no)
            .map(|a| CompositionTable {
                f: Profile::new(vec![a], a),
                slot: 0,
                g: Profile::new(vec![a], a),
                table: vec![vec![0]],
            })
            .collect(),
        actions: (0..no)
            .map(|a| ActionTable {
                profile: Profile::new(vec![a], a),
                perm: vec![0],
                table: vec![0],
            })
            .collect(),
    };
    SymMulticat::from_tables("identities", objects, arity_bound, tables).expect("identity tables are total")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endo_sizes() {
        let one = endomorphism_multicat(&FinSet::canonical(1), 3).unwrap();
        for n in 0..=3 {
            assert_eq!(one.hom_size(&Profile::new(vec![0; n], 0)), 1);
        }
        let two = endomorphism_multicat(&FinSet::canonical(2), 3).unwrap();
        assert_eq!(two.hom_size(&Profile::new(vec![0, 0], 0)), 16);
        assert!(endomorphism_multicat(&FinSet::canonical(3), 3).is_err());
    }

    #[test]
    fn swap_moves_a_projection() {
        let m = endomorphism_multicat(&FinSet::canonical(2), 2).unwrap();
        let p = Profile::new(vec![0, 0], 0);
        // first projection: values over 00,01,10,11 are 0,0,1,1
        let first = radix::encode_uniform(&[0, 0, 1, 1], 2);
        let second = radix::encode_uniform(&[0, 1, 0, 1], 2);
        assert_eq!(m.act(&p, &[1, 0], first).unwrap(), second);
        assert_ne!(m.act(&p, &[1, 0], first).unwrap(), first);
    }

    #[test]
    fn substitution_in_endo() {
        let m = endomorphism_multicat(&FinSet::canonical(2), 3).unwrap();
        let bin = Profile::new(vec![0, 0], 0);
        let and = radix::encode_uniform(&[0, 0, 0, 1], 2);
        let or = radix::encode_uniform(&[0, 1, 1, 1], 2);
        // and(x, or(y, z))
        let c = m.compose(&bin, and, 1, &bin, or).unwrap();
        let want: Vec<usize> = (0..8).map(|t| (t >> 2) & (((t >> 1) | t) & 1)).collect();
        assert_eq!(c, radix::encode_uniform(&want, 2));
        let id = m.identity(0);
        assert_eq!(m.compose(&bin, and, 0, &Profile::new(vec![0], 0), id).unwrap(), and);
    }

    #[test]
    fn discrete_homs() {
        let m = discrete_multicat(&CommMonoid::cyclic(2), 3);
        assert_eq!(m.hom_size(&Profile::new(vec![1, 1], 0)), 1);
        assert_eq!(m.hom_size(&Profile::new(vec![1, 1], 1)), 0);
        assert_eq!(m.hom_size(&Profile::new(vec![], 0)), 1);
        assert_eq!(m.hom_size(&Profile::new(vec![1], 0)), 0);
        assert_eq!(m.discrete_monoid().unwrap().table(), CommMonoid::cyclic(2).table());
        // one inhabited target per source tuple
        for p in m.profiles().filter(|p| p.target == 0) {
            let hits = (0..2).filter(|&t| m.hom_size(&Profile::new(p.sources.clone(), t)) > 0).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn tabulation_agrees() {
        let m = endomorphism_multicat(&FinSet::canonical(2), 2).unwrap();
        let t = m.tabulate().unwrap();
        assert_eq!(t.inhabited(), m.inhabited());
        let bin = Profile::new(vec![0, 0], 0);
        let un = Profile::new(vec![0], 0);
        for f in 0..16 {
            for g in 0..4 {
                assert_eq!(t.compose(&bin, f, 1, &un, g).unwrap(), m.compose(&bin, f, 1, &un, g).unwrap());
            }
            assert_eq!(t.act(&bin, &[1, 0], f).unwrap(), m.act(&bin, &[1, 0], f).unwrap());
        }
    }

    #[test]
    fn missing_tables_are_rejected() {
        let mut t = terminal_multicat(2).to_tables().unwrap();
        t.compositions.pop();
        let err = SymMulticat::from_tables("t", vec!["*".into()], 2, t).unwrap_err();
        assert!(err.to_string().contains("missing composition"));
    }
}
