//! Input and output documents. Every document is a JSON object carrying
//! `"schema": "dfoperad/1"` and a `"kind"`; elements, objects and
//! operations are referred to by name.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use dfoperad::bridge::DfMonoid;
use dfoperad::dblcat::BoundedSite;
use dfoperad::fincat::{ArrowInfo, FinCat};
use dfoperad::finset::{FinMap, FinSet};
use dfoperad::multicat::{ActionTable, CommMonoid, CompositionTable, MulticatTables, Profile, SymMulticat};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA: &str = "dfoperad/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDoc {
    pub schema: String,
    pub kind: String,
    pub name: String,
    pub elements: Vec<String>,
    pub unit: String,
    /// `table[a][b]` names `a·b`.
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub sources: Vec<String>,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub profile: ProfileDoc,
    pub operations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionDoc {
    pub f: ProfileDoc,
    pub slot: usize,
    pub g: ProfileDoc,
    /// `table[f][g]` names `f ∘_slot g`.
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub profile: ProfileDoc,
    pub perm: Vec<usize>,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MulticatDoc {
    pub schema: String,
    pub kind: String,
    pub name: String,
    pub objects: Vec<String>,
    pub arity_bound: usize,
    pub homs: Vec<HomDoc>,
    /// One operation name per object, in object order.
    pub identities: Vec<String>,
    pub compositions: Vec<CompositionDoc>,
    pub actions: Vec<ActionDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub schema: String,
    pub kind: String,
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub identities: Vec<String>,
    /// `[g, f, g∘f]` for every composable pair of non-identity arrows.
    pub composites: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub map: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfMapDoc {
    pub map: MapDoc,
    pub restrict: Vec<usize>,
    pub transfer: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfMonoidDoc {
    pub schema: String,
    pub kind: String,
    pub name: String,
    pub site_bound: usize,
    pub elements: Vec<Vec<String>>,
    pub maps: Vec<DfMapDoc>,
}

/// A validated input structure.
#[derive(Debug, Clone)]
pub enum Loaded {
    Monoid(CommMonoid),
    Multicat(SymMulticat),
    Category(FinCat),
    DfMonoid(DfMonoid),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Monoid(_) => "monoid",
            Loaded::Multicat(_) => "multicat",
            Loaded::Category(_) => "category",
            Loaded::DfMonoid(_) => "df_monoid",
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_as<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    load_str(&shown, &text)
}

pub fn load_str(path: &str, text: &str) -> Result<Loaded, CliError> {
    let head: Value = parse_as(path, text)?;
    match head.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        Some(other) => return Err(invalid(format!("unsupported schema `{other}`, expected `{SCHEMA}`"))),
        None => return Err(invalid("missing `schema` field")),
    }
    match head.get("kind").and_then(Value::as_str) {
        Some("monoid") => monoid_from_doc(parse_as(path, text)?).map(Loaded::Monoid),
        Some("multicat") => multicat_from_doc(parse_as(path, text)?).map(Loaded::Multicat),
        Some("category") => category_from_doc(parse_as(path, text)?).map(Loaded::Category),
        Some("df_monoid") => df_monoid_from_doc(parse_as(path, text)?).map(Loaded::DfMonoid),
        Some(other) => Err(invalid(format!("unknown document kind `{other}`"))),
        None => Err(invalid("missing `kind` field")),
    }
}

fn index_names(what: &str, names: &[String]) -> Result<HashMap<String, usize>, CliError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(invalid(format!("{what}: `{n}` listed twice")));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, name: &str, what: impl FnOnce() -> String) -> Result<usize, CliError> {
    index.get(name).copied().ok_or_else(|| invalid(format!("{}: unknown name `{name}`", what())))
}

pub fn monoid_from_doc(d: MonoidDoc) -> Result<CommMonoid, CliError> {
    let index = index_names(&format!("monoid {}", d.name), &d.elements)?;
    let unit = lookup(&index, &d.unit, || format!("monoid {} unit", d.name))?;
    if d.table.len() != d.elements.len() || d.table.iter().any(|r| r.len() != d.elements.len()) {
        return Err(invalid(format!("monoid {}: table is not {n}x{n}", d.name, n = d.elements.len())));
    }
    let mut table = Vec::with_capacity(d.table.len());
    for (a, row) in d.table.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (b, c) in row.iter().enumerate() {
            out.push(lookup(&index, c, || {
                format!("monoid {} entry {}·{}", d.name, d.elements[a], d.elements[b])
            })?);
        }
        table.push(out);
    }
    let carrier = Arc::new(FinSet::new(d.name.clone(), d.elements.clone()).map_err(|e| invalid(e.to_string()))?);
    CommMonoid::new(d.name, carrier, &table, unit).map_err(|e| invalid(e.to_string()))
}

pub fn monoid_to_doc(m: &CommMonoid) -> MonoidDoc {
    let e = |i: usize| m.carrier().element(i).to_string();
    MonoidDoc {
        schema: SCHEMA.into(),
        kind: "monoid".into(),
        name: m.name().into(),
        elements: m.carrier().elements().to_vec(),
        unit: e(m.unit()),
        table: m.table().iter().map(|r| r.iter().map(|&c| e(c)).collect()).collect(),
    }
}

fn show_profile(p: &ProfileDoc) -> String {
    format!("({};{})", p.sources.join(","), p.target)
}

struct Homs {
    objects: HashMap<String, usize>,
    ops: HashMap<Profile, HashMap<String, usize>>,
}

impl Homs {
    fn profile(&self, p: &ProfileDoc) -> Result<Profile, CliError> {
        let at = |n: &String| lookup(&self.objects, n, || format!("profile {}", show_profile(p)));
        let sources = p.sources.iter().map(at).collect::<Result<_, _>>()?;
        Ok(Profile::new(sources, at(&p.target)?))
    }

    fn op(&self, p: &Profile, name: &str, what: impl FnOnce() -> String) -> Result<usize, CliError> {
        match self.ops.get(p) {
            Some(index) => lookup(index, name, what),
            None => Err(invalid(format!("{}: empty hom set", what()))),
        }
    }
}

pub fn multicat_from_doc(d: MulticatDoc) -> Result<SymMulticat, CliError> {
    let mut homs = Homs {
        objects: index_names(&format!("multicategory {} objects", d.name), &d.objects)?,
        ops: HashMap::new(),
    };
    let mut t = MulticatTables::default();
    for h in &d.homs {
        let p = homs.profile(&h.profile)?;
        let index = index_names(&format!("hom {}", show_profile(&h.profile)), &h.operations)?;
        if homs.ops.insert(p.clone(), index).is_some() {
            return Err(invalid(format!("hom {} listed twice", show_profile(&h.profile))));
        }
        t.homs.push((p, h.operations.clone()));
    }
    for (a, id) in d.identities.iter().enumerate() {
        let p = Profile::new(vec![a], a);
        t.identities.push(homs.op(&p, id, || format!("identity {id}"))?);
    }
    for c in &d.compositions {
        let triple = || format!("composition ({}, {}, {})", show_profile(&c.f), c.slot, show_profile(&c.g));
        let (pf, pg) = (homs.profile(&c.f)?, homs.profile(&c.g)?);
        if c.slot >= pf.arity() || pf.sources[c.slot] != pg.target {
            return Err(invalid(format!("{} is not typed", triple())));
        }
        let out = pf.substitute(c.slot, &pg);
        let mut table = Vec::with_capacity(c.table.len());
        for (i, row) in c.table.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, name) in row.iter().enumerate() {
                r.push(homs.op(&out, name, || format!("{} entry [{i}][{j}]", triple()))?);
            }
            table.push(r);
        }
        t.compositions.push(CompositionTable {
            f: pf,
            slot: c.slot,
            g: pg,
            table,
        });
    }
    for a in &d.actions {
        let what = || format!("action of {:?} on {}", a.perm, show_profile(&a.profile));
        let p = homs.profile(&a.profile)?;
        if a.perm.len() != p.arity() || a.perm.iter().any(|&t| t >= p.arity()) {
            return Err(invalid(format!("{} is not a permutation of the slots", what())));
        }
        let out = p.permute(&a.perm);
        let table = a
            .table
            .iter()
            .enumerate()
            .map(|(i, name)| homs.op(&out, name, || format!("{} entry [{i}]", what())))
            .collect::<Result<_, _>>()?;
        t.actions.push(ActionTable {
            profile: p,
            perm: a.perm.clone(),
            table,
        });
    }
    SymMulticat::from_tables(d.name.clone(), d.objects.clone(), d.arity_bound, t)
        .map_err(|e| invalid(format!("multicategory {}: {e}", d.name)))
}

pub fn multicat_to_doc(m: &SymMulticat) -> Result<MulticatDoc, CliError> {
    let t = m.to_tables().map_err(|e| invalid(e.to_string()))?;
    let profile = |p: &Profile| ProfileDoc {
        sources: p.sources.iter().map(|&s| m.objects()[s].clone()).collect(),
        target: m.objects()[p.target].clone(),
    };
    let name = |p: &Profile, a: usize| m.arrow_name(p, a);
    Ok(MulticatDoc {
        schema: SCHEMA.into(),
        kind: "multicat".into(),
        name: m.name().into(),
        objects: m.objects().to_vec(),
        arity_bound: m.arity_bound(),
        homs: t
            .homs
            .iter()
            .map(|(p, ops)| HomDoc {
                profile: profile(p),
                operations: ops.clone(),
            })
            .collect(),
        identities: t
            .identities
            .iter()
            .enumerate()
            .map(|(a, &i)| name(&Profile::new(vec![a], a), i))
            .collect(),
        compositions: t
            .compositions
            .iter()
            .map(|c| {
                let out = c.f.substitute(c.slot, &c.g);
                CompositionDoc {
                    f: profile(&c.f),
                    slot: c.slot,
                    g: profile(&c.g),
                    table: c.table.iter().map(|r| r.iter().map(|&x| name(&out, x)).collect()).collect(),
                }
            })
            .collect(),
        actions: t
            .actions
            .iter()
            .map(|a| {
                let out = a.profile.permute(&a.perm);
                ActionDoc {
                    profile: profile(&a.profile),
                    perm: a.perm.clone(),
                    table: a.table.iter().map(|&x| name(&out, x)).collect(),
                }
            })
            .collect(),
    })
}

pub fn category_from_doc(d: CategoryDoc) -> Result<FinCat, CliError> {
    let objects = index_names(&format!("category {} objects", d.name), &d.objects)?;
    let names: Vec<String> = d.arrows.iter().map(|a| a.name.clone()).collect();
    let arrow_index = index_names(&format!("category {} arrows", d.name), &names)?;
    let mut arrows = Vec::with_capacity(d.arrows.len());
    for a in &d.arrows {
        let at = |o: &str| lookup(&objects, o, || format!("arrow {}", a.name));
        arrows.push(ArrowInfo {
            name: a.name.clone(),
            source: at(&a.source)?,
            target: at(&a.target)?,
        });
    }
    let identities = d
        .identities
        .iter()
        .map(|i| lookup(&arrow_index, i, || format!("category {} identities", d.name)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut is_identity = vec![false; arrows.len()];
    for &i in &identities {
        is_identity[i] = true;
    }
    let mut comp = HashMap::new();
    for [g, f, h] in &d.composites {
        let what = || format!("composite {g} ∘ {f}");
        let (g, f, h) = (
            lookup(&arrow_index, g, what)?,
            lookup(&arrow_index, f, what)?,
            lookup(&arrow_index, h, what)?,
        );
        if comp.insert((g, f), h).is_some() {
            return Err(invalid(format!("{} listed twice", what())));
        }
    }
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
    let cat = FinCat::new(d.name.clone(), d.objects.clone(), arrows, identities, |g, f| {
        if ends[f].1 != ends[g].0 {
            None
        } else if is_identity[f] {
            Some(g)
        } else if is_identity[g] {
            Some(f)
        } else {
            comp.get(&(g, f)).copied()
        }
    })
    .map_err(|e| invalid(format!("category {}: {e}", d.name)))?;
    dfoperad::fincat::check_category(&cat)
        .map_err(|v| invalid(format!("category {}: {}", d.name, v.to_json())))?;
    Ok(cat)
}

pub fn category_to_doc(c: &FinCat) -> CategoryDoc {
    let arrow = |a: usize| c.arrow(a).name.clone();
    let mut composites = Vec::new();
    for g in 0..c.arrow_count() {
        for f in 0..c.arrow_count() {
            if c.is_identity(g) || c.is_identity(f) {
                continue;
            }
            if let Some(h) = c.compose(g, f) {
                composites.push([arrow(g), arrow(f), arrow(h)]);
            }
        }
    }
    CategoryDoc {
        schema: SCHEMA.into(),
        kind: "category".into(),
        name: c.name().into(),
        objects: c.objects().to_vec(),
        arrows: c
            .arrows()
            .iter()
            .map(|a| ArrowDoc {
                name: a.name.clone(),
                source: c.objects()[a.source].clone(),
                target: c.objects()[a.target].clone(),
            })
            .collect(),
        identities: c.identities().iter().map(|&i| arrow(i)).collect(),
        composites,
    }
}

pub fn df_monoid_from_doc(d: DfMonoidDoc) -> Result<DfMonoid, CliError> {
    let site = Arc::new(BoundedSite::new(d.site_bound).map_err(|e| CliError::Config(e.to_string()))?);
    let mut restrict = vec![None; site.map_count()];
    let mut transfer = vec![None; site.map_count()];
    for entry in &d.maps {
        let m = &entry.map;
        let what = || format!("map {} -> {} {:?}", m.source, m.target, m.map);
        let seed = |name: &str| {
            site.seeds()
                .iter()
                .find(|s| s.name() == name)
                .cloned()
                .ok_or_else(|| invalid(format!("{}: `{name}` is not a site set", what())))
        };
        let (src, tgt) = (seed(&m.source)?, seed(&m.target)?);
        if m.map.len() != src.len() {
            return Err(invalid(format!("{}: expected {} values", what(), src.len())));
        }
        let names = src.clone();
        let pairs: Vec<(&str, &str)> = names.elements().iter().map(String::as_str).zip(m.map.iter().map(String::as_str)).collect();
        let f = FinMap::from_names(src, tgt, &pairs).map_err(|e| invalid(format!("{}: {e}", what())))?;
        let id = site.map_id(&f).ok_or_else(|| invalid(format!("{}: not a site map", what())))?;
        if restrict[id].is_some() {
            return Err(invalid(format!("{} listed twice", what())));
        }
        restrict[id] = Some(entry.restrict.clone());
        transfer[id] = Some(entry.transfer.clone());
    }
    let missing = |v: &[Option<Vec<usize>>]| v.iter().position(Option::is_none);
    if let Some(id) = missing(&restrict) {
        return Err(invalid(format!("df monoid {}: no entry for {}", d.name, site.map(id))));
    }
    let unwrap = |v: Vec<Option<Vec<usize>>>| v.into_iter().map(Option::unwrap_or_default).collect();
    DfMonoid::new(site, d.name.clone(), d.elements, unwrap(restrict), unwrap(transfer))
        .map_err(|e| invalid(format!("df monoid {}: {e}", d.name)))
}

pub fn df_monoid_to_doc(fm: &DfMonoid) -> DfMonoidDoc {
    let site = fm.site();
    DfMonoidDoc {
        schema: SCHEMA.into(),
        kind: "df_monoid".into(),
        name: fm.name().into(),
        site_bound: site.bound(),
        elements: (0..=site.bound()).map(|n| fm.elements(n).to_vec()).collect(),
        maps: (0..site.map_count())
            .map(|f| {
                let m = site.map(f);
                DfMapDoc {
                    map: MapDoc {
                        source: m.source().name().into(),
                        target: m.target().name().into(),
                        map: m.assignment().iter().map(|&j| m.target().element(j).to_string()).collect(),
                    },
                    restrict: fm.restrict(f).to_vec(),
                    transfer: fm.transfer(f).to_vec(),
                }
            })
            .collect(),
    }
}
