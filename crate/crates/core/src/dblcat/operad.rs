use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

use super::site::{BoundedSite, Square};
use super::DblCatError;
use crate::fincat::{CatFunctor, FinCat, ProfCell, Profunctor};
use crate::finset::{FinMap, FinSet};

/// `(a, b) ↦ μ(a, b)` on one block of a laxity cell.
pub type Kernel2<'a> = Box<dyn Fn(usize, usize) -> usize + 'a>;
/// `e ↦ α(e)` on one fiber of a square cell.
pub type Kernel1<'a> = Box<dyn Fn(usize) -> usize + 'a>;

/// Computation rules of a product-preserving normal lax double functor
/// `M: (Pb Set_f)^op -> Cat`.
///
/// For `f: I -> J` the proarrow `Φ_f: MI ⇸ MJ`; for `l: J -> K` the functor
/// `l* : MK -> MJ`. Laxity cells and square cells are given blockwise:
///
/// * `laxity(f, g, x, y, z)` maps `Φ_f(x, y) × Φ_g(y, z) -> Φ_{f;g}(x, z)`;
/// * `square_cell(sq, x, a)` maps `Φ_g(x, a) -> Φ_f(k* x, l* a)` for the
///   square `(f, k, g, l)`.
///
/// Rules receive the memoizing wrapper so they can share its tables.
pub trait DfOperadRules: Send + Sync {
    fn name(&self) -> String;

    fn category(&self, set: &FinSet) -> Result<FinCat, DblCatError>;

    fn reindex(&self, op: &DfOperad, l: &FinMap) -> Result<CatFunctor, DblCatError>;

    fn proarrow(&self, op: &DfOperad, f: &FinMap) -> Result<Profunctor, DblCatError>;

    #[allow(clippy::too_many_arguments)]
    fn laxity<'a>(
        &'a self,
        op: &'a DfOperad,
        f: &FinMap,
        g: &FinMap,
        x: usize,
        y: usize,
        z: usize,
    ) -> Result<Kernel2<'a>, DblCatError>;

    fn square_cell<'a>(
        &'a self,
        op: &'a DfOperad,
        sq: &Square<'_>,
        x: usize,
        a: usize,
    ) -> Result<Kernel1<'a>, DblCatError>;
}

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn memo<K: Hash + Eq + Clone, V>(
    table: &Memo<K, V>,
    key: &K,
    make: impl FnOnce() -> Result<V, DblCatError>,
) -> Result<Arc<V>, DblCatError> {
    if let Some(v) = table.read().expect("memo lock").get(key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    // a racing writer computed the same value; keep the first
    let mut w = table.write().expect("memo lock");
    Ok(w.entry(key.clone()).or_insert(v).clone())
}

fn by_id<V>(slot: &OnceLock<Arc<V>>, make: impl FnOnce() -> Result<V, DblCatError>) -> Result<Arc<V>, DblCatError> {
    if let Some(v) = slot.get() {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    Ok(slot.get_or_init(|| v).clone())
}

/// A DF operad: rules over a bounded site, with memoized categories,
/// reindexing functors and proarrows.
pub struct DfOperad {
    site: Arc<BoundedSite>,
    rules: Box<dyn DfOperadRules>,
    categories: Memo<FinSet, FinCat>,
    functors: Memo<FinMap, CatFunctor>,
    proarrows: Memo<FinMap, Profunctor>,
    // site maps are looked up by id, skipping the hash of the map
    site_functors: Vec<OnceLock<Arc<CatFunctor>>>,
    site_proarrows: Vec<OnceLock<Arc<Profunctor>>>,
}

impl std::fmt::Debug for DfOperad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DfOperad({}, bound {})", self.rules.name(), self.site.bound())
    }
}

impl DfOperad {
    pub fn new(site: Arc<BoundedSite>, rules: impl DfOperadRules + 'static) -> Self {
        let n = site.map_count();
        DfOperad {
            site,
            rules: Box::new(rules),
            categories: RwLock::default(),
            functors: RwLock::default(),
            proarrows: RwLock::default(),
            site_functors: (0..n).map(|_| OnceLock::new()).collect(),
            site_proarrows: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn site(&self) -> &Arc<BoundedSite> {
        &self.site
    }

    pub fn name(&self) -> String {
        self.rules.name()
    }

    pub fn rules(&self) -> &dyn DfOperadRules {
        self.rules.as_ref()
    }

    /// `MI`; sets above the site bound are refused.
    pub fn category(&self, set: &FinSet) -> Result<Arc<FinCat>, DblCatError> {
        self.site.require(|| format!("category over {}", set.name()), set.len())?;
        memo(&self.categories, set, || self.rules.category(set))
    }

    /// `l* : MK -> MJ` for `l: J -> K`.
    pub fn reindex(&self, l: &FinMap) -> Result<Arc<CatFunctor>, DblCatError> {
        match self.site.map_id(l) {
            Some(id) => by_id(&self.site_functors[id], || self.rules.reindex(self, l)),
            None => memo(&self.functors, l, || self.rules.reindex(self, l)),
        }
    }

    /// `Φ_f : MI ⇸ MJ`.
    pub fn proarrow(&self, f: &FinMap) -> Result<Arc<Profunctor>, DblCatError> {
        match self.site.map_id(f) {
            Some(id) => by_id(&self.site_proarrows[id], || self.rules.proarrow(self, f)),
            None => memo(&self.proarrows, f, || self.rules.proarrow(self, f)),
        }
    }

    pub fn laxity<'a>(
        &'a self,
        f: &FinMap,
        g: &FinMap,
        x: usize,
        y: usize,
        z: usize,
    ) -> Result<Kernel2<'a>, DblCatError> {
        self.rules.laxity(self, f, g, x, y, z)
    }

    pub fn square_cell<'a>(
        &'a self,
        sq: &Square<'_>,
        x: usize,
        a: usize,
    ) -> Result<Kernel1<'a>, DblCatError> {
        self.rules.square_cell(self, sq, x, a)
    }

    /// The cell of a square, tabulated.
    pub fn cell(&self, sq: &Square<'_>) -> Result<ProfCell, DblCatError> {
        let left = self.proarrow(sq.g)?;
        let right = self.proarrow(sq.f)?;
        let top = self.reindex(sq.k)?;
        let bottom = self.reindex(sq.l)?;
        let mut err = None;
        let cell = ProfCell::from_blocks(
            left.clone(),
            right,
            (*top).clone(),
            (*bottom).clone(),
            |x, a, out| match self.square_cell(sq, x, a) {
                Ok(k) => out.extend((0..left.size(x, a)).map(k)),
                Err(e) => {
                    err.get_or_insert(e);
                    out.resize(left.size(x, a), 0);
                }
            },
        );
        match err {
            Some(e) => Err(e),
            None => Ok(cell?),
        }
    }
}

/// The DF operad with every `MI` terminal and every `Φ_f` a singleton.
#[derive(Debug, Clone, Copy, Default)]
pub struct TerminalDf;

impl DfOperadRules for TerminalDf {
    fn name(&self) -> String {
        "terminal".into()
    }

    fn category(&self, _set: &FinSet) -> Result<FinCat, DblCatError> {
        Ok(FinCat::terminal())
    }

    fn reindex(&self, op: &DfOperad, l: &FinMap) -> Result<CatFunctor, DblCatError> {
        let t = op.category(l.target())?;
        let s = op.category(l.source())?;
        Ok(CatFunctor::constant(t, s, 0))
    }

    fn proarrow(&self, op: &DfOperad, f: &FinMap) -> Result<Profunctor, DblCatError> {
        let (s, t) = (op.category(f.source())?, op.category(f.target())?);
        Ok(Profunctor::from_fn(s, t, |_, _| 1, |_, _, _| 0, |_, _, _| 0)?)
    }

    fn laxity<'a>(
        &'a self,
        _op: &'a DfOperad,
        _f: &FinMap,
        _g: &FinMap,
        _x: usize,
        _y: usize,
        _z: usize,
    ) -> Result<Kernel2<'a>, DblCatError> {
        Ok(Box::new(|_, _| 0))
    }

    fn square_cell<'a>(
        &'a self,
        _op: &'a DfOperad,
        _sq: &Square<'_>,
        _x: usize,
        _a: usize,
    ) -> Result<Kernel1<'a>, DblCatError> {
        Ok(Box::new(|_| 0))
    }
}
