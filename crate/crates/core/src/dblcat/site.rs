use std::ops::Range;
use std::sync::Arc;

use serde_json::{json, Value};

use super::DblCatError;
use crate::finset::{all_maps, compose, disjoint_sum, FinMap, FinSet, SumWitness};
use crate::radix;

/// A pullback square of finite sets
///
/// ```text
///   I --k--> L
///   |f       |g
///   v        v
///   J --l--> K
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Square<'a> {
    pub f: &'a FinMap,
    pub k: &'a FinMap,
    pub g: &'a FinMap,
    pub l: &'a FinMap,
}

impl Square<'_> {
    pub fn to_json(&self) -> Value {
        json!({
            "f": self.f.to_json(),
            "k": self.k.to_json(),
            "g": self.g.to_json(),
            "l": self.l.to_json(),
        })
    }
}

/// The finite stand-in for the category of finite sets and pullbacks:
/// the canonical sets `0, 1, .., bound` (named by their size, elements
/// `1..n`), every map between them, and every pullback square among them.
///
/// A pullback square is stored once per labelling of its apex: for a cospan
/// `J -l-> K <-g- L` whose pullback has `p ≤ bound` elements, each
/// bijection of the seed `p` onto the canonical pullback gives one square.
/// Maps are numbered by source size, then target size, then assignment in
/// lexicographic order.
#[derive(Debug)]
pub struct BoundedSite {
    bound: usize,
    seeds: Vec<Arc<FinSet>>,
    maps: Vec<FinMap>,
    offsets: Vec<usize>,
    src: Vec<u8>,
    tgt: Vec<u8>,
    squares: Vec<[u32; 4]>,
    by_top: Vec<Vec<u32>>,
    by_left: Vec<Vec<u32>>,
}

/// Largest bound the site accepts; the square count grows quickly.
pub const MAX_SITE_BOUND: usize = 5;

impl BoundedSite {
    pub fn new(bound: usize) -> Result<Self, DblCatError> {
        if bound == 0 || bound > MAX_SITE_BOUND {
            return Err(DblCatError::SiteClosureExceeded {
                what: "site bound".into(),
                size: bound,
                bound: MAX_SITE_BOUND,
            });
        }
        let seeds: Vec<Arc<FinSet>> = (0..=bound).map(|n| Arc::new(FinSet::canonical(n))).collect();
        let mut maps = Vec::new();
        let mut offsets = Vec::with_capacity((bound + 1) * (bound + 1) + 1);
        let (mut src, mut tgt) = (Vec::new(), Vec::new());
        for m in 0..=bound {
            for n in 0..=bound {
                offsets.push(maps.len());
                for f in all_maps(&seeds[m], &seeds[n]) {
                    src.push(m as u8);
                    tgt.push(n as u8);
                    maps.push(f);
                }
            }
        }
        offsets.push(maps.len());
        let mut site = BoundedSite {
            bound,
            seeds,
            maps,
            offsets,
            src,
            tgt,
            squares: Vec::new(),
            by_top: Vec::new(),
            by_left: Vec::new(),
        };
        site.build_squares();
        Ok(site)
    }

    fn build_squares(&mut self) {
        let b = self.bound;
        let perms: Vec<Vec<Vec<usize>>> = (0..=b).map(radix::permutations).collect();
        let mut squares = Vec::new();
        let mut pairs = Vec::new();
        for kk in 0..=b {
            for jj in 0..=b {
                for l in self.maps_between(jj, kk) {
                    let la = self.maps[l].assignment();
                    for ll in 0..=b {
                        for g in self.maps_between(ll, kk) {
                            let ga = self.maps[g].assignment();
                            pairs.clear();
                            for (j, &lj) in la.iter().enumerate() {
                                for (x, &gx) in ga.iter().enumerate() {
                                    if lj == gx {
                                        pairs.push((j, x));
                                    }
                                }
                            }
                            let p = pairs.len();
                            if p > b {
                                continue;
                            }
                            for perm in &perms[p] {
                                let fa: Vec<usize> = perm.iter().map(|&q| pairs[q].0).collect();
                                let ka: Vec<usize> = perm.iter().map(|&q| pairs[q].1).collect();
                                let f = self.offset(p, jj) + radix::encode_uniform(&fa, jj.max(1));
                                let k = self.offset(p, ll) + radix::encode_uniform(&ka, ll.max(1));
                                squares.push([f as u32, k as u32, g as u32, l as u32]);
                            }
                        }
                    }
                }
            }
        }
        squares.sort_unstable();
        let mut by_top = vec![Vec::new(); self.maps.len()];
        let mut by_left = vec![Vec::new(); self.maps.len()];
        for (i, s) in squares.iter().enumerate() {
            by_left[s[0] as usize].push(i as u32);
            by_top[s[1] as usize].push(i as u32);
        }
        self.squares = squares;
        self.by_top = by_top;
        self.by_left = by_left;
    }

    fn offset(&self, m: usize, n: usize) -> usize {
        self.offsets[m * (self.bound + 1) + n]
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn seeds(&self) -> &[Arc<FinSet>] {
        &self.seeds
    }

    pub fn seed(&self, n: usize) -> &Arc<FinSet> {
        &self.seeds[n]
    }

    /// Index of `set` among the seeds, if it is one.
    pub fn seed_of(&self, set: &FinSet) -> Option<usize> {
        self.seeds
            .get(set.len())
            .filter(|s| std::ptr::eq(s.as_ref(), set) || s.as_ref() == set)
            .map(|_| set.len())
    }

    /// Errors unless `size` is within the bound.
    pub fn require(&self, what: impl FnOnce() -> String, size: usize) -> Result<(), DblCatError> {
        if size > self.bound {
            Err(DblCatError::SiteClosureExceeded {
                what: what(),
                size,
                bound: self.bound,
            })
        } else {
            Ok(())
        }
    }

    pub fn map_count(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, id: usize) -> &FinMap {
        &self.maps[id]
    }

    pub fn maps(&self) -> &[FinMap] {
        &self.maps
    }

    pub fn source_size(&self, id: usize) -> usize {
        self.src[id] as usize
    }

    pub fn target_size(&self, id: usize) -> usize {
        self.tgt[id] as usize
    }

    pub fn maps_between(&self, m: usize, n: usize) -> Range<usize> {
        let i = m * (self.bound + 1) + n;
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Maps out of the seed of size `m`, in id order.
    pub fn maps_from(&self, m: usize) -> Range<usize> {
        self.offset(m, 0)..self.offsets[(m + 1) * (self.bound + 1)]
    }

    pub fn map_id(&self, f: &FinMap) -> Option<usize> {
        let (m, n) = (self.seed_of(f.source())?, self.seed_of(f.target())?);
        Some(self.offset(m, n) + radix::encode_uniform(f.assignment(), n.max(1)))
    }

    pub fn identity_id(&self, n: usize) -> usize {
        let id: Vec<usize> = (0..n).collect();
        self.offset(n, n) + radix::encode_uniform(&id, n.max(1))
    }

    /// Id of the diagrammatic composite `f ; g`.
    pub fn compose_ids(&self, f: usize, g: usize) -> usize {
        let (m, n) = (self.source_size(f), self.target_size(g));
        let ga = self.maps[g].assignment();
        let code = self.maps[f]
            .assignment()
            .iter()
            .fold(0, |acc, &j| acc * n.max(1) + ga[j]);
        self.offset(m, n) + code
    }

    pub fn compose_maps(&self, f: usize, g: usize) -> FinMap {
        compose(&self.maps[f], &self.maps[g]).expect("composable site maps")
    }

    /// All pairs `(f, g)` with `f ; g` defined, in id order.
    pub fn composable_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for f in 0..self.maps.len() {
            for g in self.maps_from(self.target_size(f)) {
                out.push((f as u32, g as u32));
            }
        }
        out
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn square_ids(&self, i: usize) -> [u32; 4] {
        self.squares[i]
    }

    pub fn square(&self, i: usize) -> Square<'_> {
        let [f, k, g, l] = self.squares[i];
        Square {
            f: &self.maps[f as usize],
            k: &self.maps[k as usize],
            g: &self.maps[g as usize],
            l: &self.maps[l as usize],
        }
    }

    pub fn square_id(&self, ids: [u32; 4]) -> Option<usize> {
        self.squares.binary_search(&ids).ok()
    }

    /// Squares whose top edge `k` is the given map.
    pub fn squares_with_top(&self, k: usize) -> &[u32] {
        &self.by_top[k]
    }

    /// Squares whose left edge `f` is the given map.
    pub fn squares_with_left(&self, f: usize) -> &[u32] {
        &self.by_left[f]
    }

    /// The tagged sum of the seeds `m` and `n`.
    pub fn sum(&self, m: usize, n: usize) -> Result<SumWitness, DblCatError> {
        self.require(|| format!("sum {m}+{n}"), m + n)?;
        Ok(disjoint_sum(&self.seeds[m], &self.seeds[n]))
    }
}
