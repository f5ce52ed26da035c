use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::profunctor::{same_cat, Profunctor};
use super::FinCatError;

/// One `(x, z)` block of a coend: the raw triples `(y, a, b)` laid out by
/// `y`, then `a`, then `b`, and their classes.
#[derive(Debug, Clone)]
struct Block {
    offsets: Vec<usize>,
    class_of: Vec<u32>,
    reps: Vec<u32>,
}

/// The composite `Φ;Ψ` of `Φ: C ⇸ D` and `Ψ: D ⇸ E` together with its
/// quotient maps from raw triples.
#[derive(Debug, Clone)]
pub struct Composite {
    pub profunctor: Profunctor,
    first: Arc<Profunctor>,
    second: Arc<Profunctor>,
    blocks: Vec<Block>,
}

impl Composite {
    pub fn first(&self) -> &Arc<Profunctor> {
        &self.first
    }

    pub fn second(&self) -> &Arc<Profunctor> {
        &self.second
    }

    /// Number of raw triples over `(x, z)`.
    pub fn raw_count(&self, x: usize, z: usize) -> usize {
        Blocks(&self.blocks, &self.second).get(x, z).class_of.len()
    }

    /// Class of the raw triple `(y, a, b)` with `a ∈ Φ(x,y)`, `b ∈ Ψ(y,z)`.
    pub fn class_of(&self, x: usize, z: usize, y: usize, a: usize, b: usize) -> usize {
        Blocks(&self.blocks, &self.second).class_of(x, z, y, a, b)
    }

    /// The least raw triple of class `k` over `(x, z)`.
    pub fn rep(&self, x: usize, z: usize, k: usize) -> (usize, usize, usize) {
        Blocks(&self.blocks, &self.second).rep(x, z, k)
    }
}

struct Blocks<'a>(&'a [Block], &'a Profunctor);

impl Blocks<'_> {
    fn get(&self, x: usize, z: usize) -> &Block {
        &self.0[x * self.1.target().object_count() + z]
    }

    fn class_of(&self, x: usize, z: usize, y: usize, a: usize, b: usize) -> usize {
        let blk = self.get(x, z);
        blk.class_of[blk.offsets[y] + a * self.1.size(y, z) + b] as usize
    }

    fn rep(&self, x: usize, z: usize, k: usize) -> (usize, usize, usize) {
        let blk = self.get(x, z);
        let raw = blk.reps[k] as usize;
        let y = blk.offsets.partition_point(|&o| o <= raw) - 1;
        let off = raw - blk.offsets[y];
        let m = self.1.size(y, z);
        (y, off / m, off % m)
    }
}

/// Coend composition: the union over middle objects `y` of
/// `Φ(x,y) × Ψ(y,z)`, quotiented by `(a·m, b) ~ (a, m·b)`.
///
/// Only generating arrows `m` of the middle category are used; they
/// generate the same equivalence relation. Each class is represented by
/// its least raw triple and classes are numbered in that order.
pub fn compose_profunctors(
    phi: &Arc<Profunctor>,
    psi: &Arc<Profunctor>,
) -> Result<Composite, FinCatError> {
    if !same_cat(phi.target(), psi.source()) {
        return Err(FinCatError::MismatchedEndpoints {
            left: phi.target().name().to_string(),
            right: psi.source().name().to_string(),
        });
    }
    let c = phi.source().clone();
    let d = phi.target().clone();
    let e = psi.target().clone();
    let (nc, nd, ne) = (c.object_count(), d.object_count(), e.object_count());
    let mut blocks = Vec::with_capacity(nc * ne);
    for x in 0..nc {
        for z in 0..ne {
            let mut offsets = Vec::with_capacity(nd + 1);
            let mut acc = 0;
            for y in 0..nd {
                offsets.push(acc);
                acc += phi.size(x, y) * psi.size(y, z);
            }
            offsets.push(acc);
            let mut uf: UnionFind<u32> = UnionFind::new(acc);
            for &m in d.generators() {
                let (y, y2) = (d.source(m), d.target(m));
                let (na, nb) = (phi.size(x, y), psi.size(y2, z));
                let (nb_y, nb_y2) = (psi.size(y, z), nb);
                for a in 0..na {
                    let am = phi.act_right(x, m, a);
                    for b in 0..nb {
                        let mb = psi.act_left(m, z, b);
                        let lhs = offsets[y2] + am * nb_y2 + b;
                        let rhs = offsets[y] + a * nb_y + mb;
                        uf.union(lhs as u32, rhs as u32);
                    }
                }
            }
            let mut class_of = vec![0u32; acc];
            let mut reps = Vec::new();
            let mut root_class = vec![u32::MAX; acc];
            for i in 0..acc {
                let r = uf.find(i as u32) as usize;
                if root_class[r] == u32::MAX {
                    root_class[r] = reps.len() as u32;
                    reps.push(i as u32);
                }
                class_of[i] = root_class[r];
            }
            blocks.push(Block {
                offsets,
                class_of,
                reps,
            });
        }
    }
    let profunctor = {
        let cm = Blocks(&blocks, psi);
        Profunctor::from_fn(
            c.clone(),
            e.clone(),
            |x, z| cm.get(x, z).reps.len(),
            |g, z, k| {
                let x = c.target(g);
                let (y, a, b) = cm.rep(x, z, k);
                cm.class_of(c.source(g), z, y, phi.act_left(g, y, a), b)
            },
            |x, h, k| {
                let z = e.source(h);
                let (y, a, b) = cm.rep(x, z, k);
                cm.class_of(x, e.target(h), y, a, psi.act_right(y, h, b))
            },
        )?
    };
    Ok(Composite {
        profunctor,
        first: phi.clone(),
        second: psi.clone(),
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{hom_profunctor, FinCat};

    #[test]
    fn terminal_singletons_compose_to_singleton() {
        let t = Arc::new(FinCat::terminal());
        let h = Arc::new(hom_profunctor(&t));
        let c = compose_profunctors(&h, &h).unwrap();
        assert_eq!(c.profunctor.sizes(), &[1]);
    }

    #[test]
    fn chain_middle_identifies_along_the_arrow() {
        // D = 2-chain with m: 0 -> 1; Φ: 1 ⇸ D with Φ(*,0) = {φ}, Φ(*,1) = {φ·m};
        // Ψ: D ⇸ 1 with Ψ(1,*) = {ψ}, Ψ(0,*) = {m·ψ}.
        let t = Arc::new(FinCat::terminal());
        let d = Arc::new(FinCat::chain(2));
        let phi = Arc::new(
            Profunctor::from_fn(t.clone(), d.clone(), |_, _| 1, |_, _, e| e, |_, _, e| e).unwrap(),
        );
        let psi = Arc::new(
            Profunctor::from_fn(d.clone(), t.clone(), |_, _| 1, |_, _, e| e, |_, _, e| e).unwrap(),
        );
        let c = compose_profunctors(&phi, &psi).unwrap();
        assert_eq!(c.profunctor.sizes(), &[1]);
        assert_eq!(c.raw_count(0, 0), 2);
        assert_eq!(c.class_of(0, 0, 1, 0, 0), c.class_of(0, 0, 0, 0, 0));
        assert_eq!(c.rep(0, 0, 0), (0, 0, 0));
    }

    #[test]
    fn empty_left_end_kills_the_class() {
        // Ψ(0,*) = ∅ forces Ψ(1,*) = ∅ as well; the composite is empty
        let t = Arc::new(FinCat::terminal());
        let d = Arc::new(FinCat::chain(2));
        let phi = Arc::new(
            Profunctor::from_fn(t.clone(), d.clone(), |_, _| 1, |_, _, e| e, |_, _, e| e).unwrap(),
        );
        let psi = Arc::new(
            Profunctor::from_fn(d.clone(), t.clone(), |_, _| 0, |_, _, e| e, |_, _, e| e).unwrap(),
        );
        assert_eq!(compose_profunctors(&phi, &psi).unwrap().profunctor.sizes(), &[0]);
    }

    #[test]
    fn mismatched_middle_errors() {
        let t = Arc::new(FinCat::terminal());
        let d = Arc::new(FinCat::chain(2));
        let a = Arc::new(hom_profunctor(&t));
        let b = Arc::new(hom_profunctor(&d));
        assert!(compose_profunctors(&a, &b).is_err());
    }
}
