use std::sync::Arc;

use super::operad::UnderlyingCategory;
use super::BridgeError;
use crate::dblcat::{DblCatError, DfOperad, DoubleTransform};
use crate::fincat::{CatFunctor, ProfCell};
use crate::finset::{FinMap, FinSet};
use crate::multicat::{MulticatMorphism, Profile, SymMulticat};
use crate::radix;

/// The double transformation `df(M) -> df(N)` induced by a morphism of
/// multicategories, applied pointwise on objects and fiberwise on
/// proarrows.
pub struct MorphismTransform<'a> {
    source: Arc<SymMulticat>,
    target: Arc<SymMulticat>,
    h: MulticatMorphism<'a>,
    base_m: UnderlyingCategory,
    base_n: UnderlyingCategory,
}

impl<'a> MorphismTransform<'a> {
    pub fn new(
        source: Arc<SymMulticat>,
        target: Arc<SymMulticat>,
        h: MulticatMorphism<'a>,
    ) -> Result<Self, BridgeError> {
        let base_m = UnderlyingCategory::new(&source)?;
        let base_n = UnderlyingCategory::new(&target)?;
        Ok(MorphismTransform {
            source,
            target,
            h,
            base_m,
            base_n,
        })
    }

    fn unary(&self, arrow: usize) -> usize {
        let (a, b, u) = self.base_m.unary[arrow];
        let v = (self.h.arrows)(&Profile::new(vec![a], b), u);
        self.base_n.arrow_of(self.h.objects[a], self.h.objects[b], v)
    }
}

impl DoubleTransform for MorphismTransform<'_> {
    fn functor(&self, m: &DfOperad, n: &DfOperad, set: &FinSet) -> Result<CatFunctor, DblCatError> {
        let k = set.len();
        let (om, on) = (self.source.object_count(), self.target.object_count());
        let (am, an) = (self.base_m.category.arrow_count(), self.base_n.category.arrow_count());
        let (src, tgt) = (m.category(set)?, n.category(set)?);
        let objs = (0..src.object_count())
            .map(|x| {
                let xs: Vec<usize> = radix::decode_uniform(x, om, k).iter().map(|&a| self.h.objects[a]).collect();
                radix::encode_uniform(&xs, on)
            })
            .collect();
        let arrs = (0..src.arrow_count())
            .map(|c| {
                let cs: Vec<usize> = radix::decode_uniform(c, am, k).iter().map(|&u| self.unary(u)).collect();
                radix::encode_uniform(&cs, an)
            })
            .collect();
        Ok(CatFunctor::new(src, tgt, objs, arrs)?)
    }

    fn cell(&self, m: &DfOperad, n: &DfOperad, f: &FinMap) -> Result<ProfCell, DblCatError> {
        let top = self.functor(m, n, f.source())?;
        let bottom = self.functor(m, n, f.target())?;
        let (left, right) = (m.proarrow(f)?, n.proarrow(f)?);
        let (ni, nj) = (f.source().len(), f.target().len());
        let fibers: Vec<Vec<usize>> = (0..nj).map(|j| f.preimage(j)).collect();
        let om = self.source.object_count();
        let cell = ProfCell::from_blocks(left.clone(), right, top, bottom, |x, y, out| {
            let xs = radix::decode_uniform(x, om, ni);
            let ys = radix::decode_uniform(y, om, nj);
            let profiles: Vec<Profile> = fibers
                .iter()
                .enumerate()
                .map(|(j, fib)| Profile::new(fib.iter().map(|&i| xs[i]).collect(), ys[j]))
                .collect();
            let sizes: Vec<usize> = profiles.iter().map(|p| self.source.hom_size(p)).collect();
            let images: Vec<Profile> = profiles
                .iter()
                .map(|p| Profile::new(p.sources.iter().map(|&a| self.h.objects[a]).collect(), self.h.objects[p.target]))
                .collect();
            let out_sizes: Vec<usize> = images.iter().map(|p| self.target.hom_size(p)).collect();
            out.extend((0..left.size(x, y)).map(|e| {
                let phis = radix::decode(e, &sizes);
                let mapped: Vec<usize> =
                    phis.iter().zip(&profiles).map(|(&a, p)| (self.h.arrows)(p, a)).collect();
                radix::encode(&mapped, &out_sizes)
            }));
        })?;
        Ok(cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::df_from_multicat;
    use crate::dblcat::{check_double_transform, BoundedSite};
    use crate::multicat::{discrete_multicat, CommMonoid};

    #[test]
    fn monoid_homomorphism_induces_a_transform() {
        let site = Arc::new(BoundedSite::new(2).unwrap());
        let z4 = Arc::new(discrete_multicat(&CommMonoid::cyclic(4), 2));
        let z2 = Arc::new(discrete_multicat(&CommMonoid::cyclic(2), 2));
        let h = MulticatMorphism {
            objects: vec![0, 1, 0, 1],
            arrows: Box::new(|_, a| a),
        };
        let t = MorphismTransform::new(z4.clone(), z2.clone(), h).unwrap();
        let dm = df_from_multicat(z4, site.clone()).unwrap();
        let dn = df_from_multicat(z2, site).unwrap();
        let r = check_double_transform(&dm, &dn, &t).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
