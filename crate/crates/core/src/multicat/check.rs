use serde_json::{json, Value};

use super::sym::{Profile, SymMulticat};
use super::MulticatError;
use crate::radix;
use crate::report::{CheckOutcome, Report};

/// For a permutation `p` of blocks (new block `t` is old block `p[t]`) with
/// old block sizes `sizes`, the induced permutation of the flattened
/// positions.
pub fn block_permutation(p: &[usize], sizes: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        offsets.push(acc);
        acc += s;
    }
    p.iter().flat_map(|&b| offsets[b]..offsets[b] + sizes[b]).collect()
}

/// `id ⊕ q ⊕ id`: `q` acting on the `q.len()` positions starting at `at`,
/// within `total` positions.
pub fn shifted_permutation(q: &[usize], at: usize, total: usize) -> Vec<usize> {
    (0..total)
        .map(|r| if r >= at && r < at + q.len() { at + q[r - at] } else { r })
        .collect()
}

struct Ctx<'a> {
    m: &'a SymMulticat,
}

impl Ctx<'_> {
    fn arrow(&self, p: &Profile, a: usize) -> Value {
        json!({"profile": self.m.profile_json(p), "arrow": self.m.arrow_name(p, a)})
    }

    fn fits(&self, arity: usize) -> bool {
        arity <= self.m.arity_bound()
    }
}

/// Checks the laws of a symmetric multicategory exhaustively up to its
/// arity bound: both unit laws, sequential and parallel associativity of
/// partial composition, the group action laws, and equivariance of
/// composition in each argument.
pub fn check_multicat(m: &SymMulticat) -> Result<Report, MulticatError> {
    let cx = Ctx { m };
    let mut report = Report::new(format!("multicategory {}", m.name()), 0, m.arity_bound());
    report.push(check_identities(&cx));
    report.push(check_units(&cx)?);
    let (seq, par) = check_associativity(&cx)?;
    report.push(seq);
    report.push(par);
    let (unit, comp) = check_action(&cx)?;
    report.push(unit);
    report.push(comp);
    let (outer, inner) = check_equivariance(&cx)?;
    report.push(outer);
    report.push(inner);
    Ok(report)
}

fn check_identities(cx: &Ctx<'_>) -> CheckOutcome {
    let mut out = CheckOutcome::new("identities");
    for a in 0..cx.m.object_count() {
        let p = Profile::new(vec![a], a);
        let ok = cx.m.identity(a) < cx.m.hom_size(&p);
        out.expect(ok, || json!({"object": cx.m.objects()[a]}));
    }
    out
}

fn check_units(cx: &Ctx<'_>) -> Result<CheckOutcome, MulticatError> {
    let m = cx.m;
    let mut out = CheckOutcome::new("unit_laws");
    for pf in m.inhabited() {
        let pb = Profile::new(vec![pf.target], pf.target);
        let idb = m.identity(pf.target);
        for f in 0..m.hom_size(pf) {
            let l = m.compose(&pb, idb, 0, pf, f)?;
            out.expect(l == f, || json!({"side": "left", "f": cx.arrow(pf, f)}));
            for (i, &a) in pf.sources.iter().enumerate() {
                let r = m.compose(pf, f, i, &Profile::new(vec![a], a), m.identity(a))?;
                out.expect(r == f, || json!({"side": "right", "slot": i, "f": cx.arrow(pf, f)}));
            }
        }
    }
    Ok(out)
}

fn check_associativity(cx: &Ctx<'_>) -> Result<(CheckOutcome, CheckOutcome), MulticatError> {
    let m = cx.m;
    let mut seq = CheckOutcome::new("sequential_associativity");
    let mut par = CheckOutcome::new("parallel_associativity");
    for pf in m.inhabited() {
        let n = pf.arity();
        for i in 0..n {
            for pg in m.inhabited_into(pf.sources[i]) {
                let mg = pg.arity();
                if !cx.fits(n + mg - 1) {
                    continue;
                }
                let pfg = pf.substitute(i, pg);
                // (f ∘_i g) ∘_{i+j} h = f ∘_i (g ∘_j h)
                for j in 0..mg {
                    for ph in m.inhabited_into(pg.sources[j]) {
                        let l = ph.arity();
                        if !cx.fits(mg + l - 1) || !cx.fits(n + mg + l - 2) {
                            continue;
                        }
                        let pgh = pg.substitute(j, ph);
                        for g in 0..m.hom_size(pg) {
                            let fgs = (0..m.hom_size(pf))
                                .map(|f| m.compose(pf, f, i, pg, g))
                                .collect::<Result<Vec<_>, _>>()?;
                            for h in 0..m.hom_size(ph) {
                                let gh = m.compose(pg, g, j, ph, h)?;
                                for (f, &fg) in fgs.iter().enumerate() {
                                    let lhs = m.compose(&pfg, fg, i + j, ph, h)?;
                                    let rhs = m.compose(pf, f, i, &pgh, gh)?;
                                    seq.expect(lhs == rhs, || {
                                        json!({"slots": [i, j], "f": cx.arrow(pf, f), "g": cx.arrow(pg, g), "h": cx.arrow(ph, h)})
                                    });
                                }
                            }
                        }
                    }
                }
                // (f ∘_i g) ∘_{k+m-1} h = (f ∘_k h) ∘_i g for i < k
                for k in i + 1..n {
                    for ph in m.inhabited_into(pf.sources[k]) {
                        let l = ph.arity();
                        if !cx.fits(n + l - 1) || !cx.fits(n + mg + l - 2) {
                            continue;
                        }
                        let pfh = pf.substitute(k, ph);
                        for f in 0..m.hom_size(pf) {
                            for g in 0..m.hom_size(pg) {
                                let fg = m.compose(pf, f, i, pg, g)?;
                                for h in 0..m.hom_size(ph) {
                                    let lhs = m.compose(&pfg, fg, k + mg - 1, ph, h)?;
                                    let rhs = m.compose(&pfh, m.compose(pf, f, k, ph, h)?, i, pg, g)?;
                                    par.expect(lhs == rhs, || {
                                        json!({"slots": [i, k], "f": cx.arrow(pf, f), "g": cx.arrow(pg, g), "h": cx.arrow(ph, h)})
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((seq, par))
}

fn check_action(cx: &Ctx<'_>) -> Result<(CheckOutcome, CheckOutcome), MulticatError> {
    let m = cx.m;
    let mut unit = CheckOutcome::new("action_unit");
    let mut comp = CheckOutcome::new("action_composition");
    for pa in m.inhabited() {
        let n = pa.arity();
        let perms = radix::permutations(n);
        let id: Vec<usize> = (0..n).collect();
        for a in 0..m.hom_size(pa) {
            unit.expect(m.act(pa, &id, a)? == a, || json!({"a": cx.arrow(pa, a)}));
            for p in &perms {
                let pa2 = pa.permute(p);
                let b = m.act(pa, p, a)?;
                for q in &perms {
                    let lhs = m.act(&pa2, q, b)?;
                    let rhs = m.act(pa, &radix::compose_after(p, q), a)?;
                    comp.expect(lhs == rhs, || json!({"a": cx.arrow(pa, a), "p": p, "q": q}));
                }
            }
        }
    }
    Ok((unit, comp))
}

fn check_equivariance(cx: &Ctx<'_>) -> Result<(CheckOutcome, CheckOutcome), MulticatError> {
    let m = cx.m;
    let mut outer = CheckOutcome::new("equivariance_outer");
    let mut inner = CheckOutcome::new("equivariance_inner");
    for pf in m.inhabited() {
        let n = pf.arity();
        let perms = radix::permutations(n);
        for p in &perms {
            let pfp = pf.permute(p);
            for i in 0..n {
                // (p · f) ∘_i g = P · (f ∘_{p[i]} g)
                for pg in m.inhabited_into(pfp.sources[i]) {
                    let mg = pg.arity();
                    if !cx.fits(n + mg - 1) {
                        continue;
                    }
                    let sizes: Vec<usize> = (0..n).map(|b| if b == p[i] { mg } else { 1 }).collect();
                    let big = block_permutation(p, &sizes);
                    let pfg = pf.substitute(p[i], pg);
                    for f in 0..m.hom_size(pf) {
                        let fp = m.act(pf, p, f)?;
                        for g in 0..m.hom_size(pg) {
                            let lhs = m.compose(&pfp, fp, i, pg, g)?;
                            let rhs = m.act(&pfg, &big, m.compose(pf, f, p[i], pg, g)?)?;
                            outer.expect(lhs == rhs, || {
                                json!({"perm": p, "slot": i, "f": cx.arrow(pf, f), "g": cx.arrow(pg, g)})
                            });
                        }
                    }
                }
            }
        }
        // f ∘_i (q · g) = (id ⊕ q ⊕ id) · (f ∘_i g)
        for i in 0..n {
            for pg in m.inhabited_into(pf.sources[i]) {
                let mg = pg.arity();
                if !cx.fits(n + mg - 1) {
                    continue;
                }
                let pfg = pf.substitute(i, pg);
                for q in radix::permutations(mg) {
                    let pgq = pg.permute(&q);
                    let big = shifted_permutation(&q, i, n + mg - 1);
                    for g in 0..m.hom_size(pg) {
                        let gq = m.act(pg, &q, g)?;
                        for f in 0..m.hom_size(pf) {
                            let lhs = m.compose(pf, f, i, &pgq, gq)?;
                            let rhs = m.act(&pfg, &big, m.compose(pf, f, i, pg, g)?)?;
                            inner.expect(lhs == rhs, || {
                                json!({"perm": q, "slot": i, "f": cx.arrow(pf, f), "g": cx.arrow(pg, g)})
                            });
                        }
                    }
                }
            }
        }
    }
    Ok((outer, inner))
}

/// A candidate morphism of multicategories: an object map and, per
/// profile, a map of operations.
pub struct MulticatMorphism<'a> {
    pub objects: Vec<usize>,
    pub arrows: Box<dyn Fn(&Profile, usize) -> usize + Send + Sync + 'a>,
}

impl MulticatMorphism<'_> {
    pub fn profile(&self, p: &Profile) -> Profile {
        Profile::new(p.sources.iter().map(|&s| self.objects[s]).collect(), self.objects[p.target])
    }
}

/// The identity morphism of `m`.
pub fn identity_morphism(m: &SymMulticat) -> MulticatMorphism<'static> {
    MulticatMorphism {
        objects: (0..m.object_count()).collect(),
        arrows: Box::new(|_, a| a),
    }
}

/// Checks that `h: m -> n` is well typed and preserves identities,
/// composition and the symmetric action.
pub fn check_morphism(m: &SymMulticat, n: &SymMulticat, h: &MulticatMorphism<'_>) -> Result<Report, MulticatError> {
    let mut report = Report::new(format!("morphism {} -> {}", m.name(), n.name()), 0, m.arity_bound());
    let mut typing = CheckOutcome::new("typing");
    typing.expect(
        h.objects.len() == m.object_count() && h.objects.iter().all(|&o| o < n.object_count()),
        || json!("object map"),
    );
    if !typing.passed() {
        report.push(typing);
        return Ok(report);
    }
    for p in m.inhabited() {
        let size = n.hom_size(&h.profile(p));
        for a in 0..m.hom_size(p) {
            typing.expect((h.arrows)(p, a) < size, || json!({"profile": m.profile_json(p), "arrow": m.arrow_name(p, a)}));
        }
    }
    let ok = typing.passed();
    report.push(typing);
    if !ok {
        return Ok(report);
    }
    let mut ids = CheckOutcome::new("identities");
    for a in 0..m.object_count() {
        let p = Profile::new(vec![a], a);
        let ha = h.objects[a];
        ids.expect((h.arrows)(&p, m.identity(a)) == n.identity(ha), || json!({"object": m.objects()[a]}));
    }
    let mut comp = CheckOutcome::new("composition");
    let mut act = CheckOutcome::new("action");
    for pf in m.inhabited() {
        let hpf = h.profile(pf);
        for i in 0..pf.arity() {
            for pg in m.inhabited_into(pf.sources[i]) {
                if pf.arity() + pg.arity() - 1 > m.arity_bound() {
                    continue;
                }
                let (hpg, pfg) = (h.profile(pg), pf.substitute(i, pg));
                for f in 0..m.hom_size(pf) {
                    for g in 0..m.hom_size(pg) {
                        let lhs = (h.arrows)(&pfg, m.compose(pf, f, i, pg, g)?);
                        let rhs = n.compose(&hpf, (h.arrows)(pf, f), i, &hpg, (h.arrows)(pg, g))?;
                        comp.expect(lhs == rhs, || {
                            json!({"slot": i, "f": m.arrow_name(pf, f), "g": m.arrow_name(pg, g)})
                        });
                    }
                }
            }
        }
        for p in radix::permutations(pf.arity()) {
            let pp = pf.permute(&p);
            for a in 0..m.hom_size(pf) {
                let lhs = (h.arrows)(&pp, m.act(pf, &p, a)?);
                let rhs = n.act(&hpf, &p, (h.arrows)(pf, a))?;
                act.expect(lhs == rhs, || json!({"perm": p, "a": m.arrow_name(pf, a)}));
            }
        }
    }
    report.push(ids);
    report.push(comp);
    report.push(act);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::multicat::{
        discrete_multicat, endomorphism_multicat, identities_only_multicat, monoid_corpus,
        terminal_multicat, CommMonoid,
    };

    #[test]
    fn permutation_helpers() {
        assert_eq!(block_permutation(&[1, 0], &[2, 1]), vec![2, 0, 1]);
        assert_eq!(block_permutation(&[0, 1, 2], &[1, 0, 1]), vec![0, 1]);
        assert_eq!(shifted_permutation(&[1, 0], 1, 4), vec![0, 2, 1, 3]);
    }

    #[test]
    fn stock_multicategories_pass() {
        assert!(check_multicat(&terminal_multicat(3)).unwrap().passed());
        assert!(check_multicat(&identities_only_multicat(vec!["a".into(), "b".into()], 3))
            .unwrap()
            .passed());
        for m in monoid_corpus() {
            let d = discrete_multicat(&m, 3);
            let r = check_multicat(&d).unwrap();
            assert!(r.passed(), "{}: {r:?}", m.name());
        }
    }

    #[test]
    fn endomorphisms_pass() {
        for (s, bound) in [(1, 3), (2, 3)] {
            let m = endomorphism_multicat(&FinSet::canonical(s), bound).unwrap();
            let r = check_multicat(&m).unwrap();
            assert!(r.passed(), "|S| = {s}: {r:?}");
            assert!(r.check("equivariance_outer").unwrap().instances > 0);
        }
    }

    #[test]
    fn swapped_action_entry_fails() {
        let m = endomorphism_multicat(&FinSet::canonical(2), 2).unwrap().tabulate().unwrap();
        let bin = Profile::new(vec![0, 0], 0);
        let and = radix::encode_uniform(&[0, 0, 0, 1], 2);
        let first = radix::encode_uniform(&[0, 0, 1, 1], 2);
        // and is symmetric; send its swap to the first projection instead
        let bad = m.with_action_entry(&bin, &[1, 0], and, first).unwrap();
        let r = check_multicat(&bad).unwrap();
        assert!(!r.passed());
        assert!(r.witnesses().count() > 0);
    }

    #[test]
    fn monoid_homomorphism_is_a_morphism() {
        let (z4, z2) = (CommMonoid::cyclic(4), CommMonoid::cyclic(2));
        let (m, n) = (discrete_multicat(&z4, 3), discrete_multicat(&z2, 3));
        let h = MulticatMorphism {
            objects: vec![0, 1, 0, 1],
            arrows: Box::new(|_, _| 0),
        };
        assert!(check_morphism(&m, &n, &h).unwrap().passed());
        let bad = MulticatMorphism {
            objects: vec![0, 1, 1, 0],
            arrows: Box::new(|_, _| 0),
        };
        assert!(!check_morphism(&m, &n, &bad).unwrap().passed());
        assert!(check_morphism(&m, &m, &identity_morphism(&m)).unwrap().passed());
    }
}
