use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::operad::DfOperad;
use super::product::{check_product_diagram, ProductDiagramWitness};
use super::site::{BoundedSite, Square};
use super::DblCatError;
use crate::fincat::{
    check_category, check_cell, check_functor, check_profunctor, compose_functors,
    compose_profunctors, element_generators, functors_equal, hom_profunctor, is_isomorphism,
    pairing, product_category, FinCat, ProfCell, Profunctor, Sides,
};
use crate::finset::{fiber_decompose, sum_of_maps, FinMap};
use crate::report::{CheckOutcome, Report};

fn obj(c: &FinCat, x: usize) -> &str {
    &c.objects()[x]
}

/// Raw coend triples `(x, z, y, a, b)`.
type RawGens = Vec<(usize, usize, usize, usize, usize)>;

/// Representatives of generators of `Φ_f ; Φ_g` under the chosen actions.
fn composite_generators(
    phi: &Arc<Profunctor>,
    psi: &Arc<Profunctor>,
    sides: Sides,
) -> Result<RawGens, DblCatError> {
    let comp = compose_profunctors(phi, psi)?;
    Ok(element_generators(&comp.profunctor, sides)
        .into_iter()
        .map(|(x, z, k)| {
            let (y, a, b) = comp.rep(x, z, k);
            (x, z, y, a, b)
        })
        .collect())
}

/// `(x, y, k)`: element `k` of `Φ_f(x, y)`.
type GeneratorList = Arc<Vec<(usize, usize, usize)>>;

/// Memo of two-sided generators of `Φ_f` per site map.
struct Generators<'a> {
    op: &'a DfOperad,
    two_sided: Vec<Option<GeneratorList>>,
}

impl<'a> Generators<'a> {
    fn new(op: &'a DfOperad) -> Self {
        Generators {
            op,
            two_sided: vec![None; op.site().map_count()],
        }
    }

    fn of(&mut self, f: usize) -> Result<GeneratorList, DblCatError> {
        if let Some(g) = &self.two_sided[f] {
            return Ok(g.clone());
        }
        let phi = self.op.proarrow(self.op.site().map(f))?;
        let g = Arc::new(element_generators(&phi, Sides::Both));
        self.two_sided[f] = Some(g.clone());
        Ok(g)
    }
}

/// Runs the lax functor axioms over every site map, composable pair,
/// composable triple and pullback square.
///
/// Checks: each `MI` is a category; `l ↦ l*` is strictly functorial;
/// each `Φ_f` is a profunctor between the right categories; `Φ_id` is the
/// hom profunctor on the nose; each laxity cell is well typed, natural in
/// its outer variables and constant on coend classes; the unit and
/// associativity coherences; every square cell is natural.
pub fn check_lax_functor(op: &DfOperad) -> Result<Report, DblCatError> {
    let site = op.site().clone();
    let mut report = Report::new(format!("lax functor {}", op.name()), site.bound(), site.bound());
    report.push(check_categories(op)?);
    report.push(check_horizontal(op)?);
    let (proarrows, normality) = check_proarrows(op)?;
    report.push(proarrows);
    report.push(normality);
    let [typing, naturality, units] = check_laxity(op)?;
    report.push(typing);
    report.push(naturality);
    report.push(units);
    report.push(check_associativity(op)?);
    report.push(check_cells(op)?);
    report.note("bounded check: every set of the site has at most site_bound elements");
    Ok(report)
}

fn check_categories(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let mut out = CheckOutcome::new("categories");
    for s in op.site().seeds() {
        let c = op.category(s)?;
        if let Err(v) = check_category(&c) {
            out.fail_with(|| json!({"set": s.name(), "violation": v.to_json()}));
        }
        out.tick();
    }
    Ok(out)
}

fn check_horizontal(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("horizontal_functoriality");
    for l in 0..site.map_count() {
        let lm = site.map(l);
        let f = op.reindex(lm)?;
        let (mk, mj) = (op.category(lm.target())?, op.category(lm.source())?);
        let typed = crate::fincat::same_cat(f.source(), &mk) && crate::fincat::same_cat(f.target(), &mj);
        let ok = typed && check_functor(&f).is_ok();
        let ok = ok && (!lm.is_identity() || functors_equal(&f, &crate::fincat::CatFunctor::identity(mk)));
        out.expect(ok, || json!({"map": lm.to_json()}));
    }
    for (m, l) in site.composable_pairs() {
        let (m, l) = (m as usize, l as usize);
        let ml = site.map(site.compose_ids(m, l));
        let direct = op.reindex(ml)?;
        let via = compose_functors(&*op.reindex(site.map(l))?, &*op.reindex(site.map(m))?);
        let ok = via.map(|v| functors_equal(&v, &direct)).unwrap_or(false);
        out.expect(ok, || {
            json!({"first": site.map(m).to_json(), "second": site.map(l).to_json()})
        });
    }
    Ok(out)
}

fn check_proarrows(op: &DfOperad) -> Result<(CheckOutcome, CheckOutcome), DblCatError> {
    let site = op.site();
    let mut pro = CheckOutcome::new("proarrows");
    let mut norm = CheckOutcome::new("normality");
    for f in 0..site.map_count() {
        let fm = site.map(f);
        let phi = op.proarrow(fm)?;
        let (mi, mj) = (op.category(fm.source())?, op.category(fm.target())?);
        let typed = crate::fincat::same_cat(phi.source(), &mi) && crate::fincat::same_cat(phi.target(), &mj);
        let verdict = if typed {
            check_profunctor(&phi).map_err(|v| json!(v))
        } else {
            Err(json!("wrong endpoints"))
        };
        if let Err(v) = verdict {
            pro.fail_with(|| json!({"map": fm.to_json(), "violation": v}));
        }
        pro.tick();
        if fm.is_identity() {
            let ok = phi.same_tables(&hom_profunctor(&mi));
            norm.expect(ok, || json!({"set": fm.source().name()}));
        }
    }
    Ok((pro, norm))
}

/// All values of `μ_{g,f}` over one composable pair, laid out per `(x, z)`
/// block by middle object, then `a`, then `b`.
struct LaxTable {
    nz: usize,
    offsets: Vec<Vec<usize>>,
    data: Vec<Vec<u32>>,
}

impl LaxTable {
    fn get(&self, psi: &Profunctor, x: usize, z: usize, y: usize, a: usize, b: usize) -> usize {
        let blk = x * self.nz + z;
        self.data[blk][self.offsets[blk][y] + a * psi.size(y, z) + b] as usize
    }
}

fn check_laxity(op: &DfOperad) -> Result<[CheckOutcome; 3], DblCatError> {
    let site = op.site();
    let mut typing = CheckOutcome::new("laxity_typing");
    let mut nat = CheckOutcome::new("laxity_naturality");
    let mut units = CheckOutcome::new("unit_coherence");
    for (f, g) in site.composable_pairs() {
        let (f, g) = (f as usize, g as usize);
        let (fm, gm) = (site.map(f), site.map(g));
        let gf = site.map(site.compose_ids(f, g));
        let (phi, psi, chi) = (op.proarrow(fm)?, op.proarrow(gm)?, op.proarrow(gf)?);
        let (mi, mj, mk) = (phi.source().clone(), phi.target().clone(), psi.target().clone());
        let (nx, ny, nz) = (mi.object_count(), mj.object_count(), mk.object_count());
        let pair = || json!({"f": fm.to_json(), "g": gm.to_json()});
        let mut table = LaxTable {
            nz,
            offsets: Vec::with_capacity(nx * nz),
            data: Vec::with_capacity(nx * nz),
        };
        let mut well_typed = true;
        for x in 0..nx {
            for z in 0..nz {
                let mut offs = Vec::with_capacity(ny);
                let mut data = Vec::new();
                let bound = chi.size(x, z);
                for y in 0..ny {
                    offs.push(data.len());
                    let (na, nb) = (phi.size(x, y), psi.size(y, z));
                    if na * nb == 0 {
                        continue;
                    }
                    let mu = op.laxity(fm, gm, x, y, z)?;
                    for a in 0..na {
                        for b in 0..nb {
                            let v = mu(a, b);
                            if v >= bound {
                                well_typed = false;
                                typing.fail_with(|| {
                                    json!({"pair": pair(), "x": obj(&mi, x), "y": obj(&mj, y), "z": obj(&mk, z), "a": a, "b": b, "value": v})
                                });
                            }
                            data.push(v as u32);
                        }
                    }
                    typing.tick_n((na * nb) as u64);
                }
                table.offsets.push(offs);
                table.data.push(data);
            }
        }
        if !well_typed {
            continue;
        }
        let t = |x, z, y, a, b| table.get(&psi, x, z, y, a, b);
        // constant on coend classes
        for &m in mj.generators() {
            let (y, y2) = (mj.source(m), mj.target(m));
            for x in 0..nx {
                for z in 0..nz {
                    for a in 0..phi.size(x, y) {
                        let am = phi.act_right(x, m, a);
                        for b in 0..psi.size(y2, z) {
                            let mb = psi.act_left(m, z, b);
                            nat.expect(t(x, z, y2, am, b) == t(x, z, y, a, mb), || {
                                json!({"pair": pair(), "kind": "middle", "arrow": mj.arrow(m).name, "x": obj(&mi, x), "z": obj(&mk, z), "a": a, "b": b})
                            });
                        }
                    }
                }
            }
        }
        for &c in mi.generators() {
            let (x1, x) = (mi.source(c), mi.target(c));
            for z in 0..nz {
                for y in 0..ny {
                    for a in 0..phi.size(x, y) {
                        let ca = phi.act_left(c, y, a);
                        for b in 0..psi.size(y, z) {
                            let lhs = t(x1, z, y, ca, b);
                            let rhs = chi.act_left(c, z, t(x, z, y, a, b));
                            nat.expect(lhs == rhs, || {
                                json!({"pair": pair(), "kind": "left", "arrow": mi.arrow(c).name, "y": obj(&mj, y), "z": obj(&mk, z), "a": a, "b": b})
                            });
                        }
                    }
                }
            }
        }
        for &e in mk.generators() {
            let (z, z2) = (mk.source(e), mk.target(e));
            for x in 0..nx {
                for y in 0..ny {
                    for a in 0..phi.size(x, y) {
                        for b in 0..psi.size(y, z) {
                            let be = psi.act_right(y, e, b);
                            let lhs = t(x, z2, y, a, be);
                            let rhs = chi.act_right(x, e, t(x, z, y, a, b));
                            nat.expect(lhs == rhs, || {
                                json!({"pair": pair(), "kind": "right", "arrow": mk.arrow(e).name, "x": obj(&mi, x), "y": obj(&mj, y), "a": a, "b": b})
                            });
                        }
                    }
                }
            }
        }
        // μ(a, id) = a and μ(id, b) = b
        if gm.is_identity() {
            for x in 0..nx {
                for y in 0..ny {
                    let id = mj.hom_pos(mj.identity(y));
                    if psi.size(y, y) <= id {
                        continue;
                    }
                    for a in 0..phi.size(x, y) {
                        units.expect(t(x, y, y, a, id) == a, || {
                            json!({"pair": pair(), "side": "right", "x": obj(&mi, x), "y": obj(&mj, y), "a": a})
                        });
                    }
                }
            }
        }
        if fm.is_identity() {
            for x in 0..nx {
                let id = mi.hom_pos(mi.identity(x));
                if phi.size(x, x) <= id {
                    continue;
                }
                for z in 0..nz {
                    for b in 0..psi.size(x, z) {
                        units.expect(t(x, z, x, id, b) == b, || {
                            json!({"pair": pair(), "side": "left", "x": obj(&mi, x), "z": obj(&mk, z), "b": b})
                        });
                    }
                }
            }
        }
    }
    Ok([typing, nat, units])
}

/// `μ_{h, f;g}(μ_{g,f}(a, b), c) = μ_{g;h, f}(a, μ_{h,g}(b, c))`.
///
/// Both sides are natural in the outer variables and constant on coend
/// classes once the laxity checks pass, so it suffices to test them on
/// left-orbit generators of `Φ_f ; Φ_g` against two-sided generators of
/// `Φ_h`.
fn check_associativity(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("associativity_coherence");
    let mut gens = Generators::new(op);
    for (f, g) in site.composable_pairs() {
        let (f, g) = (f as usize, g as usize);
        let (fm, gm) = (site.map(f), site.map(g));
        let fg = site.compose_ids(f, g);
        let (phi, psi) = (op.proarrow(fm)?, op.proarrow(gm)?);
        let lg = composite_generators(&phi, &psi, Sides::Left)?;
        let phi_fg = op.proarrow(site.map(fg))?;
        for h in site.maps_from(site.target_size(g)) {
            let hm = site.map(h);
            let gh = site.compose_ids(g, h);
            let (fgm, ghm) = (site.map(fg), site.map(gh));
            let xi = op.proarrow(hm)?;
            let phi_gh = op.proarrow(ghm)?;
            let tg = gens.of(h)?;
            for &(x, z, y, a, b) in &lg {
                for &(z2, w, c) in tg.iter() {
                    if z2 != z {
                        continue;
                    }
                    let ab = op.laxity(fm, gm, x, y, z)?(a, b);
                    let bc = op.laxity(gm, hm, y, z, w)?(b, c);
                    let typed = ab < phi_fg.size(x, z) && bc < phi_gh.size(y, w);
                    let (lhs, rhs) = if typed {
                        (
                            op.laxity(fgm, hm, x, z, w)?(ab, c),
                            op.laxity(fm, ghm, x, y, w)?(a, bc),
                        )
                    } else {
                        (0, 1)
                    };
                    out.expect(lhs == rhs, || {
                        json!({
                            "triple": {"f": fm.to_json(), "g": gm.to_json(), "h": hm.to_json()},
                            "x": obj(phi.source(), x), "y": obj(phi.target(), y),
                            "z": obj(psi.target(), z), "w": obj(xi.target(), w),
                            "a": a, "b": b, "c": c,
                        })
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Tabulates a square cell, turning malformed tables into a failure.
fn tabulate(op: &DfOperad, sq: &Square<'_>) -> Result<Result<ProfCell, Value>, DblCatError> {
    match op.cell(sq) {
        Ok(c) => Ok(Ok(c)),
        Err(DblCatError::Cat(e)) => Ok(Err(json!(e.to_string()))),
        Err(e) => Err(e),
    }
}

fn check_cells(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("cell_naturality");
    for i in 0..site.square_count() {
        let sq = site.square(i);
        let verdict = match tabulate(op, &sq)? {
            Ok(cell) => check_cell(&cell).map_err(|v| v.to_json()),
            Err(v) => Err(v),
        };
        if let Err(v) = verdict {
            out.fail_with(|| json!({"square": sq.to_json(), "violation": v}));
        }
        out.tick();
    }
    Ok(out)
}

/// Compatibility of the square cells with identities, vertical stacking
/// (through the laxity cells) and horizontal pasting.
///
/// Squares are stored with their apex labelling, so the composite of two
/// stacked squares is again a site square; the relabelling that matches
/// the two apexes is part of that lookup.
pub fn check_pb_functoriality(op: &DfOperad) -> Result<Report, DblCatError> {
    let site = op.site().clone();
    let mut report = Report::new(
        format!("pullback functoriality {}", op.name()),
        site.bound(),
        site.bound(),
    );
    report.push(check_identity_squares(op)?);
    report.push(check_unit_squares(op)?);
    report.push(check_vertical(op)?);
    report.push(check_horizontal_pasting(op)?);
    report.note("bounded check: every set of the site has at most site_bound elements");
    Ok(report)
}

fn check_identity_squares(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("identity_squares");
    for f in 0..site.map_count() {
        let (m, n) = (site.source_size(f), site.target_size(f));
        let ids = [f as u32, site.identity_id(m) as u32, f as u32, site.identity_id(n) as u32];
        let Some(i) = site.square_id(ids) else {
            out.fail_with(|| json!({"missing_square_for": site.map(f).to_json()}));
            continue;
        };
        let sq = site.square(i);
        let phi = op.proarrow(sq.f)?;
        for x in 0..phi.source().object_count() {
            for a in 0..phi.target().object_count() {
                let n = phi.size(x, a);
                if n == 0 {
                    continue;
                }
                let alpha = op.square_cell(&sq, x, a)?;
                for e in 0..n {
                    out.expect(alpha(e) == e, || {
                        json!({"square": sq.to_json(), "x": obj(phi.source(), x), "a": obj(phi.target(), a), "e": e})
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Squares `(id, k, id, k)`: the cell on hom profunctors is `k*` on arrows.
fn check_unit_squares(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("unit_squares");
    for k in 0..site.map_count() {
        let (m, n) = (site.source_size(k), site.target_size(k));
        let ids = [site.identity_id(m) as u32, k as u32, site.identity_id(n) as u32, k as u32];
        let Some(i) = site.square_id(ids) else {
            out.fail_with(|| json!({"missing_square_for": site.map(k).to_json()}));
            continue;
        };
        let sq = site.square(i);
        let ks = op.reindex(sq.k)?;
        let (ml, mi) = (ks.source().clone(), ks.target().clone());
        let hom_l = op.proarrow(sq.g)?;
        for x in 0..ml.object_count() {
            for a in 0..ml.object_count() {
                let n = hom_l.size(x, a);
                if n == 0 {
                    continue;
                }
                let alpha = op.square_cell(&sq, x, a)?;
                for e in 0..n {
                    let arrow = ml.hom(x, a).get(e).copied();
                    let expected = arrow.map(|h| mi.hom_pos(ks.arr(h)));
                    out.expect(Some(alpha(e)) == expected, || {
                        json!({"square": sq.to_json(), "x": obj(&ml, x), "a": obj(&ml, a), "e": e})
                    });
                }
            }
        }
    }
    Ok(out)
}

fn check_vertical(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("vertical_pasting");
    let mut composite_gens: HashMap<(u32, u32), Arc<RawGens>> = HashMap::new();
    for i in 0..site.square_count() {
        let [f, k, g, l] = site.square_ids(i);
        let s1 = site.square(i);
        for &j in site.squares_with_top(l as usize) {
            let [f2, _, g2, m] = site.square_ids(j as usize);
            let s2 = site.square(j as usize);
            let ids = [
                site.compose_ids(f as usize, f2 as usize) as u32,
                k,
                site.compose_ids(g as usize, g2 as usize) as u32,
                m,
            ];
            let witness = || json!({"upper": s1.to_json(), "lower": s2.to_json()});
            let Some(c) = site.square_id(ids) else {
                out.fail_with(|| json!({"missing_composite": witness()}));
                continue;
            };
            let sc = site.square(c);
            let gens = match composite_gens.get(&(g, g2)) {
                Some(v) => v.clone(),
                None => {
                    let v = Arc::new(composite_generators(
                        &op.proarrow(s1.g)?,
                        &op.proarrow(s2.g)?,
                        Sides::Both,
                    )?);
                    composite_gens.insert((g, g2), v.clone());
                    v
                }
            };
            let (ks, ls, ms) = (op.reindex(s1.k)?, op.reindex(s1.l)?, op.reindex(s2.l)?);
            let (phi_f, phi_f2) = (op.proarrow(s1.f)?, op.proarrow(s2.f)?);
            let phi_gg = op.proarrow(sc.g)?;
            for &(x, z, y, a, b) in gens.iter() {
                let (kx, ly, mz) = (ks.obj(x), ls.obj(y), ms.obj(z));
                let a1 = op.square_cell(&s1, x, y)?(a);
                let b1 = op.square_cell(&s2, y, z)?(b);
                let ab = op.laxity(s1.g, s2.g, x, y, z)?(a, b);
                let typed = a1 < phi_f.size(kx, ly) && b1 < phi_f2.size(ly, mz) && ab < phi_gg.size(x, z);
                let ok = typed && {
                    let lhs = op.laxity(s1.f, s2.f, kx, ly, mz)?(a1, b1);
                    let rhs = op.square_cell(&sc, x, z)?(ab);
                    lhs == rhs
                };
                out.expect(ok, || {
                    json!({"stacked": witness(), "x": obj(phi_gg.source(), x), "z": obj(phi_gg.target(), z), "a": a, "b": b})
                });
            }
        }
    }
    Ok(out)
}

fn check_horizontal_pasting(op: &DfOperad) -> Result<CheckOutcome, DblCatError> {
    let site = op.site();
    let mut out = CheckOutcome::new("horizontal_pasting");
    let mut gens = Generators::new(op);
    for i in 0..site.square_count() {
        let [f, k, g, l] = site.square_ids(i);
        let s1 = site.square(i);
        for &j in site.squares_with_left(g as usize) {
            let [_, k2, h, l2] = site.square_ids(j as usize);
            let s2 = site.square(j as usize);
            let ids = [
                f,
                site.compose_ids(k as usize, k2 as usize) as u32,
                h,
                site.compose_ids(l as usize, l2 as usize) as u32,
            ];
            let witness = || json!({"left": s1.to_json(), "right": s2.to_json()});
            let Some(c) = site.square_id(ids) else {
                out.fail_with(|| json!({"missing_composite": witness()}));
                continue;
            };
            let sc = site.square(c);
            let (k2s, l2s) = (op.reindex(s2.k)?, op.reindex(s2.l)?);
            let phi_g = op.proarrow(s1.g)?;
            let tg = gens.of(h as usize)?;
            for &(x, a, e) in tg.iter() {
                let (x2, a2) = (k2s.obj(x), l2s.obj(a));
                let inner = op.square_cell(&s2, x, a)?(e);
                let ok = inner < phi_g.size(x2, a2) && {
                    let lhs = op.square_cell(&s1, x2, a2)?(inner);
                    lhs == op.square_cell(&sc, x, a)?(e)
                };
                out.expect(ok, || json!({"pasted": witness(), "x": x, "a": a, "e": e}));
            }
        }
    }
    Ok(out)
}

/// Product preservation: `M(I+J) -> MI × MJ` is an isomorphism for every
/// site sum; `Φ_{f+g}` with the cells of the two injection squares is a
/// product of `Φ_f` and `Φ_g`; and each `Φ_f` is the product over the
/// fibers of `f` of the proarrows of the fiber maps.
pub fn check_product_preservation(op: &DfOperad) -> Result<Report, DblCatError> {
    let site = op.site().clone();
    let mut report = Report::new(
        format!("product preservation {}", op.name()),
        site.bound(),
        site.bound(),
    );
    report.push(check_sum_comparison(op, &site)?);
    report.push(check_proarrow_products(op, &site)?);
    report.push(check_fiber_decomposition(op, &site)?);
    report.note("bounded check: sums are formed only within site_bound");
    Ok(report)
}

fn check_sum_comparison(op: &DfOperad, site: &BoundedSite) -> Result<CheckOutcome, DblCatError> {
    let mut out = CheckOutcome::new("sum_comparison");
    let b = site.bound();
    for m in 0..=b {
        for n in 0..=(b - m) {
            let s = site.sum(m, n)?;
            let (i1, i2) = (op.reindex(&s.inj_left)?, op.reindex(&s.inj_right)?);
            let prod = Arc::new(product_category(i1.target(), i2.target())?);
            let ok = pairing(&i1, &i2, prod).map(|p| is_isomorphism(&p)).unwrap_or(false);
            out.expect(ok, || json!({"sum": s.carrier.name()}));
        }
    }
    Ok(out)
}

fn check_proarrow_products(op: &DfOperad, site: &BoundedSite) -> Result<CheckOutcome, DblCatError> {
    let mut out = CheckOutcome::new("proarrow_products");
    let b = site.bound();
    for f in 0..site.map_count() {
        for g in 0..site.map_count() {
            let (fs, gs) = (site.source_size(f), site.source_size(g));
            let (ft, gt) = (site.target_size(f), site.target_size(g));
            if fs + gs > b || ft + gt > b {
                continue;
            }
            let (fm, gm) = (site.map(f), site.map(g));
            let (top, bottom, fg) = sum_of_maps(fm, gm);
            let left = Square {
                f: fm,
                k: &top.inj_left,
                g: &fg,
                l: &bottom.inj_left,
            };
            let right = Square {
                f: gm,
                k: &top.inj_right,
                g: &fg,
                l: &bottom.inj_right,
            };
            let verdict = match (tabulate(op, &left)?, tabulate(op, &right)?) {
                (Ok(p1), Ok(p2)) => {
                    let w = ProductDiagramWitness {
                        apex: op.proarrow(&fg)?,
                        factors: [op.proarrow(fm)?, op.proarrow(gm)?],
                        projections: [p1, p2],
                    };
                    check_product_diagram(&w).map_err(|v| v.to_json())
                }
                (Err(v), _) | (_, Err(v)) => Err(v),
            };
            if let Err(v) = verdict {
                out.fail_with(|| json!({"f": fm.to_json(), "g": gm.to_json(), "violation": v}));
            }
            out.tick();
        }
    }
    Ok(out)
}

fn check_fiber_decomposition(op: &DfOperad, site: &BoundedSite) -> Result<CheckOutcome, DblCatError> {
    let mut out = CheckOutcome::new("fiber_decomposition");
    for f in 0..site.map_count() {
        let fm = site.map(f);
        let phi = op.proarrow(fm)?;
        let fibers = fiber_decompose(fm);
        let points: Vec<FinMap> = fibers
            .iter()
            .map(|fb| FinMap::new(fb.map.target().clone(), fm.target().clone(), vec![fb.point]))
            .collect::<Result<_, _>>()?;
        let squares: Vec<Square<'_>> = fibers
            .iter()
            .zip(&points)
            .map(|(fb, pt)| Square {
                f: &fb.map,
                k: &fb.inclusion,
                g: fm,
                l: pt,
            })
            .collect();
        let parts: Vec<(Arc<Profunctor>, Arc<crate::fincat::CatFunctor>, Arc<crate::fincat::CatFunctor>)> = squares
            .iter()
            .map(|sq| Ok((op.proarrow(sq.f)?, op.reindex(sq.k)?, op.reindex(sq.l)?)))
            .collect::<Result<_, DblCatError>>()?;
        let (mi, mj) = (phi.source().clone(), phi.target().clone());
        for x in 0..mi.object_count() {
            for y in 0..mj.object_count() {
                let radices: Vec<usize> = parts
                    .iter()
                    .map(|(p, k, l)| p.size(k.obj(x), l.obj(y)))
                    .collect();
                let n = phi.size(x, y);
                let volume = crate::radix::volume(&radices).unwrap_or(usize::MAX);
                let mut ok = volume == n;
                if ok && n > 0 {
                    let kernels = squares
                        .iter()
                        .map(|sq| op.square_cell(sq, x, y))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut seen = vec![false; n];
                    let mut digits = vec![0; radices.len()];
                    for e in 0..n {
                        for (d, k) in digits.iter_mut().zip(&kernels) {
                            *d = k(e);
                        }
                        if digits.iter().zip(&radices).any(|(d, r)| d >= r) {
                            ok = false;
                            break;
                        }
                        let code = crate::radix::encode(&digits, &radices);
                        if std::mem::replace(&mut seen[code], true) {
                            ok = false;
                            break;
                        }
                    }
                }
                out.expect(ok, || {
                    json!({"map": fm.to_json(), "x": obj(&mi, x), "y": obj(&mj, y), "size": n, "fiber_sizes": radices})
                });
            }
        }
    }
    Ok(out)
}
