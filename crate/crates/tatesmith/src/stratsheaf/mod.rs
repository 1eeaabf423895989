//! Constructible complexes on finite stratified posets: stalks, costalks, sections,
//! recollement, global homs and Tate support.

mod cobar;
mod poset;
mod sheaf;

use std::collections::BTreeMap;

use serde::Serialize;

pub use cobar::{end_hom, EndHom, SheafComposition};
pub use poset::{Chain, StratPoset};
pub use sheaf::{compose_maps, identity_map, map_component, CellSheafComplex, ChainComps, SheafMorphism, ValidationReport};

use crate::error::{Error, Result};
use crate::homcx::{cone, shift, tensor_complex, PiChainMap, PiComplex};
use crate::linalg::{fp_rank, rank_q, IntMatrix};
use crate::pimod::PiModule;
use crate::tate::{tate_dims, TateDims};

fn position(set: &[usize], x: usize) -> usize {
    set.iter().position(|&y| y == x).expect("element of the subset")
}

/// RΓ(Q, F) for an up-set Q.
pub fn sections(f: &CellSheafComplex, q: &[usize]) -> Result<PiComplex> {
    Ok(sections_hom(f, q)?.complex().clone())
}

fn sections_hom(f: &CellSheafComplex, q: &[usize]) -> Result<EndHom> {
    if !f.base().is_up_set(q) {
        return Err(Error::NotUpSet);
    }
    let fq = f.restrict(q);
    let unit = CellSheafComplex::constant_z(fq.base());
    EndHom::new(&unit, &fq)
}

pub fn global_sections(f: &CellSheafComplex) -> Result<PiComplex> {
    let all: Vec<usize> = (0..f.base().len()).collect();
    sections(f, &all)
}

/// i_λ^! F, computed as global homs from the skyscraper Z_λ on the star U_λ.
pub fn costalk(f: &CellSheafComplex, i: usize) -> Result<PiComplex> {
    Ok(costalk_hom(f, i)?.complex().clone())
}

pub(crate) fn costalk_hom(f: &CellSheafComplex, i: usize) -> Result<EndHom> {
    if i >= f.base().len() {
        return Err(Error::UnknownStratum(i.to_string()));
    }
    let u = f.base().up_set(i);
    let fu = f.restrict(&u);
    let sky = CellSheafComplex::skyscraper(fu.base(), position(&u, i));
    EndHom::new(&sky, &fu)
}

pub fn costalk_by_label(f: &CellSheafComplex, label: &str) -> Result<PiComplex> {
    costalk(f, f.base().index_of(label)?)
}

/// The restriction F(λ) -> RΓ(U_λ \ λ, F) as a chain map (equivariant when λ is fixed).
pub fn link_restriction(f: &CellSheafComplex, i: usize) -> Result<PiChainMap> {
    let base = f.base();
    let link: Vec<usize> = base.up_set(i).into_iter().filter(|&j| j != i).collect();
    let stalk = f.stalk(i)?;
    let fl = if base.is_fixed(i) { f.clone() } else { f.forget_action() };
    let stalk = if base.is_fixed(i) { stalk } else { stalk.forget_action() };
    let sec = sections_hom(&fl, &link)?;
    let s = sec.complex().clone();
    let mut comps = BTreeMap::new();
    for n in stalk.degrees() {
        let mut m = IntMatrix::zeros(s.rank(n), stalk.rank(n));
        for (x, &mu) in link.iter().enumerate() {
            if let Some((off, _)) = sec.offset(n, &vec![x]) {
                m.set_block(off, 0, &map_component(&f.gen(i, mu), f.value(i), f.value(mu), n));
            }
        }
        comps.insert(n, m);
    }
    PiChainMap::new(stalk, s, 0, comps)
}

/// Costalk as the fiber of the link restriction; an independent route to [`costalk`].
pub fn costalk_fiber(f: &CellSheafComplex, i: usize) -> Result<PiComplex> {
    let r = link_restriction(f, i)?;
    Ok(shift(&cone(&r)?, -1))
}

pub fn open_restrict(f: &CellSheafComplex, u: &[usize]) -> Result<CellSheafComplex> {
    if !f.base().is_up_set(u) {
        return Err(Error::NotUpSet);
    }
    Ok(f.restrict(u))
}

pub fn closed_restrict(f: &CellSheafComplex, z: &[usize]) -> Result<CellSheafComplex> {
    if !f.base().is_down_set(z) {
        return Err(Error::NotDownSet);
    }
    Ok(f.restrict(z))
}

/// j_!: extension by zero from an open subposet.
pub fn extend_zero(f: &CellSheafComplex, ambient: &StratPoset) -> Result<CellSheafComplex> {
    let u = ambient.indices_of(f.base().labels())?;
    if !ambient.is_up_set(&u) {
        return Err(Error::NotUpSet);
    }
    f.extend_by_zero(ambient)
}

/// i_*: pushforward from a closed subposet.
pub fn closed_push(f: &CellSheafComplex, ambient: &StratPoset) -> Result<CellSheafComplex> {
    let z = ambient.indices_of(f.base().labels())?;
    if !ambient.is_down_set(&z) {
        return Err(Error::NotDownSet);
    }
    f.extend_by_zero(ambient)
}

/// j_*: values(λ) = RΓ(U ∩ U_λ, F).
pub fn open_push(f: &CellSheafComplex, ambient: &StratPoset) -> Result<CellSheafComplex> {
    let u = ambient.indices_of(f.base().labels())?;
    if !ambient.is_up_set(&u) {
        return Err(Error::NotUpSet);
    }
    let p = ambient.p();
    let n = ambient.len();
    // stars inside f's own base, for each ambient stratum
    let stars: Vec<Vec<usize>> = (0..n)
        .map(|l| (0..u.len()).filter(|&x| ambient.le(l, u[x])).collect())
        .collect();
    let homs: Vec<Option<EndHom>> = stars
        .iter()
        .map(|s| if s.is_empty() { Ok(None) } else { sections_hom(f, s).map(Some) })
        .collect::<Result<_>>()?;
    let values: Vec<PiComplex> = homs
        .iter()
        .map(|h| h.as_ref().map_or_else(|| PiComplex::zero(p), |h| h.complex().clone()))
        .collect();
    let mut gen = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if !ambient.lt(a, b) {
                continue;
            }
            let m = match (&homs[a], &homs[b]) {
                (Some(ha), Some(hb)) => {
                    let old_of_new: Vec<usize> = stars[b].iter().map(|&x| position(&stars[a], x)).collect();
                    ha.restriction_map(hb, &old_of_new)
                }
                _ => ChainComps::new(),
            };
            gen.insert((a, b), m);
        }
    }
    let equiv = (0..n)
        .map(|a| {
            let s = ambient.sigma(a);
            match (&homs[a], &homs[s]) {
                (Some(ha), Some(hs)) => transport_sections(f, ha, &stars[a], hs, &stars[s]),
                _ => ChainComps::new(),
            }
        })
        .collect();
    CellSheafComplex::new(ambient.clone(), values, gen, Some(equiv))
}

/// Moves sections over a star to sections over its image under σ.
fn transport_sections(f: &CellSheafComplex, from: &EndHom, set_a: &[usize], to: &EndHom, set_b: &[usize]) -> ChainComps {
    let fb = f.base();
    let src = from.complex();
    let tgt = to.complex();
    let mut out = ChainComps::new();
    for n in src.degrees() {
        let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
        for c in from.chains() {
            let Some((so, ss)) = from.offset(n, c) else { continue };
            let image: Vec<usize> = c.iter().map(|&x| position(set_b, fb.sigma(set_a[x]))).collect();
            let (to_off, _) = to.offset(n, &image).expect("image chain present");
            let last = set_a[*c.last().unwrap()];
            let k = c.len() as i64 - 1;
            let e = map_component(f.equiv(last), f.value(last), f.value(fb.sigma(last)), n - k);
            debug_assert_eq!(e.cols(), ss);
            m.set_block(to_off, so, &e);
        }
        out.insert(n, m);
    }
    out
}

/// Termwise exactness of j_!j^*F -> F -> i_*i^*F at every stratum.
#[derive(Clone, Debug, Serialize)]
pub struct RecollementReport {
    pub exact_everywhere: bool,
    pub failures: Vec<String>,
}

pub fn recollement_check(f: &CellSheafComplex, u: &[usize]) -> Result<RecollementReport> {
    let base = f.base();
    let z = base.complement(u);
    let left = extend_zero(&open_restrict(f, u)?, base)?;
    let right = closed_push(&closed_restrict(f, &z)?, base)?;
    let inc: Vec<ChainComps> = (0..base.len())
        .map(|i| if u.contains(&i) { identity_map(f.value(i)) } else { ChainComps::new() })
        .collect();
    let proj: Vec<ChainComps> = (0..base.len())
        .map(|i| if z.contains(&i) { identity_map(f.value(i)) } else { ChainComps::new() })
        .collect();
    let a = SheafMorphism::new(left.clone(), f.clone(), inc)?;
    let b = SheafMorphism::new(f.clone(), right.clone(), proj)?;
    let mut failures = Vec::new();
    for i in 0..base.len() {
        let (l, m, r) = (left.value(i), f.value(i), right.value(i));
        for n in m.degrees() {
            let ai = map_component(&a.components[i], l, m, n);
            let bi = map_component(&b.components[i], m, r, n);
            let ok = rank_q(&ai) == l.rank(n)
                && bi.mul(&ai).is_zero()
                && rank_q(&bi) == r.rank(n)
                && l.rank(n) + r.rank(n) == m.rank(n)
                && fp_rank(&bi, f.p()) == r.rank(n);
            if !ok {
                failures.push(format!("{} degree {n}", base.label(i)));
            }
        }
    }
    Ok(RecollementReport { exact_everywhere: failures.is_empty(), failures })
}

/// Tate classification of a lattice complex at a non-fixed stratum: the module induced
/// around the orbit, which is free.
fn induced_orbit(c: &PiComplex) -> PiComplex {
    let p = c.p();
    tensor_complex(&c.forget_action(), &PiComplex::single(PiModule::regular(p, 1), 0)).expect("same prime")
}

pub fn tate_of_stalk(f: &CellSheafComplex, i: usize) -> Result<TateDims> {
    let s = f.stalk(i)?;
    Ok(if f.base().is_fixed(i) { tate_dims(&s) } else { tate_dims(&induced_orbit(&s)) })
}

pub fn tate_of_costalk(f: &CellSheafComplex, i: usize) -> Result<TateDims> {
    let s = costalk(f, i)?;
    Ok(if f.base().is_fixed(i) { tate_dims(&s) } else { tate_dims(&induced_orbit(&s)) })
}

pub fn tate_stalk_table(f: &CellSheafComplex) -> Result<BTreeMap<String, TateDims>> {
    (0..f.base().len()).map(|i| Ok((f.base().label(i).to_string(), tate_of_stalk(f, i)?))).collect()
}

pub fn tate_costalk_table(f: &CellSheafComplex) -> Result<BTreeMap<String, TateDims>> {
    (0..f.base().len()).map(|i| Ok((f.base().label(i).to_string(), tate_of_costalk(f, i)?))).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TateSupport {
    pub raw: Vec<String>,
    pub closure: Vec<String>,
}

pub fn support(f: &CellSheafComplex) -> Result<TateSupport> {
    let base = f.base();
    let mut raw = Vec::new();
    for i in 0..base.len() {
        if !tate_of_stalk(f, i)?.is_zero() {
            raw.push(i);
        }
    }
    let closure = base.down_closure(&raw);
    let names = |v: &[usize]| v.iter().map(|&i| base.label(i).to_string()).collect();
    Ok(TateSupport { raw: names(&raw), closure: names(&closure) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianInvariants;

    fn circle(action: [usize; 3]) -> StratPoset {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let simp = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]];
        StratPoset::face_poset(3, &names, &simp, &action).unwrap()
    }

    fn suspension() -> StratPoset {
        let names: Vec<String> = ["n", "s", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut simp = Vec::new();
        for v in 0..5 {
            simp.push(vec![v]);
        }
        let eq = [(2, 3), (3, 4), (2, 4)];
        for &(x, y) in &eq {
            simp.push(vec![x, y]);
            for pole in 0..2 {
                simp.push(vec![pole, x, y]);
            }
        }
        for pole in 0..2 {
            for x in 2..5 {
                simp.push(vec![pole, x]);
            }
        }
        StratPoset::face_poset(3, &names, &simp, &[0, 1, 3, 4, 2]).unwrap()
    }

    fn coh(c: &PiComplex) -> BTreeMap<i64, AbelianInvariants> {
        c.cohomology().unwrap().into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    #[test]
    fn sections_over_up_set_with_minimum() {
        let base = StratPoset::simple(3, &["a", "b", "c"], &[("a", "b"), ("a", "c")], &[0, 1, 1]).unwrap();
        let f = CellSheafComplex::constant(&base, &crate::homcx::mod_p_object(3).unwrap());
        assert_eq!(coh(&global_sections(&f).unwrap()), coh(f.value(0)));
        assert_eq!(sections(&f, &[0]), Err(Error::NotUpSet));
        assert!(sections(&f, &[]).unwrap().is_zero());
    }

    #[test]
    fn circle_sections() {
        let f = CellSheafComplex::constant_z(&circle([0, 1, 2]));
        let h = coh(&global_sections(&f).unwrap());
        assert_eq!(h.len(), 2);
        assert_eq!(h[&0], AbelianInvariants::free(1));
        assert_eq!(h[&1], AbelianInvariants::free(1));
    }

    #[test]
    fn suspension_costalk_at_pole() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        let pole = base.index_of("n").unwrap();
        let c = costalk(&f, pole).unwrap();
        let h = coh(&c);
        assert_eq!(h.len(), 1);
        assert_eq!(h[&2], AbelianInvariants::free(1));
        assert_eq!(coh(&costalk_fiber(&f, pole).unwrap()), h);
        assert_eq!(tate_dims(&c), TateDims { t0: 1, t1: 0 });
        // open stratum: costalk = stalk
        let top = base.index_of("n,a,b").unwrap();
        assert_eq!(coh(&costalk(&f, top).unwrap()), coh(f.value(top)));
    }

    #[test]
    fn costalk_routes_agree_on_edges() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        for i in 0..base.len() {
            assert_eq!(coh(&costalk(&f, i).unwrap()), coh(&costalk_fiber(&f, i).unwrap()), "{}", base.label(i));
        }
    }

    #[test]
    fn extension_by_zero_costalk() {
        let base = StratPoset::simple(3, &["a", "b"], &[("a", "b")], &[0, 1]).unwrap();
        let f = CellSheafComplex::constant_z(&base);
        let g = extend_zero(&open_restrict(&f, &[1]).unwrap(), &base).unwrap();
        assert!(g.stalk(0).unwrap().is_zero());
        // costalk at the closed point: fiber of 0 -> Γ(link) = Z, so Z in degree 1
        let h = coh(&costalk(&g, 0).unwrap());
        assert_eq!(h.len(), 1);
        assert_eq!(h[&1], AbelianInvariants::free(1));
    }

    #[test]
    fn open_push_on_two_chain() {
        let base = StratPoset::simple(3, &["a", "b"], &[("a", "b")], &[0, 1]).unwrap();
        let f = CellSheafComplex::constant_z(&base);
        let u = open_restrict(&f, &[1]).unwrap();
        let g = open_push(&u, &base).unwrap();
        assert_eq!(coh(g.value(0)), coh(&sections(&f, &[1]).unwrap()));
        assert_eq!(coh(g.value(1)), coh(f.value(1)));
    }

    #[test]
    fn open_push_equivariant() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        let u: Vec<usize> = (0..base.len()).filter(|&i| base.dim(i) == 2).collect();
        let g = open_push(&open_restrict(&f, &u).unwrap(), &base).unwrap();
        assert!(g.validate().is_ok());
    }

    #[test]
    fn recollement_is_exact() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        let u: Vec<usize> = (0..base.len()).filter(|&i| base.dim(i) >= 1).collect();
        assert!(recollement_check(&f, &u).unwrap().exact_everywhere);
    }

    #[test]
    fn supports() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        let s = support(&f).unwrap();
        assert_eq!(s.raw, vec!["n".to_string(), "s".to_string()]);
        let triv = CellSheafComplex::constant_z(&base.without_action());
        assert_eq!(support(&triv).unwrap().raw.len(), base.len());
    }

    #[test]
    fn stalk_tate_matches_table() {
        let base = suspension();
        let f = CellSheafComplex::constant_z(&base);
        let t = tate_stalk_table(&f).unwrap();
        assert_eq!(t["n"], TateDims { t0: 1, t1: 0 });
        assert_eq!(t["a"], TateDims { t0: 0, t1: 0 });
        let pole = base.index_of("s").unwrap();
        assert_eq!(tate_dims(&f.stalk(pole).unwrap()), t["s"]);
    }
}
