//! Tate cohomology over a point, the even/odd classification, and stable homs.

mod cup;
mod model;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

pub use cup::{cup, Composition, Evaluation, Pairing};
pub use model::{tate_dim_fast, ClassSpace, ModelElem, SlotModel};

use crate::error::{Error, Result};
use crate::homcx::{hom_complex, hom_element, PiChainMap, PiComplex};
use crate::linalg::FpMatrix;
use crate::pimod::same_prime;

/// (T^0, T^1) with representative cocycles of the complete slot model.
#[derive(Clone, Debug)]
pub struct TateVS {
    pub p: u64,
    pub t0_dim: usize,
    pub t1_dim: usize,
    /// Degree at which T^0 and T^1 were read (even/odd pair offset, offset+1).
    pub offset: i64,
    /// bases[i] holds representatives of T^i.
    pub bases: [Vec<ModelElem>; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TateDims {
    pub t0: usize,
    pub t1: usize,
}

impl TateDims {
    pub fn is_zero(&self) -> bool {
        self.t0 == 0 && self.t1 == 0
    }

    pub fn get(&self, parity: i64) -> usize {
        if parity.rem_euclid(2) == 0 {
            self.t0
        } else {
            self.t1
        }
    }

    /// Dimensions of X[k].
    pub fn shifted(&self, k: i64) -> TateDims {
        if k.rem_euclid(2) == 0 {
            *self
        } else {
            TateDims { t0: self.t1, t1: self.t0 }
        }
    }
}

fn parity_index(n: i64) -> usize {
    n.rem_euclid(2) as usize
}

/// Tate dimensions read at degrees `offset`, `offset + 1` by rank counting.
pub fn tate_dims_at(c: &PiComplex, offset: i64) -> TateDims {
    if c.is_zero() {
        return TateDims { t0: 0, t1: 0 };
    }
    let m = SlotModel::tate(c);
    let a = tate_dim_fast(&m, offset);
    let b = tate_dim_fast(&m, offset + 1);
    if offset.rem_euclid(2) == 0 {
        TateDims { t0: a, t1: b }
    } else {
        TateDims { t0: b, t1: a }
    }
}

pub fn tate_dims(c: &PiComplex) -> TateDims {
    tate_dims_at(c, 0)
}

/// Full Tate cohomology with bases, read at `offset`, `offset + 1`; cross-checks the
/// SNF-based dimensions against rank counting.
pub fn tate_cohomology_at(c: &PiComplex, offset: i64) -> Result<TateVS> {
    let p = c.p();
    if c.is_zero() {
        return Ok(TateVS { p, t0_dim: 0, t1_dim: 0, offset, bases: [Vec::new(), Vec::new()] });
    }
    let m = SlotModel::tate(c);
    let mut bases: [Vec<ModelElem>; 2] = [Vec::new(), Vec::new()];
    for n in [offset, offset + 1] {
        let cs = m.classes(n)?;
        let fast = tate_dim_fast(&m, n);
        if fast != cs.dim() {
            return Err(Error::InvalidComplex(format!(
                "rank count {fast} disagrees with Smith form {} in degree {n}",
                cs.dim()
            )));
        }
        bases[parity_index(n)] = (0..cs.dim()).map(|i| m.from_flat(n, &cs.rep(i))).collect();
    }
    Ok(TateVS { p, t0_dim: bases[0].len(), t1_dim: bases[1].len(), offset, bases })
}

pub fn tate_cohomology(c: &PiComplex) -> Result<TateVS> {
    tate_cohomology_at(c, 0)
}

pub fn is_perfect(c: &PiComplex) -> bool {
    tate_dims(c).is_zero()
}

/// Image in the Tate category is T*Z^{k0} ⊕ T*Z^{k1}[1]; class k0 - k1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub k0: usize,
    pub k1: usize,
    pub k_class: i64,
}

pub fn classify(c: &PiComplex) -> Classification {
    let d = tate_dims(c);
    Classification { k0: d.t0, k1: d.t1, k_class: d.t0 as i64 - d.t1 as i64 }
}

/// T^0 and T^1 of a complex, with coordinates for arbitrary complete-model cocycles.
#[derive(Clone, Debug)]
pub struct TateSpace {
    model: SlotModel,
    spaces: [ClassSpace; 2],
}

impl TateSpace {
    pub fn new(c: &PiComplex) -> Result<Self> {
        let model = SlotModel::tate(c);
        let s0 = model.classes(0)?;
        let s1 = model.classes(1)?;
        Ok(TateSpace { model, spaces: [s0, s1] })
    }

    pub fn complex(&self) -> &PiComplex {
        self.model.complex()
    }

    pub fn model(&self) -> &SlotModel {
        &self.model
    }

    pub fn dims(&self) -> TateDims {
        TateDims { t0: self.spaces[0].dim(), t1: self.spaces[1].dim() }
    }

    pub fn dim(&self, parity: i64) -> usize {
        self.spaces[parity_index(parity)].dim()
    }

    /// Representative at degree 0 or 1.
    pub fn rep(&self, parity: i64, i: usize) -> ModelElem {
        let k = parity_index(parity);
        self.model.from_flat(k as i64, &self.spaces[k].rep(i))
    }

    pub fn element(&self, parity: i64, coords: &[u64]) -> ModelElem {
        let k = parity_index(parity) as i64;
        let mut acc = vec![BigInt::from(0); self.model.dim(k)];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = self.spaces[k as usize].rep(i);
            for (a, b) in acc.iter_mut().zip(r) {
                *a += b * BigInt::from(c);
            }
        }
        self.model.from_flat(k, &acc)
    }

    /// Coordinates of a complete-model cocycle of any degree.
    pub fn coords(&self, e: &ModelElem) -> Vec<u64> {
        let k = e.degree.rem_euclid(2);
        let moved = e.periodic_shift(-(e.degree - k) / 2);
        let flat = self.model.to_flat(&moved);
        debug_assert!(self.model.is_cocycle(&moved), "coordinates requested for a non-cocycle");
        self.spaces[k as usize].coords(&flat)
    }

    /// Representative moved into the stable derived-invariant range.
    pub fn stable_lift(&self, e: &ModelElem) -> ModelElem {
        let need = self.model.complex().top() + 1;
        let mut j = 0;
        while e.degree + 2 * j < need {
            j += 1;
        }
        e.periodic_shift(j)
    }

    /// Matrix (columns = images of basis vectors) of a chain map φ: C -> D[k].
    pub fn induced_map(&self, target: &TateSpace, phi: &BTreeMap<i64, crate::linalg::IntMatrix>, k: i64, parity: i64) -> FpMatrix {
        let p = self.model.p();
        let tgt_par = parity + k;
        let cols: Vec<Vec<u64>> = (0..self.dim(parity))
            .map(|i| {
                let img = self.model.push_forward(&target.model, phi, k, &self.rep(parity, i));
                target.coords(&img)
            })
            .collect();
        FpMatrix::from_columns(p, target.dim(tgt_par), &cols)
    }
}

/// Product of two Tate classes through a pairing; all three spaces must match the pairing.
pub fn tate_product(
    pair: &dyn Pairing,
    left: &TateSpace,
    x: &ModelElem,
    right: &TateSpace,
    y: &ModelElem,
    target: &TateSpace,
) -> Vec<u64> {
    let xs = left.stable_lift(x);
    let ys = right.stable_lift(y);
    let z = cup(pair, &xs, &ys);
    target.coords(&z)
}

/// Stable homs from C to D: Hom in the Tate category and Hom into the shift by one.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub src: PiComplex,
    pub tgt: PiComplex,
    pub hom: PiComplex,
    /// Route (a): Tate cohomology of the hom complex.
    pub grading: (usize, usize),
    /// Route (b): derived invariants of the hom complex at the stable level.
    pub grading_colimit: (usize, usize),
    /// Even stabilization level 2n.
    pub level: i64,
    space: TateSpace,
}

/// Element of a stable hom space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableMorphism {
    pub parity: i64,
    pub coords: Vec<u64>,
}

impl StableMorphism {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Smallest even level in the stable range of derived invariants of E.
pub fn stable_level(e: &PiComplex) -> i64 {
    let mut l = (e.top() + 1).max(0);
    if l % 2 != 0 {
        l += 1;
    }
    l
}

fn colimit_dims(e: &PiComplex, level: i64) -> Result<(usize, usize)> {
    let inv = SlotModel::invariants(e);
    let mut dims = Vec::new();
    for k in 0..2 {
        let mut prev: Option<(ClassSpace, Vec<ModelElem>)> = None;
        let mut seen = Vec::new();
        for step in 0..3 {
            let n = level + k + 2 * step;
            let cs = inv.classes(n)?;
            if !cs.is_elementary() {
                return Err(Error::StabilizationFailure(format!(
                    "derived invariants in degree {n} are not elementary: {}",
                    cs.invariants()
                )));
            }
            let reps: Vec<ModelElem> = (0..cs.dim()).map(|i| inv.from_flat(n, &cs.rep(i))).collect();
            if let Some((_, prev_reps)) = &prev {
                // the periodicity map must be injective between consecutive levels
                let cols: Vec<Vec<u64>> = prev_reps
                    .iter()
                    .map(|r| cs.coords(&inv.to_flat(&r.periodic_shift(1))))
                    .collect();
                let rank = FpMatrix::from_columns(e.p(), cs.dim(), &cols).rank();
                if rank != prev_reps.len() || rank != cs.dim() {
                    return Err(Error::StabilizationFailure(format!(
                        "periodicity map in degree {n} has rank {rank}, dims {} -> {}",
                        prev_reps.len(),
                        cs.dim()
                    )));
                }
            }
            seen.push(cs.dim());
            prev = Some((cs, reps));
        }
        dims.push(seen[0]);
    }
    Ok((dims[0], dims[1]))
}

impl StableHom {
    pub fn space(&self) -> &TateSpace {
        &self.space
    }

    pub fn dim(&self, parity: i64) -> usize {
        self.space.dim(parity)
    }

    pub fn element(&self, m: &StableMorphism) -> ModelElem {
        self.space.element(m.parity, &m.coords)
    }

    /// Representative chain maps Tot(src ⊗ W_{>=0}) -> tgt[level + parity].
    pub fn representative(&self, m: &StableMorphism) -> ModelElem {
        let e = self.element(m);
        e.periodic_shift(self.level / 2)
    }

    pub fn basis(&self, parity: i64) -> Vec<StableMorphism> {
        let d = self.dim(parity);
        (0..d)
            .map(|i| {
                let mut c = vec![0; d];
                c[i] = 1;
                StableMorphism { parity: parity.rem_euclid(2), coords: c }
            })
            .collect()
    }

    /// Class of an equivariant chain map src -> tgt[k].
    pub fn class_of(&self, f: &PiChainMap) -> Result<StableMorphism> {
        if f.src != self.src || f.tgt != self.tgt {
            return Err(Error::ShapeMismatch("chain map does not match the hom space".into()));
        }
        let v = hom_element(&self.src, &self.tgt, f.shift, &f.components);
        let mut blocks = BTreeMap::new();
        if !v.is_empty() {
            blocks.insert(f.shift, v);
        }
        let e = ModelElem { degree: f.shift, blocks };
        Ok(StableMorphism { parity: f.shift.rem_euclid(2), coords: self.space.coords(&e) })
    }

    pub fn identity(&self) -> Result<StableMorphism> {
        if self.src != self.tgt {
            return Err(Error::ShapeMismatch("identity needs equal source and target".into()));
        }
        self.class_of(&PiChainMap::identity(&self.src))
    }

    pub fn zero(&self, parity: i64) -> StableMorphism {
        StableMorphism { parity: parity.rem_euclid(2), coords: vec![0; self.dim(parity)] }
    }
}

pub fn stable_hom(c: &PiComplex, d: &PiComplex) -> Result<StableHom> {
    same_prime(c.p(), d.p())?;
    let hom = hom_complex(c, d)?;
    let space = TateSpace::new(&hom)?;
    let fast = tate_dims(&hom);
    let grading = (fast.t0, fast.t1);
    if grading != (space.dim(0), space.dim(1)) {
        return Err(Error::StabilizationFailure(format!(
            "rank count {grading:?} disagrees with Smith form {:?}",
            (space.dim(0), space.dim(1))
        )));
    }
    let level = stable_level(&hom);
    let grading_colimit = if hom.is_zero() { (0, 0) } else { colimit_dims(&hom, level)? };
    if grading != grading_colimit {
        return Err(Error::StabilizationFailure(format!(
            "Tate route gives {grading:?}, colimit route gives {grading_colimit:?}"
        )));
    }
    Ok(StableHom { src: c.clone(), tgt: d.clone(), hom, grading, grading_colimit, level, space })
}

/// g ∘ f for f ∈ Hom(C, D), g ∈ Hom(D, F); `out` is the hom space from C to F.
pub fn compose(
    g_space: &StableHom,
    g: &StableMorphism,
    f_space: &StableHom,
    f: &StableMorphism,
    out: &StableHom,
) -> Result<StableMorphism> {
    if f_space.tgt != g_space.src || out.src != f_space.src || out.tgt != g_space.tgt {
        return Err(Error::ShapeMismatch("stable homs are not composable".into()));
    }
    let pair = Composition::new(&f_space.src, &f_space.tgt, &g_space.tgt)?;
    let coords = tate_product(
        &pair,
        &g_space.space,
        &g_space.element(g),
        &f_space.space,
        &f_space.element(f),
        &out.space,
    );
    Ok(StableMorphism { parity: (f.parity + g.parity).rem_euclid(2), coords })
}

/// Rank bookkeeping for the six-term sequence of f: C -> D and its cone K.
#[derive(Clone, Debug, Serialize)]
pub struct SixTermReport {
    /// Spots in order T^0C, T^0D, T^0K, T^1C, T^1D, T^1K.
    pub dims: [usize; 6],
    /// Ranks of the maps out of each spot.
    pub ranks: [usize; 6],
    /// Whether consecutive maps compose to zero, per spot.
    pub composites_vanish: [bool; 6],
    pub exact: bool,
}

pub fn six_term_sequence(f: &PiChainMap) -> Result<SixTermReport> {
    let (inc, proj) = crate::homcx::cone_maps(f)?;
    let sc = TateSpace::new(&f.src)?;
    let sd = TateSpace::new(&f.tgt)?;
    let sk = TateSpace::new(&inc.tgt)?;
    let mut maps = Vec::new();
    for parity in 0..2 {
        maps.push(sc.induced_map(&sd, &f.components, 0, parity));
        maps.push(sd.induced_map(&sk, &inc.components, 0, parity));
        maps.push(sk.induced_map(&sc, &proj.components, 1, parity));
    }
    let dims = [sc.dim(0), sd.dim(0), sk.dim(0), sc.dim(1), sd.dim(1), sk.dim(1)];
    let mut ranks = [0; 6];
    let mut composites_vanish = [true; 6];
    for i in 0..6 {
        ranks[i] = maps[i].rank();
        let prev = &maps[(i + 5) % 6];
        composites_vanish[i] = maps[i].mul(prev).is_zero();
    }
    let exact = (0..6).all(|i| composites_vanish[i] && ranks[(i + 5) % 6] + ranks[i] == dims[i]);
    Ok(SixTermReport { dims, ranks, composites_vanish, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcx::{direct_sum, mod_p_object, std_window, WindowKind};
    use crate::pimod::PiModule;

    fn single(m: PiModule) -> PiComplex {
        PiComplex::single(m, 0)
    }

    #[test]
    fn point_values() {
        let t = tate_cohomology(&single(PiModule::trivial(3, 1))).unwrap();
        assert_eq!((t.t0_dim, t.t1_dim), (1, 0));
        for k in 1..3 {
            let t = tate_cohomology(&single(PiModule::regular(5, k))).unwrap();
            assert_eq!((t.t0_dim, t.t1_dim), (0, 0));
        }
        let t = tate_cohomology(&single(PiModule::norm_quotient(3))).unwrap();
        assert_eq!((t.t0_dim, t.t1_dim), (0, 1));
        let t = tate_cohomology(&mod_p_object(3).unwrap()).unwrap();
        assert_eq!((t.t0_dim, t.t1_dim), (1, 1));
    }

    #[test]
    fn perfect_and_classify() {
        assert!(is_perfect(&single(PiModule::regular(3, 2))));
        assert!(is_perfect(&std_window(WindowKind::T, 3, 0, 3).unwrap()));
        assert!(!is_perfect(&single(PiModule::trivial(3, 1))));
        assert_eq!(classify(&mod_p_object(3).unwrap()), Classification { k0: 1, k1: 1, k_class: 0 });
        assert_eq!(classify(&single(PiModule::trivial(3, 3))).k_class, 3);
        assert_eq!(classify(&single(PiModule::norm_quotient(3))).k_class, -1);
    }

    #[test]
    fn window_offsets_agree() {
        let c = direct_sum(&mod_p_object(5).unwrap(), &single(PiModule::norm_quotient(5))).unwrap();
        let a = tate_cohomology_at(&c, 0).unwrap();
        for off in [-3, -2, 1, 2, 5] {
            let b = tate_cohomology_at(&c, off).unwrap();
            assert_eq!((a.t0_dim, a.t1_dim), (b.t0_dim, b.t1_dim), "offset {off}");
        }
    }

    #[test]
    fn stable_hom_examples() {
        let z = single(PiModule::trivial(3, 1));
        let h = stable_hom(&z, &z).unwrap();
        assert_eq!(h.grading, (1, 0));
        let k = mod_p_object(3).unwrap();
        let h = stable_hom(&k, &k).unwrap();
        assert_eq!(h.grading, (2, 2));
        let r = single(PiModule::regular(3, 1));
        assert_eq!(stable_hom(&r, &k).unwrap().grading, (0, 0));
    }

    #[test]
    fn identity_is_unit() {
        let k = mod_p_object(3).unwrap();
        let h = stable_hom(&k, &k).unwrap();
        let id = h.identity().unwrap();
        assert!(!id.is_zero());
        for parity in 0..2 {
            for f in h.basis(parity) {
                assert_eq!(compose(&h, &id, &h, &f, &h).unwrap(), f);
                assert_eq!(compose(&h, &f, &h, &id, &h).unwrap(), f);
            }
        }
    }

    fn small_elem(m: &SlotModel, n: i64, seed: u64) -> ModelElem {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let v: Vec<BigInt> = (0..m.dim(n))
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                BigInt::from(((x >> 33) % 5) as i64 - 2)
            })
            .collect();
        m.from_flat(n, &v)
    }

    fn add(a: &ModelElem, b: &ModelElem, sg: i64) -> ModelElem {
        let mut out = a.clone();
        for (k, v) in &b.blocks {
            let e = out.blocks.entry(*k).or_insert_with(|| vec![BigInt::from(0); v.len()]);
            for (x, y) in e.iter_mut().zip(v) {
                *x += y * sg;
            }
        }
        out
    }

    fn flat(m: &SlotModel, e: &ModelElem) -> Vec<BigInt> {
        m.to_flat(e)
    }

    #[test]
    fn cup_satisfies_leibniz() {
        let k = mod_p_object(3).unwrap();
        let nq = single(PiModule::norm_quotient(3));
        let c = direct_sum(&k, &nq).unwrap();
        let pair = Composition::new(&c, &k, &c).unwrap();
        let (ml, mr, mt) = (
            SlotModel::invariants(pair.left()),
            SlotModel::invariants(pair.right()),
            SlotModel::invariants(pair.target()),
        );
        let mut seed = 1;
        for i in 0..4 {
            for j in 0..4 {
                seed += 1;
                let f = small_elem(&ml, i, seed);
                let h = small_elem(&mr, j, seed * 7);
                let lhs = mt.apply_diff(&cup(&pair, &f, &h));
                let r1 = cup(&pair, &ml.apply_diff(&f), &h);
                let r2 = cup(&pair, &f, &mr.apply_diff(&h));
                let rhs = add(&r1, &r2, crate::homcx::sign(i));
                assert_eq!(flat(&mt, &lhs), flat(&mt, &rhs), "degrees {i}, {j}");
            }
        }
        let ev = Evaluation::new(&k, &c).unwrap();
        let (ml, mr, mt) = (
            SlotModel::invariants(ev.left()),
            SlotModel::invariants(ev.right()),
            SlotModel::invariants(ev.target()),
        );
        for i in 0..4 {
            for j in 0..4 {
                seed += 1;
                let f = small_elem(&ml, i, seed);
                let h = small_elem(&mr, j, seed * 3);
                let lhs = mt.apply_diff(&cup(&ev, &f, &h));
                let rhs = add(
                    &cup(&ev, &ml.apply_diff(&f), &h),
                    &cup(&ev, &f, &mr.apply_diff(&h)),
                    crate::homcx::sign(i),
                );
                assert_eq!(flat(&mt, &lhs), flat(&mt, &rhs), "evaluation degrees {i}, {j}");
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let k = mod_p_object(3).unwrap();
        let c = direct_sum(&k, &single(PiModule::trivial(3, 1))).unwrap();
        let hkc = stable_hom(&k, &c).unwrap();
        let hck = stable_hom(&c, &k).unwrap();
        let hkk = stable_hom(&k, &k).unwrap();
        let hcc = stable_hom(&c, &c).unwrap();
        for pa in 0..2 {
            for pb in 0..2 {
                for pc in 0..2 {
                    for a in hkc.basis(pa) {
                        for b in hck.basis(pb) {
                            for cc in hkc.basis(pc) {
                                // a ∘ (b ∘ c) and (a ∘ b) ∘ c, with c: K -> C, b: C -> K, a: K -> C
                                let bc = compose(&hck, &b, &hkc, &cc, &hkk).unwrap();
                                let l = compose(&hkc, &a, &hkk, &bc, &hkc).unwrap();
                                let ab = compose(&hkc, &a, &hck, &b, &hcc).unwrap();
                                let r = compose(&hcc, &ab, &hkc, &cc, &hkc).unwrap();
                                assert_eq!(l, r);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn through_perfect_is_zero() {
        let z = single(PiModule::trivial(3, 1));
        let r = single(PiModule::regular(3, 1));
        let hzr = stable_hom(&z, &r).unwrap();
        let hrz = stable_hom(&r, &z).unwrap();
        let hzz = stable_hom(&z, &z).unwrap();
        assert_eq!(hzr.grading, (0, 0));
        let f = hzr.zero(0);
        let g = hrz.zero(0);
        assert!(compose(&hrz, &g, &hzr, &f, &hzz).unwrap().is_zero());
    }

    #[test]
    fn end_of_mod_p_object_products() {
        // the two odd classes of End(cone p) compose to a nonzero even class
        let k = mod_p_object(3).unwrap();
        let h = stable_hom(&k, &k).unwrap();
        let odd = h.basis(1);
        let mut nonzero = 0;
        for a in &odd {
            for b in &odd {
                let ab = compose(&h, a, &h, b, &h).unwrap();
                assert_eq!(ab.parity, 0);
                if !ab.is_zero() {
                    nonzero += 1;
                }
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn six_term_on_multiplication_by_p() {
        let z = single(PiModule::trivial(3, 1));
        let f = crate::homcx::scalar_map(&z, 3);
        let rep = six_term_sequence(&f).unwrap();
        assert!(rep.exact, "{rep:?}");
        assert_eq!(rep.dims, [1, 1, 1, 0, 0, 1]);
        let nq = single(PiModule::norm_quotient(5));
        let c = direct_sum(&mod_p_object(5).unwrap(), &nq).unwrap();
        let rep = six_term_sequence(&crate::homcx::scalar_map(&c, 2)).unwrap();
        assert!(rep.exact, "{rep:?}");
    }

    #[test]
    fn class_of_chain_map_matches_induced_map() {
        let z = single(PiModule::trivial(3, 1));
        let h = stable_hom(&z, &z).unwrap();
        assert!(h.class_of(&crate::homcx::scalar_map(&z, 3)).unwrap().is_zero());
        assert!(!h.class_of(&crate::homcx::scalar_map(&z, 2)).unwrap().is_zero());
    }
}
