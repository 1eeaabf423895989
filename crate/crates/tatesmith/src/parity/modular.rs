//! Comparisons with mod-p coefficients and the functor L from Tate homs of inflated
//! complexes to mod-p homs.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fpsheaf::{fp_hom_parity_dims, reduce_vec, FpSheaf};
use super::{check_parity, Coefficients, GlobalVerdict, Verdict};
use crate::error::{Error, Result};
use crate::homcx::{modular_reduce, FpComplex};
use crate::linalg::{integer_kernel, FpMatrix};
use crate::stratsheaf::{identity_map, CellSheafComplex, EndHom, SheafComposition};
use crate::tate::{tate_product, ModelElem, TateDims, TateSpace};

/// L on Tate homs between inflations of trivial-action complexes: a Tate class is
/// represented in the complete model and sent to its slot-0 component reduced mod p.
pub struct LFunctor {
    src: CellSheafComplex,
    tgt: CellSheafComplex,
    hom: EndHom,
    space: TateSpace,
    reduced: FpComplex,
}

fn require_trivial(f: &CellSheafComplex) -> Result<CellSheafComplex> {
    if !f.base().has_trivial_action() || !f.is_trivially_equivariant() {
        return Err(Error::InvalidInput("expected a sheaf with trivial action".into()));
    }
    f.eps_push()
}

impl LFunctor {
    /// No normality or grading checks.
    pub fn build(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<Self> {
        let (src, tgt) = (require_trivial(f)?, require_trivial(g)?);
        let hom = EndHom::new(&src, &tgt)?;
        let space = TateSpace::new(hom.complex())?;
        let reduced = modular_reduce(hom.complex());
        Ok(LFunctor { src, tgt, hom, space, reduced })
    }

    pub fn source_object(&self) -> FpSheaf {
        FpSheaf::reduce(&self.src)
    }

    pub fn target_object(&self) -> FpSheaf {
        FpSheaf::reduce(&self.tgt)
    }

    pub fn tate_dims(&self) -> TateDims {
        self.space.dims()
    }

    /// dim H^0 of the mod-p homs.
    pub fn fp_hom_dim(&self) -> usize {
        let d = self.reduced.dim(0);
        d - self.reduced.diff(0).rank() - self.reduced.diff(-1).rank()
    }

    /// T*ε_* of an integral chain map, given as a degree-0 cocycle of the global homs.
    pub fn tate_class(&self, map: &[BigInt]) -> Vec<u64> {
        let mut blocks = std::collections::BTreeMap::new();
        if !map.is_empty() {
            blocks.insert(0, map.to_vec());
        }
        self.space.coords(&ModelElem { degree: 0, blocks })
    }

    /// L of a Tate class: a mod-p degree-0 cocycle of the global homs.
    pub fn apply(&self, coords: &[u64]) -> Vec<u64> {
        let e = self.space.element(0, coords);
        match e.blocks.get(&0) {
            Some(v) => reduce_vec(v, self.src.p()),
            None => vec![0; self.reduced.dim(0)],
        }
    }

    /// Modular reduction of an integral chain map.
    pub fn reduce_map(&self, map: &[BigInt]) -> Vec<u64> {
        reduce_vec(map, self.src.p())
    }

    /// Whether two mod-p degree-0 cocycles are cohomologous.
    pub fn same_class(&self, a: &[u64], b: &[u64]) -> bool {
        let p = self.src.p();
        let diff: Vec<u64> = a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect();
        if diff.iter().all(|&x| x == 0) {
            return true;
        }
        self.reduced.diff(-1).solve(&diff).is_some()
    }

    /// Rank of L on the degree-0 Tate homs, as a map to H^0 of the mod-p homs.
    pub fn image_rank(&self) -> usize {
        let p = self.src.p();
        let bnd = self.reduced.diff(-1);
        let d = self.reduced.dim(0);
        let base_rank = bnd.rank();
        let mut cols: Vec<Vec<u64>> = (0..bnd.cols()).map(|j| bnd.col(j)).collect();
        for i in 0..self.space.dim(0) {
            let mut c = vec![0; self.space.dim(0)];
            c[i] = 1;
            cols.push(self.apply(&c));
        }
        if cols.is_empty() {
            return 0;
        }
        FpMatrix::from_columns(p, d, &cols).rank() - base_rank
    }

    /// Random integral chain maps (degree-0 cocycles of the global homs).
    pub fn sample_maps(&self, count: usize, seed: u64) -> Vec<Vec<BigInt>> {
        let c = self.hom.complex();
        let ker = integer_kernel(&c.diff(0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut v = vec![BigInt::from(0); c.rank(0)];
                for j in 0..ker.cols() {
                    let k: i64 = rng.gen_range(-3..=3);
                    for (i, x) in v.iter_mut().enumerate() {
                        *x += ker.get(i, j) * k;
                    }
                }
                v
            })
            .collect()
    }

    /// The identity chain map as a cocycle (source and target must agree).
    pub fn identity_map(&self) -> Vec<BigInt> {
        let maps: Vec<_> = self.src.values().iter().map(identity_map).collect();
        self.hom.level_zero_element(0, &maps)
    }

    /// For endomorphisms: Tate product x·y (y after x) and the mod-p composite of L(x), L(y).
    pub fn products(&self, x: &[u64], y: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
        if self.src != self.tgt {
            return Err(Error::ShapeMismatch("products need endomorphisms".into()));
        }
        let pair = SheafComposition::from_parts(self.hom.clone(), self.hom.clone(), self.hom.clone());
        let (ex, ey) = (self.space.element(0, x), self.space.element(0, y));
        let tate = tate_product(&pair, &self.space, &ex, &self.space, &ey, &self.space);
        let lift = |v: Vec<u64>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
        use crate::tate::Pairing;
        let comp = pair.apply(0, &lift(self.apply(x)), 0, &lift(self.apply(y)));
        Ok((tate, reduce_vec(&comp, self.src.p())))
    }
}

fn normal_check(f: &CellSheafComplex) -> Result<()> {
    let rep = check_parity(f, Coefficients::Integral)?;
    if !matches!(rep.verdict, GlobalVerdict::Even | GlobalVerdict::Zero) {
        let bad: Vec<String> = rep.strata.iter().filter(|s| s.verdict != Verdict::Even && s.verdict != Verdict::Zero).map(|s| s.stratum.clone()).collect();
        return Err(Error::NotNormal(format!("not an unshifted sum of even objects at {}", bad.join(", "))));
    }
    Ok(())
}

fn negative_check(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<()> {
    let h = modular_reduce(&crate::stratsheaf::end_hom(f, g)?).cohomology_dims();
    let neg: Vec<i64> = h.into_iter().filter(|&(n, d)| n < 0 && d > 0).map(|x| x.0).collect();
    if !neg.is_empty() {
        return Err(Error::NegativeExtensions(format!("mod-p homs in degrees {neg:?}")));
    }
    Ok(())
}

/// L for a pair of normal parity objects whose homs have no negative extensions.
pub fn lift_l(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<LFunctor> {
    let (ef, eg) = (require_trivial(f)?, require_trivial(g)?);
    normal_check(&ef)?;
    normal_check(&eg)?;
    for (a, b) in [(&ef, &eg), (&ef, &ef), (&eg, &eg)] {
        negative_check(a, b)?;
    }
    LFunctor::build(&ef, &eg)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    pub integral_parity: GlobalVerdict,
    pub fp_parity: GlobalVerdict,
    pub parity_agrees: bool,
    /// Tate homs from ε_*F to ε_*G.
    pub tate_dims: TateDims,
    /// Σ over even and odd n of dim Hom(𝔽F, 𝔽G[n]).
    pub fp_dims: (usize, usize),
    pub dims_agree: bool,
    pub sampled: usize,
    pub factorization_holds: bool,
}

/// Parity versus mod-p parity, Tate homs versus mod-p homs, and L∘T*ε_* = 𝔽 on samples.
pub fn modular_compare(f: &CellSheafComplex, g: &CellSheafComplex, samples: usize, seed: u64) -> Result<ModularReport> {
    let (ef, eg) = (require_trivial(f)?, require_trivial(g)?);
    let ip = check_parity(&ef, Coefficients::Integral)?;
    let fp = check_parity(&ef, Coefficients::Fp)?;
    let parity_agrees = ip.verdict == fp.verdict && ip.strata.iter().zip(&fp.strata).all(|(a, b)| a.verdict == b.verdict);
    let l = LFunctor::build(&ef, &eg)?;
    let tate_dims = l.tate_dims();
    let fp_dims = fp_hom_parity_dims(&FpSheaf::reduce(&ef), &FpSheaf::reduce(&eg));
    let dims_agree = (tate_dims.t0, tate_dims.t1) == fp_dims;
    let maps = l.sample_maps(samples, seed);
    let factorization_holds = maps.iter().all(|m| l.same_class(&l.apply(&l.tate_class(m)), &l.reduce_map(m)));
    Ok(ModularReport {
        integral_parity: ip.verdict,
        fp_parity: fp.verdict,
        parity_agrees,
        tate_dims,
        fp_dims,
        dims_agree,
        sampled: maps.len(),
        factorization_holds,
    })
}
