//! Parity and Tate-parity certification, the Smith functor, Krull–Schmidt decompositions
//! in the Tate category, modular comparisons and the lifting functor L.

mod endalg;
mod fpsheaf;
mod hyperco;
mod modular;

use std::collections::BTreeMap;

use serde::Serialize;

pub use endalg::{StratumRanks, TateEnd};
pub use fpsheaf::{fp_hom_complex, fp_hom_parity_dims, fp_sections, reduce_vec, FpMaps, FpSheaf};
pub use hyperco::{hyperco_check, psm_hom_surjectivity_check, HypercoReport, SurjectivityReport};
pub use modular::{lift_l, modular_compare, LFunctor, ModularReport};

use crate::error::{Error, Result};
use crate::homcx::{modular_reduce, PiComplex};
use crate::stratsheaf::{costalk, tate_of_costalk, tate_of_stalk, CellSheafComplex};
use crate::tate::TateDims;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Even,
    Odd,
    /// Nothing to check: both even and odd.
    Zero,
    Neither,
}

impl Verdict {
    fn join(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Zero, x) | (x, Zero) => x,
            (Even, Even) => Even,
            (Odd, Odd) => Odd,
            _ => Neither,
        }
    }

    fn from_degrees(degrees: &[i64], free: bool, dagger: u8) -> Verdict {
        if degrees.is_empty() {
            return Verdict::Zero;
        }
        if !free {
            return Verdict::Neither;
        }
        let d = dagger as i64;
        if degrees.iter().all(|n| (n - d).rem_euclid(2) == 0) {
            Verdict::Even
        } else if degrees.iter().all(|n| (n - d).rem_euclid(2) == 1) {
            Verdict::Odd
        } else {
            Verdict::Neither
        }
    }

    /// Verdict from Tate dimensions of X[†].
    fn from_tate(t: TateDims) -> Verdict {
        match (t.t0 > 0, t.t1 > 0) {
            (false, false) => Verdict::Zero,
            (true, false) => Verdict::Even,
            (false, true) => Verdict::Odd,
            (true, true) => Verdict::Neither,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GlobalVerdict {
    Even,
    Odd,
    /// A direct sum of even and odd pieces, certified summand by summand.
    Parity,
    Zero,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integral,
    Fp,
}

/// One of i^* or i^! at one stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideReport {
    /// Degrees with nonzero cohomology (p-locally for integral coefficients).
    pub degrees: Vec<i64>,
    pub free: bool,
    /// Tate dimensions of the side shifted by the pariversity (Tate reports only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tate: Option<TateDims>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub stratum: String,
    pub dagger: u8,
    pub fixed: bool,
    pub star: SideReport,
    pub shriek: SideReport,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub kind: String,
    pub strata: Vec<StratumReport>,
    pub verdict: GlobalVerdict,
}

impl ParityReport {
    pub fn stratum(&self, label: &str) -> Option<&StratumReport> {
        self.strata.iter().find(|s| s.stratum == label)
    }
}

fn side_from_complex(c: &PiComplex, coeff: Coefficients, dagger: u8) -> Result<SideReport> {
    let p = c.p();
    let (degrees, free) = match coeff {
        Coefficients::Integral => {
            let h = c.cohomology()?;
            let degrees: Vec<i64> = h.iter().filter(|(_, a)| !a.is_p_locally_zero(p)).map(|(&n, _)| n).collect();
            let free = h.values().all(|a| !a.has_p_torsion(p));
            (degrees, free)
        }
        Coefficients::Fp => {
            let h = modular_reduce(c).cohomology_dims();
            (h.into_iter().filter(|x| x.1 > 0).map(|x| x.0).collect(), true)
        }
    };
    let verdict = Verdict::from_degrees(&degrees, free, dagger);
    Ok(SideReport { degrees, free, tate: None, verdict })
}

fn global(verdicts: impl Iterator<Item = Verdict>) -> GlobalVerdict {
    match verdicts.fold(Verdict::Zero, Verdict::join) {
        Verdict::Even => GlobalVerdict::Even,
        Verdict::Odd => GlobalVerdict::Odd,
        Verdict::Zero => GlobalVerdict::Zero,
        Verdict::Neither => GlobalVerdict::None,
    }
}

/// Parity of the underlying complex: free stalks and costalks in degrees of one parity
/// relative to the pariversity.
pub fn check_parity(f: &CellSheafComplex, coeff: Coefficients) -> Result<ParityReport> {
    f.validate().into_result()?;
    let u = f.forget_action();
    let base = u.base();
    let mut strata = Vec::new();
    for i in 0..base.len() {
        let dagger = base.dagger(i);
        let star = side_from_complex(u.value(i), coeff, dagger)?;
        let shriek = side_from_complex(&costalk(&u, i)?, coeff, dagger)?;
        let verdict = star.verdict.join(shriek.verdict);
        strata.push(StratumReport {
            stratum: base.label(i).to_string(),
            dagger,
            fixed: f.base().is_fixed(i),
            star,
            shriek,
            verdict,
        });
    }
    let verdict = global(strata.iter().map(|s| s.verdict));
    let kind = match coeff {
        Coefficients::Integral => "parity-integral",
        Coefficients::Fp => "parity-fp",
    };
    Ok(ParityReport { kind: kind.into(), strata, verdict })
}

fn tate_side(t: TateDims, dagger: u8) -> SideReport {
    let shifted = t.shifted(dagger as i64);
    let degrees = [0, 1].into_iter().filter(|&j| shifted.get(j) > 0).map(|j| (j + dagger as i64) % 2).collect();
    SideReport { degrees, free: true, tate: Some(shifted), verdict: Verdict::from_tate(shifted) }
}

/// Tate-parity: T^1 (Tate-even) or T^0 (Tate-odd) of i^?F[†] vanishes at every stratum.
/// When neither holds globally, the object is split by the idempotents of its Tate
/// endomorphism algebra and each block is checked separately.
pub fn check_tate_parity(f: &CellSheafComplex) -> Result<ParityReport> {
    f.validate().into_result()?;
    let base = f.base();
    let mut strata = Vec::new();
    for i in 0..base.len() {
        let dagger = base.dagger(i);
        let star = tate_side(tate_of_stalk(f, i)?, dagger);
        let shriek = tate_side(tate_of_costalk(f, i)?, dagger);
        let verdict = star.verdict.join(shriek.verdict);
        strata.push(StratumReport { stratum: base.label(i).to_string(), dagger, fixed: base.is_fixed(i), star, shriek, verdict });
    }
    let mut verdict = global(strata.iter().map(|s| s.verdict));
    if verdict == GlobalVerdict::None && block_parities(f)?.iter().all(|b| matches!(b.verdict, Verdict::Even | Verdict::Odd)) {
        verdict = GlobalVerdict::Parity;
    }
    Ok(ParityReport { kind: "tate-parity".into(), strata, verdict })
}

/// Per-block data of the Tate endomorphism algebra.
#[derive(Clone, Debug)]
struct BlockParity {
    verdict: Verdict,
    size: usize,
    /// Strata where the block idempotent is nonzero on stalk Tate cohomology, with ranks.
    stalk_ranks: BTreeMap<usize, [usize; 2]>,
}

fn block_parities(f: &CellSheafComplex) -> Result<Vec<BlockParity>> {
    let end = TateEnd::new(f)?;
    block_parities_of(f, &end)
}

fn block_parities_of(f: &CellSheafComplex, end: &TateEnd) -> Result<Vec<BlockParity>> {
    let blocks = end.algebra().blocks().map_err(|e| Error::StabilizationFailure(e.to_string()))?;
    let idems: Vec<Vec<u64>> = blocks.iter().map(|b| b.idempotent.clone()).collect();
    let base = f.base();
    let mut verdicts = vec![Verdict::Zero; blocks.len()];
    let mut stalk_ranks = vec![BTreeMap::new(); blocks.len()];
    for i in base.fixed_points() {
        let d = base.dagger(i) as i64;
        for (k, r) in end.ranks_at(i, &idems)?.into_iter().enumerate() {
            for side in [r.stalk, r.costalk] {
                let t = TateDims { t0: side[0], t1: side[1] }.shifted(d);
                verdicts[k] = verdicts[k].join(Verdict::from_tate(t));
            }
            if r.stalk != [0, 0] {
                stalk_ranks[k].insert(i, r.stalk);
            }
        }
    }
    Ok(blocks
        .iter()
        .zip(verdicts)
        .zip(stalk_ranks)
        .map(|((b, verdict), stalk_ranks)| BlockParity { verdict, size: b.size, stalk_ranks })
        .collect())
}

/// Trivial-action inflation of a lattice complex.
pub fn eps_push_complex(c: &PiComplex) -> PiComplex {
    c.forget_action()
}

/// Trivial-action inflation of a sheaf complex on a poset with trivial action.
pub fn eps_push(f: &CellSheafComplex) -> Result<CellSheafComplex> {
    f.eps_push()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithRow {
    pub stratum: String,
    pub stalk: TateDims,
    pub costalk: TateDims,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmithReport {
    pub fixed_strata: Vec<String>,
    pub rows: Vec<SmithRow>,
    pub verdict: String,
    #[serde(skip)]
    pub psm: Option<CellSheafComplex>,
}

/// Restriction to the fixed subposet, with the stalk and costalk routes compared stratum by
/// stratum in the Tate category.
pub fn smith(f: &CellSheafComplex) -> Result<SmithReport> {
    f.validate().into_result()?;
    let base = f.base();
    let fixed = base.fixed_points();
    let mut rows = Vec::new();
    for &i in &fixed {
        let stalk = tate_of_stalk(f, i)?;
        let cost = tate_of_costalk(f, i)?;
        rows.push(SmithRow { stratum: base.label(i).to_string(), stalk, costalk: cost, agree: stalk == cost });
    }
    let psm = if fixed.is_empty() { None } else { Some(f.restrict(&fixed)) };
    let verdict = if rows.iter().all(|r| r.agree) { "smith-iso" } else { "not-iso" };
    Ok(SmithReport {
        fixed_strata: fixed.iter().map(|&i| base.label(i).to_string()).collect(),
        rows,
        verdict: verdict.into(),
        psm,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandLabel {
    /// Downward closure of the summand's stalk support.
    pub support: Vec<String>,
    /// Open stratum of the support.
    pub stratum: String,
    pub shift: u8,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub summands: Vec<SummandLabel>,
    pub algebra_dim: usize,
    pub radical_dim: usize,
    pub local: bool,
}

impl DecompositionReport {
    pub fn total_multiplicity(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }
}

/// Krull–Schmidt decomposition of a Tate-parity complex, reported by labels.
pub fn decompose_tate(f: &CellSheafComplex) -> Result<DecompositionReport> {
    let rep = check_tate_parity(f)?;
    if rep.verdict == GlobalVerdict::None {
        return Err(Error::NotTateParity(
            rep.strata.iter().filter(|s| s.verdict == Verdict::Neither).map(|s| s.stratum.clone()).collect::<Vec<_>>().join(", "),
        ));
    }
    let end = TateEnd::new(f)?;
    let radical_dim = end.algebra().radical().len();
    let blocks = block_parities_of(f, &end)?;
    let base = f.base();
    let mut grouped: BTreeMap<(String, u8, Vec<String>), usize> = BTreeMap::new();
    for b in &blocks {
        let support: Vec<usize> = b.stalk_ranks.keys().copied().collect();
        let maximal: Vec<usize> = support.iter().copied().filter(|&i| !support.iter().any(|&j| base.lt(i, j))).collect();
        let Some(&top) = maximal.first() else { continue };
        if maximal.len() > 1 {
            return Err(Error::NotTateParity(format!(
                "summand with several open strata: {}",
                maximal.iter().map(|&i| base.label(i)).collect::<Vec<_>>().join(", ")
            )));
        }
        let ranks = b.stalk_ranks[&top];
        let parity = if ranks[0] > 0 { 0 } else { 1 };
        let shift = ((parity - base.dagger(top) as i64).rem_euclid(2)) as u8;
        let closure: Vec<String> = base.down_closure(&[top]).iter().map(|&i| base.label(i).to_string()).collect();
        *grouped.entry((base.label(top).to_string(), shift, closure)).or_default() += b.size;
    }
    let summands = grouped
        .into_iter()
        .map(|((stratum, shift, support), multiplicity)| SummandLabel { support, stratum, shift, multiplicity })
        .collect();
    Ok(DecompositionReport { summands, algebra_dim: end.dim(), radical_dim, local: end.is_local()? })
}

/// Whether the degree-0 Tate endomorphism algebra is local (computed without a parity gate).
pub fn tate_end_is_local(f: &CellSheafComplex) -> Result<bool> {
    TateEnd::new(f)?.is_local()
}

#[cfg(test)]
mod tests;
