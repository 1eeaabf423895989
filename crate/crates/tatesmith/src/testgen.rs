//! Seeded random inputs: bounded complexes of permutation-type lattices, equivariant chain
//! maps between them, and even sheaf complexes on small posets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::examples::{point, two_chain};
use crate::homcx::{hom_complex, hom_components, PiChainMap, PiComplex};
use crate::linalg::{integer_kernel, IntMatrix};
use crate::pimod::{equivariant_hom_basis, PiModule};
use crate::stratsheaf::{CellSheafComplex, StratPoset};

/// Size limits for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    /// Largest lattice rank in any degree.
    pub max_rank: usize,
    /// Largest top − bot.
    pub max_amplitude: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_rank: 4, max_amplitude: 3 }
    }
}

fn random_indecomposable<R: Rng>(rng: &mut R, p: u64, room: usize) -> Option<PiModule> {
    let mut opts = vec![PiModule::trivial(p, 1)];
    if p as usize <= room {
        opts.push(PiModule::regular(p, 1));
    }
    if p as usize - 1 <= room {
        opts.push(PiModule::norm_quotient(p));
    }
    opts.retain(|m| m.rank() <= room);
    opts.choose(rng).cloned()
}

fn random_equivariant<R: Rng>(rng: &mut R, m: &PiModule, n: &PiModule) -> IntMatrix {
    let basis = equivariant_hom_basis(m, n).expect("same prime");
    let mut f = IntMatrix::zeros(n.rank(), m.rank());
    for b in &basis {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            f = f.add(&b.scale_i64(c));
        }
    }
    f
}

/// One elementary piece: (bottom degree, terms, differentials).
fn random_piece<R: Rng>(rng: &mut R, p: u64, room: &dyn Fn(i64) -> usize, lo: i64, hi: i64) -> Option<(i64, Vec<PiModule>, Vec<IntMatrix>)> {
    let deg = rng.gen_range(lo..=hi);
    match rng.gen_range(0..4) {
        0 => random_indecomposable(rng, p, room(deg)).map(|m| (deg, vec![m], vec![])),
        1 if deg < hi => {
            let m = random_indecomposable(rng, p, room(deg))?;
            let n = random_indecomposable(rng, p, room(deg + 1))?;
            let f = random_equivariant(rng, &m, &n);
            Some((deg, vec![m, n], vec![f]))
        }
        2 if deg < hi => {
            let c: i64 = *[1, p as i64, 2 * p as i64, -(p as i64)].choose(rng).unwrap();
            (room(deg) >= 1 && room(deg + 1) >= 1).then(|| (deg, vec![PiModule::trivial(p, 1); 2], vec![IntMatrix::scalar(1, c)]))
        }
        3 => {
            // a segment of the periodic resolution: Z[ϖ] → Z[ϖ] → ... alternating g − 1 and N
            let len = rng.gen_range(2..=3).min((hi - deg + 1) as usize);
            if len < 2 || (0..len as i64).any(|k| room(deg + k) < p as usize) {
                return None;
            }
            let r = PiModule::regular(p, 1);
            let start: usize = rng.gen_range(0..2);
            let diffs = (0..len - 1).map(|k| if (k + start).is_multiple_of(2) { r.g_minus_one() } else { r.norm() }).collect();
            Some((deg, vec![r; len], diffs))
        }
        _ => None,
    }
}

/// Random bounded complex with terms built from trivial, regular and norm-quotient lattices,
/// mixed by random equivariant changes of basis.
pub fn random_complex<R: Rng>(rng: &mut R, p: u64, bounds: Bounds) -> PiComplex {
    let bot: i64 = rng.gen_range(-2..=1);
    let top = bot + rng.gen_range(0..=bounds.max_amplitude);
    let mut pieces: Vec<(i64, Vec<PiModule>, Vec<IntMatrix>)> = Vec::new();
    let mut used: BTreeMap<i64, usize> = BTreeMap::new();
    for _ in 0..12 {
        let room = |n: i64| bounds.max_rank.saturating_sub(used.get(&n).copied().unwrap_or(0));
        if let Some(piece) = random_piece(rng, p, &room, bot, top) {
            for (k, m) in piece.1.iter().enumerate() {
                *used.entry(piece.0 + k as i64).or_default() += m.rank();
            }
            pieces.push(piece);
        }
        if rng.gen_bool(0.25) {
            break;
        }
    }
    if pieces.is_empty() {
        return PiComplex::single(PiModule::trivial(p, 1), bot);
    }
    let lo = pieces.iter().map(|x| x.0).min().unwrap();
    let hi = pieces.iter().map(|x| x.0 + x.1.len() as i64 - 1).max().unwrap();
    // summands per degree, in piece order: (piece index, offset within degree)
    let mut terms: Vec<Vec<PiModule>> = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut slot: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    for (i, (b, ms, _)) in pieces.iter().enumerate() {
        for (k, m) in ms.iter().enumerate() {
            let n = b + k as i64;
            let t = &mut terms[(n - lo) as usize];
            slot.insert((i, n), t.iter().map(|x| x.rank()).sum());
            t.push(m.clone());
        }
    }
    let modules: Vec<PiModule> = terms.iter().map(|t| PiModule::direct_sum_all(p, &t.iter().collect::<Vec<_>>())).collect();
    let mut diffs: Vec<IntMatrix> = (lo..hi).map(|n| IntMatrix::zeros(modules[(n + 1 - lo) as usize].rank(), modules[(n - lo) as usize].rank())).collect();
    for (i, (b, _, ds)) in pieces.iter().enumerate() {
        for (k, d) in ds.iter().enumerate() {
            let n = b + k as i64;
            diffs[(n - lo) as usize].set_block(slot[&(i, n + 1)], slot[&(i, n)], d);
        }
    }
    // mix: conjugate by id + E with E an equivariant map between two distinct summands
    let mut mix: Vec<IntMatrix> = modules.iter().map(|m| IntMatrix::identity(m.rank())).collect();
    for (idx, t) in terms.iter().enumerate() {
        if t.len() < 2 || rng.gen_bool(0.3) {
            continue;
        }
        let (a, b) = (rng.gen_range(0..t.len()), rng.gen_range(0..t.len()));
        if a == b {
            continue;
        }
        let off = |j: usize| t[..j].iter().map(|m| m.rank()).sum::<usize>();
        let e = random_equivariant(rng, &t[a], &t[b]);
        mix[idx].add_block(off(b), off(a), &e, 1);
    }
    let inv: Vec<IntMatrix> = mix.iter().map(|m| IntMatrix::identity(m.rows()).add(&IntMatrix::identity(m.rows())).sub(m)).collect();
    let diffs: Vec<IntMatrix> = diffs.iter().enumerate().map(|(i, d)| mix[i + 1].mul(d).mul(&inv[i])).collect();
    let modules: Vec<PiModule> = modules
        .iter()
        .enumerate()
        .map(|(i, m)| PiModule::new(p, mix[i].mul(m.action()).mul(&inv[i])).expect("conjugate action"))
        .collect();
    PiComplex::new(p, lo, modules, diffs).expect("random complex is well formed")
}

/// Random equivariant chain map C → D of degree 0: an integer combination of a basis of
/// the fixed degree-0 cocycles of the hom complex.
pub fn random_chain_map<R: Rng>(rng: &mut R, c: &PiComplex, d: &PiComplex) -> Result<PiChainMap> {
    let h = hom_complex(c, d)?;
    let n = h.rank(0);
    if n == 0 {
        return PiChainMap::new(c.clone(), d.clone(), 0, BTreeMap::new());
    }
    let fixed = h.action(0).sub(&IntMatrix::identity(n));
    let ker = integer_kernel(&h.diff(0).vstack(&fixed));
    let mut v = vec![BigInt::from(0); n];
    for j in 0..ker.cols() {
        let k: i64 = rng.gen_range(-2..=2);
        for (i, x) in v.iter_mut().enumerate() {
            *x += ker.get(i, j) * k;
        }
    }
    PiChainMap::new(c.clone(), d.clone(), 0, hom_components(c, d, 0, &v))
}

/// Random sheaf complex on a small trivial-action poset that is even for the integral
/// parity check: sums of even shifts of the constant sheaf and of skyscrapers at closed
/// strata of even pariversity.
pub fn random_even_sheaf<R: Rng>(rng: &mut R, p: u64) -> CellSheafComplex {
    let bases: Vec<StratPoset> = vec![
        point(p),
        two_chain(p, 2),
        StratPoset::simple(p, &["a", "b", "c"], &[("a", "c"), ("b", "c")], &[0, 0, 2]).expect("two points under a cell"),
    ];
    let base = bases.choose(rng).unwrap().clone();
    let closed: Vec<usize> = (0..base.len()).filter(|&i| base.dagger(i) == 0 && (0..base.len()).all(|j| !base.lt(j, i))).collect();
    let mut f: Option<CellSheafComplex> = None;
    for _ in 0..rng.gen_range(1..=3) {
        let piece = if rng.gen_bool(0.5) || closed.is_empty() {
            CellSheafComplex::constant_z(&base)
        } else {
            CellSheafComplex::skyscraper(&base, *closed.choose(rng).unwrap())
        };
        let piece = piece.shift(2 * rng.gen_range(-1..=1));
        f = Some(match f {
            None => piece,
            Some(g) => g.direct_sum(&piece).expect("same base"),
        });
    }
    f.unwrap()
}
