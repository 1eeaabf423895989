//! Global homs between sheaf complexes as cobar totalizations over strict chains.
//!
//! Level k, internal degree i: ∏ over chains λ0 < ... < λk of Hom^i(F(λ0), G(λk)).
//! The cobar differential δ has faces ∂_0 (precompose gen_F), ∂_j for 0 < j <= k
//! (drop λ_j, sign (-1)^j) and ∂_{k+1} (postcompose gen_G, sign (-1)^{k+1}); the total
//! differential is δ + (-1)^k d_int.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::homcx::{hom_complex, hom_layout, sign, PiComplex};
use crate::linalg::IntMatrix;
use crate::pimod::{hom_unvec, hom_vec, PiModule};
use crate::tate::Pairing;

use super::poset::Chain;
use super::sheaf::{map_component, CellSheafComplex, ChainComps};

/// One block of a total degree: chain index, offset, size.
#[derive(Clone, Copy, Debug)]
struct Slot {
    chain: usize,
    off: usize,
    size: usize,
}

#[derive(Clone, Debug)]
pub struct EndHom {
    src: CellSheafComplex,
    tgt: CellSheafComplex,
    chains: Vec<Chain>,
    index: BTreeMap<Chain, usize>,
    /// Chains grouped by first element.
    by_first: Vec<Vec<usize>>,
    pair_hom: BTreeMap<(usize, usize), PiComplex>,
    layouts: BTreeMap<i64, Vec<Slot>>,
    complex: PiComplex,
}

fn level(c: &Chain) -> i64 {
    c.len() as i64 - 1
}

impl EndHom {
    pub fn new(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<Self> {
        if f.base() != g.base() {
            return Err(Error::BaseMismatch);
        }
        let base = f.base();
        let p = base.p();
        let mut pair_hom = BTreeMap::new();
        let mut chains = Vec::new();
        for c in base.chains() {
            let (a, b) = (c[0], *c.last().unwrap());
            if f.value(a).is_zero() || g.value(b).is_zero() {
                continue;
            }
            pair_hom.entry((a, b)).or_insert_with(|| hom_complex(f.value(a), g.value(b)).expect("same prime"));
            chains.push(c);
        }
        let index: BTreeMap<Chain, usize> = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut by_first = vec![Vec::new(); base.len()];
        for (i, c) in chains.iter().enumerate() {
            by_first[c[0]].push(i);
        }
        let hom_of = |c: &Chain| &pair_hom[&(c[0], *c.last().unwrap())];
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for c in &chains {
            let h = hom_of(c);
            if !h.is_zero() {
                lo = lo.min(h.bot() + level(c));
                hi = hi.max(h.top() + level(c));
            }
        }
        let mut layouts = BTreeMap::new();
        if lo <= hi {
            for n in lo..=hi {
                let mut v = Vec::new();
                let mut off = 0;
                for (ci, c) in chains.iter().enumerate() {
                    let size = hom_of(c).rank(n - level(c));
                    if size > 0 {
                        v.push(Slot { chain: ci, off, size });
                        off += size;
                    }
                }
                layouts.insert(n, v);
            }
        }
        let mut out = EndHom {
            src: f.clone(),
            tgt: g.clone(),
            chains,
            index,
            by_first,
            pair_hom,
            layouts,
            complex: PiComplex::zero(p),
        };
        out.complex = out.assemble();
        Ok(out)
    }

    pub fn complex(&self) -> &PiComplex {
        &self.complex
    }

    pub fn src(&self) -> &CellSheafComplex {
        &self.src
    }

    pub fn tgt(&self) -> &CellSheafComplex {
        &self.tgt
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    fn hom(&self, c: &Chain) -> &PiComplex {
        &self.pair_hom[&(c[0], *c.last().unwrap())]
    }

    fn dim(&self, n: i64) -> usize {
        self.layouts.get(&n).map_or(0, |v| v.iter().map(|s| s.size).sum())
    }

    fn slot(&self, n: i64, chain: usize) -> Option<Slot> {
        self.layouts.get(&n)?.iter().find(|s| s.chain == chain).copied()
    }

    /// Hom^i(F(a), G(b)) -> Hom^i(F(a0), G(b)) by precomposition with u: F(a0) -> F(a).
    fn precompose(&self, u: &ChainComps, a0: usize, a: usize, b: usize, i: i64) -> IntMatrix {
        let (fa0, fa, gb) = (self.src.value(a0), self.src.value(a), self.tgt.value(b));
        let src_l = hom_layout(fa, gb, i);
        let tgt_l = hom_layout(fa0, gb, i);
        let rows: usize = tgt_l.values().map(|x| x.1).sum();
        let cols: usize = src_l.values().map(|x| x.1).sum();
        let mut m = IntMatrix::zeros(rows, cols);
        for (deg, &(to, _)) in &tgt_l {
            if let Some(&(so, _)) = src_l.get(deg) {
                let g = map_component(u, fa0, fa, *deg);
                m.add_block(to, so, &g.transpose().kron(&IntMatrix::identity(gb.rank(deg + i))), 1);
            }
        }
        m
    }

    /// Hom^i(F(a), G(b)) -> Hom^i(F(a), G(b1)) by postcomposition with v: G(b) -> G(b1).
    fn postcompose(&self, v: &ChainComps, a: usize, b: usize, b1: usize, i: i64) -> IntMatrix {
        let (fa, gb, gb1) = (self.src.value(a), self.tgt.value(b), self.tgt.value(b1));
        let src_l = hom_layout(fa, gb, i);
        let tgt_l = hom_layout(fa, gb1, i);
        let rows: usize = tgt_l.values().map(|x| x.1).sum();
        let cols: usize = src_l.values().map(|x| x.1).sum();
        let mut m = IntMatrix::zeros(rows, cols);
        for (deg, &(to, _)) in &tgt_l {
            if let Some(&(so, _)) = src_l.get(deg) {
                let h = map_component(v, gb, gb1, deg + i);
                m.add_block(to, so, &IntMatrix::identity(fa.rank(*deg)).kron(&h), 1);
            }
        }
        m
    }

    fn assemble(&self) -> PiComplex {
        let p = self.src.p();
        let Some((&lo, _)) = self.layouts.iter().next() else { return PiComplex::zero(p) };
        let hi = *self.layouts.keys().next_back().unwrap();
        let mut terms = Vec::new();
        for n in lo..=hi {
            terms.push(PiModule::new_unchecked(p, self.action_matrix(n)));
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let mut m = IntMatrix::zeros(self.dim(n + 1), self.dim(n));
            let src_pos: BTreeMap<usize, Slot> = self.layouts[&n].iter().map(|s| (s.chain, *s)).collect();
            for t in &self.layouts[&(n + 1)] {
                let c1 = &self.chains[t.chain];
                let k1 = level(c1);
                let i = n + 1 - k1;
                // internal differential on the same chain
                if let Some(s) = src_pos.get(&t.chain) {
                    m.add_block(t.off, s.off, &self.hom(c1).diff(i - 1), sign(k1));
                }
                if k1 == 0 {
                    continue;
                }
                for j in 0..c1.len() {
                    let mut c = c1.clone();
                    c.remove(j);
                    let Some(&ci) = self.index.get(&c) else { continue };
                    let Some(s) = src_pos.get(&ci) else { continue };
                    let last = c1.len() - 1;
                    let blk = if j == 0 {
                        self.precompose(&self.src.gen(c1[0], c1[1]), c1[0], c1[1], c1[last], i)
                    } else if j == last {
                        self.postcompose(&self.tgt.gen(c1[last - 1], c1[last]), c1[0], c1[last - 1], c1[last], i)
                            .scale_i64(sign(j as i64))
                    } else {
                        IntMatrix::identity(s.size).scale_i64(sign(j as i64))
                    };
                    m.add_block(t.off, s.off, &blk, 1);
                }
            }
            diffs.push(m);
        }
        PiComplex::from_parts(p, lo, terms, diffs)
    }

    /// Action on total degree n: chains move by σ, values are conjugated by the transports.
    fn action_matrix(&self, n: i64) -> IntMatrix {
        let d = self.dim(n);
        let mut m = IntMatrix::zeros(d, d);
        let base = self.src.base();
        for s in &self.layouts[&n] {
            let c = &self.chains[s.chain];
            let i = n - level(c);
            let sc = base.apply_action(c);
            let t = self.slot(n, self.index[&sc]).expect("chain image present");
            let (a, b) = (c[0], *c.last().unwrap());
            let (sa, sb) = (sc[0], *sc.last().unwrap());
            let einv = self.src.equiv_inverse(a);
            let eg = self.tgt.equiv(b);
            let (fa, fsa, gb, gsb) = (self.src.value(a), self.src.value(sa), self.tgt.value(b), self.tgt.value(sb));
            let src_l = hom_layout(fa, gb, i);
            let tgt_l = hom_layout(fsa, gsb, i);
            for (deg, &(so, _)) in &src_l {
                let (to, _) = tgt_l[deg];
                let inv = map_component(&einv, fsa, fa, *deg);
                let fwd = map_component(eg, gb, gsb, deg + i);
                m.add_block(t.off + to, s.off + so, &inv.transpose().kron(&fwd), 1);
            }
        }
        debug_assert!(m.pow(self.src.p() as u32).is_identity(), "action on global homs has wrong order");
        m
    }

    /// Offset and size of the block of `chain` in total degree n.
    pub fn offset(&self, n: i64, chain: &Chain) -> Option<(usize, usize)> {
        let ci = *self.index.get(chain)?;
        self.slot(n, ci).map(|s| (s.off, s.size))
    }

    /// Block of a degree-n vector sitting on `chain`.
    pub fn block<'a>(&self, n: i64, v: &'a [BigInt], chain: &Chain) -> Option<&'a [BigInt]> {
        let ci = *self.index.get(chain)?;
        let s = self.slot(n, ci)?;
        Some(&v[s.off..s.off + s.size])
    }

    /// Level-0 element from a family of degree-k maps F(λ) -> G(λ)[k].
    pub fn level_zero_element(&self, k: i64, maps: &[ChainComps]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim(k)];
        if let Some(lay) = self.layouts.get(&k) {
            for s in lay {
                let c = &self.chains[s.chain];
                if c.len() != 1 {
                    continue;
                }
                let l = c[0];
                let block = crate::homcx::hom_element(self.src.value(l), self.tgt.value(l), k, &maps[l]);
                v[s.off..s.off + s.size].clone_from_slice(&block);
            }
        }
        v
    }

    /// Chain map components (degree 0) restricting to the global homs of the restrictions
    /// to a subset; `old_of_new[x]` is the stratum of `target`'s base element x.
    pub fn restriction_map(&self, target: &EndHom, old_of_new: &[usize]) -> BTreeMap<i64, IntMatrix> {
        let mut out = BTreeMap::new();
        for (&n, lay) in &target.layouts {
            let mut m = IntMatrix::zeros(target.dim(n), self.dim(n));
            for t in lay {
                let c: Chain = target.chains[t.chain].iter().map(|&x| old_of_new[x]).collect();
                if let Some(s) = self.index.get(&c).and_then(|&ci| self.slot(n, ci)) {
                    m.add_block(t.off, s.off, &IntMatrix::identity(t.size), 1);
                }
            }
            out.insert(n, m);
        }
        out
    }
}

/// Global homs of sheaves on the same base.
pub fn end_hom(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<PiComplex> {
    Ok(EndHom::new(f, g)?.complex)
}

/// Composition Hom(F, G) ⊗ Hom(G, H) -> Hom(F, H), (φ, ψ) ↦ ±ψ∘φ, splitting each chain
/// into a front part for φ and a back part for ψ. With φ at level k and internal degree n,
/// ψ at level l and internal degree m, the sign is (-1)^{n(l+m)}.
pub struct SheafComposition {
    pub first: EndHom,
    pub second: EndHom,
    pub target: EndHom,
}

impl SheafComposition {
    pub fn new(f: &CellSheafComplex, g: &CellSheafComplex, h: &CellSheafComplex) -> Result<Self> {
        Ok(SheafComposition { first: EndHom::new(f, g)?, second: EndHom::new(g, h)?, target: EndHom::new(f, h)? })
    }

    pub fn from_parts(first: EndHom, second: EndHom, target: EndHom) -> Self {
        SheafComposition { first, second, target }
    }
}

impl Pairing for SheafComposition {
    fn left(&self) -> &PiComplex {
        &self.first.complex
    }
    fn right(&self) -> &PiComplex {
        &self.second.complex
    }
    fn target(&self) -> &PiComplex {
        &self.target.complex
    }
    fn apply(&self, i: i64, x: &[BigInt], j: i64, y: &[BigInt]) -> Vec<BigInt> {
        let (a1, b1, t) = (&self.first, &self.second, &self.target);
        let mut out = vec![BigInt::zero(); t.dim(i + j)];
        let (Some(lx), Some(ly)) = (a1.layouts.get(&i), b1.layouts.get(&j)) else { return out };
        let ypos: BTreeMap<usize, Slot> = ly.iter().map(|s| (s.chain, *s)).collect();
        let f = &t.src;
        let g = &a1.tgt;
        let h = &t.tgt;
        for sx in lx {
            let xv = &x[sx.off..sx.off + sx.size];
            if xv.iter().all(|v| v.is_zero()) {
                continue;
            }
            let cf = &a1.chains[sx.chain];
            let k = level(cf);
            let n = i - k;
            let mid = *cf.last().unwrap();
            for &cb_i in &b1.by_first[mid] {
                let Some(sy) = ypos.get(&cb_i) else { continue };
                let yv = &y[sy.off..sy.off + sy.size];
                if yv.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let cb = &b1.chains[cb_i];
                let l = level(cb);
                let m = j - l;
                let mut c = cf.clone();
                c.extend_from_slice(&cb[1..]);
                let Some(st) = t.index.get(&c).and_then(|&ci| t.slot(i + j, ci)) else { continue };
                let (a, z) = (c[0], *c.last().unwrap());
                let fa = f.value(a);
                let (gm, hz) = (g.value(mid), h.value(z));
                let lf = hom_layout(fa, gm, n);
                let lg = hom_layout(gm, hz, m);
                let lt = hom_layout(fa, hz, n + m);
                let sg = sign(n * (l + m));
                for (deg, &(fo, fs)) in &lf {
                    let Some(&(go, gs)) = lg.get(&(deg + n)) else { continue };
                    let Some(&(to, _)) = lt.get(deg) else { continue };
                    let phi = hom_unvec(&xv[fo..fo + fs], gm.rank(deg + n), fa.rank(*deg));
                    let psi = hom_unvec(&yv[go..go + gs], hz.rank(deg + n + m), gm.rank(deg + n));
                    let prod = hom_vec(&psi.mul(&phi));
                    for (o, v) in out[st.off + to..].iter_mut().zip(prod) {
                        if sg > 0 {
                            *o += v;
                        } else {
                            *o -= v;
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratsheaf::StratPoset;

    fn circle() -> StratPoset {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let simp = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]];
        StratPoset::face_poset(3, &names, &simp, &[0, 1, 2]).unwrap()
    }

    #[test]
    fn point_end_is_unit() {
        let b = StratPoset::simple(3, &["a"], &[], &[0]).unwrap();
        let f = CellSheafComplex::constant_z(&b);
        let e = end_hom(&f, &f).unwrap();
        assert_eq!(e, PiComplex::single(PiModule::trivial(3, 1), 0));
    }

    #[test]
    fn circle_end_cohomology() {
        let f = CellSheafComplex::constant_z(&circle());
        let e = end_hom(&f, &f).unwrap();
        let h = e.cohomology().unwrap();
        assert_eq!(h[&0].free_rank, 1);
        assert_eq!(h[&1].free_rank, 1);
        assert!(h[&1].torsion.is_empty());
    }

    fn rand_vec(len: usize, seed: &mut u64) -> Vec<BigInt> {
        (0..len)
            .map(|_| {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                BigInt::from(((*seed >> 33) % 5) as i64 - 2)
            })
            .collect()
    }

    #[test]
    fn composition_leibniz() {
        let base = circle();
        let z = CellSheafComplex::constant_z(&base);
        let k = CellSheafComplex::constant(&base, &crate::homcx::mod_p_object(3).unwrap());
        let pair = SheafComposition::new(&k, &z, &k).unwrap();
        let (l, r, t) = (pair.left(), pair.right(), pair.target());
        let mut seed = 5;
        for i in l.degrees() {
            for j in r.degrees() {
                let x = rand_vec(l.rank(i), &mut seed);
                let y = rand_vec(r.rank(j), &mut seed);
                let lhs = t.diff(i + j).mul_vec(&pair.apply(i, &x, j, &y));
                let a = pair.apply(i + 1, &l.diff(i).mul_vec(&x), j, &y);
                let b = pair.apply(i, &x, j + 1, &r.diff(j).mul_vec(&y));
                let rhs: Vec<BigInt> = a.iter().zip(&b).map(|(u, v)| u + v * sign(i)).collect();
                assert_eq!(lhs, rhs, "degrees {i} {j}");
            }
        }
    }
}
