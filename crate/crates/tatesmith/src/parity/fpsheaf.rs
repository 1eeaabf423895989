//! Sheaf complexes of F_p vector spaces on a poset and their global homs, assembled directly
//! over F_p. Used as the modular side of comparisons with the integral Tate computations.

use std::collections::BTreeMap;

use crate::homcx::{modular_reduce, FpComplex};
use crate::linalg::{bigint_mod, FpMatrix};
use crate::stratsheaf::{map_component, CellSheafComplex, Chain, StratPoset};

/// Degree-wise maps between F_p complexes.
pub type FpMaps = BTreeMap<i64, FpMatrix>;

#[derive(Clone, Debug)]
pub struct FpSheaf {
    base: StratPoset,
    values: Vec<FpComplex>,
    /// Generization along each strict relation.
    gen: BTreeMap<(usize, usize), FpMaps>,
}

fn map_at(m: &FpMaps, p: u64, rows: usize, cols: usize, n: i64) -> FpMatrix {
    m.get(&n).cloned().unwrap_or_else(|| FpMatrix::zeros(p, rows, cols))
}

impl FpSheaf {
    pub fn new(base: StratPoset, values: Vec<FpComplex>, gen: BTreeMap<(usize, usize), FpMaps>) -> Self {
        FpSheaf { base, values, gen }
    }

    /// Reduction mod p of an integral sheaf complex (its lattices are free, so this is derived).
    pub fn reduce(f: &CellSheafComplex) -> Self {
        let base = f.base().without_action();
        let values: Vec<FpComplex> = f.values().iter().map(modular_reduce).collect();
        let p = f.p();
        let mut gen = BTreeMap::new();
        for a in 0..base.len() {
            for b in 0..base.len() {
                if !base.lt(a, b) {
                    continue;
                }
                let g = f.gen(a, b);
                let (fa, fb) = (f.value(a), f.value(b));
                let maps: FpMaps = fa.degrees().map(|n| (n, map_component(&g, fa, fb, n).reduce_mod(p))).collect();
                gen.insert((a, b), maps);
            }
        }
        FpSheaf { base, values, gen }
    }

    /// Sheaf of vector spaces in degree 0 with the given generization matrices on covers or relations.
    pub fn of_spaces(base: &StratPoset, p: u64, dims: &[usize], gen: &BTreeMap<(usize, usize), FpMatrix>) -> Self {
        let values: Vec<FpComplex> = dims.iter().map(|&d| FpComplex::new(p, 0, vec![d], vec![]).expect("single term")).collect();
        let mut full: BTreeMap<(usize, usize), FpMaps> = BTreeMap::new();
        // fill in every strict relation by composing along a maximal chain through the given maps
        let n = base.len();
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| base.lt(a, b)).collect();
        pairs.sort_by_key(|&(a, b)| (0..n).filter(|&c| base.lt(a, c) && base.lt(c, b)).count());
        for (a, b) in pairs {
            let m = if let Some(m) = gen.get(&(a, b)) {
                m.clone()
            } else {
                let c = (0..n).find(|&c| base.lt(a, c) && base.lt(c, b)).expect("relation without a given map is not a cover");
                full[&(c, b)][&0].mul(&full[&(a, c)][&0])
            };
            full.insert((a, b), BTreeMap::from([(0, m)]));
        }
        FpSheaf { base: base.without_action(), values, gen: full }
    }

    pub fn constant(base: &StratPoset, p: u64) -> Self {
        let dims = vec![1; base.len()];
        let gen = base.covers().into_iter().map(|c| (c, FpMatrix::identity(p, 1))).collect();
        Self::of_spaces(base, p, &dims, &gen)
    }

    pub fn base(&self) -> &StratPoset {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn value(&self, i: usize) -> &FpComplex {
        &self.values[i]
    }

    fn gen_at(&self, a: usize, b: usize, n: i64) -> FpMatrix {
        let (fa, fb) = (&self.values[a], &self.values[b]);
        if a == b {
            return FpMatrix::identity(self.p(), fa.dim(n));
        }
        map_at(&self.gen[&(a, b)], self.p(), fb.dim(n), fa.dim(n), n)
    }

    /// Whether every generization map is a chain map and composition is strict.
    pub fn is_valid(&self) -> bool {
        let n = self.base.len();
        for &(a, b) in self.gen.keys() {
            let (fa, fb) = (&self.values[a], &self.values[b]);
            for d in fa.bot.min(fb.bot)..=fa.top().max(fb.top()) {
                let lhs = fb.diff(d).mul(&self.gen_at(a, b, d));
                let rhs = self.gen_at(a, b, d + 1).mul(&fa.diff(d));
                if lhs != rhs {
                    return false;
                }
            }
            for c in 0..n {
                if self.base.lt(b, c) {
                    for d in fa.bot..=fa.top() {
                        if self.gen_at(b, c, d).mul(&self.gen_at(a, b, d)) != self.gen_at(a, c, d) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Hom^i(V, W) = ⊕_d Hom(V^d, W^{d+i}), matrices flattened row by row.
struct InnerHom<'a> {
    v: &'a FpComplex,
    w: &'a FpComplex,
}

impl InnerHom<'_> {
    fn blocks(&self, i: i64) -> Vec<(i64, usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for d in self.v.bot..=self.v.top() {
            let (r, c) = (self.w.dim(d + i), self.v.dim(d));
            if r * c > 0 {
                out.push((d, off, r, c));
                off += r * c;
            }
        }
        out
    }

    fn dim(&self, i: i64) -> usize {
        self.blocks(i).iter().map(|b| b.2 * b.3).sum()
    }

    /// Matrix of φ ↦ Bφ on Hom^i(V, W) -> Hom^j(V, W') for B: W^{d+i} -> W'^{d+j}.
    fn post(&self, other: &InnerHom, i: i64, j: i64, b: impl Fn(i64) -> FpMatrix) -> FpMatrix {
        let p = self.v.p;
        let (src, tgt) = (self.blocks(i), other.blocks(j));
        let mut m = FpMatrix::zeros(p, other.dim(j), self.dim(i));
        for &(d, so, r, c) in &src {
            let Some(&(_, to, r2, _)) = tgt.iter().find(|x| x.0 == d) else { continue };
            let bm = b(d);
            for x in 0..r2 {
                for y in 0..r {
                    let coef = bm.get(x, y);
                    if coef == 0 {
                        continue;
                    }
                    for k in 0..c {
                        let cur = m.get(to + x * c + k, so + y * c + k);
                        m.set(to + x * c + k, so + y * c + k, (cur + coef) % p);
                    }
                }
            }
        }
        m
    }

    /// Matrix of φ ↦ φA on Hom^i(V, W) -> Hom^j(V', W) for A: V'^{d'} -> V^{d'+j-i}.
    fn pre(&self, other: &InnerHom, i: i64, j: i64, a: impl Fn(i64) -> FpMatrix) -> FpMatrix {
        let p = self.v.p;
        let (src, tgt) = (self.blocks(i), other.blocks(j));
        let mut m = FpMatrix::zeros(p, other.dim(j), self.dim(i));
        for &(d2, to, r2, c2) in &tgt {
            let d = d2 + j - i;
            let Some(&(_, so, r, c)) = src.iter().find(|x| x.0 == d) else { continue };
            debug_assert_eq!(r, r2);
            let am = a(d2);
            for x in 0..r {
                for k in 0..c2 {
                    for y in 0..c {
                        let coef = am.get(y, k);
                        if coef == 0 {
                            continue;
                        }
                        let cur = m.get(to + x * c2 + k, so + x * c + y);
                        m.set(to + x * c2 + k, so + x * c + y, (cur + coef) % p);
                    }
                }
            }
        }
        m
    }
}

fn neg(m: &FpMatrix) -> FpMatrix {
    m.scale(m.modulus() - 1)
}

/// Global homs over F_p: ∏ over chains λ0 < ... < λk of Hom^i(F(λ0), G(λk)) in total
/// degree k + i, with differential (-1)^i δ + d_int.
pub fn fp_hom_complex(f: &FpSheaf, g: &FpSheaf) -> FpComplex {
    assert_eq!(f.base.labels(), g.base.labels(), "sheaves on different posets");
    let p = f.p();
    let chains: Vec<Chain> = f.base.chains();
    let inner = |c: &Chain| InnerHom { v: &f.values[c[0]], w: &g.values[*c.last().unwrap()] };
    let lo_i = g.values.iter().map(|w| w.bot).min().unwrap_or(0) - f.values.iter().map(|v| v.top()).max().unwrap_or(0);
    let hi_i = g.values.iter().map(|w| w.top()).max().unwrap_or(0) - f.values.iter().map(|v| v.bot).min().unwrap_or(0);
    let max_k = chains.iter().map(|c| c.len() as i64 - 1).max().unwrap_or(0);
    let (lo, hi) = (lo_i, hi_i + max_k);
    let layout = |n: i64| -> (Vec<(usize, usize, usize)>, usize) {
        let mut v = Vec::new();
        let mut off = 0;
        for (ci, c) in chains.iter().enumerate() {
            let i = n - (c.len() as i64 - 1);
            let d = inner(c).dim(i);
            if d > 0 {
                v.push((ci, off, d));
                off += d;
            }
        }
        (v, off)
    };
    let index: BTreeMap<&Chain, usize> = chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (src, sd) = layout(n);
        let (tgt, td) = layout(n + 1);
        dims.push(sd);
        if n == hi {
            break;
        }
        let spos: BTreeMap<usize, (usize, usize)> = src.iter().map(|&(c, o, d)| (c, (o, d))).collect();
        let mut m = FpMatrix::zeros(p, td, sd);
        for &(ci1, to, _) in &tgt {
            let c1 = &chains[ci1];
            let k1 = c1.len() - 1;
            let i = n + 1 - k1 as i64;
            let h1 = inner(c1);
            // internal differential: d_G φ - (-1)^{i-1} φ d_F
            if let Some(&(so, _)) = spos.get(&ci1) {
                let (v, w) = (h1.v, h1.w);
                let post = h1.post(&h1, i - 1, i, |d| w.diff(d + i - 1));
                let pre = h1.pre(&h1, i - 1, i, |d| v.diff(d));
                let blk = if (i - 1).rem_euclid(2) == 0 { post.sub(&pre) } else { post.add(&pre) };
                m.add_block(to, so, &blk, 1);
            }
            if k1 == 0 {
                continue;
            }
            let sgn_i = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for j in 0..=k1 {
                let mut c = c1.clone();
                c.remove(j);
                let Some(&(so, _)) = index.get(&c).and_then(|ci| spos.get(ci)) else { continue };
                let h = inner(&c);
                let blk = if j == 0 {
                    h.pre(&h1, i, i, |d| f.gen_at(c1[0], c1[1], d))
                } else if j == k1 {
                    h.post(&h1, i, i, |d| g.gen_at(c1[k1 - 1], c1[k1], d + i))
                } else {
                    FpMatrix::identity(p, h.dim(i))
                };
                let sgn = sgn_i * if j % 2 == 0 { 1 } else { -1 };
                let blk = if sgn > 0 { blk } else { neg(&blk) };
                m.add_block(to, so, &blk, 1);
            }
        }
        diffs.push(m);
    }
    if dims.is_empty() {
        return FpComplex::new(p, 0, vec![], vec![]).expect("empty complex");
    }
    FpComplex::new(p, lo, dims, diffs).expect("global homs square to zero")
}

/// Σ_{n ≡ parity} dim H^n of the F_p global homs.
pub fn fp_hom_parity_dims(f: &FpSheaf, g: &FpSheaf) -> (usize, usize) {
    let h = fp_hom_complex(f, g).cohomology_dims();
    let mut out = (0, 0);
    for (n, d) in h {
        if n.rem_euclid(2) == 0 {
            out.0 += d;
        } else {
            out.1 += d;
        }
    }
    out
}

/// RΓ over F_p: homs from the constant sheaf.
pub fn fp_sections(f: &FpSheaf) -> FpComplex {
    fp_hom_complex(&FpSheaf::constant(&f.base, f.p()), f)
}

/// Reduction of a vector of integers.
pub fn reduce_vec(v: &[num_bigint::BigInt], p: u64) -> Vec<u64> {
    v.iter().map(|x| bigint_mod(x, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> StratPoset {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let simp = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]];
        StratPoset::face_poset(3, &names, &simp, &[0, 1, 2]).unwrap()
    }

    #[test]
    fn circle_sections_mod_p() {
        let f = FpSheaf::constant(&circle(), 3);
        assert!(f.is_valid());
        let h = fp_sections(&f).cohomology_dims();
        let nz: BTreeMap<i64, usize> = h.into_iter().filter(|x| x.1 > 0).collect();
        assert_eq!(nz, BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn reduction_matches_integral_end() {
        let f = CellSheafComplex::constant_z(&circle());
        let r = FpSheaf::reduce(&f);
        assert!(r.is_valid());
        assert_eq!(fp_hom_parity_dims(&r, &r), (1, 1));
    }

    #[test]
    fn shifted_values() {
        let base = StratPoset::simple(5, &["a", "b"], &[("a", "b")], &[0, 1]).unwrap();
        let z = crate::homcx::PiComplex::single(crate::pimod::PiModule::trivial(5, 2), 0);
        let f = CellSheafComplex::constant(&base, &z);
        let g = f.shift(1);
        let (rf, rg) = (FpSheaf::reduce(&f), FpSheaf::reduce(&g));
        let h = fp_hom_complex(&rf, &rg).cohomology_dims();
        let nz: BTreeMap<i64, usize> = h.into_iter().filter(|x| x.1 > 0).collect();
        // H^n Hom(F, F[1]) = Hom(F, F[1 + n]), nonzero for n = -1
        assert_eq!(nz, BTreeMap::from([(-1, 4)]));
    }
}
