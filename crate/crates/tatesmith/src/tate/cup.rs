//! Cup products on derived-invariant models.
//!
//! For f ∈ Hom_ϖ(W, A) and h ∈ Hom_ϖ(W, B) and an equivariant pairing π: A ⊗ B -> C,
//! f ∪ h = π ∘ (f ⊗ h) ∘ Δ with the diagonal
//!   Δ e_{2i}   = Σ_{j+k=i} e_{2j} ⊗ e_{2k} + Σ_{j+k=i-1} Σ_{0<=s<t<p} g^s e_{2j+1} ⊗ g^t e_{2k+1}
//!   Δ e_{2i+1} = Σ_{j+k=i} (e_{2j} ⊗ e_{2k+1} + e_{2j+1} ⊗ g e_{2k})
//! and (f ⊗ h)(u ⊗ v) = (-1)^{|h||u|} f(u) ⊗ h(v).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::model::ModelElem;
use crate::homcx::{hom_layout, PiComplex};
use crate::linalg::IntMatrix;
use crate::pimod::{hom_unvec, hom_vec};

/// Equivariant bilinear chain map left ⊗ right -> target satisfying
/// d π(x, y) = π(dx, y) + (-1)^{|x|} π(x, dy).
pub trait Pairing {
    fn left(&self) -> &PiComplex;
    fn right(&self) -> &PiComplex;
    fn target(&self) -> &PiComplex;
    /// x ∈ left^i, y ∈ right^j, result in target^{i+j}.
    fn apply(&self, i: i64, x: &[BigInt], j: i64, y: &[BigInt]) -> Vec<BigInt>;
}

fn add_into(acc: &mut [BigInt], v: &[BigInt], sgn: i64) {
    for (a, b) in acc.iter_mut().zip(v) {
        if b.is_zero() {
            continue;
        }
        if sgn > 0 {
            *a += b;
        } else {
            *a -= b;
        }
    }
}

fn act(powers: &BTreeMap<i64, Vec<IntMatrix>>, deg: i64, k: usize, x: &[BigInt]) -> Vec<BigInt> {
    if k == 0 {
        return x.to_vec();
    }
    powers[&deg][k].mul_vec(x)
}

fn action_powers(c: &PiComplex) -> BTreeMap<i64, Vec<IntMatrix>> {
    let p = c.p() as usize;
    c.degrees()
        .map(|a| {
            let g = c.action(a);
            let mut pw = vec![IntMatrix::identity(c.rank(a))];
            for k in 1..p {
                pw.push(pw[k - 1].mul(&g));
            }
            (a, pw)
        })
        .collect()
}

/// f ∪ h. Both inputs must live in slots >= 0.
pub fn cup(pair: &dyn Pairing, f: &ModelElem, h: &ModelElem) -> ModelElem {
    assert!(f.min_slot().is_none_or(|s| s >= 0), "left factor has negative slots");
    assert!(h.min_slot().is_none_or(|s| s >= 0), "right factor has negative slots");
    let (a_cx, b_cx, c_cx) = (pair.left(), pair.right(), pair.target());
    let p = a_cx.p() as usize;
    let pw_a = action_powers(a_cx);
    let pw_b = action_powers(b_cx);
    let (m1, m2) = (f.degree, h.degree);
    let deg = m1 + m2;
    // slot -> (cochain degree, component)
    let xs: BTreeMap<i64, (i64, &Vec<BigInt>)> =
        f.blocks.iter().filter(|(_, v)| v.iter().any(|t| !t.is_zero())).map(|(a, v)| (m1 - a, (*a, v))).collect();
    let ys: BTreeMap<i64, (i64, &Vec<BigInt>)> =
        h.blocks.iter().filter(|(_, v)| v.iter().any(|t| !t.is_zero())).map(|(b, v)| (m2 - b, (*b, v))).collect();
    let mut out: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    let ksign = |slot_u: i64| if (m2 * slot_u).rem_euclid(2) == 0 { 1 } else { -1 };
    for (&su, &(a, x)) in &xs {
        for (&sv, &(b, y)) in &ys {
            let n = su + sv;
            let tgt_deg = deg - n;
            if c_cx.rank(tgt_deg) == 0 {
                continue;
            }
            let acc = out.entry(tgt_deg).or_insert_with(|| vec![BigInt::zero(); c_cx.rank(tgt_deg)]);
            let sg = ksign(su);
            let (ue, ve) = (su.rem_euclid(2) == 0, sv.rem_euclid(2) == 0);
            match (ue, ve) {
                // even ⊗ even with identity group elements
                (true, true) => {
                    let z = pair.apply(a, x, b, y);
                    add_into(acc, &z, sg);
                }
                // e_{2j} ⊗ e_{2k+1}
                (true, false) => {
                    let z = pair.apply(a, x, b, y);
                    add_into(acc, &z, sg);
                }
                // e_{2j+1} ⊗ g e_{2k}
                (false, true) => {
                    let gy = act(&pw_b, b, 1 % p, y);
                    let z = pair.apply(a, x, b, &gy);
                    add_into(acc, &z, sg);
                }
                // Σ_{s<t} g^s e_odd ⊗ g^t e_odd
                (false, false) => {
                    // tail_s = Σ_{t>s} g^t y
                    let mut tail = vec![BigInt::zero(); y.len()];
                    let mut tails = vec![Vec::new(); p];
                    for s in (0..p).rev() {
                        tails[s] = tail.clone();
                        let gy = act(&pw_b, b, s, y);
                        add_into(&mut tail, &gy, 1);
                    }
                    for (s, t) in tails.iter().enumerate().take(p - 1) {
                        if t.iter().all(|v| v.is_zero()) {
                            continue;
                        }
                        let gx = act(&pw_a, a, s, x);
                        let z = pair.apply(a, &gx, b, t);
                        add_into(acc, &z, sg);
                    }
                }
            }
        }
    }
    ModelElem { degree: deg, blocks: out }
}

/// Composition Hom(D, F) ⊗ Hom(C, D) -> Hom(C, F), (ψ, φ) ↦ ψ ∘ φ.
pub struct Composition {
    c: PiComplex,
    d: PiComplex,
    f: PiComplex,
    outer: PiComplex,
    inner: PiComplex,
    target: PiComplex,
}

impl Composition {
    pub fn new(c: &PiComplex, d: &PiComplex, f: &PiComplex) -> crate::Result<Self> {
        Ok(Composition {
            c: c.clone(),
            d: d.clone(),
            f: f.clone(),
            outer: crate::homcx::hom_complex(d, f)?,
            inner: crate::homcx::hom_complex(c, d)?,
            target: crate::homcx::hom_complex(c, f)?,
        })
    }
}

impl Pairing for Composition {
    fn left(&self) -> &PiComplex {
        &self.outer
    }
    fn right(&self) -> &PiComplex {
        &self.inner
    }
    fn target(&self) -> &PiComplex {
        &self.target
    }
    fn apply(&self, i: i64, x: &[BigInt], j: i64, y: &[BigInt]) -> Vec<BigInt> {
        let lo = hom_layout(&self.d, &self.f, i);
        let li = hom_layout(&self.c, &self.d, j);
        let lt = hom_layout(&self.c, &self.f, i + j);
        let total: usize = lt.values().map(|v| v.1).sum();
        let mut out = vec![BigInt::zero(); total];
        for (&a, &(off, sz)) in &li {
            let b = a + j;
            let (Some(&(oo, osz)), Some(&(to, tsz))) = (lo.get(&b), lt.get(&a)) else { continue };
            let phi = hom_unvec(&y[off..off + sz], self.d.rank(b), self.c.rank(a));
            let psi = hom_unvec(&x[oo..oo + osz], self.f.rank(b + i), self.d.rank(b));
            let prod = hom_vec(&psi.mul(&phi));
            debug_assert_eq!(prod.len(), tsz);
            add_into(&mut out[to..to + tsz], &prod, 1);
        }
        out
    }
}

/// Evaluation Hom(M, N) ⊗ M -> N.
pub struct Evaluation {
    m: PiComplex,
    n: PiComplex,
    hom: PiComplex,
}

impl Evaluation {
    pub fn new(m: &PiComplex, n: &PiComplex) -> crate::Result<Self> {
        Ok(Evaluation { m: m.clone(), n: n.clone(), hom: crate::homcx::hom_complex(m, n)? })
    }
}

impl Pairing for Evaluation {
    fn left(&self) -> &PiComplex {
        &self.hom
    }
    fn right(&self) -> &PiComplex {
        &self.m
    }
    fn target(&self) -> &PiComplex {
        &self.n
    }
    fn apply(&self, i: i64, x: &[BigInt], j: i64, y: &[BigInt]) -> Vec<BigInt> {
        let lay = hom_layout(&self.m, &self.n, i);
        let mut out = vec![BigInt::zero(); self.n.rank(i + j)];
        if let Some(&(off, sz)) = lay.get(&j) {
            let phi = hom_unvec(&x[off..off + sz], self.n.rank(i + j), self.m.rank(j));
            out = phi.mul_vec(y);
        }
        out
    }
}
