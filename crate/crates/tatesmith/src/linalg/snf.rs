use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::int::IntMatrix;
use crate::error::{Error, Result};

/// Smith normal form certificate: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// SNF together with the inverses of both transforms.
#[derive(Clone, Debug)]
pub struct SnfFull {
    pub snf: SnfResult,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(src, dst, &-c);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }
}

fn smaller(a: &BigInt, b: &BigInt) -> bool {
    a.magnitude() < b.magnitude()
}

fn run_snf(a: &IntMatrix, track_inverses: bool) -> (Work, usize) {
    let (m, n) = a.shape();
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        u_inv: track_inverses.then(|| IntMatrix::identity(m)),
        v_inv: track_inverses.then(|| IntMatrix::identity(n)),
    };
    let mut t = 0;
    while t < m.min(n) {
        // Global pivot: smallest magnitude, ties broken by (row, col).
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = w.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) if smaller(x, w.a.get(bi, bj)) => best = Some((i, j)),
                    _ => {}
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = w.a.get(i, t) / w.a.get(t, t);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                if !w.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = w.a.get(t, j) / w.a.get(t, t);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                if !w.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder survived: move the smallest entry of row/col t to the pivot.
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..m {
                    let x = w.a.get(i, t);
                    if !x.is_zero() && smaller(x, w.a.get(bi, bj)) {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    let x = w.a.get(t, j);
                    if !x.is_zero() && smaller(x, w.a.get(bi, bj)) {
                        bi = t;
                        bj = j;
                    }
                }
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
                continue;
            }
            // Divisibility: fold in a row holding an entry the pivot does not divide.
            let piv = w.a.get(t, t).clone();
            let mut bad = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !w.a.get(i, j).is_multiple_of(&piv) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    (w, t)
}

/// Smith normal form with smallest-magnitude pivoting; deterministic.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (w, rank) = run_snf(a, false);
    SnfResult { d: w.a, u: w.u, v: w.v, rank }
}

pub fn snf_full(a: &IntMatrix) -> SnfFull {
    let (w, rank) = run_snf(a, true);
    SnfFull {
        snf: SnfResult { d: w.a, u: w.u, v: w.v, rank },
        u_inv: w.u_inv.unwrap(),
        v_inv: w.v_inv.unwrap(),
    }
}

/// Checks `u*a*v == d`, diagonal shape, and the divisibility chain.
pub fn verify_snf(a: &IntMatrix, r: &SnfResult) -> bool {
    if r.u.mul(a).mul(&r.v) != r.d {
        return false;
    }
    for i in 0..r.d.rows() {
        for j in 0..r.d.cols() {
            if i != j && !r.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let f = r.invariant_factors();
    if f.iter().any(|x| !x.is_positive()) {
        return false;
    }
    if (r.rank..r.d.rows().min(r.d.cols())).any(|i| !r.d.get(i, i).is_zero()) {
        return false;
    }
    f.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

pub fn fp_rank(a: &IntMatrix, p: u64) -> usize {
    a.reduce_mod(p).rank()
}

const BIG_PRIMES: [u64; 4] =
    [2305843009213693951, 4611686018427387847, 9223372036854775783, 1152921504606846883];

/// Rank over Q, computed modulo a large prime. The rank modulo q never exceeds the
/// rational rank; callers holding an acyclicity certificate use this directly.
pub fn rank_mod_large_prime(a: &IntMatrix, which: usize) -> usize {
    a.reduce_mod(BIG_PRIMES[which % BIG_PRIMES.len()]).rank()
}

pub fn large_prime_count() -> usize {
    BIG_PRIMES.len()
}

/// Exact rational rank (from SNF).
pub fn rank_q(a: &IntMatrix) -> usize {
    snf(a).rank
}

/// Z-basis of the integer kernel, as columns.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let r = snf(a);
    let cols: Vec<usize> = (r.rank..a.cols()).collect();
    r.v.select_cols(&cols)
}

/// Finitely generated abelian group up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Prime-power torsion orders, sorted.
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// p-primary part: free rank plus exponents of p in the torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPrimary {
    pub p: u64,
    pub free_rank: usize,
    pub exponents: Vec<u32>,
}

impl AbelianInvariants {
    pub fn zero() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(n: usize) -> Self {
        AbelianInvariants { free_rank: n, torsion: Vec::new() }
    }

    pub fn from_invariant_factors(free_rank: usize, factors: &[BigInt]) -> Self {
        let mut torsion = Vec::new();
        for f in factors {
            if f.is_one() {
                continue;
            }
            torsion.extend(prime_power_parts(f));
        }
        torsion.sort();
        AbelianInvariants { free_rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn p_primary(&self, p: u64) -> PPrimary {
        let pb = BigInt::from(p);
        let mut exponents = Vec::new();
        for t in &self.torsion {
            let mut x = t.clone();
            let mut e = 0;
            while x.is_multiple_of(&pb) {
                x /= &pb;
                e += 1;
            }
            if e > 0 && x.is_one() {
                exponents.push(e);
            }
        }
        PPrimary { p, free_rank: self.free_rank, exponents }
    }

    /// Has p-torsion (p-locally not free).
    pub fn has_p_torsion(&self, p: u64) -> bool {
        !self.p_primary(p).exponents.is_empty()
    }

    /// Vanishes after localizing at p.
    pub fn is_p_locally_zero(&self, p: u64) -> bool {
        self.free_rank == 0 && self.p_primary(p).exponents.is_empty()
    }

    /// dim over F_p of the group tensored with F_p.
    pub fn fp_dim(&self, p: u64) -> usize {
        self.free_rank + self.p_primary(p).exponents.len()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn prime_power_parts(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let mut pp = BigInt::one();
            while n.is_multiple_of(&d) {
                n /= &d;
                pp *= &d;
            }
            out.push(pp);
        }
        d += 1u32;
        if d.bits() > 40 {
            break;
        }
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// ker(d_out) / im(d_in) with coordinates and representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    kernel_basis: IntMatrix,
    kernel_coord: IntMatrix,
    u2: IntMatrix,
    u2_inv: IntMatrix,
    diag: Vec<BigInt>,
}

impl Subquotient {
    /// `d_in: ambient <- source`, `d_out: target <- ambient`.
    pub fn new(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Self> {
        let ambient = d_out.cols();
        if d_in.rows() != ambient {
            return Err(Error::ShapeMismatch(format!(
                "d_in has {} rows but d_out has {} columns",
                d_in.rows(),
                ambient
            )));
        }
        if !d_out.mul(d_in).is_zero() {
            return Err(Error::CompositionNonzero);
        }
        let s1 = snf_full(d_out);
        let r = s1.snf.rank;
        let kcols: Vec<usize> = (r..ambient).collect();
        let kernel_basis = s1.snf.v.select_cols(&kcols);
        let kernel_coord = s1.v_inv.select_rows(&kcols);
        let img = kernel_coord.mul(d_in);
        let s2 = snf_full(&img);
        let diag = s2.snf.invariant_factors();
        Ok(Subquotient { ambient, kernel_basis, kernel_coord, u2: s2.snf.u, u2_inv: s2.u_inv, diag })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn kernel_rank(&self) -> usize {
        self.kernel_basis.cols()
    }

    pub fn kernel_basis(&self) -> &IntMatrix {
        &self.kernel_basis
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.diag
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::from_invariant_factors(self.kernel_rank() - self.diag.len(), &self.diag)
    }

    /// Coordinates of a cocycle: entry i is read modulo factor i (i < #factors), freely after.
    pub fn coords(&self, z: &[BigInt]) -> Vec<BigInt> {
        self.u2.mul_vec(&self.kernel_coord.mul_vec(z))
    }

    /// Representative of the i-th cyclic summand.
    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        self.kernel_basis.mul_vec(&self.u2_inv.col(i))
    }

    /// Indices of summands whose order equals `n`.
    pub fn positions_with_factor(&self, n: u64) -> Vec<usize> {
        let nb = BigInt::from(n);
        self.diag.iter().enumerate().filter(|(_, d)| **d == nb).map(|(i, _)| i).collect()
    }

    pub fn kernel_contains(&self, z: &[BigInt]) -> bool {
        self.kernel_basis.mul_vec(&self.kernel_coord.mul_vec(z)) == z
    }
}

/// Subquotient invariants only.
pub fn subquotient(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianInvariants> {
    Ok(Subquotient::new(d_in, d_out)?.invariants())
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn identity_and_zero() {
        let r = snf(&IntMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert!(r.d.is_identity());
        let z = IntMatrix::zeros(2, 3);
        let r = snf(&z);
        assert_eq!(r.rank, 0);
        assert!(r.d.is_zero());
    }

    #[test]
    fn diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let r = snf(&a);
        assert!(verify_snf(&a, &r));
        assert_eq!(r.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn full_inverses() {
        let a = m(&[vec![4, 6, 2], vec![2, 8, 10], vec![6, 2, 4]]);
        let f = snf_full(&a);
        assert!(verify_snf(&a, &f.snf));
        assert!(f.snf.u.mul(&f.u_inv).is_identity());
        assert!(f.snf.v.mul(&f.v_inv).is_identity());
    }

    #[test]
    fn subquotient_examples() {
        let p = m(&[vec![3]]);
        let z = IntMatrix::zeros(0, 1);
        let inv = subquotient(&p, &z).unwrap();
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(3)]);
        let inv = subquotient(&IntMatrix::zeros(2, 0), &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(inv, AbelianInvariants::free(2));
        let bad = subquotient(&m(&[vec![1]]), &m(&[vec![1]]));
        assert_eq!(bad, Err(Error::CompositionNonzero));
    }

    #[test]
    fn fp_rank_examples() {
        assert_eq!(fp_rank(&IntMatrix::identity(3), 3), 3);
        assert_eq!(fp_rank(&IntMatrix::scalar(2, 2), 2), 0);
        assert_eq!(fp_rank(&m(&[vec![1, 1], vec![1, 1]]), 2), 1);
    }

    #[test]
    fn prime_power_split() {
        let inv = AbelianInvariants::from_invariant_factors(0, &[BigInt::from(12)]);
        assert_eq!(inv.torsion, vec![BigInt::from(3), BigInt::from(4)]);
        assert_eq!(inv.p_primary(2).exponents, vec![2]);
    }
}
