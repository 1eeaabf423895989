//! Lattices with an order-p automorphism: finitely generated Z[Z/p]-modules that are
//! free over Z.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, rank_q, IntMatrix};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rejects anything but an odd prime.
pub fn check_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiModule {
    p: u64,
    action: IntMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdKind {
    Trivial(usize),
    Regular(usize),
    NormQuotient,
}

/// The p x p cyclic shift e_h -> e_{h+1}.
pub fn cyclic_permutation(p: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(p, p);
    for h in 0..p {
        m.set((h + 1) % p, h, BigInt::one());
    }
    m
}

impl PiModule {
    /// Validates the order-p condition.
    pub fn new(p: u64, action: IntMatrix) -> Result<Self> {
        check_prime(p)?;
        if !action.is_square() {
            return Err(Error::InvalidModule(format!("action is {:?}, not square", action.shape())));
        }
        if !action.pow(p as u32).is_identity() {
            return Err(Error::InvalidModule("action^p is not the identity".into()));
        }
        Ok(PiModule { p, action })
    }

    /// Skips validation; for actions built from known-good pieces.
    pub(crate) fn new_unchecked(p: u64, action: IntMatrix) -> Self {
        debug_assert!(action.is_square());
        PiModule { p, action }
    }

    pub fn trivial(p: u64, k: usize) -> Self {
        PiModule { p, action: IntMatrix::identity(k) }
    }

    pub fn regular(p: u64, k: usize) -> Self {
        let c = cyclic_permutation(p as usize);
        let blocks: Vec<&IntMatrix> = (0..k).map(|_| &c).collect();
        PiModule { p, action: IntMatrix::block_diag(&blocks) }
    }

    /// Z[x]/(1 + x + ... + x^{p-1}) with basis 1, x, ..., x^{p-2}.
    pub fn norm_quotient(p: u64) -> Self {
        let n = p as usize - 1;
        let mut a = IntMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            a.set(i + 1, i, BigInt::one());
        }
        for i in 0..n {
            a.set(i, n - 1, BigInt::from(-1));
        }
        PiModule { p, action: a }
    }

    pub fn standard(kind: StdKind, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(match kind {
            StdKind::Trivial(k) => Self::trivial(p, k),
            StdKind::Regular(k) => Self::regular(p, k),
            StdKind::NormQuotient => Self::norm_quotient(p),
        })
    }

    pub fn zero(p: u64) -> Self {
        Self::trivial(p, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.is_identity()
    }

    /// g^{-1} = g^{p-1}.
    pub fn inverse_action(&self) -> IntMatrix {
        self.action.pow(self.p as u32 - 1)
    }

    /// 1 + g + ... + g^{p-1}.
    pub fn norm(&self) -> IntMatrix {
        let n = self.rank();
        let mut acc = IntMatrix::identity(n);
        let mut pw = IntMatrix::identity(n);
        for _ in 1..self.p {
            pw = pw.mul(&self.action);
            acc = acc.add(&pw);
        }
        acc
    }

    /// g - 1.
    pub fn g_minus_one(&self) -> IntMatrix {
        self.action.sub(&IntMatrix::identity(self.rank()))
    }

    /// Rank of the fixed sublattice.
    pub fn fixed_rank(&self) -> usize {
        self.rank() - rank_q(&self.g_minus_one())
    }

    /// Z-basis of the fixed sublattice, as columns.
    pub fn fixed_basis(&self) -> IntMatrix {
        integer_kernel(&self.g_minus_one())
    }

    pub fn direct_sum(&self, other: &PiModule) -> Result<PiModule> {
        same_prime(self.p, other.p)?;
        Ok(PiModule { p: self.p, action: IntMatrix::block_diag(&[&self.action, &other.action]) })
    }

    pub fn direct_sum_all(p: u64, parts: &[&PiModule]) -> PiModule {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|m| &m.action).collect();
        PiModule { p, action: IntMatrix::block_diag(&blocks) }
    }

    pub fn forget(&self) -> PiModule {
        PiModule::trivial(self.p, self.rank())
    }
}

pub fn same_prime(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::PrimeMismatch(a, b));
    }
    Ok(())
}

/// Diagonal action on the tensor product; basis (i, j) -> i * rank(n) + j.
pub fn tensor_module(m: &PiModule, n: &PiModule) -> Result<PiModule> {
    same_prime(m.p, n.p)?;
    Ok(PiModule { p: m.p, action: m.action.kron(&n.action) })
}

/// Hom(M, N) with g.f = g_N f g_M^{-1}. A homomorphism given as a rank(N) x rank(M) matrix
/// is stored column-major: entry (i, j) sits at j * rank(N) + i.
pub fn hom_module(m: &PiModule, n: &PiModule) -> Result<PiModule> {
    same_prime(m.p, n.p)?;
    let a = m.inverse_action().transpose().kron(&n.action);
    Ok(PiModule { p: m.p, action: a })
}

/// Column-major vectorization matching [`hom_module`].
pub fn hom_vec(f: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = f.shape();
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(f.get(i, j).clone());
        }
    }
    v
}

pub fn hom_unvec(v: &[BigInt], rows: usize, cols: usize) -> IntMatrix {
    assert_eq!(v.len(), rows * cols);
    let mut f = IntMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            f.set(i, j, v[j * rows + i].clone());
        }
    }
    f
}

/// Equivariant homomorphism of lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMap {
    pub src: PiModule,
    pub tgt: PiModule,
    pub matrix: IntMatrix,
}

impl PiMap {
    pub fn new(src: PiModule, tgt: PiModule, matrix: IntMatrix) -> Result<Self> {
        same_prime(src.p, tgt.p)?;
        if matrix.shape() != (tgt.rank(), src.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "map is {:?}, expected {}x{}",
                matrix.shape(),
                tgt.rank(),
                src.rank()
            )));
        }
        if !is_equivariant(&matrix, src.action(), tgt.action()) {
            return Err(Error::InvalidModule("map is not equivariant".into()));
        }
        Ok(PiMap { src, tgt, matrix })
    }

    pub fn identity(m: &PiModule) -> Self {
        PiMap { src: m.clone(), tgt: m.clone(), matrix: IntMatrix::identity(m.rank()) }
    }
}

pub fn is_equivariant(f: &IntMatrix, a_src: &IntMatrix, a_tgt: &IntMatrix) -> bool {
    f.mul(a_src) == a_tgt.mul(f)
}

/// Z-basis of Hom_ϖ(M, N), each element as a rank(N) x rank(M) matrix.
pub fn equivariant_hom_basis(m: &PiModule, n: &PiModule) -> Result<Vec<IntMatrix>> {
    let h = hom_module(m, n)?;
    let basis = h.fixed_basis();
    Ok((0..basis.cols()).map(|j| hom_unvec(&basis.col(j), n.rank(), m.rank())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_modules() {
        let t = PiModule::standard(StdKind::Trivial(1), 3).unwrap();
        assert_eq!(t.action(), &IntMatrix::identity(1));
        let r = PiModule::regular(3, 1);
        assert_eq!(r.rank(), 3);
        assert!(r.action().pow(3).is_identity());
        assert!(!r.action().is_identity());
        let nq = PiModule::norm_quotient(3);
        assert_eq!(nq.action(), &IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]));
    }

    #[test]
    fn norm_quotient_properties() {
        for p in [3u64, 5, 7] {
            let nq = PiModule::norm_quotient(p);
            assert!(nq.action().pow(p as u32).is_identity());
            assert!(nq.norm().is_zero());
            assert_eq!(nq.fixed_rank(), 0);
        }
    }

    #[test]
    fn rejects_two() {
        assert_eq!(PiModule::standard(StdKind::Trivial(1), 2), Err(Error::InvalidPrime(2)));
        assert_eq!(PiModule::standard(StdKind::Trivial(1), 9), Err(Error::InvalidPrime(9)));
    }

    #[test]
    fn regular_fixed_rank() {
        for k in 0..4 {
            assert_eq!(PiModule::regular(5, k).fixed_rank(), k);
        }
    }

    #[test]
    fn hom_into_trivial_from_regular() {
        let r = PiModule::regular(3, 1);
        let h = hom_module(&r, &PiModule::trivial(3, 1)).unwrap();
        assert_eq!(h, r);
    }

    #[test]
    fn hom_unit_and_identity_fixed() {
        let n = PiModule::norm_quotient(5);
        let h = hom_module(&PiModule::trivial(5, 1), &n).unwrap();
        assert_eq!(h, n);
        let e = hom_module(&n, &n).unwrap();
        assert!(e.fixed_rank() >= 1);
        let id = hom_vec(&IntMatrix::identity(4));
        assert_eq!(e.action().mul_vec(&id), id);
    }

    #[test]
    fn regular_tensor_regular() {
        let r = PiModule::regular(3, 1);
        let t = tensor_module(&r, &r).unwrap();
        assert_eq!(t.rank(), 9);
        assert!(t.action().pow(3).is_identity());
        assert_eq!(t.fixed_rank(), 3);
        assert_eq!(tensor_module(&r, &PiModule::trivial(3, 2)).unwrap().fixed_rank(), 2);
        // permutation with no fixed basis vectors: three free orbits
        let a = t.action();
        assert!((0..9).all(|i| a.get(i, i) == &BigInt::from(0)));
    }

    #[test]
    fn equivariant_homs_between_standard() {
        let b = equivariant_hom_basis(&PiModule::regular(3, 1), &PiModule::trivial(3, 1)).unwrap();
        assert_eq!(b.len(), 1);
        let b = equivariant_hom_basis(&PiModule::norm_quotient(3), &PiModule::trivial(3, 1)).unwrap();
        assert!(b.is_empty());
    }
}
