//! Finite-dimensional associative algebras over F_p given by structure constants.

use super::fp::{add_mod, mul_mod, span_basis, sub_mod, FpMatrix};

/// Algebra with basis e_0..e_{n-1}; `left[i]` is the matrix of y ↦ e_i y.
#[derive(Clone, Debug)]
pub struct FpAlgebra {
    p: u64,
    left: Vec<FpMatrix>,
    unit: Vec<u64>,
}

/// A two-sided block of the semisimple quotient: M_n(F_{p^k}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Idempotent of the algebra lifting the central idempotent of the block.
    pub idempotent: Vec<u64>,
    pub dim: usize,
    pub center_dim: usize,
    /// Matrix size n, the multiplicity of the corresponding indecomposable.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constants are not associative")]
    NotAssociative,
    #[error("given unit is not a two-sided unit")]
    BadUnit,
    #[error("semisimple quotient is inconsistent: {0}")]
    Inconsistent(String),
}

fn axpy(q: u64, acc: &mut [u64], c: u64, v: &[u64]) {
    if c == 0 {
        return;
    }
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = add_mod(*a, mul_mod(c, b, q), q);
    }
}

fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl FpAlgebra {
    /// `products[i][j]` = coordinates of e_i e_j.
    pub fn new(p: u64, products: &[Vec<Vec<u64>>], unit: Vec<u64>) -> Result<Self, AlgebraError> {
        let n = unit.len();
        let left = (0..n)
            .map(|i| {
                let cols: Vec<Vec<u64>> = (0..n).map(|j| products[i][j].iter().map(|x| x % p).collect()).collect();
                FpMatrix::from_columns(p, n, &cols)
            })
            .collect();
        let a = FpAlgebra { p, left, unit: unit.iter().map(|x| x % p).collect() };
        a.check()?;
        Ok(a)
    }

    fn check(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            let e = unit_vector(self.p, n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(AlgebraError::BadUnit);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ei = unit_vector(self.p, n, i);
                let ej = unit_vector(self.p, n, j);
                let eij = self.mul(&ei, &ej);
                if self.left_matrix(&eij) != self.left[i].mul(&self.left[j]) {
                    return Err(AlgebraError::NotAssociative);
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn left_matrix(&self, x: &[u64]) -> FpMatrix {
        let n = self.dim();
        let mut m = FpMatrix::zeros(self.p, n, n);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add(&self.left[i].scale(c));
            }
        }
        m
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.dim()];
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                axpy(self.p, &mut out, c, &self.left[i].mul_vec(y));
            }
        }
        out
    }

    pub fn pow(&self, x: &[u64], k: u64) -> Vec<u64> {
        let mut r = self.unit.clone();
        for _ in 0..k {
            r = self.mul(&r, x);
        }
        r
    }

    pub fn is_idempotent(&self, x: &[u64]) -> bool {
        self.mul(x, x) == x
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| {
            let (a, b) = (unit_vector(self.p, n, i), unit_vector(self.p, n, j));
            self.mul(&a, &b) == self.mul(&b, &a)
        }))
    }

    /// Jacobson radical: iterated kernels of the p-power trace functionals
    /// x ↦ Tr((xy)^{p^i}) / p^i computed on integer lifts of the regular representation.
    pub fn radical(&self) -> Vec<Vec<u64>> {
        let n = self.dim();
        let p = self.p;
        let mut current: Vec<Vec<u64>> = (0..n).map(|i| unit_vector(p, n, i)).collect();
        let mut i = 0u32;
        loop {
            let q = p.pow(i + 1);
            let pi = p.pow(i);
            let lift = |m: &FpMatrix| {
                let data: Vec<u64> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| m.get(r, c)).collect();
                FpMatrix::new(q, n, n, data)
            };
            let basis_lifts: Vec<FpMatrix> = self.left.iter().map(lift).collect();
            // rows indexed by y in the basis, columns by elements of the current space
            let mut cond = FpMatrix::zeros(p, n, current.len());
            for (col, x) in current.iter().enumerate() {
                let lx = lift(&self.left_matrix(x));
                for (row, ly) in basis_lifts.iter().enumerate() {
                    let prod = lx.mul(ly);
                    let mut pw = FpMatrix::identity(q, n);
                    for _ in 0..pi {
                        pw = pw.mul(&prod);
                    }
                    let tr = (0..n).fold(0, |acc, k| add_mod(acc, pw.get(k, k), q));
                    debug_assert_eq!(tr % pi, 0, "power trace not divisible");
                    cond.set(row, col, (tr / pi) % p);
                }
            }
            let ker = cond.kernel();
            current = ker
                .iter()
                .map(|c| {
                    let mut v = vec![0; n];
                    for (k, &ck) in c.iter().enumerate() {
                        axpy(p, &mut v, ck, &current[k]);
                    }
                    v
                })
                .collect();
            current = span_basis(p, n, &current);
            if (pi as usize).saturating_mul(p as usize) > n || current.is_empty() {
                break;
            }
            i += 1;
        }
        current
    }

    /// Product space I·J spanned by pairwise products.
    fn product_space(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let prods: Vec<Vec<u64>> = a.iter().flat_map(|x| b.iter().map(move |y| self.mul(x, y))).filter(|v| !is_zero(v)).collect();
        span_basis(self.p, self.dim(), &prods)
    }

    /// Whether the span of `ideal` is a nilpotent two-sided ideal.
    pub fn is_nilpotent_ideal(&self, ideal: &[Vec<u64>]) -> bool {
        let n = self.dim();
        let all: Vec<Vec<u64>> = (0..n).map(|i| unit_vector(self.p, n, i)).collect();
        let span = |vs: &[Vec<u64>]| span_basis(self.p, n, vs).len();
        let d = span(ideal);
        let mut left = ideal.to_vec();
        left.extend(self.product_space(&all, ideal));
        let mut right = ideal.to_vec();
        right.extend(self.product_space(ideal, &all));
        if span(&left) != d || span(&right) != d {
            return false;
        }
        let mut pw = span_basis(self.p, n, ideal);
        for _ in 0..=n {
            if pw.is_empty() {
                return true;
            }
            pw = self.product_space(&pw, ideal);
        }
        pw.is_empty()
    }

    /// Quotient by an ideal, with the basis of a complement; returns (quotient, projection, section).
    pub fn quotient(&self, ideal: &[Vec<u64>]) -> (FpAlgebra, FpMatrix, FpMatrix) {
        let n = self.dim();
        let p = self.p;
        let ideal = span_basis(p, n, ideal);
        let mut cols = ideal.clone();
        let mut comp = Vec::new();
        for i in 0..n {
            let e = unit_vector(p, n, i);
            let mut trial = cols.clone();
            trial.push(e.clone());
            if span_basis(p, n, &trial).len() == cols.len() + 1 {
                cols.push(e.clone());
                comp.push(e);
            }
        }
        let change = FpMatrix::from_columns(p, n, &cols).inverse().expect("basis");
        let m = comp.len();
        let k = ideal.len();
        let mut proj = FpMatrix::zeros(p, m, n);
        for r in 0..m {
            for c in 0..n {
                proj.set(r, c, change.get(k + r, c));
            }
        }
        let section = FpMatrix::from_columns(p, n, &comp);
        let products: Vec<Vec<Vec<u64>>> = comp
            .iter()
            .map(|x| comp.iter().map(|y| proj.mul_vec(&self.mul(x, y))).collect())
            .collect();
        let unit = proj.mul_vec(&self.unit);
        let q = FpAlgebra::new(p, &products, unit).expect("quotient of an algebra by an ideal");
        (q, proj, section)
    }

    pub fn center(&self) -> Vec<Vec<u64>> {
        let n = self.dim();
        let mut rows = FpMatrix::zeros(self.p, n * n, n);
        for j in 0..n {
            let ej = unit_vector(self.p, n, j);
            for i in 0..n {
                let ei = unit_vector(self.p, n, i);
                let d: Vec<u64> = self
                    .mul(&ei, &ej)
                    .iter()
                    .zip(self.mul(&ej, &ei))
                    .map(|(&a, b)| sub_mod(a, b, self.p))
                    .collect();
                for (r, &v) in d.iter().enumerate() {
                    rows.set(j * n + r, i, v);
                }
            }
        }
        rows.kernel()
    }

    /// Primitive idempotents of a commutative reduced subalgebra spanned by `basis`,
    /// split along its Frobenius-fixed part.
    fn split_commutative(&self, basis: &[Vec<u64>]) -> Result<Vec<Vec<u64>>, AlgebraError> {
        let p = self.p;
        let n = self.dim();
        let m = basis.len();
        let span = FpMatrix::from_columns(p, n, basis);
        // matrix of z ↦ z^p - z in the basis coordinates
        let cols: Vec<Vec<u64>> = basis
            .iter()
            .map(|z| {
                let d: Vec<u64> = self.pow(z, p).iter().zip(z).map(|(&a, &b)| sub_mod(a, b, p)).collect();
                span.solve(&d).expect("Frobenius preserves the center")
            })
            .collect();
        let frob = FpMatrix::from_columns(p, m, &cols);
        let fixed: Vec<Vec<u64>> = frob
            .kernel()
            .iter()
            .map(|c| span.mul_vec(c))
            .collect();
        let mut idems = vec![self.unit.clone()];
        for f in &fixed {
            let mut next = Vec::new();
            for e in &idems {
                let ef = self.mul(e, f);
                for c in 0..p {
                    let y: Vec<u64> = ef.iter().zip(e).map(|(&a, &b)| sub_mod(a, mul_mod(c, b, p), p)).collect();
                    let mut yp = e.clone();
                    for _ in 0..p - 1 {
                        yp = self.mul(&yp, &y);
                    }
                    let ec: Vec<u64> = e.iter().zip(&yp).map(|(&a, &b)| sub_mod(a, b, p)).collect();
                    if !is_zero(&ec) {
                        next.push(ec);
                    }
                }
            }
            idems = next;
        }
        if idems.len() != fixed.len() {
            return Err(AlgebraError::Inconsistent(format!(
                "{} idempotents for a Frobenius-fixed space of dimension {}",
                idems.len(),
                fixed.len()
            )));
        }
        Ok(idems)
    }

    /// x ↦ 3x² - 2x³ until idempotent; converges when x² - x is nilpotent.
    pub fn lift_idempotent(&self, x: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut e = x.to_vec();
        for _ in 0..64 {
            if self.is_idempotent(&e) {
                return e;
            }
            let e2 = self.mul(&e, &e);
            let e3 = self.mul(&e2, &e);
            e = e2.iter().zip(&e3).map(|(&a, &b)| sub_mod(mul_mod(3, a, p), mul_mod(2, b, p), p)).collect();
        }
        panic!("idempotent lifting did not converge");
    }

    /// Blocks of A/rad(A), with idempotents lifted to A.
    pub fn blocks(&self) -> Result<Vec<Block>, AlgebraError> {
        let rad = self.radical();
        if !self.is_nilpotent_ideal(&rad) {
            return Err(AlgebraError::Inconsistent("radical is not a nilpotent ideal".into()));
        }
        let (b, _proj, section) = self.quotient(&rad);
        let center = b.center();
        let idems = b.split_commutative(&center)?;
        let n = b.dim();
        let mut out = Vec::new();
        for e in idems {
            let all: Vec<Vec<u64>> = (0..n).map(|i| b.mul(&unit_vector(b.p, n, i), &e)).collect();
            let dim = span_basis(b.p, n, &all).len();
            let zs: Vec<Vec<u64>> = center.iter().map(|z| b.mul(z, &e)).collect();
            let center_dim = span_basis(b.p, n, &zs).len();
            let sq = dim / center_dim.max(1);
            let size = (sq as f64).sqrt().round() as usize;
            if center_dim == 0 || size * size * center_dim != dim {
                return Err(AlgebraError::Inconsistent(format!("block of dimension {dim} over a center of dimension {center_dim}")));
            }
            let lifted = self.lift_idempotent(&section.mul_vec(&e));
            out.push(Block { idempotent: lifted, dim, center_dim, size });
        }
        Ok(out)
    }

    /// No idempotents other than 0 and 1.
    pub fn is_local(&self) -> Result<bool, AlgebraError> {
        if self.dim() == 0 {
            return Ok(false);
        }
        let b = self.blocks()?;
        Ok(b.len() == 1 && b[0].size == 1)
    }
}

fn unit_vector(p: u64, n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1 % p;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Algebra spanned by the given matrices (assumed closed, containing I as the first).
    fn matrix_algebra(p: u64, mats: &[FpMatrix]) -> FpAlgebra {
        let k = mats[0].rows();
        let flat = |m: &FpMatrix| (0..k).flat_map(|r| (0..k).map(move |c| (r, c))).map(|(r, c)| m.get(r, c)).collect::<Vec<_>>();
        let span = FpMatrix::from_columns(p, k * k, &mats.iter().map(flat).collect::<Vec<_>>());
        let products: Vec<Vec<Vec<u64>>> = mats
            .iter()
            .map(|a| mats.iter().map(|b| span.solve(&flat(&a.mul(b))).expect("closed")).collect())
            .collect();
        let mut unit = vec![0; mats.len()];
        unit[0] = 1;
        FpAlgebra::new(p, &products, unit).unwrap()
    }

    fn truncated_poly(p: u64, m: usize) -> FpAlgebra {
        let products: Vec<Vec<Vec<u64>>> = (0..m)
            .map(|i| (0..m).map(|j| {
                let mut v = vec![0; m];
                if i + j < m {
                    v[i + j] = 1;
                }
                v
            }).collect())
            .collect();
        let mut unit = vec![0; m];
        unit[0] = 1;
        FpAlgebra::new(p, &products, unit).unwrap()
    }

    fn e(p: u64, k: usize, i: usize, j: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, k, k);
        m.set(i, j, 1);
        m
    }

    #[test]
    fn group_algebra_in_its_characteristic() {
        // F_3[t]/t^3 ≅ F_3[Z/3]; the trace form vanishes identically here
        let a = truncated_poly(3, 3);
        assert_eq!(a.radical().len(), 2);
        assert!(a.is_local().unwrap());
        let a = truncated_poly(5, 7);
        assert_eq!(a.radical().len(), 6);
    }

    #[test]
    fn full_matrix_algebra() {
        let p = 3;
        let mats = vec![
            FpMatrix::identity(p, 2),
            e(p, 2, 0, 1),
            e(p, 2, 1, 0),
            e(p, 2, 0, 0),
        ];
        let a = matrix_algebra(p, &mats);
        assert!(a.radical().is_empty());
        let b = a.blocks().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].dim, b[0].size), (4, 2));
        assert!(!a.is_local().unwrap());
    }

    #[test]
    fn upper_triangular() {
        let p = 5;
        let mats = vec![FpMatrix::identity(p, 2), e(p, 2, 0, 0), e(p, 2, 0, 1)];
        let a = matrix_algebra(p, &mats);
        let r = a.radical();
        assert_eq!(r.len(), 1);
        assert!(a.is_nilpotent_ideal(&r));
        let b = a.blocks().unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.size == 1 && a.is_idempotent(&x.idempotent)));
    }

    #[test]
    fn field_extension_is_local() {
        // F_9 = F_3[i], i^2 = -1
        let p = 3;
        let products = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![2, 0]]];
        let a = FpAlgebra::new(p, &products, vec![1, 0]).unwrap();
        assert!(a.radical().is_empty());
        let b = a.blocks().unwrap();
        assert_eq!((b.len(), b[0].center_dim, b[0].size), (1, 2, 1));
        assert!(a.is_local().unwrap());
    }

    #[test]
    fn split_product() {
        // F_3[x]/(x^2 - x) ≅ F_3 × F_3, in the basis 1, x
        let products = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]];
        let a = FpAlgebra::new(3, &products, vec![1, 0]).unwrap();
        let b = a.blocks().unwrap();
        assert_eq!(b.len(), 2);
        let sum: Vec<u64> = b[0].idempotent.iter().zip(&b[1].idempotent).map(|(x, y)| (x + y) % 3).collect();
        assert_eq!(sum, vec![1, 0]);
    }

    #[test]
    fn rejects_non_associative() {
        let products = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]];
        assert!(FpAlgebra::new(3, &products, vec![1, 0]).is_ok());
        let bad = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
        assert!(FpAlgebra::new(3, &bad, vec![0, 1]).is_err());
    }
}
