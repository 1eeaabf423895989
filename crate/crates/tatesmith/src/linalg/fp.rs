use std::fmt;

/// Dense matrix over Z/q for a prime q < 2^63.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    q: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % q as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        q - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, q: u64) -> u64 {
    assert!(!a.is_multiple_of(q), "inverse of zero mod {q}");
    pow_mod(a, q - 2, q)
}

/// Reduced row echelon data: the echelon matrix and its pivot columns.
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn new(q: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FpMatrix { q, rows, cols, data: data.into_iter().map(|x| x % q).collect() }
    }

    pub fn zeros(q: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u64, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % q;
        }
        m
    }

    pub fn from_signed(q: u64, rows: usize, cols: usize, data: &[i64]) -> Self {
        let qi = q as i128;
        let d = data.iter().map(|&x| (((x as i128) % qi + qi) % qi) as u64).collect();
        Self::new(q, rows, cols, d)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.q;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.q, other.q);
        assert_eq!(self.cols, other.rows, "F_q product shape mismatch");
        let q = self.q;
        let mut out = Self::zeros(q, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let s = &mut out.data[i * other.cols + j];
                        *s = add_mod(*s, mul_mod(a, b, q), q);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let q = self.q;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, q), q))
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let q = self.q;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, q)).collect();
        FpMatrix { q, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let q = self.q;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, q)).collect();
        FpMatrix { q, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let q = self.q;
        let data = self.data.iter().map(|&a| mul_mod(a, c % q, q)).collect();
        FpMatrix { q, rows: self.rows, cols: self.cols, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FpMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j);
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &FpMatrix, sign: i64) {
        let q = self.q;
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = b.get(i, j);
                if v == 0 {
                    continue;
                }
                let s = &mut self.data[(r0 + i) * self.cols + c0 + j];
                *s = if sign >= 0 { add_mod(*s, v, q) } else { sub_mod(*s, v, q) };
            }
        }
    }

    pub fn from_columns(q: u64, rows: usize, cols: &[Vec<u64>]) -> FpMatrix {
        let mut m = Self::zeros(q, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.q, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn rref(&self) -> Rref {
        let q = self.q;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, r * m.cols + k);
                }
            }
            let inv = inv_mod(m.get(r, c), q);
            for k in c..m.cols {
                let v = m.get(r, k);
                m.data[r * m.cols + k] = mul_mod(v, inv, q);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for k in c..m.cols {
                    let v = m.get(r, k);
                    if v != 0 {
                        let s = &mut m.data[i * m.cols + k];
                        *s = sub_mod(*s, mul_mod(f, v, q), q);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space, as columns.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let q = self.q;
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1 % q;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, matrix.get(r, free), q);
            }
            basis.push(v);
        }
        basis
    }

    /// Some x with self * x = b, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&FpMatrix::from_columns(self.q, self.rows, &[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FpMatrix::identity(self.q, n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.q, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, matrix.get(i, n + j));
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(mod {}) {}x{} [", self.q, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Column basis of a subspace spanned by the given vectors (pivot columns kept).
pub fn span_basis(q: u64, dim: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = FpMatrix::from_columns(q, dim, vectors);
    let piv = m.rref().pivots;
    piv.into_iter().map(|j| vectors[j].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = FpMatrix::from_signed(3, 2, 3, &[1, 1, 1, 2, 2, 2]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::from_signed(5, 2, 2, &[1, 2, 3, 4]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(5, 2));
    }

    #[test]
    fn big_modulus_arithmetic() {
        let q = (1u64 << 61) - 1;
        assert_eq!(mul_mod(q - 1, q - 1, q), 1);
        assert_eq!(mul_mod(inv_mod(12345, q), 12345, q), 1);
    }
}
