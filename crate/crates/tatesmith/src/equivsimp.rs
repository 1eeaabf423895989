//! Finite simplicial complexes with a simplicial Z/p action: regularization, equivariant
//! cochains, fixed subcomplexes, the Smith localization check and export to face posets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homcx::PiComplex;
use crate::linalg::{FpMatrix, IntMatrix};
use crate::pimod::{check_prime, PiModule};
use crate::stratsheaf::{CellSheafComplex, StratPoset};
use crate::tate::{tate_cohomology, TateDims};

/// A finite simplicial complex without action. Simplices are sorted vertex-index lists,
/// closed under faces, ordered by dimension and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<usize>>,
}

fn close_down(simplices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut all = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        let k = s.len();
        for mask in 1u64..(1u64 << k) {
            all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>());
        }
    }
    let mut out: Vec<Vec<usize>> = all.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

impl SimplicialComplex {
    /// Builds the downward closure of `simplices` (vertex indices). Every vertex is a simplex.
    pub fn new(vertices: Vec<String>, simplices: &[Vec<usize>]) -> Result<Self> {
        let n = vertices.len();
        if let Some(s) = simplices.iter().find(|s| s.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput(format!("simplex {s:?} uses an unknown vertex")));
        }
        if vertices.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidInput("duplicate vertex labels".into()));
        }
        // face enumeration is exponential in the simplex size
        if let Some(s) = simplices.iter().find(|s| s.len() > 24) {
            return Err(Error::InvalidInput(format!("simplex with {} vertices is too large", s.len())));
        }
        let mut all: Vec<Vec<usize>> = simplices.to_vec();
        all.extend((0..n).map(|v| vec![v]));
        Ok(SimplicialComplex { vertices, simplices: close_down(&all) })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Simplices of dimension k.
    pub fn simplices_of_dim(&self, k: usize) -> Vec<&Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        let top = self.dim().map_or(0, |d| d + 1);
        (0..top).map(|k| self.simplices_of_dim(k).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn label(&self, s: &[usize]) -> String {
        s.iter().map(|&v| self.vertices[v].as_str()).collect::<Vec<_>>().join(",")
    }
}

/// dim H^k(X; F_p) for k = 0..=dim X, by Gaussian elimination on coboundary matrices mod p.
pub fn fp_cohomology_dims(x: &SimplicialComplex, p: u64) -> Vec<usize> {
    let Some(top) = x.dim() else { return Vec::new() };
    let index: Vec<BTreeMap<&Vec<usize>, usize>> =
        (0..=top + 1).map(|k| x.simplices_of_dim(k).into_iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    // coboundary d^k : C^k -> C^{k+1}
    let cob = |k: usize| -> FpMatrix {
        let (rows, cols) = (index[k + 1].len(), index[k].len());
        let mut m = FpMatrix::zeros(p, rows, cols);
        for (t, &r) in &index[k + 1] {
            for i in 0..t.len() {
                let mut face = (*t).clone();
                face.remove(i);
                let c = index[k][&face];
                m.set(r, c, if i % 2 == 0 { 1 } else { p - 1 });
            }
        }
        m
    };
    let ranks: Vec<usize> = (0..=top).map(|k| cob(k).rank()).collect();
    (0..=top).map(|k| index[k].len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect()
}

/// A simplicial complex with a vertex permutation of order dividing p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialPiComplex {
    p: u64,
    complex: SimplicialComplex,
    action: Vec<usize>,
}

fn sort_sign(v: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

impl SimplicialPiComplex {
    pub fn new(p: u64, vertices: Vec<String>, simplices: &[Vec<usize>], action: Vec<usize>) -> Result<Self> {
        check_prime(p)?;
        let complex = SimplicialComplex::new(vertices, simplices)?;
        let n = complex.vertices.len();
        if action.len() != n || action.iter().collect::<BTreeSet<_>>().len() != n || action.iter().any(|&a| a >= n) {
            return Err(Error::InvalidInput("vertex action is not a permutation".into()));
        }
        for v in 0..n {
            let mut w = v;
            for _ in 0..p {
                w = action[w];
            }
            if w != v {
                return Err(Error::InvalidInput(format!("action order does not divide {p} at {}", complex.vertices[v])));
            }
        }
        let set: BTreeSet<&Vec<usize>> = complex.simplices.iter().collect();
        for s in &complex.simplices {
            let mut t: Vec<usize> = s.iter().map(|&v| action[v]).collect();
            t.sort_unstable();
            if !set.contains(&t) {
                return Err(Error::InvalidInput(format!("action does not map {} to a simplex", complex.label(s))));
            }
        }
        Ok(SimplicialPiComplex { p, complex, action })
    }

    /// Vertices and simplices given by label; vertices missing from `action` are fixed.
    pub fn from_labels(p: u64, vertices: Vec<String>, simplices: &[Vec<String>], action: &BTreeMap<String, String>) -> Result<Self> {
        let pos: BTreeMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let find = |l: &str| pos.get(l).copied().ok_or_else(|| Error::InvalidInput(format!("unknown vertex {l}")));
        let simp = simplices.iter().map(|s| s.iter().map(|l| find(l)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let mut act: Vec<usize> = (0..vertices.len()).collect();
        for (a, b) in action {
            act[find(a)?] = find(b)?;
        }
        Self::new(p, vertices, &simp, act)
    }

    /// Same complex with the trivial action.
    pub fn trivial(p: u64, complex: SimplicialComplex) -> Result<Self> {
        check_prime(p)?;
        let action = (0..complex.vertices.len()).collect();
        Ok(SimplicialPiComplex { p, complex, action })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn action(&self) -> &[usize] {
        &self.action
    }

    /// Image of a simplex with the sign of the induced permutation of its ordered vertices.
    pub fn act_on(&self, s: &[usize]) -> (Vec<usize>, i64) {
        let mut t: Vec<usize> = s.iter().map(|&v| self.action[v]).collect();
        let sign = sort_sign(&mut t);
        (t, sign)
    }

    /// Every setwise-fixed simplex is pointwise fixed.
    pub fn is_regular(&self) -> bool {
        self.complex.simplices.iter().all(|s| {
            let (t, _) = self.act_on(s);
            t != *s || s.iter().all(|&v| self.action[v] == v)
        })
    }

    fn require_regular(&self) -> Result<()> {
        if self.is_regular() {
            return Ok(());
        }
        let bad = self.complex.simplices.iter().find(|s| self.act_on(s).0 == **s && s.iter().any(|&v| self.action[v] != v)).unwrap();
        Err(Error::NotRegular(format!("simplex {} is fixed but not pointwise", self.complex.label(bad))))
    }

    /// Barycentric subdivision: vertices are the simplices, simplices are chains under inclusion.
    pub fn subdivide(&self) -> SimplicialPiComplex {
        let simp = &self.complex.simplices;
        let index: BTreeMap<&Vec<usize>, usize> = simp.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let names: Vec<String> = simp
            .iter()
            .map(|s| if s.len() == 1 { self.complex.vertices[s[0]].clone() } else { s.iter().map(|&v| self.complex.vertices[v].as_str()).collect::<Vec<_>>().join("+") })
            .collect();
        let contains = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|v| b.binary_search(v).is_ok());
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..simp.len()).map(|i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            let last = &simp[*c.last().unwrap()];
            for (j, s) in simp.iter().enumerate() {
                if contains(last, s) {
                    let mut d = c.clone();
                    d.push(j);
                    stack.push(d);
                }
            }
            chains.push(c);
        }
        let action: Vec<usize> = simp.iter().map(|s| index[&self.act_on(s).0]).collect();
        let complex = SimplicialComplex { vertices: names, simplices: close_down(&chains) };
        SimplicialPiComplex { p: self.p, complex, action }
    }

    /// Subdivides until the action is regular; returns the number of subdivisions.
    pub fn regularize(&self) -> (SimplicialPiComplex, usize) {
        let mut x = self.clone();
        let mut rounds = 0;
        while !x.is_regular() {
            x = x.subdivide();
            rounds += 1;
        }
        (x, rounds)
    }

    /// Simplicial cochains, oriented by vertex index, with g acting by signed permutations.
    pub fn cochains(&self) -> Result<PiComplex> {
        self.require_regular()?;
        let Some(top) = self.complex.dim() else { return Ok(PiComplex::zero(self.p)) };
        let by_dim: Vec<Vec<&Vec<usize>>> = (0..=top).map(|k| self.complex.simplices_of_dim(k)).collect();
        let index: Vec<BTreeMap<&Vec<usize>, usize>> =
            by_dim.iter().map(|l| l.iter().enumerate().map(|(i, &s)| (s, i)).collect()).collect();
        let mut terms = Vec::new();
        for (k, list) in by_dim.iter().enumerate() {
            let mut a = IntMatrix::zeros(list.len(), list.len());
            for (j, s) in list.iter().enumerate() {
                let (t, sign) = self.act_on(s);
                a.set(index[k][&t], j, BigInt::from(sign));
            }
            terms.push(PiModule::new(self.p, a)?);
        }
        let mut diffs = Vec::new();
        for k in 0..top {
            let mut d = IntMatrix::zeros(by_dim[k + 1].len(), by_dim[k].len());
            for (r, t) in by_dim[k + 1].iter().enumerate() {
                for i in 0..t.len() {
                    let mut face = (*t).clone();
                    face.remove(i);
                    d.set(r, index[k][&face], BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            diffs.push(d);
        }
        PiComplex::new(self.p, 0, terms, diffs)
    }

    /// Simplices all of whose vertices are fixed, as a complex on the fixed vertices.
    pub fn fixed_subcomplex(&self) -> Result<SimplicialComplex> {
        self.require_regular()?;
        let fixed: Vec<usize> = (0..self.action.len()).filter(|&v| self.action[v] == v).collect();
        let new_index: BTreeMap<usize, usize> = fixed.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let simp: Vec<Vec<usize>> = self
            .complex
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| new_index.contains_key(v)))
            .map(|s| s.iter().map(|v| new_index[v]).collect())
            .collect();
        let vertices = fixed.iter().map(|&v| self.complex.vertices[v].clone()).collect();
        SimplicialComplex::new(vertices, &simp)
    }

    /// Face poset: strata are open simplices ordered by the face relation, † = dim mod 2.
    pub fn face_poset(&self) -> Result<StratPoset> {
        self.require_regular()?;
        StratPoset::face_poset(self.p, &self.complex.vertices, &self.complex.simplices, &self.action)
    }

    /// Face poset with the constant sheaf Z.
    pub fn face_poset_export(&self) -> Result<(StratPoset, CellSheafComplex)> {
        let base = self.face_poset()?;
        let f = CellSheafComplex::constant_z(&base);
        f.validate().into_result()?;
        Ok((base, f))
    }

    /// Face poset with the constant sheaf valued in a complex `c` carrying its own ϖ-action.
    pub fn face_poset_export_with(&self, c: &PiComplex) -> Result<(StratPoset, CellSheafComplex)> {
        let base = self.face_poset()?;
        let f = if c.is_trivial_action() { CellSheafComplex::constant(&base, c) } else { CellSheafComplex::constant_equivariant(&base, c)? };
        f.validate().into_result()?;
        Ok((base, f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithLocalizationReport {
    /// Tate cohomology of the equivariant cochains.
    pub tate: TateDims,
    /// Σ over even and odd n of dim H^n(fixed subcomplex; F_p).
    pub fixed: TateDims,
    pub fixed_cohomology: Vec<usize>,
    pub pass: bool,
    pub euler: i64,
    pub euler_fixed: i64,
    pub euler_congruent: bool,
}

pub fn smith_localization_check(x: &SimplicialPiComplex) -> Result<SmithLocalizationReport> {
    let c = x.cochains()?;
    let t = tate_cohomology(&c)?;
    let tate = TateDims { t0: t.t0_dim, t1: t.t1_dim };
    let xf = x.fixed_subcomplex()?;
    let h = fp_cohomology_dims(&xf, x.p);
    let fixed = TateDims {
        t0: h.iter().step_by(2).sum(),
        t1: h.iter().skip(1).step_by(2).sum(),
    };
    let euler = x.complex.euler_characteristic();
    let euler_fixed = xf.euler_characteristic();
    Ok(SmithLocalizationReport {
        tate,
        fixed,
        fixed_cohomology: h,
        pass: tate == fixed,
        euler,
        euler_fixed,
        euler_congruent: (euler - euler_fixed).rem_euclid(x.p as i64) == 0,
    })
}

/// Standard examples.
pub mod samples {
    use super::*;

    fn names(n: usize, prefix: &str) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn point(p: u64) -> SimplicialPiComplex {
        SimplicialPiComplex::new(p, vec!["o".into()], &[], vec![0]).expect("point")
    }

    /// Boundary of a p-gon with the rotation.
    pub fn polygon(p: u64) -> SimplicialPiComplex {
        let n = p as usize;
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let rot = (0..n).map(|i| (i + 1) % n).collect();
        SimplicialPiComplex::new(p, names(n, "v"), &edges, rot).expect("polygon")
    }

    /// Suspension of the triangle boundary with poles n, s and the equator a, b, c rotated.
    pub fn suspension(p: u64) -> SimplicialPiComplex {
        let v: Vec<String> = ["n", "s", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut tri = Vec::new();
        for (x, y) in [(2, 3), (3, 4), (2, 4)] {
            for pole in 0..2 {
                tri.push(vec![pole, x, y]);
            }
        }
        SimplicialPiComplex::new(p, v, &tri, vec![0, 1, 3, 4, 2]).expect("suspension")
    }

    /// A 2-simplex whose vertices are cycled: setwise fixed but not pointwise.
    pub fn rotated_simplex() -> SimplicialPiComplex {
        SimplicialPiComplex::new(3, names(3, "v"), &[vec![0, 1, 2]], vec![1, 2, 0]).expect("simplex")
    }

    /// Boundary of the triangle with trivial action.
    pub fn triangle_boundary(p: u64) -> SimplicialPiComplex {
        SimplicialPiComplex::new(p, names(3, "v"), &[vec![0, 1], vec![1, 2], vec![0, 2]], vec![0, 1, 2]).expect("triangle")
    }
}
