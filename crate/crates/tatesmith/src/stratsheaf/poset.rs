//! Finite stratified posets: λ ⪯ μ when λ lies in the closure of μ; opens are up-sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::pimod::check_prime;

/// A strict chain λ0 < λ1 < ... < λk, by element index.
pub type Chain = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratPoset {
    p: u64,
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    le: Vec<Vec<bool>>,
    dim: Vec<usize>,
    dagger: Vec<u8>,
    action: Vec<usize>,
}

impl StratPoset {
    /// `leq` may be any generating set of relations; the order is its reflexive-transitive
    /// closure. `action` maps each element to its image under the generator.
    pub fn new(
        p: u64,
        labels: Vec<String>,
        leq: &[(usize, usize)],
        dim: Vec<usize>,
        dagger: Vec<u8>,
        action: Vec<usize>,
    ) -> Result<Self> {
        check_prime(p)?;
        let n = labels.len();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidSheaf(format!("duplicate stratum label {l}")));
            }
        }
        if dim.len() != n || dagger.len() != n || action.len() != n {
            return Err(Error::InvalidSheaf("dim, dagger and action must cover every stratum".into()));
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in leq {
            if a >= n || b >= n {
                return Err(Error::InvalidSheaf(format!("relation ({a}, {b}) out of range")));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            let through = le[k].clone();
            for row in le.iter_mut().filter(|r| r[k]) {
                for (x, &t) in row.iter_mut().zip(&through) {
                    *x |= t;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if le[i][j] && le[j][i] {
                    return Err(Error::InvalidSheaf(format!(
                        "relation is not antisymmetric on {} and {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let poset = StratPoset { p, labels, index, le, dim, dagger, action };
        poset.check_action()?;
        Ok(poset)
    }

    /// Trivial action, dagger = dim mod 2.
    pub fn simple(p: u64, labels: &[&str], leq: &[(&str, &str)], dim: &[usize]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            labels.iter().position(|l| l == s).ok_or_else(|| Error::UnknownStratum(s.to_string()))
        };
        let rel = leq.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        let n = labels.len();
        let dagger = dim.iter().map(|d| (d % 2) as u8).collect();
        StratPoset::new(p, labels, &rel, dim.to_vec(), dagger, (0..n).collect())
    }

    /// Face poset of a simplicial complex given by its simplices (vertex index lists, every
    /// face present) and a vertex permutation. Labels join vertex names with commas.
    pub fn face_poset(
        p: u64,
        vertex_names: &[String],
        simplices: &[Vec<usize>],
        vertex_action: &[usize],
    ) -> Result<Self> {
        let mut simp: Vec<Vec<usize>> = simplices
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        simp.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        simp.dedup();
        let pos: BTreeMap<Vec<usize>, usize> = simp.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let labels: Vec<String> = simp
            .iter()
            .map(|s| s.iter().map(|&v| vertex_names[v].as_str()).collect::<Vec<_>>().join(","))
            .collect();
        let mut rel = Vec::new();
        for (j, s) in simp.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for drop in 0..s.len() {
                let mut f = s.clone();
                f.remove(drop);
                let i = *pos.get(&f).ok_or_else(|| {
                    Error::InvalidInput(format!("face {f:?} of simplex {s:?} is missing"))
                })?;
                rel.push((i, j));
            }
        }
        let dim: Vec<usize> = simp.iter().map(|s| s.len() - 1).collect();
        let dagger = dim.iter().map(|d| (d % 2) as u8).collect();
        let action = simp
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&v| vertex_action[v]).collect();
                t.sort_unstable();
                pos.get(&t).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("action does not map simplex {s:?} to a simplex"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StratPoset::new(p, labels, &rel, dim, dagger, action)
    }

    fn check_action(&self) -> Result<()> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &a in &self.action {
            if a >= n || seen[a] {
                return Err(Error::InvalidSheaf("action is not a permutation".into()));
            }
            seen[a] = true;
        }
        for i in 0..n {
            let mut j = i;
            for _ in 0..self.p {
                j = self.action[j];
            }
            if j != i {
                return Err(Error::InvalidSheaf(format!("action^p moves {}", self.labels[i])));
            }
            let s = self.action[i];
            if self.dim[s] != self.dim[i] || self.dagger[s] != self.dagger[i] {
                return Err(Error::InvalidSheaf(format!("action does not preserve dim/dagger at {}", self.labels[i])));
            }
            for k in 0..n {
                if self.le[i][k] != self.le[s][self.action[k]] {
                    return Err(Error::InvalidSheaf("action does not preserve the order".into()));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownStratum(label.to_string()))
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dim[i]
    }

    pub fn dagger(&self, i: usize) -> u8 {
        self.dagger[i]
    }

    pub fn sigma(&self, i: usize) -> usize {
        self.action[i]
    }

    pub fn action(&self) -> &[usize] {
        &self.action
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.action[i] == i
    }

    pub fn has_trivial_action(&self) -> bool {
        (0..self.len()).all(|i| self.is_fixed(i))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_fixed(i)).collect()
    }

    /// λ, σλ, σ²λ, ... until it closes up.
    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut j = self.action[i];
        while j != i {
            out.push(j);
            j = self.action[j];
        }
        out
    }

    /// Strict covering relations λ ⋖ μ.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// U_λ = {μ : λ ⪯ μ}.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.le[i][j]).collect()
    }

    pub fn is_up_set(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.iter().all(|&a| (0..self.len()).all(|b| !self.le[a][b] || s.contains(&b)))
    }

    pub fn is_down_set(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.iter().all(|&a| (0..self.len()).all(|b| !self.le[b][a] || s.contains(&b)))
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.iter().all(|&a| s.contains(&self.action[a]))
    }

    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&b| set.iter().any(|&a| self.le[b][a])).collect()
    }

    pub fn complement(&self, set: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        (0..self.len()).filter(|i| !s.contains(i)).collect()
    }

    pub fn indices_of(&self, labels: &[String]) -> Result<Vec<usize>> {
        let mut v = labels.iter().map(|l| self.index_of(l)).collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// Induced subposet on `set` (sorted). The action is kept when the set is σ-stable and
    /// replaced by the identity otherwise.
    pub fn subposet(&self, set: &[usize]) -> StratPoset {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let stable = self.is_stable(&set);
        let pos: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let labels: Vec<String> = set.iter().map(|&i| self.labels[i].clone()).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let le = set.iter().map(|&a| set.iter().map(|&b| self.le[a][b]).collect()).collect();
        let action = set
            .iter()
            .enumerate()
            .map(|(i, &a)| if stable { pos[&self.action[a]] } else { i })
            .collect();
        StratPoset {
            p: self.p,
            labels,
            index,
            le,
            dim: set.iter().map(|&i| self.dim[i]).collect(),
            dagger: set.iter().map(|&i| self.dagger[i]).collect(),
            action,
        }
    }

    /// Same poset with the identity action.
    pub fn without_action(&self) -> StratPoset {
        StratPoset { action: (0..self.len()).collect(), ..self.clone() }
    }

    pub fn with_dagger(&self, dagger: Vec<u8>) -> Result<StratPoset> {
        let out = StratPoset { dagger, ..self.clone() };
        if out.dagger.len() != out.len() {
            return Err(Error::InvalidSheaf("dagger must cover every stratum".into()));
        }
        out.check_action()?;
        Ok(out)
    }

    /// All strict chains, ordered by length and then lexicographically.
    pub fn chains(&self) -> Vec<Chain> {
        let n = self.len();
        let mut out: Vec<Chain> = (0..n).map(|i| vec![i]).collect();
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let last = *c.last().unwrap();
                for b in 0..n {
                    if self.lt(last, b) {
                        let mut d = c.clone();
                        d.push(b);
                        next.push(d);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn apply_action(&self, c: &[usize]) -> Chain {
        c.iter().map(|&i| self.action[i]).collect()
    }
}
