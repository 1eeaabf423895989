//! Complexes of sheaves on a stratified poset, as strict functors with an equivariant
//! structure.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homcx::{direct_sum as cx_sum, shift as cx_shift, PiComplex};
use crate::linalg::IntMatrix;
use crate::pimod::PiModule;

use super::poset::StratPoset;

/// Components of a degree-0 chain map, keyed by source degree.
pub type ChainComps = BTreeMap<i64, IntMatrix>;

fn comp(m: &ChainComps, n: i64, rows: usize, cols: usize) -> IntMatrix {
    m.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(rows, cols))
}

/// Component of a degree-0 map between two complexes, zero-padded.
pub fn map_component(m: &ChainComps, src: &PiComplex, tgt: &PiComplex, n: i64) -> IntMatrix {
    comp(m, n, tgt.rank(n), src.rank(n))
}

pub fn compose_maps(g: &ChainComps, f: &ChainComps, a: &PiComplex, b: &PiComplex, c: &PiComplex) -> ChainComps {
    a.degrees()
        .filter(|&n| c.rank(n) > 0)
        .map(|n| (n, map_component(g, b, c, n).mul(&map_component(f, a, b, n))))
        .collect()
}

pub fn identity_map(c: &PiComplex) -> ChainComps {
    c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect()
}

fn maps_equal(f: &ChainComps, g: &ChainComps, src: &PiComplex, tgt: &PiComplex) -> bool {
    src.degrees().all(|n| map_component(f, src, tgt, n) == map_component(g, src, tgt, n))
}

fn is_chain_map(f: &ChainComps, src: &PiComplex, tgt: &PiComplex) -> bool {
    let lo = src.bot().min(tgt.bot()) - 1;
    let hi = src.top().max(tgt.top()) + 1;
    for (n, m) in f {
        if m.shape() != (tgt.rank(*n), src.rank(*n)) {
            return false;
        }
    }
    (lo..=hi).all(|n| {
        tgt.diff(n).mul(&map_component(f, src, tgt, n)) == map_component(f, src, tgt, n + 1).mul(&src.diff(n))
    })
}

/// Values are lattice complexes (their own module actions are ignored); the equivariant
/// structure lives in `equiv`, with equiv[λ]: values(λ) -> values(σλ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSheafComplex {
    base: StratPoset,
    values: Vec<PiComplex>,
    gen: BTreeMap<(usize, usize), ChainComps>,
    equiv: Vec<ChainComps>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidSheaf(self.errors.join("; ")))
        }
    }
}

impl CellSheafComplex {
    /// No checks; missing generization maps between comparable strata are filled in by
    /// composing along intermediate strata where possible. See [`CellSheafComplex::validate`].
    pub fn raw(
        base: StratPoset,
        values: Vec<PiComplex>,
        gen: BTreeMap<(usize, usize), ChainComps>,
        equiv: Option<Vec<ChainComps>>,
    ) -> Result<Self> {
        let p = base.p();
        if values.len() != base.len() {
            return Err(Error::InvalidSheaf(format!(
                "{} values for {} strata",
                values.len(),
                base.len()
            )));
        }
        let values: Vec<PiComplex> = values
            .into_iter()
            .map(|v| if v.is_zero() { PiComplex::zero(p) } else { v.forget_action() })
            .collect();
        if let Some(v) = values.iter().find(|v| v.p() != p) {
            return Err(Error::PrimeMismatch(p, v.p()));
        }
        let equiv = match equiv {
            Some(e) => {
                if e.len() != base.len() {
                    return Err(Error::InvalidSheaf("equiv must cover every stratum".into()));
                }
                e
            }
            None => (0..base.len()).map(|i| identity_map(&values[i])).collect(),
        };
        let mut gen = gen;
        for &(a, b) in gen.keys() {
            if a >= base.len() || b >= base.len() || !base.lt(a, b) {
                return Err(Error::InvalidSheaf(format!("generization given for a non-relation ({a}, {b})")));
            }
        }
        let n = base.len();
        let mut pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| base.lt(a, b)).collect();
        // fill shorter intervals first
        let between = |a: usize, b: usize| (0..n).filter(|&c| base.lt(a, c) && base.lt(c, b)).count();
        pairs.sort_by_key(|&(a, b)| (between(a, b), a, b));
        for (a, b) in pairs {
            if gen.contains_key(&(a, b)) {
                continue;
            }
            if values[a].is_zero() || values[b].is_zero() {
                gen.insert((a, b), ChainComps::new());
                continue;
            }
            let mid = (0..n).find(|&c| base.lt(a, c) && base.lt(c, b) && gen.contains_key(&(a, c)) && gen.contains_key(&(c, b)));
            match mid {
                Some(c) => {
                    let m = compose_maps(&gen[&(c, b)], &gen[&(a, c)], &values[a], &values[c], &values[b]);
                    gen.insert((a, b), m);
                }
                None => {
                    return Err(Error::InvalidSheaf(format!(
                        "no generization map for {} < {}",
                        base.label(a),
                        base.label(b)
                    )))
                }
            }
        }
        Ok(CellSheafComplex { base, values, gen, equiv })
    }

    pub fn new(
        base: StratPoset,
        values: Vec<PiComplex>,
        gen: BTreeMap<(usize, usize), ChainComps>,
        equiv: Option<Vec<ChainComps>>,
    ) -> Result<Self> {
        let f = Self::raw(base, values, gen, equiv)?;
        let rep = f.validate();
        if !rep.is_ok() {
            return Err(Error::InvalidSheaf(rep.errors.join("; ")));
        }
        Ok(f)
    }

    /// Constant sheaf with value `c` (a trivial-action complex), identity maps.
    pub fn constant(base: &StratPoset, c: &PiComplex) -> Self {
        let values = vec![c.forget_action(); base.len()];
        let gen = base
            .covers()
            .into_iter()
            .map(|e| (e, identity_map(c)))
            .collect();
        Self::raw(base.clone(), values, gen, None).expect("constant sheaf")
    }

    /// Constant sheaf with value `c` whose equivariant structure is the ϖ-action of `c`.
    pub fn constant_equivariant(base: &StratPoset, c: &PiComplex) -> Result<Self> {
        let values = vec![c.forget_action(); base.len()];
        let gen = base.covers().into_iter().map(|e| (e, identity_map(c))).collect();
        let act: ChainComps = c.degrees().filter(|&n| c.rank(n) > 0).map(|n| (n, c.action(n))).collect();
        Self::new(base.clone(), values, gen, Some(vec![act; base.len()]))
    }

    /// Constant sheaf Z in degree 0.
    pub fn constant_z(base: &StratPoset) -> Self {
        let p = base.p();
        Self::constant(base, &PiComplex::single(PiModule::trivial(p, 1), 0))
    }

    /// Z at one stratum, zero elsewhere (requires λ to be closed in the support sense only
    /// through the maps being zero).
    pub fn skyscraper(base: &StratPoset, i: usize) -> Self {
        let p = base.p();
        let values = (0..base.len())
            .map(|j| if j == i { PiComplex::single(PiModule::trivial(p, 1), 0) } else { PiComplex::zero(p) })
            .collect();
        Self::raw(base.clone(), values, BTreeMap::new(), None).expect("skyscraper")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        let b = &self.base;
        let n = b.len();
        let lbl = |i: usize| b.label(i).to_string();
        for ((a, c), m) in &self.gen {
            if !is_chain_map(m, &self.values[*a], &self.values[*c]) {
                errors.push(format!("generization {} < {} is not a chain map", lbl(*a), lbl(*c)));
            }
        }
        for a in 0..n {
            for c in 0..n {
                if !b.lt(a, c) {
                    continue;
                }
                for d in 0..n {
                    if !b.lt(c, d) {
                        continue;
                    }
                    let lhs = compose_maps(&self.gen[&(c, d)], &self.gen[&(a, c)], &self.values[a], &self.values[c], &self.values[d]);
                    if !maps_equal(&lhs, &self.gen[&(a, d)], &self.values[a], &self.values[d]) {
                        errors.push(format!(
                            "generization not functorial on {} < {} < {}",
                            lbl(a),
                            lbl(c),
                            lbl(d)
                        ));
                    }
                }
            }
        }
        for a in 0..n {
            let s = b.sigma(a);
            if !is_chain_map(&self.equiv[a], &self.values[a], &self.values[s]) {
                errors.push(format!("equivariant structure at {} is not a chain map", lbl(a)));
                continue;
            }
            // cocycle: p consecutive transports return to the identity
            let mut acc = identity_map(&self.values[a]);
            let mut cur = a;
            for _ in 0..b.p() {
                let nxt = b.sigma(cur);
                acc = compose_maps(&self.equiv[cur], &acc, &self.values[a], &self.values[cur], &self.values[nxt]);
                cur = nxt;
            }
            if !maps_equal(&acc, &identity_map(&self.values[a]), &self.values[a], &self.values[a]) {
                errors.push(format!("equivariant structure fails the cocycle condition at {}", lbl(a)));
            }
        }
        for (&(a, c), g) in &self.gen {
            let (sa, sc) = (b.sigma(a), b.sigma(c));
            let lhs = compose_maps(&self.equiv[c], g, &self.values[a], &self.values[c], &self.values[sc]);
            let rhs = compose_maps(&self.gen[&(sa, sc)], &self.equiv[a], &self.values[a], &self.values[sa], &self.values[sc]);
            if !maps_equal(&lhs, &rhs, &self.values[a], &self.values[sc]) {
                errors.push(format!("equivariant structure does not commute with {} < {}", lbl(a), lbl(c)));
            }
        }
        ValidationReport { errors }
    }

    pub fn base(&self) -> &StratPoset {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn value(&self, i: usize) -> &PiComplex {
        &self.values[i]
    }

    pub fn values(&self) -> &[PiComplex] {
        &self.values
    }

    /// gen(λ ⪯ μ); the identity when λ = μ.
    pub fn gen(&self, a: usize, b: usize) -> ChainComps {
        if a == b {
            return identity_map(&self.values[a]);
        }
        self.gen.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn gen_ref(&self, a: usize, b: usize) -> Option<&ChainComps> {
        self.gen.get(&(a, b))
    }

    pub fn gen_map(&self) -> &BTreeMap<(usize, usize), ChainComps> {
        &self.gen
    }

    pub fn equiv(&self, i: usize) -> &ChainComps {
        &self.equiv[i]
    }

    /// Transport values(σλ) -> values(λ), the composite of the other p - 1 transports.
    pub fn equiv_inverse(&self, i: usize) -> ChainComps {
        let b = &self.base;
        let start = b.sigma(i);
        let mut acc = identity_map(&self.values[start]);
        let mut cur = start;
        for _ in 0..b.p() - 1 {
            let nxt = b.sigma(cur);
            acc = compose_maps(&self.equiv[cur], &acc, &self.values[start], &self.values[cur], &self.values[nxt]);
            cur = nxt;
        }
        debug_assert_eq!(cur, i);
        acc
    }

    /// The stalk at λ: values(λ), with its ϖ-action when λ is σ-fixed.
    pub fn stalk(&self, i: usize) -> Result<PiComplex> {
        let v = &self.values[i];
        if !self.base.is_fixed(i) || v.is_zero() {
            return Ok(v.clone());
        }
        v.with_actions(&self.equiv[i])
    }

    pub fn stalk_by_label(&self, label: &str) -> Result<PiComplex> {
        self.stalk(self.base.index_of(label)?)
    }

    pub fn is_trivially_equivariant(&self) -> bool {
        self.base.has_trivial_action()
            && (0..self.base.len()).all(|i| maps_equal(&self.equiv[i], &identity_map(&self.values[i]), &self.values[i], &self.values[i]))
    }

    /// Restriction to a subset of strata (an up-set, a down-set, or any locally closed set).
    /// The equivariant structure is kept when the subset is σ-stable and dropped otherwise.
    pub fn restrict(&self, set: &[usize]) -> CellSheafComplex {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let stable = self.base.is_stable(&set);
        let base = self.base.subposet(&set);
        let values = set.iter().map(|&i| self.values[i].clone()).collect();
        let mut gen = BTreeMap::new();
        for (x, &a) in set.iter().enumerate() {
            for (y, &b) in set.iter().enumerate() {
                if self.base.lt(a, b) {
                    gen.insert((x, y), self.gen[&(a, b)].clone());
                }
            }
        }
        let equiv = if stable {
            set.iter().map(|&i| self.equiv[i].clone()).collect()
        } else {
            set.iter().map(|&i| identity_map(&self.values[i])).collect()
        };
        CellSheafComplex { base, values, gen, equiv }
    }

    /// Zero outside `set`; `self` lives on the subposet of `ambient` with matching labels.
    pub fn extend_by_zero(&self, ambient: &StratPoset) -> Result<CellSheafComplex> {
        let p = ambient.p();
        let pos: Vec<usize> = ambient.indices_of(self.base.labels())?;
        let mut inv = vec![None; ambient.len()];
        for (x, &a) in pos.iter().enumerate() {
            inv[a] = Some(x);
        }
        let values = (0..ambient.len())
            .map(|a| inv[a].map_or_else(|| PiComplex::zero(p), |x| self.values[x].clone()))
            .collect();
        let mut gen = BTreeMap::new();
        for a in 0..ambient.len() {
            for b in 0..ambient.len() {
                if ambient.lt(a, b) {
                    let m = match (inv[a], inv[b]) {
                        (Some(x), Some(y)) => self.gen[&(x, y)].clone(),
                        _ => ChainComps::new(),
                    };
                    gen.insert((a, b), m);
                }
            }
        }
        let equiv = (0..ambient.len())
            .map(|a| match inv[a] {
                Some(x) => self.equiv[x].clone(),
                None => ChainComps::new(),
            })
            .collect();
        let out = CellSheafComplex { base: ambient.clone(), values, gen, equiv };
        let rep = out.validate();
        if !rep.is_ok() {
            return Err(Error::InvalidSheaf(rep.errors.join("; ")));
        }
        Ok(out)
    }

    pub fn shift(&self, k: i64) -> CellSheafComplex {
        let rekey = |m: &ChainComps| m.iter().map(|(n, x)| (n - k, x.clone())).collect::<ChainComps>();
        CellSheafComplex {
            base: self.base.clone(),
            values: self.values.iter().map(|v| cx_shift(v, k)).collect(),
            gen: self.gen.iter().map(|(e, m)| (*e, rekey(m))).collect(),
            equiv: self.equiv.iter().map(rekey).collect(),
        }
    }

    pub fn direct_sum(&self, other: &CellSheafComplex) -> Result<CellSheafComplex> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let sum_map = |f: &ChainComps, g: &ChainComps, a1: &PiComplex, b1: &PiComplex, a2: &PiComplex, b2: &PiComplex| {
            let lo = a1.bot().min(a2.bot());
            let hi = a1.top().max(a2.top());
            (lo..=hi)
                .map(|n| {
                    (
                        n,
                        IntMatrix::block_diag(&[&map_component(f, a1, b1, n), &map_component(g, a2, b2, n)]),
                    )
                })
                .collect::<ChainComps>()
        };
        let n = self.base.len();
        let values: Vec<PiComplex> =
            (0..n).map(|i| cx_sum(&self.values[i], &other.values[i])).collect::<Result<_>>()?;
        let gen = self
            .gen
            .keys()
            .map(|&(a, b)| {
                (
                    (a, b),
                    sum_map(&self.gen[&(a, b)], &other.gen[&(a, b)], &self.values[a], &self.values[b], &other.values[a], &other.values[b]),
                )
            })
            .collect();
        let equiv = (0..n)
            .map(|i| {
                let s = self.base.sigma(i);
                sum_map(&self.equiv[i], &other.equiv[i], &self.values[i], &self.values[s], &other.values[i], &other.values[s])
            })
            .collect();
        Ok(CellSheafComplex { base: self.base.clone(), values, gen, equiv })
    }

    /// Same sheaf with the identity equivariant structure on a poset with trivial action
    /// (inflation along the counit).
    pub fn eps_push(&self) -> Result<CellSheafComplex> {
        if !self.base.has_trivial_action() {
            return Err(Error::InvalidSheaf("inflation needs a poset with trivial action".into()));
        }
        Ok(CellSheafComplex {
            equiv: self.values.iter().map(identity_map).collect(),
            ..self.clone()
        })
    }

    /// Underlying sheaf: identity action on the poset and trivial equivariant structure.
    pub fn forget_action(&self) -> CellSheafComplex {
        CellSheafComplex {
            base: self.base.without_action(),
            values: self.values.clone(),
            gen: self.gen.clone(),
            equiv: self.values.iter().map(identity_map).collect(),
        }
    }

    /// Same data on a poset with a different pariversity.
    pub fn with_base(&self, base: StratPoset) -> Result<CellSheafComplex> {
        if base.labels() != self.base.labels() || base.action() != self.base.action() {
            return Err(Error::BaseMismatch);
        }
        for a in 0..base.len() {
            for b in 0..base.len() {
                if base.le(a, b) != self.base.le(a, b) {
                    return Err(Error::BaseMismatch);
                }
            }
        }
        Ok(CellSheafComplex { base, ..self.clone() })
    }

    /// Strata where some value is nonzero.
    pub fn value_support(&self) -> Vec<usize> {
        (0..self.base.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }
}

/// A degree-0 morphism of sheaf complexes, one chain map per stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism {
    pub src: CellSheafComplex,
    pub tgt: CellSheafComplex,
    pub components: Vec<ChainComps>,
}

impl SheafMorphism {
    pub fn new(src: CellSheafComplex, tgt: CellSheafComplex, components: Vec<ChainComps>) -> Result<Self> {
        let f = SheafMorphism { src, tgt, components };
        let rep = f.validate();
        if !rep.is_ok() {
            return Err(Error::InvalidSheaf(rep.errors.join("; ")));
        }
        Ok(f)
    }

    pub fn identity(f: &CellSheafComplex) -> Self {
        SheafMorphism {
            src: f.clone(),
            tgt: f.clone(),
            components: f.values.iter().map(identity_map).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        if self.src.base != self.tgt.base {
            errors.push("morphism between sheaves on different bases".into());
            return ValidationReport { errors };
        }
        let b = &self.src.base;
        for i in 0..b.len() {
            if !is_chain_map(&self.components[i], &self.src.values[i], &self.tgt.values[i]) {
                errors.push(format!("component at {} is not a chain map", b.label(i)));
            }
            let s = b.sigma(i);
            let (v, w) = (&self.src.values, &self.tgt.values);
            let lhs = compose_maps(&self.tgt.equiv[i], &self.components[i], &v[i], &w[i], &w[s]);
            let rhs = compose_maps(&self.components[s], &self.src.equiv[i], &v[i], &v[s], &w[s]);
            if !maps_equal(&lhs, &rhs, &v[i], &w[s]) {
                errors.push(format!("component at {} is not equivariant", b.label(i)));
            }
        }
        for &(a, c) in self.src.gen.keys() {
            let (v, w) = (&self.src.values, &self.tgt.values);
            let lhs = compose_maps(&self.tgt.gen[&(a, c)], &self.components[a], &v[a], &w[a], &w[c]);
            let rhs = compose_maps(&self.components[c], &self.src.gen[&(a, c)], &v[a], &v[c], &w[c]);
            if !maps_equal(&lhs, &rhs, &v[a], &w[c]) {
                errors.push(format!("morphism does not commute with {} < {}", b.label(a), b.label(c)));
            }
        }
        ValidationReport { errors }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> StratPoset {
        StratPoset::simple(3, &["a", "b", "c"], &[("a", "b"), ("b", "c")], &[0, 1, 2]).unwrap()
    }

    #[test]
    fn constant_is_valid() {
        let f = CellSheafComplex::constant_z(&chain3());
        assert!(f.validate().is_ok());
        assert_eq!(f.gen(0, 2), identity_map(f.value(0)));
    }

    #[test]
    fn broken_functoriality_is_reported() {
        let base = chain3();
        let z = PiComplex::single(PiModule::trivial(3, 1), 0);
        let one = identity_map(&z);
        let two: ChainComps = [(0, IntMatrix::scalar(1, 2))].into_iter().collect();
        let gen = [((0, 1), one.clone()), ((1, 2), one.clone()), ((0, 2), two)].into_iter().collect();
        let f = CellSheafComplex::raw(base, vec![z.clone(), z.clone(), z], gen, None).unwrap();
        let rep = f.validate();
        assert!(rep.errors.iter().any(|e| e.contains("functorial")), "{rep:?}");
    }

    #[test]
    fn broken_cocycle_is_reported() {
        let base = StratPoset::simple(3, &["a"], &[], &[0]).unwrap();
        let z = PiComplex::single(PiModule::trivial(3, 1), 0);
        let eq: ChainComps = [(0, IntMatrix::scalar(1, -1))].into_iter().collect();
        let f = CellSheafComplex::raw(base, vec![z], BTreeMap::new(), Some(vec![eq])).unwrap();
        assert!(f.validate().errors.iter().any(|e| e.contains("cocycle")));
    }

    #[test]
    fn extend_then_restrict() {
        let base = chain3();
        let f = CellSheafComplex::constant_z(&base);
        let u = f.restrict(&[1, 2]);
        let back = u.extend_by_zero(&base).unwrap();
        assert!(back.value(0).is_zero());
        assert_eq!(back.restrict(&[1, 2]), u);
        let z = f.restrict(&[0, 1]);
        let pushed = z.extend_by_zero(&base).unwrap();
        assert_eq!(pushed.restrict(&[0, 1]), z);
    }
}
