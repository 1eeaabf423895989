//! Bounded cochain complexes of ϖ-lattices and the elementary constructions on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{snf_full, AbelianInvariants, FpMatrix, IntMatrix, Subquotient};
use crate::pimod::{check_prime, hom_module, is_equivariant, same_prime, tensor_module, PiModule};

pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Bounded cochain complex; `terms[i]` sits in degree `bot + i` and `diffs[i]` is the
/// differential out of that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiComplex {
    p: u64,
    bot: i64,
    terms: Vec<PiModule>,
    diffs: Vec<IntMatrix>,
    action_forgotten: bool,
}

impl PiComplex {
    /// Validates shapes, equivariance and d^2 = 0.
    pub fn new(p: u64, bot: i64, terms: Vec<PiModule>, diffs: Vec<IntMatrix>) -> Result<Self> {
        check_prime(p)?;
        let c = Self::assemble(p, bot, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }

    fn assemble(p: u64, bot: i64, terms: Vec<PiModule>, mut diffs: Vec<IntMatrix>) -> Result<Self> {
        if terms.iter().any(|t| t.p() != p) {
            return Err(Error::PrimeMismatch(p, terms.iter().find(|t| t.p() != p).unwrap().p()));
        }
        let want = terms.len().saturating_sub(1);
        if diffs.len() > terms.len() {
            return Err(Error::InvalidComplex("more differentials than terms".into()));
        }
        if diffs.len() > want {
            if diffs[want..].iter().any(|d| !d.is_zero()) {
                return Err(Error::InvalidComplex("differential leaves the support".into()));
            }
            diffs.truncate(want);
        }
        while diffs.len() < want {
            let i = diffs.len();
            diffs.push(IntMatrix::zeros(terms[i + 1].rank(), terms[i].rank()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (terms[i + 1].rank(), terms[i].rank()) {
                return Err(Error::ShapeMismatch(format!(
                    "d^{} is {:?}, expected {}x{}",
                    bot + i as i64,
                    d.shape(),
                    terms[i + 1].rank(),
                    terms[i].rank()
                )));
            }
        }
        let mut c = PiComplex { p, bot, terms, diffs, action_forgotten: false };
        c.trim();
        Ok(c)
    }

    /// Construction from trusted pieces; invariants are asserted in debug builds.
    pub(crate) fn from_parts(p: u64, bot: i64, terms: Vec<PiModule>, diffs: Vec<IntMatrix>) -> Self {
        let c = Self::assemble(p, bot, terms, diffs).expect("well-formed complex");
        debug_assert!(c.validate().is_ok(), "constructed complex failed validation");
        c
    }

    pub fn from_maps(
        p: u64,
        terms: &BTreeMap<i64, PiModule>,
        diffs: &BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        check_prime(p)?;
        let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
            if diffs.values().any(|d| d.rows() * d.cols() > 0) {
                return Err(Error::InvalidComplex("differentials without terms".into()));
            }
            return Ok(Self::zero(p));
        };
        for n in diffs.keys() {
            if *n < lo || *n >= hi {
                let d = &diffs[n];
                if d.rows() * d.cols() > 0 {
                    return Err(Error::InvalidComplex(format!("d^{n} leaves the support")));
                }
            }
        }
        let ts: Vec<PiModule> =
            (lo..=hi).map(|n| terms.get(&n).cloned().unwrap_or_else(|| PiModule::zero(p))).collect();
        let ds: Vec<IntMatrix> = (lo..hi)
            .map(|n| {
                diffs.get(&n).cloned().unwrap_or_else(|| {
                    IntMatrix::zeros(ts[(n + 1 - lo) as usize].rank(), ts[(n - lo) as usize].rank())
                })
            })
            .collect();
        Self::new(p, lo, ts, ds)
    }

    pub fn zero(p: u64) -> Self {
        PiComplex { p, bot: 0, terms: Vec::new(), diffs: Vec::new(), action_forgotten: false }
    }

    pub fn single(m: PiModule, degree: i64) -> Self {
        let p = m.p();
        Self::from_parts(p, degree, vec![m], Vec::new())
    }

    /// Two-term complex `m --d--> n` in degrees `degree`, `degree + 1`.
    pub fn two_term(m: PiModule, n: PiModule, d: IntMatrix, degree: i64) -> Result<Self> {
        let p = m.p();
        Self::new(p, degree, vec![m, n], vec![d])
    }

    fn trim(&mut self) {
        while self.terms.last().is_some_and(|t| t.rank() == 0) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.rank() == 0) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.bot += 1;
        }
        if self.terms.is_empty() {
            self.bot = 0;
            self.diffs.clear();
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, d) in self.diffs.iter().enumerate() {
            let n = self.bot + i as i64;
            if !is_equivariant(d, self.terms[i].action(), self.terms[i + 1].action()) {
                return Err(Error::InvalidComplex(format!("d^{n} is not equivariant")));
            }
            if i + 1 < self.diffs.len() && !self.diffs[i + 1].mul(d).is_zero() {
                return Err(Error::InvalidComplex(format!("d^{} d^{n} != 0", n + 1)));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest degree with a nonzero term (0 for the zero complex).
    pub fn bot(&self) -> i64 {
        self.bot
    }

    /// Highest degree with a nonzero term (-1 for the zero complex).
    pub fn top(&self) -> i64 {
        self.bot + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.bot()..=self.top()
    }

    pub fn amplitude(&self) -> i64 {
        (self.top() - self.bot()).max(0)
    }

    pub fn action_forgotten(&self) -> bool {
        self.action_forgotten
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.bot;
        (i >= 0 && (i as usize) < self.terms.len()).then_some(i as usize)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.terms[i].rank())
    }

    pub fn term(&self, n: i64) -> PiModule {
        self.index(n).map_or_else(|| PiModule::zero(self.p), |i| self.terms[i].clone())
    }

    pub fn term_ref(&self, n: i64) -> Option<&PiModule> {
        self.index(n).map(|i| &self.terms[i])
    }

    pub fn action(&self, n: i64) -> IntMatrix {
        self.index(n).map_or_else(|| IntMatrix::zeros(0, 0), |i| self.terms[i].action().clone())
    }

    /// d^n: C^n -> C^{n+1}, zero outside the support.
    pub fn diff(&self, n: i64) -> IntMatrix {
        match self.index(n) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => IntMatrix::zeros(self.rank(n + 1), self.rank(n)),
        }
    }

    pub fn diff_ref(&self, n: i64) -> Option<&IntMatrix> {
        self.index(n).and_then(|i| self.diffs.get(i))
    }

    pub fn terms(&self) -> &[PiModule] {
        &self.terms
    }

    pub fn is_trivial_action(&self) -> bool {
        self.terms.iter().all(|t| t.is_trivial_action())
    }

    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(|t| t.rank()).sum()
    }

    /// Replaces every action by a new one (same ranks); used for sheaf values.
    pub fn with_actions(&self, actions: &BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let terms = self
            .degrees()
            .map(|n| match actions.get(&n) {
                Some(a) => PiModule::new(self.p, a.clone()),
                None => Ok(self.term(n)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.p, self.bot, terms, self.diffs.clone())
    }

    /// Same lattices, identity action.
    pub fn forget_action(&self) -> Self {
        let terms = self.terms.iter().map(|t| t.forget()).collect();
        let mut c = Self::from_parts(self.p, self.bot, terms, self.diffs.clone());
        c.action_forgotten = true;
        c
    }

    pub fn with_prime(&self, p: u64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| PiModule::new(p, t.action().clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, self.bot, terms, self.diffs.clone())
    }

    /// Integral cohomology in every degree of the support.
    pub fn cohomology(&self) -> Result<BTreeMap<i64, AbelianInvariants>> {
        let mut out = BTreeMap::new();
        for n in self.degrees() {
            let sq = Subquotient::new(&self.diff(n - 1), &self.diff(n))?;
            out.insert(n, sq.invariants());
        }
        Ok(out)
    }

    pub fn subquotient(&self, n: i64) -> Result<Subquotient> {
        Subquotient::new(&self.diff(n - 1), &self.diff(n))
    }
}

/// Which periodic standard complex a window is cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// Weakly injective resolution of Z, degrees >= 0.
    I,
    /// Two-periodic acyclic complex, all degrees.
    T,
    /// Free resolution of Z, degrees <= 0.
    P,
}

/// Regular(1) terms; d^n = 1 - g for even n and N for odd n in 𝔦 and 𝔱. The projective
/// window ends in degree 0 with d^{-1} = 1 - g.
pub fn std_window(kind: WindowKind, p: u64, lo: i64, hi: i64) -> Result<PiComplex> {
    check_prime(p)?;
    if lo > hi {
        return Err(Error::InvalidInput(format!("window [{lo}, {hi}] is empty")));
    }
    let (lo, hi) = match kind {
        WindowKind::I => (lo.max(0), hi),
        WindowKind::T => (lo, hi),
        WindowKind::P => (lo, hi.min(0)),
    };
    if lo > hi {
        return Ok(PiComplex::zero(p));
    }
    let r = PiModule::regular(p, 1);
    let one_minus_g = IntMatrix::identity(p as usize).sub(r.action());
    let norm = r.norm();
    let terms = (lo..=hi).map(|_| r.clone()).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let even = n.rem_euclid(2) == 0;
            let use_one_minus_g = match kind {
                WindowKind::P => !even,
                _ => even,
            };
            if use_one_minus_g {
                one_minus_g.clone()
            } else {
                norm.clone()
            }
        })
        .collect();
    Ok(PiComplex::from_parts(p, lo, terms, diffs))
}

/// f: src -> tgt[shift], component n maps src^n to tgt^{n+shift}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiChainMap {
    pub src: PiComplex,
    pub tgt: PiComplex,
    pub shift: i64,
    pub components: BTreeMap<i64, IntMatrix>,
}

impl PiChainMap {
    pub fn new(
        src: PiComplex,
        tgt: PiComplex,
        shift: i64,
        components: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        same_prime(src.p, tgt.p)?;
        let f = PiChainMap { src, tgt, shift, components };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(c: &PiComplex) -> Self {
        let components = c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect();
        PiChainMap { src: c.clone(), tgt: c.clone(), shift: 0, components }
    }

    pub fn component(&self, n: i64) -> IntMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.tgt.rank(n + self.shift), self.src.rank(n)))
    }

    pub fn validate(&self) -> Result<()> {
        for (n, m) in &self.components {
            if m.shape() != (self.tgt.rank(n + self.shift), self.src.rank(*n)) {
                return Err(Error::ShapeMismatch(format!("component {n} has shape {:?}", m.shape())));
            }
            if m.rows() * m.cols() > 0
                && !is_equivariant(m, &self.src.action(*n), &self.tgt.action(n + self.shift))
            {
                return Err(Error::InvalidComplex(format!("component {n} is not equivariant")));
            }
        }
        let s = sign(self.shift);
        let lo = self.src.bot() - 1;
        let hi = self.src.top() + 1;
        for n in lo..=hi {
            let lhs = self.tgt.diff(n + self.shift).mul(&self.component(n)).scale_i64(s);
            let rhs = self.component(n + 1).mul(&self.src.diff(n));
            if lhs != rhs {
                return Err(Error::InvalidComplex(format!(
                    "chain map fails to commute with differentials at degree {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: &PiChainMap) -> Result<PiChainMap> {
        // self after g
        if g.tgt != self.src {
            return Err(Error::ShapeMismatch("chain maps are not composable".into()));
        }
        let shift = self.shift + g.shift;
        let components = g
            .src
            .degrees()
            .map(|n| (n, self.component(n + g.shift).mul(&g.component(n))))
            .collect();
        PiChainMap::new(g.src.clone(), self.tgt.clone(), shift, components)
    }
}

/// C[n]: (C[n])^k = C^{k+n}, differential multiplied by (-1)^n.
pub fn shift(c: &PiComplex, n: i64) -> PiComplex {
    if c.is_zero() {
        return c.clone();
    }
    let s = sign(n);
    let diffs = c.diffs.iter().map(|d| d.scale_i64(s)).collect();
    let mut out = PiComplex::from_parts(c.p, c.bot - n, c.terms.clone(), diffs);
    out.action_forgotten = c.action_forgotten;
    out
}

pub fn direct_sum(c: &PiComplex, d: &PiComplex) -> Result<PiComplex> {
    same_prime(c.p, d.p)?;
    if c.is_zero() {
        return Ok(d.clone());
    }
    if d.is_zero() {
        return Ok(c.clone());
    }
    let lo = c.bot().min(d.bot());
    let hi = c.top().max(d.top());
    let terms = (lo..=hi)
        .map(|n| PiModule::direct_sum_all(c.p, &[&c.term(n), &d.term(n)]))
        .collect();
    let diffs = (lo..hi).map(|n| IntMatrix::block_diag(&[&c.diff(n), &d.diff(n)])).collect();
    Ok(PiComplex::from_parts(c.p, lo, terms, diffs))
}

/// cone(f)^n = C^{n+1} ⊕ D^n with differential [[-d_C, 0], [f, d_D]].
pub fn cone(f: &PiChainMap) -> Result<PiComplex> {
    if f.shift != 0 {
        return Err(Error::ShapeMismatch("cone needs a degree-0 chain map".into()));
    }
    let (c, d) = (&f.src, &f.tgt);
    let p = c.p;
    if c.is_zero() && d.is_zero() {
        return Ok(PiComplex::zero(p));
    }
    let lo = (c.bot() - 1).min(d.bot());
    let hi = (c.top() - 1).max(d.top());
    let terms: Vec<PiModule> =
        (lo..=hi).map(|n| PiModule::direct_sum_all(p, &[&c.term(n + 1), &d.term(n)])).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let (c1, d0) = (c.rank(n + 1), d.rank(n));
            let (c2, d1) = (c.rank(n + 2), d.rank(n + 1));
            let mut m = IntMatrix::zeros(c2 + d1, c1 + d0);
            m.add_block(0, 0, &c.diff(n + 1), -1);
            m.add_block(c2, 0, &f.component(n + 1), 1);
            m.add_block(c2, c1, &d.diff(n), 1);
            m
        })
        .collect();
    Ok(PiComplex::from_parts(p, lo, terms, diffs))
}

/// Inclusion D -> cone(f) and projection cone(f) -> C[1] (as a shift-1 map into C).
pub fn cone_maps(f: &PiChainMap) -> Result<(PiChainMap, PiChainMap)> {
    let k = cone(f)?;
    let (c, d) = (&f.src, &f.tgt);
    let mut inc = BTreeMap::new();
    for n in d.degrees() {
        let mut m = IntMatrix::zeros(k.rank(n), d.rank(n));
        m.set_block(c.rank(n + 1), 0, &IntMatrix::identity(d.rank(n)));
        inc.insert(n, m);
    }
    let mut proj = BTreeMap::new();
    for n in k.degrees() {
        let mut m = IntMatrix::zeros(c.rank(n + 1), k.rank(n));
        m.set_block(0, 0, &IntMatrix::identity(c.rank(n + 1)));
        proj.insert(n, m);
    }
    let i = PiChainMap::new(d.clone(), k.clone(), 0, inc)?;
    let pr = PiChainMap::new(k, c.clone(), 1, proj)?;
    Ok((i, pr))
}

/// Offsets of the blocks making up one degree of a total complex.
#[derive(Clone, Debug, Default)]
pub(crate) struct Layout<K: Ord + Clone> {
    pub offsets: BTreeMap<K, (usize, usize)>,
    pub order: Vec<K>,
    pub total: usize,
}

impl<K: Ord + Clone> Layout<K> {
    pub fn new() -> Self {
        Layout { offsets: BTreeMap::new(), order: Vec::new(), total: 0 }
    }

    pub fn push(&mut self, key: K, size: usize) {
        self.offsets.insert(key.clone(), (self.total, size));
        self.order.push(key);
        self.total += size;
    }

    pub fn get(&self, key: &K) -> Option<(usize, usize)> {
        self.offsets.get(key).copied()
    }
}

/// Koszul-signed tensor product with diagonal action.
pub fn tensor_complex(c: &PiComplex, d: &PiComplex) -> Result<PiComplex> {
    same_prime(c.p, d.p)?;
    let p = c.p;
    if c.is_zero() || d.is_zero() {
        return Ok(PiComplex::zero(p));
    }
    let lo = c.bot() + d.bot();
    let hi = c.top() + d.top();
    let layout = |n: i64| {
        let mut l = Layout::new();
        for a in c.degrees() {
            let b = n - a;
            if d.rank(b) > 0 && c.rank(a) > 0 {
                l.push(a, c.rank(a) * d.rank(b));
            }
        }
        l
    };
    let mut terms = Vec::new();
    let mut layouts = Vec::new();
    for n in lo..=hi {
        let l = layout(n);
        let parts: Vec<PiModule> = l
            .order
            .iter()
            .map(|&a| tensor_module(c.term_ref(a).unwrap(), d.term_ref(n - a).unwrap()))
            .collect::<Result<_>>()?;
        let refs: Vec<&PiModule> = parts.iter().collect();
        terms.push(PiModule::direct_sum_all(p, &refs));
        layouts.push(l);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let (src, tgt) = (&layouts[(n - lo) as usize], &layouts[(n + 1 - lo) as usize]);
        let mut m = IntMatrix::zeros(tgt.total, src.total);
        for &a in &src.order {
            let b = n - a;
            let (so, _) = src.get(&a).unwrap();
            if let Some((to, _)) = tgt.get(&(a + 1)) {
                let blk = c.diff(a).kron(&IntMatrix::identity(d.rank(b)));
                m.add_block(to, so, &blk, 1);
            }
            if let Some((to, _)) = tgt.get(&a) {
                let blk = IntMatrix::identity(c.rank(a)).kron(&d.diff(b));
                m.add_block(to, so, &blk, sign(a));
            }
        }
        diffs.push(m);
    }
    Ok(PiComplex::from_parts(p, lo, terms, diffs))
}

/// Index layout of hom_complex(C, D) in degree n: blocks keyed by source degree a.
pub fn hom_layout(c: &PiComplex, d: &PiComplex, n: i64) -> BTreeMap<i64, (usize, usize)> {
    let mut out = BTreeMap::new();
    let mut off = 0;
    for a in c.degrees() {
        let sz = c.rank(a) * d.rank(a + n);
        if sz > 0 {
            out.insert(a, (off, sz));
            off += sz;
        }
    }
    out
}

/// E^n = ⊕_a Hom(C^a, D^{a+n}), (Dφ) = d_D φ - (-1)^n φ d_C, conjugation action.
pub fn hom_complex(c: &PiComplex, d: &PiComplex) -> Result<PiComplex> {
    same_prime(c.p, d.p)?;
    let p = c.p;
    if c.is_zero() || d.is_zero() {
        return Ok(PiComplex::zero(p));
    }
    let lo = d.bot() - c.top();
    let hi = d.top() - c.bot();
    let mut terms = Vec::new();
    for n in lo..=hi {
        let lay = hom_layout(c, d, n);
        let parts: Vec<PiModule> = lay
            .keys()
            .map(|&a| hom_module(c.term_ref(a).unwrap(), d.term_ref(a + n).unwrap()))
            .collect::<Result<_>>()?;
        let refs: Vec<&PiModule> = parts.iter().collect();
        terms.push(PiModule::direct_sum_all(p, &refs));
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let src = hom_layout(c, d, n);
        let tgt = hom_layout(c, d, n + 1);
        let rows: usize = tgt.values().map(|x| x.1).sum();
        let cols: usize = src.values().map(|x| x.1).sum();
        let mut m = IntMatrix::zeros(rows, cols);
        for (&a, &(so, _)) in &src {
            // φ_a ∈ Hom(C^a, D^{a+n})
            if let Some(&(to, _)) = tgt.get(&a) {
                // d_D ∘ φ_a ∈ Hom(C^a, D^{a+n+1})
                let blk = IntMatrix::identity(c.rank(a)).kron(&d.diff(a + n));
                m.add_block(to, so, &blk, 1);
            }
            if let Some(&(to, _)) = tgt.get(&(a - 1)) {
                // φ_a ∘ d_C^{a-1} ∈ Hom(C^{a-1}, D^{a+n})
                let blk = c.diff(a - 1).transpose().kron(&IntMatrix::identity(d.rank(a + n)));
                m.add_block(to, so, &blk, -sign(n));
            }
        }
        diffs.push(m);
    }
    Ok(PiComplex::from_parts(p, lo, terms, diffs))
}

/// Packs a family of maps φ_a: C^a -> D^{a+n} into a vector of hom_complex(C, D)^n.
pub fn hom_element(c: &PiComplex, d: &PiComplex, n: i64, maps: &BTreeMap<i64, IntMatrix>) -> Vec<BigInt> {
    let lay = hom_layout(c, d, n);
    let total: usize = lay.values().map(|x| x.1).sum();
    let mut v = vec![BigInt::from(0); total];
    for (a, &(off, _)) in &lay {
        if let Some(f) = maps.get(a) {
            for (k, x) in crate::pimod::hom_vec(f).into_iter().enumerate() {
                v[off + k] = x;
            }
        }
    }
    v
}

/// Inverse of [`hom_element`].
pub fn hom_components(c: &PiComplex, d: &PiComplex, n: i64, v: &[BigInt]) -> BTreeMap<i64, IntMatrix> {
    let lay = hom_layout(c, d, n);
    lay.iter()
        .map(|(&a, &(off, sz))| {
            (a, crate::pimod::hom_unvec(&v[off..off + sz], d.rank(a + n), c.rank(a)))
        })
        .collect()
}

/// Complex of F_p vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpComplex {
    pub p: u64,
    pub bot: i64,
    pub dims: Vec<usize>,
    pub diffs: Vec<FpMatrix>,
}

impl FpComplex {
    pub fn new(p: u64, bot: i64, dims: Vec<usize>, diffs: Vec<FpMatrix>) -> Result<Self> {
        let c = FpComplex { p, bot, dims, diffs };
        for (i, d) in c.diffs.iter().enumerate() {
            if d.shape() != (c.dims[i + 1], c.dims[i]) {
                return Err(Error::ShapeMismatch(format!("F_p differential {i} has shape {:?}", d.shape())));
            }
            if i + 1 < c.diffs.len() && !c.diffs[i + 1].mul(d).is_zero() {
                return Err(Error::InvalidComplex("F_p differential squares to nonzero".into()));
            }
        }
        Ok(c)
    }

    pub fn dim(&self, n: i64) -> usize {
        let i = n - self.bot;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    pub fn diff(&self, n: i64) -> FpMatrix {
        let i = n - self.bot;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize].clone()
        } else {
            FpMatrix::zeros(self.p, self.dim(n + 1), self.dim(n))
        }
    }

    pub fn top(&self) -> i64 {
        self.bot + self.dims.len() as i64 - 1
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        (self.bot..=self.top())
            .map(|n| (n, self.dim(n) - self.diff(n).rank() - self.diff(n - 1).rank()))
            .collect()
    }
}

pub fn modular_reduce(c: &PiComplex) -> FpComplex {
    let dims = c.terms.iter().map(|t| t.rank()).collect();
    let diffs = c.diffs.iter().map(|d| d.reduce_mod(c.p)).collect();
    FpComplex { p: c.p, bot: c.bot, dims, diffs }
}

/// Sublattice of fixed vectors with the restricted differential (identity action).
pub fn fixed_subcomplex(c: &PiComplex) -> PiComplex {
    let p = c.p;
    if c.is_zero() {
        return c.clone();
    }
    let mut bases = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for n in c.degrees() {
        let gm1 = c.term(n).g_minus_one();
        let s = snf_full(&gm1);
        let cols: Vec<usize> = (s.snf.rank..c.rank(n)).collect();
        bases.insert(n, s.snf.v.select_cols(&cols));
        coords.insert(n, s.v_inv.select_rows(&cols));
    }
    let terms = c.degrees().map(|n| PiModule::trivial(p, bases[&n].cols())).collect();
    let diffs = (c.bot()..c.top())
        .map(|n| coords[&(n + 1)].mul(&c.diff(n)).mul(&bases[&n]))
        .collect();
    PiComplex::from_parts(p, c.bot(), terms, diffs)
}

/// Multiplication by an integer as a chain map C -> C.
pub fn scalar_map(c: &PiComplex, k: i64) -> PiChainMap {
    let components = c.degrees().map(|n| (n, IntMatrix::scalar(c.rank(n), k))).collect();
    PiChainMap { src: c.clone(), tgt: c.clone(), shift: 0, components }
}

/// The F_p object: cone of multiplication by p on trivial(1).
pub fn mod_p_object(p: u64) -> Result<PiComplex> {
    let z = PiComplex::single(PiModule::standard(crate::pimod::StdKind::Trivial(1), p)?, 0);
    cone(&scalar_map(&z, p as i64))
}

pub fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pimod::StdKind;

    fn triv(p: u64) -> PiComplex {
        PiComplex::single(PiModule::trivial(p, 1), 0)
    }

    #[test]
    fn windows_match_displays() {
        let t = std_window(WindowKind::T, 3, 0, 1).unwrap();
        let g = PiModule::regular(3, 1);
        assert_eq!(t.diff(0), IntMatrix::identity(3).sub(g.action()));
        let i = std_window(WindowKind::I, 3, 0, 2).unwrap();
        assert_eq!(i.diff(0), IntMatrix::identity(3).sub(g.action()));
        assert_eq!(i.diff(1), g.norm());
        for kind in [WindowKind::I, WindowKind::T, WindowKind::P] {
            let w = std_window(kind, 5, 0, 0).unwrap();
            assert_eq!(w.total_rank(), 5);
            assert!(w.diff(0).rows() == 0);
        }
    }

    #[test]
    fn t_window_interior_acyclic() {
        let t = std_window(WindowKind::T, 5, -3, 4).unwrap();
        let h = t.cohomology().unwrap();
        for n in -2..=3 {
            assert!(h[&n].is_zero(), "degree {n}");
        }
    }

    #[test]
    fn cohomology_basic() {
        let h = triv(3).cohomology().unwrap();
        assert_eq!(h[&0], AbelianInvariants::free(1));
        let k = mod_p_object(3).unwrap();
        let h = k.cohomology().unwrap();
        assert!(h[&-1].is_zero());
        assert_eq!(h[&0].torsion, vec![BigInt::from(3)]);
    }

    #[test]
    fn shift_and_cone_of_identity() {
        let c = mod_p_object(5).unwrap();
        assert_eq!(shift(&c, 0), c);
        let s = shift(&c, 1);
        assert_eq!(s.bot(), c.bot() - 1);
        assert_eq!(s.diff(-2), c.diff(-1).neg());
        let k = cone(&PiChainMap::identity(&triv(3))).unwrap();
        assert!(k.cohomology().unwrap().values().all(|h| h.is_zero()));
    }

    #[test]
    fn tensor_and_hom_units() {
        let c = mod_p_object(3).unwrap();
        assert_eq!(tensor_complex(&c, &triv(3)).unwrap(), c);
        assert_eq!(hom_complex(&triv(3), &triv(3)).unwrap(), triv(3));
        let e = hom_complex(&c, &c).unwrap();
        assert_eq!(e.bot(), -1);
        assert_eq!(e.top(), 1);
        assert_eq!(e.total_rank(), 4);
    }

    #[test]
    fn i_window_group_cohomology() {
        let i = std_window(WindowKind::I, 3, 0, 4).unwrap();
        let h = fixed_subcomplex(&i).cohomology().unwrap();
        assert_eq!(h[&0], AbelianInvariants::free(1));
        assert!(h[&1].is_zero());
        assert_eq!(h[&2].torsion, vec![BigInt::from(3)]);
        assert!(h[&3].is_zero());
        assert_eq!(h[&4].torsion, vec![BigInt::from(3)]);
    }

    #[test]
    fn modular_reduce_t_window() {
        let t = std_window(WindowKind::T, 3, 0, 3).unwrap();
        let f = modular_reduce(&t);
        for n in 0..3 {
            assert!(f.diff(n + 1).mul(&f.diff(n)).is_zero());
        }
        let r = std_window(WindowKind::T, 3, 0, 0).unwrap().forget_action();
        assert!(r.action_forgotten());
        assert!(r.is_trivial_action());
        assert_eq!(modular_reduce(&triv(3)).cohomology_dims()[&0], 1);
    }

    #[test]
    fn hom_element_round_trip() {
        let c = mod_p_object(3).unwrap();
        let e = hom_complex(&c, &c).unwrap();
        let id: BTreeMap<i64, IntMatrix> = c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect();
        let v = hom_element(&c, &c, 0, &id);
        assert!(e.diff(0).mul_vec(&v).iter().all(|x| *x == BigInt::from(0)));
        assert_eq!(hom_components(&c, &c, 0, &v), id);
        let _ = PiModule::standard(StdKind::Regular(1), 3).unwrap();
    }
}
