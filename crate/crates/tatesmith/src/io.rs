//! JSON documents for lattice complexes, sheaf complexes on posets, simplicial complexes
//! with action and weight lists. Integers outside the i64 range are decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::equivsimp::SimplicialPiComplex;
use crate::error::{Error, Result};
use crate::homcx::PiComplex;
use crate::linalg::IntMatrix;
use crate::pimod::{check_prime, PiModule};
use crate::stratsheaf::{identity_map, CellSheafComplex, ChainComps, StratPoset};

/// An integer written as a JSON number or as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(x) => Ok(BigInt::from(*x)),
            JsonInt::Big(s) => BigInt::from_str(s.trim()).map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}"))),
        }
    }
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(x.to_string()),
        }
    }
}

pub type JsonMatrix = Vec<Vec<JsonInt>>;

pub fn matrix_to_json(m: &IntMatrix) -> JsonMatrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(JsonInt::from).collect()).collect()
}

/// Reads a matrix of the expected shape; `[]` stands for any matrix with no entries.
pub fn matrix_from_json(j: &JsonMatrix, rows: usize, cols: usize, what: &str) -> Result<IntMatrix> {
    if j.is_empty() && (rows == 0 || cols == 0) {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if j.len() != rows || j.iter().any(|r| r.len() != cols) {
        let got_cols = j.first().map_or(0, |r| r.len());
        return Err(Error::ShapeMismatch(format!("{what}: expected {rows}x{cols}, got {}x{got_cols}", j.len())));
    }
    let data = j.iter().flatten().map(JsonInt::to_bigint).collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::new(rows, cols, data))
}

fn parse_degree(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("degree key {s:?} is not an integer")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub rank: usize,
    /// Matrix of the generator; omitted for the trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<JsonMatrix>,
}

impl ModuleDoc {
    pub fn to_module(&self, p: u64) -> Result<PiModule> {
        match &self.action {
            None => Ok(PiModule::trivial(p, self.rank)),
            Some(a) => PiModule::new(p, matrix_from_json(a, self.rank, self.rank, "action")?),
        }
    }

    pub fn from_module(m: &PiModule) -> Self {
        ModuleDoc { rank: m.rank(), action: (!m.is_trivial_action()).then(|| matrix_to_json(m.action())) }
    }
}

/// Terms and differentials keyed by degree; `diffs[n]` is d^n from degree n to n + 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexBody {
    #[serde(default)]
    pub terms: BTreeMap<String, ModuleDoc>,
    #[serde(default)]
    pub diffs: BTreeMap<String, JsonMatrix>,
}

impl ComplexBody {
    pub fn to_complex(&self, p: u64) -> Result<PiComplex> {
        let mut terms: BTreeMap<i64, PiModule> = BTreeMap::new();
        for (k, m) in &self.terms {
            if terms.insert(parse_degree(k)?, m.to_module(p)?).is_some() {
                return Err(Error::InvalidInput(format!("degree {k} given twice")));
            }
        }
        terms.retain(|_, m| m.rank() > 0);
        let (Some(&bot), Some(&top)) = (terms.keys().next(), terms.keys().next_back()) else {
            for (k, d) in &self.diffs {
                if d.iter().flatten().any(|x| x.to_bigint().map_or(true, |v| v != BigInt::from(0))) {
                    return Err(Error::InvalidComplex(format!("differential d^{k} between zero terms")));
                }
            }
            return Ok(PiComplex::zero(p));
        };
        let rank = |n: i64| terms.get(&n).map_or(0, |m| m.rank());
        let mut diffs = Vec::new();
        let mut given: BTreeMap<i64, &JsonMatrix> = BTreeMap::new();
        for (k, d) in &self.diffs {
            let n = parse_degree(k)?;
            if n < bot || n >= top {
                if d.iter().flatten().any(|x| x.to_bigint().map_or(true, |v| v != BigInt::from(0))) {
                    return Err(Error::InvalidComplex(format!("differential d^{n} leaves the support")));
                }
                continue;
            }
            given.insert(n, d);
        }
        for n in bot..top {
            diffs.push(match given.get(&n) {
                Some(d) => matrix_from_json(d, rank(n + 1), rank(n), &format!("d^{n}"))?,
                None => IntMatrix::zeros(rank(n + 1), rank(n)),
            });
        }
        let mods = (bot..=top).map(|n| terms.get(&n).cloned().unwrap_or_else(|| PiModule::zero(p))).collect();
        PiComplex::new(p, bot, mods, diffs)
    }

    pub fn from_complex(c: &PiComplex) -> Self {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        if !c.is_zero() {
            for n in c.degrees() {
                if c.rank(n) > 0 {
                    terms.insert(n.to_string(), ModuleDoc::from_module(&c.term(n)));
                }
                let d = c.diff(n);
                if n < c.top() && !d.is_zero() {
                    diffs.insert(n.to_string(), matrix_to_json(&d));
                }
            }
        }
        ComplexBody { terms, diffs }
    }
}

fn maps_to_json(m: &ChainComps) -> BTreeMap<String, JsonMatrix> {
    m.iter().filter(|(_, x)| x.rows() > 0 && x.cols() > 0).map(|(n, x)| (n.to_string(), matrix_to_json(x))).collect()
}

fn maps_from_json(j: &BTreeMap<String, JsonMatrix>, src: &PiComplex, tgt: &PiComplex, what: &str) -> Result<ChainComps> {
    let mut out = ChainComps::new();
    for (k, m) in j {
        let n = parse_degree(k)?;
        let (r, c) = (tgt.rank(n), src.rank(n));
        if r == 0 || c == 0 {
            continue;
        }
        out.insert(n, matrix_from_json(m, r, c, &format!("{what} in degree {n}"))?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    /// Generating relations a ≤ b ("a is in the closure of b").
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    /// Defaults to the length of the longest chain below the element.
    #[serde(default)]
    pub dim: BTreeMap<String, usize>,
    /// Defaults to dim mod 2.
    #[serde(default)]
    pub dagger: BTreeMap<String, u8>,
    /// Image of each element under the generator; missing elements are fixed.
    #[serde(default)]
    pub action: BTreeMap<String, String>,
}

impl PosetDoc {
    pub fn to_poset(&self, p: u64) -> Result<StratPoset> {
        let n = self.elements.len();
        let pos: BTreeMap<&str, usize> = self.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let find = |l: &str| pos.get(l).copied().ok_or_else(|| Error::UnknownStratum(l.to_string()));
        let rel = self.leq.iter().map(|(a, b)| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>>>()?;
        let plain = StratPoset::new(p, self.elements.clone(), &rel, vec![0; n], vec![0; n], (0..n).collect())?;
        let mut height = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| plain.lt(j, i)).count());
        for &i in &order {
            height[i] = (0..n).filter(|&j| plain.lt(j, i)).map(|j| height[j] + 1).max().unwrap_or(0);
        }
        for k in self.dim.keys().chain(self.dagger.keys()).chain(self.action.keys()).chain(self.action.values()) {
            find(k)?;
        }
        let dim: Vec<usize> = self.elements.iter().enumerate().map(|(i, l)| self.dim.get(l).copied().unwrap_or(height[i])).collect();
        let dagger: Vec<u8> = self.elements.iter().enumerate().map(|(i, l)| self.dagger.get(l).copied().unwrap_or((dim[i] % 2) as u8)).collect();
        if let Some(d) = dagger.iter().find(|&&d| d > 1) {
            return Err(Error::InvalidInput(format!("pariversity value {d} is not 0 or 1")));
        }
        let action = self.elements.iter().enumerate().map(|(i, l)| self.action.get(l).map_or(Ok(i), |t| find(t))).collect::<Result<Vec<_>>>()?;
        StratPoset::new(p, self.elements.clone(), &rel, dim, dagger, action)
    }

    pub fn from_poset(b: &StratPoset) -> Self {
        let l = |i: usize| b.label(i).to_string();
        PosetDoc {
            elements: b.labels().to_vec(),
            leq: b.covers().into_iter().map(|(x, y)| (l(x), l(y))).collect(),
            dim: (0..b.len()).map(|i| (l(i), b.dim(i))).collect(),
            dagger: (0..b.len()).map(|i| (l(i), b.dagger(i))).collect(),
            action: (0..b.len()).filter(|&i| b.sigma(i) != i).map(|i| (l(i), l(b.sigma(i)))).collect(),
        }
    }
}

fn gen_key(a: &str, b: &str) -> String {
    format!("{a}<{b}")
}

/// Sheaf complex on a poset. Values are complexes whose action, at a fixed stratum without
/// an `equiv` entry, becomes the equivariant structure there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafBody {
    pub poset: PosetDoc,
    /// Same value at every stratum with identity generization maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<ComplexBody>,
    #[serde(default)]
    pub values: BTreeMap<String, ComplexBody>,
    /// Generization maps keyed "a<b"; between equal values they default to the identity.
    #[serde(default)]
    pub gen: BTreeMap<String, BTreeMap<String, JsonMatrix>>,
    /// Maps F(λ) → F(σλ); default to the value's own action at fixed strata, identity elsewhere.
    #[serde(default)]
    pub equiv: BTreeMap<String, BTreeMap<String, JsonMatrix>>,
}

impl SheafBody {
    pub fn to_sheaf(&self, p: u64) -> Result<CellSheafComplex> {
        let base = self.poset.to_poset(p)?;
        let n = base.len();
        for k in self.values.keys().chain(self.equiv.keys()) {
            base.index_of(k)?;
        }
        if self.constant.is_some() && !self.values.is_empty() {
            return Err(Error::InvalidInput("give either constant or values, not both".into()));
        }
        let values: Vec<PiComplex> = match &self.constant {
            Some(c) => vec![c.to_complex(p)?; n],
            None => (0..n)
                .map(|i| self.values.get(base.label(i)).map_or(Ok(PiComplex::zero(p)), |c| c.to_complex(p)))
                .collect::<Result<_>>()?,
        };
        let plain: Vec<PiComplex> = values.iter().map(|v| if v.is_zero() { v.clone() } else { v.forget_action() }).collect();
        let mut gen = BTreeMap::new();
        let mut seen = BTreeMap::new();
        for (k, m) in &self.gen {
            let (a, b) = k.split_once('<').ok_or_else(|| Error::InvalidInput(format!("generization key {k:?} is not of the form a<b")))?;
            let (a, b) = (base.index_of(a.trim())?, base.index_of(b.trim())?);
            if !base.lt(a, b) {
                return Err(Error::InvalidSheaf(format!("generization given for non-relation {k}")));
            }
            gen.insert((a, b), maps_from_json(m, &plain[a], &plain[b], k)?);
            seen.insert((a, b), ());
        }
        for (a, b) in base.covers() {
            if !seen.contains_key(&(a, b)) && !plain[a].is_zero() && plain[a] == plain[b] {
                gen.insert((a, b), identity_map(&plain[a]));
            }
        }
        let equiv = (0..n)
            .map(|i| {
                let j = base.sigma(i);
                match self.equiv.get(base.label(i)) {
                    Some(m) => maps_from_json(m, &plain[i], &plain[j], &format!("equiv at {}", base.label(i))),
                    None if i == j && !values[i].is_zero() && !values[i].is_trivial_action() => {
                        Ok(values[i].degrees().filter(|&d| values[i].rank(d) > 0).map(|d| (d, values[i].action(d))).collect())
                    }
                    None => Ok(identity_map(&plain[i])),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        CellSheafComplex::new(base, plain, gen, Some(equiv))
    }

    pub fn from_sheaf(f: &CellSheafComplex) -> Self {
        let b = f.base();
        let values = (0..b.len()).filter(|&i| !f.value(i).is_zero()).map(|i| (b.label(i).to_string(), ComplexBody::from_complex(f.value(i)))).collect();
        let gen = b
            .covers()
            .into_iter()
            .filter(|&(x, y)| !f.value(x).is_zero() && !f.value(y).is_zero())
            .map(|(x, y)| (gen_key(b.label(x), b.label(y)), maps_to_json(&f.gen(x, y))))
            .collect();
        let equiv = (0..b.len())
            .filter(|&i| !f.value(i).is_zero())
            .map(|i| (b.label(i).to_string(), maps_to_json(f.equiv(i))))
            .collect();
        SheafBody { poset: PosetDoc::from_poset(b), constant: None, values, gen, equiv }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialBody {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
    #[serde(default)]
    pub action: BTreeMap<String, String>,
}

impl SimplicialBody {
    pub fn to_complex(&self, p: u64) -> Result<SimplicialPiComplex> {
        SimplicialPiComplex::from_labels(p, self.vertices.clone(), &self.simplices, &self.action)
    }

    /// Maximal simplices only.
    pub fn from_complex(x: &SimplicialPiComplex) -> Self {
        let c = x.complex();
        let all = c.simplices();
        let maximal = all.iter().filter(|s| !all.iter().any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v))));
        let name = |v: usize| c.vertices()[v].clone();
        SimplicialBody {
            vertices: c.vertices().to_vec(),
            simplices: maximal.map(|s| s.iter().map(|&v| name(v)).collect()).collect(),
            action: (0..x.action().len()).filter(|&v| x.action()[v] != v).map(|v| (name(v), name(x.action()[v]))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub weight: i64,
    pub mult: u64,
    pub pairing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsBody {
    pub entries: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Body {
    PiComplex(ComplexBody),
    StratSheaf(SheafBody),
    Simplicial(SimplicialBody),
    GrWeights(WeightsBody),
}

/// A typed input document with its prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub p: u64,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed document: {e}")))?;
        check_prime(doc.p)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::PiComplex(_) => "pi_complex",
            Body::StratSheaf(_) => "strat_sheaf",
            Body::Simplicial(_) => "simplicial",
            Body::GrWeights(_) => "gr_weights",
        }
    }

    pub fn complex(&self) -> Result<PiComplex> {
        match &self.body {
            Body::PiComplex(c) => c.to_complex(self.p),
            _ => Err(Error::InvalidInput(format!("expected a pi_complex document, got {}", self.kind()))),
        }
    }

    pub fn sheaf(&self) -> Result<CellSheafComplex> {
        match &self.body {
            Body::StratSheaf(s) => s.to_sheaf(self.p),
            _ => Err(Error::InvalidInput(format!("expected a strat_sheaf document, got {}", self.kind()))),
        }
    }

    pub fn simplicial(&self) -> Result<SimplicialPiComplex> {
        match &self.body {
            Body::Simplicial(s) => s.to_complex(self.p),
            _ => Err(Error::InvalidInput(format!("expected a simplicial document, got {}", self.kind()))),
        }
    }

    pub fn weights(&self) -> Result<&[WeightEntry]> {
        match &self.body {
            Body::GrWeights(w) => Ok(&w.entries),
            _ => Err(Error::InvalidInput(format!("expected a gr_weights document, got {}", self.kind()))),
        }
    }

    pub fn of_complex(c: &PiComplex) -> Self {
        Document { p: c.p(), body: Body::PiComplex(ComplexBody::from_complex(c)) }
    }

    pub fn of_sheaf(f: &CellSheafComplex) -> Self {
        Document { p: f.p(), body: Body::StratSheaf(SheafBody::from_sheaf(f)) }
    }

    pub fn of_simplicial(x: &SimplicialPiComplex) -> Self {
        Document { p: x.p(), body: Body::Simplicial(SimplicialBody::from_complex(x)) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivsimp::samples;
    use crate::examples::{flagship, triangle_boundary};
    use crate::homcx::mod_p_object;
    use crate::testgen::{random_complex, Bounds};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_module_document() {
        let d = Document::parse(r#"{"type":"pi_complex","p":3,"terms":{"0":{"rank":1}}}"#).unwrap();
        assert_eq!(d.complex().unwrap(), PiComplex::single(PiModule::trivial(3, 1), 0));
    }

    #[test]
    fn big_entries_are_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 10;
        let j = serde_json::to_string(&JsonInt::from(&big)).unwrap();
        assert_eq!(j, format!("\"{big}\""));
        let back: JsonInt = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_bigint().unwrap(), big);
        assert_eq!(serde_json::to_string(&JsonInt::from(&BigInt::from(-7))).unwrap(), "-7");
    }

    #[test]
    fn complex_round_trip() {
        let c = mod_p_object(5).unwrap();
        let doc = Document::of_complex(&c);
        let back = Document::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.complex().unwrap(), c);
    }

    #[test]
    fn bad_shapes_are_rejected() {
        let text = r#"{"type":"pi_complex","p":3,"terms":{"0":{"rank":1},"1":{"rank":2}},"diffs":{"0":[[1,2]]}}"#;
        assert!(matches!(Document::parse(text).unwrap().complex(), Err(Error::ShapeMismatch(_))));
        assert!(Document::parse(r#"{"type":"pi_complex","p":3,"bogus":1}"#).is_err());
        let two = r#"{"type":"pi_complex","p":2,"terms":{"0":{"rank":1}}}"#;
        assert!(matches!(Document::parse(two), Err(Error::InvalidPrime(2))));
    }

    #[test]
    fn sheaf_round_trip() {
        for f in [flagship(3).unwrap(), CellSheafComplex::constant_z(&triangle_boundary(5, [0, 1, 2]).unwrap())] {
            let doc = Document::of_sheaf(&f);
            let back = Document::parse(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.sheaf().unwrap(), f);
        }
    }

    #[test]
    fn constant_shorthand_and_defaults() {
        let text = r#"{"type":"strat_sheaf","p":3,
            "poset":{"elements":["a","b"],"leq":[["a","b"]]},
            "constant":{"terms":{"0":{"rank":1}}}}"#;
        let f = Document::parse(text).unwrap().sheaf().unwrap();
        let base = f.base();
        assert_eq!((base.dim(0), base.dim(1), base.dagger(1)), (0, 1, 1));
        assert_eq!(f, CellSheafComplex::constant_z(base));
    }

    #[test]
    fn equivariant_value_on_a_point() {
        let text = r#"{"type":"strat_sheaf","p":3,"poset":{"elements":["o"]},
            "values":{"o":{"terms":{"0":{"rank":3,"action":[[0,0,1],[1,0,0],[0,1,0]]}}}}}"#;
        let f = Document::parse(text).unwrap().sheaf().unwrap();
        assert_eq!(f.stalk(0).unwrap().term(0), PiModule::regular(3, 1));
        assert_eq!(Document::parse(&Document::of_sheaf(&f).to_json()).unwrap().sheaf().unwrap(), f);
    }

    #[test]
    fn simplicial_round_trip() {
        let x = samples::suspension(3);
        let doc = Document::of_simplicial(&x);
        let back = Document::parse(&doc.to_json()).unwrap();
        assert_eq!(back.simplicial().unwrap(), x);
        let text = r#"{"type":"simplicial","p":3,"vertices":["v0","v1","v2"],"simplices":[["v0","v1"],["v1","v2"],["v2","v0"]],"action":{"v0":"v1","v1":"v2","v2":"v0"}}"#;
        assert_eq!(Document::parse(text).unwrap().simplicial().unwrap(), samples::polygon(3));
    }

    #[test]
    fn weights_document() {
        let text = r#"{"type":"gr_weights","p":3,"entries":[{"weight":6,"mult":2,"pairing":12}]}"#;
        let d = Document::parse(text).unwrap();
        assert_eq!(d.weights().unwrap()[0], WeightEntry { weight: 6, mult: 2, pairing: 12 });
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_complexes_round_trip(seed in any::<u64>(), five in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, if five { 5 } else { 3 }, Bounds::default());
            let text = Document::of_complex(&c).to_json();
            prop_assert_eq!(Document::parse(&text).unwrap().complex().unwrap(), c);
        }
    }
}
