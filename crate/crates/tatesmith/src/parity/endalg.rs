//! The degree-0 Tate endomorphism algebra of a sheaf complex and its action on the Tate
//! cohomology of stalks and costalks.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{FpAlgebra, FpMatrix, IntMatrix};
use crate::stratsheaf::{identity_map, CellSheafComplex, EndHom, SheafComposition};
use crate::tate::{tate_product, ModelElem, TateSpace};

/// Tate End(F) with product x·y = class of y∘x (composition in diagrammatic order).
pub struct TateEnd {
    sheaf: CellSheafComplex,
    hom: EndHom,
    space: TateSpace,
    algebra: FpAlgebra,
}

/// Tate cohomology of Hom(X, F|S) for a subposet S, acted on by End(F).
struct Probe {
    subset: Vec<usize>,
    module: EndHom,
    module_space: TateSpace,
    end_sub: EndHom,
    end_space: TateSpace,
    restrict: BTreeMap<i64, IntMatrix>,
}

fn unit_class(hom: &EndHom, f: &CellSheafComplex, space: &TateSpace) -> Vec<u64> {
    let maps: Vec<_> = f.values().iter().map(identity_map).collect();
    let v = hom.level_zero_element(0, &maps);
    let mut blocks = BTreeMap::new();
    if !v.is_empty() {
        blocks.insert(0, v);
    }
    space.coords(&ModelElem { degree: 0, blocks })
}

impl TateEnd {
    pub fn new(f: &CellSheafComplex) -> Result<Self> {
        let hom = EndHom::new(f, f)?;
        let space = TateSpace::new(hom.complex())?;
        let pair = SheafComposition::from_parts(hom.clone(), hom.clone(), hom.clone());
        let n = space.dim(0);
        let reps: Vec<ModelElem> = (0..n).map(|i| space.rep(0, i)).collect();
        let products: Vec<Vec<Vec<u64>>> = reps
            .iter()
            .map(|x| reps.iter().map(|y| tate_product(&pair, &space, x, &space, y, &space)).collect())
            .collect();
        let unit = unit_class(&hom, f, &space);
        let algebra = FpAlgebra::new(f.p(), &products, unit)
            .map_err(|e| Error::InvalidInput(format!("Tate endomorphism algebra: {e}")))?;
        Ok(TateEnd { sheaf: f.clone(), hom, space, algebra })
    }

    pub fn algebra(&self) -> &FpAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn space(&self) -> &TateSpace {
        &self.space
    }

    pub fn is_local(&self) -> Result<bool> {
        self.algebra.is_local().map_err(|e| Error::InvalidInput(e.to_string()))
    }

    fn probe(&self, subset: Vec<usize>, source: CellSheafComplex) -> Result<Probe> {
        let fs = self.sheaf.restrict(&subset);
        let module = EndHom::new(&source, &fs)?;
        let module_space = TateSpace::new(module.complex())?;
        let end_sub = EndHom::new(&fs, &fs)?;
        let end_space = TateSpace::new(end_sub.complex())?;
        let restrict = self.hom.restriction_map(&end_sub, &subset);
        Ok(Probe { subset, module, module_space, end_sub, end_space, restrict })
    }

    /// Probe for the stalk at a fixed stratum.
    fn stalk_probe(&self, i: usize) -> Result<Probe> {
        let fs = self.sheaf.restrict(&[i]);
        let unit = CellSheafComplex::constant_z(fs.base());
        self.probe(vec![i], unit)
    }

    /// Probe for the costalk at a fixed stratum.
    fn costalk_probe(&self, i: usize) -> Result<Probe> {
        let up = self.sheaf.base().up_set(i);
        let fs = self.sheaf.restrict(&up);
        let pos = up.iter().position(|&x| x == i).expect("stratum in its star");
        let sky = CellSheafComplex::skyscraper(fs.base(), pos);
        self.probe(up, sky)
    }

    /// Matrices of an element of End(F) acting on T^0 and T^1 of the probe.
    fn act(&self, probe: &Probe, a: &[u64]) -> [FpMatrix; 2] {
        debug_assert!(probe.subset.iter().all(|&i| i < self.sheaf.base().len()));
        let elem = self.space.element(0, a);
        let lifted = self.space.stable_lift(&elem);
        let sub = self.space.model().push_forward(probe.end_space.model(), &probe.restrict, 0, &lifted);
        let pair = SheafComposition::from_parts(probe.module.clone(), probe.end_sub.clone(), probe.module.clone());
        let p = self.sheaf.p();
        [0i64, 1].map(|par| {
            let d = probe.module_space.dim(par);
            let cols: Vec<Vec<u64>> = (0..d)
                .map(|k| {
                    let x = probe.module_space.rep(par, k);
                    tate_product(&pair, &probe.module_space, &x, &probe.end_space, &sub, &probe.module_space)
                })
                .collect();
            FpMatrix::from_columns(p, d, &cols)
        })
    }

    /// Ranks of `a` on T^0, T^1 of the stalk and of the costalk at a fixed stratum.
    pub fn ranks_at(&self, i: usize, elements: &[Vec<u64>]) -> Result<Vec<StratumRanks>> {
        if !self.sheaf.base().is_fixed(i) {
            return Ok(elements.iter().map(|_| StratumRanks::default()).collect());
        }
        let sp = self.stalk_probe(i)?;
        let cp = self.costalk_probe(i)?;
        Ok(elements
            .iter()
            .map(|a| {
                let s = self.act(&sp, a);
                let c = self.act(&cp, a);
                StratumRanks { stalk: [s[0].rank(), s[1].rank()], costalk: [c[0].rank(), c[1].rank()] }
            })
            .collect())
    }

    /// Class of an equivariant degree-0 cocycle of the global hom complex.
    pub fn class_of(&self, v: &[BigInt]) -> Vec<u64> {
        let mut blocks = BTreeMap::new();
        blocks.insert(0, v.to_vec());
        self.space.coords(&ModelElem { degree: 0, blocks })
    }
}

/// Ranks of an endomorphism on T^0/T^1 of a stalk and a costalk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StratumRanks {
    pub stalk: [usize; 2],
    pub costalk: [usize; 2],
}

impl StratumRanks {
    pub fn is_zero(&self) -> bool {
        self.stalk == [0, 0] && self.costalk == [0, 0]
    }
}
