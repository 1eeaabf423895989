//! The E₂ bound for Tate hypercohomology and surjectivity of the Smith map on homs.

use std::collections::BTreeMap;

use serde::Serialize;

use super::fpsheaf::{fp_sections, FpSheaf};
use crate::error::Result;
use crate::linalg::FpMatrix;
use crate::stratsheaf::{sections, CellSheafComplex, EndHom};
use crate::tate::{stable_level, tate_dims, SlotModel, TateDims, TateSpace};

#[derive(Clone, Debug, Serialize)]
pub struct HypercoReport {
    /// dim H^a(P^σ; T^b F) indexed by (a, b).
    pub e2: BTreeMap<String, usize>,
    pub e2_even: usize,
    pub e2_odd: usize,
    pub abutment: TateDims,
    pub bound_holds: bool,
    /// E₂ sits in one total parity, so no differential can be nonzero.
    pub collapse_forced: bool,
    pub equality: bool,
}

/// The Tate cohomology sheaves T^0 F, T^1 F on the fixed subposet.
pub fn tate_sheaves(f: &CellSheafComplex) -> Result<[FpSheaf; 2]> {
    let base = f.base();
    let fixed = base.fixed_points();
    let sub = base.subposet(&fixed).without_action();
    let spaces: Vec<TateSpace> = fixed.iter().map(|&i| TateSpace::new(&f.stalk(i)?)).collect::<Result<_>>()?;
    let p = f.p();
    let build = |b: i64| {
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim(b)).collect();
        let mut gen = BTreeMap::new();
        for (x, &i) in fixed.iter().enumerate() {
            for (y, &j) in fixed.iter().enumerate() {
                if base.lt(i, j) {
                    gen.insert((x, y), spaces[x].induced_map(&spaces[y], &f.gen(i, j), 0, b));
                }
            }
        }
        FpSheaf::of_spaces(&sub, p, &dims, &gen)
    };
    Ok([build(0), build(1)])
}

pub fn hyperco_check(f: &CellSheafComplex) -> Result<HypercoReport> {
    f.validate().into_result()?;
    let all: Vec<usize> = (0..f.base().len()).collect();
    let abutment = tate_dims(&sections(f, &all)?);
    let mut e2 = BTreeMap::new();
    let (mut even, mut odd) = (0, 0);
    if !f.base().fixed_points().is_empty() {
        for (b, sheaf) in tate_sheaves(f)?.iter().enumerate() {
            for (a, d) in fp_sections(sheaf).cohomology_dims() {
                if d == 0 {
                    continue;
                }
                e2.insert(format!("{a},{b}"), d);
                if (a + b as i64).rem_euclid(2) == 0 {
                    even += d;
                } else {
                    odd += d;
                }
            }
        }
    }
    let bound_holds = even + odd >= abutment.t0 + abutment.t1 && even >= abutment.t0 && odd >= abutment.t1;
    let collapse_forced = even == 0 || odd == 0;
    let equality = even == abutment.t0 && odd == abutment.t1;
    Ok(HypercoReport { e2, e2_even: even, e2_odd: odd, abutment, bound_holds, collapse_forced, equality })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub source_degrees: Vec<i64>,
    pub image_dim: usize,
    pub target_dim: usize,
    pub surjective: bool,
}

/// Image of ⊕_{i>=0} Hom(E, E'[2i]) in Hom_Tate(Psm E, Psm E').
pub fn psm_hom_surjectivity_check(e: &CellSheafComplex, e2: &CellSheafComplex) -> Result<SurjectivityReport> {
    let fixed = e.base().fixed_points();
    if fixed.is_empty() {
        return Ok(SurjectivityReport { source_degrees: vec![], image_dim: 0, target_dim: 0, surjective: true });
    }
    let hom = EndHom::new(e, e2)?;
    let sub = EndHom::new(&e.restrict(&fixed), &e2.restrict(&fixed))?;
    let target = TateSpace::new(sub.complex())?;
    let target_dim = target.dim(0);
    let restrict = hom.restriction_map(&sub, &fixed);
    let inv = SlotModel::invariants(hom.complex());
    let top = stable_level(hom.complex()) + 2;
    let mut cols = Vec::new();
    let mut degrees = Vec::new();
    let mut n = 0;
    while n <= top {
        degrees.push(n);
        let cs = inv.classes(n)?;
        for z in cs.cocycle_basis() {
            let elem = inv.from_flat(n, &z).periodic_shift(-n / 2);
            let img = SlotModel::tate(hom.complex()).push_forward(target.model(), &restrict, 0, &elem);
            cols.push(target.coords(&img));
        }
        n += 2;
    }
    let image_dim = if cols.is_empty() || target_dim == 0 { 0 } else { FpMatrix::from_columns(e.p(), target_dim, &cols).rank() };
    Ok(SurjectivityReport { source_degrees: degrees, image_dim, target_dim, surjective: image_dim == target_dim })
}
