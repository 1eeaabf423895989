use super::*;
use crate::examples::{flagship, flagship_trivial, point, suspension, triangle_boundary, two_chain};
use crate::homcx::{direct_sum, mod_p_object, shift};
use crate::pimod::PiModule;
use crate::stratsheaf::StratPoset;

fn on_point(c: PiComplex) -> CellSheafComplex {
    CellSheafComplex::constant_equivariant(&point(3), &c).unwrap()
}

fn z() -> PiComplex {
    PiComplex::single(PiModule::trivial(3, 1), 0)
}

#[test]
fn point_parity() {
    let f = CellSheafComplex::constant_z(&point(3));
    assert_eq!(check_parity(&f, Coefficients::Integral).unwrap().verdict, GlobalVerdict::Even);
    assert_eq!(check_parity(&f.shift(1), Coefficients::Integral).unwrap().verdict, GlobalVerdict::Odd);
    let torsion = on_point(mod_p_object(3).unwrap());
    assert_eq!(check_parity(&torsion, Coefficients::Integral).unwrap().verdict, GlobalVerdict::None);
    // mod p the torsion object is F_p in degrees -1 and 0
    assert_eq!(check_parity(&torsion, Coefficients::Fp).unwrap().verdict, GlobalVerdict::None);
}

#[test]
fn flagship_integral_parity_fails_on_edges() {
    let f = flagship(3).unwrap();
    let rep = check_parity(&f, Coefficients::Integral).unwrap();
    assert_eq!(rep.stratum("n").unwrap().verdict, Verdict::Even);
    assert_eq!(rep.stratum("s").unwrap().verdict, Verdict::Even);
    assert_eq!(rep.stratum("n,a,b").unwrap().verdict, Verdict::Even);
    assert_eq!(rep.stratum("a,b").unwrap().verdict, Verdict::Neither);
    assert_eq!(rep.verdict, GlobalVerdict::None);
}

#[test]
fn tate_parity_of_points() {
    let odd = on_point(PiComplex::single(PiModule::norm_quotient(3), 0));
    assert_eq!(check_tate_parity(&odd).unwrap().verdict, GlobalVerdict::Odd);
    let free = on_point(PiComplex::single(PiModule::regular(3, 1), 0));
    assert_eq!(check_tate_parity(&free).unwrap().verdict, GlobalVerdict::Zero);
    let torsion = on_point(mod_p_object(3).unwrap());
    let rep = check_tate_parity(&torsion).unwrap();
    assert_eq!(rep.strata[0].verdict, Verdict::Neither);
    assert_eq!(rep.verdict, GlobalVerdict::Parity);
}

#[test]
fn flagship_is_tate_even() {
    let rep = check_tate_parity(&flagship(3).unwrap()).unwrap();
    assert_eq!(rep.verdict, GlobalVerdict::Even);
    let edge = rep.stratum("a,b").unwrap();
    assert!(!edge.fixed);
    assert_eq!(edge.star.tate, Some(TateDims { t0: 0, t1: 0 }));
    let pole = rep.stratum("n").unwrap();
    assert_eq!(pole.shriek.tate, Some(TateDims { t0: 1, t1: 0 }));
}

#[test]
fn inflation_of_even_is_tate_even() {
    let f = CellSheafComplex::constant_z(&two_chain(3, 2));
    assert_eq!(check_parity(&f, Coefficients::Integral).unwrap().verdict, GlobalVerdict::Even);
    assert_eq!(check_tate_parity(&eps_push(&f).unwrap()).unwrap().verdict, GlobalVerdict::Even);
}

#[test]
fn smith_on_flagship() {
    let rep = smith(&flagship(3).unwrap()).unwrap();
    assert_eq!(rep.fixed_strata, vec!["n", "s"]);
    assert_eq!(rep.verdict, "smith-iso");
    for r in &rep.rows {
        assert_eq!((r.stalk, r.costalk), (TateDims { t0: 1, t1: 0 }, TateDims { t0: 1, t1: 0 }));
    }
    assert_eq!(rep.psm.unwrap().base().len(), 2);
}

#[test]
fn smith_without_fixed_points() {
    let free = triangle_boundary(3, [1, 2, 0]).unwrap();
    let rep = smith(&CellSheafComplex::constant_z(&free)).unwrap();
    assert!(rep.fixed_strata.is_empty() && rep.psm.is_none());
    let reg = on_point(PiComplex::single(PiModule::regular(3, 1), 0));
    let rep = smith(&reg).unwrap();
    assert_eq!(rep.rows[0].stalk, TateDims { t0: 0, t1: 0 });
}

#[test]
fn decomposition_multiplicities() {
    let two = on_point(direct_sum(&z(), &z()).unwrap());
    let d = decompose_tate(&two).unwrap();
    assert_eq!(d.summands.len(), 1);
    assert_eq!((d.summands[0].shift, d.summands[0].multiplicity), (0, 2));
    let mixed = on_point(direct_sum(&z(), &shift(&z(), 1)).unwrap());
    let d = decompose_tate(&mixed).unwrap();
    let shifts: Vec<u8> = d.summands.iter().map(|s| s.shift).collect();
    assert_eq!(shifts, vec![0, 1]);
    assert_eq!(d.total_multiplicity(), 2);
}

#[test]
fn flagship_decomposes_at_the_poles() {
    let d = decompose_tate(&flagship(3).unwrap()).unwrap();
    let strata: Vec<&str> = d.summands.iter().map(|s| s.stratum.as_str()).collect();
    assert_eq!(strata, vec!["n", "s"]);
    assert!(d.summands.iter().all(|s| s.shift == 0 && s.multiplicity == 1));
    assert!(!d.local);
}

#[test]
fn decompose_rejects_non_parity() {
    let base = StratPoset::simple(3, &["o"], &[], &[0]).unwrap();
    let bad = CellSheafComplex::constant(&base, &direct_sum(&mod_p_object(3).unwrap(), &PiComplex::single(PiModule::norm_quotient(3), 0)).unwrap());
    match decompose_tate(&bad) {
        Err(Error::NotTateParity(_)) | Ok(_) => {}
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn trivial_flagship_end_is_local() {
    let f = flagship_trivial(3).unwrap();
    assert!(tate_end_is_local(&f).unwrap());
}

#[test]
fn modular_dims_agree() {
    for base in [point(3), two_chain(3, 2), triangle_boundary(3, [0, 1, 2]).unwrap()] {
        let f = CellSheafComplex::constant_z(&base);
        let rep = modular_compare(&f, &f, 4, 7).unwrap();
        assert!(rep.dims_agree, "{:?} vs {:?}", rep.tate_dims, rep.fp_dims);
        assert!(rep.factorization_holds);
        assert!(rep.parity_agrees);
    }
    let circ = CellSheafComplex::constant_z(&triangle_boundary(3, [0, 1, 2]).unwrap());
    assert_eq!(modular_compare(&circ, &circ, 1, 0).unwrap().fp_dims, (1, 1));
}

#[test]
fn lift_gates() {
    let f = CellSheafComplex::constant_z(&suspension(3, false).unwrap());
    assert!(matches!(lift_l(&f, &f), Err(Error::NotNormal(_))));
    let g = CellSheafComplex::constant_z(&two_chain(3, 2));
    let l = lift_l(&g, &g).unwrap();
    let id = l.identity_map();
    let cls = l.tate_class(&id);
    assert!(l.same_class(&l.apply(&cls), &l.reduce_map(&id)));
    let (t, fp) = l.products(&cls, &cls).unwrap();
    assert!(l.same_class(&l.apply(&t), &fp));
}

#[test]
fn lift_is_multiplicative_on_samples() {
    let base = point(3);
    let f = CellSheafComplex::constant(&base, &direct_sum(&z(), &z()).unwrap());
    let l = lift_l(&f, &f).unwrap();
    let maps = l.sample_maps(3, 11);
    for a in &maps {
        for b in &maps {
            let (x, y) = (l.tate_class(a), l.tate_class(b));
            let (t, fp) = l.products(&x, &y).unwrap();
            assert!(l.same_class(&l.apply(&t), &fp));
        }
    }
    assert_eq!(l.image_rank(), l.fp_hom_dim());
}

#[test]
fn hyperco_on_circle_and_point() {
    let circ = CellSheafComplex::constant_z(&triangle_boundary(3, [0, 1, 2]).unwrap()).eps_push().unwrap();
    let rep = hyperco_check(&circ).unwrap();
    assert_eq!((rep.abutment.t0, rep.abutment.t1), (1, 1));
    assert_eq!((rep.e2_even, rep.e2_odd), (1, 1));
    assert!(rep.bound_holds);
    let pt = on_point(z());
    let rep = hyperco_check(&pt).unwrap();
    assert!(rep.equality && rep.collapse_forced);
}

#[test]
fn hyperco_on_flagship() {
    let rep = hyperco_check(&flagship(3).unwrap()).unwrap();
    assert!(rep.bound_holds);
    assert_eq!((rep.e2_even, rep.e2_odd), (2, 0));
    assert!(rep.equality);
}

#[test]
fn psm_surjective_on_flagship() {
    let f = flagship(3).unwrap();
    let rep = psm_hom_surjectivity_check(&f, &f).unwrap();
    assert_eq!(rep.target_dim, 2);
    assert!(rep.surjective);
}
