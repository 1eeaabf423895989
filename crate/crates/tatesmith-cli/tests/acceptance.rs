//! Acceptance suite: one line per criterion. All comparisons are exact (tolerance 0).

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tatesmith::equivsimp::{samples, smith_localization_check};
use tatesmith::examples::{flagship, flagship_trivial, point, suspension, triangle_boundary, two_chain};
use tatesmith::homcx::{mod_p_object, PiComplex};
use tatesmith::io::WeightEntry;
use tatesmith::parity::{
    check_parity, check_tate_parity, decompose_tate, eps_push, hyperco_check, fp_hom_parity_dims, lift_l, modular_compare, smith, tate_end_is_local,
    Coefficients, FpSheaf, GlobalVerdict,
};
use tatesmith::pimod::PiModule;
use tatesmith::stratsheaf::{costalk, CellSheafComplex};
use tatesmith::tate::{six_term_sequence, stable_hom, tate_cohomology, tate_cohomology_at, TateDims};
use tatesmith::testgen::{random_chain_map, random_complex, random_even_sheaf, Bounds};
use tatesmith_cli::demo_gr_weights;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn dims(c: &PiComplex) -> Result<(usize, usize), String> {
    tate_cohomology(c).map(|t| (t.t0_dim, t.t1_dim)).map_err(|e| e.to_string())
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_point_values() -> Outcome {
    let p = 3;
    expect("trivial(1)", dims(&PiComplex::single(PiModule::trivial(p, 1), 0))?, (1, 0))?;
    for k in 1..=2 {
        expect(&format!("regular({k})"), dims(&PiComplex::single(PiModule::regular(p, k), 0))?, (0, 0))?;
    }
    expect("norm_quotient", dims(&PiComplex::single(PiModule::norm_quotient(p), 0))?, (0, 1))?;
    expect("cone(p)", dims(&mod_p_object(p).map_err(err)?)?, (1, 1))?;
    Ok("trivial (1,0), regular(1..2) (0,0), norm_quotient (0,1), cone(p) (1,1)".into())
}

fn c2_periodicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a7e);
    for i in 0..50 {
        let p = if i % 2 == 0 { 3 } else { 5 };
        let c = random_complex(&mut rng, p, Bounds::default());
        let offset = (i as i64 % 5) - 2;
        let a = tate_cohomology_at(&c, offset).map_err(err)?;
        let b = tate_cohomology_at(&c, offset + 2).map_err(err)?;
        expect(&format!("complex {i} (p={p})"), (a.t0_dim, a.t1_dim), (b.t0_dim, b.t1_dim))?;
    }
    Ok("50 random complexes, p in {3,5}, rank <= 4, amplitude <= 3: windows w and w+2 agree".into())
}

fn c3_six_term() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e7);
    let mut nonzero = 0;
    for i in 0..25 {
        let p = if i % 3 == 2 { 5 } else { 3 };
        let c = random_complex(&mut rng, p, Bounds::default());
        let d = random_complex(&mut rng, p, Bounds::default());
        let f = random_chain_map(&mut rng, &c, &d).map_err(err)?;
        let r = six_term_sequence(&f).map_err(err)?;
        if !r.exact {
            return Err(format!("map {i}: dims {:?} ranks {:?} composites {:?}", r.dims, r.ranks, r.composites_vanish));
        }
        nonzero += usize::from(r.ranks.iter().any(|&x| x > 0));
    }
    Ok(format!("25 random chain maps exact ({nonzero} with a nonzero connecting or induced map)"))
}

fn c4_dual_route() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    for i in 0..25 {
        let p = if i % 3 == 2 { 5 } else { 3 };
        let c = random_complex(&mut rng, p, Bounds::default());
        let d = random_complex(&mut rng, p, Bounds::default());
        let h = stable_hom(&c, &d).map_err(|e| format!("pair {i}: {e}"))?;
        expect(&format!("pair {i}"), h.grading, h.grading_colimit)?;
    }
    Ok("25 random pairs: hom-complex route and colimit route agree".into())
}

fn c5_modular_identity() -> Outcome {
    let bases = [("point", point(3)), ("2-chain", two_chain(3, 2)), ("boundary of triangle", triangle_boundary(3, [0, 1, 2]).map_err(err)?)];
    let mut parts = Vec::new();
    for (name, base) in bases {
        let f = CellSheafComplex::constant_z(&base);
        let r = modular_compare(&f, &f, 0, 0).map_err(err)?;
        expect(name, (r.tate_dims.t0, r.tate_dims.t1), r.fp_dims)?;
        parts.push(format!("{name} {:?}", r.fp_dims));
    }
    Ok(parts.join(", "))
}

fn c6_smith_localization() -> Outcome {
    let cases = [
        ("free 3-gon", samples::polygon(3), (0, 0)),
        ("suspension of 3-gon", samples::suspension(3), (2, 0)),
        ("fixed point", samples::point(3), (1, 0)),
    ];
    for (name, x, want) in &cases {
        let r = smith_localization_check(&x.regularize().0).map_err(err)?;
        expect(&format!("{name} Tate side"), (r.tate.t0, r.tate.t1), *want)?;
        expect(&format!("{name} fixed side"), (r.fixed.t0, r.fixed.t1), *want)?;
    }
    let mut all: Vec<_> = cases.iter().map(|c| c.1.clone()).collect();
    all.extend([samples::polygon(5), samples::rotated_simplex(), samples::triangle_boundary(3)]);
    for x in &all {
        let (y, _) = x.regularize();
        let r = smith_localization_check(&y).map_err(err)?;
        if !r.euler_congruent {
            return Err(format!("Euler characteristics {} and {} differ mod {}", r.euler, r.euler_fixed, y.p()));
        }
    }
    Ok(format!("(0,0)/(0,0), (2,0)/(2,0), (1,0)/(1,0); Euler congruence on {} regularized inputs", all.len()))
}

fn c7_flagship_smith() -> Outcome {
    let f = flagship(3).map_err(err)?;
    let r = smith(&f).map_err(err)?;
    expect("verdict", r.verdict.as_str(), "smith-iso")?;
    for row in &r.rows {
        expect(&format!("{} stalk", row.stratum), row.stalk, TateDims { t0: 1, t1: 0 })?;
        expect(&format!("{} costalk", row.stratum), row.costalk, TateDims { t0: 1, t1: 0 })?;
        let i = f.base().index_of(&row.stratum).map_err(err)?;
        let h = costalk(&f, i).map_err(err)?.cohomology().map_err(err)?;
        let nonzero: Vec<(i64, usize)> = h.iter().filter(|(_, a)| !a.is_zero()).map(|(&n, a)| (n, a.free_rank)).collect();
        expect(&format!("{} costalk cohomology", row.stratum), nonzero, vec![(2, 1)])?;
    }
    expect("fixed strata", r.fixed_strata.len(), 2)?;
    Ok("smith-iso at n and s: stalk (1,0), costalk Z[-2] giving (1,0)".into())
}

fn c8_parity_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7e4);
    for i in 0..12 {
        let f = random_even_sheaf(&mut rng, 3);
        let v = check_parity(&f, Coefficients::Integral).map_err(err)?.verdict;
        if !matches!(v, GlobalVerdict::Even | GlobalVerdict::Zero) {
            return Err(format!("generated sheaf {i} is not even ({v:?})"));
        }
        expect(&format!("Tate parity of inflated sheaf {i}"), check_tate_parity(&eps_push(&f).map_err(err)?).map_err(err)?.verdict, GlobalVerdict::Even)?;
    }
    let local = tate_end_is_local(&flagship_trivial(3).map_err(err)?).map_err(err)?;
    expect("Tate End of the inflated flagship is local", local, true)?;
    let rotated_blocks = decompose_tate(&flagship(3).map_err(err)?).map_err(err)?.summands.len();
    let f = CellSheafComplex::constant_z(&two_chain(3, 2)).eps_push().map_err(err)?;
    let d = decompose_tate(&f.direct_sum(&f.shift(1)).map_err(err)?).map_err(err)?;
    let shifts: Vec<u8> = d.summands.iter().map(|s| s.shift).collect();
    expect("shifts of F + F[1]", shifts, vec![0, 1])?;
    Ok(format!(
        "12 generated even sheaves Tate-even after inflation; inflated flagship End local; F+F[1] labels shift 0 and 1 \
         (rotated flagship splits into {rotated_blocks} pole summands)"
    ))
}

fn c9_lift() -> Outcome {
    let base = point(3);
    let z = PiComplex::single(PiModule::trivial(3, 1), 0);
    let zz = tatesmith::homcx::direct_sum(&z, &z).map_err(err)?;
    let inputs = [CellSheafComplex::constant_z(&two_chain(3, 2)), CellSheafComplex::constant(&base, &zz)];
    let mut checked = 0;
    for (k, f) in inputs.iter().enumerate() {
        let l = lift_l(f, f).map_err(err)?;
        let (src, red) = (l.source_object(), FpSheaf::reduce(f));
        let shape = |s: &FpSheaf| (0..s.base().len()).map(|i| s.value(i).cohomology_dims()).collect::<Vec<_>>();
        expect(&format!("input {k}: stalks of L(T eps F) against F_p F"), shape(&src), shape(&red))?;
        expect(&format!("input {k}: self-homs of L(T eps F) against F_p F"), fp_hom_parity_dims(&src, &src), fp_hom_parity_dims(&red, &red))?;
        expect(&format!("input {k}: rank of L on H^0"), l.image_rank(), l.fp_hom_dim())?;
        for (j, m) in l.sample_maps(10, 0x11 + k as u64).iter().enumerate() {
            if !l.same_class(&l.apply(&l.tate_class(m)), &l.reduce_map(m)) {
                return Err(format!("input {k}, sample {j}: L(T eps f) differs from the reduction of f"));
            }
            checked += 1;
        }
    }
    Ok(format!("objects agree; {checked} sampled morphisms factor through L"))
}

fn c10_weights() -> Outcome {
    let w = |weight, mult, pairing| WeightEntry { weight, mult, pairing };
    let (k, d) = demo_gr_weights(3, &[w(6, 2, 12)]).map_err(err)?;
    expect("[(6,2,12)]", (k, d.len()), (vec![w(2, 2, 4)], 0))?;
    let (k, d) = demo_gr_weights(3, &[w(5, 1, 10)]).map_err(err)?;
    expect("[(5,1,10)]", (k.len(), d.len()), (0, 1))?;
    let (k, d) = demo_gr_weights(3, &[]).map_err(err)?;
    expect("[]", (k.len(), d.len()), (0, 0))?;
    Ok("(6,2,12) -> (2,2,4); (5,1,10) dropped; empty -> empty".into())
}

fn c11_hyperco() -> Outcome {
    let cases: Vec<(&str, CellSheafComplex, bool)> = vec![
        ("point", CellSheafComplex::constant_z(&point(3)), true),
        ("2-chain", CellSheafComplex::constant_z(&two_chain(3, 2)), true),
        ("flagship", flagship(3).map_err(err)?, true),
        ("boundary of triangle", CellSheafComplex::constant_z(&triangle_boundary(3, [0, 1, 2]).map_err(err)?), false),
        ("free triangle", CellSheafComplex::constant_z(&triangle_boundary(3, [1, 2, 0]).map_err(err)?), false),
        ("unrotated suspension", CellSheafComplex::constant_z(&suspension(3, false).map_err(err)?), false),
    ];
    let mut eq = Vec::new();
    for (name, f, collapse) in &cases {
        let r = hyperco_check(f).map_err(err)?;
        if !r.bound_holds {
            return Err(format!("{name}: E2 ({}, {}) below abutment {:?}", r.e2_even, r.e2_odd, r.abutment));
        }
        if *collapse {
            expect(&format!("{name} equality"), r.equality, true)?;
            eq.push(*name);
        }
    }
    Ok(format!("bound on {} examples; equality on {}", cases.len(), eq.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("point-case Tate values", c1_point_values),
        ("periodicity across windows", c2_periodicity),
        ("six-term exactness", c3_six_term),
        ("dual-route stable homs", c4_dual_route),
        ("Tate homs of inflations vs mod-p homs", c5_modular_identity),
        ("Smith localization", c6_smith_localization),
        ("Smith functor on the flagship", c7_flagship_smith),
        ("parity pipeline", c8_parity_pipeline),
        ("L functor", c9_lift),
        ("weight demo", c10_weights),
        ("hypercohomology bound", c11_hyperco),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [exact, tolerance 0; {ms} ms]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [exact, tolerance 0; {ms} ms]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
