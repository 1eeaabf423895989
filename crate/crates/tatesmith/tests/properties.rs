//! Randomized invariants across the library.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tatesmith::equivsimp::{fp_cohomology_dims, SimplicialPiComplex};
use tatesmith::homcx::{direct_sum, modular_reduce, PiComplex};
use tatesmith::linalg::{fp_rank, snf, subquotient, verify_snf, AbelianInvariants, IntMatrix};
use tatesmith::parity::{check_parity, check_tate_parity, eps_push, Coefficients, GlobalVerdict};
use tatesmith::stratsheaf::{global_sections, recollement_check, sections, tate_of_stalk};
use tatesmith::tate::{classify, is_perfect, stable_hom, tate_cohomology_at, tate_dims};
use tatesmith::testgen::{random_complex, random_even_sheaf, Bounds};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(-9i64..=9, r * c).prop_map(move |v| IntMatrix::from_i64(r, c, &v)))
}

fn nonzero(h: BTreeMap<i64, AbelianInvariants>) -> BTreeMap<i64, AbelianInvariants> {
    h.into_iter().filter(|(_, a)| !a.is_zero()).collect()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5])
}

/// A complex with a free-orbit part and some fixed vertices, closed under the rotation.
fn random_simplicial(seed: u64, p: u64) -> SimplicialPiComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orbits = rng.gen_range(1..=2usize);
    let fixed = rng.gen_range(0..=2usize);
    let n = orbits * p as usize + fixed;
    let action: Vec<usize> = (0..n)
        .map(|v| if v < orbits * p as usize { (v / p as usize) * p as usize + (v % p as usize + 1) % p as usize } else { v })
        .collect();
    let mut simplices = BTreeSet::new();
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(1..=3usize).min(n);
        let mut s: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_vec();
        for _ in 0..p {
            s = s.iter().map(|&v| action[v]).collect();
            let mut t = s.clone();
            t.sort_unstable();
            simplices.insert(t);
        }
    }
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    SimplicialPiComplex::new(p, vertices, &simplices.into_iter().collect::<Vec<_>>(), action).expect("closed under the action")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_certificate_and_divisibility(a in matrix()) {
        let r = snf(&a);
        prop_assert!(verify_snf(&a, &r));
    }

    #[test]
    fn fp_rank_counts_factors_prime_to_p(a in matrix(), p in prime()) {
        let r = snf(&a);
        let prime_to_p = r.invariant_factors().iter().filter(|f| !f.is_multiple_of(&BigInt::from(p))).count();
        prop_assert_eq!(fp_rank(&a, p), prime_to_p);
    }

    #[test]
    fn subquotient_of_injective_map_is_its_cokernel(a in matrix()) {
        let r = snf(&a);
        prop_assume!(r.rank == a.cols());
        let coker = AbelianInvariants::from_invariant_factors(a.rows() - a.cols(), &r.invariant_factors());
        prop_assert_eq!(subquotient(&a, &IntMatrix::zeros(0, a.rows())).unwrap(), coker);
    }

    #[test]
    fn random_complexes_are_valid(seed in any::<u64>(), p in prime()) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), p, Bounds::default());
        prop_assert!(c.validate().is_ok());
        for n in c.degrees() {
            let g = c.action(n);
            let mut acc = IntMatrix::identity(c.rank(n));
            for _ in 0..p {
                acc = acc.mul(&g);
            }
            prop_assert_eq!(acc, IntMatrix::identity(c.rank(n)));
        }
    }

    #[test]
    fn tate_windows_are_two_periodic(seed in any::<u64>(), p in prime(), w in -3i64..3) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), p, Bounds::default());
        let a = tate_cohomology_at(&c, w).unwrap();
        let b = tate_cohomology_at(&c, w + 2).unwrap();
        prop_assert_eq!((a.t0_dim, a.t1_dim), (b.t0_dim, b.t1_dim));
    }

    #[test]
    fn classification_is_additive(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, p, Bounds::default());
        let d = random_complex(&mut rng, p, Bounds::default());
        let (kc, kd) = (classify(&c), classify(&d));
        let ks = classify(&direct_sum(&c, &d).unwrap());
        prop_assert_eq!((ks.k0, ks.k1), (kc.k0 + kd.k0, kc.k1 + kd.k1));
    }

    #[test]
    fn trivial_action_tate_is_parity_of_mod_p_cohomology(seed in any::<u64>(), p in prime()) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), p, Bounds::default()).forget_action();
        let h = c.cohomology().unwrap();
        prop_assume!(h.values().all(|a| !a.has_p_torsion(p)));
        let (mut even, mut odd) = (0, 0);
        for (n, a) in &h {
            if n.rem_euclid(2) == 0 { even += a.free_rank } else { odd += a.free_rank }
        }
        let t = tate_dims(&c);
        prop_assert_eq!((t.t0, t.t1), (even, odd));
    }

    #[test]
    fn euler_congruence_and_cochains(seed in any::<u64>(), p in prime()) {
        let (x, _) = random_simplicial(seed, p).regularize();
        prop_assert!(x.is_regular());
        let chi = x.complex().euler_characteristic();
        let chi_fixed = x.fixed_subcomplex().unwrap().euler_characteristic();
        prop_assert_eq!((chi - chi_fixed).rem_euclid(p as i64), 0);
        let c = x.cochains().unwrap();
        prop_assert!(c.validate().is_ok());
        let free = x.complex().simplices().iter().all(|s| x.act_on(s).0 != *s);
        if free {
            prop_assert!(is_perfect(&c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stable_hom_routes_agree(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, p, Bounds::default());
        let d = random_complex(&mut rng, p, Bounds::default());
        let h = stable_hom(&c, &d).unwrap();
        prop_assert_eq!(h.grading, h.grading_colimit);
    }

    #[test]
    fn export_sections_match_simplicial_cohomology(seed in any::<u64>()) {
        let p = 3;
        let (x, _) = random_simplicial(seed, p).regularize();
        let (_, f) = x.face_poset_export().unwrap();
        let dims = modular_reduce(&global_sections(&f).unwrap()).cohomology_dims();
        for (n, &d) in fp_cohomology_dims(x.complex(), p).iter().enumerate() {
            prop_assert_eq!(dims.get(&(n as i64)).copied().unwrap_or(0), d);
        }
    }

    #[test]
    fn sheaf_invariants_on_even_sheaves(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_even_sheaf(&mut rng, 3);
        prop_assert!(f.validate().is_ok());
        let base = f.base();
        let i = rng.gen_range(0..base.len());
        let up = base.up_set(i);
        prop_assert!(recollement_check(&f, &up).unwrap().exact_everywhere);
        let s = nonzero(sections(&f, &up).unwrap().cohomology().unwrap());
        prop_assert_eq!(s, nonzero(f.value(i).cohomology().unwrap()));
        let e = eps_push(&f).unwrap();
        prop_assert_eq!(tate_of_stalk(&e, i).unwrap(), tate_dims(&e.stalk(i).unwrap()));
        let v = check_parity(&f, Coefficients::Integral).unwrap().verdict;
        if v == GlobalVerdict::Even {
            prop_assert_eq!(check_tate_parity(&e).unwrap().verdict, GlobalVerdict::Even);
        }
    }
}

#[test]
fn zero_complex_is_perfect() {
    assert!(is_perfect(&PiComplex::zero(3)));
}
