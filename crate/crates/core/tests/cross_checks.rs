use dquint::congruence_sieve::{eliminate_all, SieveContext};
use dquint::intersect::{case_report, small_case, text_instance, universal_intersection};
use dquint::linear_forms::{bw_constant, weil_height, AlgebraicSurd, HeightNormalization, LinearFormSpec};
use dquint::pell::{fundamental_classes, PellProblem, SolutionSeq};
use dquint::sequences::{self, index_of_d};
use dquint::{verify_tuple, Interval};
use num_bigint::BigInt;
use proptest::prelude::*;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn nested(outer: &Interval, inner: &Interval) -> bool {
    outer.lo() <= inner.lo() && inner.hi() <= outer.hi()
}

#[test]
fn recovered_extensions_are_quadruples() {
    let ring = big(-2);
    for k in 0..=5 {
        let case = small_case(k, 40).unwrap();
        let dk = sequences::d(k);
        for d in &case.extensions {
            let r = verify_tuple(&[big(1), big(3), dk.clone(), d.clone()], &ring).unwrap();
            assert!(r.valid, "k = {k}, d = {d}: {:?}", r.reasons);
        }
        let off = &case.extensions[0] - 2;
        assert!(!verify_tuple(&[big(1), big(3), dk, off], &ring).unwrap().valid);
    }
}

#[test]
fn extensions_of_every_k_come_from_both_neighbours() {
    for k in 1..=12 {
        let u = universal_intersection(k).unwrap();
        assert!(u.ok(), "k = {k}");
        assert_eq!(u.prev_index, Some(k as u64 - 1));
        assert_eq!(u.next_index, Some(k as u64 + 1));
    }
}

#[test]
fn d_membership() {
    for l in 0..40 {
        assert_eq!(index_of_d(&sequences::d(l)), Some(l as u64));
        assert_eq!(index_of_d(&(sequences::d(l) - 1)), None);
    }
    assert_eq!(index_of_d(&big(5)), None);
}

#[test]
fn sieve_leaves_nothing_beyond_the_small_cases() {
    for k in 6..=12 {
        let s = eliminate_all(&SieveContext::new(k).unwrap());
        assert!(s.survivors.is_empty(), "k = {k}");
        assert_eq!(s.eliminated, s.cases);
    }
}

#[test]
fn enclosures_nest_under_precision_doubling() {
    let surds = [(2, 1, 3), (5, 2, 6), (0, 1, 2), (122, 4, 902)];
    for (p, q, r) in surds {
        let s = AlgebraicSurd::from_ints(p, q, r).unwrap();
        let hs: Vec<_> = [96, 192, 384].iter().map(|&b| weil_height(&s, b).unwrap()).collect();
        assert!(nested(&hs[0], &hs[1]) && nested(&hs[1], &hs[2]));
    }
    let c: Vec<_> = [128, 256, 512].iter().map(|&b| text_instance(b).unwrap()).collect();
    assert!(nested(&c[0].bw.c, &c[1].bw.c) && nested(&c[1].bw.c, &c[2].bw.c));
    assert!(c.windows(2).all(|w| w[0].index_bound == w[1].index_bound));
    assert!(c.windows(2).all(|w| w[0].reduction.trajectory == w[1].reduction.trajectory));
}

#[test]
fn case_certificates_agree_across_precisions() {
    for k in [1, 4] {
        let a = case_report(k, 100, 192).unwrap();
        let b = case_report(k, 100, 384).unwrap();
        for (x, y) in a.certificates.iter().zip(&b.certificates) {
            assert_eq!(x.index_bound, y.index_bound);
            assert_eq!(x.reduction.trajectory, y.reduction.trajectory);
            assert_eq!(x.final_bound, y.final_bound);
        }
        assert!(a.certified() && b.certified());
    }
}

#[test]
fn normalizations_are_ordered() {
    let spec = |n| LinearFormSpec {
        alphas: vec![
            AlgebraicSurd::from_ints(2, 1, 3).unwrap(),
            AlgebraicSurd::from_ints(5, 2, 6).unwrap(),
            AlgebraicSurd::from_ints(0, 1, 2).unwrap(),
        ],
        field_degree: 4,
        normalization: n,
    };
    let printed = bw_constant(&spec(HeightNormalization::Printed), 128).unwrap();
    let bw = bw_constant(&spec(HeightNormalization::BakerWustholz), 128).unwrap();
    // max{h, |log α|/d, 1/d} ≥ max{h, |log α|, 1}/d termwise
    assert_eq!(printed.c.lt(&bw.c), Some(true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_terms_solve_their_equation(k in 1i64..6, steps in 0u64..8) {
        for p in [PellProblem::x_form(k).unwrap(), PellProblem::y_form_weighted(k).unwrap()] {
            for c in fundamental_classes(&p) {
                let (z, x) = SolutionSeq::new(c).term(steps);
                prop_assert!(p.is_solution(&z, &x));
            }
        }
    }
}
