use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use arith_nbhd::algebra::rational::int;
use arith_nbhd::algebra::sturm::Bound;
use arith_nbhd::algebra::{
    rational_roots, real_root_count, roots_in_field, Elem, FieldDescriptor, Poly, Rational,
};
use arith_nbhd::constructions::jset::rho_and_digits;

const RADICANDS: [i64; 6] = [-1, -3, 2, 3, 5, 33];

fn coords() -> impl Strategy<Value = [(i64, i64); 2]> {
    [(-20i64..20, 1i64..6), (-20i64..20, 1i64..6)]
}

fn build(d: usize, c: [(i64, i64); 2]) -> Elem {
    let field = FieldDescriptor::quadratic(RADICANDS[d]).unwrap();
    let coords: Vec<Rational> = c
        .iter()
        .map(|&(n, m)| Rational::new(n.into(), m.into()))
        .collect();
    Elem::from_coords(Some(&field), coords).unwrap()
}

/// Product of `x - r` over the given roots.
fn with_roots(roots: &[i64]) -> Poly {
    roots
        .iter()
        .fold(Poly::one(), |acc, &r| &acc * &Poly::linear_root(&int(r)))
}

proptest! {
    #[test]
    fn quadratic_field_axioms(d in 0..RADICANDS.len(), a in coords(), b in coords(), c in coords()) {
        let (a, b, c) = (build(d, a), build(d, b), build(d, c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn sturm_counts_distinct_real_roots(
        roots in proptest::collection::vec(-30i64..30, 0..5),
        shifts in proptest::collection::vec(1i64..20, 0..3),
    ) {
        // each x^2 + s adds two non-real roots
        let p = shifts.iter().fold(with_roots(&roots), |acc, &s| &acc * &Poly::from_ints(&[s, 0, 1]));
        let distinct: BTreeSet<i64> = roots.iter().copied().collect();
        let n = real_root_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap();
        prop_assert_eq!(n, distinct.len());
        let found: BTreeSet<Rational> = rational_roots(&p).unwrap().into_iter().collect();
        let want: BTreeSet<Rational> = distinct.iter().map(|&r| int(r)).collect();
        prop_assert_eq!(found, want);
    }

    #[test]
    fn field_roots_extend_rational_roots(
        d in 0..RADICANDS.len(),
        roots in proptest::collection::vec(-10i64..10, 1..3),
        scale in 1i64..5,
    ) {
        // (x^2 - d s^2) splits in Q(sqrt d)
        let radicand = RADICANDS[d];
        let p = &with_roots(&roots) * &Poly::from_ints(&[-radicand * scale * scale, 0, 1]);
        let field = FieldDescriptor::quadratic(radicand).unwrap();
        let fr = roots_in_field(&p, Some(&field)).unwrap();
        for r in rational_roots(&p).unwrap() {
            prop_assert!(fr.roots.contains(&Elem::rational(r)));
        }
        for r in &fr.roots {
            prop_assert!(r.eval_poly(&p).is_zero());
        }
        let conj: Vec<&Elem> = fr.roots.iter().filter(|r| !r.is_rational()).collect();
        prop_assert_eq!(conj.len(), 2);
    }

    #[test]
    fn power_digits_reconstruct(n in 3u64..2_000_000) {
        prop_assume!(!n.is_power_of_two());
        let (rho, d) = rho_and_digits(n).unwrap();
        let nb = BigInt::from(n);
        let p = BigInt::from(1) << rho;
        prop_assert_eq!(&d[0] * nb.pow(3) + &d[1] * nb.pow(2) + &d[2] * &nb + &d[3], p.clone());
        prop_assert!(nb.pow(3) <= p && p < nb.pow(4));
        prop_assert!((BigInt::from(1) << (rho - 1)) < nb.pow(3));
        prop_assert!(d.iter().all(|x| *x >= BigInt::from(0) && *x < nb));
    }
}
