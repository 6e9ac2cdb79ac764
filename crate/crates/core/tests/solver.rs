use arith_nbhd::algebra::{Elem, RingDomain};
use arith_nbhd::lemma::LemmaBase;
use arith_nbhd::nbhd::{is_arithmetic, Neighborhood};
use arith_nbhd::solver::{replay, trace::Trace, Verdict, Verifier};

fn ints(xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| Elem::int(x)).collect()
}

fn check(elements: Vec<Elem>, r: Elem, universe: &str) -> Verdict {
    let set = Neighborhood::new(elements, r).unwrap();
    let u: RingDomain = universe.parse().unwrap();
    let res = Verifier::default().verify(&set, &u).unwrap();
    match &res.verdict {
        Verdict::Fixed => {
            let text = res.trace.to_jsonl();
            replay(&Trace::from_jsonl(&text).unwrap(), &LemmaBase::shipped()).unwrap();
        }
        Verdict::Moved { witness, .. } => {
            assert!(is_arithmetic(witness, &set).unwrap().is_none());
            assert!(witness.get(set.distinguished()) != Some(set.distinguished()));
        }
        Verdict::Unknown { .. } => {}
    }
    res.verdict
}

#[test]
fn powers_of_three_are_rigid_over_reals() {
    let v = check(ints(&[1, 10, 20, 30, 3, 9, 27]), Elem::int(27), "R");
    assert_eq!(v.tag(), "fixed");
}

#[test]
fn powers_of_three_move_over_gaussian_integers() {
    let v = check(ints(&[1, 10, 20, 30, 3, 9, 27]), Elem::int(3), "Zi");
    assert_eq!(v.tag(), "moved");
}

#[test]
fn sign_is_rigid_in_small_integer_sets() {
    assert_eq!(
        check(ints(&[-4, -1, 1, 3, 9, 12, 16]), Elem::int(-1), "Z").tag(),
        "fixed"
    );
    assert_eq!(
        check(ints(&[-4, -1, 1, 3, 9, 12, 16]), Elem::int(-1), "Q").tag(),
        "moved"
    );
    assert_eq!(
        check(
            ints(&[-4, -1, 1, 3, 9, 12, 14, 16, 20, 180, 196]),
            Elem::int(-1),
            "Q"
        )
        .tag(),
        "fixed"
    );
    assert_eq!(
        check(
            ints(&[-4, -1, 1, 3, 5, 9, 11, 42, 45, 121, 126]),
            Elem::int(-1),
            "R"
        )
        .tag(),
        "fixed"
    );
}

#[test]
fn mixed_sets() {
    let t = ints(&[-2, 1, 5, 10, 20, 4, 16]);
    assert_eq!(check(t.clone(), Elem::int(16), "R").tag(), "fixed");
    assert_eq!(check(t, Elem::int(16), "Zi").tag(), "moved");
    let mut e = vec![
        Elem::frac(1, 2),
        Elem::int(1),
        Elem::frac(3, 2),
        Elem::frac(9, 4),
        Elem::int(9),
    ];
    e.extend(ints(&[-2, 4, -8]));
    assert_eq!(check(e, Elem::int(9), "Q").tag(), "fixed");
    assert_eq!(
        check(ints(&[1, 5, 25, 26, 3, 9, 27]), Elem::int(5), "Z").tag(),
        "moved"
    );
    assert_eq!(
        check(ints(&[1, 5, 25, 26, 3, 9, 27]), Elem::int(27), "Z").tag(),
        "fixed"
    );
}
