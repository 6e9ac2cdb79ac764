//! Maps that move a claimed element, each tied to the family it lives on.

use std::sync::Arc;

use crate::algebra::{Elem, FieldDescriptor, Poly, Rational, RingDomain};
use crate::error::{Error, Result};
use crate::nbhd::ArithmeticMap;

use super::families::{d_chain, BFamily, EFamily, Family, HFamily, SFamily};
use super::jset::{gen_j, theta};

/// What a witness is claimed to do: every element of `moves` is moved,
/// every element of `fixes` is fixed. `exact` marks claims that account for
/// the whole set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveClaim {
    pub moves: Vec<Elem>,
    pub fixes: Vec<Elem>,
    pub exact: bool,
}

impl MoveClaim {
    fn all_but_one(elements: Vec<Elem>) -> Self {
        let (fixes, moves) = elements.into_iter().partition(|e| e.is_one());
        MoveClaim {
            moves,
            fixes,
            exact: true,
        }
    }

    fn only(moves: Vec<Elem>, fixes: Vec<Elem>) -> Self {
        MoveClaim {
            moves,
            fixes,
            exact: false,
        }
    }
}

pub trait Witness: Send + Sync {
    fn name(&self) -> &'static str;

    /// Alternative spellings accepted on input.
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    /// Canonical names of the families the map is defined on.
    fn families(&self) -> &'static [&'static str];

    /// The map on the family member with parameter `n` (0 for fixed sets).
    fn build(&self, n: u64) -> Result<ArithmeticMap>;

    fn claim(&self, n: u64) -> MoveClaim;
}

fn i() -> Elem {
    Elem::generator(&FieldDescriptor::gaussian())
}

fn sqrt(d: i64) -> Result<(Arc<FieldDescriptor>, Elem)> {
    let k = FieldDescriptor::quadratic(d)?;
    let r = k
        .sqrt_of(&Rational::from_integer(d.into()))
        .ok_or_else(|| Error::Unsupported(format!("sqrt({d}) not in its own field")))?;
    Ok((k, r))
}

fn ints(xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| Elem::int(x)).collect()
}

fn pairs(codomain: RingDomain, xs: Vec<(Elem, Elem)>) -> ArithmeticMap {
    ArithmeticMap::from_pairs(codomain, xs)
}

/// `3^k -> base^k` for `k = 1..n`.
fn power_images(x: i64, base: &Elem, n: u64) -> Vec<(Elem, Elem)> {
    (1..=n as u32)
        .map(|k| (Elem::int(x).pow(k), base.pow(k)))
        .collect()
}

pub struct Gamma;

impl Witness for Gamma {
    fn name(&self) -> &'static str {
        "gamma"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["γ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["S"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut v = vec![
            (Elem::one(), Elem::one()),
            (Elem::int(10), Elem::zero()),
            (Elem::int(20), Elem::zero()),
            (Elem::int(30), Elem::zero()),
        ];
        v.extend(power_images(3, &i(), n));
        Ok(pairs(RingDomain::GaussianIntegers, v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim::all_but_one(SFamily.elements(n))
    }
}

pub struct Tau;

impl Witness for Tau {
    fn name(&self) -> &'static str {
        "tau"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["τ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["T"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut v = vec![
            (Elem::int(-2), i()),
            (Elem::one(), Elem::one()),
            (Elem::int(5), Elem::zero()),
            (Elem::int(10), Elem::zero()),
            (Elem::int(20), Elem::zero()),
        ];
        v.extend(power_images(4, &Elem::int(-1), n));
        Ok(pairs(RingDomain::GaussianIntegers, v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim::all_but_one(super::families::TFamily.elements(n))
    }
}

fn phi_images(n: u64) -> Vec<(Elem, Elem)> {
    let a = Elem::frac(383, 1000);
    let a2 = &a * &a;
    let mut v = vec![
        (Elem::one(), Elem::one()),
        (Elem::int(5), a),
        (Elem::int(25), a2.clone()),
        (Elem::int(26), &a2 + &Elem::one()),
    ];
    v.extend(power_images(3, &Elem::frac(129, 100), n));
    v
}

pub struct Phi;

impl Witness for Phi {
    fn name(&self) -> &'static str {
        "phi"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["φ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["B"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        Ok(pairs(RingDomain::Rationals, phi_images(n)))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim::all_but_one(BFamily.elements(n))
    }
}

/// The sign witnesses share the first seven images.
fn sign_core() -> Vec<(Elem, Elem)> {
    vec![
        (Elem::int(-4), Elem::frac(1, 2)),
        (Elem::int(-1), Elem::one()),
        (Elem::one(), Elem::one()),
        (Elem::int(3), Elem::frac(1, 2)),
        (Elem::int(9), Elem::frac(1, 4)),
        (Elem::int(12), Elem::frac(3, 4)),
        (Elem::int(16), Elem::frac(1, 4)),
    ]
}

fn sign_claim() -> MoveClaim {
    MoveClaim::only(vec![Elem::int(-1)], vec![Elem::one()])
}

pub struct Eta;

impl Witness for Eta {
    fn name(&self) -> &'static str {
        "eta"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["η"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["G"]
    }
    fn build(&self, _: u64) -> Result<ArithmeticMap> {
        Ok(pairs(RingDomain::Rationals, sign_core()))
    }
    fn claim(&self, _: u64) -> MoveClaim {
        sign_claim()
    }
}

pub struct Kappa;

impl Witness for Kappa {
    fn name(&self) -> &'static str {
        "kappa"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["κ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["Y"]
    }
    fn build(&self, _: u64) -> Result<ArithmeticMap> {
        let (k, r3) = sqrt(3)?;
        let mut v = sign_core();
        v.extend([
            (Elem::int(14), &r3 * &Elem::frac(1, 4)),
            (Elem::int(20), Elem::frac(-1, 4)),
            (Elem::int(180), Elem::frac(-1, 16)),
            (Elem::int(196), Elem::frac(3, 16)),
        ]);
        Ok(pairs(RingDomain::NumberField(k), v))
    }
    fn claim(&self, _: u64) -> MoveClaim {
        sign_claim()
    }
}

pub struct Chi;

impl Witness for Chi {
    fn name(&self) -> &'static str {
        "chi"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["χ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["M"]
    }
    fn build(&self, _: u64) -> Result<ArithmeticMap> {
        let v = [
            (-4, 0),
            (-1, 1),
            (1, 1),
            (3, 1),
            (5, 1),
            (9, 1),
            (42, 0),
            (45, 1),
            (121, -1),
            (126, 0),
        ]
        .iter()
        .map(|&(x, y)| (Elem::int(x), Elem::int(y)))
        .chain([(Elem::int(11), i())])
        .collect();
        Ok(pairs(RingDomain::GaussianIntegers, v))
    }
    fn claim(&self, _: u64) -> MoveClaim {
        sign_claim()
    }
}

/// The real root of `x^3 - x^2 - x - 3`, as the generator of its field.
pub fn cubic_field() -> Result<Arc<FieldDescriptor>> {
    FieldDescriptor::new(&Poly::from_ints(&[-3, -1, -1, 1]))
}

pub struct Psi;

impl Witness for Psi {
    fn name(&self) -> &'static str {
        "psi"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["ψ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["Bm4"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let k = cubic_field()?;
        let w = Elem::generator(&k);
        let half = Elem::frac(1, 2);
        let w2 = &w * &w;
        let five = &(&Elem::one() + &w2) * &half;
        let sq = &five * &five;
        let mut v = vec![
            (Elem::int(-4), &(&Elem::one() - &w2) * &half),
            (Elem::one(), Elem::one()),
            (Elem::int(5), five),
            (Elem::int(25), sq.clone()),
            (Elem::int(26), &sq + &Elem::one()),
        ];
        v.extend(power_images(3, &w, n));
        Ok(pairs(RingDomain::NumberField(k), v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim::all_but_one(super::families::BWithMinusFour.elements(n))
    }
}

pub struct GMap;

impl Witness for GMap {
    fn name(&self) -> &'static str {
        "g"
    }
    fn families(&self) -> &'static [&'static str] {
        &["C"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut v = vec![(Elem::one(), Elem::one()), (Elem::int(3), Elem::frac(9, 4))];
        for (x, y) in [
            (5, 2),
            (13, 2),
            (25, 4),
            (65, 4),
            (169, 4),
            (194, 8),
            (195, 9),
        ] {
            v.push((Elem::int(x), Elem::int(y)));
        }
        v.extend(power_images(9, &Elem::frac(81, 16), n));
        Ok(pairs(RingDomain::Rationals, v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim::all_but_one(super::families::CFamily.elements(n))
    }
}

/// On `D` and every `D_k`; each added square goes to the square of the
/// previous image.
pub struct HMap;

impl HMap {
    fn identity_part() -> Vec<Elem> {
        let mut v = vec![
            Elem::frac(1, 2),
            Elem::one(),
            Elem::int(2),
            Elem::frac(5, 2),
        ];
        v.extend(ints(&[5, 25, 50, 100, 200, 400, 425, 430, 432]));
        v
    }
}

impl Witness for HMap {
    fn name(&self) -> &'static str {
        "h"
    }
    fn families(&self) -> &'static [&'static str] {
        &["Dstatic", "Diter"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let (k, r5) = sqrt(5)?;
        let mut v: Vec<(Elem, Elem)> = Self::identity_part()
            .into_iter()
            .map(|e| (e.clone(), e))
            .collect();
        v.extend([
            (Elem::int(-36), &Elem::int(4) * &r5),
            (Elem::int(12), Elem::int(8)),
            (Elem::int(144), Elem::int(64)),
            (Elem::int(1296), Elem::int(80)),
        ]);
        let mut image = Elem::int(512);
        for d in d_chain(n) {
            v.push((d, image.clone()));
            image = &image * &image;
        }
        Ok(pairs(RingDomain::NumberField(k), v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        let mut moves = ints(&[12, 144, 1296]);
        moves.extend(d_chain(n));
        MoveClaim::only(moves, Self::identity_part())
    }
}

pub struct Sigma;

impl Witness for Sigma {
    fn name(&self) -> &'static str {
        "sigma"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["σ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["E"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let (k, r33) = sqrt(33)?;
        let u = &(&r33 - &Elem::one()) * &Elem::frac(1, 8);
        let mut v: Vec<(Elem, Elem)> = EFamily::fixed_part()
            .into_iter()
            .map(|e| (e.clone(), e))
            .collect();
        v.push((Elem::int(9), &Elem::frac(9, 4) * &(&u * &u)));
        v.extend(power_images(-2, &u, n));
        Ok(pairs(RingDomain::NumberField(k), v))
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim {
            moves: EFamily.claimed(n),
            fixes: EFamily::fixed_part(),
            exact: true,
        }
    }
}

pub struct Theta;

impl Witness for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["θ"]
    }
    fn families(&self) -> &'static [&'static str] {
        &["J"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        Ok(theta(&gen_j(n)?)?.1)
    }
    /// Moves `n`; fixes `-1, 0, 1`, the halves, and `2^rho - k` for `k <= m0`.
    fn claim(&self, n: u64) -> MoveClaim {
        let j = gen_j(n).expect("parameter checked");
        let mut fixes: Vec<Elem> = j.elements[..3 + j.rho as usize].to_vec();
        let top = j.power();
        let mut k = num_bigint::BigInt::from(0);
        while k <= j.digits[3] {
            fixes.push(Elem::rational((&top - &k).into()));
            k += 1;
        }
        MoveClaim::only(
            vec![Elem::rational(num_bigint::BigInt::from(n).into())],
            fixes,
        )
    }
}

/// `5 -> -5`, identity elsewhere on `B_n`: 5 is not rigid even inside Z.
pub struct NegateFive;

impl Witness for NegateFive {
    fn name(&self) -> &'static str {
        "b5"
    }
    fn families(&self) -> &'static [&'static str] {
        &["B"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut m = ArithmeticMap::identity_on(RingDomain::Integers, &BFamily.elements(n));
        m.insert(Elem::int(5), Elem::int(-5));
        Ok(m)
    }
    fn claim(&self, n: u64) -> MoveClaim {
        let (moves, fixes) = BFamily
            .elements(n)
            .into_iter()
            .partition(|e| *e == Elem::int(5));
        MoveClaim {
            moves,
            fixes,
            exact: true,
        }
    }
}

/// `7 -> 7/4` and `13 -> 104` on `H_n`, using `(7/4)^3 (8*13)^2 = 7^3 13^2`.
pub struct HRational;

impl Witness for HRational {
    fn name(&self) -> &'static str {
        "hq"
    }
    fn families(&self) -> &'static [&'static str] {
        &["H"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut m = ArithmeticMap::identity_on(RingDomain::Rationals, &ints(&HFamily::CORE));
        let y = Elem::int(104);
        m.insert(Elem::int(13), y.clone());
        m.insert(Elem::int(169), &y * &y);
        for (x, v) in power_images(7, &Elem::frac(7, 4), n) {
            m.insert(x, v);
        }
        Ok(m)
    }
    fn claim(&self, n: u64) -> MoveClaim {
        MoveClaim {
            moves: HFamily::rationally_movable(n),
            fixes: ints(&HFamily::CORE),
            exact: true,
        }
    }
}

/// `13 -> -13`, identity elsewhere on `H_n`.
pub struct NegateThirteen;

impl Witness for NegateThirteen {
    fn name(&self) -> &'static str {
        "h13"
    }
    fn families(&self) -> &'static [&'static str] {
        &["H"]
    }
    fn build(&self, n: u64) -> Result<ArithmeticMap> {
        let mut m = ArithmeticMap::identity_on(RingDomain::Integers, &HFamily.elements(n));
        m.insert(Elem::int(13), Elem::int(-13));
        Ok(m)
    }
    fn claim(&self, n: u64) -> MoveClaim {
        let (moves, fixes) = HFamily
            .elements(n)
            .into_iter()
            .partition(|e| *e == Elem::int(13));
        MoveClaim {
            moves,
            fixes,
            exact: true,
        }
    }
}
