use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in (1..=n).filter(|d| n % d == 0) {
        match mobius(n / d) {
            1 => num = poly_mul_xd_minus_one(&num, d),
            -1 => den = poly_mul_xd_minus_one(&den, d),
            _ => {}
        }
    }
    poly_exact_div(&num, &den)
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn poly_mul_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

/// Exact division by a monic-up-to-sign divisor.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = &rem[i + dd] / lead;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element of `Q(zeta_N)`, stored as its residue modulo `Phi_N` in the
/// power basis of `zeta_N = exp(2 pi i / N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: usize) -> Self {
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order)],
        }
    }

    pub fn from_rational(order: usize, q: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(order: usize, k: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(k)))
    }

    /// `zeta_order^k`
    pub fn root(order: usize, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Self::from_poly(order, p)
    }

    /// Residue of an arbitrary polynomial in `zeta_order`.
    pub fn from_poly(order: usize, mut p: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        for i in (deg..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = p[i].clone();
            for (j, f) in phi.iter().enumerate() {
                if !f.is_zero() {
                    p[i - deg + j] -= &c * BigRational::from_integer(f.clone());
                }
            }
        }
        p.resize(deg, BigRational::zero());
        Cyclotomic { order, coeffs: p }
    }

    /// Builds from explicit coefficients of length `phi(order)`.
    pub fn from_coeffs(order: usize, coeffs: Vec<BigRational>) -> Result<Self> {
        if order == 0 || coeffs.len() != euler_phi(order) {
            return Err(Error::InvalidData(format!(
                "a cyclotomic of order {order} needs {} coefficients",
                if order == 0 { 0 } else { euler_phi(order) }
            )));
        }
        Ok(Cyclotomic { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The same number in `Q(zeta_m)` for a multiple `m` of the order.
    pub fn lift(&self, m: usize) -> Self {
        assert!(m % self.order == 0, "lift to a non-multiple order");
        if m == self.order {
            return self.clone();
        }
        Self::from_poly(m, self.poly_in(m))
    }

    /// Coefficients in powers of `zeta_m` (not reduced), `m` a multiple of the order.
    pub fn poly_in(&self, m: usize) -> Vec<BigRational> {
        let step = m / self.order;
        let mut p = vec![BigRational::zero(); m.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[(i * step) % m] += c;
        }
        p
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic {
            order: a.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        if a.coeffs.is_empty() {
            return a;
        }
        let mut p = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Self::from_poly(a.order, p)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * q).collect(),
        }
    }

    /// Complex conjugate: `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let n = self.order;
        let mut p = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[(n - i) % n] += c;
        }
        Self::from_poly(n, p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Floating point value, for cross-checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            let term = match (i, a.is_one()) {
                (0, _) => a.to_string(),
                (1, true) => format!("z{}", self.order),
                (_, true) => format!("z{}^{}", self.order, i),
                (1, false) => format!("{a}*z{}", self.order),
                (_, false) => format!("{a}*z{}^{}", self.order, i),
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// JSON form `{order, coeffs}` with rationals as strings such as `"-1/2"`.
#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicJson {
            order: self.order,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CyclotomicJson::deserialize(d)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| {
                BigRational::from_str(s.trim())
                    .map_err(|e| D::Error::custom(format!("bad rational `{s}`: {e}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(j.order, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        let as_i64 = |n| {
            cyclotomic_poly(n)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_poly(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity() {
        for n in 1..=24usize {
            let z = Cyclotomic::root(n, 1);
            let mut p = Cyclotomic::from_int(n, 1);
            for _ in 0..n {
                p = p.mul(&z);
            }
            assert_eq!(p, Cyclotomic::from_int(n, 1), "zeta_{n}^{n}");
            let sum = (0..n as i64).fold(Cyclotomic::zero(n), |acc, k| {
                acc.add(&Cyclotomic::root(n, k))
            });
            assert_eq!(sum.is_zero(), n > 1);
        }
        assert_eq!(Cyclotomic::root(6, 3), Cyclotomic::from_int(2, -1));
        assert_eq!(Cyclotomic::root(4, 2).to_integer(), Some(BigInt::from(-1)));
        assert_eq!(
            Cyclotomic::root(3, 1).add(&Cyclotomic::root(3, 2)),
            Cyclotomic::from_int(1, -1)
        );
    }

    #[test]
    fn lifting_preserves_value() {
        let a = Cyclotomic::root(3, 1);
        assert_eq!(a.lift(12), Cyclotomic::root(12, 4));
        assert!((a.lift(12).to_complex().0 - a.to_complex().0).abs() < 1e-12);
    }

    #[test]
    fn display_and_json() {
        let z = Cyclotomic::root(5, 2)
            .scale(&q(-2))
            .add(&Cyclotomic::from_int(5, 1));
        assert_eq!(z.to_string(), "1 - 2*z5^2");
        let j = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&j).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }

    fn arb_cyclo() -> impl Strategy<Value = Cyclotomic> {
        (
            prop::sample::select(vec![1usize, 2, 3, 4, 5, 6, 8, 9, 10, 12]),
            prop::collection::vec(-5i64..5, 12),
        )
            .prop_map(|(n, cs)| {
                let p: Vec<BigRational> = cs.into_iter().map(q).collect();
                Cyclotomic::from_poly(n, p)
            })
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    }

    proptest! {
        #[test]
        fn conj_is_involution(a in arb_cyclo()) {
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn arithmetic_matches_floats(a in arb_cyclo(), b in arb_cyclo()) {
            let (ar, ai) = a.to_complex();
            let (br, bi) = b.to_complex();
            prop_assert!(close(a.add(&b).to_complex(), (ar + br, ai + bi)));
            prop_assert!(close(a.mul(&b).to_complex(), (ar * br - ai * bi, ar * bi + ai * br)));
            prop_assert!(close(a.conj().to_complex(), (ar, -ai)));
        }

        #[test]
        fn ring_laws(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
