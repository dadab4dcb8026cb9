//! Relative class number `h^-` of the `p`-th cyclotomic field, computed two
//! independent ways: the Maillet determinant and the product of generalized
//! Bernoulli numbers over odd characters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::rep::Cyclotomic;

pub const MAX_PRIME: u64 = 200;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || p > MAX_PRIME || !is_prime(p) {
        return Err(Error::OutOfRange(format!(
            "p must be an odd prime at most {MAX_PRIME}, got {p}"
        )));
    }
    Ok(())
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Least primitive root modulo the prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1))
        .unwrap_or(1)
}

/// `|det(R(a b^-1 mod p))| / p^((p-3)/2)` over `1 <= a, b <= (p-1)/2`.
pub fn h_minus_maillet(p: u64) -> Result<BigInt> {
    check_prime(p)?;
    let half = ((p - 1) / 2) as usize;
    let mut m = IntMatrix::zeros(half, half);
    for a in 1..=half as u64 {
        for b in 1..=half as u64 {
            let binv = pow_mod(b, p - 2, p);
            m.set(
                (a - 1) as usize,
                (b - 1) as usize,
                BigInt::from(a * binv % p),
            );
        }
    }
    let det = m.determinant()?.abs();
    let scale = num_traits::pow(BigInt::from(p), ((p - 3) / 2) as usize);
    let (q, r) = det.div_rem(&scale);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "Maillet determinant for p = {p} is not divisible by p^((p-3)/2)"
        )));
    }
    Ok(q)
}

/// `2p * prod over odd chi of (-B_{1,chi} / 2)`, with characters of
/// `(Z/p)^*` valued in the `(p-1)`-th roots of unity, `chi_k(g^m) = zeta^(k m)`
/// for the least primitive root `g`.
pub fn h_minus_bernoulli(p: u64) -> Result<BigInt> {
    check_prime(p)?;
    let n = (p - 1) as usize;
    let g = least_primitive_root(p);
    // powers[m] = g^m mod p
    let mut powers = Vec::with_capacity(n);
    let mut x = 1u64;
    for _ in 0..n {
        powers.push(x);
        x = x * g % p;
    }
    let minus_half_over_p = BigRational::new(BigInt::from(-1), BigInt::from(2 * p));
    let mut prod = Cyclotomic::from_int(n, 2 * p as i64);
    for k in (1..n).step_by(2) {
        let mut coeffs = vec![BigRational::zero(); n];
        for (m, &a) in powers.iter().enumerate() {
            coeffs[k * m % n] += BigRational::from_integer(BigInt::from(a));
        }
        let b = Cyclotomic::from_poly(n, coeffs).scale(&minus_half_over_p);
        prod = prod.mul(&b);
    }
    prod.to_integer()
        .filter(|h| h.is_positive())
        .ok_or_else(|| {
            Error::Internal(format!(
                "Bernoulli product for p = {p} is not a positive integer"
            ))
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberReport {
    pub p: u64,
    #[serde(with = "big_string")]
    pub h_minus: BigInt,
    pub primitive_root: u64,
    pub methods_agree: bool,
}

impl ClassNumberReport {
    pub fn to_text(&self) -> String {
        format!(
            "p: {}\nh_minus: {}\nprimitive_root: {}\nmethods_agree: {}",
            self.p, self.h_minus, self.primitive_root, self.methods_agree
        )
    }
}

/// Both oracles; an error if they disagree.
pub fn relative_class_number(p: u64) -> Result<ClassNumberReport> {
    let a = h_minus_maillet(p)?;
    let b = h_minus_bernoulli(p)?;
    if a != b {
        return Err(Error::Internal(format!(
            "class number oracles disagree for p = {p}: {a} vs {b}"
        )));
    }
    Ok(ClassNumberReport {
        p,
        h_minus: a,
        primitive_root: least_primitive_root(p),
        methods_agree: true,
    })
}

pub(crate) mod big_string {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(least_primitive_root(3), 2);
        assert_eq!(least_primitive_root(7), 3);
        assert_eq!(least_primitive_root(23), 5);
        assert_eq!(least_primitive_root(41), 6);
    }

    #[test]
    fn small_values() {
        for p in [3, 5, 7, 11, 13, 17, 19] {
            assert_eq!(h_minus_maillet(p).unwrap(), BigInt::one(), "p = {p}");
            assert_eq!(h_minus_bernoulli(p).unwrap(), BigInt::one(), "p = {p}");
        }
        assert_eq!(relative_class_number(23).unwrap().h_minus, BigInt::from(3));
        assert_eq!(relative_class_number(29).unwrap().h_minus, BigInt::from(8));
        assert_eq!(relative_class_number(37).unwrap().h_minus, BigInt::from(37));
    }

    #[test]
    fn guards() {
        for p in [0, 1, 2, 9, 211] {
            assert!(matches!(
                relative_class_number(p),
                Err(Error::OutOfRange(_))
            ));
        }
    }
}
