//! Integer lattices in row convention: sums, preimages, intersections,
//! canonical coset representatives and finitely generated quotients.

pub mod matrix;
pub mod normal_form;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use matrix::{to_big, IntMatrix};
pub use normal_form::{certificate_counts, hnf, snf, Hnf, Snf};

use crate::error::{Error, Result};
use matrix::mod_floor;

/// A sublattice of `Z^dim`, stored as the nonzero rows of its Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        let h = hnf(m)?;
        let rank = h.rank();
        let rows: Vec<Vec<BigInt>> = (0..rank).map(|i| h.h.row(i).to_vec()).collect();
        Ok(LatticeBasis {
            dim: m.cols(),
            basis: IntMatrix::from_rows(m.cols(), &rows)?,
            pivots: h.pivots,
        })
    }

    pub fn from_generators(dim: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        Self::from_matrix(&IntMatrix::from_rows(dim, rows)?)
    }

    pub fn zero(dim: usize) -> Self {
        LatticeBasis {
            dim,
            basis: IntMatrix::zeros(0, dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        LatticeBasis {
            dim,
            basis: IntMatrix::identity(dim),
            pivots: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vecs()
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in a lattice of dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Reduces `v` against the pivots, returning the remainder and the
    /// multiples of each basis row that were subtracted.
    fn reduce_with_coeffs(&self, v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rank()];
        for (k, &p) in self.pivots.iter().enumerate() {
            let piv = self.basis.get(k, p);
            let q = r[p].div_floor(piv);
            if q.is_zero() {
                continue;
            }
            for (j, x) in r.iter_mut().enumerate().skip(p) {
                let b = self.basis.get(k, j);
                if !b.is_zero() {
                    *x -= &q * b;
                }
            }
            coeffs[k] = q;
        }
        (r, coeffs)
    }

    /// Unique representative of `v + L`: every pivot coordinate lands in `[0, pivot)`.
    pub fn canonical_coset_rep(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_dim(v)?;
        Ok(self.reduce_with_coeffs(v).0)
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.canonical_coset_rep(v)?.iter().all(Zero::is_zero))
    }

    /// Coefficients of `v` in the basis rows, or `None` when `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(v)?;
        let (r, c) = self.reduce_with_coeffs(v);
        Ok(r.iter().all(Zero::is_zero).then_some(c))
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> Result<bool> {
        for i in 0..other.rank() {
            if !self.contains(other.basis.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &LatticeBasis) -> Result<LatticeBasis> {
        if self.dim != other.dim {
            return Err(Error::Dimension(
                "sum of lattices of different dimension".into(),
            ));
        }
        let mut rows = self.rows();
        rows.extend(other.rows());
        Self::from_generators(self.dim, &rows)
    }

    pub fn add_generators(&self, rows: &[Vec<BigInt>]) -> Result<LatticeBasis> {
        let mut all = self.rows();
        all.extend(rows.iter().cloned());
        Self::from_generators(self.dim, &all)
    }

    pub fn intersect(&self, other: &LatticeBasis) -> Result<LatticeBasis> {
        if self.dim != other.dim {
            return Err(Error::Dimension(
                "intersection of lattices of different dimension".into(),
            ));
        }
        let c = preimage(&self.basis, other)?;
        let rows: Vec<Vec<BigInt>> = (0..c.rank())
            .map(|i| self.basis.vec_mul(c.basis.row(i)))
            .collect::<Result<_>>()?;
        Self::from_generators(self.dim, &rows)
    }

    /// Absolute determinant of the basis, for full-rank lattices.
    pub fn covolume(&self) -> Result<Option<BigInt>> {
        if self.rank() != self.dim {
            return Ok(None);
        }
        Ok(Some(self.basis.determinant()?.abs()))
    }
}

/// Left kernel `{x : x * m = 0}` as a lattice in `Z^rows`.
pub fn left_kernel(m: &IntMatrix) -> Result<LatticeBasis> {
    let h = hnf(m)?;
    let rank = h.rank();
    let rows: Vec<Vec<BigInt>> = (rank..m.rows()).map(|i| h.u.row(i).to_vec()).collect();
    let k = LatticeBasis::from_generators(m.rows(), &rows)?;
    for i in 0..k.rank() {
        if m.vec_mul(k.basis.row(i))?.iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal("kernel vector does not annihilate".into()));
        }
    }
    Ok(k)
}

/// `{v in Z^n : v * a in L}` for an `n x dim(L)` matrix `a`.
pub fn preimage(a: &IntMatrix, l: &LatticeBasis) -> Result<LatticeBasis> {
    if a.cols() != l.dim() {
        return Err(Error::Dimension(format!(
            "map into dimension {} but lattice has dimension {}",
            a.cols(),
            l.dim()
        )));
    }
    let n = a.rows();
    let mut stacked = a.row_vecs();
    stacked.extend(l.rows());
    let k = left_kernel(&IntMatrix::from_rows(a.cols(), &stacked)?)?;
    let rows: Vec<Vec<BigInt>> = k.rows().into_iter().map(|r| r[..n].to_vec()).collect();
    LatticeBasis::from_generators(n, &rows)
}

/// Invariant factors of a finitely generated abelian group. Torsion
/// factors come first in divisibility order, then one `0` per free summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianQuotient {
    #[serde(with = "big_vec")]
    pub factors: Vec<BigInt>,
}

impl AbelianQuotient {
    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            None
        } else {
            Some(self.factors.iter().product())
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for AbelianQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `span(big) / span(small)` with explicit coordinates and generator lifts.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub quotient: AbelianQuotient,
    big: LatticeBasis,
    v: IntMatrix,
    /// SNF coordinate index carrying each reported factor.
    keep: Vec<usize>,
    /// One ambient lift per factor, in the order of `quotient.factors`.
    pub lifts: Vec<Vec<BigInt>>,
}

impl QuotientMap {
    /// Coordinates of an element of `big` in the quotient; torsion
    /// coordinates are reduced into `[0, d)`.
    pub fn coords(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self.big.coords(x)?.ok_or(Error::NotContained)?;
        let y = self.v.vec_mul(&c)?;
        Ok(self
            .keep
            .iter()
            .zip(&self.quotient.factors)
            .map(|(&i, d)| {
                if d.is_zero() {
                    y[i].clone()
                } else {
                    mod_floor(&y[i], d)
                }
            })
            .collect())
    }

    pub fn big(&self) -> &LatticeBasis {
        &self.big
    }
}

pub fn quotient(big: &LatticeBasis, small: &LatticeBasis) -> Result<QuotientMap> {
    if big.dim() != small.dim() {
        return Err(Error::Dimension(
            "quotient of lattices of different dimension".into(),
        ));
    }
    let kb = big.rank();
    let mut rel = Vec::with_capacity(small.rank());
    for i in 0..small.rank() {
        rel.push(
            big.coords(small.basis().row(i))?
                .ok_or(Error::NotContained)?,
        );
    }
    let s = IntMatrix::from_rows(kb, &rel)?;
    let f = snf(&s)?;
    let diag = f.diagonal();
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for i in 0..kb {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free.push(i);
        } else if !d.is_one() {
            torsion.push((i, d));
        }
    }
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for (i, d) in torsion {
        keep.push(i);
        factors.push(d);
    }
    for i in free {
        keep.push(i);
        factors.push(BigInt::zero());
    }
    let lifts = keep
        .iter()
        .map(|&i| big.basis().vec_mul(f.v_inv.row(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientMap {
        quotient: AbelianQuotient { factors },
        big: big.clone(),
        v: f.v,
        keep,
        lifts,
    })
}

/// Block direct sum of lattices, in the concatenation of their ambient spaces.
pub fn direct_sum(parts: &[LatticeBasis]) -> Result<LatticeBasis> {
    let dim: usize = parts.iter().map(LatticeBasis::dim).sum();
    let mut rows = Vec::new();
    let mut offset = 0;
    for l in parts {
        for r in l.rows() {
            let mut v = vec![BigInt::zero(); dim];
            v[offset..offset + l.dim()].clone_from_slice(&r);
            rows.push(v);
        }
        offset += l.dim();
    }
    LatticeBasis::from_generators(dim, &rows)
}

/// Serde helper writing big integers as decimal strings.
pub mod big_vec {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(rows: &[Vec<i64>]) -> LatticeBasis {
        LatticeBasis::from_matrix(&IntMatrix::from_i64_rows(rows)).unwrap()
    }

    fn b(v: &[i64]) -> Vec<BigInt> {
        to_big(v)
    }

    #[test]
    fn quotient_of_lattice_by_itself_is_trivial() {
        let l = lat(&[vec![2, 1], vec![0, 3]]);
        let q = quotient(&l, &l).unwrap();
        assert!(q.quotient.is_trivial());
        assert_eq!(q.quotient.order(), Some(BigInt::one()));
    }

    #[test]
    fn quotient_by_doubled_lattice() {
        let q = quotient(&LatticeBasis::full(2), &lat(&[vec![2, 0], vec![0, 2]])).unwrap();
        assert_eq!(q.quotient.factors, b(&[2, 2]));
        assert_eq!(q.quotient.order(), Some(BigInt::from(4)));
        assert_eq!(q.coords(&b(&[3, 1])).unwrap(), b(&[1, 1]));
    }

    #[test]
    fn quotient_rejects_non_sublattice() {
        let big = lat(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(
            quotient(&big, &LatticeBasis::full(2)).unwrap_err(),
            Error::NotContained
        );
    }

    #[test]
    fn quotient_mixed_factors_and_lifts() {
        let small = lat(&[vec![4, 0, 0], vec![0, 6, 0]]);
        let q = quotient(&LatticeBasis::full(3), &small).unwrap();
        assert_eq!(q.quotient.factors, b(&[2, 12, 0]));
        assert_eq!(q.quotient.to_string(), "Z/2 + Z/12 + Z");
        for (i, lift) in q.lifts.iter().enumerate() {
            let c = q.coords(lift).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(x, &BigInt::from(u8::from(i == j)));
            }
        }
    }

    #[test]
    fn canonical_rep_against_cyclic_three_relations() {
        let e = lat(&[vec![1, 1, 1], vec![1, 0, 0]]);
        let r = e.canonical_coset_rep(&b(&[0, 1, 0])).unwrap();
        assert_eq!(r, b(&[0, 0, -1]));
        let shifted = e.canonical_coset_rep(&b(&[1, 2, 1])).unwrap();
        assert_eq!(shifted, r);
    }

    #[test]
    fn preimage_basic_cases() {
        let l = lat(&[vec![1, 1, 1], vec![1, 0, 0]]);
        assert_eq!(preimage(&IntMatrix::identity(3), &l).unwrap(), l);
        assert_eq!(
            preimage(&IntMatrix::zeros(3, 3), &l).unwrap(),
            LatticeBasis::full(3)
        );
    }

    #[test]
    fn preimage_of_conjugation_sum_for_cyclic_three() {
        // rho_1 and rho_2 swap under conjugation
        let s = IntMatrix::from_i64_rows(&[vec![2, 0, 0], vec![0, 1, 1], vec![0, 1, 1]]);
        let e = lat(&[vec![1, 1, 1], vec![1, 0, 0]]);
        let a = preimage(&s, &e).unwrap();
        assert_eq!(a.rank(), 3);
        assert!(a.contains_lattice(&e).unwrap());
        let q = quotient(&a, &e).unwrap();
        assert_eq!(q.quotient.factors, b(&[0]));
    }

    #[test]
    fn intersection_of_coprime_multiples() {
        let a = lat(&[vec![2, 0], vec![0, 1]]);
        let c = lat(&[vec![3, 0], vec![0, 1]]);
        assert_eq!(a.intersect(&c).unwrap(), lat(&[vec![6, 0], vec![0, 1]]));
    }

    #[test]
    fn index_matches_determinant_ratio() {
        let big = lat(&[vec![1, 1], vec![0, 2]]);
        let small = lat(&[vec![4, 0], vec![0, 6]]);
        let q = quotient(&big, &small).unwrap();
        let ratio = small.covolume().unwrap().unwrap() / big.covolume().unwrap().unwrap();
        assert_eq!(q.quotient.order().unwrap(), ratio);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..10, c), r)
        })
    }

    proptest! {
        #[test]
        fn coset_rep_is_idempotent_and_constant(m in small_matrix(), v in proptest::collection::vec(-20i64..20, 4), k in proptest::collection::vec(-3i64..4, 5)) {
            let cols = m[0].len();
            let l = lat(&m);
            let v = b(&v[..cols]);
            let r = l.canonical_coset_rep(&v).unwrap();
            prop_assert_eq!(&l.canonical_coset_rep(&r).unwrap(), &r);
            let mut w = v.clone();
            for (i, row) in l.rows().iter().enumerate() {
                for j in 0..cols {
                    w[j] += BigInt::from(k[i % k.len()]) * &row[j];
                }
            }
            prop_assert_eq!(l.canonical_coset_rep(&w).unwrap(), r);
        }

        #[test]
        fn hnf_spans_same_lattice(m in small_matrix()) {
            let l = lat(&m);
            for row in &m {
                prop_assert!(l.contains(&b(row)).unwrap());
            }
            // the input is recovered from the HNF rows through U^-1
            let mm = IntMatrix::from_i64_rows(&m);
            let h = hnf(&mm).unwrap();
            prop_assert_eq!(h.u_inv.mul(&h.h).unwrap(), mm);
        }

        #[test]
        fn snf_certificate_always_holds(m in small_matrix()) {
            let mm = IntMatrix::from_i64_rows(&m);
            let f = snf(&mm).unwrap();
            prop_assert_eq!(f.u.mul(&mm).unwrap().mul(&f.v).unwrap(), f.d.clone());
            prop_assert_eq!(f.u.determinant().unwrap().abs(), BigInt::one());
            prop_assert_eq!(f.v.determinant().unwrap().abs(), BigInt::one());
        }
    }
}
