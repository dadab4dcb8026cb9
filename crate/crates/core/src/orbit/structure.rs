use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::OrbitData;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::{left_kernel, quotient, IntMatrix, LatticeBasis, QuotientMap};

/// `B_G = ker(Psi) / N` written as `Z^r x (Z/2)^s`, where `ker(Psi)` is the
/// lattice of class vectors with product in `[G,G]` and `N` is spanned by
/// the identity class and the cancelling pairs `e_c + e_{c^-1}`.
#[derive(Clone, Debug)]
pub struct BGStructure {
    group: Arc<FiniteGroup>,
    pub free_rank: usize,
    pub two_torsion: usize,
    /// Reduced lifts: `free_rank` free generators, then the order-two ones.
    pub basis: Vec<OrbitData>,
    kernel: LatticeBasis,
    relations: LatticeBasis,
    map: QuotientMap,
    /// Position in the quotient factor list of each basis element.
    factor_index: Vec<usize>,
}

/// Coordinates of an element of `B_G` in a [`BGStructure`] basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgCoordinates {
    #[serde(with = "crate::lattice::big_vec")]
    pub free: Vec<BigInt>,
    pub torsion: Vec<u8>,
}

/// The class vector of `d` as integers.
pub fn class_vector(d: &OrbitData) -> Vec<BigInt> {
    d.mult().iter().map(|&m| BigInt::from(m)).collect()
}

/// Turns a signed class vector into nonnegative data in the same class of
/// `B_G` (negative entries move to the inverse class), then reduces.
pub fn data_from_class_vector(g: &Arc<FiniteGroup>, v: &[BigInt]) -> Result<OrbitData> {
    let cl = g.classes();
    if v.len() != cl.count() {
        return Err(Error::Dimension("one entry per class expected".into()));
    }
    let mut w: Vec<BigInt> = v.to_vec();
    w[0] = BigInt::zero();
    for c in 1..w.len() {
        let ci = cl.inverse_class(c);
        if ci == c {
            if w[c].is_negative() {
                // add an even multiple of e_c
                let k = (-&w[c] + 1u32) / 2u32;
                w[c] += k * 2u32;
            }
        } else if c < ci {
            let k = [-&w[c], -&w[ci], BigInt::zero()].into_iter().max().unwrap();
            w[c] += &k;
            w[ci] += &k;
        }
    }
    let mult = w
        .iter()
        .map(|x| {
            x.to_u64()
                .ok_or_else(|| Error::Internal("multiplicity does not fit".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = OrbitData::from_class_mult(g, mult)?;
    Ok(d.reduce())
}

/// Computes the decomposition of `B_G` and a basis of reduced data.
pub fn bg_structure(g: &Arc<FiniteGroup>) -> Result<BGStructure> {
    let cl = g.classes();
    let k = cl.count();
    let ab = g.abelianization();
    let t = ab.factors().len();

    let kernel = if t == 0 {
        LatticeBasis::full(k)
    } else {
        // rows: projections of class reps, then the moduli; kernel vectors restricted to the class part
        let mut rows: Vec<Vec<BigInt>> = (0..k)
            .map(|c| {
                ab.project(cl.rep(c))
                    .iter()
                    .map(|&x| BigInt::from(x))
                    .collect()
            })
            .collect();
        for (i, &d) in ab.factors().iter().enumerate() {
            let mut r = vec![BigInt::zero(); t];
            r[i] = BigInt::from(d);
            rows.push(r);
        }
        let ker = left_kernel(&IntMatrix::from_rows(t, &rows)?)?;
        let proj: Vec<Vec<BigInt>> = ker.rows().into_iter().map(|r| r[..k].to_vec()).collect();
        LatticeBasis::from_generators(k, &proj)?
    };

    let mut gens = Vec::new();
    for c in 0..k {
        let ci = cl.inverse_class(c);
        let mut r = vec![BigInt::zero(); k];
        if c == 0 {
            r[0] = BigInt::from(1);
        } else if c <= ci {
            r[c] += 1;
            r[ci] += 1;
        } else {
            continue;
        }
        gens.push(r);
    }
    let relations = LatticeBasis::from_generators(k, &gens)?;
    let map = quotient(&kernel, &relations)?;

    let factors = &map.quotient.factors;
    if factors
        .iter()
        .any(|d| !d.is_zero() && *d != BigInt::from(2))
    {
        return Err(Error::Internal(format!(
            "unexpected torsion in B_G: {}",
            map.quotient
        )));
    }
    let mut factor_index: Vec<usize> = (0..factors.len())
        .filter(|&i| factors[i].is_zero())
        .collect();
    let free_rank = factor_index.len();
    factor_index.extend((0..factors.len()).filter(|&i| !factors[i].is_zero()));
    let two_torsion = factor_index.len() - free_rank;

    let basis = factor_index
        .iter()
        .map(|&i| data_from_class_vector(g, &map.lifts[i]))
        .collect::<Result<Vec<_>>>()?;

    let st = BGStructure {
        group: g.clone(),
        free_rank,
        two_torsion,
        basis,
        kernel,
        relations,
        map,
        factor_index,
    };
    for (i, b) in st.basis.iter().enumerate() {
        let c = st.coordinates(b)?;
        let mut expect_free = vec![BigInt::zero(); free_rank];
        let mut expect_tors = vec![0u8; two_torsion];
        if i < free_rank {
            expect_free[i] = BigInt::from(1);
        } else {
            expect_tors[i - free_rank] = 1;
        }
        if c.free != expect_free || c.torsion != expect_tors {
            return Err(Error::Internal("basis lift has wrong coordinates".into()));
        }
    }
    Ok(st)
}

impl BGStructure {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `ker(Psi)` as a lattice of class vectors.
    pub fn kernel(&self) -> &LatticeBasis {
        &self.kernel
    }

    /// The relation lattice `N`.
    pub fn relations(&self) -> &LatticeBasis {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.two_torsion
    }

    /// Shape such as `Z^2` or `Z/2 + Z^4`, `0` for the trivial group.
    pub fn shape(&self) -> String {
        self.map.quotient.to_string()
    }

    pub fn coordinates(&self, d: &OrbitData) -> Result<BgCoordinates> {
        if !d.group().same_as(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let q = self.map.coords(&class_vector(d))?;
        let free = self.factor_index[..self.free_rank]
            .iter()
            .map(|&i| q[i].clone())
            .collect();
        let torsion = self.factor_index[self.free_rank..]
            .iter()
            .map(|&i| if q[i].is_zero() { 0 } else { 1 })
            .collect();
        Ok(BgCoordinates { free, torsion })
    }

    /// Coordinates as one integer vector (free part, then torsion bits).
    pub fn coordinate_vector(&self, d: &OrbitData) -> Result<Vec<BigInt>> {
        let c = self.coordinates(d)?;
        let mut v = c.free;
        v.extend(c.torsion.iter().map(|&b| BigInt::from(b)));
        Ok(v)
    }

    /// Rebuilds reduced data from coordinates.
    pub fn from_coords(&self, free: &[BigInt], torsion: &[BigInt]) -> Result<OrbitData> {
        if free.len() != self.free_rank || torsion.len() != self.two_torsion {
            return Err(Error::Dimension(
                "coordinate vector has the wrong length".into(),
            ));
        }
        let k = self.group.classes().count();
        let mut v = vec![BigInt::zero(); k];
        for (c, &i) in free.iter().chain(torsion).zip(&self.factor_index) {
            for (x, l) in v.iter_mut().zip(&self.map.lifts[i]) {
                *x += c * l;
            }
        }
        data_from_class_vector(&self.group, &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;
    use crate::orbit::parse_data;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    fn shape(spec: &str) -> (usize, usize) {
        let st = bg_structure(&arc(spec)).unwrap();
        (st.free_rank, st.two_torsion)
    }

    #[test]
    fn cyclic_ranks() {
        for m in 1..=16usize {
            let expect = if m % 2 == 1 { (m - 1) / 2 } else { m / 2 - 1 };
            assert_eq!(shape(&format!("cyclic {m}")), (expect, 0), "C_{m}");
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(shape("abelian 2 2"), (0, 1));
        assert_eq!(shape("perm 3; (1 2 3); (1 2)"), (0, 1));
        assert_eq!(shape("abelian 3 3"), (4, 0));
        assert_eq!(shape("cyclic 2"), (0, 0));
        let v4 = arc("abelian 2 2");
        let st = bg_structure(&v4).unwrap();
        assert_eq!(st.basis[0], parse_data(&v4, "[x, y, xy]").unwrap());
    }

    #[test]
    fn coordinates_round_trip() {
        let c5 = arc("cyclic 5");
        let st = bg_structure(&c5).unwrap();
        assert_eq!(
            st.coordinates(&OrbitData::empty(&c5)).unwrap().free,
            vec![BigInt::zero(); 2]
        );
        for text in ["[x^2, x^2, x]", "[x, x^4^2, x^2^3]", "[x^3, x^3, x^4]"] {
            let d = parse_data(&c5, text).unwrap();
            let c = st.coordinates(&d).unwrap();
            assert_eq!(st.from_coords(&c.free, &[]).unwrap(), d.reduce());
        }
        let v4 = arc("abelian 2 2");
        let st = bg_structure(&v4).unwrap();
        let d = parse_data(&v4, "[x, y, xy, x, x]").unwrap();
        let c = st.coordinates(&d).unwrap();
        assert_eq!(c.torsion, vec![1]);
        assert_eq!(st.from_coords(&[], &[BigInt::from(1)]).unwrap(), d.reduce());
    }

    #[test]
    fn basis_is_realizable_data() {
        let c5 = arc("cyclic 5");
        let st = bg_structure(&c5).unwrap();
        for b in &st.basis {
            assert!(b.psi_vanishes());
            assert!(b.is_reduced());
        }
    }
}
