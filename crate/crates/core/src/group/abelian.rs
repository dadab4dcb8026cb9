use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::lattice::{snf, IntMatrix};

/// `G/[G,G]` as a product of cyclic groups `Z/d_1 x ... x Z/d_k` with
/// `d_1 | ... | d_k`, together with the projection of every element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Abelianization {
    commutator: Vec<usize>,
    factors: Vec<u64>,
    proj: Vec<Vec<u64>>,
}

impl Abelianization {
    pub(crate) fn compute(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        let mut comms = BTreeSet::new();
        for x in 0..n {
            for y in x + 1..n {
                comms.insert(g.commutator(x, y));
            }
        }
        comms.remove(&0);
        let comms: Vec<usize> = comms.into_iter().collect();
        let in_comm = super::closure_mask(n, &comms, |a, b| g.mul(a, b));
        let commutator: Vec<usize> = (0..n).filter(|&x| in_comm[x]).collect();

        let mut coset_of = vec![usize::MAX; n];
        let mut coset_rep = Vec::new();
        for x in 0..n {
            if coset_of[x] == usize::MAX {
                let c = coset_rep.len();
                coset_rep.push(x);
                for &k in &commutator {
                    coset_of[g.mul(x, k)] = c;
                }
            }
        }
        let m = coset_rep.len();
        let gens = g.generators();
        let k = gens.len();

        // exponent words along a spanning tree of the quotient, plus Schreier relations
        let mut word: Vec<Option<Vec<i64>>> = vec![None; m];
        word[0] = Some(vec![0; k]);
        let mut queue = VecDeque::from([0usize]);
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        while let Some(c) = queue.pop_front() {
            let wc = word[c].clone().expect("visited coset has a word");
            for (i, &s) in gens.iter().enumerate() {
                let d = coset_of[g.mul(coset_rep[c], s)];
                let mut step = wc.clone();
                step[i] += 1;
                match &word[d] {
                    None => {
                        word[d] = Some(step);
                        queue.push_back(d);
                    }
                    Some(wd) => {
                        if *wd != step {
                            relations.push(
                                step.iter()
                                    .zip(wd)
                                    .map(|(a, b)| BigInt::from(a - b))
                                    .collect(),
                            );
                        }
                    }
                }
            }
        }
        if word.iter().any(Option::is_none) {
            return Err(Error::Internal(
                "generators do not reach every coset".into(),
            ));
        }

        let (factors, proj) = if k == 0 {
            (Vec::new(), vec![Vec::new(); n])
        } else {
            let f = snf(&IntMatrix::from_rows(k, &relations)?)?;
            let diag = f.diagonal();
            let mut keep = Vec::new();
            let mut factors = Vec::new();
            for i in 0..k {
                let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
                if d.is_zero() {
                    return Err(Error::Internal("abelianization is infinite".into()));
                }
                if !d.is_one() {
                    keep.push(i);
                    factors.push(
                        d.to_u64()
                            .ok_or_else(|| Error::Internal("huge factor".into()))?,
                    );
                }
            }
            let coset_coords: Vec<Vec<u64>> = word
                .iter()
                .map(|w| {
                    let w: Vec<BigInt> = w
                        .as_ref()
                        .unwrap()
                        .iter()
                        .map(|&x| BigInt::from(x))
                        .collect();
                    let y = f.v.vec_mul(&w)?;
                    Ok(keep
                        .iter()
                        .zip(&factors)
                        .map(|(&i, &d)| {
                            crate::lattice::matrix::mod_floor(&y[i], &BigInt::from(d))
                                .to_u64()
                                .unwrap()
                        })
                        .collect())
                })
                .collect::<Result<_>>()?;
            let proj = (0..n).map(|x| coset_coords[coset_of[x]].clone()).collect();
            (factors, proj)
        };
        let ab = Abelianization {
            commutator,
            factors,
            proj,
        };
        ab.check(g, m)?;
        Ok(ab)
    }

    fn check(&self, g: &FiniteGroup, quotient_order: usize) -> Result<()> {
        let prod: u64 = self.factors.iter().product();
        if prod as usize != quotient_order {
            return Err(Error::Internal("abelianization order mismatch".into()));
        }
        for x in 0..g.order() {
            for &s in g.generators() {
                if self.proj[g.mul(x, s)] != self.add(&self.proj[x], &self.proj[s]) {
                    return Err(Error::Internal(
                        "abelianization is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn commutator_subgroup(&self) -> &[usize] {
        &self.commutator
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn project(&self, x: usize) -> &[u64] {
        &self.proj[x]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    /// `sum_i m_i * proj(x_i)`
    pub fn weighted_sum(&self, terms: impl IntoIterator<Item = (usize, u64)>) -> Vec<u64> {
        let mut acc = vec![0u64; self.factors.len()];
        for (x, m) in terms {
            for ((a, p), d) in acc.iter_mut().zip(&self.proj[x]).zip(&self.factors) {
                *a = (*a + (m % d) * p) % d;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use crate::group::parse_group;

    #[test]
    fn abelian_groups_have_trivial_commutator() {
        let g = parse_group("abelian 2 6").unwrap();
        let ab = g.abelianization();
        assert_eq!(ab.commutator_subgroup(), &[0]);
        assert_eq!(ab.factors(), &[2, 6]);
        let projections: std::collections::BTreeSet<_> =
            (0..g.order()).map(|x| ab.project(x).to_vec()).collect();
        assert_eq!(projections.len(), g.order());
    }

    #[test]
    fn s3_commutator_has_order_three() {
        let g = parse_group("perm 3; (1 2 3); (1 2)").unwrap();
        assert_eq!(g.abelianization().commutator_subgroup().len(), 3);
        assert_eq!(g.abelianization().factors(), &[2]);
    }

    #[test]
    fn quaternion_abelianization_matches_brute_force() {
        let q8 = parse_group("perm 8; (1 2 3 4)(5 6 7 8); (1 5 3 7)(2 8 4 6)").unwrap();
        let mut brute = std::collections::BTreeSet::new();
        for x in 0..8 {
            for y in 0..8 {
                brute.insert(q8.commutator(x, y));
            }
        }
        assert_eq!(brute.len(), 2);
        assert_eq!(q8.abelianization().commutator_subgroup().len(), 2);
        assert_eq!(q8.abelianization().factors(), &[2, 2]);
    }

    #[test]
    fn projection_kernel_is_commutator() {
        let d4 = parse_group("perm 4; (1 2 3 4); (1 3)").unwrap();
        let ab = d4.abelianization();
        let zero = vec![0u64; ab.factors().len()];
        let kernel: Vec<usize> = (0..8)
            .filter(|&x| ab.project(x) == zero.as_slice())
            .collect();
        assert_eq!(kernel, ab.commutator_subgroup());
    }
}
