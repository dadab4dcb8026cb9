//! Singular orbit data: multisets of conjugacy classes whose product lies in
//! the commutator subgroup, modulo identity entries and cancelling pairs.

mod realize;
mod structure;
mod text;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{double_cosets, make_homomorphism, Embedding, FiniteGroup, Homomorphism};

pub use realize::{
    genus, quotient_genus, realize, realize_minimal, realize_with_extra_handles, RealizationWitness,
};
pub use structure::{bg_structure, BGStructure, BgCoordinates};
pub use text::{format_data, parse_data, parse_data_json, DataJson};

/// A multiset of conjugacy classes, stored as one multiplicity per class.
#[derive(Clone)]
pub struct OrbitData {
    group: Arc<FiniteGroup>,
    mult: Vec<u64>,
}

impl PartialEq for OrbitData {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.mult == other.mult
    }
}

impl Eq for OrbitData {}

impl fmt::Debug for OrbitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_data(self))
    }
}

impl fmt::Display for OrbitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_data(self))
    }
}

/// Builds data from `(element id, multiplicity)` pairs, rejecting data whose
/// product is not in the commutator subgroup.
pub fn make_data(g: &Arc<FiniteGroup>, entries: &[(usize, u64)]) -> Result<OrbitData> {
    let mut mult = vec![0u64; g.classes().count()];
    for &(x, m) in entries {
        if x >= g.order() {
            return Err(Error::InvalidData(format!("element id {x} out of range")));
        }
        mult[g.classes().class_of(x)] += m;
    }
    OrbitData::from_class_mult(g, mult)
}

impl OrbitData {
    pub fn empty(g: &Arc<FiniteGroup>) -> Self {
        OrbitData {
            group: g.clone(),
            mult: vec![0; g.classes().count()],
        }
    }

    /// Data from a multiplicity per class; checks the product condition.
    pub fn from_class_mult(g: &Arc<FiniteGroup>, mult: Vec<u64>) -> Result<Self> {
        if mult.len() != g.classes().count() {
            return Err(Error::Dimension(
                "one multiplicity per class expected".into(),
            ));
        }
        let d = OrbitData {
            group: g.clone(),
            mult,
        };
        if !d.psi_vanishes() {
            return Err(Error::PsiNonzero);
        }
        Ok(d)
    }

    pub(crate) fn from_class_mult_unchecked(g: &Arc<FiniteGroup>, mult: Vec<u64>) -> Self {
        OrbitData {
            group: g.clone(),
            mult,
        }
    }

    /// Whether the product of the entries maps to zero in `G/[G,G]`.
    pub fn psi_vanishes(&self) -> bool {
        let cl = self.group.classes();
        let s = self
            .group
            .abelianization()
            .weighted_sum(self.entries().map(|(c, m)| (cl.rep(c), m)));
        s.iter().all(|&x| x == 0)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn mult(&self) -> &[u64] {
        &self.mult
    }

    /// `(class, multiplicity)` for every class with positive multiplicity.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(c, &m)| (c, m))
    }

    /// Number of entries counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.mult.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    fn check_same(&self, other: &OrbitData) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Canonical representative: identity entries removed, each pair of
    /// mutually inverse classes keeps only the surplus of one side, and an
    /// ambivalent class keeps its multiplicity mod 2.
    pub fn reduce(&self) -> OrbitData {
        let cl = self.group.classes();
        let mut m = self.mult.clone();
        m[0] = 0;
        for c in 1..m.len() {
            let ci = cl.inverse_class(c);
            if ci == c {
                m[c] %= 2;
            } else if c < ci {
                let k = m[c].min(m[ci]);
                m[c] -= k;
                m[ci] -= k;
            }
        }
        OrbitData::from_class_mult_unchecked(&self.group, m)
    }

    pub fn is_reduced(&self) -> bool {
        *self == self.reduce()
    }

    pub fn add(&self, other: &OrbitData) -> Result<OrbitData> {
        self.check_same(other)?;
        Ok(self.add_unreduced(other).reduce())
    }

    /// Concatenation of the entry lists, without reduction.
    pub fn add_unreduced(&self, other: &OrbitData) -> OrbitData {
        let m = self
            .mult
            .iter()
            .zip(&other.mult)
            .map(|(a, b)| a + b)
            .collect();
        OrbitData::from_class_mult_unchecked(&self.group, m)
    }

    pub fn neg(&self) -> OrbitData {
        let cl = self.group.classes();
        let mut m = vec![0u64; self.mult.len()];
        for (c, k) in self.entries() {
            m[cl.inverse_class(c)] += k;
        }
        OrbitData::from_class_mult_unchecked(&self.group, m).reduce()
    }

    /// `k * self` in the group of orbit data.
    pub fn scale(&self, k: i64) -> OrbitData {
        let base = if k < 0 { self.neg() } else { self.clone() };
        let f = k.unsigned_abs();
        let m = base.mult.iter().map(|&x| x * f).collect();
        OrbitData::from_class_mult_unchecked(&self.group, m).reduce()
    }

    /// Replaces each class of `g` by the class of `g^n`.
    pub fn lambda_power(&self, n: i64) -> OrbitData {
        let g = &self.group;
        let e = n.rem_euclid(g.exponent() as i64);
        let cl = g.classes();
        let mut m = vec![0u64; self.mult.len()];
        for (c, k) in self.entries() {
            m[cl.class_of(g.pow(cl.rep(c), e))] += k;
        }
        OrbitData::from_class_mult_unchecked(g, m).reduce()
    }

    /// Data that is its own negative: in reduced form only ambivalent classes occur.
    pub fn has_order_at_most_two(&self) -> bool {
        let r = self.reduce();
        let cl = self.group.classes();
        let ok = r.entries().all(|(c, _)| cl.is_ambivalent(c));
        ok
    }
}

/// Image under a homomorphism: each class maps to the class of the image of its representative.
pub fn pushforward(f: &Homomorphism, d: &OrbitData) -> Result<OrbitData> {
    if !f.domain.same_as(&d.group) {
        return Err(Error::GroupMismatch);
    }
    let cod = &f.codomain;
    let mut m = vec![0u64; cod.classes().count()];
    let cl = d.group.classes();
    for (c, k) in d.entries() {
        m[cod.classes().class_of(f.apply(cl.rep(c)))] += k;
    }
    Ok(OrbitData::from_class_mult_unchecked(cod, m).reduce())
}

/// Restriction to a subgroup without reduction: the singular orbits of the
/// subgroup on the same surface, cancelling pairs included.
pub fn restrict_raw(d: &OrbitData, k: &Embedding) -> Result<OrbitData> {
    let g = &d.group;
    if !k.parent.same_as(g) {
        return Err(Error::GroupMismatch);
    }
    let n = g.order();
    let cl = g.classes();
    let sub = &k.sub;
    let mut out = vec![0u64; sub.classes().count()];
    for (c, mult) in d.entries() {
        let gamma = cl.rep(c);
        let nu = g.elt_order(gamma);
        // left cosets x<gamma>, labelled by their least element
        let mut coset_min = vec![usize::MAX; n];
        for x in 0..n {
            if coset_min[x] == usize::MAX {
                let mut y = x;
                for _ in 0..nu {
                    coset_min[y] = x;
                    y = g.mul(y, gamma);
                }
            }
        }
        let mut done = vec![false; n];
        for x in 0..n {
            if coset_min[x] != x || done[x] {
                continue;
            }
            for &kk in &k.to_parent {
                done[coset_min[g.mul(kk, x)]] = true;
            }
            let delta = g.conj(x, gamma);
            let mut e = delta;
            let mut dmin = 1;
            while k.sub_id(e).is_none() {
                e = g.mul(e, delta);
                dmin += 1;
            }
            if dmin < nu {
                let id = k.sub_id(e).expect("element lies in the subgroup");
                out[sub.classes().class_of(id)] += mult;
            }
        }
    }
    let r = OrbitData::from_class_mult_unchecked(sub, out);
    if !r.psi_vanishes() {
        return Err(Error::Internal(
            "restricted data violates the product condition".into(),
        ));
    }
    Ok(r)
}

pub fn restrict(d: &OrbitData, k: &Embedding) -> Result<OrbitData> {
    Ok(restrict_raw(d, k)?.reduce())
}

/// Restriction for abelian groups by the closed formula: `gamma` contributes
/// `|G| |K n <gamma>| / (|<gamma>| |K|)` copies of `gamma^n`, `n` least with `gamma^n in K`.
pub fn restrict_abelian(d: &OrbitData, k: &Embedding) -> Result<OrbitData> {
    let g = &d.group;
    if !k.parent.same_as(g) {
        return Err(Error::GroupMismatch);
    }
    if !g.is_abelian() {
        return Err(Error::InvalidData(
            "closed restriction formula needs an abelian group".into(),
        ));
    }
    let sub = &k.sub;
    let mut out = vec![0u64; sub.classes().count()];
    for (c, mult) in d.entries() {
        let gamma = g.classes().rep(c);
        let nu = g.elt_order(gamma);
        let mut meet = 0usize;
        let mut first: Option<(usize, usize)> = None;
        let mut e = 0usize;
        for m in 1..=nu {
            e = g.mul(e, gamma);
            if k.sub_id(e).is_some() {
                meet += 1;
                if first.is_none() {
                    first = Some((m, e));
                }
            }
        }
        let copies = g.order() * meet / (nu * sub.order());
        let (_, power) = first.expect("gamma^nu is the identity");
        let id = k.sub_id(power).expect("power lies in the subgroup");
        out[sub.classes().class_of(id)] += mult * copies as u64;
    }
    Ok(OrbitData::from_class_mult_unchecked(sub, out).reduce())
}

/// Compares `res_K(i_*(d))` with the double coset sum
/// `sum_s j_*(res_{H_s}((f_s)_*(d)))`, `H_s = sHs^-1 n K`, over
/// representatives of the double cosets `K s H`.
pub fn double_coset_check(h: &Embedding, k: &Embedding, d: &OrbitData) -> Result<bool> {
    if !h.parent.same_as(&k.parent) {
        return Err(Error::GroupMismatch);
    }
    if !d.group.same_as(&h.sub) {
        return Err(Error::GroupMismatch);
    }
    let g = &h.parent;
    let left = restrict(&pushforward(&h.homomorphism(), d)?, k)?;

    let h_sub = h.subgroup();
    let k_sub = k.subgroup();
    let mut right = OrbitData::empty(&k.sub);
    for s in double_cosets(g, &h_sub, &k_sub) {
        let conj_gens: Vec<usize> = h
            .sub
            .generators()
            .iter()
            .map(|&x| g.conj(s, h.to_parent[x]))
            .collect();
        let conj = Embedding::new(g, &h_sub.conjugate(g, s), Some(&conj_gens))?;
        let images: Vec<usize> = conj_gens
            .iter()
            .map(|&y| conj.sub_id(y).expect("generator lies in the conjugate"))
            .collect();
        let f_s = make_homomorphism(&h.sub, &conj.sub, &images)?;
        let d_s = pushforward(&f_s, d)?;
        let meet = Embedding::new(g, &conj.subgroup().intersect(&k_sub), None)?;
        let restricted = restrict(&d_s, &meet.relative_to(&conj)?)?;
        let pushed = pushforward(&meet.relative_to(k)?.homomorphism(), &restricted)?;
        right = right.add(&pushed)?;
    }
    Ok(left == right)
}

/// Number of points fixed by `y`: each entry with stabilizer generator
/// `gamma` contributes the cosets `x<gamma>` with `y in x<gamma>x^-1`.
pub fn fixed_point_count(d: &OrbitData, y: usize) -> Result<u64> {
    let g = &d.group;
    if y == 0 {
        return Err(Error::InvalidData("the identity fixes every point".into()));
    }
    if y >= g.order() {
        return Err(Error::InvalidData(format!("element id {y} out of range")));
    }
    let cl = g.classes();
    let mut total = 0u64;
    for (c, m) in d.entries() {
        let gamma = cl.rep(c);
        let nu = g.elt_order(gamma);
        let mut in_cyclic = vec![false; g.order()];
        let mut e = 0;
        for _ in 0..nu {
            in_cyclic[e] = true;
            e = g.mul(e, gamma);
        }
        let hits = (0..g.order())
            .filter(|&x| in_cyclic[g.conj(g.inv(x), y)])
            .count();
        total += m * (hits / nu) as u64;
    }
    Ok(total)
}
