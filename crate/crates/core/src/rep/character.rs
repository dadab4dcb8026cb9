use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::table::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{Embedding, FiniteGroup};
use crate::lattice::LatticeBasis;
use crate::orbit::{genus, quotient_genus, restrict_raw, OrbitData, RealizationWitness};

/// A function on conjugacy classes with cyclotomic values.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: Arc<FiniteGroup>,
    values: Vec<Cyclotomic>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.values == other.values
    }
}

impl ClassFunction {
    pub fn new(group: &Arc<FiniteGroup>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != group.classes().count() {
            return Err(Error::Dimension("one value per class expected".into()));
        }
        Ok(ClassFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn from_ints(group: &Arc<FiniteGroup>, values: &[i64]) -> Result<Self> {
        Self::new(
            group,
            values.iter().map(|&v| Cyclotomic::from_int(1, v)).collect(),
        )
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        ClassFunction {
            group: group.clone(),
            values: vec![Cyclotomic::from_int(1, 1); group.classes().count()],
        }
    }

    /// Character of the regular representation.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        let mut values = vec![Cyclotomic::zero(1); group.classes().count()];
        values[0] = Cyclotomic::from_int(1, group.order() as i64);
        ClassFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.group.same_as(&other.group) {
            return Err(Error::GroupMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::new(&self.group, values)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let q = BigRational::from_integer(k.clone());
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.scale(&q)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(Cyclotomic::conj).collect(),
        }
    }

    /// Least common order of the values.
    fn field_order(&self) -> usize {
        self.values.iter().fold(1, |acc, v| acc.lcm(&v.order()))
    }
}

/// `(1/|G|) sum_C |C| f(C) conj(g(C))`, accumulated in `Q[x]/(x^M - 1)` and
/// reduced once at the end.
pub fn inner(f: &ClassFunction, g: &ClassFunction) -> Result<Cyclotomic> {
    if !f.group.same_as(&g.group) {
        return Err(Error::GroupMismatch);
    }
    let m = f.field_order().lcm(&g.field_order());
    let mut acc = vec![BigRational::zero(); m];
    let sizes = f.group.classes().sizes();
    for ((a, b), &size) in f.values.iter().zip(&g.values).zip(sizes) {
        let pa = a.poly_in(m);
        let pb = b.poly_in(m);
        let w = BigRational::from_integer(BigInt::from(size));
        for (i, x) in pa.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let xw = x * &w;
            for (j, y) in pb.iter().enumerate() {
                if !y.is_zero() {
                    // conj(zeta^j) = zeta^-j
                    acc[(i + m - j) % m] += &xw * y;
                }
            }
        }
    }
    let n = BigRational::from_integer(BigInt::from(f.group.order()));
    Ok(Cyclotomic::from_poly(m, acc).scale(&(BigRational::one() / n)))
}

/// Integer coefficients of a virtual character in the irreducibles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    #[serde(with = "crate::lattice::big_vec")]
    pub coeffs: Vec<BigInt>,
}

impl MultiplicityVector {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        MultiplicityVector { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// Decomposes `f` into irreducibles, failing unless every multiplicity is a rational integer.
pub fn multiplicities(f: &ClassFunction, t: &CharacterTable) -> Result<MultiplicityVector> {
    if !f.group.same_as(t.group()) {
        return Err(Error::GroupMismatch);
    }
    let mut coeffs = Vec::with_capacity(t.len());
    for (i, chi) in t.irreducibles().iter().enumerate() {
        let m = inner(f, chi)?;
        let k = m
            .to_integer()
            .ok_or_else(|| Error::NonIntegral(format!("multiplicity of {} is {m}", t.name(i))))?;
        coeffs.push(k);
    }
    Ok(MultiplicityVector { coeffs })
}

/// `sum_i m_i chi_i`
pub fn character_of(m: &MultiplicityVector, t: &CharacterTable) -> Result<ClassFunction> {
    if m.coeffs.len() != t.len() {
        return Err(Error::Dimension(
            "one multiplicity per irreducible expected".into(),
        ));
    }
    let g = t.group();
    let mut values = vec![Cyclotomic::zero(1); g.classes().count()];
    for (k, chi) in m.coeffs.iter().zip(t.irreducibles()) {
        if k.is_zero() {
            continue;
        }
        let q = BigRational::from_integer(k.clone());
        for (v, x) in values.iter_mut().zip(chi.values()) {
            *v = v.add(&x.scale(&q));
        }
    }
    ClassFunction::new(g, values)
}

/// Induction from the subgroup `k.sub` to `k.parent`:
/// `Ind f(C) = |G| / (|C| |H|) sum_{h in H n C} f(h)`.
pub fn induce(f: &ClassFunction, k: &Embedding) -> Result<ClassFunction> {
    if !f.group.same_as(&k.sub) {
        return Err(Error::GroupMismatch);
    }
    let g = &k.parent;
    let cl = g.classes();
    let hcl = k.sub.classes();
    let mut sums = vec![Cyclotomic::zero(1); cl.count()];
    for (h, &x) in k.to_parent.iter().enumerate() {
        let c = cl.class_of(x);
        sums[c] = sums[c].add(f.value(hcl.class_of(h)));
    }
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(c, s)| {
            let w = BigRational::new(
                BigInt::from(g.order()),
                BigInt::from(cl.size(c) * k.sub.order()),
            );
            s.scale(&w)
        })
        .collect();
    ClassFunction::new(g, values)
}

/// Restriction of a class function on `k.parent` to `k.sub`.
pub fn restrict_cf(f: &ClassFunction, k: &Embedding) -> Result<ClassFunction> {
    if !f.group.same_as(&k.parent) {
        return Err(Error::GroupMismatch);
    }
    let cl = k.parent.classes();
    let values = k
        .sub
        .classes()
        .reps()
        .iter()
        .map(|&h| f.value(cl.class_of(k.to_parent[h])).clone())
        .collect();
    ClassFunction::new(&k.sub, values)
}

/// Multiplicities of the permutation character on the cosets of `k.sub`.
pub fn perm_character(t: &CharacterTable, k: &Embedding) -> Result<MultiplicityVector> {
    if !t.group().same_as(&k.parent) {
        return Err(Error::GroupMismatch);
    }
    multiplicities(&induce(&ClassFunction::trivial(&k.sub), k)?, t)
}

/// Multiplicities `n_0..n_{n-1}` of `rho_j` (with `rho_j(x) = zeta_n^j`) in
/// the action of `C_n = <x>` on first homology, for stabilizer generators
/// `x^{i_s}` and quotient genus `h`:
/// `n_0 = h`, `n_j = h - 1 + q - (sum_s k_s r_sj) / n` where `k_s = gcd(n, i_s)`,
/// `i_s = l_s k_s` and `r_sj` is `j l_s` reduced into `[1, n/k_s]`.
/// `h` may be any integer, giving a virtual character.
pub fn cyclic_multiplicities(n: u64, exps: &[u64], h: i64) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(Error::InvalidData("cyclic group of order 0".into()));
    }
    if let Some(&bad) = exps.iter().find(|&&i| i % n == 0) {
        return Err(Error::InvalidData(format!(
            "stabilizer exponent {bad} is trivial mod {n}"
        )));
    }
    let q = exps.len() as i64;
    let n_i = n as i64;
    let mut out = vec![h; n as usize];
    for j in 1..n {
        let mut total: i64 = 0;
        for &i in exps {
            let i = i % n;
            let k = n.gcd(&i);
            let l = i / k;
            let m = n / k;
            let mut r = (j * l) % m;
            if r == 0 {
                r = m;
            }
            total += (k * r) as i64;
        }
        if total % n_i != 0 {
            return Err(Error::NonIntegral(format!(
                "multiplicity of rho_{j} is not integral"
            )));
        }
        out[j as usize] = h - 1 + q - total / n_i;
    }
    // dimension check against Riemann-Hurwitz: 2g = 2 + 2n(h - 1) + sum (n - n/nu)
    let branch: i64 = exps.iter().map(|&i| n_i - n.gcd(&(i % n)) as i64).sum();
    let twice_g = 2 + 2 * n_i * (h - 1) + branch;
    if twice_g != 2 * out.iter().sum::<i64>() {
        return Err(Error::Internal(
            "multiplicities do not sum to the genus".into(),
        ));
    }
    Ok(out)
}

/// `sum_j n_j zeta_n^j` expressed in `Q(zeta_field)`, `n | field`.
fn cyclic_value(mult: &[i64], field: usize) -> Cyclotomic {
    let n = mult.len();
    let step = field / n;
    let mut p = vec![BigRational::zero(); field];
    for (j, &m) in mult.iter().enumerate() {
        p[j * step] += BigRational::from_integer(BigInt::from(m));
    }
    Cyclotomic::from_poly(field, p)
}

/// Character of the action on first homology of the surface realized by
/// `w`: the genus at the identity, and at `y != 1` the value of the
/// restricted action of `<y>` computed from its own stabilizer data.
pub fn action_character(d: &OrbitData, w: &RealizationWitness) -> Result<ClassFunction> {
    w.verify(d)?;
    let g = d.group();
    let genus_g = genus(d, w.h as u64)?;
    let field = g.exponent();
    let cl = g.classes();
    let mut values = vec![Cyclotomic::from_int(field, genus_g as i64)];
    for c in 1..cl.count() {
        let y = cl.rep(c);
        let k = Embedding::cyclic(g, y)?;
        let r = restrict_raw(d, &k)?;
        let exps: Vec<u64> = r
            .entries()
            .flat_map(|(cc, m)| std::iter::repeat(k.sub.classes().rep(cc) as u64).take(m as usize))
            .collect();
        let h_y = quotient_genus(d, genus_g, &k)?;
        let n = k.sub.order() as u64;
        let mult = cyclic_multiplicities(n, &exps, h_y as i64)?;
        values.push(cyclic_value(&mult, field));
    }
    ClassFunction::new(g, values)
}

/// Checks that the permutation characters of `C_n` on the cosets of its
/// subgroups span exactly the multiplicity vectors that are constant on
/// Galois orbits `{j k : gcd(k, n) = 1}`.
pub fn rational_lattice_check(n: usize) -> Result<bool> {
    let g = Arc::new(crate::group::parse_group(&format!("cyclic {n}"))?);
    let t = CharacterTable::for_group(&g)?;
    let mut induced = Vec::new();
    for d in (1..=n).filter(|d| n % d == 0) {
        let y = if n == 1 { 0 } else { g.pow(1, (n / d) as i64) };
        let k = Embedding::cyclic(&g, y)?;
        induced.push(perm_character(&t, &k)?.coeffs);
    }
    // Galois orbits of Z/n are the sets {j : gcd(j, n) = e}
    let mut stable = Vec::new();
    for e in (1..=n).filter(|e| n % e == 0) {
        stable.push(
            (0..n)
                .map(|j| BigInt::from((j.gcd(&n) == e) as u8))
                .collect::<Vec<_>>(),
        );
    }
    let a = LatticeBasis::from_generators(n, &induced)?;
    let b = LatticeBasis::from_generators(n, &stable)?;
    Ok(a == b)
}
