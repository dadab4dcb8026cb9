use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{restrict_raw, OrbitData};
use crate::error::{Error, Result};
use crate::group::{closure_mask, Embedding};

/// Images of the surface-group generators under a surjection onto `G`:
/// `prod [a_i, b_i] * xi_1 ... xi_q = 1`, with the images generating `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationWitness {
    pub h: usize,
    pub a_images: Vec<usize>,
    pub b_images: Vec<usize>,
    pub xi_images: Vec<usize>,
}

impl RealizationWitness {
    /// Checks the product relation, surjectivity and that `xi` lists the
    /// classes of `d` with multiplicity, in class order.
    pub fn verify(&self, d: &OrbitData) -> Result<()> {
        let g = d.group();
        let n = g.order();
        if self.a_images.len() != self.h || self.b_images.len() != self.h {
            return Err(Error::InvalidData(
                "witness has the wrong number of handles".into(),
            ));
        }
        let all = self
            .a_images
            .iter()
            .chain(&self.b_images)
            .chain(&self.xi_images);
        if all.clone().any(|&x| x >= n) {
            return Err(Error::InvalidData("witness image out of range".into()));
        }
        let mut p = 0usize;
        for (&a, &b) in self.a_images.iter().zip(&self.b_images) {
            p = g.mul(p, g.commutator(a, b));
        }
        for &x in &self.xi_images {
            p = g.mul(p, x);
        }
        if p != 0 {
            return Err(Error::InvalidData(
                "witness violates the surface relation".into(),
            ));
        }
        let gens: Vec<usize> = all.copied().collect();
        if !closure_mask(n, &gens, |a, b| g.mul(a, b))
            .iter()
            .all(|&x| x)
        {
            return Err(Error::InvalidData(
                "witness images do not generate the group".into(),
            ));
        }
        let declared: Vec<usize> = d
            .entries()
            .flat_map(|(c, m)| std::iter::repeat(c).take(m as usize))
            .collect();
        let actual: Vec<usize> = self
            .xi_images
            .iter()
            .map(|&x| g.classes().class_of(x))
            .collect();
        if declared != actual {
            return Err(Error::InvalidData(
                "witness stabilizer images do not match the data".into(),
            ));
        }
        Ok(())
    }
}

/// Builds a verified witness: class representatives as stabilizer images,
/// a shortest product of commutators closing the relation, then one handle
/// `[s, 1]` per group generator `s` for surjectivity.
pub fn realize(d: &OrbitData) -> Result<RealizationWitness> {
    realize_with_extra_handles(d, 0)
}

/// A witness of least quotient genus among `h <= 1`, found by exhaustive
/// search, falling back to [`realize`] when none exists.
pub fn realize_minimal(d: &OrbitData) -> Result<RealizationWitness> {
    if !d.psi_vanishes() {
        return Err(Error::PsiNonzero);
    }
    let g = d.group();
    let n = g.order();
    let xi: Vec<usize> = d
        .entries()
        .flat_map(|(c, m)| std::iter::repeat(g.classes().rep(c)).take(m as usize))
        .collect();
    let w = RealizationWitness {
        h: 0,
        a_images: vec![],
        b_images: vec![],
        xi_images: xi.clone(),
    };
    if w.verify(d).is_ok() {
        return Ok(w);
    }
    if n <= 1000 {
        for u in 0..n {
            for v in 0..n {
                let w = RealizationWitness {
                    h: 1,
                    a_images: vec![u],
                    b_images: vec![v],
                    xi_images: xi.clone(),
                };
                if w.verify(d).is_ok() {
                    return Ok(w);
                }
            }
        }
    }
    realize(d)
}

/// As [`realize`] with `extra` further handles `[1, 1]`, raising the quotient genus.
pub fn realize_with_extra_handles(d: &OrbitData, extra: usize) -> Result<RealizationWitness> {
    if !d.psi_vanishes() {
        return Err(Error::PsiNonzero);
    }
    let g = d.group();
    let n = g.order();
    let cl = g.classes();
    let xi_images: Vec<usize> = d
        .entries()
        .flat_map(|(c, m)| std::iter::repeat(cl.rep(c)).take(m as usize))
        .collect();
    let prod = xi_images.iter().fold(0, |acc, &x| g.mul(acc, x));
    let target = g.inv(prod);

    // one pair (a, b) per commutator value
    let mut comms: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            comms.entry(g.commutator(a, b)).or_insert((a, b));
        }
    }
    comms.remove(&0);
    let mut parent: Vec<Option<(usize, (usize, usize))>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        for (&c, &pair) in &comms {
            let y = g.mul(x, c);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, pair));
                queue.push_back(y);
            }
        }
    }
    if !seen[target] {
        return Err(Error::Internal(
            "product is not a product of commutators".into(),
        ));
    }
    let mut handles = Vec::new();
    let mut x = target;
    while let Some((p, pair)) = parent[x] {
        handles.push(pair);
        x = p;
    }
    handles.reverse();
    handles.extend(g.generators().iter().filter(|&&s| s != 0).map(|&s| (s, 0)));
    handles.extend(std::iter::repeat((0, 0)).take(extra));

    let w = RealizationWitness {
        h: handles.len(),
        a_images: handles.iter().map(|p| p.0).collect(),
        b_images: handles.iter().map(|p| p.1).collect(),
        xi_images,
    };
    w.verify(d)?;
    Ok(w)
}

/// Twice the right side of Riemann-Hurwitz minus 2, as `2g`.
fn twice_genus(order: i128, h: i128, d: &OrbitData) -> i128 {
    let g = d.group();
    let cl = g.classes();
    let branch: i128 = d
        .entries()
        .map(|(c, m)| {
            let nu = g.elt_order(cl.rep(c)) as i128;
            m as i128 * (order - order / nu)
        })
        .sum();
    2 + 2 * order * (h - 1) + branch
}

/// Genus `g` of the surface with quotient genus `h` and singular orbits `d`:
/// `2g - 2 = |G|(2h - 2) + |G| sum (1 - 1/nu)`.
pub fn genus(d: &OrbitData, h: u64) -> Result<u64> {
    let twice = twice_genus(d.group().order() as i128, h as i128, d);
    if twice < 0 {
        return Err(Error::OutOfRange(format!("negative genus for h = {h}")));
    }
    if twice % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "genus is not an integer for h = {h}"
        )));
    }
    Ok((twice / 2) as u64)
}

/// Quotient genus of the subgroup `k` acting on the genus-`g` surface,
/// from the unreduced restriction of `d`.
pub fn quotient_genus(d: &OrbitData, g: u64, k: &Embedding) -> Result<u64> {
    let r = restrict_raw(d, k)?;
    let order = k.sub.order() as i128;
    let twice_h0 = twice_genus(order, 0, &r);
    // 2g = twice_h0 + 2 * order * h
    let diff = 2 * g as i128 - twice_h0;
    if diff < 0 || diff % (2 * order) != 0 {
        return Err(Error::NonIntegral(format!(
            "no integral quotient genus for the subgroup at g = {g}"
        )));
    }
    Ok((diff / (2 * order)) as u64)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{parse_group, FiniteGroup};
    use crate::orbit::parse_data;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn free_action_witness() {
        let c5 = arc("cyclic 5");
        let w = realize(&OrbitData::empty(&c5)).unwrap();
        assert_eq!(w.h, 1);
        assert_eq!((w.a_images[0], w.b_images[0]), (1, 0));
        let c1 = arc("cyclic 1");
        assert_eq!(realize(&OrbitData::empty(&c1)).unwrap().h, 0);
    }

    #[test]
    fn s3_and_c3c3_witnesses() {
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let d = parse_data(&s3, "[a]").unwrap();
        let w = realize(&d).unwrap();
        w.verify(&d).unwrap();
        assert!(genus(&d, w.h as u64).unwrap() > 0);
        let c33 = arc("abelian 3 3");
        let d = parse_data(&c33, "[x, y, x^2y^2]").unwrap();
        let w = realize(&d).unwrap();
        assert!(w.h <= 3);
        let w2 = realize_with_extra_handles(&d, 2).unwrap();
        assert_eq!(w2.h, w.h + 2);
    }

    #[test]
    fn tampered_witness_fails() {
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let d = parse_data(&s3, "[a]").unwrap();
        let mut w = realize(&d).unwrap();
        w.xi_images[0] = s3.parse_element("b").unwrap();
        assert!(w.verify(&d).is_err());
    }

    #[test]
    fn riemann_hurwitz_examples() {
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        assert_eq!(genus(&parse_data(&s3, "[a]").unwrap(), 1).unwrap(), 3);
        let c6 = arc("cyclic 6");
        assert_eq!(genus(&OrbitData::empty(&c6), 2).unwrap(), 7);
        for n in 2..=10usize {
            let g = arc(&format!("cyclic {n}"));
            for i in 1..n {
                let d = crate::orbit::make_data(&g, &[(i, 1), (n - i, 1)]).unwrap();
                for h in 0..3u64 {
                    let expect = h as i64 * n as i64 + 1 - num_integer::gcd(n, i) as i64;
                    match genus(&d, h) {
                        Ok(v) => assert_eq!(v as i64, expect),
                        Err(_) => assert!(expect < 0),
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_genus_of_whole_group_and_trivial_subgroup() {
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let d = parse_data(&s3, "[a]").unwrap();
        let g = genus(&d, 1).unwrap();
        assert_eq!(
            quotient_genus(&d, g, &Embedding::whole(&s3).unwrap()).unwrap(),
            1
        );
        let triv = Embedding::new(&s3, &crate::group::Subgroup::trivial(), None).unwrap();
        assert_eq!(quotient_genus(&d, g, &triv).unwrap(), g);
        let a = Embedding::cyclic(&s3, s3.parse_element("a").unwrap()).unwrap();
        // two fixed orbits of order 3 on a genus-3 surface: 4 = 3(2h - 2) + 2*2
        assert_eq!(quotient_genus(&d, g, &a).unwrap(), 1);
    }
}
