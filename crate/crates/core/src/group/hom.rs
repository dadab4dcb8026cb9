use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Orders up to this size are checked on every pair of elements.
pub const EXHAUSTIVE_LIMIT: usize = 64;
pub const SAMPLED_PAIRS: usize = 10_000;
const SAMPLE_SEED: u64 = 0x686f_6d6f_6d6f_7270;

#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub domain: Arc<FiniteGroup>,
    pub codomain: Arc<FiniteGroup>,
    image: Vec<usize>,
}

impl Homomorphism {
    pub(crate) fn from_table_unchecked(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        image: Vec<usize>,
    ) -> Self {
        Homomorphism {
            domain,
            codomain,
            image,
        }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Self::from_table_unchecked(g.clone(), g.clone(), (0..g.order()).collect())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image_table(&self) -> &[usize] {
        &self.image
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        self.image
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn compose(&self, after: &Homomorphism) -> Result<Homomorphism> {
        if !self.codomain.same_as(&after.domain) {
            return Err(Error::GroupMismatch);
        }
        Ok(Self::from_table_unchecked(
            self.domain.clone(),
            after.codomain.clone(),
            self.image.iter().map(|&x| after.image[x]).collect(),
        ))
    }

    /// Multiplicativity check: every pair for small domains; otherwise the
    /// spanning-tree edges (which already imply the property) plus a fixed
    /// sample of random pairs.
    pub fn verify(&self) -> Result<()> {
        let h = &self.domain;
        let g = &self.codomain;
        let n = h.order();
        if self.image[0] != 0 {
            return Err(Error::NotHomomorphism(
                "identity not mapped to identity".into(),
            ));
        }
        let bad = |x: usize, y: usize| {
            Error::NotHomomorphism(format!(
                "f({}*{}) != f({})*f({})",
                h.label(x),
                h.label(y),
                h.label(x),
                h.label(y)
            ))
        };
        let check = |x: usize, y: usize| -> Result<()> {
            if self.image[h.mul(x, y)] != g.mul(self.image[x], self.image[y]) {
                return Err(bad(x, y));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    check(x, y)?;
                }
            }
            return Ok(());
        }
        for x in 0..n {
            for &s in h.generators() {
                check(x, s)?;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..SAMPLED_PAIRS {
            check(rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
        Ok(())
    }
}

/// Extends generator images along the spanning tree of `h` and verifies the result.
pub fn make_homomorphism(
    h: &Arc<FiniteGroup>,
    g: &Arc<FiniteGroup>,
    gen_images: &[usize],
) -> Result<Homomorphism> {
    if gen_images.len() != h.generators().len() {
        return Err(Error::NotHomomorphism(format!(
            "{} generator images for {} generators",
            gen_images.len(),
            h.generators().len()
        )));
    }
    if gen_images.iter().any(|&y| y >= g.order()) {
        return Err(Error::NotHomomorphism("image id out of range".into()));
    }
    let mut image = vec![0usize; h.order()];
    for (y, t) in h.tree().iter().enumerate() {
        if let Some((p, gi)) = *t {
            image[y] = g.mul(image[p], gen_images[gi]);
        }
    }
    let f = Homomorphism::from_table_unchecked(h.clone(), g.clone(), image);
    f.verify()?;
    Ok(f)
}

/// First injective homomorphism `h -> g` in lexicographic order of generator images.
pub fn find_embedding(h: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>) -> Result<Homomorphism> {
    if g.order() % h.order() != 0 {
        return Err(Error::NotSubgroup(format!(
            "order {} does not divide {}",
            h.order(),
            g.order()
        )));
    }
    let gens = h.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            (0..g.order())
                .filter(|&y| g.elt_order(y) == h.elt_order(s))
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    fn search(
        h: &Arc<FiniteGroup>,
        g: &Arc<FiniteGroup>,
        candidates: &[Vec<usize>],
        choice: &mut Vec<usize>,
        depth: usize,
    ) -> Option<Homomorphism> {
        if depth == candidates.len() {
            let f = make_homomorphism(h, g, choice).ok()?;
            return f.is_injective().then_some(f);
        }
        for &y in &candidates[depth] {
            choice[depth] = y;
            if let Some(f) = search(h, g, candidates, choice, depth + 1) {
                return Some(f);
            }
        }
        None
    }
    search(h, g, &candidates, &mut choice, 0).ok_or_else(|| {
        Error::NotSubgroup(format!("no embedding of {} into {}", h.name(), g.name()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn identity_map() {
        let g = arc("perm 4; (1 2 3 4); (1 3)");
        let imgs = g.generators().to_vec();
        let f = make_homomorphism(&g, &g, &imgs).unwrap();
        assert_eq!(f.image_table(), (0..8).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn c3_into_s3() {
        let c3 = arc("cyclic 3");
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let a = s3.parse_element("a").unwrap();
        let f = make_homomorphism(&c3, &s3, &[a]).unwrap();
        assert!(f.is_injective());
        let found = find_embedding(&c3, &s3).unwrap();
        assert_eq!(found.apply(1), a);
    }

    #[test]
    fn c2_into_c4_is_forced() {
        let c2 = arc("cyclic 2");
        let c4 = arc("cyclic 4");
        let f = make_homomorphism(&c2, &c4, &[2]).unwrap();
        assert_eq!(f.image_table(), &[0, 2]);
        assert!(make_homomorphism(&c2, &c4, &[1]).is_err());
    }

    #[test]
    fn large_domain_uses_sampling_and_tree_edges() {
        let c100 = arc("cyclic 100");
        let c50 = arc("cyclic 50");
        let f = make_homomorphism(&c100, &c50, &[1]).unwrap();
        assert_eq!(f.apply(99), 49);
        let c7 = arc("cyclic 7");
        assert!(make_homomorphism(&c100, &c7, &[1]).is_err());
    }

    #[test]
    fn pushes_products_of_random_words() {
        let h = arc("abelian 4 6");
        let g = arc("abelian 2 12");
        let f = make_homomorphism(
            &h,
            &g,
            &[
                g.parse_element("x").unwrap(),
                g.parse_element("y^2").unwrap(),
            ],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut prod_h = 0;
        let mut prod_g = 0;
        for _ in 0..100 {
            let x = rng.gen_range(0..h.order());
            prod_h = h.mul(prod_h, x);
            prod_g = g.mul(prod_g, f.apply(x));
        }
        assert_eq!(f.apply(prod_h), prod_g);
    }
}
