use std::collections::VecDeque;

use super::FiniteGroup;

/// Conjugacy classes, indexed so that class `i` has the `i`-th smallest
/// representative. Class 0 is always `{identity}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConjugacyClasses {
    class_of: Vec<usize>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
    inverse_class: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl ConjugacyClasses {
    pub(crate) fn compute(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = members.len();
            let mut orbit = vec![x];
            class_of[x] = c;
            let mut queue = VecDeque::from([x]);
            // conjugation orbits are closed under conjugation by generators
            while let Some(y) = queue.pop_front() {
                for &s in g.generators() {
                    let z = g.conj(s, y);
                    if class_of[z] == usize::MAX {
                        class_of[z] = c;
                        orbit.push(z);
                        queue.push_back(z);
                    }
                }
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        let reps: Vec<usize> = members.iter().map(|m| m[0]).collect();
        let sizes = members.iter().map(Vec::len).collect();
        let inverse_class = reps.iter().map(|&r| class_of[g.inv(r)]).collect();
        ConjugacyClasses {
            class_of,
            reps,
            sizes,
            inverse_class,
            members,
        }
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// A class equal to its inverse class.
    pub fn is_ambivalent(&self, c: usize) -> bool {
        self.inverse_class[c] == c
    }
}

#[cfg(test)]
mod tests {
    use crate::group::parse_group;

    #[test]
    fn abelian_classes_are_singletons() {
        let g = parse_group("abelian 2 6").unwrap();
        let cl = g.classes();
        assert_eq!(cl.count(), 12);
        for c in 0..cl.count() {
            assert_eq!(cl.inverse_class(c), cl.class_of(g.inv(cl.rep(c))));
        }
    }

    #[test]
    fn s3_and_c4_classes() {
        let s3 = parse_group("perm 3; (1 2 3); (1 2)").unwrap();
        let cl = s3.classes();
        assert_eq!(cl.sizes(), &[1, 2, 3]);
        assert!((0..3).all(|c| cl.is_ambivalent(c)));

        let c4 = parse_group("cyclic 4").unwrap();
        let x2 = c4.parse_element("x^2").unwrap();
        let c = c4.classes().class_of(x2);
        assert_eq!(c4.classes().inverse_class(c), c);
    }

    #[test]
    fn classes_match_brute_force_conjugation() {
        for spec in [
            "perm 4; (1 2 3 4); (1 3)",
            "perm 4; (1 2 3); (1 2)(3 4)",
            "perm 3; (1 2 3); (1 2)",
        ] {
            let g = parse_group(spec).unwrap();
            let n = g.order();
            for x in 0..n {
                for s in 0..n {
                    assert_eq!(g.classes().class_of(x), g.classes().class_of(g.conj(s, x)));
                }
                let orbit: std::collections::BTreeSet<usize> =
                    (0..n).map(|s| g.conj(s, x)).collect();
                assert_eq!(orbit.len(), g.classes().size(g.classes().class_of(x)));
                assert_eq!(n % orbit.len(), 0);
            }
        }
    }

    #[test]
    fn class_sizes_do_not_depend_on_generator_order() {
        let a = parse_group("perm 4; (1 2 3); (1 2)(3 4)").unwrap();
        let b = parse_group("perm 4; (1 2)(3 4); (1 2 3)").unwrap();
        let mut sa = a.classes().sizes().to_vec();
        let mut sb = b.classes().sizes().to_vec();
        sa.sort_unstable();
        sb.sort_unstable();
        assert_eq!(sa, sb);
    }
}
