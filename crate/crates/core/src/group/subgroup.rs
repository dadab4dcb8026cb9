use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::hom::Homomorphism;
use super::{bfs_closure, closure_mask, FiniteGroup};
use crate::error::{Error, Result};

pub const ALL_SUBGROUPS_CAP: usize = 200;

/// A subgroup given by its sorted member ids in the parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates that `ids` form a subgroup of `g`.
    pub fn from_members(g: &FiniteGroup, ids: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = ids.iter().copied().collect();
        if set.iter().any(|&x| x >= g.order()) {
            return Err(Error::NotSubgroup("id out of range".into()));
        }
        if !set.contains(&0) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&g.inv(a)) {
                return Err(Error::NotSubgroup(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for &b in &set {
                if !set.contains(&g.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!(
                        "not closed under product at ({a},{b})"
                    )));
                }
            }
        }
        Ok(Subgroup {
            members: set.into_iter().collect(),
        })
    }

    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mask = closure_mask(g.order(), gens, |a, b| g.mul(a, b));
        Subgroup {
            members: (0..g.order()).filter(|&x| mask[x]).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..g.order()).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    /// `s H s^-1`
    pub fn conjugate(&self, g: &FiniteGroup, s: usize) -> Self {
        let mut members: Vec<usize> = self.members.iter().map(|&x| g.conj(s, x)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn intersect(&self, other: &Subgroup) -> Self {
        Subgroup {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }

    /// Least-id greedy generating set.
    pub fn greedy_generators(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; g.order()];
        covered[0] = true;
        for &x in &self.members {
            if !covered[x] {
                gens.push(x);
                covered = closure_mask(g.order(), &gens, |a, b| g.mul(a, b));
            }
        }
        gens
    }
}

/// A conjugacy class of subgroups: a representative (the least member list)
/// and every conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    pub conjugates: Vec<Subgroup>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupMode {
    All,
    Cyclic,
}

/// Subgroups of `g` grouped into conjugacy classes, sorted by order and
/// then by member list.
pub fn subgroups(g: &FiniteGroup, mode: SubgroupMode) -> Result<Vec<SubgroupClass>> {
    let n = g.order();
    let found: BTreeSet<Subgroup> = match mode {
        SubgroupMode::Cyclic => (0..n).map(|x| Subgroup::generated(g, &[x])).collect(),
        SubgroupMode::All => {
            if n > ALL_SUBGROUPS_CAP {
                return Err(Error::CapExceeded {
                    what: "group order for full subgroup enumeration",
                    value: n,
                    cap: ALL_SUBGROUPS_CAP,
                });
            }
            all_subgroups(g)
        }
    };
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut assigned: HashSet<Subgroup> = HashSet::new();
    let mut ordered: Vec<Subgroup> = found.into_iter().collect();
    ordered.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.cmp(&b.members))
    });
    for h in ordered {
        if assigned.contains(&h) {
            continue;
        }
        let conj: BTreeSet<Subgroup> = (0..n).map(|s| h.conjugate(g, s)).collect();
        for c in &conj {
            assigned.insert(c.clone());
        }
        classes.push(SubgroupClass {
            rep: h,
            conjugates: conj.into_iter().collect(),
        });
    }
    Ok(classes)
}

/// Every subgroup, by adding one cyclic subgroup at a time to known subgroups.
fn all_subgroups(g: &FiniteGroup) -> BTreeSet<Subgroup> {
    let n = g.order();
    let mut cyclic_gens: Vec<usize> = Vec::new();
    let mut seen_cyclic: HashSet<Subgroup> = HashSet::new();
    for x in 1..n {
        if seen_cyclic.insert(Subgroup::generated(g, &[x])) {
            cyclic_gens.push(x);
        }
    }
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let trivial = Subgroup::trivial();
    found.insert(trivial.clone());
    let mut stack: Vec<(Subgroup, Vec<usize>)> = vec![(trivial, Vec::new())];
    while let Some((h, gens)) = stack.pop() {
        for &x in &cyclic_gens {
            if h.contains(x) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            let k = Subgroup::generated(g, &next_gens);
            if found.insert(k.clone()) {
                stack.push((k, next_gens));
            }
        }
    }
    found
}

/// Least-id representatives of the double cosets `K s H`.
pub fn double_cosets(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let n = g.order();
    let mut covered = vec![false; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if covered[s] {
            continue;
        }
        reps.push(s);
        for &a in k.members() {
            let ks = g.mul(a, s);
            for &b in h.members() {
                covered[g.mul(ks, b)] = true;
            }
        }
    }
    reps
}

/// A subgroup materialized as its own group, with the inclusion map.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub sub: Arc<FiniteGroup>,
    pub parent: Arc<FiniteGroup>,
    /// sub id -> parent id
    pub to_parent: Vec<usize>,
    /// parent id -> sub id
    from_parent: Vec<Option<usize>>,
}

impl Embedding {
    /// Materializes `k` with the given generators (least-id greedy ones when
    /// `None`). Element ids of the subgroup follow breadth-first order over
    /// those generators, so for a cyclic subgroup with generator `y` the id
    /// of `y^i` is `i`.
    pub fn new(parent: &Arc<FiniteGroup>, k: &Subgroup, gens: Option<&[usize]>) -> Result<Self> {
        let g = parent.as_ref();
        let gens: Vec<usize> = match gens {
            Some(gs) => {
                if gs.iter().any(|&x| !k.contains(x)) {
                    return Err(Error::NotSubgroup("generator outside the subgroup".into()));
                }
                if Subgroup::generated(g, gs) != *k {
                    return Err(Error::NotSubgroup(
                        "generators do not generate the subgroup".into(),
                    ));
                }
                gs.to_vec()
            }
            None => k.greedy_generators(g),
        };
        let c = bfs_closure(0usize, &gens, |a, b| g.mul(*a, *b), usize::MAX)?;
        if c.elements.len() != k.order() {
            return Err(Error::Internal("subgroup closure size mismatch".into()));
        }
        let labels: Vec<String> = c.elements.iter().map(|&x| g.label(x).to_string()).collect();
        let names = gens.iter().map(|&x| g.label(x).to_string()).collect();
        let gen_ids = gens
            .iter()
            .map(|x| c.elements.iter().position(|e| e == x).unwrap_or(0))
            .collect();
        let name = format!(
            "subgroup <{}> of {}",
            gens.iter()
                .map(|&x| g.label(x))
                .collect::<Vec<_>>()
                .join(", "),
            g.name()
        );
        let sub = FiniteGroup::from_closure(name, &c, gen_ids, names, labels)?;
        let mut from_parent = vec![None; g.order()];
        for (i, &x) in c.elements.iter().enumerate() {
            from_parent[x] = Some(i);
        }
        Ok(Embedding {
            sub: Arc::new(sub),
            parent: parent.clone(),
            to_parent: c.elements,
            from_parent,
        })
    }

    /// The cyclic subgroup generated by `y`, with `y` as its generator.
    pub fn cyclic(parent: &Arc<FiniteGroup>, y: usize) -> Result<Self> {
        let k = Subgroup::generated(parent, &[y]);
        Self::new(parent, &k, Some(&[y]))
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Result<Self> {
        let gens = parent.generators().to_vec();
        Self::new(parent, &Subgroup::whole(parent), Some(&gens))
    }

    pub fn sub_id(&self, parent_id: usize) -> Option<usize> {
        self.from_parent[parent_id]
    }

    pub fn subgroup(&self) -> Subgroup {
        let mut members = self.to_parent.clone();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn homomorphism(&self) -> Homomorphism {
        Homomorphism::from_table_unchecked(
            self.sub.clone(),
            self.parent.clone(),
            self.to_parent.clone(),
        )
    }

    /// Inclusion of `self.sub` into `outer.sub`, both sitting in the same parent.
    pub fn relative_to(&self, outer: &Embedding) -> Result<Embedding> {
        if !self.parent.same_as(&outer.parent) {
            return Err(Error::GroupMismatch);
        }
        let to_parent = self
            .to_parent
            .iter()
            .map(|&x| {
                outer
                    .sub_id(x)
                    .ok_or_else(|| Error::NotSubgroup("not contained in the outer subgroup".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut from_parent = vec![None; outer.sub.order()];
        for (i, &x) in to_parent.iter().enumerate() {
            from_parent[x] = Some(i);
        }
        Ok(Embedding {
            sub: self.sub.clone(),
            parent: outer.sub.clone(),
            to_parent,
            from_parent,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    #[test]
    fn cyclic_six_has_divisor_lattice() {
        let g = parse_group("cyclic 6").unwrap();
        let all = subgroups(&g, SubgroupMode::All).unwrap();
        let orders: Vec<usize> = all.iter().map(|c| c.rep.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn one_subgroup_per_divisor_for_cyclic_groups() {
        for n in 1..=30usize {
            let g = parse_group(&format!("cyclic {n}")).unwrap();
            let all = subgroups(&g, SubgroupMode::All).unwrap();
            let divisors = (1..=n).filter(|d| n % d == 0).count();
            assert_eq!(all.len(), divisors);
            assert!(all.iter().all(|c| c.conjugates.len() == 1));
        }
    }

    #[test]
    fn c5xc5_cyclic_subgroups() {
        let g = parse_group("abelian 5 5").unwrap();
        let cyc = subgroups(&g, SubgroupMode::Cyclic).unwrap();
        let orders: Vec<usize> = cyc.iter().map(|c| c.rep.order()).collect();
        assert_eq!(orders, vec![1, 5, 5, 5, 5, 5, 5]);
        let all = subgroups(&g, SubgroupMode::All).unwrap();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn s3_subgroup_classes_match_exhaustive_search() {
        let g = parse_group("perm 3; (1 2 3); (1 2)").unwrap();
        let all = subgroups(&g, SubgroupMode::All).unwrap();
        let orders: Vec<usize> = all.iter().map(|c| c.rep.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        // every subset closed under multiplication is a subgroup
        let mut brute = 0;
        for mask in 1u32..64 {
            let ids: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            if Subgroup::from_members(&g, &ids).is_ok() {
                brute += 1;
            }
        }
        let total: usize = all.iter().map(|c| c.conjugates.len()).sum();
        assert_eq!(total, brute);
        assert_eq!(all[1].conjugates.len(), 3);
    }

    #[test]
    fn all_mode_cap() {
        let g = parse_group("cyclic 201").unwrap();
        assert!(subgroups(&g, SubgroupMode::All).is_err());
        assert!(subgroups(&g, SubgroupMode::Cyclic).is_ok());
    }

    #[test]
    fn double_coset_partitions() {
        let g = parse_group("perm 3; (1 2 3); (1 2)").unwrap();
        let whole = Subgroup::whole(&g);
        assert_eq!(double_cosets(&g, &whole, &whole), vec![0]);
        let c3 = Subgroup::generated(&g, &[g.parse_element("a").unwrap()]);
        let c2 = Subgroup::generated(&g, &[g.parse_element("b").unwrap()]);
        for (h, k) in [(&c3, &c3), (&c2, &c2), (&c3, &c2)] {
            let reps = double_cosets(&g, h, k);
            let mut total = 0;
            for &s in &reps {
                let set: BTreeSet<usize> = k
                    .members()
                    .iter()
                    .flat_map(|&a| h.members().iter().map(move |&b| (a, b)))
                    .map(|(a, b)| g.mul(g.mul(a, s), b))
                    .collect();
                total += set.len();
            }
            assert_eq!(total, 6);
        }
        assert_eq!(double_cosets(&g, &c3, &c3).len(), 2);
    }

    #[test]
    fn from_members_rejects_non_subgroups() {
        let g = parse_group("cyclic 4").unwrap();
        assert!(Subgroup::from_members(&g, &[0, 1]).is_err());
        assert!(Subgroup::from_members(&g, &[1, 3]).is_err());
        assert!(Subgroup::from_members(&g, &[0, 2]).is_ok());
    }

    #[test]
    fn cyclic_embedding_numbers_powers() {
        let g = Arc::new(parse_group("perm 3; (1 2 3); (1 2)").unwrap());
        let a = g.parse_element("a").unwrap();
        let e = Embedding::cyclic(&g, a).unwrap();
        assert_eq!(e.sub.order(), 3);
        assert_eq!(e.to_parent, vec![0, a, g.mul(a, a)]);
        assert_eq!(e.sub_id(a), Some(1));
    }
}
