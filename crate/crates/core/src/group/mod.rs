//! Finite groups stored as full multiplication tables.
//!
//! Element ids are assigned in breadth-first order from the identity over
//! the generators in the order they were listed, so id 0 is always the
//! identity and every run produces the same numbering.

mod abelian;
mod classes;
pub mod hom;
mod spec;
pub mod subgroup;

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use abelian::Abelianization;
pub use classes::ConjugacyClasses;
pub use hom::{find_embedding, make_homomorphism, Homomorphism};
pub use spec::{parse_group, perm_from_cycles};
pub use subgroup::{double_cosets, subgroups, Embedding, Subgroup, SubgroupClass, SubgroupMode};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 2000;

/// The order cap, overridable through `GSIG_CAP_ORDER`.
pub fn order_cap() -> usize {
    std::env::var("GSIG_CAP_ORDER")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORDER_CAP)
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    cayley: Vec<u32>,
    inv: Vec<usize>,
    elt_order: Vec<usize>,
    generators: Vec<usize>,
    gen_names: Vec<String>,
    labels: Vec<String>,
    /// Breadth-first spanning tree: `(parent, generator index)` for each non-identity id.
    tree: Vec<Option<(usize, usize)>>,
    classes: ConjugacyClasses,
    abelianization: Abelianization,
    label_index: HashMap<String, usize>,
}

/// Result of enumerating a group by breadth-first closure.
pub(crate) struct Closure<T> {
    pub elements: Vec<T>,
    pub tree: Vec<Option<(usize, usize)>>,
    /// `right[x][i]` = id of `x * gen_i`.
    pub right: Vec<Vec<usize>>,
}

pub(crate) fn bfs_closure<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<Closure<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut tree = vec![None];
    index.insert(identity, 0);
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let mut row = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            let y = mul(&elements[x], g);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= cap {
                        return Err(Error::CapExceeded {
                            what: "group order",
                            value: id + 1,
                            cap,
                        });
                    }
                    index.insert(y.clone(), id);
                    elements.push(y);
                    tree.push(Some((x, gi)));
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
    }
    Ok(Closure {
        elements,
        tree,
        right,
    })
}

impl FiniteGroup {
    /// Builds a group from a breadth-first closure with generator ids `1..`.
    pub(crate) fn from_closure<T>(
        name: String,
        closure: &Closure<T>,
        gen_ids: Vec<usize>,
        gen_names: Vec<String>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = closure.elements.len();
        let mut cayley = vec![0u32; n * n];
        // column y = parent(y) * gen, so x*y = (x*parent(y)) * gen
        for y in 0..n {
            match closure.tree[y] {
                None => {
                    for x in 0..n {
                        cayley[x * n] = x as u32;
                    }
                }
                Some((p, g)) => {
                    for x in 0..n {
                        let xp = cayley[x * n + p] as usize;
                        cayley[x * n + y] = closure.right[xp][g] as u32;
                    }
                }
            }
        }
        Self::assemble(
            name,
            n,
            cayley,
            gen_ids,
            gen_names,
            labels,
            closure.tree.clone(),
        )
    }

    fn assemble(
        name: String,
        order: usize,
        cayley: Vec<u32>,
        generators: Vec<usize>,
        gen_names: Vec<String>,
        labels: Vec<String>,
        tree: Vec<Option<(usize, usize)>>,
    ) -> Result<Self> {
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if cayley[x * order + y] == 0 {
                    inv[x] = y;
                    break;
                }
            }
            if inv[x] == usize::MAX {
                return Err(Error::InvalidData(format!("element {x} has no inverse")));
            }
        }
        let mut elt_order = vec![1usize; order];
        for x in 1..order {
            let mut k = 1;
            let mut y = x;
            while y != 0 {
                y = cayley[y * order + x] as usize;
                k += 1;
                if k > order {
                    return Err(Error::InvalidData(format!(
                        "element {x} has no finite order"
                    )));
                }
            }
            elt_order[x] = k;
        }
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            label_index.entry(l.clone()).or_insert(i);
        }
        let mut g = FiniteGroup {
            name,
            order,
            cayley,
            inv,
            elt_order,
            generators,
            gen_names,
            labels,
            tree,
            classes: ConjugacyClasses::default(),
            abelianization: Abelianization::default(),
            label_index,
        };
        g.classes = ConjugacyClasses::compute(&g);
        g.abelianization = Abelianization::compute(&g)?;
        Ok(g)
    }

    /// Imports a multiplication table, checking the group axioms.
    pub fn from_cayley(
        name: String,
        table: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidData("empty multiplication table".into()));
        }
        let cap = order_cap();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "group order",
                value: n,
                cap,
            });
        }
        let mut cayley = vec![0u32; n * n];
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidData(format!("row {x} has wrong length")));
            }
            let mut seen = vec![false; n];
            for (y, &z) in row.iter().enumerate() {
                if z >= n || seen[z] {
                    return Err(Error::InvalidData(format!("row {x} is not a permutation")));
                }
                seen[z] = true;
                cayley[x * n + y] = z as u32;
            }
        }
        for x in 0..n {
            if cayley[x] as usize != x || cayley[x * n] as usize != x {
                return Err(Error::InvalidData("id 0 is not the identity".into()));
            }
        }
        let m = |a: usize, b: usize| cayley[a * n + b] as usize;
        let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= 64 {
            Box::new(
                (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))),
            )
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6173_736f_6369_6174);
            let v: Vec<_> = (0..10_000)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect();
            Box::new(v.into_iter())
        };
        for (a, b, c) in triples {
            if m(m(a, b), c) != m(a, m(b, c)) {
                return Err(Error::InvalidData(format!(
                    "associativity fails at ({a},{b},{c})"
                )));
            }
        }
        // greedy generating set and its breadth-first tree
        let mut gens = Vec::new();
        let mut covered = vec![false; n];
        covered[0] = true;
        for x in 1..n {
            if !covered[x] {
                gens.push(x);
                covered = closure_mask(n, &gens, m);
            }
        }
        let tree = bfs_tree(n, &gens, m);
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::InvalidData(
                "label count does not match order".into(),
            ));
        }
        let gen_names = gens.iter().map(|&g| labels[g].clone()).collect();
        Self::assemble(name, n, cayley, gens, gen_names, labels, tree)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elt_order(&self, a: usize) -> usize {
        self.elt_order[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.elt_order[a] as i64;
        let e = k.rem_euclid(o);
        let mut r = 0;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    /// `g x g^-1`
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a b a^-1 b^-1`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tree(&self) -> &[Option<(usize, usize)>] {
        &self.tree
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.abelianization
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.count() == self.order
    }

    pub fn exponent(&self) -> usize {
        self.elt_order
            .iter()
            .fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other) || (self.order == other.order && self.cayley == other.cayley)
    }

    /// Resolves an element token: a decimal id, an exact label, or a word in
    /// the generator names such as `a^2b` or `xy^-1`.
    pub fn parse_element(&self, token: &str) -> Result<usize> {
        let t = token.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        if t.chars().all(|c| c.is_ascii_digit()) {
            let id: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad element id `{t}`")))?;
            if id >= self.order {
                return Err(Error::Parse(format!("element id {id} out of range")));
            }
            return Ok(id);
        }
        if let Some(&id) = self.label_index.get(t) {
            return Ok(id);
        }
        self.parse_word(t)
    }

    fn parse_word(&self, word: &str) -> Result<usize> {
        let mut names: Vec<(usize, &str)> = self
            .gen_names
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.as_str()))
            .collect();
        names.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
        let mut rest = word;
        let mut acc = 0usize;
        while !rest.is_empty() {
            let Some(&(gi, name)) = names
                .iter()
                .find(|(_, s)| !s.is_empty() && rest.starts_with(s))
            else {
                return Err(Error::Parse(format!("cannot read `{word}` as an element")));
            };
            rest = &rest[name.len()..];
            let mut exp: i64 = 1;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                    .map_or(r.len(), |(i, _)| i);
                exp = r[..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{word}`")))?;
                rest = &r[end..];
            }
            acc = self.mul(acc, self.pow(self.generators[gi], exp));
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            cayley: (0..self.order)
                .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(name: String, j: &GroupJson) -> Result<Self> {
        if j.order != j.cayley.len() {
            return Err(Error::InvalidData("order does not match table size".into()));
        }
        Self::from_cayley(name, &j.cayley, Some(j.labels.clone()))
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

/// JSON form of a group: `{order, cayley, labels}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

pub(crate) fn closure_mask(
    n: usize,
    gens: &[usize],
    m: impl Fn(usize, usize) -> usize,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = m(x, g);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

fn bfs_tree(
    n: usize,
    gens: &[usize],
    m: impl Fn(usize, usize) -> usize,
) -> Vec<Option<(usize, usize)>> {
    let mut tree = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (gi, &g) in gens.iter().enumerate() {
            let y = m(x, g);
            if !seen[y] {
                seen[y] = true;
                tree[y] = Some((x, gi));
                queue.push_back(y);
            }
        }
    }
    tree
}
