//! The G-signature `theta: B_G -> R(G)/R` for a relation lattice `R`, its
//! target `A_G`, index computations and the commuting-square checks.

mod cp;
mod report;
mod squares;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{subgroups, Embedding, FiniteGroup, Subgroup, SubgroupMode};
use crate::lattice::{left_kernel, preimage, quotient, IntMatrix, LatticeBasis, QuotientMap};
use crate::orbit::{
    bg_structure, format_data, make_data, realize, realize_with_extra_handles, OrbitData,
};
use crate::rep::{action_character, multiplicities, perm_character, CharacterTable};

pub use cp::{cp_report, cpcp_report, CpExtra, CpcpExtra};
pub use report::{BigRow, IndexValue, SignatureReport};
pub use squares::{
    induce_matrix, restrict_matrix, verify_conj, verify_ind_square, verify_res_square,
};

/// Which permutation characters span the relation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationVariant {
    /// Cyclic subgroups and the whole group.
    D,
    /// All subgroups.
    E,
    /// An explicit list, which must contain the trivial subgroup and the whole group.
    Dprime(Vec<Subgroup>),
}

impl RelationVariant {
    pub fn name(&self) -> &'static str {
        match self {
            RelationVariant::D => "D",
            RelationVariant::E => "E",
            RelationVariant::Dprime(_) => "Dprime",
        }
    }
}

/// Trivial subgroup, the whole group, and the cyclic subgroups generated by
/// elements of order at least 3 (one per conjugacy class).
pub fn default_dprime(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let mut list = vec![Subgroup::trivial(), Subgroup::whole(g)];
    for class in subgroups(g, SubgroupMode::Cyclic)? {
        if class.rep.order() >= 3 && !list.contains(&class.rep) {
            list.push(class.rep);
        }
    }
    Ok(list)
}

/// Span of the permutation characters `Ind_H^G 1` over the variant's subgroups.
pub fn relation_lattice(
    g: &Arc<FiniteGroup>,
    t: &CharacterTable,
    v: &RelationVariant,
) -> Result<LatticeBasis> {
    let family: Vec<Subgroup> = match v {
        RelationVariant::D => {
            let mut f: Vec<Subgroup> = subgroups(g, SubgroupMode::Cyclic)?
                .into_iter()
                .map(|c| c.rep)
                .collect();
            f.push(Subgroup::whole(g));
            f
        }
        RelationVariant::E => subgroups(g, SubgroupMode::All)?
            .into_iter()
            .map(|c| c.rep)
            .collect(),
        RelationVariant::Dprime(list) => {
            if !list.contains(&Subgroup::trivial()) || !list.contains(&Subgroup::whole(g)) {
                return Err(Error::InvalidData(
                    "the subgroup list must contain the trivial subgroup and the whole group"
                        .into(),
                ));
            }
            list.clone()
        }
    };
    let mut rows = Vec::new();
    for h in &family {
        rows.push(perm_character(t, &Embedding::new(g, h, None)?)?.coeffs);
    }
    LatticeBasis::from_generators(t.len(), &rows)
}

/// `A_G`: multiplicity vectors `a` with `a + conj(a)` in the relation lattice, modulo that lattice.
#[derive(Clone, Debug)]
pub struct AGroup {
    pub lattice: LatticeBasis,
    pub map: QuotientMap,
}

/// Everything needed to evaluate `theta` on one group.
#[derive(Clone, Debug)]
pub struct SignatureContext {
    group: Arc<FiniteGroup>,
    table: CharacterTable,
    variant: RelationVariant,
    relations: LatticeBasis,
    one_plus_conj: IntMatrix,
}

impl SignatureContext {
    pub fn new(table: CharacterTable, variant: RelationVariant) -> Result<Self> {
        let group = table.group().clone();
        let relations = relation_lattice(&group, &table, &variant)?;
        let k = table.len();
        let mut m = IntMatrix::identity(k);
        for (i, &j) in table.conj_perm().iter().enumerate() {
            m.set(i, j, m.get(i, j) + 1);
        }
        Ok(SignatureContext {
            group,
            table,
            variant,
            relations,
            one_plus_conj: m,
        })
    }

    /// Context using the built-in or dual-group character table.
    pub fn for_group(g: &Arc<FiniteGroup>, variant: RelationVariant) -> Result<Self> {
        Self::new(CharacterTable::for_group(g)?, variant)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn variant(&self) -> &RelationVariant {
        &self.variant
    }

    pub fn relations(&self) -> &LatticeBasis {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.relations.canonical_coset_rep(v)
    }

    pub fn conj(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); v.len()];
        for (i, &j) in self.table.conj_perm().iter().enumerate() {
            out[j] += &v[i];
        }
        out
    }

    /// Whether `v + conj(v)` lies in the relation lattice.
    pub fn in_a_group(&self, v: &[BigInt]) -> Result<bool> {
        self.relations.contains(&self.one_plus_conj.vec_mul(v)?)
    }

    /// Multiplicities of the homology character of the action realized by a
    /// fresh witness with `extra` added trivial handles.
    pub fn theta_lift(&self, d: &OrbitData, extra: usize) -> Result<Vec<BigInt>> {
        if !d.group().same_as(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let w = if extra == 0 {
            realize(d)?
        } else {
            realize_with_extra_handles(d, extra)?
        };
        Ok(multiplicities(&action_character(d, &w)?, &self.table)?.coeffs)
    }

    /// `theta(d)` as a canonical coset representative. Works on `d` as
    /// given, without reducing it first. Checks that a second witness gives
    /// the same coset and that the image lies in `A_G`.
    pub fn theta(&self, d: &OrbitData) -> Result<Vec<BigInt>> {
        let lift = self.theta_lift(d, 0)?;
        let rep = self.reduce(&lift)?;
        let other = self.reduce(&self.theta_lift(d, 1)?)?;
        if rep != other {
            return Err(Error::Internal(format!(
                "theta of {} depends on the chosen witness",
                format_data(d)
            )));
        }
        if !self.in_a_group(&lift)? {
            return Err(Error::Internal(format!(
                "theta of {} is not anti-self-conjugate modulo relations",
                format_data(d)
            )));
        }
        Ok(rep)
    }

    /// `A_G` with its generator lifts.
    pub fn a_group(&self) -> Result<AGroup> {
        let lattice = preimage(&self.one_plus_conj, &self.relations)?;
        let map = quotient(&lattice, &self.relations)?;
        Ok(AGroup { lattice, map })
    }

    /// Images of the cancelling pairs `[c, c^-1]` and of `[1]`, which
    /// vanish exactly when `theta` is well defined on `B_G` for this relation lattice.
    pub fn well_definedness(&self) -> Result<Vec<RelationCheck>> {
        let g = &self.group;
        let cl = g.classes();
        let mut out = Vec::new();
        for c in 0..cl.count() {
            let ci = cl.inverse_class(c);
            if c > ci {
                continue;
            }
            let entries = if c == 0 {
                vec![(0, 1)]
            } else {
                vec![(cl.rep(c), 1), (cl.rep(ci), 1)]
            };
            let d = make_data(g, &entries)?;
            let image = self.theta(&d)?;
            out.push(RelationCheck {
                data: format_data(&d),
                vanishes: image.iter().all(Zero::is_zero),
                image: BigRow(image),
            });
        }
        Ok(out)
    }
}

/// Image of one generator of the relations defining `B_G`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RelationCheck {
    pub data: String,
    pub image: BigRow,
    pub vanishes: bool,
}

/// Kernel of `theta` on `Z^r x Z^s` (free coordinates, then torsion
/// coordinates) given the images of the basis.
pub(crate) fn theta_kernel(
    images: &[Vec<BigInt>],
    relations: &LatticeBasis,
    dim: usize,
) -> Result<LatticeBasis> {
    let n = images.len();
    let mut rows = images.to_vec();
    rows.extend(relations.rows());
    let k = left_kernel(&IntMatrix::from_rows(dim, &rows)?)?;
    let proj: Vec<Vec<BigInt>> = k.rows().into_iter().map(|r| r[..n].to_vec()).collect();
    LatticeBasis::from_generators(n, &proj)
}

/// Full report for one group: structure of `B_G`, `theta` on its basis,
/// `A_G`, the kernel of `theta` and the index `[A_G : theta(B_G)]`.
pub fn index_report(ctx: &SignatureContext) -> Result<SignatureReport> {
    let g = ctx.group();
    let bg = bg_structure(g)?;
    let images = bg
        .basis
        .iter()
        .map(|b| ctx.theta(b))
        .collect::<Result<Vec<_>>>()?;
    let a = ctx.a_group()?;
    let image_lattice = ctx.relations.add_generators(&images)?;
    if !a.lattice.contains_lattice(&image_lattice)? {
        return Err(Error::Internal("theta(B_G) is not contained in A_G".into()));
    }
    let index = quotient(&a.lattice, &image_lattice)?.quotient.order();

    let kernel = theta_kernel(&images, &ctx.relations, ctx.dim())?;
    let r = bg.free_rank;
    let s = bg.two_torsion;
    let doubled: Vec<Vec<BigInt>> = (0..s)
        .map(|i| {
            let mut v = vec![BigInt::zero(); r + s];
            v[r + i] = BigInt::from(2);
            v
        })
        .collect();
    let doubled = LatticeBasis::from_generators(r + s, &doubled)?;
    let kernel_group = quotient(&kernel.sum(&doubled)?, &doubled)?.quotient;

    Ok(SignatureReport {
        group: g.name().to_string(),
        order: g.order(),
        variant: ctx.variant.name().to_string(),
        characters: ctx.table.names().to_vec(),
        relation_rank: ctx.relations.rank(),
        bg: bg.shape(),
        free_rank: r,
        two_torsion: s,
        basis: bg.basis.iter().map(format_data).collect(),
        theta: images.into_iter().map(BigRow).collect(),
        a_group: a.map.quotient.clone(),
        a_lifts: a.map.lifts.iter().cloned().map(BigRow).collect(),
        injective_on_free: kernel.rank() == s,
        theta_kernel: kernel_group,
        index: IndexValue::from_order(index),
        cp: None,
        cpcp: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;
    use crate::orbit::parse_data;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclic_d_equals_e() {
        for n in [4, 6, 9, 12] {
            let g = arc(&format!("cyclic {n}"));
            let t = CharacterTable::for_group(&g).unwrap();
            assert_eq!(
                relation_lattice(&g, &t, &RelationVariant::D).unwrap(),
                relation_lattice(&g, &t, &RelationVariant::E).unwrap()
            );
        }
    }

    #[test]
    fn s3_relation_lattices() {
        let g = arc("perm 3; (1 2 3); (1 2)");
        let t = CharacterTable::for_group(&g).unwrap();
        let dp = default_dprime(&g).unwrap();
        assert_eq!(dp.len(), 3);
        let l = relation_lattice(&g, &t, &RelationVariant::Dprime(dp)).unwrap();
        let expect =
            LatticeBasis::from_generators(3, &[big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[0, 0, 2])])
                .unwrap();
        assert_eq!(l, expect);
        assert_eq!(
            relation_lattice(&g, &t, &RelationVariant::D).unwrap(),
            LatticeBasis::full(3)
        );
        assert!(
            relation_lattice(&g, &t, &RelationVariant::Dprime(vec![Subgroup::trivial()])).is_err()
        );
    }

    #[test]
    fn theta_examples() {
        let c3 = arc("cyclic 3");
        let ctx = SignatureContext::for_group(&c3, RelationVariant::E).unwrap();
        assert_eq!(ctx.theta(&OrbitData::empty(&c3)).unwrap(), big(&[0, 0, 0]));
        let rho1 = ctx.reduce(&big(&[0, 1, 0])).unwrap();
        assert_eq!(ctx.theta(&parse_data(&c3, "[x^3]").unwrap()).unwrap(), rho1);
        assert!(rho1.iter().any(|x| !x.is_zero()));

        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let ctx =
            SignatureContext::for_group(&s3, RelationVariant::Dprime(default_dprime(&s3).unwrap()))
                .unwrap();
        assert_eq!(
            ctx.theta(&parse_data(&s3, "[a]").unwrap()).unwrap(),
            big(&[0, 0, 1])
        );
    }

    #[test]
    fn s3_dprime_is_not_well_defined_on_reflections() {
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        let ctx =
            SignatureContext::for_group(&s3, RelationVariant::Dprime(default_dprime(&s3).unwrap()))
                .unwrap();
        let checks = ctx.well_definedness().unwrap();
        let failing: Vec<&RelationCheck> = checks.iter().filter(|c| !c.vanishes).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].data, "[b^2]");
        assert_eq!(failing[0].image.0, big(&[0, 0, 1]));
        let ctx_e = SignatureContext::for_group(&s3, RelationVariant::E).unwrap();
        assert!(ctx_e.well_definedness().unwrap().iter().all(|c| c.vanishes));
    }

    #[test]
    fn a_group_ranks_for_cyclic_groups() {
        for n in 2..=12usize {
            let g = arc(&format!("cyclic {n}"));
            let ctx = SignatureContext::for_group(&g, RelationVariant::E).unwrap();
            let a = ctx.a_group().unwrap();
            let expect = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 - 1 };
            assert_eq!(a.map.quotient.free_rank(), expect, "C_{n}");
        }
    }

    #[test]
    fn small_index_reports() {
        let c5 = arc("cyclic 5");
        let r =
            index_report(&SignatureContext::for_group(&c5, RelationVariant::E).unwrap()).unwrap();
        assert!(r.injective_on_free);
        assert_eq!(r.index, IndexValue::Finite(BigInt::from(1)));
        let c2 = arc("cyclic 2");
        let r =
            index_report(&SignatureContext::for_group(&c2, RelationVariant::E).unwrap()).unwrap();
        assert_eq!(r.bg, "0");
        assert!(r.basis.is_empty());
    }
}
