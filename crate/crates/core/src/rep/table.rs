use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::character::{inner, ClassFunction};
use super::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Irreducible complex characters of a group, one per conjugacy class.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    irreducibles: Vec<ClassFunction>,
    names: Vec<String>,
    conj_perm: Vec<usize>,
}

/// User table file: class representatives in the file's column order and
/// one row of cyclotomic values per irreducible.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub order: usize,
    pub classes: Vec<usize>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

/// Tables with more irreducibles than this skip the quadratic orthogonality
/// check in favour of the character-group argument (abelian tables only).
const FULL_CHECK_LIMIT: usize = 200;

impl CharacterTable {
    /// The dual group for abelian groups, the built-in table for `S_3`,
    /// otherwise [`Error::MissingTable`].
    pub fn for_group(g: &Arc<FiniteGroup>) -> Result<Self> {
        if g.is_abelian() {
            return Self::abelian(g);
        }
        if g.order() == 6 {
            return Self::s3(g);
        }
        Err(Error::MissingTable(format!(
            "no character table for the nonabelian group {} of order {}; supply one with --table",
            g.name(),
            g.order()
        )))
    }

    /// Characters `chi_k(x) = zeta^{sum k_i e_i(x) E / o_i}` indexed
    /// lexicographically by `k`, where `e(x)` are the coordinates of `x` in
    /// the generator basis when the generator orders multiply to `|G|`, and
    /// in the invariant-factor basis otherwise.
    fn abelian(g: &Arc<FiniteGroup>) -> Result<Self> {
        let n = g.order();
        let e = g.exponent();
        let gens = g.generators();
        let orders: Vec<usize> = gens.iter().map(|&s| g.elt_order(s)).collect();
        let (moduli, coords): (Vec<usize>, Vec<Vec<usize>>) =
            if orders.iter().product::<usize>() == n {
                let mut coords = vec![Vec::new(); n];
                let mut k = vec![0usize; gens.len()];
                for _ in 0..n {
                    let x = k
                        .iter()
                        .zip(gens)
                        .fold(0, |acc, (&ki, &s)| g.mul(acc, g.pow(s, ki as i64)));
                    coords[x] = k.clone();
                    advance(&mut k, &orders);
                }
                (orders, coords)
            } else {
                let ab = g.abelianization();
                let moduli: Vec<usize> = ab.factors().iter().map(|&d| d as usize).collect();
                let coords = (0..n)
                    .map(|x| ab.project(x).iter().map(|&v| v as usize).collect())
                    .collect();
                (moduli, coords)
            };
        if coords.iter().any(Vec::is_empty) && !moduli.is_empty() {
            return Err(Error::Internal("element without coordinates".into()));
        }
        let cl = g.classes();
        let mut irreducibles = Vec::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        let mut exps_of = Vec::with_capacity(n);
        let mut k = vec![0usize; moduli.len()];
        for _ in 0..n {
            let values = (0..cl.count())
                .map(|c| {
                    let x = cl.rep(c);
                    let t: usize = k
                        .iter()
                        .zip(&coords[x])
                        .zip(&moduli)
                        .map(|((&ki, &xi), &m)| ki * xi * (e / m))
                        .sum();
                    Cyclotomic::root(e, t as i64)
                })
                .collect();
            irreducibles.push(ClassFunction::new(g, values)?);
            names.push(if moduli.len() == 1 {
                format!("rho_{}", k[0])
            } else {
                format!(
                    "rho_({})",
                    k.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            });
            exps_of.push(k.clone());
            advance(&mut k, &moduli);
        }
        let conj_perm = exps_of
            .iter()
            .map(|k| {
                let neg: Vec<usize> = k
                    .iter()
                    .zip(&moduli)
                    .map(|(&ki, &m)| (m - ki) % m)
                    .collect();
                exps_of
                    .iter()
                    .position(|x| *x == neg)
                    .expect("dual group is closed under inverses")
            })
            .collect();
        let t = CharacterTable {
            group: g.clone(),
            irreducibles,
            names,
            conj_perm,
        };
        t.validate()?;
        Ok(t)
    }

    /// `chi_0` trivial, `chi_1` sign, `chi_2` the two-dimensional character.
    fn s3(g: &Arc<FiniteGroup>) -> Result<Self> {
        let cl = g.classes();
        let row = |at_three: i64, at_two: i64, deg: i64| -> Result<ClassFunction> {
            let values = (0..cl.count())
                .map(|c| match g.elt_order(cl.rep(c)) {
                    1 => deg,
                    3 => at_three,
                    _ => at_two,
                })
                .collect::<Vec<_>>();
            ClassFunction::from_ints(g, &values)
        };
        let t = CharacterTable {
            group: g.clone(),
            irreducibles: vec![row(1, 1, 1)?, row(1, -1, 1)?, row(-1, 0, 2)?],
            names: vec!["chi_0".into(), "chi_1".into(), "chi_2".into()],
            conj_perm: vec![0, 1, 2],
        };
        t.validate()?;
        Ok(t)
    }

    /// Builds a table from the user file format and validates it.
    pub fn from_json(g: &Arc<FiniteGroup>, j: &TableJson) -> Result<Self> {
        let cl = g.classes();
        if j.order != g.order() {
            return Err(Error::InvalidData(format!(
                "table for order {} but group has order {}",
                j.order,
                g.order()
            )));
        }
        if j.classes.len() != cl.count() || j.irreducibles.len() != cl.count() {
            return Err(Error::InvalidData(format!(
                "table must list {} classes and irreducibles",
                cl.count()
            )));
        }
        let mut column_of = vec![usize::MAX; cl.count()];
        for (col, &rep) in j.classes.iter().enumerate() {
            if rep >= g.order() {
                return Err(Error::InvalidData(format!(
                    "class representative {rep} out of range"
                )));
            }
            let c = cl.class_of(rep);
            if column_of[c] != usize::MAX {
                return Err(Error::InvalidData("two columns for the same class".into()));
            }
            column_of[c] = col;
        }
        let mut irreducibles = Vec::new();
        for row in &j.irreducibles {
            if row.len() != cl.count() {
                return Err(Error::InvalidData("table row of the wrong length".into()));
            }
            irreducibles.push(ClassFunction::new(
                g,
                column_of.iter().map(|&col| row[col].clone()).collect(),
            )?);
        }
        let mut conj_perm = Vec::new();
        for chi in &irreducibles {
            let c = chi.conj();
            conj_perm.push(irreducibles.iter().position(|x| *x == c).ok_or_else(|| {
                Error::InvalidData("table not closed under complex conjugation".into())
            })?);
        }
        let names = (0..irreducibles.len())
            .map(|i| format!("chi_{i}"))
            .collect();
        let t = CharacterTable {
            group: g.clone(),
            irreducibles,
            names,
            conj_perm,
        };
        t.validate()?;
        Ok(t)
    }

    /// Row orthogonality, integral positive degrees with `sum deg^2 = |G|`.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let k = self.irreducibles.len();
        if k != g.classes().count() {
            return Err(Error::InvalidData("need one irreducible per class".into()));
        }
        let mut sum_sq = BigInt::zero();
        for (i, chi) in self.irreducibles.iter().enumerate() {
            let d = chi
                .value(0)
                .to_integer()
                .filter(|d| *d > BigInt::zero())
                .ok_or_else(|| {
                    Error::InvalidData(format!("{} has no positive integral degree", self.names[i]))
                })?;
            sum_sq += &d * &d;
        }
        if sum_sq != BigInt::from(g.order()) {
            return Err(Error::InvalidData(
                "squared degrees do not sum to the group order".into(),
            ));
        }
        let one = Cyclotomic::from_int(1, 1);
        let zero = Cyclotomic::zero(1);
        if k <= FULL_CHECK_LIMIT || !g.is_abelian() {
            for i in 0..k {
                for j in i..k {
                    let p = inner(&self.irreducibles[i], &self.irreducibles[j])?;
                    if p != if i == j { one.clone() } else { zero.clone() } {
                        return Err(Error::InvalidData(format!(
                            "{} and {} are not orthonormal",
                            self.names[i], self.names[j]
                        )));
                    }
                }
            }
        } else {
            // rows are homomorphisms and distinct, so orthogonality reduces to <chi, 1>
            let triv = &self.irreducibles[0];
            for (i, chi) in self.irreducibles.iter().enumerate() {
                let p = inner(chi, triv)?;
                if p != if i == 0 { one.clone() } else { zero.clone() } {
                    return Err(Error::InvalidData(format!(
                        "{} is not orthogonal to the trivial character",
                        self.names[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the complex conjugate of each irreducible.
    pub fn conj_perm(&self) -> &[usize] {
        &self.conj_perm
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        let one = Cyclotomic::from_int(1, 1);
        self.irreducibles
            .iter()
            .position(|chi| chi.values().iter().all(|v| *v == one))
            .expect("validated tables contain the trivial character")
    }

    /// Permutation matrix of complex conjugation on multiplicity vectors, as rows.
    pub fn conj_matrix(&self) -> Vec<Vec<BigInt>> {
        let k = self.len();
        (0..k)
            .map(|i| {
                let mut r = vec![BigInt::zero(); k];
                r[self.conj_perm[i]] = BigInt::one();
                r
            })
            .collect()
    }
}

fn advance(k: &mut [usize], moduli: &[usize]) {
    for i in (0..k.len()).rev() {
        k[i] += 1;
        if k[i] < moduli[i] {
            return;
        }
        k[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn cyclic_three() {
        let g = arc("cyclic 3");
        let t = CharacterTable::for_group(&g).unwrap();
        assert_eq!(t.len(), 3);
        for j in 0..3 {
            assert_eq!(*t.irreducibles()[j].value(1), Cyclotomic::root(3, j as i64));
        }
        assert_eq!(t.conj_perm(), &[0, 2, 1]);
        assert_eq!(t.names(), &["rho_0", "rho_1", "rho_2"]);
    }

    #[test]
    fn klein_four_is_real() {
        let t = CharacterTable::for_group(&arc("abelian 2 2")).unwrap();
        assert_eq!(t.conj_perm(), &[0, 1, 2, 3]);
    }

    #[test]
    fn invariant_factor_basis_fallback() {
        // generators of orders 4 and 4 in C_2 x C_4 cannot form a direct basis
        let g = arc("perm 6; (1 2 3 4)(5 6); (1 2 3 4)");
        assert!(g.is_abelian());
        let t = CharacterTable::for_group(&g).unwrap();
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn s3_table() {
        let g = arc("perm 3; (1 2 3); (1 2)");
        let t = CharacterTable::for_group(&g).unwrap();
        let degrees: Vec<_> = t
            .irreducibles()
            .iter()
            .map(|c| c.value(0).to_integer().unwrap())
            .collect();
        assert_eq!(
            degrees,
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)]
        );
        assert_eq!(t.trivial_index(), 0);
    }

    #[test]
    fn nonabelian_without_table() {
        let g = arc("perm 4; (1 2 3 4); (1 3)");
        assert!(matches!(
            CharacterTable::for_group(&g),
            Err(Error::MissingTable(_))
        ));
    }

    #[test]
    fn user_table_for_d4() {
        let g = arc("perm 4; (1 2 3 4); (1 3)");
        let cl = g.classes();
        // columns: identity, rotation by 2, rotations by 1, reflections through vertices, through edges
        let find = |pred: &dyn Fn(usize) -> bool| (0..8).find(|&x| pred(x)).unwrap();
        let a = g.parse_element("a").unwrap();
        let b = g.parse_element("b").unwrap();
        let r2 = g.mul(a, a);
        let ab = g.mul(a, b);
        let reps = vec![0, r2, a, b, ab];
        let _ = find;
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 1, 1, 1, 1],
            vec![1, 1, 1, -1, -1],
            vec![1, 1, -1, 1, -1],
            vec![1, 1, -1, -1, 1],
            vec![2, -2, 0, 0, 0],
        ];
        let j = TableJson {
            order: 8,
            classes: reps,
            irreducibles: rows
                .iter()
                .map(|r| r.iter().map(|&v| Cyclotomic::from_int(1, v)).collect())
                .collect(),
        };
        let text = serde_json::to_string(&j).unwrap();
        let back: TableJson = serde_json::from_str(&text).unwrap();
        let t = CharacterTable::from_json(&g, &back).unwrap();
        assert_eq!(t.len(), cl.count());
        let mut bad = back.clone();
        bad.irreducibles[4][1] = Cyclotomic::from_int(1, 2);
        assert!(CharacterTable::from_json(&g, &bad).is_err());
    }
}
