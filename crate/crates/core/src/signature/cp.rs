//! Reports for `C_p` and `C_p x C_p`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{index_report, AGroup, IndexValue, RelationVariant, SignatureContext, SignatureReport};
use crate::class_number::{
    big_string, h_minus_bernoulli, h_minus_maillet, is_prime, relative_class_number,
};
use crate::error::{Error, Result};
use crate::group::{parse_group, Embedding, FiniteGroup};
use crate::lattice::{direct_sum, quotient, IntMatrix, LatticeBasis};
use crate::orbit::{bg_structure, pushforward, restrict, BGStructure, OrbitData};
use crate::signature::{induce_matrix, restrict_matrix};

pub const MAX_CP: u64 = 31;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpExtra {
    pub p: u64,
    #[serde(with = "big_string")]
    pub h_minus_maillet: BigInt,
    #[serde(with = "big_string")]
    pub h_minus_bernoulli: BigInt,
    pub index_equals_h_minus: bool,
}

impl CpExtra {
    pub(crate) fn text_lines(&self) -> Vec<String> {
        vec![
            format!("h_minus_maillet: {}", self.h_minus_maillet),
            format!("h_minus_bernoulli: {}", self.h_minus_bernoulli),
            format!("index_equals_h_minus: {}", self.index_equals_h_minus),
        ]
    }
}

/// Index report for `C_p` with the relative class number computed by both oracles.
pub fn cp_report(p: u64) -> Result<SignatureReport> {
    if p < 3 || p > MAX_CP || !is_prime(p) {
        return Err(Error::OutOfRange(format!(
            "p must be an odd prime at most {MAX_CP}, got {p}"
        )));
    }
    let g = Arc::new(parse_group(&format!("cyclic {p}"))?);
    let ctx = SignatureContext::for_group(&g, RelationVariant::E)?;
    let mut report = index_report(&ctx)?;
    let hm = h_minus_maillet(p)?;
    let hb = h_minus_bernoulli(p)?;
    report.cp = Some(CpExtra {
        p,
        index_equals_h_minus: report.index == IndexValue::Finite(hm.clone()) && hm == hb,
        h_minus_maillet: hm,
        h_minus_bernoulli: hb,
    });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpcpExtra {
    pub p: u64,
    /// Generator of each cyclic subgroup of order `p`.
    pub subgroups: Vec<String>,
    /// `[B_G : sum of Ind B_j]`
    pub b_sub_index: IndexValue,
    /// `[A_G : sum of Ind A_j]`
    pub a_sub_index: IndexValue,
    /// `[A_G : sum of Ind theta_j(B_j)]`
    pub a_theta_sub_index: IndexValue,
    /// `[A_j : theta_j(B_j)]` for each subgroup.
    pub subgroup_indices: Vec<IndexValue>,
    /// Both factorizations of `[A_G : sum of Ind theta_j(B_j)]` agree.
    pub routes_agree: bool,
    pub ind_res_is_p_on_b: bool,
    pub res_ind_is_p_on_b: bool,
    pub ind_res_is_p_on_a: bool,
    pub res_ind_is_p_on_a: bool,
    /// Number of torsion factors of `A_G`.
    pub k: usize,
    pub torsion_all_p: bool,
    #[serde(with = "big_string")]
    pub h_minus: BigInt,
    /// `(h^-)^(p+1)`
    #[serde(with = "big_string")]
    pub predicted_index: BigInt,
    /// `i` with `index = (h^-)^(p+1) p^i`, when such an `i` exists.
    pub exponent_i: Option<i64>,
    pub i_lower: i64,
    pub i_upper: i64,
    pub i_in_range: bool,
    pub index_matches_prediction: bool,
    /// An element of `A_G` whose restrictions all lie in the subgroup images lies in the image.
    pub restriction_criterion: bool,
    /// A family in the `A_j` whose induced sum lies in the image has every member in its image.
    pub induction_criterion: bool,
}

impl CpcpExtra {
    pub(crate) fn text_lines(&self) -> Vec<String> {
        let idx: Vec<String> = self
            .subgroup_indices
            .iter()
            .map(ToString::to_string)
            .collect();
        vec![
            format!("subgroups: {}", self.subgroups.join(" ")),
            format!("b_sub_index: {}", self.b_sub_index),
            format!("a_sub_index: {}", self.a_sub_index),
            format!("a_theta_sub_index: {}", self.a_theta_sub_index),
            format!("subgroup_indices: {}", idx.join(" ")),
            format!("routes_agree: {}", self.routes_agree),
            format!("ind_res_is_p_on_b: {}", self.ind_res_is_p_on_b),
            format!("res_ind_is_p_on_b: {}", self.res_ind_is_p_on_b),
            format!("ind_res_is_p_on_a: {}", self.ind_res_is_p_on_a),
            format!("res_ind_is_p_on_a: {}", self.res_ind_is_p_on_a),
            format!("k: {}", self.k),
            format!("torsion_all_p: {}", self.torsion_all_p),
            format!("h_minus: {}", self.h_minus),
            format!("predicted_index: {}", self.predicted_index),
            format!(
                "exponent_i: {}",
                self.exponent_i
                    .map_or_else(|| "none".to_string(), |i| i.to_string())
            ),
            format!("i_range: [{}, {}]", self.i_lower, self.i_upper),
            format!("i_in_range: {}", self.i_in_range),
            format!(
                "index_matches_prediction: {}",
                self.index_matches_prediction
            ),
            format!("restriction_criterion: {}", self.restriction_criterion),
            format!("induction_criterion: {}", self.induction_criterion),
        ]
    }
}

struct Part {
    emb: Embedding,
    ctx: SignatureContext,
    bg: BGStructure,
    /// `R_j + theta_j(B_j)`
    image: LatticeBasis,
    theta: Vec<Vec<BigInt>>,
    a: AGroup,
    res: IntMatrix,
    ind: IntMatrix,
}

/// `(v_p(n), n / p^v)` for nonzero `n`.
fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    (v, n)
}

fn in_lattice_after(l: &LatticeBasis, v: &[BigInt], minus: &[BigInt], p: u64) -> Result<bool> {
    let diff: Vec<BigInt> = v
        .iter()
        .zip(minus)
        .map(|(a, b)| a - BigInt::from(p) * b)
        .collect();
    l.contains(&diff)
}

/// Index report for `C_p x C_p` (`p` in {3, 5}) with the comparison
/// against its `p + 1` cyclic subgroups of order `p`.
pub fn cpcp_report(p: u64) -> Result<SignatureReport> {
    if p != 3 && p != 5 {
        return Err(Error::OutOfRange(format!("p must be 3 or 5, got {p}")));
    }
    let g: Arc<FiniteGroup> = Arc::new(parse_group(&format!("abelian {p} {p}"))?);
    let ctx = SignatureContext::for_group(&g, RelationVariant::E)?;
    let mut report = index_report(&ctx)?;
    let bg = bg_structure(&g)?;
    let a = ctx.a_group()?;
    let theta_g: Vec<Vec<BigInt>> = report.theta.iter().map(|r| r.0.clone()).collect();
    let image_g = ctx.relations().add_generators(&theta_g)?;

    let (x, y) = (g.generators()[0], g.generators()[1]);
    let mut gens: Vec<usize> = (0..p).map(|j| g.mul(x, g.pow(y, j as i64))).collect();
    gens.push(y);

    let mut parts = Vec::new();
    for &s in &gens {
        let emb = Embedding::cyclic(&g, s)?;
        let cj = SignatureContext::for_group(&emb.sub, RelationVariant::E)?;
        let bj = bg_structure(&emb.sub)?;
        let theta = bj
            .basis
            .iter()
            .map(|b| cj.theta(b))
            .collect::<Result<Vec<_>>>()?;
        let image = cj.relations().add_generators(&theta)?;
        let aj = cj.a_group()?;
        let res = restrict_matrix(ctx.table(), cj.table(), &emb)?;
        let ind = induce_matrix(cj.table(), ctx.table(), &emb)?;
        parts.push(Part {
            emb,
            ctx: cj,
            bg: bj,
            image,
            theta,
            a: aj,
            res,
            ind,
        });
    }

    // B level.
    let n = bg.rank();
    let mut pushed = Vec::new();
    for part in &parts {
        let hom = part.emb.homomorphism();
        for b in &part.bg.basis {
            pushed.push(bg.coordinate_vector(&pushforward(&hom, b)?)?);
        }
    }
    for t in 0..bg.two_torsion {
        let mut v = vec![BigInt::zero(); n];
        v[bg.free_rank + t] = BigInt::from(2);
        pushed.push(v);
    }
    let b_sub_index = IndexValue::from_order(
        quotient(
            &LatticeBasis::full(n),
            &LatticeBasis::from_generators(n, &pushed)?,
        )?
        .quotient
        .order(),
    );

    let mut ind_res_b = true;
    for b in &bg.basis {
        let mut total = OrbitData::empty(&g);
        for part in &parts {
            total = total.add(&pushforward(
                &part.emb.homomorphism(),
                &restrict(b, &part.emb)?,
            )?)?;
        }
        ind_res_b &= total == b.scale(p as i64);
    }
    let mut res_ind_b = true;
    for (j, pj) in parts.iter().enumerate() {
        for b in &pj.bg.basis {
            let up = pushforward(&pj.emb.homomorphism(), b)?;
            for (k, pk) in parts.iter().enumerate() {
                let down = restrict(&up, &pk.emb)?;
                let expect = if j == k {
                    b.scale(p as i64)
                } else {
                    OrbitData::empty(&pk.emb.sub)
                };
                res_ind_b &= down == expect;
            }
        }
    }

    // A level, checked on every lattice generator.
    let mut ind_res_a = true;
    for v in a.lattice.rows() {
        let mut total = vec![BigInt::zero(); ctx.dim()];
        for part in &parts {
            let back = part.ind.vec_mul(&part.res.vec_mul(&v)?)?;
            for (t, b) in total.iter_mut().zip(back) {
                *t += b;
            }
        }
        ind_res_a &= in_lattice_after(ctx.relations(), &total, &v, p)?;
    }
    let mut res_ind_a = true;
    for (j, pj) in parts.iter().enumerate() {
        for v in pj.a.lattice.rows() {
            let up = pj.ind.vec_mul(&v)?;
            for (k, pk) in parts.iter().enumerate() {
                let down = pk.res.vec_mul(&up)?;
                res_ind_a &= if j == k {
                    in_lattice_after(pk.ctx.relations(), &down, &v, p)?
                } else {
                    pk.ctx.relations().contains(&down)?
                };
            }
        }
    }

    // Subgroup images inside A_G.
    let mut induced_a = Vec::new();
    let mut induced_theta = Vec::new();
    for part in &parts {
        for v in part.a.lattice.rows() {
            induced_a.push(part.ind.vec_mul(&v)?);
        }
        for v in &part.theta {
            induced_theta.push(part.ind.vec_mul(v)?);
        }
    }
    let sum_a = ctx.relations().add_generators(&induced_a)?;
    let sum_theta = ctx.relations().add_generators(&induced_theta)?;
    if !a.lattice.contains_lattice(&sum_a)? || !sum_a.contains_lattice(&sum_theta)? {
        return Err(Error::Internal("induced subgroup images leave A_G".into()));
    }
    let a_sub_index = IndexValue::from_order(quotient(&a.lattice, &sum_a)?.quotient.order());
    let a_theta_sub_index =
        IndexValue::from_order(quotient(&a.lattice, &sum_theta)?.quotient.order());
    let subgroup_indices: Vec<IndexValue> = parts
        .iter()
        .map(|pt| {
            Ok(IndexValue::from_order(
                quotient(&pt.a.lattice, &pt.image)?.quotient.order(),
            ))
        })
        .collect::<Result<_>>()?;

    let routes_agree = match (
        report.index.finite(),
        b_sub_index.finite(),
        a_sub_index.finite(),
        a_theta_sub_index.finite(),
    ) {
        (Some(delta), Some(bi), Some(ai), Some(ti)) => {
            let prod: Option<BigInt> = subgroup_indices
                .iter()
                .map(|i| i.finite().cloned())
                .product();
            delta * bi == *ti && prod.is_some_and(|pr| ai * pr == *ti)
        }
        _ => false,
    };

    let torsion = a.map.quotient.torsion();
    let k = torsion.len();
    let torsion_all_p = torsion.iter().all(|t| *t == BigInt::from(p));
    let h_minus = relative_class_number(p)?.h_minus;
    let predicted = num_traits::pow(h_minus.clone(), (p + 1) as usize);
    let exponent_i = report.index.finite().and_then(|delta| {
        let (vd, rd) = split_p(delta, p);
        let (vh, rh) = split_p(&predicted, p);
        (rd == rh).then_some(vd - vh)
    });
    let pi = p as i64;
    let i_lower = 1 - pi + k as i64;
    let i_upper = k as i64 + (pi - 1) * (pi - 1) / 2;
    let i_in_range = exponent_i.is_some_and(|i| i_lower <= i && i <= i_upper);

    // Restriction criterion: S = {a in A_G : Res_j a in image_j for all j}.
    let dims: Vec<usize> = parts.iter().map(|pt| pt.ctx.dim()).collect();
    let total_dim: usize = dims.iter().sum();
    let res_rows: Vec<Vec<BigInt>> = (0..ctx.dim())
        .map(|i| parts.iter().flat_map(|pt| pt.res.row(i).to_vec()).collect())
        .collect();
    let res_total = IntMatrix::from_rows(total_dim, &res_rows)?;
    let images = direct_sum(&parts.iter().map(|pt| pt.image.clone()).collect::<Vec<_>>())?;
    let s = crate::lattice::preimage(&res_total, &images)?.intersect(&a.lattice)?;
    let restriction_criterion = image_g.contains_lattice(&s)?;

    let ind_rows: Vec<Vec<BigInt>> = parts.iter().flat_map(|pt| pt.ind.row_vecs()).collect();
    let ind_total = IntMatrix::from_rows(ctx.dim(), &ind_rows)?;
    let a_parts = direct_sum(
        &parts
            .iter()
            .map(|pt| pt.a.lattice.clone())
            .collect::<Vec<_>>(),
    )?;
    let t = crate::lattice::preimage(&ind_total, &image_g)?.intersect(&a_parts)?;
    let induction_criterion = images.contains_lattice(&t)?;

    report.cpcp = Some(CpcpExtra {
        p,
        subgroups: gens.iter().map(|&s| g.label(s).to_string()).collect(),
        b_sub_index,
        a_sub_index,
        a_theta_sub_index,
        subgroup_indices,
        routes_agree,
        ind_res_is_p_on_b: ind_res_b,
        res_ind_is_p_on_b: res_ind_b,
        ind_res_is_p_on_a: ind_res_a,
        res_ind_is_p_on_a: res_ind_a,
        k,
        torsion_all_p,
        index_matches_prediction: report.index.finite() == Some(&predicted),
        h_minus,
        predicted_index: predicted,
        exponent_i,
        i_lower,
        i_upper,
        i_in_range,
        restriction_criterion,
        induction_criterion,
    });
    Ok(report)
}
