//! Compatibility of `theta` with restriction, induction and conjugation.

use num_bigint::BigInt;

use super::SignatureContext;
use crate::error::{Error, Result};
use crate::group::Embedding;
use crate::lattice::IntMatrix;
use crate::orbit::{pushforward, restrict, OrbitData};
use crate::rep::{induce, multiplicities, restrict_cf, CharacterTable};

fn check_tables(emb: &Embedding, big: &CharacterTable, small: &CharacterTable) -> Result<()> {
    if !emb.parent.same_as(big.group()) || !emb.sub.same_as(small.group()) {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// Row `i` holds the multiplicities of `Res chi_i` over the subgroup's irreducibles.
pub fn restrict_matrix(
    tg: &CharacterTable,
    tk: &CharacterTable,
    emb: &Embedding,
) -> Result<IntMatrix> {
    check_tables(emb, tg, tk)?;
    let rows = tg
        .irreducibles()
        .iter()
        .map(|chi| Ok(multiplicities(&restrict_cf(chi, emb)?, tk)?.coeffs))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(tk.len(), &rows)
}

/// Row `i` holds the multiplicities of `Ind psi_i` over the parent's irreducibles.
pub fn induce_matrix(
    th: &CharacterTable,
    tg: &CharacterTable,
    emb: &Embedding,
) -> Result<IntMatrix> {
    check_tables(emb, tg, th)?;
    let rows = th
        .irreducibles()
        .iter()
        .map(|psi| Ok(multiplicities(&induce(psi, emb)?, tg)?.coeffs))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(tg.len(), &rows)
}

/// `theta_K(Res d)` against `Res(theta_G(d))`, the latter taken on a lift.
pub fn verify_res_square(
    g: &SignatureContext,
    k: &SignatureContext,
    emb: &Embedding,
    d: &OrbitData,
) -> Result<bool> {
    let m = restrict_matrix(g.table(), k.table(), emb)?;
    let direct = k.theta(&restrict(d, emb)?)?;
    let via = k.reduce(&m.vec_mul(&g.theta_lift(d, 0)?)?)?;
    Ok(direct == via)
}

/// `theta_G(Ind d)` against `Ind(theta_H(d))` for data `d` on the subgroup.
pub fn verify_ind_square(
    h: &SignatureContext,
    g: &SignatureContext,
    emb: &Embedding,
    d: &OrbitData,
) -> Result<bool> {
    let m = induce_matrix(h.table(), g.table(), emb)?;
    let direct = g.theta(&pushforward(&emb.homomorphism(), d)?)?;
    let via = g.reduce(&m.vec_mul(&h.theta_lift(d, 0)?)?)?;
    Ok(direct == via)
}

/// `theta(-d)` against the conjugate of `theta(d)`.
pub fn verify_conj(ctx: &SignatureContext, d: &OrbitData) -> Result<bool> {
    let direct = ctx.theta(&d.neg())?;
    let lift: Vec<BigInt> = ctx.theta_lift(d, 0)?;
    Ok(direct == ctx.reduce(&ctx.conj(&lift))?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{parse_group, FiniteGroup, Subgroup};
    use crate::orbit::{bg_structure, parse_data};
    use crate::signature::RelationVariant;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn frobenius_reciprocity_between_matrices() {
        let g = arc("perm 3; (1 2 3); (1 2)");
        let tg = CharacterTable::for_group(&g).unwrap();
        for y in ["a", "b"] {
            let h = Subgroup::generated(&g, &[g.parse_element(y).unwrap()]);
            let emb = Embedding::new(&g, &h, None).unwrap();
            let th = CharacterTable::for_group(&emb.sub).unwrap();
            let r = restrict_matrix(&tg, &th, &emb).unwrap();
            let i = induce_matrix(&th, &tg, &emb).unwrap();
            assert!(r == i.transpose());
        }
    }

    #[test]
    fn squares_commute_for_c6() {
        let g = arc("cyclic 6");
        let gctx = SignatureContext::for_group(&g, RelationVariant::E).unwrap();
        let x = g.generators()[0];
        for y in [g.pow(x, 2), g.pow(x, 3)] {
            let emb = Embedding::cyclic(&g, y).unwrap();
            let kctx = SignatureContext::for_group(&emb.sub, RelationVariant::E).unwrap();
            for b in &bg_structure(&g).unwrap().basis {
                assert!(verify_res_square(&gctx, &kctx, &emb, b).unwrap());
                assert!(verify_conj(&gctx, b).unwrap());
            }
            for b in &bg_structure(&emb.sub).unwrap().basis {
                assert!(verify_ind_square(&kctx, &gctx, &emb, b).unwrap());
            }
        }
    }

    #[test]
    fn squares_commute_for_s3() {
        let g = arc("perm 3; (1 2 3); (1 2)");
        let gctx = SignatureContext::for_group(&g, RelationVariant::E).unwrap();
        let a = parse_data(&g, "[a, a^2]").unwrap();
        for y in [g.parse_element("a").unwrap(), g.parse_element("b").unwrap()] {
            let emb = Embedding::cyclic(&g, y).unwrap();
            let kctx = SignatureContext::for_group(&emb.sub, RelationVariant::E).unwrap();
            assert!(verify_res_square(&gctx, &kctx, &emb, &a).unwrap());
            for b in &bg_structure(&emb.sub).unwrap().basis {
                assert!(verify_ind_square(&kctx, &gctx, &emb, b).unwrap());
            }
        }
    }
}
