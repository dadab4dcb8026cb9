//! Hermite and Smith normal forms with unimodular certificates.
//!
//! Row convention throughout: a matrix stands for the lattice spanned by its
//! rows. Every result is re-verified by multiplication before it is returned,
//! and each transform is returned together with its inverse so unimodularity
//! is certified by `U * U^-1 = I`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use std::sync::atomic::{AtomicUsize, Ordering};

use super::matrix::{mod_floor, IntMatrix};
use crate::error::{Error, Result};

static CALLS: AtomicUsize = AtomicUsize::new(0);
static VERIFIED: AtomicUsize = AtomicUsize::new(0);

/// Process-wide `(normal forms computed, certificates verified)`.
pub fn certificate_counts() -> (usize, usize) {
    (
        CALLS.load(Ordering::SeqCst),
        VERIFIED.load(Ordering::SeqCst),
    )
}

/// `U * M = H` with `H` in row Hermite normal form.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// Pivot column of each nonzero row of `h`; rows beyond `pivots.len()` are zero.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `U * M * V = D` with `D` diagonal, `d_1 | d_2 | ...`, zeros last.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Index of the nonzero entry of least absolute value, lowest index on ties.
fn min_abs<'a>(entries: impl Iterator<Item = (usize, &'a BigInt)>) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for (idx, e) in entries {
        if e.is_zero() {
            continue;
        }
        let a = e.abs();
        if best.as_ref().map_or(true, |(_, b)| a < *b) {
            best = Some((idx, a));
        }
    }
    best.map(|(i, _)| i)
}

pub fn hnf(m: &IntMatrix) -> Result<Hnf> {
    CALLS.fetch_add(1, Ordering::SeqCst);
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let Some(p) = min_abs((r..rows).map(|i| (i, a.get(i, c)))) else {
                break;
            };
            found = true;
            if p != r {
                a.swap_rows(p, r);
                u.swap_rows(p, r);
                u_inv.swap_cols(p, r);
            }
            let mut done = true;
            for i in r + 1..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = a.get(i, c) / a.get(r, c);
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_row_multiple(i, r, &nq);
                    u.add_row_multiple(i, r, &nq);
                    // (I - q e_i e_r^T)^-1 = I + q e_i e_r^T, applied on the right
                    u_inv.add_col_multiple(r, i, &q);
                }
                if !a.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !found {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
            u.negate_row(r);
            negate_col(&mut u_inv, r);
        }
        let pivot = a.get(r, c).clone();
        for i in 0..r {
            let e = a.get(i, c).clone();
            let q = (&e - mod_floor(&e, &pivot)) / &pivot;
            if !q.is_zero() {
                let nq = -&q;
                a.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
                u_inv.add_col_multiple(r, i, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }

    let out = Hnf {
        h: a,
        u,
        u_inv,
        pivots,
    };
    verify_hnf(m, &out)?;
    Ok(out)
}

fn negate_col(m: &mut IntMatrix, j: usize) {
    for i in 0..m.rows() {
        let v = -m.get(i, j).clone();
        m.set(i, j, v);
    }
}

fn verify_hnf(m: &IntMatrix, f: &Hnf) -> Result<()> {
    if f.u.mul(m)? != f.h {
        return Err(Error::Internal("HNF certificate U*M != H".into()));
    }
    if !f.u.mul(&f.u_inv)?.is_identity() {
        return Err(Error::Internal("HNF transform is not unimodular".into()));
    }
    let h = &f.h;
    for (k, &p) in f.pivots.iter().enumerate() {
        if !h.get(k, p).is_positive() || (0..p).any(|j| !h.get(k, j).is_zero()) {
            return Err(Error::Internal("HNF pivot structure broken".into()));
        }
        if k > 0 && f.pivots[k - 1] >= p {
            return Err(Error::Internal("HNF pivots not increasing".into()));
        }
        for i in 0..k {
            let e = h.get(i, p);
            if e.is_negative() || e >= h.get(k, p) {
                return Err(Error::Internal("HNF entry above pivot not reduced".into()));
            }
        }
    }
    for i in f.pivots.len()..h.rows() {
        if h.row(i).iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal("HNF has nonzero row below rank".into()));
        }
    }
    VERIFIED.fetch_add(1, Ordering::SeqCst);
    Ok(())
}

pub fn snf(m: &IntMatrix) -> Result<Snf> {
    CALLS.fetch_add(1, Ordering::SeqCst);
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let sub = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
            let cells: Vec<(usize, usize)> = sub.collect();
            let Some(best) = min_abs(
                cells
                    .iter()
                    .enumerate()
                    .map(|(k, &(i, j))| (k, a.get(i, j))),
            ) else {
                break;
            };
            let (pi, pj) = cells[best];
            if pi != t {
                a.swap_rows(pi, t);
                u.swap_rows(pi, t);
                u_inv.swap_cols(pi, t);
            }
            if pj != t {
                a.swap_cols(pj, t);
                v.swap_cols(pj, t);
                v_inv.swap_rows(pj, t);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t) / a.get(t, t);
                let nq = -&q;
                a.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                u_inv.add_col_multiple(t, i, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / a.get(t, t);
                let nq = -&q;
                a.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                v_inv.add_row_multiple(t, j, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            let pivot = a.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            negate_col(&mut u_inv, t);
        }
    }

    let out = Snf {
        u,
        d: a,
        v,
        u_inv,
        v_inv,
    };
    verify_snf(m, &out)?;
    Ok(out)
}

fn verify_snf(m: &IntMatrix, f: &Snf) -> Result<()> {
    if f.u.mul(m)?.mul(&f.v)? != f.d {
        return Err(Error::Internal("SNF certificate U*M*V != D".into()));
    }
    if !f.u.mul(&f.u_inv)?.is_identity() || !f.v.mul(&f.v_inv)?.is_identity() {
        return Err(Error::Internal("SNF transform is not unimodular".into()));
    }
    for i in 0..f.d.rows() {
        for j in 0..f.d.cols() {
            if i != j && !f.d.get(i, j).is_zero() {
                return Err(Error::Internal("SNF result is not diagonal".into()));
            }
        }
    }
    let diag = f.diagonal();
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        };
        if !ok || w[0].is_negative() {
            return Err(Error::Internal("SNF divisibility chain broken".into()));
        }
    }
    VERIFIED.fetch_add(1, Ordering::SeqCst);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::to_big;

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(3);
        assert_eq!(hnf(&i).unwrap().h, i);
        let s = snf(&i).unwrap();
        assert_eq!(s.diagonal(), to_big(&[1, 1, 1]));
    }

    #[test]
    fn diag_2_3_has_smith_form_1_6() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let s = snf(&m).unwrap();
        assert_eq!(s.diagonal(), to_big(&[1, 6]));
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::from(1));
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn hnf_of_cyclic_three_relations() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 0, 0]]);
        let h = hnf(&m).unwrap();
        assert_eq!(
            h.h,
            IntMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 1]])
        );
        assert_eq!(h.pivots, vec![0, 1]);
    }

    #[test]
    fn rank_deficient_and_empty_inputs() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 0, 0]]);
        let h = hnf(&m).unwrap();
        assert_eq!(h.rank(), 1);
        assert_eq!(h.h.row(0), to_big(&[1, 2, 3]).as_slice());
        let s = snf(&m).unwrap();
        assert_eq!(s.diagonal(), to_big(&[1, 0, 0]));
        let e = IntMatrix::zeros(0, 4);
        assert_eq!(hnf(&e).unwrap().rank(), 0);
        assert!(snf(&e).unwrap().diagonal().is_empty());
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) disguised; also diag(4, 6) -> (2, 12)
        let m = IntMatrix::from_i64_rows(&[vec![4, 0], vec![0, 6]]);
        assert_eq!(snf(&m).unwrap().diagonal(), to_big(&[2, 12]));
        let m = IntMatrix::from_i64_rows(&[vec![6, 4, 2], vec![10, -4, 8], vec![3, 3, 3]]);
        let d = snf(&m).unwrap().diagonal();
        // det = 6(-12-24) - 4(30-24) + 2(30+12) = -216 - 24 + 84 = -156
        let prod: BigInt = d.iter().product();
        assert_eq!(prod, BigInt::from(156));
    }
}
