//! Self-check suite behind the `verify` command. Every check recomputes a
//! known value or an identity from scratch and reports PASS or FAIL.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class_number::{h_minus_bernoulli, h_minus_maillet, relative_class_number};
use crate::error::{Error, Result};
use crate::group::{parse_group, subgroups, Embedding, FiniteGroup, SubgroupMode};
use crate::lattice::certificate_counts;
use crate::orbit::{
    bg_structure, double_coset_check, fixed_point_count, format_data, genus, parse_data, realize,
    realize_minimal, BGStructure, OrbitData,
};
use crate::rep::{
    action_character, cyclic_multiplicities, multiplicities, rational_lattice_check, CharacterTable,
};
use crate::signature::{
    cp_report, cpcp_report, default_dprime, index_report, verify_conj, verify_ind_square,
    verify_res_square, IndexValue, RelationVariant, SignatureContext,
};

pub const SEED: u64 = 0x5eed_0001;

/// Groups every structural check runs over.
pub const CORPUS: &[&str] = &[
    "cyclic 1",
    "cyclic 2",
    "cyclic 3",
    "cyclic 4",
    "cyclic 5",
    "cyclic 6",
    "cyclic 7",
    "cyclic 8",
    "cyclic 9",
    "cyclic 10",
    "cyclic 12",
    "abelian 2 2",
    "abelian 2 4",
    "abelian 3 3",
    "perm 3; (1 2 3); (1 2)",
    "perm 4; (1 2 3 4); (1 3)",
    "perm 4; (1 2 3); (1 2)(3 4)",
];

pub const S3: &str = "perm 3; (1 2 3); (1 2)";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {}", self.name)
        } else {
            format!("{status} {} ({})", self.name, self.detail)
        }
    }
}

pub fn arc(spec: &str) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(parse_group(spec)?))
}

/// Random element of `B_G`: coefficients in `[-2, 2]` on the free basis
/// and random torsion bits, optionally followed by a random cancelling pair
/// left unreduced.
pub fn sample_data(bg: &BGStructure, rng: &mut ChaCha8Rng, with_pair: bool) -> Result<OrbitData> {
    let free: Vec<BigInt> = (0..bg.free_rank)
        .map(|_| BigInt::from(rng.gen_range(-2i64..=2)))
        .collect();
    let tors: Vec<BigInt> = (0..bg.two_torsion)
        .map(|_| BigInt::from(rng.gen_range(0i64..=1)))
        .collect();
    let d = bg.from_coords(&free, &tors)?;
    let g = bg.group();
    if with_pair && g.order() > 1 && rng.gen_bool(0.5) {
        let c = rng.gen_range(1..g.classes().count());
        let cl = g.classes();
        let mut m = vec![0u64; cl.count()];
        m[c] += 1;
        m[cl.inverse_class(c)] += 1;
        return Ok(d.add_unreduced(&OrbitData::from_class_mult(g, m)?));
    }
    Ok(d)
}

/// Reduction must be idempotent, preserve the class in `B_G`, and give the
/// same result whichever part of a sum was reduced first.
pub fn confluence_check(
    bg: &BGStructure,
    samples: &[OrbitData],
    reducer: &dyn Fn(&OrbitData) -> OrbitData,
) -> Result<bool> {
    for d in samples {
        let r = reducer(d);
        if reducer(&r) != r || bg.coordinates(&r)? != bg.coordinates(d)? {
            return Ok(false);
        }
    }
    for a in samples {
        for b in samples {
            let whole = reducer(&a.add_unreduced(b));
            if whole != reducer(&reducer(a).add_unreduced(b))
                || whole != reducer(&a.add_unreduced(&reducer(b)))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A deliberately wrong reduction that drops every ambivalent class
/// outright, for fault injection.
pub fn tampered_reduce(d: &OrbitData) -> OrbitData {
    let cl = d.group().classes();
    let mut m = d.reduce().mult().to_vec();
    for (c, x) in m.iter_mut().enumerate() {
        if cl.is_ambivalent(c) {
            *x = 0;
        }
    }
    OrbitData::from_class_mult(d.group(), m).unwrap_or_else(|_| OrbitData::empty(d.group()))
}

type Outcome = Result<(bool, String)>;

fn ok(b: bool) -> Outcome {
    Ok((b, String::new()))
}

fn structure_is(spec: &str, r: usize, s: usize) -> Result<bool> {
    let st = bg_structure(&arc(spec)?)?;
    Ok(st.free_rank == r && st.two_torsion == s)
}

fn check_cyclic_structure() -> Outcome {
    let mut good = true;
    for m in [3usize, 5, 7, 9, 15] {
        good &= structure_is(&format!("cyclic {m}"), (m - 1) / 2, 0)?;
    }
    for m in [4usize, 6, 8, 12] {
        good &= structure_is(&format!("cyclic {m}"), m / 2 - 1, 0)?;
    }
    good &= structure_is("cyclic 2", 0, 0)?;
    good &= structure_is("cyclic 1", 0, 0)?;
    ok(good)
}

fn check_small_structures() -> Outcome {
    let g = arc("abelian 2 2")?;
    let st = bg_structure(&g)?;
    let gen = parse_data(&g, "[x, y, xy]")?;
    let generated = st.free_rank == 0
        && st.two_torsion == 1
        && st.coordinates(&gen)?.torsion == vec![1]
        && gen.scale(2).is_empty();
    ok(generated && structure_is("abelian 3 3", 4, 0)? && structure_is(S3, 0, 1)?)
}

fn check_confluence(tamper: bool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let plain = |d: &OrbitData| d.reduce();
    let reducer: &dyn Fn(&OrbitData) -> OrbitData = if tamper { &tampered_reduce } else { &plain };
    for spec in ["cyclic 6", "abelian 2 2", S3, "perm 4; (1 2 3 4); (1 3)"] {
        let bg = bg_structure(&arc(spec)?)?;
        let samples = (0..8)
            .map(|_| sample_data(&bg, &mut rng, true))
            .collect::<Result<Vec<_>>>()?;
        if !confluence_check(&bg, &samples, reducer)? {
            return Ok((false, format!("fails on {spec}")));
        }
    }
    ok(true)
}

fn check_cp_index(primes: &[u64]) -> Outcome {
    let mut detail = Vec::new();
    let mut good = true;
    for &p in primes {
        let r = cp_report(p)?;
        let extra =
            r.cp.as_ref()
                .ok_or_else(|| Error::Internal("missing C_p extras".into()))?;
        good &= extra.index_equals_h_minus && r.injective_on_free;
        detail.push(format!("p={p}: {}", r.index));
    }
    Ok((good, detail.join(", ")))
}

fn check_oracles() -> Outcome {
    for p in (3..=100u64).filter(|&p| crate::class_number::is_prime(p)) {
        if h_minus_maillet(p)? != h_minus_bernoulli(p)? {
            return Ok((false, format!("p={p}")));
        }
    }
    let small = [3u64, 5, 7, 11, 13, 17, 19].iter().all(|&p| {
        relative_class_number(p)
            .map(|r| r.h_minus.is_one())
            .unwrap_or(false)
    });
    ok(small)
}

fn check_cpcp3() -> Outcome {
    let r = cpcp_report(3)?;
    let x = r
        .cpcp
        .as_ref()
        .ok_or_else(|| Error::Internal("missing extras".into()))?;
    let good = r.index == IndexValue::Finite(BigInt::one())
        && x.b_sub_index == IndexValue::Finite(BigInt::from(9))
        && x.a_sub_index == IndexValue::Finite(BigInt::from(9))
        && x.ind_res_is_p_on_b
        && x.res_ind_is_p_on_b
        && x.ind_res_is_p_on_a
        && x.res_ind_is_p_on_a
        && x.routes_agree
        && x.restriction_criterion
        && x.induction_criterion;
    Ok((good, format!("index {}, k {}", r.index, x.k)))
}

fn check_cpcp5() -> Outcome {
    let t = Instant::now();
    let r = cpcp_report(5)?;
    let x = r
        .cpcp
        .as_ref()
        .ok_or_else(|| Error::Internal("missing extras".into()))?;
    let good = x.b_sub_index == IndexValue::Finite(BigInt::from(625))
        && x.ind_res_is_p_on_b
        && x.res_ind_is_p_on_b
        && x.ind_res_is_p_on_a
        && x.res_ind_is_p_on_a
        && x.routes_agree
        && x.i_in_range;
    Ok((
        good,
        format!(
            "index {} vs (h^-)^6 = {}, i = {:?}, {:.1?}",
            r.index,
            x.predicted_index,
            x.exponent_i,
            t.elapsed()
        ),
    ))
}

/// Groups with a built-in table used by the sampled signature checks.
const TABLE_GROUPS: &[&str] = &[
    "cyclic 5",
    "cyclic 6",
    "cyclic 8",
    "cyclic 9",
    "cyclic 12",
    "abelian 2 2",
    "abelian 2 4",
    "abelian 3 3",
    S3,
];

fn check_additive(pairs: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for spec in TABLE_GROUPS {
        let g = arc(spec)?;
        let bg = bg_structure(&g)?;
        let ctx = SignatureContext::for_group(&g, RelationVariant::E)?;
        for _ in 0..pairs {
            let a = sample_data(&bg, &mut rng, true)?;
            let b = sample_data(&bg, &mut rng, true)?;
            let lhs = ctx.theta(&a.add(&b)?)?;
            let ta = ctx.theta(&a)?;
            let tb = ctx.theta(&b)?;
            let sum: Vec<BigInt> = ta.iter().zip(&tb).map(|(x, y)| x + y).collect();
            if lhs != ctx.reduce(&sum)? {
                return Ok((
                    false,
                    format!("{spec}: {} + {}", format_data(&a), format_data(&b)),
                ));
            }
        }
    }
    ok(true)
}

fn check_injective(full: bool) -> Outcome {
    let mut specs: Vec<String> = (1..=30).map(|n| format!("cyclic {n}")).collect();
    specs.push("abelian 3 3".into());
    if full {
        specs.push("abelian 5 5".into());
    }
    for spec in &specs {
        let ctx = SignatureContext::for_group(&arc(spec)?, RelationVariant::E)?;
        let r = index_report(&ctx)?;
        if !r.injective_on_free || r.index == IndexValue::Infinite {
            return Ok((false, spec.clone()));
        }
    }
    ok(true)
}

fn check_conj_and_order_two() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut seen_two = 0;
    for spec in TABLE_GROUPS {
        let g = arc(spec)?;
        let bg = bg_structure(&g)?;
        let ctx = SignatureContext::for_group(&g, RelationVariant::E)?;
        let mut samples = bg.basis.clone();
        for _ in 0..10 {
            samples.push(sample_data(&bg, &mut rng, true)?);
        }
        for d in &samples {
            if !verify_conj(&ctx, d)? {
                return Ok((
                    false,
                    format!("conjugation fails on {spec} {}", format_data(d)),
                ));
            }
            if d.has_order_at_most_two() {
                seen_two += 1;
                let t = ctx.theta(d)?;
                if t != ctx.reduce(&ctx.conj(&t))? {
                    return Ok((
                        false,
                        format!("{spec} {} not self-conjugate", format_data(d)),
                    ));
                }
            }
        }
    }
    Ok((seen_two > 0, format!("{seen_two} order-two samples")))
}

/// (parent context, subgroup context, embedding, whether the parent variant
/// needs reduced inputs)
fn square_cases() -> Result<Vec<(SignatureContext, SignatureContext, Embedding, bool)>> {
    let mut out = Vec::new();
    for (spec, n, k) in [("cyclic 9", 9usize, 3usize), ("cyclic 12", 12, 4)] {
        let g = arc(spec)?;
        let x = g.generators()[0];
        let emb = Embedding::cyclic(&g, g.pow(x, (n / k) as i64))?;
        let gc = SignatureContext::for_group(&g, RelationVariant::E)?;
        let kc = SignatureContext::for_group(&emb.sub, RelationVariant::E)?;
        out.push((gc, kc, emb, false));
    }
    let s3 = arc(S3)?;
    let emb = Embedding::cyclic(&s3, s3.parse_element("a")?)?;
    let gc = SignatureContext::for_group(&s3, RelationVariant::Dprime(default_dprime(&s3)?))?;
    let kc = SignatureContext::for_group(&emb.sub, RelationVariant::E)?;
    out.push((gc, kc, emb, true));
    let g = arc("abelian 3 3")?;
    let gc = SignatureContext::for_group(&g, RelationVariant::E)?;
    let (x, y) = (g.generators()[0], g.generators()[1]);
    let mut gens: Vec<usize> = (0..3).map(|j| g.mul(x, g.pow(y, j))).collect();
    gens.push(y);
    for s in gens {
        let emb = Embedding::cyclic(&g, s)?;
        let kc = SignatureContext::for_group(&emb.sub, RelationVariant::E)?;
        out.push((gc.clone(), kc, emb, false));
    }
    Ok(out)
}

fn check_squares() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for (gc, kc, emb, reduced_only) in square_cases()? {
        let bg = bg_structure(gc.group())?;
        let bk = bg_structure(kc.group())?;
        let mut up = bg.basis.clone();
        let mut down = bk.basis.clone();
        for _ in 0..6 {
            let d = sample_data(&bg, &mut rng, true)?;
            up.push(if reduced_only { d.reduce() } else { d });
            down.push(sample_data(&bk, &mut rng, true)?);
        }
        for d in &up {
            if !verify_res_square(&gc, &kc, &emb, d)? {
                return Ok((
                    false,
                    format!("restriction to {} on {}", kc.group().name(), format_data(d)),
                ));
            }
        }
        for d in &down {
            if !verify_ind_square(&kc, &gc, &emb, d)? {
                return Ok((
                    false,
                    format!("induction from {} on {}", kc.group().name(), format_data(d)),
                ));
            }
        }
    }
    ok(true)
}

fn check_double_cosets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut count = 0;
    for spec in CORPUS {
        let g = arc(spec)?;
        let subs: Vec<Embedding> = subgroups(&g, SubgroupMode::All)?
            .iter()
            .map(|c| Embedding::new(&g, &c.rep, None))
            .collect::<Result<_>>()?;
        for h in &subs {
            let bh = bg_structure(&h.sub)?;
            let samples = (0..2)
                .map(|_| sample_data(&bh, &mut rng, true))
                .collect::<Result<Vec<_>>>()?;
            for k in &subs {
                for d in &samples {
                    count += 1;
                    if !double_coset_check(h, k, d)? {
                        return Ok((false, format!("{spec}: {}", format_data(d))));
                    }
                }
            }
        }
    }
    Ok((true, format!("{count} cases")))
}

fn check_multiplicity_examples() -> Outcome {
    for n in 4..=12u64 {
        for h in 0..=3i64 {
            let free = cyclic_multiplicities(n, &[], h)?;
            let expect: Vec<i64> = (0..n).map(|j| if j == 0 { h } else { h - 1 }).collect();
            if free != expect {
                return Ok((false, format!("free action, n={n}, h={h}")));
            }
            for i in 1..n {
                let k = num_integer::gcd(n, i);
                let got = cyclic_multiplicities(n, &[i, n - i], h)?;
                let expect: Vec<i64> = (0..n)
                    .map(|j| {
                        if j == 0 {
                            h
                        } else if j % (n / k) == 0 {
                            h - 1
                        } else {
                            h
                        }
                    })
                    .collect();
                if got != expect {
                    return Ok((false, format!("pair x^{i}, x^{} over C_{n}, h={h}", n - i)));
                }
            }
        }
    }
    ok(true)
}

fn check_lefschetz_and_dimension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut count = 0;
    for spec in TABLE_GROUPS {
        let g = arc(spec)?;
        let bg = bg_structure(&g)?;
        let t = CharacterTable::for_group(&g)?;
        let mut samples = bg.basis.clone();
        for _ in 0..5 {
            samples.push(sample_data(&bg, &mut rng, true)?);
        }
        for d in &samples {
            let w = realize(d)?;
            let phi = action_character(d, &w)?;
            let gg = genus(d, w.h as u64)?;
            let dim = phi.value(0).to_integer();
            let m = multiplicities(&phi, &t)?;
            let deg: BigInt = m
                .coeffs
                .iter()
                .zip(t.irreducibles())
                .map(|(c, chi)| c * chi.value(0).to_integer().unwrap_or_default())
                .sum();
            if dim != Some(BigInt::from(gg)) || deg != BigInt::from(gg) {
                return Ok((false, format!("dimension on {spec} {}", format_data(d))));
            }
            let both = phi.add(&phi.conj())?;
            for c in 1..g.classes().count() {
                let y = g.classes().rep(c);
                let expect = BigInt::from(2) - BigInt::from(fixed_point_count(d, y)?);
                count += 1;
                if both.value(c).to_integer() != Some(expect) {
                    return Ok((false, format!("fixed points of {} on {spec}", g.label(y))));
                }
            }
        }
    }
    Ok((true, format!("{count} elements")))
}

fn check_s3_character() -> Outcome {
    let g = arc(S3)?;
    let t = CharacterTable::for_group(&g)?;
    let d = parse_data(&g, "[a]")?;
    let w = realize_minimal(&d)?;
    w.verify(&d)?;
    let good = w.h == 1
        && genus(&d, 1)? == 3
        && multiplicities(&action_character(&d, &w)?, &t)?.coeffs
            == vec![BigInt::one(), BigInt::zero(), BigInt::one()];
    ok(good)
}

fn check_rational_lattice() -> Outcome {
    for n in 1..=30 {
        if !rational_lattice_check(n)? {
            return Ok((false, format!("n={n}")));
        }
    }
    ok(true)
}

fn check_realizability() -> Outcome {
    let mut count = 0;
    for spec in CORPUS {
        let g = arc(spec)?;
        for d in &bg_structure(&g)?.basis {
            let w = realize(d)?;
            w.verify(d)?;
            genus(d, w.h as u64)?;
            count += 1;
        }
    }
    Ok((true, format!("{count} basis elements")))
}

fn check_theta_prime() -> Outcome {
    let g = arc(S3)?;
    let ctx = SignatureContext::for_group(&g, RelationVariant::Dprime(default_dprime(&g)?))?;
    let checks = ctx.well_definedness()?;
    let failing: Vec<&str> = checks
        .iter()
        .filter(|c| !c.vanishes)
        .map(|c| c.data.as_str())
        .collect();
    let chi2 = vec![BigInt::zero(), BigInt::zero(), BigInt::one()];
    let a = ctx.theta(&parse_data(&g, "[a]")?)?;
    Ok((
        failing == ["[b^2]"] && a == chi2,
        format!("nonvanishing: {}", failing.join(" ")),
    ))
}

fn check_certificates(before: (usize, usize)) -> Outcome {
    let (calls, verified) = certificate_counts();
    let fresh = calls - before.0;
    Ok((
        fresh > 0 && calls == verified,
        format!("{fresh} normal forms"),
    ))
}

type CheckFn = Box<dyn Fn() -> Outcome>;

fn checks(level: Level, tamper: bool) -> Vec<(&'static str, CheckFn)> {
    let full = level == Level::Full;
    let mut list: Vec<(&'static str, CheckFn)> = vec![
        (
            "B_G structure of cyclic groups",
            Box::new(check_cyclic_structure),
        ),
        (
            "B_G structure of C2xC2, C3xC3 and S3",
            Box::new(check_small_structures),
        ),
        (
            "reduction is confluent",
            Box::new(move || check_confluence(tamper)),
        ),
        (
            "C_p index equals h^- for p <= 19",
            Box::new(|| check_cp_index(&[3, 5, 7, 11, 13, 17, 19])),
        ),
        (
            "class number oracles agree for p <= 100",
            Box::new(check_oracles),
        ),
        ("C3xC3 against its cyclic subgroups", Box::new(check_cpcp3)),
        (
            "theta is additive",
            Box::new(move || check_additive(if full { 100 } else { 20 })),
        ),
        (
            "theta injective on free part",
            Box::new(move || check_injective(full)),
        ),
        (
            "theta(-d) is the conjugate coset; order-two data are self-conjugate",
            Box::new(check_conj_and_order_two),
        ),
        (
            "restriction and induction squares commute",
            Box::new(check_squares),
        ),
        ("double coset formula", Box::new(check_double_cosets)),
        (
            "multiplicity formula for free actions and cancelling pairs",
            Box::new(check_multiplicity_examples),
        ),
        (
            "dimension and fixed-point identities",
            Box::new(check_lefschetz_and_dimension),
        ),
        (
            "S3 character of [a] at genus 3",
            Box::new(check_s3_character),
        ),
        (
            "integral characters of C_n for n <= 30",
            Box::new(check_rational_lattice),
        ),
        (
            "every B_G basis element is realized",
            Box::new(check_realizability),
        ),
        (
            "theta' on S3 with the reduced relation list",
            Box::new(check_theta_prime),
        ),
    ];
    if full {
        list.push((
            "B_G structure of C5xC5",
            Box::new(|| ok(structure_is("abelian 5 5", 12, 0)?)),
        ));
        list.push((
            "C_23 index equals h^- = 3",
            Box::new(|| check_cp_index(&[23])),
        ));
        list.push(("C5xC5 against its cyclic subgroups", Box::new(check_cpcp5)));
    }
    list
}

/// Runs the suite, one result per check, ending with the certificate count.
pub fn run(level: Level, tamper: bool) -> Vec<CheckResult> {
    let before = certificate_counts();
    let mut out: Vec<CheckResult> = checks(level, tamper)
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    let (passed, detail) = check_certificates(before).unwrap_or((false, String::new()));
    out.push(CheckResult {
        name: "normal form certificates verified".into(),
        passed,
        detail,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampered_reduction_is_caught() {
        assert!(check_confluence(false).unwrap().0);
        assert!(!check_confluence(true).unwrap().0);
    }

    #[test]
    fn samples_satisfy_psi() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bg = bg_structure(&arc(S3).unwrap()).unwrap();
        for _ in 0..20 {
            assert!(sample_data(&bg, &mut rng, true).unwrap().psi_vanishes());
        }
    }
}
