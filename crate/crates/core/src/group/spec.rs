//! Group-spec grammar: `cyclic n`, `abelian n1 ... nk`, `perm d; (1 2 3); (1 2)`.

use super::{bfs_closure, order_cap, FiniteGroup};
use crate::error::{Error, Result};

const ABELIAN_NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

fn abelian_gen_name(i: usize) -> String {
    ABELIAN_NAMES
        .get(i)
        .map_or_else(|| format!("g{}", i + 1), |s| s.to_string())
}

fn perm_gen_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{}", i + 1)
    }
}

pub fn parse_group(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let (head, rest) = match spec.split_once(';') {
        Some((h, r)) => (h.trim(), Some(r)),
        None => (spec, None),
    };
    let mut words = head.split_whitespace();
    let kind = words
        .next()
        .ok_or_else(|| Error::Parse("empty group spec".into()))?;
    let nums: Vec<&str> = words.collect();
    match kind {
        "cyclic" | "abelian" => {
            if rest.is_some() {
                return Err(Error::Parse(format!("unexpected `;` in `{spec}`")));
            }
            if nums.is_empty() || (kind == "cyclic" && nums.len() != 1) {
                return Err(Error::Parse(format!(
                    "`{kind}` needs {} order(s)",
                    if kind == "cyclic" {
                        "one"
                    } else {
                        "at least one"
                    }
                )));
            }
            let orders = nums
                .iter()
                .map(|s| match s.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n),
                    _ => Err(Error::Parse(format!("bad cyclic factor `{s}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            build_abelian(spec, &orders)
        }
        "perm" => {
            let [d] = nums.as_slice() else {
                return Err(Error::Parse("`perm` needs a degree".into()));
            };
            let d: usize = d
                .parse()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::Parse(format!("bad degree `{d}`")))?;
            let gens = rest
                .unwrap_or("")
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| perm_from_cycles(d, s))
                .collect::<Result<Vec<_>>>()?;
            build_perm(spec, d, &gens)
        }
        other => Err(Error::Parse(format!("unknown group kind `{other}`"))),
    }
}

fn build_abelian(spec: &str, orders: &[usize]) -> Result<FiniteGroup> {
    let cap = order_cap();
    let total = orders
        .iter()
        .try_fold(1usize, |acc, &o| acc.checked_mul(o))
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "group order",
            value: total,
            cap,
        });
    }
    let k = orders.len();
    let gens: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| usize::from(i == j) % orders[j].max(1))
                .collect()
        })
        .collect();
    let mul = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
        a.iter()
            .zip(b)
            .zip(orders)
            .map(|((x, y), o)| (x + y) % o)
            .collect()
    };
    let c = bfs_closure(vec![0; k], &gens, mul, cap)?;
    let names: Vec<String> = (0..k).map(abelian_gen_name).collect();
    let labels = c
        .elements
        .iter()
        .map(|e| {
            let s: String = e
                .iter()
                .zip(&names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| {
                    if *x == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{x}")
                    }
                })
                .collect();
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect();
    let gen_ids = gens
        .iter()
        .map(|g| c.elements.iter().position(|e| e == g).unwrap_or(0))
        .collect();
    FiniteGroup::from_closure(spec.to_string(), &c, gen_ids, names, labels)
}

/// Parses cycle notation such as `(1 2 3)(4 5)` into a 0-based image vector.
pub fn perm_from_cycles(d: usize, text: &str) -> Result<Vec<u16>> {
    if d > u16::MAX as usize {
        return Err(Error::Parse("permutation degree too large".into()));
    }
    let mut img: Vec<u16> = (0..d as u16).collect();
    let mut moved = vec![false; d];
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(Error::Parse("empty permutation".into()));
    }
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
        let pts = inner[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(p) if (1..=d).contains(&p) => Ok(p - 1),
                _ => Err(Error::Parse(format!("bad point `{s}` for degree {d}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, &p) in pts.iter().enumerate() {
            if moved[p] {
                return Err(Error::Parse(format!(
                    "point {} appears twice in `{text}`",
                    p + 1
                )));
            }
            moved[p] = true;
            img[p] = pts[(i + 1) % pts.len()] as u16;
        }
        rest = inner[close + 1..].trim_start();
    }
    Ok(img)
}

fn build_perm(spec: &str, d: usize, gens: &[Vec<u16>]) -> Result<FiniteGroup> {
    // (x*y)(i) = x(y(i))
    let mul =
        |x: &Vec<u16>, y: &Vec<u16>| -> Vec<u16> { y.iter().map(|&i| x[i as usize]).collect() };
    let identity: Vec<u16> = (0..d as u16).collect();
    let c = bfs_closure(identity, gens, mul, order_cap())?;
    let names: Vec<String> = (0..gens.len()).map(perm_gen_name).collect();
    let labels = word_labels(&c.tree, &names);
    let gen_ids = gens
        .iter()
        .map(|g| c.elements.iter().position(|e| e == g).unwrap_or(0))
        .collect();
    FiniteGroup::from_closure(spec.to_string(), &c, gen_ids, names, labels)
}

/// Labels from the spanning tree: the generator word of each element with
/// runs collapsed, e.g. `a^2b`.
fn word_labels(tree: &[Option<(usize, usize)>], names: &[String]) -> Vec<String> {
    let mut words: Vec<Vec<usize>> = vec![Vec::new(); tree.len()];
    for y in 0..tree.len() {
        if let Some((p, g)) = tree[y] {
            let mut w = words[p].clone();
            w.push(g);
            words[y] = w;
        }
    }
    words
        .iter()
        .map(|w| {
            if w.is_empty() {
                return "1".to_string();
            }
            let mut out = String::new();
            let mut i = 0;
            while i < w.len() {
                let mut j = i;
                while j < w.len() && w[j] == w[i] {
                    j += 1;
                }
                out.push_str(&names[w[i]]);
                if j - i > 1 {
                    out.push_str(&format!("^{}", j - i));
                }
                i = j;
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_from_cycles() {
        let g = parse_group("perm 3; (1 2 3); (1 2)").unwrap();
        assert_eq!(g.order(), 6);
        let mut sizes = g.classes().sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g.label(1), "a");
        assert_eq!(g.label(2), "b");
    }

    #[test]
    fn abelian_labels_and_classes() {
        let g = parse_group("abelian 5 5").unwrap();
        assert_eq!(g.order(), 25);
        assert_eq!(g.classes().count(), 25);
        assert!(g.labels().iter().any(|l| l == "x^2y^3"));
        let c = parse_group("cyclic 4").unwrap();
        assert_eq!(c.labels(), &["1", "x", "x^2", "x^3"]);
    }

    #[test]
    fn malformed_specs_are_parse_errors() {
        for bad in [
            "",
            "cyclic",
            "cyclic 0",
            "cyclic 3 4",
            "abelian two",
            "dihedral 4",
            "perm 3; (1 2 4)",
            "perm 3; (1 2 2)",
            "perm 3; 1 2",
            "perm 3; (1 2",
        ] {
            let e = parse_group(bad).unwrap_err();
            assert_eq!(e.kind(), crate::error::ErrorKind::Parse, "{bad}: {e}");
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let e = parse_group("cyclic 2001").unwrap_err();
        assert_eq!(e.kind(), crate::error::ErrorKind::Cap);
        let e = parse_group("perm 8; (1 2 3 4 5 6 7 8); (1 2)").unwrap_err();
        assert_eq!(e.kind(), crate::error::ErrorKind::Cap);
    }

    #[test]
    fn quaternion_group_from_permutations() {
        let q8 = parse_group("perm 8; (1 2 3 4)(5 6 7 8); (1 5 3 7)(2 8 4 6)").unwrap();
        assert_eq!(q8.order(), 8);
        let invol = (0..8).filter(|&x| q8.elt_order(x) == 2).count();
        assert_eq!(invol, 1);
    }
}
