use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{make_data, OrbitData};
use crate::error::{Error, Result};
use crate::group::{parse_group, FiniteGroup};

/// Resolves one entry token to `(element id, multiplicity)`.
///
/// Order of attempts: exact element label, decimal id, `element^m` split at
/// the last `^` with a decimal multiplicity, generator word. So over `C_5`
/// the token `x^3` is the element `x^3`, while over `C_3` it is `x` three times.
fn parse_token(g: &FiniteGroup, token: &str) -> Result<(usize, u64)> {
    let t = token.trim();
    if let Some(id) = g.labels().iter().position(|l| l == t) {
        return Ok((id, 1));
    }
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()) {
        return Ok((g.parse_element(t)?, 1));
    }
    if let Some((head, tail)) = t.rsplit_once('^') {
        if !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            let m: u64 = tail
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity in `{t}`")))?;
            let (id, inner) = parse_token(g, head)?;
            return Ok((id, inner * m));
        }
    }
    Ok((g.parse_element(t)?, 1))
}

/// Parses `[g1^m1, g2^m2, ...]`; the brackets are optional and `[]` is the empty datum.
pub fn parse_data(g: &Arc<FiniteGroup>, text: &str) -> Result<OrbitData> {
    let t = text.trim();
    let inner = match (t.strip_prefix('['), t.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => return Err(Error::Parse(format!("unbalanced brackets in `{t}`"))),
    };
    let mut entries = Vec::new();
    if !inner.trim().is_empty() {
        for token in inner.split(',') {
            if token.trim().is_empty() {
                return Err(Error::Parse(format!("empty entry in `{t}`")));
            }
            entries.push(parse_token(g, token)?);
        }
    }
    make_data(g, &entries)
}

/// Text form listing classes by representative label, in class order.
/// `label^m` is used only when it reads back unambiguously.
pub fn format_data(d: &OrbitData) -> String {
    let g = d.group();
    let cl = g.classes();
    let mut parts = Vec::new();
    for (c, m) in d.entries() {
        let rep = cl.rep(c);
        let label = g.label(rep);
        if m == 1 {
            parts.push(label.to_string());
            continue;
        }
        let compact = format!("{label}^{m}");
        if parse_token(g, &compact).ok() == Some((rep, m)) {
            parts.push(compact);
        } else {
            parts.extend(std::iter::repeat(label.to_string()).take(m as usize));
        }
    }
    format!("[{}]", parts.join(", "))
}

/// JSON form `{"group": spec, "entries": [[id, mult], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataJson {
    pub group: String,
    pub entries: Vec<(usize, u64)>,
}

impl DataJson {
    pub fn from_data(spec: &str, d: &OrbitData) -> Self {
        let cl = d.group().classes();
        DataJson {
            group: spec.to_string(),
            entries: d.entries().map(|(c, m)| (cl.rep(c), m)).collect(),
        }
    }
}

/// Parses the JSON form, building the group from its spec.
pub fn parse_data_json(text: &str) -> Result<OrbitData> {
    let j: DataJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let g = Arc::new(parse_group(&j.group)?);
    make_data(&g, &j.entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn token_resolution() {
        let c3 = arc("cyclic 3");
        assert_eq!(parse_token(&c3, "x^3").unwrap(), (1, 3));
        assert_eq!(parse_token(&c3, "x^2").unwrap(), (2, 1));
        assert_eq!(parse_token(&c3, "x^2^2").unwrap(), (2, 2));
        assert_eq!(parse_token(&c3, "2").unwrap(), (2, 1));
        assert_eq!(parse_token(&c3, "1").unwrap(), (0, 1));
        let c5 = arc("cyclic 5");
        assert_eq!(parse_token(&c5, "x^3").unwrap(), (3, 1));
        let s3 = arc("perm 3; (1 2 3); (1 2)");
        assert_eq!(
            parse_token(&s3, "a^-1").unwrap(),
            (s3.parse_element("a^2").unwrap(), 1)
        );
        assert!(parse_token(&s3, "q").is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let c5 = arc("cyclic 5");
        for text in ["[]", "[x, x^2^2]", "[x^2, x^3]", "[x, x, x^3]", "[x^4^5]"] {
            let d = parse_data(&c5, text).unwrap();
            assert_eq!(parse_data(&c5, &format_data(&d)).unwrap(), d, "{text}");
        }
        let c3 = arc("cyclic 3");
        let d = parse_data(&c3, "[x^3]").unwrap();
        assert_eq!(format_data(&d), "[x^3]");
        let c4 = arc("cyclic 4");
        let d = parse_data(&c4, "x, x, x^2").unwrap();
        assert_eq!(format_data(&d), "[x, x, x^2]");
        assert_eq!(parse_data(&c4, &format_data(&d)).unwrap(), d);
    }

    #[test]
    fn malformed_text() {
        let c3 = arc("cyclic 3");
        assert!(matches!(parse_data(&c3, "[x, ]"), Err(Error::Parse(_))));
        assert!(matches!(parse_data(&c3, "[x"), Err(Error::Parse(_))));
        assert_eq!(parse_data(&c3, "[x]").unwrap_err(), Error::PsiNonzero);
    }

    #[test]
    fn json_round_trip() {
        let c3 = arc("cyclic 3");
        let d = parse_data(&c3, "[x, x^2^4]").unwrap();
        let j = serde_json::to_string(&DataJson::from_data("cyclic 3", &d)).unwrap();
        assert_eq!(parse_data_json(&j).unwrap(), d);
    }
}
