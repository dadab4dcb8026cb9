use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cp::{CpExtra, CpcpExtra};
use crate::lattice::AbelianQuotient;

/// An integer vector serialized as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BigRow(#[serde(with = "crate::lattice::big_vec")] pub Vec<BigInt>);

impl fmt::Display for BigRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A group order that may be infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexValue {
    Finite(BigInt),
    Infinite,
}

impl IndexValue {
    pub fn from_order(o: Option<BigInt>) -> Self {
        o.map_or(IndexValue::Infinite, IndexValue::Finite)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            IndexValue::Finite(n) => Some(n),
            IndexValue::Infinite => None,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(n) => write!(f, "{n}"),
            IndexValue::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for IndexValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IndexValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "infinite" {
            return Ok(IndexValue::Infinite);
        }
        text.parse::<BigInt>()
            .map(IndexValue::Finite)
            .map_err(|_| serde::de::Error::custom(format!("bad index {text:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub group: String,
    pub order: usize,
    pub variant: String,
    pub characters: Vec<String>,
    pub relation_rank: usize,
    pub bg: String,
    pub free_rank: usize,
    pub two_torsion: usize,
    pub basis: Vec<String>,
    /// Canonical image of each basis element, one coefficient per irreducible.
    pub theta: Vec<BigRow>,
    pub a_group: AbelianQuotient,
    pub a_lifts: Vec<BigRow>,
    pub injective_on_free: bool,
    pub theta_kernel: AbelianQuotient,
    pub index: IndexValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cp: Option<CpExtra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpcp: Option<CpcpExtra>,
}

impl SignatureReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        out.push(format!("group: {}", self.group));
        out.push(format!("order: {}", self.order));
        out.push(format!("variant: {}", self.variant));
        out.push(format!("characters: {}", self.characters.join(" ")));
        out.push(format!("relation_rank: {}", self.relation_rank));
        out.push(format!("bg: {}", self.bg));
        out.push(format!("free_rank: {}", self.free_rank));
        out.push(format!("two_torsion: {}", self.two_torsion));
        for (b, t) in self.basis.iter().zip(&self.theta) {
            out.push(format!("theta {b}: {t}"));
        }
        out.push(format!("a_group: {}", self.a_group));
        out.push(format!("injective_on_free: {}", self.injective_on_free));
        out.push(format!("theta_kernel: {}", self.theta_kernel));
        out.push(format!("index: {}", self.index));
        if let Some(cp) = &self.cp {
            out.extend(cp.text_lines());
        }
        if let Some(cpcp) = &self.cpcp {
            out.extend(cpcp.text_lines());
        }
        out.join("\n")
    }
}
