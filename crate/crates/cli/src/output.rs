//! Printable results. Every type serializes to JSON and back, and has a
//! `key: value` text form.

use gsig_core::lattice::AbelianQuotient;
use gsig_core::signature::BigRow;
use serde::{Deserialize, Serialize};

pub trait Render {
    fn text(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOut {
    pub rep: String,
    pub size: usize,
    pub order: usize,
    pub inverse: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOut {
    pub group: String,
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub generators: Vec<String>,
    pub classes: Vec<ClassOut>,
}

impl Render for GroupOut {
    fn text(&self) -> String {
        let mut out = vec![
            format!("group: {}", self.group),
            format!("order: {}", self.order),
            format!("abelian: {}", self.abelian),
            format!("exponent: {}", self.exponent),
            format!("generators: {}", self.generators.join(" ")),
        ];
        for c in &self.classes {
            out.push(format!(
                "class {}: size {}, order {}, inverse {}",
                c.rep, c.size, c.order, c.inverse
            ));
        }
        out.join("\n")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgOut {
    pub group: String,
    pub order: usize,
    pub shape: String,
    pub free_rank: usize,
    pub two_torsion: usize,
    pub basis: Vec<String>,
}

impl Render for BgOut {
    fn text(&self) -> String {
        format!(
            "group: {}\norder: {}\nbg: {}\nfree_rank: {}\ntwo_torsion: {}\nbasis: {}",
            self.group,
            self.order,
            self.shape,
            self.free_rank,
            self.two_torsion,
            self.basis.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaOut {
    pub group: String,
    pub variant: String,
    pub data: String,
    pub characters: Vec<String>,
    /// Canonical coset representative.
    pub theta: BigRow,
    pub a_group: AbelianQuotient,
    /// Coordinates in the generators of `A_G`.
    pub a_coords: BigRow,
}

impl Render for ThetaOut {
    fn text(&self) -> String {
        format!(
            "group: {}\nvariant: {}\ndata: {}\ncharacters: {}\ntheta: {}\na_group: {}\na_coords: {}",
            self.group,
            self.variant,
            self.data,
            self.characters.join(" "),
            self.theta,
            self.a_group,
            self.a_coords
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataOut {
    pub group: String,
    pub data: String,
    /// `(class representative id, multiplicity)` in the group's element ids.
    pub entries: Vec<(usize, u64)>,
}

impl Render for DataOut {
    fn text(&self) -> String {
        format!("group: {}\ndata: {}", self.group, self.data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizeOut {
    pub group: String,
    pub data: String,
    pub h: usize,
    pub genus: u64,
    pub a_images: Vec<String>,
    pub b_images: Vec<String>,
    pub xi_images: Vec<String>,
    pub verified: bool,
}

impl Render for RealizeOut {
    fn text(&self) -> String {
        format!(
            "group: {}\ndata: {}\nh: {}\ngenus: {}\na: {}\nb: {}\nxi: {}\nverified: {}",
            self.group,
            self.data,
            self.h,
            self.genus,
            self.a_images.join(" "),
            self.b_images.join(" "),
            self.xi_images.join(" "),
            self.verified
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub level: String,
    pub passed: bool,
    pub checks: Vec<gsig_core::verify::CheckResult>,
}

impl Render for VerifyOut {
    fn text(&self) -> String {
        let mut out: Vec<String> = self.checks.iter().map(|c| c.line()).collect();
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push(format!(
            "{}: {} checks, {failed} failed",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out.join("\n")
    }
}

impl Render for gsig_core::signature::SignatureReport {
    fn text(&self) -> String {
        self.to_text()
    }
}

impl Render for gsig_core::class_number::ClassNumberReport {
    fn text(&self) -> String {
        self.to_text()
    }
}
