mod output;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use gsig_core::class_number::relative_class_number;
use gsig_core::group::{
    find_embedding, make_homomorphism, parse_group, Embedding, FiniteGroup, Subgroup,
};
use gsig_core::orbit::{
    bg_structure, format_data, genus, make_data, parse_data, pushforward, realize, restrict,
    DataJson, OrbitData,
};
use gsig_core::rep::{CharacterTable, TableJson};
use gsig_core::signature::{
    cp_report, cpcp_report, default_dprime, index_report, BigRow, RelationVariant, SignatureContext,
};
use gsig_core::verify::{self, Level};
use gsig_core::{Error, ErrorKind, Result};
use serde::Serialize;

use output::{BgOut, ClassOut, DataOut, GroupOut, RealizeOut, Render, ThetaOut, VerifyOut};

#[derive(Parser)]
#[command(
    name = "gsig",
    version,
    about = "Singular orbit data, G-signatures and lattice indices"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    D,
    E,
    Dprime,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportKind {
    Cp,
    Cpcp,
}

#[derive(Subcommand)]
enum Command {
    /// Order, generators and conjugacy classes.
    Group { spec: String },
    /// Structure of B_G with a basis of singular orbit data.
    Bg { spec: String },
    /// theta(d) as a canonical coset representative, with coordinates in A_G.
    Theta {
        spec: String,
        data: String,
        #[arg(long, value_enum, default_value_t = VariantArg::E)]
        variant: VariantArg,
        /// Character table as JSON, for groups without a built-in one.
        #[arg(long)]
        table: Option<String>,
    },
    /// Full signature report: A_G, theta on a basis, its kernel and the index.
    Index {
        spec: String,
        #[arg(long, value_enum, default_value_t = VariantArg::E)]
        variant: VariantArg,
        #[arg(long)]
        table: Option<String>,
    },
    /// Reports for C_p (odd p <= 31) or C_p x C_p (p = 3, 5).
    Report {
        #[arg(value_enum)]
        kind: ReportKind,
        p: u64,
    },
    /// Self-check suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Replace the reduction rule with a broken one (fault injection).
        #[arg(long, hide = true)]
        tamper_reduction: bool,
    },
    /// Restriction of data to a subgroup.
    Restrict {
        spec: String,
        data: String,
        /// An element (the subgroup it generates), generators `a,b`, or member ids `0,3,5`.
        #[arg(long)]
        to: String,
    },
    /// Image of data under an injective homomorphism into a larger group.
    Induce {
        spec: String,
        data: String,
        /// The larger group.
        #[arg(long)]
        into: String,
        /// Images of the generators of the smaller group, comma separated.
        #[arg(long)]
        map: Option<String>,
    },
    /// A verified surface-group surjection realizing the data.
    Realize { spec: String, data: String },
    /// Relative class number of the p-th cyclotomic field, by two methods.
    ClassNumber { p: u64 },
}

fn group(spec: &str) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(parse_group(spec)?))
}

/// Data in the text format, or as JSON with `entries`.
fn data(g: &Arc<FiniteGroup>, text: &str) -> Result<OrbitData> {
    if text.trim_start().starts_with('{') {
        let j: DataJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return make_data(g, &j.entries);
    }
    parse_data(g, text)
}

fn table(g: &Arc<FiniteGroup>, path: Option<&str>) -> Result<CharacterTable> {
    match path {
        None => CharacterTable::for_group(g),
        Some(p) => {
            let raw = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{p}: {e}")))?;
            let j: TableJson =
                serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("{p}: {e}")))?;
            CharacterTable::from_json(g, &j)
        }
    }
}

fn context(
    g: &Arc<FiniteGroup>,
    v: VariantArg,
    table_path: Option<&str>,
) -> Result<SignatureContext> {
    let variant = match v {
        VariantArg::D => RelationVariant::D,
        VariantArg::E => RelationVariant::E,
        VariantArg::Dprime => RelationVariant::Dprime(default_dprime(g)?),
    };
    SignatureContext::new(table(g, table_path)?, variant)
}

fn subgroup(g: &Arc<FiniteGroup>, sel: &str) -> Result<Subgroup> {
    let items: Vec<&str> = sel
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::Parse("empty subgroup selection".into()));
    }
    if items.len() > 1 && items.iter().all(|s| s.chars().all(|c| c.is_ascii_digit())) {
        let ids = items
            .iter()
            .map(|s| s.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        return Subgroup::from_members(g, &ids);
    }
    let gens = items
        .iter()
        .map(|s| g.parse_element(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subgroup::generated(g, &gens))
}

fn data_out(d: &OrbitData) -> DataOut {
    let cl = d.group().classes();
    DataOut {
        group: d.group().name().to_string(),
        data: format_data(d),
        entries: d.entries().map(|(c, m)| (cl.rep(c), m)).collect(),
    }
}

fn emit<T: Serialize + Render>(format: Format, value: &T) -> Result<()> {
    match format {
        Format::Text => println!("{}", value.text()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?
        ),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let f = cli.format;
    match cli.command {
        Command::Group { spec } => {
            let g = group(&spec)?;
            let cl = g.classes();
            let out = GroupOut {
                group: g.name().to_string(),
                order: g.order(),
                abelian: g.is_abelian(),
                exponent: g.exponent(),
                generators: g.gen_names().to_vec(),
                classes: (0..cl.count())
                    .map(|c| ClassOut {
                        rep: g.label(cl.rep(c)).to_string(),
                        size: cl.size(c),
                        order: g.elt_order(cl.rep(c)),
                        inverse: g.label(cl.rep(cl.inverse_class(c))).to_string(),
                    })
                    .collect(),
            };
            emit(f, &out)?;
        }
        Command::Bg { spec } => {
            let g = group(&spec)?;
            let st = bg_structure(&g)?;
            emit(
                f,
                &BgOut {
                    group: g.name().to_string(),
                    order: g.order(),
                    shape: st.shape(),
                    free_rank: st.free_rank,
                    two_torsion: st.two_torsion,
                    basis: st.basis.iter().map(format_data).collect(),
                },
            )?;
        }
        Command::Theta {
            spec,
            data: text,
            variant,
            table,
        } => {
            let g = group(&spec)?;
            let d = data(&g, &text)?;
            let ctx = context(&g, variant, table.as_deref())?;
            let t = ctx.theta(&d)?;
            let a = ctx.a_group()?;
            let coords = a.map.coords(&t)?;
            emit(
                f,
                &ThetaOut {
                    group: g.name().to_string(),
                    variant: ctx.variant().name().to_string(),
                    data: format_data(&d),
                    characters: ctx.table().names().to_vec(),
                    theta: BigRow(t),
                    a_group: a.map.quotient.clone(),
                    a_coords: BigRow(coords),
                },
            )?;
        }
        Command::Index {
            spec,
            variant,
            table,
        } => {
            let g = group(&spec)?;
            let ctx = context(&g, variant, table.as_deref())?;
            emit(f, &index_report(&ctx)?)?;
        }
        Command::Report { kind, p } => {
            let r = match kind {
                ReportKind::Cp => cp_report(p)?,
                ReportKind::Cpcp => cpcp_report(p)?,
            };
            emit(f, &r)?;
        }
        Command::Verify {
            level,
            tamper_reduction,
        } => {
            let (lvl, name) = match level {
                LevelArg::Quick => (Level::Quick, "quick"),
                LevelArg::Full => (Level::Full, "full"),
            };
            let checks = verify::run(lvl, tamper_reduction);
            let out = VerifyOut {
                level: name.to_string(),
                passed: checks.iter().all(|c| c.passed),
                checks,
            };
            emit(f, &out)?;
            return Ok(out.passed);
        }
        Command::Restrict {
            spec,
            data: text,
            to,
        } => {
            let g = group(&spec)?;
            let d = data(&g, &text)?;
            let emb = Embedding::new(&g, &subgroup(&g, &to)?, None)?;
            emit(f, &data_out(&restrict(&d, &emb)?))?;
        }
        Command::Induce {
            spec,
            data: text,
            into,
            map,
        } => {
            let h = group(&spec)?;
            let g = group(&into)?;
            let d = data(&h, &text)?;
            let hom = match map {
                Some(m) => {
                    let imgs = m
                        .split(',')
                        .map(|s| g.parse_element(s.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    make_homomorphism(&h, &g, &imgs)?
                }
                None => find_embedding(&h, &g)?,
            };
            if !hom.is_injective() {
                return Err(Error::NotSubgroup("the map is not injective".into()));
            }
            emit(f, &data_out(&pushforward(&hom, &d)?))?;
        }
        Command::Realize { spec, data: text } => {
            let g = group(&spec)?;
            let d = data(&g, &text)?;
            let w = realize(&d)?;
            w.verify(&d)?;
            let labels = |v: &[usize]| {
                v.iter()
                    .map(|&x| g.label(x).to_string())
                    .collect::<Vec<_>>()
            };
            emit(
                f,
                &RealizeOut {
                    group: g.name().to_string(),
                    data: format_data(&d),
                    h: w.h,
                    genus: genus(&d, w.h as u64)?,
                    a_images: labels(&w.a_images),
                    b_images: labels(&w.b_images),
                    xi_images: labels(&w.xi_images),
                    verified: true,
                },
            )?;
        }
        Command::ClassNumber { p } => emit(f, &relative_class_number(p)?)?,
    }
    Ok(true)
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Parse => 2,
        ErrorKind::Cap => 3,
        ErrorKind::InvalidData => 4,
        ErrorKind::MissingTable => 5,
        ErrorKind::Other => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
