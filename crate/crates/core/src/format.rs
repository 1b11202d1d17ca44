//! On-disk formats.
//!
//! Code files are TOML documents tagged `format = "mdpconv-code/1"`:
//!
//! | field   | meaning                                                          |
//! |---------|------------------------------------------------------------------|
//! | `p`,`m` | `q = p^m`                                                        |
//! | `g`     | modulus of `F_q` over `F_p`, `F_p` digits lowest first (`m > 1`) |
//! | `d`     | extension degree                                                 |
//! | `f`     | modulus of `F_{q^d}` over `F_q`, one digit vector per coefficient (`d > 1`) |
//! | `n`,`k`,`delta` | code parameters                                          |
//! | `G0`    | rows of base-field entries, each a digit vector of length `m`    |
//! | `G1`    | rows of extension entries, each `d` digit vectors of length `m`  |
//!
//! Block files (`format = "mdpconv-blocks/1"`) carry message or codeword
//! streams as a list of blocks, each a list of extension entries in the same
//! digit-vector form. All integers are decimal; digit vectors are lowest
//! order first.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::ConvCode;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldTower, Poly};
use crate::matrix::FieldMatrix;

pub const CODE_FORMAT: &str = "mdpconv-code/1";
pub const BLOCKS_FORMAT: &str = "mdpconv-blocks/1";

type Digits = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    format: String,
    p: u16,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Digits>,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<Vec<Digits>>,
    n: usize,
    k: usize,
    delta: usize,
    #[serde(rename = "G0")]
    g0: Vec<Vec<Digits>>,
    #[serde(rename = "G1")]
    g1: Vec<Vec<Vec<Digits>>>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn code_to_string(code: &ConvCode) -> String {
    let t = code.tower();
    let base = t.base();
    let file = CodeFile {
        format: CODE_FORMAT.into(),
        p: t.p(),
        m: t.m(),
        g: t.g().map(|g| g.coeffs().to_vec()),
        d: t.d(),
        f: t.f().map(|f| f.coeffs().iter().map(|&c| base.digits(c)).collect()),
        n: code.n(),
        k: code.k(),
        delta: code.delta(),
        g0: (0..code.k())
            .map(|r| {
                code.g0()
                    .row(r)
                    .iter()
                    .map(|e| t.base_digits(e).expect("G0 lies in the base field"))
                    .collect()
            })
            .collect(),
        g1: (0..code.k())
            .map(|r| code.g1().row(r).iter().map(|e| t.to_digits(e)).collect())
            .collect(),
    };
    let mut out = String::new();
    write_scalars(&mut out, &file);
    write_matrix(&mut out, "G0", &file.g0);
    write_matrix(&mut out, "G1", &file.g1);
    out
}

fn write_scalars(out: &mut String, file: &CodeFile) {
    #[derive(Serialize)]
    struct Header<'a> {
        format: &'a str,
        p: u16,
        m: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        g: &'a Option<Digits>,
        d: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        f: &'a Option<Vec<Digits>>,
        n: usize,
        k: usize,
        delta: usize,
    }
    let header = Header {
        format: &file.format,
        p: file.p,
        m: file.m,
        g: &file.g,
        d: file.d,
        f: &file.f,
        n: file.n,
        k: file.k,
        delta: file.delta,
    };
    out.push_str(&toml::to_string(&header).expect("header serializes"));
}

/// One matrix row per line; rows are inline TOML arrays.
fn write_matrix<T: Serialize>(out: &mut String, name: &str, rows: &[T]) {
    out.push_str(name);
    out.push_str(" = [\n");
    for row in rows {
        let value = toml::Value::try_from(row).expect("row serializes");
        out.push_str("    ");
        out.push_str(&value.to_string());
        out.push_str(",\n");
    }
    out.push_str("]\n");
}

fn matrix_from<T>(
    tower: &Arc<FieldTower>,
    rows: &[Vec<T>],
    k: usize,
    n: usize,
    name: &str,
    entry: impl Fn(&T) -> Result<Fe>,
) -> Result<FieldMatrix> {
    if rows.len() != k || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{name} must be {k}x{n}")));
    }
    let entries = rows.iter().flatten().map(entry).collect::<Result<Vec<_>>>()?;
    FieldMatrix::new(tower.clone(), k, n, entries)
}

pub fn code_from_str(text: &str) -> Result<ConvCode> {
    let file: CodeFile = toml::from_str(text).map_err(parse_err)?;
    if file.format != CODE_FORMAT {
        return Err(Error::Parse(format!("unsupported format tag {:?}", file.format)));
    }
    if (file.m > 1) != file.g.is_some() {
        return Err(Error::Parse("g must be present exactly when m > 1".into()));
    }
    let g = file.g.as_ref().map(|g| Poly::new(g.clone()));
    if let Some(g) = &g {
        if g.degree() != Some(file.m) {
            return Err(Error::Parse(format!("g must have degree m = {}", file.m)));
        }
    }
    if file.d > 1 && file.f.is_none() {
        return Err(Error::Parse("f is required when d > 1".into()));
    }
    let base = match &g {
        Some(g) => crate::gf::BaseField::extension(file.p, g.coeffs()).map_err(parse_err)?,
        None => crate::gf::BaseField::prime(file.p).map_err(parse_err)?,
    };
    let f = file
        .f
        .as_ref()
        .map(|f| f.iter().map(|c| base.from_digits(c)).collect::<Result<Vec<_>>>())
        .transpose()?
        .map(Poly::new);
    let tower = Arc::new(FieldTower::from_moduli(file.p, g.as_ref(), file.d, f).map_err(parse_err)?);
    let (k, n) = (file.k, file.n);
    let g0 = matrix_from(&tower, &file.g0, k, n, "G0", |e| tower.from_base_digits(e))?;
    let g1 = matrix_from(&tower, &file.g1, k, n, "G1", |e| tower.from_digits(e))?;
    ConvCode::new(tower, n, k, file.delta, g0, g1).map_err(parse_err)
}

pub fn write_code(path: &Path, code: &ConvCode) -> Result<()> {
    std::fs::write(path, code_to_string(code))?;
    Ok(())
}

pub fn read_code(path: &Path) -> Result<ConvCode> {
    code_from_str(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Message,
    Codeword,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile {
    format: String,
    kind: BlockKind,
    p: u16,
    m: usize,
    d: usize,
    /// Entries per block.
    width: usize,
    blocks: Vec<Vec<Vec<Digits>>>,
}

pub fn blocks_to_string(tower: &FieldTower, kind: BlockKind, width: usize, blocks: &[Vec<Fe>]) -> String {
    #[derive(Serialize)]
    struct Header<'a> {
        format: &'a str,
        kind: BlockKind,
        p: u16,
        m: usize,
        d: usize,
        width: usize,
    }
    let mut out = toml::to_string(&Header {
        format: BLOCKS_FORMAT,
        kind,
        p: tower.p(),
        m: tower.m(),
        d: tower.d(),
        width,
    })
    .expect("header serializes");
    let rows: Vec<Vec<Vec<Digits>>> = blocks
        .iter()
        .map(|b| b.iter().map(|e| tower.to_digits(e)).collect())
        .collect();
    write_matrix(&mut out, "blocks", &rows);
    out
}

/// Parses a block file against `tower`, returning its kind and blocks.
pub fn blocks_from_str(tower: &FieldTower, text: &str) -> Result<(BlockKind, Vec<Vec<Fe>>)> {
    let file: BlockFile = toml::from_str(text).map_err(parse_err)?;
    if file.format != BLOCKS_FORMAT {
        return Err(Error::Parse(format!("unsupported format tag {:?}", file.format)));
    }
    if (file.p, file.m, file.d) != (tower.p(), tower.m(), tower.d()) {
        return Err(Error::Parse(format!(
            "blocks over ({}, {}, {}) do not match the code field ({}, {}, {})",
            file.p,
            file.m,
            file.d,
            tower.p(),
            tower.m(),
            tower.d()
        )));
    }
    let blocks = file
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if b.len() != file.width {
                return Err(Error::Parse(format!(
                    "block {i} has {} entries, expected {}",
                    b.len(),
                    file.width
                )));
            }
            b.iter().map(|e| tower.from_digits(e)).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((file.kind, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{construct, ConstructOptions};

    #[test]
    fn code_file_round_trip() {
        for (n, k) in [(3, 2), (7, 4), (9, 5)] {
            let code = construct(n, k, &ConstructOptions::default()).unwrap();
            let text = code_to_string(&code);
            let back = code_from_str(&text).unwrap();
            assert_eq!(back, code);
            assert_eq!(code_to_string(&back), text);
        }
    }

    #[test]
    fn malformed_code_files() {
        assert!(matches!(code_from_str("not toml ["), Err(Error::Parse(_))));
        let code = construct(3, 2, &ConstructOptions::default()).unwrap();
        let text = code_to_string(&code);
        let wrong_tag = text.replace(CODE_FORMAT, "other/9");
        assert!(matches!(code_from_str(&wrong_tag), Err(Error::Parse(_))));
        let bad_digit = text.replacen("[3]", "[7]", 1);
        assert!(matches!(code_from_str(&bad_digit), Err(Error::Parse(_))));
    }

    #[test]
    fn block_file_round_trip() {
        let code = construct(7, 4, &ConstructOptions::default()).unwrap();
        let t = code.tower();
        let blocks = vec![vec![t.alpha(), t.one(), t.zero(), t.from_base(5)]];
        let text = blocks_to_string(t, BlockKind::Message, 4, &blocks);
        let (kind, back) = blocks_from_str(t, &text).unwrap();
        assert_eq!(kind, BlockKind::Message);
        assert_eq!(back, blocks);
        let other = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert!(blocks_from_str(other.tower(), &text).is_err());
    }
}
