//! JSON input files. Every document carries a top-level `kind`:
//! `fusion`, `probgroup`, `modular`, `group` or `centerpair`.
//!
//! Exact values (fusion coefficients) are integers or `"p/q"` strings; other
//! scalars are numbers or scalar-expression strings such as
//! `"(1+sqrt(5))/2"`. Paths inside a center-pair document are relative to
//! that document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classalg::{CenterPair, ModularData};
use crate::fusion::FusionRing;
use crate::groups::FiniteGroup;
use crate::hypergroup::ProbabilityGroup;
use crate::scalar::{eval_str, literal_for, ApproxComplex, Rational};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Document {
    Fusion(FusionDoc),
    Probgroup(ProbDoc),
    Modular(ModularDoc),
    Group(GroupDoc),
    Centerpair(PairDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FusionDoc {
    labels: Vec<String>,
    #[serde(default)]
    unit: usize,
    dual: Vec<usize>,
    #[serde(default = "yes")]
    based: bool,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    dense: Option<Vec<Vec<Vec<Value>>>>,
    #[serde(rename = "N_sparse", default, skip_serializing_if = "Option::is_none")]
    sparse: Option<Vec<(usize, usize, usize, Value)>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProbDoc {
    labels: Vec<String>,
    #[serde(default)]
    unit: usize,
    dual: Vec<usize>,
    p: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModularDoc {
    labels: Vec<String>,
    dual: Vec<usize>,
    #[serde(rename = "S")]
    s: Vec<Vec<Value>>,
    /// Fusion file the S-matrix is claimed to categorify.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ring: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupDoc {
    order: usize,
    table: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PairDoc {
    base: String,
    center: String,
    branching: Vec<Vec<i64>>,
    iota: Vec<usize>,
}

/// A parsed input file.
#[derive(Debug, Clone)]
pub enum Input {
    Fusion(FusionRing),
    ProbGroup {
        group: ProbabilityGroup,
        declared_weights: Option<Vec<f64>>,
    },
    Modular {
        data: ModularData,
        ring: Option<FusionRing>,
    },
    Group(FiniteGroup),
    CenterPair(CenterPair),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Fusion(_) => "fusion",
            Input::ProbGroup { .. } => "probgroup",
            Input::Modular { .. } => "modular",
            Input::Group(_) => "group",
            Input::CenterPair(_) => "centerpair",
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads and parses any supported document.
pub fn load(path: &Path, tol: &Tolerances) -> Result<Input> {
    let text = read_text(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse(&text, base, tol)
}

/// Parses a document; `base` resolves relative paths it mentions.
pub fn parse(text: &str, base: &Path, tol: &Tolerances) -> Result<Input> {
    let doc: Document = serde_json::from_str(text)?;
    match doc {
        Document::Fusion(d) => Ok(Input::Fusion(fusion_from(d)?)),
        Document::Probgroup(d) => {
            let r = d.labels.len();
            if d.p.len() != r || d.p.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
                return Err(Error::Malformed(format!("p must have shape {r}x{r}x{r}")));
            }
            let p =
                d.p.iter()
                    .flatten()
                    .flatten()
                    .map(real_value)
                    .collect::<Result<Vec<f64>>>()?;
            let declared_weights = d
                .weights
                .map(|w| w.iter().map(real_value).collect::<Result<Vec<f64>>>())
                .transpose()?;
            let group = ProbabilityGroup::new(d.labels, d.unit, d.dual, p, tol)?;
            Ok(Input::ProbGroup {
                group,
                declared_weights,
            })
        }
        Document::Modular(d) => {
            let s =
                d.s.iter()
                    .map(|row| row.iter().map(complex_value).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
            let data = ModularData::new(d.labels, d.dual, s)?;
            let ring = match d.ring {
                Some(p) => Some(load_fusion(&base.join(p))?),
                None => None,
            };
            Ok(Input::Modular { data, ring })
        }
        Document::Group(d) => Ok(Input::Group(FiniteGroup::from_flat(d.order, &d.table)?)),
        Document::Centerpair(d) => {
            let ring = load_fusion(&base.join(&d.base))?;
            let center = match load(&base.join(&d.center), tol)? {
                Input::Modular { data, .. } => data,
                other => {
                    return Err(Error::Malformed(format!(
                        "center file {} is a {} document",
                        d.center,
                        other.kind()
                    )))
                }
            };
            Ok(Input::CenterPair(CenterPair::new(ring, center, d.branching, d.iota)?))
        }
    }
}

fn load_fusion(path: &Path) -> Result<FusionRing> {
    let text = read_text(path)?;
    match serde_json::from_str::<Document>(&text)? {
        Document::Fusion(d) => fusion_from(d),
        _ => Err(Error::Malformed(format!("{} is not a fusion document", path.display()))),
    }
}

fn fusion_from(d: FusionDoc) -> Result<FusionRing> {
    let ring = match (d.dense, d.sparse) {
        (Some(dense), None) => {
            let t = dense
                .iter()
                .map(|a| {
                    a.iter()
                        .map(|b| b.iter().map(rational_value).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            FusionRing::new(d.labels, d.unit, d.dual, t)?
        }
        (None, Some(sparse)) => {
            let entries = sparse
                .iter()
                .map(|(i, j, k, v)| Ok((*i, *j, *k, rational_value(v)?)))
                .collect::<Result<Vec<_>>>()?;
            FusionRing::from_sparse(d.labels, d.unit, d.dual, &entries)?
        }
        _ => return Err(Error::Malformed("give exactly one of N and N_sparse".into())),
    };
    Ok(ring.with_based(d.based))
}

fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from_integer)
            .ok_or_else(|| Error::Malformed(format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|_| Error::Malformed(format!("{s:?} is not a rational"))),
        other => Err(Error::Malformed(format!("expected a rational, found {other}"))),
    }
}

fn complex_value(v: &Value) -> Result<ApproxComplex> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|x| ApproxComplex::new(x, 0.0))
            .ok_or_else(|| Error::Malformed(format!("{n} is not a number"))),
        Value::String(s) => eval_str(s),
        other => Err(Error::Malformed(format!("expected a scalar, found {other}"))),
    }
}

fn real_value(v: &Value) -> Result<f64> {
    let z = complex_value(v)?;
    if z.im.abs() > 1e-12 * z.re.abs().max(1.0) {
        return Err(Error::Malformed(format!("{v} is not real")));
    }
    Ok(z.re)
}

/// Sparse fusion document.
pub fn fusion_document(ring: &FusionRing) -> Value {
    let r = ring.rank();
    let mut entries = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let n = ring.n(i, j, k);
                if n != Rational::from_integer(0) {
                    let v = if n.is_integer() {
                        json!(n.to_integer())
                    } else {
                        json!(n.to_string())
                    };
                    entries.push(json!([i, j, k, v]));
                }
            }
        }
    }
    json!({
        "kind": "fusion",
        "labels": ring.labels(),
        "unit": ring.unit(),
        "dual": ring.dual(),
        "based": ring.is_based(),
        "N_sparse": entries,
    })
}

/// Modular document with S entries written as scalar literals.
pub fn modular_document(md: &ModularData, ring: Option<&str>) -> Value {
    let s: Vec<Vec<String>> = md
        .s()
        .iter()
        .map(|row| row.iter().map(|&z| literal_for(z)).collect())
        .collect();
    let mut doc = json!({
        "kind": "modular",
        "labels": md.labels(),
        "dual": md.dual(),
        "S": s,
    });
    if let Some(r) = ring {
        doc["ring"] = json!(r);
    }
    doc
}

pub fn centerpair_document(base: &str, center: &str, branching: &[Vec<i64>], iota: &[usize]) -> Value {
    json!({
        "kind": "centerpair",
        "base": base,
        "center": center,
        "branching": branching,
        "iota": iota,
    })
}

pub fn group_document(g: &FiniteGroup) -> Value {
    let flat: Vec<usize> = g.table().iter().flatten().copied().collect();
    json!({ "kind": "group", "order": g.order(), "table": flat })
}

/// Writes pretty JSON followed by a newline.
pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Relative path from `from_dir` to `to` when `to` lies below it, else `to`.
pub fn relative_to(from_dir: &Path, to: &Path) -> PathBuf {
    to.strip_prefix(from_dir)
        .map(Path::to_path_buf)
        .unwrap_or_else(|_| to.to_path_buf())
}
