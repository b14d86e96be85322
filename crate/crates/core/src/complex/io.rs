//! Reading and writing complexes (OFF and JSON) and covers (JSON).
//!
//! OFF files carry vertices and polygonal faces; faces with one, two or three
//! vertices become simplices and larger polygons are fan-triangulated. The
//! complex is the face-closure of all faces. Planar complexes are written in
//! the `nOFF` variant with an explicit dimension line so that they round-trip.
//!
//! JSON complexes use the fields `dimension`, `vertices` and `simplices`
//! (grouped by simplex dimension). A cover file has a single `cover` field
//! holding one entry per element: either a list of generating simplices
//! (face-closed on load) or an object `{"mask": [...]}` with one boolean per
//! simplex of the parent in canonical order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ComplexData, ComplexError, Cover, EmbeddedComplex, Subcomplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Off,
    Json,
}

impl Format {
    /// Guesses the format from a file extension; defaults to JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("off") => Format::Off,
            _ => Format::Json,
        }
    }
}

pub fn load(path: &Path, format: Format) -> Result<EmbeddedComplex, ComplexError> {
    match format {
        Format::Off => load_off(path),
        Format::Json => load_json(path),
    }
}

pub fn save(complex: &EmbeddedComplex, path: &Path, format: Format) -> Result<(), ComplexError> {
    let text = match format {
        Format::Off => to_off_string(complex)?,
        Format::Json => to_json_string(complex),
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_json(path: &Path) -> Result<EmbeddedComplex, ComplexError> {
    parse_json(&std::fs::read_to_string(path)?)
}

pub fn parse_json(text: &str) -> Result<EmbeddedComplex, ComplexError> {
    let data: ComplexData = serde_json::from_str(text).map_err(json_error)?;
    EmbeddedComplex::from_data(&data)
}

pub fn to_json_string(complex: &EmbeddedComplex) -> String {
    let mut s = serde_json::to_string_pretty(&complex.to_data()).expect("complex data serializes");
    s.push('\n');
    s
}

fn json_error(e: serde_json::Error) -> ComplexError {
    ComplexError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn load_off(path: &Path) -> Result<EmbeddedComplex, ComplexError> {
    parse_off(&std::fs::read_to_string(path)?)
}

/// Lines with content, paired with their 1-based line number; `#` starts a
/// comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> ComplexError {
    ComplexError::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ComplexError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found {tok:?}")))
}

pub fn parse_off(text: &str) -> Result<EmbeddedComplex, ComplexError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut rest_of_header: Vec<&str> = header[1..].to_vec();
    let dimension = match header[0] {
        "OFF" => 3,
        "nOFF" => {
            if rest_of_header.is_empty() {
                let (l, toks) = lines.next().ok_or_else(|| parse_err(hline, "missing dimension"))?;
                rest_of_header = toks;
                let d = parse_num::<usize>(rest_of_header[0], l, "dimension")?;
                rest_of_header.remove(0);
                d
            } else {
                let d = parse_num::<usize>(rest_of_header[0], hline, "dimension")?;
                rest_of_header.remove(0);
                d
            }
        }
        other => return Err(parse_err(hline, format!("expected OFF header, found {other:?}"))),
    };
    if !(2..=3).contains(&dimension) {
        return Err(parse_err(hline, format!("unsupported dimension {dimension}")));
    }
    let (cline, counts) = if rest_of_header.is_empty() {
        lines.next().ok_or_else(|| parse_err(hline, "missing counts"))?
    } else {
        (hline, rest_of_header)
    };
    if counts.len() < 2 {
        return Err(parse_err(cline, "expected vertex and face counts"));
    }
    let nv: usize = parse_num(counts[0], cline, "vertex count")?;
    let nf: usize = parse_num(counts[1], cline, "face count")?;

    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let (l, toks) = lines
            .next()
            .ok_or_else(|| parse_err(cline, format!("truncated: expected {nv} vertices, found {i}")))?;
        if toks.len() < dimension {
            return Err(parse_err(l, format!("expected {dimension} coordinates")));
        }
        let p: Vec<f64> = toks[..dimension]
            .iter()
            .map(|t| parse_num(t, l, "coordinate"))
            .collect::<Result<_, _>>()?;
        vertices.push(p);
    }
    let mut generators = Vec::with_capacity(nf);
    let mut last = cline;
    for i in 0..nf {
        let (l, toks) = lines
            .next()
            .ok_or_else(|| parse_err(last, format!("truncated: expected {nf} faces, found {i}")))?;
        last = l;
        let k: usize = parse_num(toks[0], l, "face size")?;
        if k == 0 || toks.len() < k + 1 {
            return Err(parse_err(l, format!("face lists {} of {k} vertices", toks.len() - 1)));
        }
        let idx: Vec<usize> = toks[1..=k]
            .iter()
            .map(|t| parse_num(t, l, "vertex index"))
            .collect::<Result<_, _>>()?;
        if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
            return Err(parse_err(l, format!("vertex index {bad} out of range")));
        }
        if k <= 3 {
            generators.push(idx);
        } else {
            for j in 1..k - 1 {
                generators.push(vec![idx[0], idx[j], idx[j + 1]]);
            }
        }
    }
    EmbeddedComplex::from_maximal(dimension, vertices, &generators)
}

/// OFF text for a complex of dimension at most two. Faces are the maximal
/// simplices in canonical order.
pub fn to_off_string(complex: &EmbeddedComplex) -> Result<String, ComplexError> {
    if complex.top_dim().unwrap_or(0) > 2 {
        return Err(ComplexError::Unsupported(
            "OFF cannot represent simplices of dimension 3 or more".into(),
        ));
    }
    let faces = Subcomplex::full(complex).maximal_ids();
    let mut out = String::new();
    if complex.dimension() == 3 {
        out.push_str("OFF\n");
    } else {
        out.push_str(&format!("nOFF\n{}\n", complex.dimension()));
    }
    out.push_str(&format!("{} {} 0\n", complex.num_vertices(), faces.len()));
    for i in 0..complex.num_vertices() {
        let coords: Vec<String> = complex.vertex(i).iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    for id in faces {
        let s = complex.simplex(id);
        let idx: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{} {}\n", s.len(), idx.join(" ")));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverElementData {
    Simplices(Vec<Vec<usize>>),
    Mask { mask: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverData {
    pub cover: Vec<CoverElementData>,
}

impl CoverData {
    /// Encodes each element by its maximal simplices.
    pub fn from_cover(cover: &Cover<'_>) -> Self {
        let parent = cover.parent();
        Self {
            cover: cover
                .elements()
                .iter()
                .map(|e| {
                    CoverElementData::Simplices(
                        e.maximal_ids()
                            .into_iter()
                            .map(|id| parent.simplex(id).to_vec())
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn resolve<'a>(&self, parent: &'a EmbeddedComplex) -> Result<Cover<'a>, ComplexError> {
        let elements = self
            .cover
            .iter()
            .map(|e| match e {
                CoverElementData::Simplices(gens) => Subcomplex::closure_of(parent, gens),
                CoverElementData::Mask { mask } => Subcomplex::from_mask(parent, mask.clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cover::new(elements)
    }
}

pub fn parse_cover<'a>(text: &str, parent: &'a EmbeddedComplex) -> Result<Cover<'a>, ComplexError> {
    let data: CoverData = serde_json::from_str(text).map_err(json_error)?;
    data.resolve(parent)
}

pub fn load_cover<'a>(path: &Path, parent: &'a EmbeddedComplex) -> Result<Cover<'a>, ComplexError> {
    parse_cover(&std::fs::read_to_string(path)?, parent)
}

pub fn save_cover(cover: &Cover<'_>, path: &Path) -> Result<(), ComplexError> {
    let mut s = serde_json::to_string_pretty(&CoverData::from_cover(cover)).expect("cover serializes");
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}
