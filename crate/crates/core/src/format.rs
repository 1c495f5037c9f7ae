//! The line-oriented tiling file format.
//!
//! ```text
//! # comment
//! tiling conifold
//! period 1 1 1 -1              # optional, needed for grid labels
//! vertex 1 [at 0 0]
//! arrow a1 1 2 0 0 [label x1]
//! face + a1 b1 a2 b2
//! contract a1                  # optional, repeatable
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::impression::{square_labeling, GridEmbedding, Labeling};
use crate::monomial::{parse_factors, Monomial};
use crate::tiling::{id_cmp, ArrowSpec, FaceSpec, Sign, TorusQuiver, Vec2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDecl {
    pub id: String,
    pub at: Option<Vec2>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDecl {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub offset: Vec2,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TilingFile {
    pub name: String,
    pub period: Option<[Vec2; 2]>,
    pub vertices: Vec<VertexDecl>,
    pub arrows: Vec<ArrowDecl>,
    pub faces: Vec<FaceSpec>,
    pub contractions: Vec<Vec<String>>,
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err(t: &Tok<'_>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: t.line,
        column: t.col,
        message: message.into(),
    }
}

fn tokenize(line: &str, lineno: usize) -> Vec<Tok<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let col_of = |byte: usize| body[..byte].chars().count() + 1;
    for (i, c) in body.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &body[s..i],
                    line: lineno,
                    col: col_of(s),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &body[s..],
            line: lineno,
            col: col_of(s),
        });
    }
    out
}

fn int(t: &Tok<'_>) -> Result<i64> {
    t.text
        .parse()
        .map_err(|_| err(t, format!("expected an integer, found {:?}", t.text)))
}

fn arity(toks: &[Tok<'_>], ok: bool, usage: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(err(&toks[0], format!("wrong number of fields, expected `{usage}`")))
    }
}

impl TilingFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file = TilingFile::default();
        let mut seen_tiling: Option<Tok<'_>> = None;
        let mut vertex_ids: HashSet<&str> = HashSet::new();
        let mut arrow_ids: HashSet<&str> = HashSet::new();
        let mut vertex_refs: Vec<Tok<'_>> = Vec::new();
        let mut arrow_refs: Vec<Tok<'_>> = Vec::new();
        let mut vertex_toks: Vec<Tok<'_>> = Vec::new();
        let mut label_toks: Vec<(Tok<'_>, bool)> = Vec::new();
        let mut period_tok: Option<Tok<'_>> = None;
        let mut end = Tok {
            text: "",
            line: 1,
            col: 1,
        };
        for (i, line) in text.lines().enumerate() {
            let toks = tokenize(line, i + 1);
            let Some(&kw) = toks.first() else { continue };
            end = Tok {
                text: "",
                line: i + 1,
                col: 1,
            };
            match kw.text {
                "tiling" => {
                    arity(&toks, toks.len() == 2, "tiling <name>")?;
                    if seen_tiling.is_some() {
                        return Err(err(&kw, "only one tiling per file"));
                    }
                    seen_tiling = Some(kw);
                    file.name = toks[1].text.to_string();
                }
                "period" => {
                    arity(&toks, toks.len() == 5, "period <ax> <ay> <bx> <by>")?;
                    if period_tok.is_some() {
                        return Err(err(&kw, "duplicate period"));
                    }
                    period_tok = Some(kw);
                    file.period = Some([
                        [int(&toks[1])?, int(&toks[2])?],
                        [int(&toks[3])?, int(&toks[4])?],
                    ]);
                }
                "vertex" => {
                    let ok = toks.len() == 2 || (toks.len() == 5 && toks[2].text == "at");
                    arity(&toks, ok, "vertex <id> [at <gx> <gy>]")?;
                    if !vertex_ids.insert(toks[1].text) {
                        return Err(err(&toks[1], format!("duplicate vertex id {}", toks[1].text)));
                    }
                    let at = if toks.len() == 5 {
                        Some([int(&toks[3])?, int(&toks[4])?])
                    } else {
                        None
                    };
                    vertex_toks.push(toks[1]);
                    file.vertices.push(VertexDecl {
                        id: toks[1].text.to_string(),
                        at,
                    });
                }
                "arrow" => {
                    let ok = toks.len() == 6 || (toks.len() == 8 && toks[6].text == "label");
                    arity(&toks, ok, "arrow <id> <tail> <head> <dx> <dy> [label <monomial>]")?;
                    if !arrow_ids.insert(toks[1].text) {
                        return Err(err(&toks[1], format!("duplicate arrow id {}", toks[1].text)));
                    }
                    vertex_refs.push(toks[2]);
                    vertex_refs.push(toks[3]);
                    let label = if toks.len() == 8 {
                        parse_factors(toks[7].text).map_err(|m| err(&toks[7], m))?;
                        Some(toks[7].text.to_string())
                    } else {
                        None
                    };
                    label_toks.push((toks[0], label.is_some()));
                    file.arrows.push(ArrowDecl {
                        id: toks[1].text.to_string(),
                        tail: toks[2].text.to_string(),
                        head: toks[3].text.to_string(),
                        offset: [int(&toks[4])?, int(&toks[5])?],
                        label,
                    });
                }
                "face" => {
                    arity(&toks, toks.len() >= 3, "face <+|-> <arrow ids...>")?;
                    let sign = match toks[1].text {
                        "+" => Sign::Positive,
                        "-" => Sign::Negative,
                        other => {
                            return Err(err(&toks[1], format!("face sign must be + or -, found {other:?}")))
                        }
                    };
                    arrow_refs.extend_from_slice(&toks[2..]);
                    file.faces.push(FaceSpec {
                        sign,
                        arrows: toks[2..].iter().map(|t| t.text.to_string()).collect(),
                    });
                }
                "contract" => {
                    arity(&toks, toks.len() >= 2, "contract <arrow ids...>")?;
                    arrow_refs.extend_from_slice(&toks[1..]);
                    file.contractions
                        .push(toks[1..].iter().map(|t| t.text.to_string()).collect());
                }
                other => return Err(err(&kw, format!("unknown keyword {other:?}"))),
            }
        }
        if seen_tiling.is_none() {
            return Err(err(&end, "missing `tiling <name>` line"));
        }
        for t in &vertex_refs {
            if !vertex_ids.contains(t.text) {
                return Err(err(t, format!("unknown vertex id {}", t.text)));
            }
        }
        for t in &arrow_refs {
            if !arrow_ids.contains(t.text) {
                return Err(err(t, format!("unknown arrow id {}", t.text)));
            }
        }
        let with_grid = file.vertices.iter().filter(|v| v.at.is_some()).count();
        if with_grid != 0 && with_grid != file.vertices.len() {
            let (t, _) = file
                .vertices
                .iter()
                .zip(&vertex_toks)
                .map(|(v, t)| (t, v.at.is_some()))
                .find(|(_, has)| !has)
                .expect("some vertex lacks coordinates");
            return Err(err(t, "grid coordinates must be given for all vertices or none"));
        }
        let labelled = label_toks.iter().filter(|(_, l)| *l).count();
        if labelled != 0 && labelled != label_toks.len() {
            let (t, _) = label_toks.iter().find(|(_, l)| !l).expect("unlabelled arrow");
            return Err(err(t, "labels must be given for all arrows or none"));
        }
        Ok(file)
    }

    /// A file describing `q`, with `labels` written out if given.
    pub fn from_quiver(q: &TorusQuiver, labels: Option<&Labeling>) -> Self {
        TilingFile {
            name: q.name().to_string(),
            period: None,
            vertices: q
                .vertices()
                .iter()
                .map(|v| VertexDecl {
                    id: v.clone(),
                    at: None,
                })
                .collect(),
            arrows: q
                .arrows()
                .iter()
                .enumerate()
                .map(|(i, a)| ArrowDecl {
                    id: a.id.clone(),
                    tail: q.vertices()[a.tail].clone(),
                    head: q.vertices()[a.head].clone(),
                    offset: a.offset,
                    label: labels.map(|l| l.format(l.label(i))),
                })
                .collect(),
            faces: q
                .faces()
                .iter()
                .map(|f| FaceSpec {
                    sign: f.sign,
                    arrows: f.arrows.iter().map(|&a| q.arrow(a).id.clone()).collect(),
                })
                .collect(),
            contractions: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tiling {}", self.name);
        if let Some([a, b]) = self.period {
            let _ = writeln!(out, "period {} {} {} {}", a[0], a[1], b[0], b[1]);
        }
        for v in &self.vertices {
            match v.at {
                Some([x, y]) => writeln!(out, "vertex {} at {x} {y}", v.id),
                None => writeln!(out, "vertex {}", v.id),
            }
            .ok();
        }
        for a in &self.arrows {
            let _ = write!(
                out,
                "arrow {} {} {} {} {}",
                a.id, a.tail, a.head, a.offset[0], a.offset[1]
            );
            if let Some(l) = &a.label {
                let _ = write!(out, " label {l}");
            }
            out.push('\n');
        }
        for f in &self.faces {
            let _ = writeln!(out, "face {} {}", f.sign.symbol(), f.arrows.join(" "));
        }
        for c in &self.contractions {
            let _ = writeln!(out, "contract {}", c.join(" "));
        }
        out
    }

    pub fn quiver(&self) -> Result<TorusQuiver> {
        TorusQuiver::new(
            self.name.clone(),
            self.vertices.iter().map(|v| v.id.clone()).collect(),
            self.arrows
                .iter()
                .map(|a| ArrowSpec {
                    id: a.id.clone(),
                    tail: a.tail.clone(),
                    head: a.head.clone(),
                    offset: a.offset,
                })
                .collect(),
            self.faces.clone(),
        )
    }

    pub fn has_labels(&self) -> bool {
        self.arrows.iter().any(|a| a.label.is_some())
    }

    /// The explicit labels, over the label variables in natural order.
    pub fn explicit_labeling(&self, q: &TorusQuiver) -> Result<Option<Labeling>> {
        if !self.has_labels() {
            return Ok(None);
        }
        let mut names = BTreeSet::new();
        for a in &self.arrows {
            if let Some(l) = &a.label {
                for (n, _) in parse_factors(l).map_err(Error::Malformed)? {
                    names.insert(n);
                }
            }
        }
        let mut vars: Vec<String> = names.into_iter().collect();
        vars.sort_by(|a, b| id_cmp(a, b));
        let mut by_id = Vec::new();
        for a in &self.arrows {
            if let Some(l) = &a.label {
                by_id.push((a.id.clone(), Monomial::parse(l, &vars)?));
            }
        }
        Labeling::new(q, vars, &by_id).map(Some)
    }

    pub fn grid(&self, q: &TorusQuiver) -> Result<Option<GridEmbedding>> {
        if self.vertices.iter().any(|v| v.at.is_none()) || self.vertices.is_empty() {
            return Ok(None);
        }
        let period = self.period.ok_or_else(|| {
            Error::UnsupportedEmbedding("grid coordinates need a `period` line".into())
        })?;
        let at: HashMap<&str, Vec2> = self
            .vertices
            .iter()
            .map(|v| (v.id.as_str(), v.at.unwrap_or_default()))
            .collect();
        let coords = q.vertices().iter().map(|v| at[v.as_str()]).collect();
        Ok(Some(GridEmbedding { period, coords }))
    }

    /// Explicit labels if present, otherwise the square-grid labels if grid
    /// coordinates are present.
    pub fn labeling(&self, q: &TorusQuiver) -> Result<Option<Labeling>> {
        if let Some(l) = self.explicit_labeling(q)? {
            return Ok(Some(l));
        }
        match self.grid(q)? {
            Some(g) => square_labeling(q, &g).map(Some),
            None => Ok(None),
        }
    }

    /// All arrows named on `contract` lines.
    pub fn contracted(&self) -> Vec<String> {
        let mut all: Vec<String> = self.contractions.iter().flatten().cloned().collect();
        all.sort_by(|a, b| id_cmp(a, b));
        all.dedup();
        all
    }
}
