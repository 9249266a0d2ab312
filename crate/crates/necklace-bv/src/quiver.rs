//! Quivers, their doubles, arrow degrees, and the indicator pairing.

use crate::grading::Parity;
use crate::rat::{rat, Rat};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct VertexId(pub usize);

/// Index of a base arrow in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct ArrowId(pub usize);

/// An arrow of the doubled quiver: a base arrow or its reverse.
///
/// Ordering is by base index first, with the double after the original;
/// all canonical forms downstream derive from this order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DArrow {
    pub base: ArrowId,
    pub bar: bool,
}

impl DArrow {
    pub fn original(base: ArrowId) -> DArrow {
        DArrow { base, bar: false }
    }

    pub fn double(base: ArrowId) -> DArrow {
        DArrow { base, bar: true }
    }

    /// The bar involution.
    pub fn barred(self) -> DArrow {
        DArrow {
            base: self.base,
            bar: !self.bar,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ArrowInfo {
    name: String,
    src: VertexId,
    tgt: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrows: Vec<ArrowInfo>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references undeclared vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("invalid identifier `{0}`")]
    BadIdent(String),
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().map(|c| c.is_ascii_alphabetic() || c == '_') == Some(true)
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Quiver, QuiverError> {
        let mut q = Quiver {
            vertex_names: Vec::new(),
            arrows: Vec::new(),
        };
        for v in vertices {
            if !valid_ident(&v) {
                return Err(QuiverError::BadIdent(v));
            }
            if q.vertex_names.contains(&v) {
                return Err(QuiverError::DuplicateVertex(v));
            }
            q.vertex_names.push(v);
        }
        for (name, src, tgt) in arrows {
            if !valid_ident(&name) {
                return Err(QuiverError::BadIdent(name));
            }
            if q.arrows.iter().any(|a| a.name == name) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            let src = q.vertex_id(&src).ok_or_else(|| QuiverError::UnknownVertex {
                arrow: name.clone(),
                vertex: src.clone(),
            })?;
            let tgt = q.vertex_id(&tgt).ok_or_else(|| QuiverError::UnknownVertex {
                arrow: name.clone(),
                vertex: tgt.clone(),
            })?;
            q.arrows.push(ArrowInfo { name, src, tgt });
        }
        Ok(q)
    }

    /// Parse the quiver text format:
    ///
    /// ```text
    /// # comment
    /// vertices: v w
    /// arrow a v w
    /// ```
    pub fn parse(text: &str) -> Result<Quiver, QuiverError> {
        let mut vertices: Option<Vec<String>> = None;
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let no_comment = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let trimmed = no_comment.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(QuiverError::Parse {
                        line,
                        msg: "second `vertices:` line".into(),
                    });
                }
                vertices = Some(rest.split_whitespace().map(str::to_owned).collect());
            } else if let Some(rest) = trimmed.strip_prefix("arrow ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(QuiverError::Parse {
                        line,
                        msg: format!("expected `arrow <name> <src> <tgt>`, got `{trimmed}`"),
                    });
                }
                arrows.push((parts[0].into(), parts[1].into(), parts[2].into()));
            } else {
                return Err(QuiverError::Parse {
                    line,
                    msg: format!("unrecognized line `{trimmed}`"),
                });
            }
        }
        let vertices = vertices.ok_or(QuiverError::Parse {
            line: 0,
            msg: "missing `vertices:` line".into(),
        })?;
        Quiver::new(vertices, arrows)
    }

    /// Emit the canonical text form. `parse(emit(q)) == q` and
    /// `emit(parse(t)) == emit(parse(emit(parse(t))))` bit-exactly.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("vertices:");
        for v in &self.vertex_names {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {} {} {}\n",
                a.name, self.vertex_names[a.src.0], self.vertex_names[a.tgt.0]
            ));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|v| v == name).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name).map(ArrowId)
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }

    /// Construct the double: one reversed arrow per base arrow.
    pub fn double(self, p: Parity) -> DoubledQuiver {
        DoubledQuiver { base: self, p }
    }
}

/// A quiver together with its double and the fixed grading parameter `p`.
///
/// Original arrows have degree 0, doubles degree `p`. Immutable after
/// construction and shared read-only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledQuiver {
    base: Quiver,
    p: Parity,
}

impl DoubledQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn p(&self) -> Parity {
        self.p
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    /// All doubled arrows in canonical order.
    pub fn darrows(&self) -> impl Iterator<Item = DArrow> + '_ {
        (0..self.base.arrow_count()).flat_map(|i| {
            [DArrow::original(ArrowId(i)), DArrow::double(ArrowId(i))]
        })
    }

    pub fn darrow_count(&self) -> usize {
        2 * self.base.arrow_count()
    }

    /// Dense index of a doubled arrow in `darrows()` order.
    pub fn darrow_index(&self, d: DArrow) -> usize {
        2 * d.base.0 + usize::from(d.bar)
    }

    pub fn source(&self, d: DArrow) -> VertexId {
        let a = &self.base.arrows[d.base.0];
        if d.bar {
            a.tgt
        } else {
            a.src
        }
    }

    pub fn target(&self, d: DArrow) -> VertexId {
        let a = &self.base.arrows[d.base.0];
        if d.bar {
            a.src
        } else {
            a.tgt
        }
    }

    pub fn degree(&self, d: DArrow) -> Parity {
        if d.bar {
            self.p
        } else {
            Parity::EVEN
        }
    }

    pub fn contains(&self, d: DArrow) -> bool {
        d.base.0 < self.base.arrow_count()
    }

    /// The indicator pairing: 0 unless `b = bar(a)`; 1 if `a` is original;
    /// `(-1)^(p+1)` if `a` is a double.
    pub fn indicator(&self, a: DArrow, b: DArrow) -> Rat {
        if b != a.barred() {
            rat(0)
        } else if !a.bar {
            rat(1)
        } else {
            (self.p + Parity::ODD).sign()
        }
    }

    /// Arrow name with `~` marking doubles, matching the necklace syntax.
    pub fn darrow_name(&self, d: DArrow) -> String {
        let base = self.base.arrow_name(d.base);
        if d.bar {
            format!("~{base}")
        } else {
            base.to_owned()
        }
    }

    /// Resolve `name` or `~name`.
    pub fn darrow_by_name(&self, s: &str) -> Option<DArrow> {
        let (bar, name) = match s.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        self.base.arrow_id(name).map(|a| DArrow { base: a, bar })
    }

    pub fn darrows_from(&self, v: VertexId) -> Vec<DArrow> {
        self.darrows().filter(|d| self.source(*d) == v).collect()
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}
