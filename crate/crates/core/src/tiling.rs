//! Quivers embedded on a two-torus.
//!
//! The embedding is carried by arrow offsets: the head of an arrow sits in
//! the cell `tail cell + offset` of the universal cover. Faces are signed
//! cyclic arrow sequences.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Vec2 = [i64; 2];

pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Natural order on ids: digit runs compare numerically, so `a2 < a10`.
pub fn id_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    while !x.is_empty() && !y.is_empty() {
        let dx = x[0].is_ascii_digit();
        let dy = y[0].is_ascii_digit();
        if dx && dy {
            let nx = x.iter().take_while(|c| c.is_ascii_digit()).count();
            let ny = y.iter().take_while(|c| c.is_ascii_digit()).count();
            let (sx, sy) = (trim_zeros(&x[..nx]), trim_zeros(&y[..ny]));
            let ord = sx.len().cmp(&sy.len()).then_with(|| sx.cmp(sy));
            if ord != Ordering::Equal {
                return ord;
            }
            x = &x[nx..];
            y = &y[ny..];
        } else {
            match x[0].cmp(&y[0]) {
                Ordering::Equal => {
                    x = &x[1..];
                    y = &y[1..];
                }
                ord => return ord,
            }
        }
    }
    x.len().cmp(&y.len()).then_with(|| a.cmp(b))
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().take_while(|&&c| c == b'0').count();
    &s[k.min(s.len().saturating_sub(1))..]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub offset: Vec2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub sign: Sign,
    pub arrows: Vec<usize>,
}

/// Arrow declaration by ids, as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub offset: Vec2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSpec {
    pub sign: Sign,
    pub arrows: Vec<String>,
}

/// A quiver on the torus. Vertices and arrows are stored in natural id order,
/// so index order is the tie-breaking order used throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusQuiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    faces: Vec<Face>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
}

impl TorusQuiver {
    pub fn new(
        name: impl Into<String>,
        mut vertices: Vec<String>,
        mut arrows: Vec<ArrowSpec>,
        faces: Vec<FaceSpec>,
    ) -> Result<Self> {
        vertices.sort_by(|a, b| id_cmp(a, b));
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("duplicate vertex {}", w[0])));
        }
        arrows.sort_by(|a, b| id_cmp(&a.id, &b.id));
        if let Some(w) = arrows.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Malformed(format!("duplicate arrow {}", w[0].id)));
        }
        let vindex: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |v: &str, arrow: &str| {
            vindex.get(v).copied().ok_or_else(|| {
                Error::Malformed(format!("arrow {arrow} refers to unknown vertex {v}"))
            })
        };
        let mut resolved = Vec::with_capacity(arrows.len());
        for a in &arrows {
            resolved.push(Arrow {
                id: a.id.clone(),
                tail: lookup(&a.tail, &a.id)?,
                head: lookup(&a.head, &a.id)?,
                offset: a.offset,
            });
        }
        let aindex: HashMap<&str, usize> = resolved
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), i))
            .collect();
        let mut rfaces = Vec::with_capacity(faces.len());
        for f in &faces {
            let ids = f
                .arrows
                .iter()
                .map(|id| {
                    aindex
                        .get(id.as_str())
                        .copied()
                        .ok_or_else(|| Error::Malformed(format!("face refers to unknown arrow {id}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rfaces.push(Face {
                sign: f.sign,
                arrows: ids,
            });
        }
        Ok(Self::from_parts(name.into(), vertices, resolved, rfaces))
    }

    /// Builds a quiver from already-resolved parts. Vertex and arrow lists
    /// must be in natural id order.
    pub(crate) fn from_parts(
        name: String,
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        faces: Vec<Face>,
    ) -> Self {
        let mut out_arrows = vec![Vec::new(); vertices.len()];
        let mut in_arrows = vec![Vec::new(); vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.tail].push(i);
            in_arrows[a.head].push(i);
        }
        Self {
            name,
            vertices,
            arrows,
            faces,
            out_arrows,
            in_arrows,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out_arrows[v]
    }

    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.in_arrows[v]
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|a| a.tail == a.head)
    }

    /// True when every face has the same length, which makes the relations
    /// length preserving.
    pub fn uniform_face_length(&self) -> bool {
        self.faces
            .windows(2)
            .all(|w| w[0].arrows.len() == w[1].arrows.len())
    }

    /// Indices of the positive and negative faces containing arrow `a`.
    pub fn faces_of(&self, a: usize) -> (Option<usize>, Option<usize>) {
        let mut pos = None;
        let mut neg = None;
        for (i, f) in self.faces.iter().enumerate() {
            if f.arrows.contains(&a) {
                match f.sign {
                    Sign::Positive if pos.is_none() => pos = Some(i),
                    Sign::Negative if neg.is_none() => neg = Some(i),
                    _ => {}
                }
            }
        }
        (pos, neg)
    }

    /// Face `f` read as a cycle starting at its first occurrence of `a`.
    pub fn rotate_face_to(&self, f: usize, a: usize) -> Option<Vec<usize>> {
        let arrows = &self.faces[f].arrows;
        let k = arrows.iter().position(|&b| b == a)?;
        Some(arrows[k..].iter().chain(&arrows[..k]).copied().collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.arrows.len() as i64 + self.faces.len() as i64
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let chi = self.euler_characteristic();
        if chi != 0 {
            violations.push(Violation::EulerCharacteristic { value: chi });
        }
        let mut counts = vec![[0usize; 2]; self.arrows.len()];
        for f in &self.faces {
            for &a in &f.arrows {
                counts[a][(f.sign == Sign::Negative) as usize] += 1;
            }
        }
        for (a, c) in counts.iter().enumerate() {
            if *c != [1, 1] {
                violations.push(Violation::ArrowFaceCount {
                    arrow: self.arrows[a].id.clone(),
                    positive: c[0],
                    negative: c[1],
                });
            }
        }
        for (i, f) in self.faces.iter().enumerate() {
            if f.arrows.len() < 2 {
                violations.push(Violation::FaceTooShort { face: i });
                continue;
            }
            let n = f.arrows.len();
            for k in 0..n {
                let (a, b) = (f.arrows[k], f.arrows[(k + 1) % n]);
                if self.arrows[a].head != self.arrows[b].tail {
                    violations.push(Violation::FaceNotComposable {
                        face: i,
                        first: self.arrows[a].id.clone(),
                        second: self.arrows[b].id.clone(),
                    });
                    break;
                }
            }
            let sum = f
                .arrows
                .iter()
                .fold([0, 0], |s, &a| add(s, self.arrows[a].offset));
            if sum != [0, 0] {
                violations.push(Violation::FaceHomology { face: i, sum });
            }
        }
        ValidationReport { violations }
    }

    /// Tail, head and homology of a path.
    pub fn lift_endpoints(&self, p: &PathWord) -> (usize, usize, Vec2) {
        (p.tail, p.head, p.homology(self))
    }

    /// Decides whether two quivers have the same face structure up to
    /// renaming vertices and arrows. Offsets are not compared: on a torus
    /// they are fixed by the faces up to gauge and a change of basis.
    pub fn is_isomorphic(&self, other: &TorusQuiver) -> bool {
        if self.vertices.len() != other.vertices.len()
            || self.arrows.len() != other.arrows.len()
            || self.faces.len() != other.faces.len()
        {
            return false;
        }
        let sig = |q: &TorusQuiver, a: usize| {
            let (p, n) = q.faces_of(a);
            let len = |f: Option<usize>| f.map_or(0, |f| q.faces[f].arrows.len());
            let arr = &q.arrows[a];
            (
                len(p),
                len(n),
                arr.tail == arr.head,
                q.out_arrows[arr.tail].len(),
                q.in_arrows[arr.head].len(),
            )
        };
        let sa: Vec<_> = (0..self.arrows.len()).map(|a| sig(self, a)).collect();
        let sb: Vec<_> = (0..other.arrows.len()).map(|a| sig(other, a)).collect();
        let mut fa = sa.clone();
        let mut fb = sb.clone();
        fa.sort();
        fb.sort();
        if fa != fb {
            return false;
        }
        let mut faces_by_arrow = vec![Vec::new(); self.arrows.len()];
        for (i, f) in self.faces.iter().enumerate() {
            for &a in &f.arrows {
                faces_by_arrow[a].push(i);
            }
        }
        let target_faces: Vec<(Sign, Vec<usize>)> = other
            .faces
            .iter()
            .map(|f| (f.sign, canonical_rotation(&f.arrows)))
            .collect();
        let mut state = IsoState {
            amap: vec![usize::MAX; self.arrows.len()],
            used: vec![false; other.arrows.len()],
            vmap: vec![usize::MAX; self.vertices.len()],
            vused: vec![false; other.vertices.len()],
        };
        iso_search(self, other, &sa, &sb, &faces_by_arrow, &target_faces, 0, &mut state)
    }
}

struct IsoState {
    amap: Vec<usize>,
    used: Vec<bool>,
    vmap: Vec<usize>,
    vused: Vec<bool>,
}

fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len())
        .map(|k| {
            cycle[k..]
                .iter()
                .chain(&cycle[..k])
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    a: &TorusQuiver,
    b: &TorusQuiver,
    sa: &[(usize, usize, bool, usize, usize)],
    sb: &[(usize, usize, bool, usize, usize)],
    faces_by_arrow: &[Vec<usize>],
    target_faces: &[(Sign, Vec<usize>)],
    next: usize,
    st: &mut IsoState,
) -> bool {
    if next == a.arrows.len() {
        return true;
    }
    let src = &a.arrows[next];
    for cand in 0..b.arrows.len() {
        if st.used[cand] || sa[next] != sb[cand] {
            continue;
        }
        let dst = &b.arrows[cand];
        let mut bound = Vec::new();
        let mut ok = true;
        for (u, w) in [(src.tail, dst.tail), (src.head, dst.head)] {
            if st.vmap[u] == usize::MAX {
                if st.vused[w] {
                    ok = false;
                    break;
                }
                st.vmap[u] = w;
                st.vused[w] = true;
                bound.push(u);
            } else if st.vmap[u] != w {
                ok = false;
                break;
            }
        }
        if ok {
            st.amap[next] = cand;
            st.used[cand] = true;
            let faces_ok = faces_by_arrow[next].iter().all(|&f| {
                let face = &a.faces[f];
                if face.arrows.iter().any(|&x| st.amap[x] == usize::MAX) {
                    return true;
                }
                let image: Vec<usize> = face.arrows.iter().map(|&x| st.amap[x]).collect();
                let key = (face.sign, canonical_rotation(&image));
                target_faces.contains(&key)
            });
            if faces_ok && iso_search(a, b, sa, sb, faces_by_arrow, target_faces, next + 1, st) {
                return true;
            }
            st.amap[next] = usize::MAX;
            st.used[cand] = false;
        }
        for u in bound {
            st.vused[st.vmap[u]] = false;
            st.vmap[u] = usize::MAX;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EulerCharacteristic {
        value: i64,
    },
    ArrowFaceCount {
        arrow: String,
        positive: usize,
        negative: usize,
    },
    FaceTooShort {
        face: usize,
    },
    FaceNotComposable {
        face: usize,
        first: String,
        second: String,
    },
    FaceHomology {
        face: usize,
        sum: Vec2,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EulerCharacteristic { value } => {
                write!(f, "euler characteristic is {value}, expected 0")
            }
            Violation::ArrowFaceCount {
                arrow,
                positive,
                negative,
            } => write!(
                f,
                "arrow {arrow} is not in exactly two faces (+: {positive}, -: {negative})"
            ),
            Violation::FaceTooShort { face } => write!(f, "face {face} has fewer than 2 arrows"),
            Violation::FaceNotComposable {
                face,
                first,
                second,
            } => write!(f, "face {face} is not a cycle: {first} does not compose with {second}"),
            Violation::FaceHomology { face, sum } => write!(
                f,
                "face {face} has nonzero offset sum ({}, {})",
                sum[0], sum[1]
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A composable arrow sequence, read in traversal order. The empty path at a
/// vertex has `tail == head` and no arrows. Paths are ordered by length,
/// then lexicographically by arrow index, then by base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWord {
    tail: usize,
    head: usize,
    arrows: Vec<usize>,
}

impl Ord for PathWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.tail.cmp(&other.tail))
    }
}

impl PartialOrd for PathWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PathWord {
    pub fn empty(vertex: usize) -> Self {
        Self {
            tail: vertex,
            head: vertex,
            arrows: Vec::new(),
        }
    }

    pub fn new(q: &TorusQuiver, arrows: Vec<usize>) -> Result<Self> {
        let first = *arrows
            .first()
            .ok_or_else(|| Error::Malformed("path without arrows needs a base vertex".into()))?;
        for w in arrows.windows(2) {
            if q.arrows[w[0]].head != q.arrows[w[1]].tail {
                return Err(Error::Composition(
                    q.arrows[w[0]].id.clone(),
                    q.arrows[w[1]].id.clone(),
                ));
            }
        }
        let last = *arrows.last().unwrap_or(&first);
        Ok(Self {
            tail: q.arrows[first].tail,
            head: q.arrows[last].head,
            arrows,
        })
    }

    /// A path at `base` that may be empty.
    pub fn at(q: &TorusQuiver, base: usize, arrows: Vec<usize>) -> Result<Self> {
        if arrows.is_empty() {
            return Ok(Self::empty(base));
        }
        let p = Self::new(q, arrows)?;
        if p.tail != base {
            return Err(Error::Malformed(format!(
                "path does not start at vertex {}",
                q.vertices[base]
            )));
        }
        Ok(p)
    }

    pub fn from_ids(q: &TorusQuiver, ids: &[&str]) -> Result<Self> {
        let arrows = ids
            .iter()
            .map(|id| {
                q.arrow_index(id)
                    .ok_or_else(|| Error::Malformed(format!("unknown arrow {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, arrows)
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        self.tail == self.head
    }

    pub fn homology(&self, q: &TorusQuiver) -> Vec2 {
        self.arrows
            .iter()
            .fold([0, 0], |s, &a| add(s, q.arrows[a].offset))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, q: &TorusQuiver, other: &PathWord) -> Result<Self> {
        if self.head != other.tail {
            let name = |p: &PathWord| p.display(q);
            return Err(Error::Composition(name(self), name(other)));
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Ok(Self {
            tail: self.tail,
            head: other.head,
            arrows,
        })
    }

    pub fn display(&self, q: &TorusQuiver) -> String {
        if self.arrows.is_empty() {
            return format!("@{}", q.vertices[self.tail]);
        }
        let ids: Vec<&str> = self.arrows.iter().map(|&a| q.arrows[a].id.as_str()).collect();
        ids.join(" ")
    }
}
