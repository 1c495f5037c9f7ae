//! Arrow labelings by monomials and the path map they induce.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rewrite::{ClassIndex, Relation, RewriteSystem};
use crate::tiling::{self, PathWord, TorusQuiver, Vec2};

/// Arrow labels in a polynomial ring with named variables. Labels are stored
/// by arrow index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    variables: Vec<String>,
    labels: Vec<Monomial>,
}

impl Labeling {
    pub fn new(q: &TorusQuiver, variables: Vec<String>, by_id: &[(String, Monomial)]) -> Result<Self> {
        let mut labels: Vec<Option<Monomial>> = vec![None; q.arrows().len()];
        for (id, m) in by_id {
            let a = q
                .arrow_index(id)
                .ok_or_else(|| Error::Malformed(format!("label for unknown arrow {id}")))?;
            if m.nvars() != variables.len() {
                return Err(Error::Malformed(format!("label of {id} has wrong arity")));
            }
            labels[a] = Some(m.clone());
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(a, m)| m.ok_or_else(|| Error::LabelingIncomplete(q.arrow(a).id.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { variables, labels })
    }

    pub(crate) fn from_labels(variables: Vec<String>, labels: Vec<Monomial>) -> Self {
        Self { variables, labels }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn label(&self, a: usize) -> &Monomial {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn tau_word(&self, arrows: &[usize]) -> Monomial {
        let mut e = vec![0u32; self.nvars()];
        for &a in arrows {
            for (x, y) in e.iter_mut().zip(self.labels[a].exponents()) {
                *x += y;
            }
        }
        Monomial::from_exponents(e)
    }

    pub fn tau(&self, p: &PathWord) -> Monomial {
        self.tau_word(p.arrows())
    }

    pub fn face_images(&self, q: &TorusQuiver) -> Vec<Monomial> {
        q.faces().iter().map(|f| self.tau_word(&f.arrows)).collect()
    }

    /// The image of the first face.
    pub fn sigma(&self, q: &TorusQuiver) -> Option<Monomial> {
        q.faces().first().map(|f| self.tau_word(&f.arrows))
    }

    pub fn is_sigma_uniform(&self, q: &TorusQuiver) -> bool {
        self.face_images(q).windows(2).all(|w| w[0] == w[1])
    }

    pub fn format(&self, m: &Monomial) -> String {
        m.format(&self.variables)
    }
}

/// Grid coordinates of vertices together with the two period vectors of the
/// torus, so that an arrow with offset `(m, n)` is displaced by
/// `coords[head] - coords[tail] + m * period[0] + n * period[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEmbedding {
    pub period: [Vec2; 2],
    pub coords: Vec<Vec2>,
}

impl GridEmbedding {
    pub fn displacement(&self, q: &TorusQuiver, a: usize) -> Vec2 {
        let arr = q.arrow(a);
        let cell = [
            arr.offset[0] * self.period[0][0] + arr.offset[1] * self.period[1][0],
            arr.offset[0] * self.period[0][1] + arr.offset[1] * self.period[1][1],
        ];
        tiling::add(tiling::sub(self.coords[arr.head], self.coords[arr.tail]), cell)
    }
}

const UP: Vec2 = [0, 1];
const LEFT: Vec2 = [-1, 0];
const DOWN_RIGHT: Vec2 = [1, -1];

fn rotate(v: Vec2, quarter_turns: usize) -> Vec2 {
    (0..quarter_turns).fold(v, |[x, y], _| [-y, x])
}

/// Labels the arrows of a square tiling by their grid direction.
///
/// With eight directions the ring is `k[x1, x2, y1, y2]`. When the arrows
/// point in exactly three directions forming a quarter turn of
/// `{up, left, down-right}`, the ring is `k[x, y, z]` with those three
/// directions sent to `x`, `y`, `z` respectively.
pub fn square_labeling(q: &TorusQuiver, grid: &GridEmbedding) -> Result<Labeling> {
    if grid.coords.len() != q.vertices().len() {
        return Err(Error::Malformed("grid coordinates missing for some vertex".into()));
    }
    let disps: Vec<Vec2> = (0..q.arrows().len()).map(|a| grid.displacement(q, a)).collect();
    let mut dirs: Vec<Vec2> = disps.clone();
    dirs.sort();
    dirs.dedup();
    for turns in 0..4 {
        let triple = [UP, LEFT, DOWN_RIGHT].map(|d| rotate(d, turns));
        let mut sorted = triple;
        sorted.sort();
        if dirs == sorted {
            let variables: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
            let labels = disps
                .iter()
                .map(|d| {
                    let i = triple.iter().position(|t| t == d).unwrap_or(0);
                    Monomial::var(3, i)
                })
                .collect();
            return Ok(Labeling::from_labels(variables, labels));
        }
    }
    let variables: Vec<String> = ["x1", "x2", "y1", "y2"].iter().map(|s| s.to_string()).collect();
    let mut labels = Vec::with_capacity(disps.len());
    for (a, d) in disps.iter().enumerate() {
        let e = match *d {
            [1, 0] => [1, 0, 0, 0],
            [-1, 0] => [0, 1, 0, 0],
            [0, 1] => [0, 0, 1, 0],
            [0, -1] => [0, 0, 0, 1],
            [1, 1] => [1, 0, 1, 0],
            [-1, -1] => [0, 1, 0, 1],
            [1, -1] => [1, 0, 0, 1],
            [-1, 1] => [0, 1, 1, 0],
            _ => {
                return Err(Error::UnsupportedEmbedding(format!(
                    "arrow {} has displacement ({}, {})",
                    q.arrow(a).id,
                    d[0],
                    d[1]
                )))
            }
        };
        labels.push(Monomial::from_exponents(e.to_vec()));
    }
    Ok(Labeling::from_labels(variables, labels))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Verified,
    /// Two inequivalent paths with equal endpoints, homology and image.
    Failed(PathWord, PathWord),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingReport {
    pub sigma_uniform: bool,
    pub relation_compatible: bool,
    pub separation: Separation,
    pub max_len: usize,
}

/// Bounded checks of the impression properties: uniform face images,
/// compatibility with the relations, and that paths with equal endpoints,
/// homology and image are equivalent up to `max_len`.
pub fn verify_labeling(
    q: &TorusQuiver,
    rels: &[Relation],
    sys: &RewriteSystem,
    lab: &Labeling,
    max_len: usize,
    budget: usize,
) -> LabelingReport {
    let sigma_uniform = lab.is_sigma_uniform(q);
    let relation_compatible = rels.iter().all(|r| lab.tau(&r.left) == lab.tau(&r.right));
    let mut index = ClassIndex::new(q, sys, budget);
    let mut seen: HashMap<(usize, usize, Vec2, Monomial), (PathWord, u32)> = HashMap::new();
    let mut separation = Separation::Verified;
    let mut inconclusive = false;
    crate::rewrite::for_each_path(q, max_len, |p| {
        let Ok(class) = index.class_of(p) else {
            inconclusive = true;
            return true;
        };
        let key = (p.tail(), p.head(), p.homology(q), lab.tau(p));
        match seen.get(&key) {
            Some((first, c)) if *c != class => {
                separation = Separation::Failed(first.clone(), p.clone());
                false
            }
            Some(_) => true,
            None => {
                seen.insert(key, (p.clone(), class));
                true
            }
        }
    });
    if separation == Separation::Verified && inconclusive {
        separation = Separation::Inconclusive;
    }
    LabelingReport {
        sigma_uniform,
        relation_compatible,
        separation,
        max_len,
    }
}
