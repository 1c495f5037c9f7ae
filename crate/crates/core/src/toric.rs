//! Monomial rings generated by cycle images: the ring `S` generated by the
//! images of all cycles and the ring `R` of monomials that are images of
//! cycles at every vertex.
//!
//! All sets are computed exactly up to a complete degree `D`: every cycle of
//! length greater than the length bound `L` has image degree greater than
//! `D`, so the enumeration sees every image of degree at most `D`.

use std::collections::{BTreeSet, HashSet};

use crate::contraction::ContractionMap;
use crate::error::Result;
use crate::impression::Labeling;
use crate::monomial::Monomial;
use crate::rewrite::{self, Centrality, RewriteSystem};
use crate::tiling::{PathWord, TorusQuiver};

/// Least image degree over all paths of each length `0..=len`.
pub fn min_path_degrees(q: &TorusQuiver, lab: &Labeling, len: usize) -> Vec<Option<u32>> {
    let mut best: Vec<Option<u32>> = vec![Some(0); q.vertices().len()];
    let mut out = vec![Some(0)];
    for _ in 0..len {
        let mut next: Vec<Option<u32>> = vec![None; q.vertices().len()];
        for (a, arr) in q.arrows().iter().enumerate() {
            if let Some(d) = best[arr.tail] {
                let nd = d + lab.label(a).degree();
                if next[arr.head].is_none_or(|x| nd < x) {
                    next[arr.head] = Some(nd);
                }
            }
        }
        out.push(next.iter().flatten().min().copied());
        best = next;
    }
    out
}

/// The largest degree up to which cycles of length at most `len_bound`
/// produce every image, or -1 if none.
pub fn complete_degree(q: &TorusQuiver, lab: &Labeling, len_bound: usize) -> i64 {
    match min_path_degrees(q, lab, len_bound + 1)[len_bound + 1] {
        Some(d) => d as i64 - 1,
        None => i64::MAX,
    }
}

/// Images of cycles at `v` of length at most `len_bound` and degree at most
/// `max_degree`, including 1.
pub fn cycle_images(
    q: &TorusQuiver,
    lab: &Labeling,
    v: usize,
    len_bound: usize,
    max_degree: i64,
) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    out.insert(Monomial::one(lab.nvars()));
    let mut level: HashSet<(usize, Monomial)> = HashSet::new();
    level.insert((v, Monomial::one(lab.nvars())));
    for _ in 0..len_bound {
        let mut next = HashSet::new();
        for (u, m) in &level {
            for &a in q.out_arrows(*u) {
                let m2 = m.mul(lab.label(a));
                if m2.degree() as i64 > max_degree {
                    continue;
                }
                let h = q.arrow(a).head;
                if h == v {
                    out.insert(m2.clone());
                }
                next.insert((h, m2));
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    out
}

/// Closure of `seeds` under multiplication, truncated at `max_degree`.
pub fn monoid_closure(seeds: &BTreeSet<Monomial>, nvars: usize, max_degree: i64) -> BTreeSet<Monomial> {
    let gens: Vec<&Monomial> = seeds.iter().filter(|m| !m.is_one()).collect();
    let mut out: BTreeSet<Monomial> = BTreeSet::new();
    let mut stack = vec![Monomial::one(nvars)];
    out.insert(Monomial::one(nvars));
    while let Some(m) = stack.pop() {
        for g in &gens {
            let p = m.mul(g);
            if p.degree() as i64 <= max_degree && out.insert(p.clone()) {
                stack.push(p);
            }
        }
    }
    out
}

/// Non-unit elements of a multiplicatively closed set that are not products
/// of two non-units of the set.
pub fn irreducibles(set: &BTreeSet<Monomial>) -> Vec<Monomial> {
    set.iter()
        .filter(|m| !m.is_one())
        .filter(|m| {
            !set.iter().any(|a| {
                !a.is_one()
                    && a != *m
                    && m.checked_div(a).is_some_and(|b| !b.is_one() && set.contains(&b))
            })
        })
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleMonoid {
    pub vertex: usize,
    pub generators: Vec<Monomial>,
    pub len_bound: usize,
    pub complete_degree: i64,
}

pub fn cycle_monoid(q: &TorusQuiver, lab: &Labeling, v: usize, len_bound: usize) -> CycleMonoid {
    let d = complete_degree(q, lab, len_bound);
    let images = cycle_images(q, lab, v, len_bound, d);
    CycleMonoid {
        vertex: v,
        generators: irreducibles(&images),
        len_bound,
        complete_degree: d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    S,
    R,
}

/// A monomial subalgebra given by its minimal generators, exact up to
/// `complete_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidAlgebra {
    pub variables: Vec<String>,
    pub generators: Vec<Monomial>,
    pub tag: RingTag,
    pub len_bound: usize,
    pub complete_degree: i64,
}

impl MonoidAlgebra {
    pub fn format_generators(&self) -> String {
        crate::monomial::format_list(&self.generators, &self.variables)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RStructure {
    EqualToS,
    /// `R = k + J S` for the listed generators of `J`.
    KPlusIdeal(Vec<Monomial>),
    /// Neither of the above; `R` is generated by the listed monomials up to
    /// the complete degree.
    Generated(Vec<Monomial>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rings {
    pub s: MonoidAlgebra,
    pub r: MonoidAlgebra,
    pub structure: RStructure,
    pub vertex_images: Vec<BTreeSet<Monomial>>,
    pub s_elements: BTreeSet<Monomial>,
    pub r_elements: BTreeSet<Monomial>,
}

impl Rings {
    pub fn r_line(&self) -> String {
        let vars = &self.s.variables;
        match &self.structure {
            RStructure::EqualToS => "R = S".to_string(),
            RStructure::KPlusIdeal(j) => {
                format!("R = k + ({})S", crate::monomial::format_list(j, vars))
            }
            RStructure::Generated(g) => format!("R = k[{}]", crate::monomial::format_list(g, vars)),
            RStructure::Inconclusive => "R = inconclusive".to_string(),
        }
    }

    pub fn s_line(&self) -> String {
        format!("S = {}", self.s.format_generators())
    }
}

pub fn compute_s(q: &TorusQuiver, lab: &Labeling, len_bound: usize) -> MonoidAlgebra {
    compute_rings(q, lab, len_bound).s
}

/// Computes `S` and `R` and tries to present `R` as `k + J S`.
pub fn compute_rings(q: &TorusQuiver, lab: &Labeling, len_bound: usize) -> Rings {
    let d = complete_degree(q, lab, len_bound);
    let n = lab.nvars();
    let vertex_images: Vec<BTreeSet<Monomial>> = (0..q.vertices().len())
        .map(|v| cycle_images(q, lab, v, len_bound, d))
        .collect();
    let union: BTreeSet<Monomial> = vertex_images.iter().flatten().cloned().collect();
    let s_elements = monoid_closure(&union, n, d);
    let s_gens = irreducibles(&s_elements);
    let mut r_elements = vertex_images.first().cloned().unwrap_or_default();
    for imgs in &vertex_images[1..] {
        r_elements = r_elements.intersection(imgs).cloned().collect();
    }
    let r_gens = irreducibles(&r_elements);
    let structure = if d < 1 || s_gens.is_empty() {
        RStructure::Inconclusive
    } else if r_elements == s_elements {
        RStructure::EqualToS
    } else {
        let nonunit: Vec<&Monomial> = r_elements.iter().filter(|m| !m.is_one()).collect();
        let j: Vec<Monomial> = nonunit
            .iter()
            .filter(|m| {
                !nonunit.iter().any(|n| {
                    n != *m && m.checked_div(n).is_some_and(|quot| s_elements.contains(&quot))
                })
            })
            .map(|m| (*m).clone())
            .collect();
        let mut js: BTreeSet<Monomial> = BTreeSet::new();
        for g in &j {
            for s in &s_elements {
                let p = g.mul(s);
                if p.degree() as i64 <= d {
                    js.insert(p);
                }
            }
        }
        let nonunit_set: BTreeSet<Monomial> = nonunit.into_iter().cloned().collect();
        if js == nonunit_set {
            RStructure::KPlusIdeal(j)
        } else {
            RStructure::Generated(r_gens.clone())
        }
    };
    let algebra = |generators, tag| MonoidAlgebra {
        variables: lab.variables().to_vec(),
        generators,
        tag,
        len_bound,
        complete_degree: d,
    };
    Rings {
        s: algebra(s_gens, RingTag::S),
        r: algebra(r_gens, RingTag::R),
        structure,
        vertex_images,
        s_elements,
        r_elements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SComparison {
    /// Equal up to the given degree.
    Equal { degree: i64 },
    /// `witness` is a generator of one ring missing from the other.
    Differ { witness: Monomial, in_target: bool },
}

/// Compares `S` of the source (with `source_labels`) and `S'` of the target
/// (with `target_labels`) up to the smaller complete degree.
pub fn compare_s_sprime(
    cmap: &ContractionMap,
    source_labels: &Labeling,
    target_labels: &Labeling,
    len_bound: usize,
) -> (SComparison, Rings, Rings) {
    let a = compute_rings(&cmap.source, source_labels, len_bound);
    let b = compute_rings(&cmap.target, target_labels, len_bound);
    let d = a.s.complete_degree.min(b.s.complete_degree);
    let cut = |set: &BTreeSet<Monomial>| -> BTreeSet<Monomial> {
        set.iter().filter(|m| m.degree() as i64 <= d).cloned().collect()
    };
    let (sa, sb) = (cut(&a.s_elements), cut(&b.s_elements));
    let verdict = if sa == sb {
        SComparison::Equal { degree: d }
    } else if let Some(w) = b.s.generators.iter().find(|g| !sa.contains(g) && sb.contains(g)) {
        SComparison::Differ {
            witness: w.clone(),
            in_target: true,
        }
    } else {
        let w = sb
            .symmetric_difference(&sa)
            .next()
            .cloned()
            .expect("sets differ");
        SComparison::Differ {
            in_target: sb.contains(&w),
            witness: w,
        }
    };
    (verdict, a, b)
}

/// Shortest, then least, cycle at `v` with image `gamma`.
pub fn cycle_with_image(
    q: &TorusQuiver,
    lab: &Labeling,
    v: usize,
    gamma: &Monomial,
    len_bound: usize,
) -> Option<PathWord> {
    if gamma.is_one() {
        return Some(PathWord::empty(v));
    }
    let mut seen: HashSet<(usize, Monomial)> = HashSet::new();
    let mut level: Vec<(Vec<usize>, usize, Monomial)> = vec![(Vec::new(), v, Monomial::one(lab.nvars()))];
    seen.insert((v, Monomial::one(lab.nvars())));
    for _ in 0..len_bound {
        let mut next = Vec::new();
        for (path, u, m) in &level {
            for &a in q.out_arrows(*u) {
                let m2 = m.mul(lab.label(a));
                if !m2.divides(gamma) {
                    continue;
                }
                let h = q.arrow(a).head;
                let mut p2 = path.clone();
                p2.push(a);
                if h == v && m2 == *gamma {
                    return PathWord::new(q, p2).ok();
                }
                if seen.insert((h, m2.clone())) {
                    next.push((p2, h, m2));
                }
            }
        }
        level = next;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CentralVerdict {
    Certified,
    /// No cycle with this image at the vertex within the bound.
    Missing(usize),
    /// The family does not commute with this arrow.
    Failed(usize),
    Inconclusive(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralElement {
    pub gamma: Monomial,
    pub cycles: Vec<PathWord>,
    pub verdict: CentralVerdict,
}

/// For each monomial, finds a cycle at every vertex with that image and
/// checks that the family commutes with every arrow. When a monomial equals
/// the common face image the unit cycles are used.
pub fn central_elements(
    q: &TorusQuiver,
    sys: &RewriteSystem,
    lab: &Labeling,
    gammas: &[Monomial],
    len_bound: usize,
    budget: usize,
) -> Result<Vec<CentralElement>> {
    let sigma = lab.sigma(q);
    let mut out = Vec::new();
    for gamma in gammas {
        let mut cycles = Vec::new();
        let mut missing = None;
        if Some(gamma) == sigma.as_ref() {
            cycles = rewrite::center_candidate_u(q)?;
        } else {
            for v in 0..q.vertices().len() {
                match cycle_with_image(q, lab, v, gamma, len_bound) {
                    Some(c) => cycles.push(c),
                    None => {
                        missing = Some(v);
                        break;
                    }
                }
            }
        }
        let verdict = match missing {
            Some(v) => CentralVerdict::Missing(v),
            None => match rewrite::certify_central(q, sys, &cycles, budget)? {
                Centrality::Certified => CentralVerdict::Certified,
                Centrality::Failed(a) => CentralVerdict::Failed(a),
                Centrality::Inconclusive(a) => CentralVerdict::Inconclusive(a),
            },
        };
        out.push(CentralElement {
            gamma: gamma.clone(),
            cycles,
            verdict,
        });
    }
    Ok(out)
}
