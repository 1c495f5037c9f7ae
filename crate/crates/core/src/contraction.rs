//! Contracting arrows to vertices, removing length-2 faces, and checking
//! adequacy of a contraction.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{ContractionFailure, Error, Result};
use crate::impression::Labeling;
use crate::lattice::{self, angle_cmp, det2, in_plane_cone, Rat};
use crate::monomial::Monomial;
use crate::tiling::{self, Arrow, Face, PathWord, TorusQuiver, Vec2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    pub source: TorusQuiver,
    /// Contracted arrows, by source index, ascending.
    pub contracted: Vec<usize>,
    /// Source vertex to target vertex.
    pub vertex_merge: Vec<usize>,
    /// Cell of each source vertex relative to its merged representative.
    pub potential: Vec<Vec2>,
    pub target: TorusQuiver,
    /// Source arrow to target arrow; `None` for contracted arrows.
    pub arrow_image: Vec<Option<usize>>,
}

impl ContractionMap {
    pub fn map_path(&self, p: &PathWord) -> PathWord {
        let arrows: Vec<usize> = p.arrows().iter().filter_map(|&a| self.arrow_image[a]).collect();
        PathWord::at(&self.target, self.vertex_merge[p.tail()], arrows)
            .expect("contraction maps paths to paths")
    }

    /// Labels on the target pulled back to the source, with contracted
    /// arrows sent to 1.
    pub fn pull_labels(&self, target: &Labeling) -> Labeling {
        let n = target.nvars();
        let labels = self
            .arrow_image
            .iter()
            .map(|img| img.map_or_else(|| Monomial::one(n), |b| target.label(b).clone()))
            .collect();
        Labeling::from_labels(target.variables().to_vec(), labels)
    }

    /// Labels on the source restricted to the surviving arrows. Fails unless
    /// every contracted arrow is labelled 1.
    pub fn push_labels(&self, source: &Labeling) -> Result<Labeling> {
        for &a in &self.contracted {
            if !source.label(a).is_one() {
                return Err(Error::Malformed(format!(
                    "contracted arrow {} must be labelled 1",
                    self.source.arrow(a).id
                )));
            }
        }
        let mut labels = vec![Monomial::one(source.nvars()); self.target.arrows().len()];
        for (a, img) in self.arrow_image.iter().enumerate() {
            if let Some(b) = img {
                labels[*b] = source.label(a).clone();
            }
        }
        Ok(Labeling::from_labels(source.variables().to_vec(), labels))
    }
}

fn ids(q: &TorusQuiver, arrows: &[usize]) -> Vec<String> {
    arrows.iter().map(|&a| q.arrow(a).id.clone()).collect()
}

fn directed_cycle(q: &TorusQuiver, set: &[usize]) -> Option<Vec<usize>> {
    // 0 = unseen, 1 = on stack, 2 = done
    let n = q.vertices().len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &a in set {
        out[q.arrow(a).tail].push(a);
    }
    let mut color = vec![0u8; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    fn dfs(
        q: &TorusQuiver,
        v: usize,
        out: &[Vec<usize>],
        color: &mut [u8],
        via: &mut [Option<usize>],
    ) -> Option<Vec<usize>> {
        color[v] = 1;
        for &a in &out[v] {
            let h = q.arrow(a).head;
            if color[h] == 1 {
                let mut cycle = vec![a];
                let mut u = v;
                while u != h {
                    let b = via[u].expect("stack parent");
                    cycle.push(b);
                    u = q.arrow(b).tail;
                }
                cycle.reverse();
                return Some(cycle);
            }
            if color[h] == 0 {
                via[h] = Some(a);
                if let Some(c) = dfs(q, h, out, color, via) {
                    return Some(c);
                }
            }
        }
        color[v] = 2;
        None
    }
    (0..n).find_map(|v| {
        if color[v] == 0 {
            dfs(q, v, &out, &mut color, &mut via)
        } else {
            None
        }
    })
}

/// Contracts the named arrows. The contracted arrows must form a forest;
/// each tree collapses to its least vertex and offsets are re-gauged so the
/// contracted arrows have zero displacement.
pub fn contract(q: &TorusQuiver, arrow_ids: &[String]) -> Result<ContractionMap> {
    let mut set = Vec::new();
    for id in arrow_ids {
        let a = q
            .arrow_index(id)
            .ok_or_else(|| Error::InvalidContraction(ContractionFailure::UnknownArrow(id.clone())))?;
        set.push(a);
    }
    set.sort_unstable();
    set.dedup();
    if let Some(cycle) = directed_cycle(q, &set) {
        return Err(Error::InvalidContraction(ContractionFailure::CollapsesCycle(ids(q, &cycle))));
    }
    let n = q.vertices().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &a in &set {
        adj[q.arrow(a).tail].push(a);
        adj[q.arrow(a).head].push(a);
    }
    let mut root = vec![usize::MAX; n];
    let mut potential = vec![[0i64, 0]; n];
    let mut tree_arrow = vec![false; q.arrows().len()];
    for start in 0..n {
        if root[start] != usize::MAX {
            continue;
        }
        root[start] = start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &a in &adj[v] {
                let arr = q.arrow(a);
                let (u, pot) = if arr.tail == v {
                    (arr.head, tiling::add(potential[v], arr.offset))
                } else {
                    (arr.tail, tiling::sub(potential[v], arr.offset))
                };
                if root[u] == usize::MAX {
                    root[u] = start;
                    potential[u] = pot;
                    tree_arrow[a] = true;
                    stack.push(u);
                }
            }
        }
    }
    for &a in &set {
        if tree_arrow[a] {
            continue;
        }
        let arr = q.arrow(a);
        let failure = if tiling::sub(potential[arr.head], potential[arr.tail]) != arr.offset {
            ContractionFailure::NontrivialHomology(vec![arr.id.clone()])
        } else {
            ContractionFailure::NotAForest(vec![arr.id.clone()])
        };
        return Err(Error::InvalidContraction(failure));
    }
    let reps: Vec<usize> = (0..n).filter(|&v| root[v] == v).collect();
    let rep_index: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertex_merge: Vec<usize> = (0..n).map(|v| rep_index[&root[v]]).collect();
    let contracted: HashSet<usize> = set.iter().copied().collect();
    let mut arrow_image = vec![None; q.arrows().len()];
    let mut arrows = Vec::new();
    for (a, arr) in q.arrows().iter().enumerate() {
        if contracted.contains(&a) {
            continue;
        }
        arrow_image[a] = Some(arrows.len());
        arrows.push(Arrow {
            id: arr.id.clone(),
            tail: vertex_merge[arr.tail],
            head: vertex_merge[arr.head],
            offset: tiling::sub(
                tiling::add(arr.offset, potential[arr.tail]),
                potential[arr.head],
            ),
        });
    }
    let mut faces = Vec::new();
    for (i, f) in q.faces().iter().enumerate() {
        let kept: Vec<usize> = f.arrows.iter().filter_map(|&a| arrow_image[a]).collect();
        if kept.len() < 2 {
            return Err(Error::InvalidContraction(ContractionFailure::DegenerateFace(i)));
        }
        faces.push(Face {
            sign: f.sign,
            arrows: kept,
        });
    }
    let vertices = reps.iter().map(|&v| q.vertices()[v].clone()).collect();
    let target = TorusQuiver::from_parts(format!("{}_contracted", q.name()), vertices, arrows, faces);
    Ok(ContractionMap {
        source: q.clone(),
        contracted: set,
        vertex_merge,
        potential,
        target,
        arrow_image,
    })
}

/// The result of deleting length-2 faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCycleRemoval {
    pub quiver: TorusQuiver,
    /// Each removed arrow with the path of surviving arrows it equals.
    pub substitutions: Vec<(String, Vec<String>)>,
}

/// Repeatedly deletes the two arrows of a length-2 face and merges the two
/// faces adjacent to it. Each deleted arrow equals the rest of its other
/// face, which is recorded as a substitution.
pub fn remove_two_cycles(q: &TorusQuiver) -> TwoCycleRemoval {
    let mut faces: Vec<Face> = q.faces().to_vec();
    let mut alive = vec![true; q.arrows().len()];
    let mut subst: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut stuck: HashSet<Vec<usize>> = HashSet::new();
    while let Some(fi) = faces
        .iter()
        .position(|f| f.arrows.len() == 2 && !stuck.contains(&f.arrows))
    {
        let (alpha, beta) = (faces[fi].arrows[0], faces[fi].arrows[1]);
        let other = |x: usize| {
            faces
                .iter()
                .enumerate()
                .position(|(i, f)| i != fi && f.arrows.contains(&x))
        };
        let (Some(fa), Some(fb)) = (other(alpha), other(beta)) else {
            stuck.insert(faces[fi].arrows.clone());
            continue;
        };
        if fa == fb {
            stuck.insert(faces[fi].arrows.clone());
            continue;
        }
        let rest = |f: &Face, x: usize| -> Vec<usize> {
            let k = f.arrows.iter().position(|&y| y == x).expect("arrow on face");
            f.arrows[k + 1..].iter().chain(&f.arrows[..k]).copied().collect()
        };
        let rest_a = rest(&faces[fa], alpha);
        let rest_b = rest(&faces[fb], beta);
        subst.insert(beta, rest_a.clone());
        subst.insert(alpha, rest_b.clone());
        let merged = Face {
            sign: faces[fa].sign,
            arrows: rest_a.into_iter().chain(rest_b).collect(),
        };
        alive[alpha] = false;
        alive[beta] = false;
        let keep_at = fa.min(fb);
        let mut next = Vec::with_capacity(faces.len() - 2);
        for (i, f) in faces.into_iter().enumerate() {
            if i == keep_at {
                next.push(merged.clone());
            } else if i != fi && i != fa && i != fb {
                next.push(f);
            }
        }
        faces = next;
    }
    let mut index = vec![usize::MAX; q.arrows().len()];
    let mut arrows = Vec::new();
    for (a, arr) in q.arrows().iter().enumerate() {
        if alive[a] {
            index[a] = arrows.len();
            arrows.push(arr.clone());
        }
    }
    let faces = faces
        .into_iter()
        .map(|f| Face {
            sign: f.sign,
            arrows: f.arrows.iter().map(|&a| index[a]).collect(),
        })
        .collect();
    fn expand(a: usize, subst: &BTreeMap<usize, Vec<usize>>, out: &mut Vec<usize>) {
        match subst.get(&a) {
            Some(w) => w.iter().for_each(|&b| expand(b, subst, out)),
            None => out.push(a),
        }
    }
    let substitutions = subst
        .keys()
        .map(|&a| {
            let mut w = Vec::new();
            expand(a, &subst, &mut w);
            (q.arrow(a).id.clone(), ids(q, &w))
        })
        .collect();
    TwoCycleRemoval {
        quiver: TorusQuiver::from_parts(q.name().to_string(), q.vertices().to_vec(), arrows, faces),
        substitutions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition1 {
    Holds,
    NotApplicable,
}

impl Condition1 {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition1::Holds => "holds",
            Condition1::NotApplicable => "not-applicable",
        }
    }
}

/// The degree criterion: no loops, and every contracted arrow has an
/// endpoint with exactly one incoming and one outgoing arrow.
pub fn check_condition1_sufficient(q: &TorusQuiver, contracted: &[usize]) -> Condition1 {
    if contracted.is_empty() {
        return Condition1::Holds;
    }
    if q.has_loops() {
        return Condition1::NotApplicable;
    }
    let thin = |v: usize| q.in_arrows(v).len() == 1 && q.out_arrows(v).len() == 1;
    if contracted.iter().all(|&a| thin(q.arrow(a).tail) || thin(q.arrow(a).head)) {
        Condition1::Holds
    } else {
        Condition1::NotApplicable
    }
}

/// A cycle of the source quiver with image not divisible by sigma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub cycle: PathWord,
    pub image: Monomial,
    pub homology: Vec2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition2 {
    /// Consecutive witnesses span unimodular cones whose lattice points are
    /// all realized by products of the two witness cycles.
    Verified(Vec<Witness>),
    /// No sigma-free cycle has homology `k * direction` for large `k`.
    Failed { direction: Vec2 },
    Inconclusive { len_bound: usize },
}

impl Condition2 {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition2::Verified(_) => "verified",
            Condition2::Failed { .. } => "failed",
            Condition2::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdequacyReport {
    pub condition1: Condition1,
    /// Target vertex id with its verdict. The displacements required at a
    /// vertex are all of the lattice, so every vertex gets the same verdict.
    pub condition2: Vec<(String, Condition2)>,
    pub len_bound: usize,
}

pub fn check_adequacy(cmap: &ContractionMap, target_labels: &Labeling, len_bound: usize) -> Result<AdequacyReport> {
    let condition1 = check_condition1_sufficient(&cmap.source, &cmap.contracted);
    let verdict = check_condition2(cmap, target_labels, len_bound)?;
    let condition2 = cmap
        .target
        .vertices()
        .iter()
        .map(|v| (v.clone(), verdict.clone()))
        .collect();
    Ok(AdequacyReport {
        condition1,
        condition2,
        len_bound,
    })
}

/// Searches source cycles of length at most `len_bound` whose image under
/// the pulled-back labels is not divisible by sigma, and decides whether
/// their homology classes realize every lattice displacement.
pub fn check_condition2(cmap: &ContractionMap, target_labels: &Labeling, len_bound: usize) -> Result<Condition2> {
    let q = &cmap.source;
    let lab = cmap.pull_labels(target_labels);
    let sigma = target_labels
        .sigma(&cmap.target)
        .ok_or_else(|| Error::Structural("target has no faces".into()))?;
    let sigma_vars = sigma.support();
    let witnesses = sigma_free_cycles(q, &lab, &sigma, len_bound);
    if let Some(fan) = unimodular_fan(&witnesses, &sigma_vars) {
        return Ok(Condition2::Verified(fan));
    }
    if let Some(direction) = unreachable_direction(q, &lab, &sigma_vars) {
        return Ok(Condition2::Failed { direction });
    }
    Ok(Condition2::Inconclusive { len_bound })
}

/// Shortest, then least, sigma-free cycle for each (base vertex, homology,
/// support) with nonzero homology.
fn sigma_free_cycles(q: &TorusQuiver, lab: &Labeling, sigma: &Monomial, len_bound: usize) -> Vec<Witness> {
    let mut found: BTreeMap<(usize, Vec2, Vec<usize>), PathWord> = BTreeMap::new();
    for base in 0..q.vertices().len() {
        let mut seen: HashSet<(usize, Monomial, Vec2)> = HashSet::new();
        let mut level: Vec<(Vec<usize>, usize, Monomial, Vec2)> =
            vec![(Vec::new(), base, Monomial::one(lab.nvars()), [0, 0])];
        for _ in 0..len_bound {
            let mut next = Vec::new();
            for (path, v, m, h) in &level {
                for &a in q.out_arrows(*v) {
                    let m2 = m.mul(lab.label(a));
                    if sigma.divides(&m2) {
                        continue;
                    }
                    let arr = q.arrow(a);
                    let h2 = tiling::add(*h, arr.offset);
                    if !seen.insert((arr.head, m2.clone(), h2)) {
                        continue;
                    }
                    let mut p2 = path.clone();
                    p2.push(a);
                    if arr.head == base && h2 != [0, 0] {
                        let key = (base, h2, m2.support());
                        found
                            .entry(key)
                            .or_insert_with(|| PathWord::new(q, p2.clone()).expect("composable"));
                    }
                    next.push((p2, arr.head, m2, h2));
                }
            }
            level = next;
        }
    }
    found
        .into_values()
        .map(|cycle| Witness {
            image: lab.tau(&cycle),
            homology: cycle.homology(q),
            cycle,
        })
        .collect()
}

fn support_mask(m: &Monomial) -> u64 {
    m.support().iter().fold(0u64, |acc, &i| acc | (1 << i))
}

/// A cyclic sequence of witnesses going once around the origin in which
/// consecutive homology vectors have determinant 1, share a base vertex, and
/// jointly miss some variable of sigma.
fn unimodular_fan(witnesses: &[Witness], sigma_vars: &[usize]) -> Option<Vec<Witness>> {
    let sigma_mask = sigma_vars.iter().fold(0u64, |acc, &i| acc | (1 << i));
    let mut dirs: Vec<[i128; 2]> = witnesses
        .iter()
        .map(|w| [w.homology[0] as i128, w.homology[1] as i128])
        .collect();
    dirs.sort_by(|a, b| angle_cmp(*a, *b).then_with(|| a.cmp(b)));
    dirs.dedup();
    let n = dirs.len();
    let by_dir: Vec<Vec<&Witness>> = dirs
        .iter()
        .map(|d| {
            witnesses
                .iter()
                .filter(|w| [w.homology[0] as i128, w.homology[1] as i128] == *d)
                .collect()
        })
        .collect();
    let pair = |i: usize, j: usize| -> Option<(&Witness, &Witness)> {
        if det2(dirs[i], dirs[j]) != 1 {
            return None;
        }
        for a in &by_dir[i] {
            for b in &by_dir[j] {
                let free = sigma_mask & !(support_mask(&a.image) | support_mask(&b.image));
                if a.cycle.tail() == b.cycle.tail() && free != 0 {
                    return Some((a, b));
                }
            }
        }
        None
    };
    let feasible: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| pair(i, j).is_some()).collect()).collect();
    for s in 0..n {
        // walk forward in angular order from s and come back to s
        let mut prev: Vec<Option<usize>> = vec![None; n + 1];
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for k in 0..n {
            if !reach[k] {
                continue;
            }
            let from = (s + k) % n;
            for m in k + 1..=n {
                let to = (s + m) % n;
                if !reach[m] && feasible[from][to] {
                    reach[m] = true;
                    prev[m] = Some(k);
                }
            }
        }
        if reach[n] {
            let mut steps = Vec::new();
            let mut m = n;
            while let Some(k) = prev[m] {
                steps.push(((s + k) % n, (s + m) % n));
                m = k;
            }
            steps.reverse();
            let mut fan: Vec<Witness> = Vec::new();
            for (i, j) in steps {
                let (a, b) = pair(i, j).expect("feasible step");
                for w in [a, b] {
                    if !fan.contains(w) {
                        fan.push(w.clone());
                    }
                }
            }
            return Some(fan);
        }
    }
    None
}

/// Simple cycles of `q` as arrow lists.
pub fn simple_cycles(q: &TorusQuiver) -> Vec<Vec<usize>> {
    let n = q.vertices().len();
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        fn go(
            q: &TorusQuiver,
            s: usize,
            v: usize,
            on_path: &mut [bool],
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            for &a in q.out_arrows(v) {
                let h = q.arrow(a).head;
                if h == s {
                    path.push(a);
                    out.push(path.clone());
                    path.pop();
                } else if h > s && !on_path[h] {
                    on_path[h] = true;
                    path.push(a);
                    go(q, s, h, on_path, path, out);
                    path.pop();
                    on_path[h] = false;
                }
            }
        }
        on_path[s] = true;
        go(q, s, s, &mut on_path, &mut path, &mut out);
    }
    out
}

/// Looks for a lattice direction that no sigma-free cycle can reach far out.
///
/// Every cycle's arrow multiset splits into simple cycles, so its image lies
/// in the cone `C` spanned by simple-cycle images. If homology is a linear
/// function `M` of the image, a sigma-free cycle lies within bounded distance
/// of `M(C ∩ {e_v = 0})` for some variable `v` of sigma. A direction outside
/// the union of those plane cones is therefore unreachable for large
/// multiples.
fn unreachable_direction(q: &TorusQuiver, lab: &Labeling, sigma_vars: &[usize]) -> Option<Vec2> {
    let cycles = simple_cycles(q);
    let nv = lab.nvars();
    let images: Vec<Vec<i64>> = cycles
        .iter()
        .map(|c| lab.tau_word(c).exponents().iter().map(|&e| e as i64).collect())
        .collect();
    let homs: Vec<Vec2> = cycles
        .iter()
        .map(|c| c.iter().fold([0, 0], |s, &a| tiling::add(s, q.arrow(a).offset)))
        .collect();
    let a = lattice::to_rat(&images);
    let mut m_rows: Vec<Vec<Rat>> = Vec::new();
    for r in 0..2 {
        let b: Vec<Rat> = homs.iter().map(|h| Rat::from_integer(h[r] as i128)).collect();
        m_rows.push(lattice::solve(&a, &b)?);
    }
    let project = |e: &[i64]| -> Vec<Rat> {
        m_rows
            .iter()
            .map(|row| row.iter().zip(e).map(|(x, &y)| *x * Rat::from_integer(y as i128)).sum())
            .collect()
    };
    let mut cones: Vec<Vec<[i128; 2]>> = Vec::new();
    for &v in sigma_vars {
        if v >= nv {
            continue;
        }
        let gens: Vec<[i128; 2]> = images
            .iter()
            .filter(|e| e[v] == 0)
            .map(|e| {
                let p = lattice::primitive(&project(e));
                [p[0], p[1]]
            })
            .filter(|p| *p != [0, 0])
            .collect();
        cones.push(gens);
    }
    let mut rays: Vec<[i128; 2]> = cones.iter().flatten().copied().collect();
    rays.sort_by(|a, b| angle_cmp(*a, *b).then_with(|| a.cmp(b)));
    rays.dedup_by(|a, b| det2(*a, *b) == 0 && a[0] * b[0] + a[1] * b[1] > 0);
    let mut tests: Vec<[i128; 2]> = Vec::new();
    if rays.is_empty() {
        tests.push([1, 0]);
    }
    for (i, &r) in rays.iter().enumerate() {
        let next = rays[(i + 1) % rays.len()];
        tests.push(r);
        let d = det2(r, next);
        if d > 0 {
            tests.push([r[0] + next[0], r[1] + next[1]]);
        } else {
            // gap of at least half a turn
            tests.push([-r[1], r[0]]);
        }
    }
    tests
        .into_iter()
        .find(|t| !cones.iter().any(|g| in_plane_cone(*t, g)))
        .map(|t| {
            let g = lattice::gcd(t[0], t[1]).max(1);
            [(t[0] / g) as i64, (t[1] / g) as i64]
        })
}
