//! Superpotential relations and bounded decision procedures for path
//! equivalence.

use std::collections::{HashMap, HashSet, VecDeque};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::tiling::{PathWord, TorusQuiver};

/// Arrow indices of a path. Quivers with more than 256 arrows are rejected.
pub type Word = SmallVec<[u8; 24]>;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// `left ≡ right`, where `left` completes `witness` to its negative face and
/// `right` completes it to its positive face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub left: PathWord,
    pub right: PathWord,
    pub witness: usize,
}

/// One relation per arrow, in arrow order.
pub fn superpotential_relations(q: &TorusQuiver) -> Result<Vec<Relation>> {
    let mut out = Vec::with_capacity(q.arrows().len());
    for a in 0..q.arrows().len() {
        let (pos, neg) = q.faces_of(a);
        let (Some(pos), Some(neg)) = (pos, neg) else {
            return Err(Error::Structural(format!(
                "arrow {} is not on both a positive and a negative face",
                q.arrow(a).id
            )));
        };
        let rest = |f: usize| -> Result<PathWord> {
            let cycle = q.rotate_face_to(f, a).unwrap_or_default();
            let head = q.arrow(a).head;
            PathWord::at(q, head, cycle[1..].to_vec())
        };
        out.push(Relation {
            left: rest(neg)?,
            right: rest(pos)?,
            witness: a,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct Rules {
    rules: Vec<(Word, Word)>,
    by_first: Vec<Vec<usize>>,
    preserves_length: bool,
}

impl Rules {
    fn new(mut rules: Vec<(Word, Word)>, narrows: usize) -> Self {
        rules.retain(|(l, r)| l != r);
        rules.sort();
        rules.dedup();
        let mut by_first = vec![Vec::new(); narrows];
        for (i, (l, _)) in rules.iter().enumerate() {
            by_first[l[0] as usize].push(i);
        }
        let preserves_length = rules.iter().all(|(l, r)| l.len() == r.len());
        Self {
            rules,
            by_first,
            preserves_length,
        }
    }

    fn for_each_step(&self, w: &[u8], mut f: impl FnMut(Word)) {
        for i in 0..w.len() {
            for &r in &self.by_first[w[i] as usize] {
                let (lhs, rhs) = &self.rules[r];
                if w[i..].starts_with(lhs) {
                    let mut next = Word::with_capacity(w.len() - lhs.len() + rhs.len());
                    next.extend_from_slice(&w[..i]);
                    next.extend_from_slice(rhs);
                    next.extend_from_slice(&w[i + lhs.len()..]);
                    debug_assert!(!self.preserves_length || next.len() == w.len());
                    f(next);
                }
            }
        }
    }
}

fn substitute(w: &[u8], subst: &[Option<Word>]) -> Word {
    let mut out = Word::with_capacity(w.len());
    for &a in w {
        match &subst[a as usize] {
            Some(image) => out.extend_from_slice(image),
            None => out.push(a),
        }
    }
    out
}

/// Rewrite rules in both directions of every relation.
///
/// Decisions run in a reduced system: whenever some relation reads
/// `b ≡ w` for a single arrow `b` not occurring in `w`, the arrow is
/// eliminated by substituting `w` for it everywhere. This is an isomorphism
/// of the presented path categories, so `p ≡ q` iff their substituted words
/// are equivalent in the reduced system. It removes the arrows of length-2
/// faces, whose relations otherwise make rewrite classes very large.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    steps: Rules,
    subst: Vec<Option<Word>>,
    reduced: Rules,
}

impl RewriteSystem {
    pub fn new(q: &TorusQuiver, rels: &[Relation]) -> Result<Self> {
        let narrows = q.arrows().len();
        if narrows > 256 {
            return Err(Error::Unsupported("more than 256 arrows".into()));
        }
        let mut rules = Vec::new();
        for r in rels {
            if r.left.is_empty() || r.right.is_empty() {
                return Err(Error::Structural("relation with an empty side".into()));
            }
            let ends = |p: &PathWord| (p.tail(), p.head(), p.homology(q));
            if ends(&r.left) != ends(&r.right) {
                return Err(Error::Structural(format!(
                    "relation for {} does not preserve endpoints and homology",
                    q.arrow(r.witness).id
                )));
            }
            let l = to_word(r.left.arrows());
            let rr = to_word(r.right.arrows());
            rules.push((l.clone(), rr.clone()));
            rules.push((rr, l));
        }
        let steps = Rules::new(rules.clone(), narrows);
        let mut subst: Vec<Option<Word>> = vec![None; narrows];
        let mut pairs: Vec<(Word, Word)> = steps.rules.clone();
        loop {
            let pick = pairs
                .iter()
                .filter(|(l, r)| l.len() == 1 && l != r && !r.contains(&l[0]))
                .min_by(|x, y| (x.0[0], x.1.len(), &x.1).cmp(&(y.0[0], y.1.len(), &y.1)))
                .cloned();
            let Some((l, image)) = pick else { break };
            let b = l[0] as usize;
            let mut one: Vec<Option<Word>> = vec![None; narrows];
            one[b] = Some(image.clone());
            for s in subst.iter_mut().flatten() {
                *s = substitute(s, &one);
            }
            subst[b] = Some(image);
            pairs = pairs
                .iter()
                .map(|(l, r)| (substitute(l, &one), substitute(r, &one)))
                .filter(|(l, r)| l != r)
                .collect();
        }
        let reduced = Rules::new(pairs, narrows);
        Ok(Self {
            steps,
            subst,
            reduced,
        })
    }

    /// Whether every relation has sides of equal length.
    pub fn preserves_length(&self) -> bool {
        self.steps.preserves_length
    }

    /// The directed rules, both directions of every relation.
    pub fn rules(&self) -> &[(Word, Word)] {
        &self.steps.rules
    }

    /// Arrows removed by substitution, with their images.
    pub fn eliminated(&self) -> impl Iterator<Item = (usize, &Word)> + '_ {
        self.subst
            .iter()
            .enumerate()
            .filter_map(|(a, s)| s.as_ref().map(|w| (a, w)))
    }

    /// Calls `f` on every word obtained from `w` by one rule application.
    pub fn for_each_step(&self, w: &[u8], f: impl FnMut(Word)) {
        self.steps.for_each_step(w, f)
    }

    /// The image of `w` in the reduced system.
    pub fn reduce(&self, w: &[u8]) -> Word {
        substitute(w, &self.subst)
    }

    /// The rewrite class of a reduced word, or `None` once more than
    /// `budget` words have been visited.
    pub fn explore_reduced(&self, start: &[u8], budget: usize) -> Option<Vec<Word>> {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        let s: Word = start.into();
        seen.insert(s.clone());
        queue.push_back(s);
        while let Some(w) = queue.pop_front() {
            self.reduced.for_each_step(&w, |n| {
                if !seen.contains(&n) {
                    seen.insert(n.clone());
                    queue.push_back(n);
                }
            });
            order.push(w);
            if seen.len() > budget {
                return None;
            }
        }
        Some(order)
    }
}

pub fn to_word(arrows: &[usize]) -> Word {
    arrows.iter().map(|&a| a as u8).collect()
}

pub fn from_word(w: &[u8]) -> Vec<usize> {
    w.iter().map(|&a| a as usize).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Inequivalent,
    BudgetExceeded,
}

impl Equivalence {
    pub fn as_str(self) -> &'static str {
        match self {
            Equivalence::Equivalent => "equivalent",
            Equivalence::Inequivalent => "inequivalent",
            Equivalence::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// Decides `p ≡ q` by breadth-first search over the rewrite class of `p`.
pub fn paths_equivalent(
    q: &TorusQuiver,
    sys: &RewriteSystem,
    p: &PathWord,
    r: &PathWord,
    budget: usize,
) -> Equivalence {
    if p.tail() != r.tail() || p.head() != r.head() || p.homology(q) != r.homology(q) {
        return Equivalence::Inequivalent;
    }
    if p.is_empty() || r.is_empty() {
        return if p == r {
            Equivalence::Equivalent
        } else {
            Equivalence::Inequivalent
        };
    }
    let target = sys.reduce(&to_word(r.arrows()));
    let start = sys.reduce(&to_word(p.arrows()));
    if sys.reduced.preserves_length && start.len() != target.len() {
        return Equivalence::Inequivalent;
    }
    if start == target {
        return Equivalence::Equivalent;
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        let mut found = false;
        sys.reduced.for_each_step(&w, |n| {
            if n == target {
                found = true;
            }
            if !seen.contains(&n) {
                seen.insert(n.clone());
                queue.push_back(n);
            }
        });
        if found {
            return Equivalence::Equivalent;
        }
        if seen.len() > budget {
            return Equivalence::BudgetExceeded;
        }
    }
    Equivalence::Inequivalent
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded;

/// Memoized equivalence-class ids. Empty paths get ids counting down from
/// `u32::MAX`, one per vertex.
pub struct ClassIndex<'a> {
    sys: &'a RewriteSystem,
    budget: usize,
    ids: HashMap<Word, u32>,
    classes: u32,
    too_big: HashSet<Word>,
}

impl<'a> ClassIndex<'a> {
    pub fn new(_q: &TorusQuiver, sys: &'a RewriteSystem, budget: usize) -> Self {
        Self {
            sys,
            budget,
            ids: HashMap::new(),
            classes: 0,
            too_big: HashSet::new(),
        }
    }

    pub fn class_of(&mut self, p: &PathWord) -> Result<u32, BudgetExceeded> {
        if p.is_empty() {
            return Ok(u32::MAX - p.tail() as u32);
        }
        self.class_of_word(&to_word(p.arrows()))
    }

    pub fn class_of_word(&mut self, w: &[u8]) -> Result<u32, BudgetExceeded> {
        let w = self.sys.reduce(w);
        if let Some(&c) = self.ids.get(&w) {
            return Ok(c);
        }
        if self.too_big.contains(&w) {
            return Err(BudgetExceeded);
        }
        match self.sys.explore_reduced(&w, self.budget) {
            Some(members) => {
                let c = self.classes;
                self.classes += 1;
                for m in members {
                    self.ids.insert(m, c);
                }
                Ok(c)
            }
            None => {
                self.too_big.insert(w);
                Err(BudgetExceeded)
            }
        }
    }

    pub fn known_words(&self) -> usize {
        self.ids.len()
    }
}

/// Visits every path of length at most `max_len`: empty paths by vertex,
/// then by length, then lexicographically by arrow index. Stops when `f`
/// returns false.
pub fn for_each_path(q: &TorusQuiver, max_len: usize, mut f: impl FnMut(&PathWord) -> bool) {
    let mut level: Vec<PathWord> = (0..q.vertices().len()).map(PathWord::empty).collect();
    for len in 0..=max_len {
        for p in &level {
            if !f(p) {
                return;
            }
        }
        if len == max_len {
            break;
        }
        level = extend_level(q, &level, len == 0);
    }
}

fn extend_level(q: &TorusQuiver, level: &[PathWord], from_empty: bool) -> Vec<PathWord> {
    let mut next = Vec::new();
    if from_empty {
        for a in 0..q.arrows().len() {
            next.push(PathWord::new(q, vec![a]).expect("single arrow"));
        }
        return next;
    }
    for p in level {
        for &a in q.out_arrows(p.head()) {
            let mut arrows = p.arrows().to_vec();
            arrows.push(a);
            next.push(PathWord::new(q, arrows).expect("composable extension"));
        }
    }
    next
}

/// Where the cancelled arrow sits relative to the paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The arrow is traversed before the path.
    Before,
    /// The arrow is traversed after the path.
    After,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Before => "before",
            Side::After => "after",
        }
    }
}

/// Two inequivalent paths that become equivalent once `arrow` is attached on
/// `side`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub p: PathWord,
    pub q: PathWord,
    pub arrow: usize,
    pub side: Side,
}

impl Counterexample {
    pub fn extended(&self, quiver: &TorusQuiver) -> (PathWord, PathWord) {
        let a = PathWord::new(quiver, vec![self.arrow]).expect("arrow");
        let ext = |p: &PathWord| match self.side {
            Side::Before => a.concat(quiver, p),
            Side::After => p.concat(quiver, &a),
        };
        (
            ext(&self.p).expect("composable"),
            ext(&self.q).expect("composable"),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CancellativityVerdict {
    NoCounterexample { max_len: usize },
    Counterexample(Counterexample),
    /// No counterexample found, but some classes exceeded the budget.
    Inconclusive { max_len: usize, skipped: usize },
}

/// Searches for a failure of left or right cancellation among paths of
/// length at most `max_len`. The reported pair is the least in the order
/// (longer length, first path, second path, arrow, side).
///
/// Equivalence is compatible with concatenation, so one representative per
/// class suffices: the least path of each class stands for all of it.
pub fn cancellativity_search(
    q: &TorusQuiver,
    sys: &RewriteSystem,
    max_len: usize,
    budget: usize,
) -> CancellativityVerdict {
    let mut index = ClassIndex::new(q, sys, budget);
    let mut reps: HashMap<u32, usize> = HashMap::new();
    let mut rep_paths: Vec<PathWord> = Vec::new();
    // (side, arrow, class of extension) -> representatives, in order
    let mut groups: HashMap<(Side, usize, u32), Vec<usize>> = HashMap::new();
    let mut skipped = 0usize;
    let mut level: Vec<PathWord> = (0..q.vertices().len()).map(PathWord::empty).collect();
    for len in 0..=max_len {
        let first_new = rep_paths.len();
        for p in &level {
            match index.class_of(p) {
                Ok(c) => {
                    reps.entry(c).or_insert_with(|| {
                        rep_paths.push(p.clone());
                        rep_paths.len() - 1
                    });
                }
                Err(BudgetExceeded) => skipped += 1,
            }
        }
        let mut best: Option<(usize, usize, usize, Side)> = None;
        let mut touched: Vec<(Side, usize, u32)> = Vec::new();
        for (r, p) in rep_paths.iter().enumerate().skip(first_new) {
            for (side, arrows) in [
                (Side::Before, q.in_arrows(p.tail())),
                (Side::After, q.out_arrows(p.head())),
            ] {
                for &a in arrows {
                    let mut w = Word::new();
                    match side {
                        Side::Before => {
                            w.push(a as u8);
                            w.extend(p.arrows().iter().map(|&x| x as u8));
                        }
                        Side::After => {
                            w.extend(p.arrows().iter().map(|&x| x as u8));
                            w.push(a as u8);
                        }
                    }
                    match index.class_of_word(&w) {
                        Ok(c) => {
                            let key = (side, a, c);
                            groups.entry(key).or_default().push(r);
                            touched.push(key);
                        }
                        Err(BudgetExceeded) => skipped += 1,
                    }
                }
            }
        }
        touched.sort();
        touched.dedup();
        for key in touched {
            let members = &groups[&key];
            if members.len() < 2 {
                continue;
            }
            let p = members[0];
            let Some(&qn) = members.iter().find(|&&m| m >= first_new && m != p) else {
                continue;
            };
            let cand = (p, qn, key.1, key.0);
            let better = match best {
                None => true,
                Some(b) => {
                    (&rep_paths[cand.0], &rep_paths[cand.1], cand.2, cand.3)
                        < (&rep_paths[b.0], &rep_paths[b.1], b.2, b.3)
                }
            };
            if better {
                best = Some(cand);
            }
        }
        if let Some((p, qn, arrow, side)) = best {
            return CancellativityVerdict::Counterexample(Counterexample {
                p: rep_paths[p].clone(),
                q: rep_paths[qn].clone(),
                arrow,
                side,
            });
        }
        if len < max_len {
            level = extend_level(q, &level, len == 0);
        }
    }
    if skipped > 0 {
        CancellativityVerdict::Inconclusive { max_len, skipped }
    } else {
        CancellativityVerdict::NoCounterexample { max_len }
    }
}

/// The least face rotation based at `v`.
pub fn unit_cycle_at(q: &TorusQuiver, v: usize) -> Result<PathWord> {
    let mut best: Option<Vec<usize>> = None;
    for f in q.faces() {
        let n = f.arrows.len();
        for k in 0..n {
            if q.arrow(f.arrows[k]).tail != v {
                continue;
            }
            let rot: Vec<usize> = f.arrows[k..].iter().chain(&f.arrows[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    let arrows = best.ok_or_else(|| {
        Error::Structural(format!("vertex {} lies on no face", q.vertices()[v]))
    })?;
    PathWord::at(q, v, arrows)
}

pub fn center_candidate_u(q: &TorusQuiver) -> Result<Vec<PathWord>> {
    (0..q.vertices().len()).map(|v| unit_cycle_at(q, v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centrality {
    Certified,
    /// `c_{t(a)} a` and `a c_{h(a)}` are inequivalent for this arrow.
    Failed(usize),
    Inconclusive(usize),
}

/// Checks that a family of cycles, one per vertex, commutes with every
/// arrow: `c_{t(a)}` then `a` is equivalent to `a` then `c_{h(a)}`.
pub fn certify_central(
    q: &TorusQuiver,
    sys: &RewriteSystem,
    family: &[PathWord],
    budget: usize,
) -> Result<Centrality> {
    if family.len() != q.vertices().len() {
        return Err(Error::Malformed("need one cycle per vertex".into()));
    }
    for a in 0..q.arrows().len() {
        let arr = q.arrow(a);
        let single = PathWord::new(q, vec![a])?;
        let left = family[arr.tail].concat(q, &single)?;
        let right = single.concat(q, &family[arr.head])?;
        match paths_equivalent(q, sys, &left, &right, budget) {
            Equivalence::Equivalent => {}
            Equivalence::Inequivalent => return Ok(Centrality::Failed(a)),
            Equivalence::BudgetExceeded => return Ok(Centrality::Inconclusive(a)),
        }
    }
    Ok(Centrality::Certified)
}
