//! Shared fixtures, a brute-force equivalence oracle, and property checks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use brane_core::toric;
use brane_core::{
    superpotential_relations, Labeling, Monomial, PathWord, RewriteSystem, Sign, TilingFile,
    TorusQuiver,
};

pub const ALL: [&str; 13] = [
    "conifold",
    "c3",
    "i_a",
    "i_b",
    "ii_a",
    "ii_b",
    "iii_a",
    "iii_a_both_up",
    "iii_b",
    "iii_c",
    "iv_a",
    "iv_b",
    "iv_c",
];
pub const NONCANCELLATIVE: [&str; 4] = ["i_a", "ii_a", "iii_a", "iv_a"];
pub const CANCELLATIVE: [&str; 6] = ["i_b", "ii_b", "iii_b", "iii_c", "iv_b", "iv_c"];

pub fn tiling_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../tilings")
        .join(format!("{name}.tiling"))
}

pub struct Fixture {
    pub file: TilingFile,
    pub q: TorusQuiver,
    pub sys: RewriteSystem,
    pub lab: Labeling,
}

pub fn load(name: &str) -> Fixture {
    let text = std::fs::read_to_string(tiling_path(name)).expect("tiling file");
    let file = TilingFile::parse(&text).expect("parses");
    let q = file.quiver().expect("quiver");
    let rels = superpotential_relations(&q).expect("relations");
    let sys = RewriteSystem::new(&q, &rels).expect("rewrite system");
    let lab = file.labeling(&q).expect("labels").expect("has labels");
    Fixture { file, q, sys, lab }
}

pub fn parse(text: &str) -> TorusQuiver {
    TilingFile::parse(text).unwrap().quiver().unwrap()
}

pub fn monomials(list: &[&str], vars: &[String]) -> BTreeSet<Monomial> {
    list.iter().map(|m| Monomial::parse(m, vars).unwrap()).collect()
}

/// For each arrow, the rest of its negative face and the rest of its
/// positive face, found by scanning the face list directly.
pub fn face_relations(q: &TorusQuiver) -> Vec<(Vec<usize>, Vec<usize>)> {
    let rest = |sign: Sign, a: usize| -> Vec<usize> {
        for f in q.faces().iter().filter(|f| f.sign == sign) {
            if let Some(i) = f.arrows.iter().position(|&b| b == a) {
                let mut r = f.arrows[i + 1..].to_vec();
                r.extend_from_slice(&f.arrows[..i]);
                return r;
            }
        }
        panic!("arrow {a} has no {sign:?} face");
    };
    (0..q.arrows().len())
        .map(|a| (rest(Sign::Negative, a), rest(Sign::Positive, a)))
        .collect()
}

/// Every arrow word of length `len`.
pub fn all_words(q: &TorusQuiver, len: usize) -> Vec<Vec<usize>> {
    let mut level: Vec<Vec<usize>> = if len == 0 {
        return Vec::new();
    } else {
        (0..q.arrows().len()).map(|a| vec![a]).collect()
    };
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &level {
            let h = q.arrow(*w.last().unwrap()).head;
            for &a in q.out_arrows(h) {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        level = next;
    }
    level
}

/// Connected components of the graph on all words of length `len` whose
/// edges substitute one side of a face relation for the other.
pub fn brute_classes(q: &TorusQuiver, len: usize) -> HashMap<Vec<usize>, usize> {
    let words = all_words(q, len);
    let index: HashMap<Vec<usize>, usize> =
        words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let rels = face_relations(q);
    for (i, w) in words.iter().enumerate() {
        for (l, r) in &rels {
            for (from, to) in [(l, r), (r, l)] {
                if from.len() > w.len() {
                    continue;
                }
                for s in 0..=w.len() - from.len() {
                    if &w[s..s + from.len()] == from.as_slice() {
                        let mut w2 = w[..s].to_vec();
                        w2.extend_from_slice(to);
                        w2.extend_from_slice(&w[s + from.len()..]);
                        if let Some(&j) = index.get(&w2) {
                            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                            parent[a] = b;
                        }
                    }
                }
            }
        }
    }
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let c = find(&mut parent, i);
            (w, c)
        })
        .collect()
}

/// A path built by walking from `start`, choosing arrows by `choices`.
pub fn walk(q: &TorusQuiver, start: usize, choices: &[usize]) -> PathWord {
    let v = start % q.vertices().len();
    let mut arrows = Vec::new();
    let mut at = v;
    for c in choices {
        let outs = q.out_arrows(at);
        let a = outs[c % outs.len()];
        arrows.push(a);
        at = q.arrow(a).head;
    }
    PathWord::at(q, v, arrows).unwrap()
}

/// Splits a walk into two composable pieces.
pub fn split(q: &TorusQuiver, p: &PathWord, at: usize) -> (PathWord, PathWord) {
    let k = at % (p.len() + 1);
    let a = PathWord::at(q, p.tail(), p.arrows()[..k].to_vec()).unwrap();
    let b = PathWord::at(q, a.head(), p.arrows()[k..].to_vec()).unwrap();
    (a, b)
}

pub fn check_homology_additive(q: &TorusQuiver, p: &PathWord, at: usize) -> Result<(), String> {
    let (a, b) = split(q, p, at);
    let (ha, hb) = (a.homology(q), b.homology(q));
    let joined = a.concat(q, &b).map_err(|e| e.to_string())?;
    if joined.homology(q) == [ha[0] + hb[0], ha[1] + hb[1]] {
        Ok(())
    } else {
        Err(format!("homology not additive on {}", p.display(q)))
    }
}

/// Every single rewrite step preserves endpoints, homology, the image, and
/// the length when all faces have the same length.
pub fn check_step_conservation(fx: &Fixture, p: &PathWord) -> Result<(), String> {
    let q = &fx.q;
    let word = brane_core::rewrite::to_word(p.arrows());
    let uniform = q.uniform_face_length();
    let mut err = None;
    fx.sys.for_each_step(&word, |w| {
        if err.is_some() {
            return;
        }
        let arrows = brane_core::rewrite::from_word(&w);
        let r = if arrows.is_empty() {
            Ok(PathWord::empty(p.tail()))
        } else {
            PathWord::new(q, arrows)
        };
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                err = Some(format!("step from {} is not a path: {e}", p.display(q)));
                return;
            }
        };
        if r.tail() != p.tail() || r.head() != p.head() {
            err = Some(format!("endpoints changed: {} -> {}", p.display(q), r.display(q)));
        } else if r.homology(q) != p.homology(q) {
            err = Some(format!("homology changed: {} -> {}", p.display(q), r.display(q)));
        } else if uniform && r.len() != p.len() {
            err = Some(format!("length changed: {} -> {}", p.display(q), r.display(q)));
        } else if fx.lab.tau(&r) != fx.lab.tau(p) {
            err = Some(format!("image changed: {} -> {}", p.display(q), r.display(q)));
        }
    });
    err.map_or(Ok(()), Err)
}

pub fn check_tau_multiplicative(fx: &Fixture, p: &PathWord, at: usize) -> Result<(), String> {
    let (a, b) = split(&fx.q, p, at);
    if fx.lab.tau(p) == fx.lab.tau(&a).mul(&fx.lab.tau(&b)) {
        Ok(())
    } else {
        Err(format!("image not multiplicative on {}", p.display(&fx.q)))
    }
}

/// Rings at every length bound up to `max_bound`, indexed by bound.
pub fn rings_by_bound(fx: &Fixture, max_bound: usize) -> Vec<toric::Rings> {
    (0..=max_bound)
        .map(|l| toric::compute_rings(&fx.q, &fx.lab, l))
        .collect()
}

pub fn check_monotone(rings: &[toric::Rings], l1: usize, l2: usize) -> Result<(), String> {
    let (lo, hi) = (l1.min(l2), l1.max(l2));
    let (a, b) = (&rings[lo], &rings[hi]);
    for (v, (x, y)) in a.vertex_images.iter().zip(&b.vertex_images).enumerate() {
        if !x.is_subset(y) {
            return Err(format!("vertex {v} images shrink from bound {lo} to {hi}"));
        }
    }
    if !a.s_elements.is_subset(&b.s_elements) {
        return Err(format!("S shrinks from bound {lo} to {hi}"));
    }
    if !a.r_elements.is_subset(&b.r_elements) {
        return Err(format!("R shrinks from bound {lo} to {hi}"));
    }
    Ok(())
}

/// Runs the four path and ring properties on one tiling, `cases` random
/// inputs each.
pub fn run_properties(fx: &Fixture, cases: u32, max_bound: usize) -> Result<(), String> {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestCaseError, TestRunner};

    let nv = fx.q.vertices().len();
    let walks = (0..nv, prop::collection::vec(0usize..8, 0..=12), 0usize..16);
    let fail = |e: String| TestCaseError::fail(e);
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });

    runner
        .run(&walks, |(v, choices, at)| {
            let p = walk(&fx.q, v, &choices);
            check_homology_additive(&fx.q, &p, at).map_err(fail)?;
            check_tau_multiplicative(fx, &p, at).map_err(fail)
        })
        .map_err(|e| format!("{}: {e}", fx.q.name()))?;

    let short = (0..nv, prop::collection::vec(0usize..8, 0..=8));
    runner
        .run(&short, |(v, choices)| {
            check_step_conservation(fx, &walk(&fx.q, v, &choices)).map_err(fail)
        })
        .map_err(|e| format!("{}: {e}", fx.q.name()))?;

    let rings = rings_by_bound(fx, max_bound);
    runner
        .run(&(0..=max_bound, 0..=max_bound), |(l1, l2)| {
            check_monotone(&rings, l1, l2).map_err(fail)
        })
        .map_err(|e| format!("{}: {e}", fx.q.name()))
}
