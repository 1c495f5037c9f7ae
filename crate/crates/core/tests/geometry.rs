mod support;

use std::collections::{BTreeSet, HashMap};

use brane_core::geometry::{
    cone_faces, dimension_equalities, finite_point_gluing, geometric_dimension, geometry_report,
    in_monoid, loci, uniqueness_flag, Locus, Uniqueness,
};
use brane_core::lattice;
use brane_core::toric::compute_rings;
use brane_core::{Ambient, Form, Monomial, SubalgebraPresentation};
use num_rational::Rational64;
use support::load;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn mono(text: &str, vars: &[String]) -> Monomial {
    Monomial::parse(text, vars).unwrap()
}

fn k_plus(vars: &[&str], j: &[&str]) -> SubalgebraPresentation {
    let v = names(vars);
    let j = j.iter().map(|m| mono(m, &v)).collect();
    SubalgebraPresentation::new(Ambient::Polynomial { variables: v }, Form::KPlusIdeal(j)).unwrap()
}

#[test]
fn line_in_the_plane() {
    let p = k_plus(&["x", "y"], &["x"]);
    let v = names(&["x", "y"]);
    let l = loci(&p);
    assert!(l.exact);
    assert_eq!(l.w_complement, Locus::ZeroSet(vec![mono("x", &v)]));
    assert_eq!(l.u_complement, l.w_complement);
    assert_eq!(l.w_complement.describe(&v), "Z(x)");
    assert_eq!(geometric_dimension(&p).unwrap(), 1);
    let d = dimension_equalities(&p);
    assert_eq!((d.dim_s_r, d.trdeg, d.dim_s), (2, 2, 2));
    assert_eq!(uniqueness_flag(&p.ambient), Uniqueness::UniqueMaximalDepiction);
}

#[test]
fn origin_in_the_plane() {
    assert_eq!(geometric_dimension(&k_plus(&["x", "y"], &["x", "y"])).unwrap(), 0);
}

#[test]
fn unit_ideal_means_r_equals_s() {
    let v = names(&["x", "y"]);
    let p = SubalgebraPresentation::new(
        Ambient::Polynomial { variables: v.clone() },
        Form::KPlusIdeal(vec![Monomial::one(2)]),
    )
    .unwrap();
    assert_eq!(p.describe(), "R = S");
    assert_eq!(loci(&p).u_complement, Locus::Empty);
    assert_eq!(loci(&p).w_complement, Locus::Empty);
}

#[test]
fn adjoined_ideal_gives_containment_only() {
    let v = names(&["x", "y", "z"]);
    let p = SubalgebraPresentation::new(
        Ambient::Polynomial { variables: v.clone() },
        Form::KAdjoin {
            subalgebra: vec![mono("x", &v)],
            ideal: vec![mono("y", &v)],
        },
    )
    .unwrap();
    assert_eq!(p.describe(), "R = k[x, (y)S]");
    let l = loci(&p);
    assert!(!l.exact);
    assert_eq!(l.u_complement, Locus::ZeroSet(vec![mono("y", &v)]));
    assert_eq!(dimension_equalities(&p).dim_s, 3);
}

#[test]
fn ideal_outside_s_is_rejected() {
    let v = names(&["x", "y"]);
    let s = Ambient::Toric {
        variables: v.clone(),
        generators: vec![mono("x^2", &v), mono("x*y", &v), mono("y^2", &v)],
    };
    assert!(SubalgebraPresentation::new(s.clone(), Form::KPlusIdeal(vec![mono("x", &v)])).is_err());
    assert!(SubalgebraPresentation::new(s, Form::KPlusIdeal(vec![mono("x^3*y", &v)])).is_ok());
}

#[test]
fn gluing_points() {
    let r = Rational64::from_integer;
    let p = finite_point_gluing(names(&["x"]), vec![vec![r(0)], vec![r(1)]]).unwrap();
    assert_eq!(p.describe(), "R = k + (x)(x - 1)S");
    assert_eq!(loci(&p).u_complement, Locus::Points(vec![vec![r(0)], vec![r(1)]]));
    assert_eq!(geometric_dimension(&p).unwrap(), 0);

    let p = finite_point_gluing(names(&["x"]), vec![vec![r(3)]]).unwrap();
    assert_eq!(p.describe(), "R = S");
    assert_eq!(loci(&p).u_complement, Locus::Empty);

    let p = finite_point_gluing(names(&["x", "y"]), vec![vec![r(0), r(0)], vec![r(1), r(1)]]).unwrap();
    assert_eq!(geometric_dimension(&p).unwrap(), 0);
    assert_eq!(p.describe(), "R = k + (x, y)(x - 1, y - 1)S");

    let half = Rational64::new(1, 2);
    let p = finite_point_gluing(names(&["x"]), vec![vec![half], vec![-half]]).unwrap();
    assert_eq!(p.describe(), "R = k + (x - 1/2)(x + 1/2)S");

    assert!(finite_point_gluing(names(&["x"]), vec![vec![r(1)], vec![r(1)]]).is_err());
    assert!(finite_point_gluing(names(&["x"]), vec![vec![r(1), r(2)]]).is_err());
}

#[test]
fn uniqueness_flags() {
    assert_eq!(uniqueness_flag(&Ambient::polynomial(["x"])), Uniqueness::UniqueMaximalDepiction);
    let fx = load("iii_c");
    let rings = compute_rings(&fx.q, &fx.lab, 10);
    let s = Ambient::Toric {
        variables: rings.s.variables.clone(),
        generators: rings.s.generators.clone(),
    };
    assert_eq!(uniqueness_flag(&s), Uniqueness::Unknown);
}

/// Dimension of `Z(J)` in affine `n`-space: the largest coordinate subspace
/// on which no generator is supported.
fn subspace_dimension(n: usize, j: &[Monomial]) -> usize {
    (0..1u32 << n)
        .filter(|t| j.iter().all(|m| m.support().iter().any(|&i| t & (1 << i) == 0)))
        .map(|t| t.count_ones() as usize)
        .max()
        .unwrap()
}

/// Least number of variables meeting every generator's support.
fn height(n: usize, j: &[Monomial]) -> usize {
    (0..1u32 << n)
        .filter(|c| j.iter().all(|m| m.support().iter().any(|&i| c & (1 << i) != 0)))
        .map(|c| c.count_ones() as usize)
        .min()
        .unwrap()
}

#[test]
fn polynomial_dimension_matches_subspace_oracle() {
    for n in 1..=3usize {
        let vars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut pool = Vec::new();
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    let e: Vec<u32> = [a, b, c][..n].to_vec();
                    let m = Monomial::from_exponents(e);
                    if (1..=2).contains(&m.degree()) && !pool.contains(&m) {
                        pool.push(m);
                    }
                }
            }
        }
        let mut cases = 0;
        for mask in 1u32..(1 << pool.len()).min(1 << 12) {
            if mask.count_ones() > 3 {
                continue;
            }
            let j: Vec<Monomial> = (0..pool.len()).filter(|i| mask & (1 << i) != 0).map(|i| pool[i].clone()).collect();
            let p = SubalgebraPresentation::new(
                Ambient::Polynomial { variables: vars.clone() },
                Form::KPlusIdeal(j.clone()),
            )
            .unwrap();
            let g = geometric_dimension(&p).unwrap();
            assert_eq!(g, subspace_dimension(n, &j));
            assert_eq!(g + height(n, &j), n);
            assert!(g <= dimension_equalities(&p).trdeg);
            cases += 1;
        }
        assert!(cases > 0);
    }
}

/// Faces of a monoid found by brute force: generator subsets whose span
/// is closed in the monoid and has a prime complement, tested on the
/// listed elements.
fn brute_faces(gens: &[Monomial], elements: &BTreeSet<Monomial>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << gens.len() {
        let face: Vec<Monomial> = (0..gens.len()).filter(|i| mask & (1 << i) != 0).map(|i| gens[i].clone()).collect();
        let mut memo = HashMap::new();
        let mut inside = |m: &Monomial| in_monoid(m, &face, &mut memo);
        // a generator outside the face must not lie in its span
        let closed = (0..gens.len()).all(|i| mask & (1 << i) != 0 || !inside(&gens[i]));
        let prime = closed
            && elements.iter().all(|a| {
                elements.iter().all(|b| {
                    let ab = a.mul(b);
                    !inside(&ab) || (inside(a) && inside(b))
                })
            });
        if prime {
            out.push((0..gens.len()).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

fn brute_dimension(gens: &[Monomial], elements: &BTreeSet<Monomial>, j: &[Monomial]) -> usize {
    brute_faces(gens, elements)
        .into_iter()
        .filter(|f| {
            let face: Vec<Monomial> = f.iter().map(|&i| gens[i].clone()).collect();
            let mut memo = HashMap::new();
            !j.iter().any(|m| in_monoid(m, &face, &mut memo))
        })
        .map(|f| {
            let rows: Vec<Vec<i64>> = f
                .iter()
                .map(|&i| gens[i].exponents().iter().map(|&e| e as i64).collect())
                .collect();
            lattice::rank(&rows)
        })
        .max()
        .unwrap()
}

#[test]
fn toric_dimension_matches_monoid_oracle() {
    for name in ["i_a", "ii_a", "iii_a", "iv_a", "iii_a_both_up"] {
        let fx = load(name);
        let rings = compute_rings(&fx.q, &fx.lab, 10);
        let gens = rings.s.generators.clone();
        let elements: BTreeSet<Monomial> = rings
            .s_elements
            .iter()
            .filter(|m| m.degree() <= 6)
            .cloned()
            .collect();
        let brane_core::toric::RStructure::KPlusIdeal(j) = &rings.structure else { panic!("{name}") };
        let s = Ambient::Toric {
            variables: rings.s.variables.clone(),
            generators: gens.clone(),
        };
        let p = SubalgebraPresentation::new(s, Form::KPlusIdeal(j.clone())).unwrap();
        assert_eq!(geometric_dimension(&p).unwrap(), brute_dimension(&gens, &elements, j), "{name}");
        let rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|m| m.exponents().iter().map(|&e| e as i64).collect())
            .collect();
        let mut faces: Vec<Vec<usize>> = cone_faces(&rows).into_iter().map(|f| f.into_iter().collect()).collect();
        let mut brute = brute_faces(&gens, &elements);
        faces.sort();
        brute.sort();
        assert_eq!(faces, brute, "{name}");
    }
}

#[test]
fn conifold_ring_dimensions() {
    let v = names(&["x1", "x2", "y1", "y2"]);
    let gens: Vec<Monomial> = ["x1*y1", "x2*y1", "x1*y2", "x2*y2"].iter().map(|m| mono(m, &v)).collect();
    let s = Ambient::Toric { variables: v.clone(), generators: gens.clone() };
    let p = SubalgebraPresentation::new(s, Form::KPlusIdeal(gens[..2].to_vec())).unwrap();
    assert_eq!(dimension_equalities(&p).dim_s, 3);
    assert_eq!(geometric_dimension(&p).unwrap(), 2);
    let report = geometry_report(&p).to_string();
    assert!(report.contains("W-complement: Z(x1*y1, x2*y1)"));
    assert!(report.contains("maximal-depiction: unknown"));
}

#[test]
fn report_lines() {
    let text = geometry_report(&k_plus(&["x", "y"], &["x"])).to_string();
    for line in [
        "presentation: R = k + (x)S",
        "W-complement: Z(x)",
        "U-complement: Z(x)",
        "geometric-dimension: 1 (dim_S for the given S)",
        "dim_S R = trdeg Frac R = dim S = 2",
        "depiction: S depicts R",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
}
