mod support;

use std::collections::BTreeSet;

use brane_core::rewrite::for_each_path;
use brane_core::toric::{
    central_elements, compare_s_sprime, complete_degree, compute_rings, cycle_images,
    cycle_monoid, monoid_closure, CentralVerdict, RStructure, SComparison,
};
use brane_core::{contract, Monomial, DEFAULT_BUDGET};
use support::{load, monomials, ALL, CANCELLATIVE, NONCANCELLATIVE};

fn set(ms: &[Monomial]) -> BTreeSet<Monomial> {
    ms.iter().cloned().collect()
}

fn check_example(name: &str, s: &[&str], j: &[&str]) {
    let fx = load(name);
    let rings = compute_rings(&fx.q, &fx.lab, 16);
    let vars = fx.lab.variables();
    assert_eq!(set(&rings.s.generators), monomials(s, vars), "{name} S");
    match &rings.structure {
        RStructure::KPlusIdeal(got) => assert_eq!(set(got), monomials(j, vars), "{name} J"),
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn example_i() {
    check_example("i_a", &["x^2", "y^2", "x*y", "z"], &["x^2", "y^2", "x*y"]);
}

#[test]
fn example_ii() {
    check_example(
        "ii_a",
        &["x1*y1", "x1*y2", "x2*y1", "x2*y2"],
        &["x1^2*y1*y2", "x1*x2*y1*y2", "x2^2*y1*y2"],
    );
}

#[test]
fn example_iii() {
    check_example("iii_a", &["x1*y1", "x2*y1", "x1*y2", "x2*y2"], &["x1*y1", "x2*y1"]);
}

#[test]
fn example_iv() {
    check_example(
        "iv_a",
        &["x1*y1", "x2*y2", "x1^2*y2^2", "x2^2*y1^2"],
        &["x2*y2", "x1^2*y2^2", "x2^2*y1^2"],
    );
}

#[test]
fn printed_lines_use_the_fixed_order() {
    let fx = load("iii_a");
    let rings = compute_rings(&fx.q, &fx.lab, 16);
    assert_eq!(rings.s_line(), "S = x1*y1, x2*y1, x1*y2, x2*y2");
    assert_eq!(rings.r_line(), "R = k + (x1*y1, x2*y1)S");
}

#[test]
fn vertex_monoids() {
    let fx = load("conifold");
    let m = cycle_monoid(&fx.q, &fx.lab, 0, 8);
    let vars = fx.lab.variables();
    assert_eq!(set(&m.generators), monomials(&["x1*y1", "x1*y2", "x2*y1", "x2*y2"], vars));
    let fx = load("c3");
    let m = cycle_monoid(&fx.q, &fx.lab, 0, 8);
    assert_eq!(set(&m.generators), monomials(&["x", "y", "z"], fx.lab.variables()));
}

#[test]
fn sigma_lies_in_every_vertex_monoid() {
    for name in ALL {
        let fx = load(name);
        let sigma = fx.lab.sigma(&fx.q).unwrap();
        let rings = compute_rings(&fx.q, &fx.lab, 12);
        for imgs in &rings.vertex_images {
            assert!(imgs.contains(&sigma), "{name}");
        }
        assert!(rings.r_elements.contains(&sigma));
    }
}

#[test]
fn cancellative_tilings_have_r_equal_s() {
    for name in CANCELLATIVE.iter().chain(&["conifold", "c3"]) {
        let fx = load(name);
        let rings = compute_rings(&fx.q, &fx.lab, 12);
        assert_eq!(rings.structure, RStructure::EqualToS, "{name}");
        assert!(rings.vertex_images.windows(2).all(|w| w[0] == w[1]), "{name}");
    }
}

#[test]
fn images_match_direct_enumeration() {
    for name in ALL {
        let fx = load(name);
        let len = 7;
        let d = complete_degree(&fx.q, &fx.lab, len);
        let mut direct = vec![BTreeSet::new(); fx.q.vertices().len()];
        for_each_path(&fx.q, len, |p| {
            let m = fx.lab.tau(p);
            if p.is_cycle() && m.degree() as i64 <= d {
                direct[p.tail()].insert(m);
            }
            true
        });
        for (v, want) in direct.iter().enumerate() {
            assert_eq!(&cycle_images(&fx.q, &fx.lab, v, len, d), want, "{name} vertex {v}");
        }
    }
}

#[test]
fn longer_cycles_exceed_the_complete_degree() {
    for name in ALL {
        let fx = load(name);
        let len = 5;
        let d = complete_degree(&fx.q, &fx.lab, len);
        for_each_path(&fx.q, len + 2, |p| {
            if p.len() > len {
                assert!(fx.lab.tau(p).degree() as i64 > d, "{name}");
            }
            true
        });
    }
}

#[test]
fn r_is_the_intersection_and_lies_in_s() {
    for name in ALL {
        let fx = load(name);
        let rings = compute_rings(&fx.q, &fx.lab, 12);
        let mut inter = rings.vertex_images[0].clone();
        for imgs in &rings.vertex_images {
            inter.retain(|m| imgs.contains(m));
        }
        assert_eq!(inter, rings.r_elements, "{name}");
        assert!(rings.r_elements.is_subset(&rings.s_elements), "{name}");
        let closure = monoid_closure(&set(&rings.s.generators), fx.lab.nvars(), rings.s.complete_degree);
        assert_eq!(closure, rings.s_elements, "{name}");
    }
}

#[test]
fn ideal_presentation_reconstructs_r() {
    for name in NONCANCELLATIVE {
        let fx = load(name);
        let rings = compute_rings(&fx.q, &fx.lab, 14);
        let RStructure::KPlusIdeal(j) = &rings.structure else { panic!("{name}") };
        let d = rings.s.complete_degree;
        let mut built: BTreeSet<Monomial> = BTreeSet::new();
        built.insert(Monomial::one(fx.lab.nvars()));
        for g in j {
            for s in &rings.s_elements {
                let m = g.mul(s);
                if m.degree() as i64 <= d {
                    built.insert(m);
                }
            }
        }
        assert_eq!(built, rings.r_elements, "{name}");
    }
}

#[test]
fn adequate_contractions_preserve_s() {
    for name in NONCANCELLATIVE {
        let fx = load(name);
        let cmap = contract(&fx.q, &fx.file.contracted()).unwrap();
        let target = cmap.push_labels(&fx.lab).unwrap();
        let (cmp, a, b) = compare_s_sprime(&cmap, &fx.lab, &target, 14);
        assert!(matches!(cmp, SComparison::Equal { .. }), "{name}: {cmp:?}");
        assert_eq!(set(&a.s.generators), set(&b.s.generators));
        assert_eq!(b.structure, RStructure::EqualToS, "{name}");
    }
}

#[test]
fn bad_contraction_changes_s() {
    let fx = load("iii_a_both_up");
    let cmap = contract(&fx.q, &fx.file.contracted()).unwrap();
    let target = cmap.push_labels(&fx.lab).unwrap();
    let (cmp, a, b) = compare_s_sprime(&cmap, &fx.lab, &target, 16);
    let vars = fx.lab.variables();
    assert_eq!(set(&a.s.generators), monomials(&["x", "y", "x*z", "y*z"], vars));
    assert_eq!(set(&b.s.generators), monomials(&["x", "y", "z"], vars));
    assert_eq!(
        cmp,
        SComparison::Differ {
            witness: Monomial::parse("z", vars).unwrap(),
            in_target: true
        }
    );
}

#[test]
fn identity_contraction_preserves_s() {
    let fx = load("iii_c");
    let cmap = contract(&fx.q, &[]).unwrap();
    let (cmp, _, _) = compare_s_sprime(&cmap, &fx.lab, &fx.lab, 10);
    assert!(matches!(cmp, SComparison::Equal { .. }));
}

#[test]
fn central_families() {
    let fx = load("conifold");
    let vars = fx.lab.variables().to_vec();
    let gammas: Vec<Monomial> = ["x1*y1", "x1*x2*y1*y2"]
        .iter()
        .map(|m| Monomial::parse(m, &vars).unwrap())
        .collect();
    let found = central_elements(&fx.q, &fx.sys, &fx.lab, &gammas, 8, DEFAULT_BUDGET).unwrap();
    assert!(found.iter().all(|c| c.verdict == CentralVerdict::Certified));
    assert_eq!(found[1].cycles, brane_core::rewrite::center_candidate_u(&fx.q).unwrap());

    let fx = load("iii_a");
    let rings = compute_rings(&fx.q, &fx.lab, 12);
    let RStructure::KPlusIdeal(j) = rings.structure else { panic!() };
    let found = central_elements(&fx.q, &fx.sys, &fx.lab, &j, 12, DEFAULT_BUDGET).unwrap();
    for c in &found {
        assert_eq!(c.verdict, CentralVerdict::Certified, "{}", fx.lab.format(&c.gamma));
        for cyc in &c.cycles {
            assert_eq!(fx.lab.tau(cyc), c.gamma);
        }
    }
}

#[test]
fn non_r_monomial_has_no_central_family() {
    let fx = load("iii_a");
    let m = Monomial::parse("x1*y2", fx.lab.variables()).unwrap();
    let found = central_elements(&fx.q, &fx.sys, &fx.lab, &[m], 12, DEFAULT_BUDGET).unwrap();
    assert!(matches!(found[0].verdict, CentralVerdict::Missing(_)));
}
