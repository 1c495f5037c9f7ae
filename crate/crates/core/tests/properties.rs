mod support;

use support::{load, run_properties, ALL};

#[test]
fn path_and_ring_properties_hold_on_every_tiling() {
    for name in ALL {
        run_properties(&load(name), 1000, 12).unwrap();
    }
}

#[test]
fn monotonicity_catches_a_shrinking_ring() {
    let fx = load("conifold");
    let mut rings = support::rings_by_bound(&fx, 6);
    rings[6].s_elements.clear();
    assert!(support::check_monotone(&rings, 4, 6).is_err());
}
