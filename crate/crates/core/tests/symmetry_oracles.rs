mod common;

use common::brute_symmetries;
use polygpt::dynamics::{induced_face_automorphism, is_transitive, reversible_maps, DEFAULT_SEARCH_BUDGET};
use polygpt::geometry::{face_lattice, DEFAULT_SUBSET_CAP};
use polygpt::statespace::{cross, cube, direct_sum, gbit, house, point, polygon, random_polytope, simplex};
use polygpt::{Rational, StateSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perms(space: &StateSpace) -> Vec<Vec<usize>> {
    let g = reversible_maps(space, DEFAULT_SEARCH_BUDGET).unwrap();
    g.elements().iter().map(|e| e.perm.clone()).collect()
}

#[test]
fn groups_match_unpruned_permutation_search() {
    let mut spaces = vec![
        point(),
        simplex(1),
        simplex(2),
        simplex(3),
        simplex(4),
        gbit(),
        house(),
        cross(3),
        polygon(3).unwrap(),
        polygon(6).unwrap(),
        direct_sum(&gbit(), &point()),
        direct_sum(&simplex(1), &point()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    spaces.extend((0..6).map(|_| random_polytope(&mut rng, 6, 5).unwrap()));
    for s in spaces {
        assert!(s.vertex_count() <= 6);
        assert_eq!(perms(&s), brute_symmetries(&s), "{}", s.label());
    }
}

#[test]
fn group_orders() {
    let order = |s: &StateSpace| reversible_maps(s, DEFAULT_SEARCH_BUDGET).unwrap().order();
    let factorial = |n: usize| (1..=n).product::<usize>();
    for n in 0..=4 {
        assert_eq!(order(&simplex(n)), factorial(n + 1));
    }
    assert_eq!(order(&gbit()), 8);
    assert_eq!(order(&cube(3)), 48);
    assert_eq!(order(&cross(3)), 48);
    assert_eq!(order(&house()), 2);
}

#[test]
fn every_element_is_reversible_and_the_set_is_closed() {
    for s in [gbit::<Rational>(), cube(3), house()] {
        let g = reversible_maps(&s, DEFAULT_SEARCH_BUDGET).unwrap();
        for a in g.elements() {
            assert_eq!(a.matrix.covec_mul(s.unit_effect()), s.unit_effect());
            assert!(a.matrix.mul(&a.inverse).is_identity());
            for b in g.elements() {
                let c = polygpt::SymmetryGroup::<Rational>::compose_perm(&a.perm, &b.perm);
                assert!(g.find_perm(&c).is_some());
            }
        }
    }
}

#[test]
fn transitivity() {
    let t = |s: &StateSpace| is_transitive(&reversible_maps(s, DEFAULT_SEARCH_BUDGET).unwrap());
    assert!(t(&gbit()) && t(&cube(3)) && t(&simplex(3)) && t(&direct_sum(&gbit(), &gbit())));
    assert!(!t(&house()) && !t(&direct_sum(&gbit(), &point())));
}

#[test]
fn group_elements_are_face_lattice_automorphisms() {
    for s in [cube::<Rational>(3), gbit(), cross(3)] {
        let lattice = face_lattice(s.vertices(), DEFAULT_SUBSET_CAP).unwrap();
        let g = reversible_maps(&s, DEFAULT_SEARCH_BUDGET).unwrap();
        for e in g.elements() {
            let fa = induced_face_automorphism(&s, &e.matrix, &lattice).unwrap();
            for (i, f) in lattice.faces().iter().enumerate() {
                let image = &lattice.faces()[fa.face_map[i]];
                assert_eq!(image.len(), f.len());
                assert_eq!(*image, f.permuted(&e.perm));
            }
            for a in lattice.faces() {
                for b in lattice.faces() {
                    let lhs = lattice.join(a, b).permuted(&e.perm);
                    let rhs = lattice.join(&a.permuted(&e.perm), &b.permuted(&e.perm));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
