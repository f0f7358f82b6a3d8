mod common;

use common::{brute_faces, brute_in_hull, int, Vector};
use polygpt::geometry::{face_lattice, in_hull, DEFAULT_SUBSET_CAP};
use polygpt::statespace::{cross, cube, direct_sum, gbit, house, min_tensor, point, polygon, random_polytope, simplex};
use polygpt::{Rational, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spaces() -> Vec<StateSpace> {
    let mut out = vec![
        point(),
        simplex(1),
        simplex(2),
        simplex(3),
        gbit(),
        cube(3),
        cross(3),
        house(),
        polygon(6).unwrap(),
        direct_sum(&gbit(), &point()),
        min_tensor(&simplex(1), &simplex(1)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    out.extend((0..8).map(|_| random_polytope(&mut rng, 8, 6).unwrap()));
    out
}

/// Affine combinations of vertices with small integer weights; some land
/// inside, some outside.
fn probe_points(space: &StateSpace, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vector> {
    let d = space.ambient_dim();
    let mut out = Vec::new();
    while out.len() < count {
        let w: Vec<i64> = (0..space.vertex_count()).map(|_| rng.gen_range(-1..4)).collect();
        let total: i64 = w.iter().sum();
        if total == 0 {
            continue;
        }
        let mut p = vec![int(0); d];
        for (v, &wi) in space.vertices().iter().zip(&w) {
            for (x, y) in p.iter_mut().zip(v) {
                *x += y * int(wi);
            }
        }
        out.push(p.into_iter().map(|x| x / int(total)).collect());
    }
    out
}

#[test]
fn hull_membership_agrees_with_caratheodory() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inside, mut outside) = (0, 0);
    for space in spaces() {
        let gens = space.vertices().to_vec();
        let mut points = probe_points(&space, &mut rng, 12);
        points.push(space.barycenter());
        points.extend(gens.iter().cloned());
        for p in points {
            let m = in_hull(&p, &gens).unwrap();
            assert!(m.verify(&p, &gens), "certificate for {:?} in {}", p, space.label());
            assert_eq!(m.is_member(), brute_in_hull(&p, &gens), "{:?} in {}", p, space.label());
            if m.is_member() {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    assert!(inside > 50 && outside > 50);
}

#[test]
fn off_hyperplane_points_are_separated() {
    let g = gbit::<Rational>();
    let p = vec![int(0), int(0), int(2)];
    let m = in_hull(&p, g.vertices()).unwrap();
    assert!(!m.is_member() && m.verify(&p, g.vertices()));
}

#[test]
fn face_lattices_agree_with_facet_intersections() {
    for space in spaces() {
        let lattice = face_lattice(space.vertices(), DEFAULT_SUBSET_CAP).unwrap();
        let ours: std::collections::BTreeSet<u64> = lattice.faces().iter().map(|f| f.mask()).collect();
        assert_eq!(ours, brute_faces(space.vertices()), "{}", space.label());
    }
}

#[test]
fn known_face_counts() {
    let count = |s: &StateSpace| face_lattice(s.vertices(), DEFAULT_SUBSET_CAP).unwrap().len();
    assert_eq!(count(&cube(3)), 1 + 8 + 12 + 6 + 1);
    assert_eq!(count(&gbit()), 1 + 4 + 4 + 1);
    assert_eq!(count(&simplex(3)), 16);
    assert_eq!(count(&cross(3)), 1 + 6 + 12 + 8 + 1);
}
