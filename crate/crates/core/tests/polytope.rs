use ncgraph_core::inequality::{evaluate_assignment, kcbs, nchv_max, twin, Assignment, Inequality};
use ncgraph_core::polytope::{
    affine_dimension, apply_functional, coordinate_indices, deterministic_behavior, facet_check,
    facet_check_in, linear_functional, polytope_dimension_in, project, vertices, CoordinateSpace,
    Verdict,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Computed baselines. In the full pattern space: coordinates minus one
// normalization per context minus one marginal-consistency equation per test
// shared by two contexts. In the event space the polytope is full-dimensional.
const KCBS_DIM: usize = 9;
const TWIN_DIM: usize = 20;
const KCBS_FULL_DIM: usize = 10;
const TWIN_FULL_DIM: usize = 65;
const TWIN_FULL_FACE_DIM: usize = 44;

#[test]
fn kcbs_is_a_facet() {
    let c = facet_check(&kcbs()).unwrap();
    assert_eq!(c.coordinates, 10);
    assert_eq!(c.polytope_dim, KCBS_DIM);
    assert_eq!(c.face_dim, KCBS_DIM - 1);
    assert_eq!(c.saturating, 10);
    assert_eq!(c.verdict, Verdict::Facet);
}

#[test]
fn twin_is_a_facet() {
    let c = facet_check(&twin()).unwrap();
    assert_eq!(c.coordinates, 20);
    assert_eq!(c.polytope_dim, TWIN_DIM);
    assert_eq!(c.face_dim, TWIN_DIM - 1);
    assert_eq!(c.saturating, 50);
    assert_eq!(c.verdict, Verdict::Facet);
}

#[test]
fn full_pattern_space() {
    let k = facet_check_in(&kcbs(), CoordinateSpace::Full).unwrap();
    assert_eq!((k.coordinates, k.vertices), (20, 32));
    assert_eq!(
        (k.polytope_dim, k.face_dim),
        (KCBS_FULL_DIM, KCBS_FULL_DIM - 1)
    );
    assert_eq!(k.verdict, Verdict::Facet);

    let t = facet_check_in(&twin(), CoordinateSpace::Full).unwrap();
    assert_eq!((t.coordinates, t.vertices), (80, 1024));
    assert_eq!(
        (t.polytope_dim, t.face_dim),
        (TWIN_FULL_DIM, TWIN_FULL_FACE_DIM)
    );
    assert_eq!(t.verdict, Verdict::NonFacet);
}

fn check_functional(ineq: &Inequality) {
    let f = linear_functional(ineq);
    let n = ineq.n_tests();
    let mut best = None;
    for bits in 0..1u64 << n {
        let a = Assignment::new(n, bits).unwrap();
        let b = deterministic_behavior(ineq, &a).unwrap();
        let via_f = apply_functional(&f, &b).unwrap();
        assert_eq!(
            via_f,
            evaluate_assignment(ineq, &a).unwrap(),
            "assignment {a}"
        );
        if best.as_ref().is_none_or(|m| via_f > *m) {
            best = Some(via_f);
        }
    }
    assert_eq!(best.unwrap(), nchv_max(ineq).unwrap().0);
}

#[test]
fn functional_matches_assignment_values() {
    check_functional(&kcbs());
    check_functional(&twin());
}

#[test]
fn dimension_ignores_vertex_order() {
    for ineq in [kcbs(), twin()] {
        for space in [CoordinateSpace::Events, CoordinateSpace::Full] {
            let idx = coordinate_indices(&ineq, space);
            let mut verts: Vec<_> = vertices(&ineq)
                .unwrap()
                .iter()
                .map(|(_, b)| project(b, &idx))
                .collect();
            let base = polytope_dimension_in(&ineq, space).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..3 {
                verts.shuffle(&mut rng);
                assert_eq!(affine_dimension(&verts) as usize, base);
            }
        }
    }
}

#[test]
fn valid_bounds_give_proper_faces() {
    for ineq in [kcbs(), twin()] {
        for space in [CoordinateSpace::Events, CoordinateSpace::Full] {
            let c = facet_check_in(&ineq, space).unwrap();
            assert!(c.face_dim < c.polytope_dim);
        }
    }
}
