mod common;

use cohomotopy::cohomotopy::{pi2_enumerate, pi2_fiber, sphere_maps, CohomotopyError, QKernelSearch};
use cohomotopy::model::{load_algebraic_model, model_from_simplicial};
use cohomotopy::simplicial::SimplicialComplex;
use common::*;
use num_bigint::BigInt;

#[test]
fn rp2_enumeration_covers_h2() {
    let m = model_from_simplicial(&complex("rp2.txt"), None).unwrap();
    let e = pi2_enumerate(&m, None).unwrap();
    assert_eq!(e.reports.len(), 2);
    assert!(e.reports.iter().all(|r| r.realizable));
    assert_eq!(e.total, Some(BigInt::from(2)));
}

#[test]
fn infinite_h2_needs_a_bound() {
    let m = algebraic("s2xs1.json");
    assert!(matches!(pi2_enumerate(&m, None), Err(CohomotopyError::Usage(_))));
    let e = pi2_enumerate(&m, Some(2)).unwrap();
    assert_eq!(e.reports.len(), 5);
    assert_eq!(e.total, None);
}

#[test]
fn finite_fibers_are_found_exhaustively() {
    let m = algebraic("s2xt2.json");
    let r = pi2_fiber(&m, &m.class_i64(2, Z, &[0, 2]).unwrap()).unwrap();
    assert_eq!(r.q_kernel_search, QKernelSearch::Exhaustive);
    same_group(r.fiber.as_ref().unwrap(), 0, &[4, 4, 2]).unwrap();
    same_group(&r.p_beta, 0, &[4, 4]).unwrap();
}

#[test]
fn simplicial_export_reloads_to_the_same_answers() {
    for name in ["rp2.txt", "torus.txt"] {
        let m = model_from_simplicial(&complex(name), None).unwrap();
        let reloaded = load_algebraic_model(&m.to_json().unwrap()).unwrap();
        for q in 0..=m.dimension() {
            for c in [Z, Z2] {
                assert!(m.group(q, c).unwrap().isomorphic(reloaded.group(q, c).unwrap()), "{name} H^{q}({c})");
            }
        }
        let a = pi2_enumerate(&m, Some(1)).unwrap();
        let b = pi2_enumerate(&reloaded, Some(1)).unwrap();
        for (x, y) in a.reports.iter().zip(&b.reports) {
            assert_eq!(x.realizable, y.realizable, "{name}");
            if let (Some(f), Some(g)) = (&x.fiber, &y.fiber) {
                assert!(f.isomorphic(g), "{name}: {f} vs {g}");
            }
        }
    }
}

#[test]
fn facet_text_round_trips() {
    let x = s2xs1_complex();
    let y = SimplicialComplex::parse(&x.to_facet_text()).unwrap();
    assert_eq!(x.facets(), y.facets());
    assert_eq!(x.euler_characteristic(), 0);
}

#[test]
fn sphere_maps_of_spheres() {
    let s3 = model_from_simplicial(&complex("s3.txt"), None).unwrap();
    same_group(&sphere_maps(&s3, 3).unwrap().group, 1, &[]).unwrap();
    let s2 = model_from_simplicial(&complex("s2.txt"), None).unwrap();
    assert!(sphere_maps(&s2, 3).unwrap().group.is_trivial());
}

#[test]
fn zero_beta_fiber_is_sphere_maps() {
    for (name, m) in all_models() {
        let Some(s) = sphere_maps_3(&m) else { continue };
        let zero = vec![BigInt::from(0); m.group(2, Z).unwrap().ngens()];
        let r = pi2_fiber(&m, &m.class(2, Z, &zero).unwrap()).unwrap();
        let f = r.fiber.unwrap();
        assert!(f.isomorphic(&s.group), "{name}: {f} vs {}", s.group);
    }
}
