use super::*;
use crate::scalar::Rational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn vq(xs: &[i64]) -> Vector<Rational> {
    Vector(xs.iter().map(|&x| q(x, 1)).collect())
}

fn zero() -> Rational {
    q(0, 1)
}

/// Brute-force facets in ℝ³: every triple spanning a supporting plane.
fn brute_force_facets_3d(points: &[Vector<Rational>]) -> Vec<Halfspace<Rational>> {
    let mut out: Vec<Halfspace<Rational>> = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                let (a, b, c) = (&points[i], &points[j], &points[k]);
                let u = b.sub(a);
                let w = c.sub(a);
                let n = Vector(vec![
                    u[1].clone() * w[2].clone() - u[2].clone() * w[1].clone(),
                    u[2].clone() * w[0].clone() - u[0].clone() * w[2].clone(),
                    u[0].clone() * w[1].clone() - u[1].clone() * w[0].clone(),
                ]);
                if n.is_zero_within(&zero()) {
                    continue;
                }
                let off = n.dot(a);
                let slacks: Vec<Rational> = points.iter().map(|p| n.dot(p) - off.clone()).collect();
                let (n, off) = if slacks.iter().all(|s| *s <= zero()) {
                    (n, off)
                } else if slacks.iter().all(|s| *s >= zero()) {
                    (n.neg(), -off)
                } else {
                    continue;
                };
                let h = Halfspace {
                    normal: n.scale(&(q(1, 1) / off.clone())),
                    offset: q(1, 1),
                };
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
    }
    out
}

fn same_facets(a: &[Halfspace<Rational>], b: &[Halfspace<Rational>]) -> bool {
    a.len() == b.len() && a.iter().all(|h| b.contains(h))
}

#[test]
fn hull_of_cross_polytope() {
    let pts = vec![vq(&[1, 0]), vq(&[-1, 0]), vq(&[0, 1]), vq(&[0, -1])];
    let h = hull(&pts).unwrap();
    assert!(!h.degenerate);
    let expected: Vec<Halfspace<Rational>> = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
        .iter()
        .map(|n| Halfspace {
            normal: vq(n),
            offset: q(1, 1),
        })
        .collect();
    assert!(same_facets(&h.facets, &expected));
}

#[test]
fn hull_of_segment_is_degenerate() {
    let pts = vec![vq(&[1, 0]), vq(&[-1, 0])];
    let h = hull(&pts).unwrap();
    assert!(h.degenerate);
    assert_eq!(h.affine_dim, 1);
    assert!(h.facets.is_empty());
}

#[test]
fn hull_rejects_mixed_dimensions() {
    let pts = vec![vq(&[1, 0]), vq(&[1, 0, 0])];
    assert!(matches!(hull(&pts), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn hull_of_six_point_octahedron_matches_triple_oracle() {
    let pts: Vec<_> = [[1, 1, 1], [1, 1, -1], [1, -1, 1]]
        .iter()
        .flat_map(|p| [vq(p), vq(p).neg()])
        .collect();
    let oracle = brute_force_facets_3d(&pts);
    // frozen from the triple oracle
    let frozen: Vec<Halfspace<Rational>> = [
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
        [1, -1, -1],
        [-1, 1, 1],
    ]
    .iter()
    .map(|n| Halfspace {
        normal: vq(n),
        offset: q(1, 1),
    })
    .collect();
    assert!(same_facets(&oracle, &frozen));
    let h = hull(&pts).unwrap();
    assert_eq!(h.facets.len(), 8);
    assert!(same_facets(&h.facets, &frozen));
}

#[test]
fn vertex_enumerate_square_and_cross_polytope() {
    let square = PolytopeH::new(
        [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|n| Halfspace::new(vq(n), q(1, 1)).unwrap())
            .collect(),
    )
    .unwrap();
    let v = vertex_enumerate(&square).unwrap();
    let expected = PolytopeV::new(vec![vq(&[1, 1]), vq(&[1, -1]), vq(&[-1, 1]), vq(&[-1, -1])]).unwrap();
    assert!(v.same_vertices(&expected, &zero()));

    let mut facets = Vec::new();
    for s0 in [-1, 1] {
        for s1 in [-1, 1] {
            for s2 in [-1, 1] {
                facets.push(Halfspace::new(vq(&[s0, s1, s2]), q(1, 1)).unwrap());
            }
        }
    }
    let l1 = PolytopeH::new(facets).unwrap();
    let v = vertex_enumerate(&l1).unwrap();
    let expected: Vec<_> = (0..3).flat_map(|i| {
        let e = Vector::<Rational>::unit(3, i);
        [e.clone(), e.neg()]
    })
    .collect();
    assert!(same_point_set(v.vertices(), &expected, &zero()));
}

#[test]
fn vertex_enumerate_rejects_unbounded() {
    let half = PolytopeH::new(vec![Halfspace::new(vq(&[1, 0]), q(1, 1)).unwrap()]).unwrap();
    assert_eq!(vertex_enumerate(&half), Err(Error::Unbounded));
    let strip = PolytopeH::new(vec![
        Halfspace::new(vq(&[1, 0]), q(1, 1)).unwrap(),
        Halfspace::new(vq(&[-1, 0]), q(1, 1)).unwrap(),
        Halfspace::new(vq(&[0, 1]), q(1, 1)).unwrap(),
    ])
    .unwrap();
    assert_eq!(vertex_enumerate(&strip), Err(Error::Unbounded));
}

#[test]
fn vertex_enumerate_empty_polytope() {
    let empty = PolytopeH::new(vec![
        Halfspace::new(vq(&[1, 0]), q(-1, 1)).unwrap(),
        Halfspace::new(vq(&[-1, 0]), q(-1, 1)).unwrap(),
        Halfspace::new(vq(&[0, 1]), q(1, 1)).unwrap(),
        Halfspace::new(vq(&[0, -1]), q(1, 1)).unwrap(),
    ])
    .unwrap();
    assert!(vertex_enumerate(&empty).unwrap().is_empty());
}

#[test]
fn cut_square_by_slab() {
    let square = PolytopeV::new(vec![vq(&[1, 1]), vq(&[1, -1]), vq(&[-1, 1]), vq(&[-1, -1])]).unwrap();
    let h = Halfspace::new(vq(&[-1, 0]), q(-9, 10)).unwrap();
    let c = cut(&square, &h).unwrap();
    let expected = vec![
        Vector(vec![q(9, 10), q(1, 1)]),
        Vector(vec![q(9, 10), q(-1, 1)]),
        vq(&[1, 1]),
        vq(&[1, -1]),
    ];
    assert!(same_point_set(c.vertices(), &expected, &zero()));
}

/// Edge-intersection oracle for a 2D polygon given in cyclic order.
fn polygon_cut_oracle(cycle: &[Vector<Rational>], h: &Halfspace<Rational>) -> Vec<Vector<Rational>> {
    let mut out = Vec::new();
    for i in 0..cycle.len() {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % cycle.len()];
        let (sa, sb) = (h.slack(a), h.slack(b));
        if sa <= zero() {
            out.push(a.clone());
        }
        if (sa < zero() && sb > zero()) || (sa > zero() && sb < zero()) {
            let t = sa.clone() / (sa - sb);
            out.push(a.add(&b.sub(a).scale(&t)));
        }
    }
    out
}

#[test]
fn cut_cross_polytope_matches_edge_oracle() {
    let cycle = vec![vq(&[1, 0]), vq(&[0, 1]), vq(&[-1, 0]), vq(&[0, -1])];
    let h = Halfspace::new(vq(&[-1, 0]), q(-9, 10)).unwrap();
    let oracle = polygon_cut_oracle(&cycle, &h);
    let frozen = vec![
        Vector(vec![q(9, 10), q(1, 10)]),
        Vector(vec![q(9, 10), q(-1, 10)]),
        vq(&[1, 0]),
    ];
    assert!(same_point_set(&oracle, &frozen, &zero()));
    let p = PolytopeV::new(cycle).unwrap();
    let c = cut(&p, &h).unwrap();
    assert!(same_point_set(c.vertices(), &frozen, &zero()));
}

#[test]
fn cut_by_vacuous_constraint_and_to_empty() {
    let p = PolytopeV::new(vec![vq(&[1, 0]), vq(&[0, 1]), vq(&[-1, 0]), vq(&[0, -1])]).unwrap();
    // 0·x ≤ 1 cannot be built as a Halfspace (zero normal); use a far-away plane instead
    let far = Halfspace::new(vq(&[1, 0]), q(5, 1)).unwrap();
    assert_eq!(cut(&p, &far).unwrap(), p);
    let away = Halfspace::new(vq(&[1, 0]), q(-5, 1)).unwrap();
    assert!(cut(&p, &away).unwrap().is_empty());
}

#[test]
fn cut_of_lower_dimensional_face() {
    // a facet of the 3D cube, cut by x ≥ 1/2
    let face = PolytopeV::new(vec![vq(&[1, 1, 1]), vq(&[1, -1, 1]), vq(&[-1, 1, 1]), vq(&[-1, -1, 1])]).unwrap();
    let h = Halfspace::new(vq(&[-1, 0, 0]), q(-1, 2)).unwrap();
    let c = cut(&face, &h).unwrap();
    let expected = vec![
        vq(&[1, 1, 1]),
        vq(&[1, -1, 1]),
        Vector(vec![q(1, 2), q(1, 1), q(1, 1)]),
        Vector(vec![q(1, 2), q(-1, 1), q(1, 1)]),
    ];
    assert!(same_point_set(c.vertices(), &expected, &zero()));
}

#[test]
fn lp_max_examples() {
    let square = PolytopeV::new(vec![vq(&[1, 1]), vq(&[1, -1]), vq(&[-1, 1]), vq(&[-1, -1])]).unwrap();
    let m = lp_max(&vq(&[1, 1]), Polytope::V(&square)).unwrap();
    assert_eq!(m.value, q(2, 1));
    assert_eq!(m.argmax, vq(&[1, 1]));

    let l1 = hull(&[vq(&[1, 0]), vq(&[-1, 0]), vq(&[0, 1]), vq(&[0, -1])])
        .unwrap()
        .to_polytope()
        .unwrap();
    let m = lp_max(&vq(&[1, 0]), Polytope::H(&l1)).unwrap();
    assert_eq!(m.value, q(1, 1));
    assert_eq!(m.argmax, vq(&[1, 0]));
}

#[test]
fn extreme_subset_drops_interior_points() {
    let pts = vec![vq(&[1, 0]), vq(&[-1, 0]), vq(&[0, 0]), vq(&[0, 1]), vq(&[1, 0])];
    let e = extreme_subset(&pts);
    assert!(same_point_set(&e, &[vq(&[1, 0]), vq(&[-1, 0]), vq(&[0, 1])], &zero()));
}

#[test]
fn distance_to_hull_linf() {
    let pts = vec![vq(&[1, 0]), vq(&[-1, 0])];
    let d = distance_to_hull(&vq(&[0, 1]), &pts).unwrap();
    assert_eq!(d, q(1, 1));
    let d = distance_to_hull(&Vector(vec![q(1, 2), zero()]), &pts).unwrap();
    assert_eq!(d, zero());
}

fn small_points(dim: usize, max_pts: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, dim), dim + 1..=max_pts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_vertex_round_trip(raw in small_points(3, 9)) {
        let pts: Vec<_> = raw.iter().map(|p| vq(p)).collect();
        let h = hull(&pts).unwrap();
        prop_assume!(!h.degenerate);
        let verts = vertex_enumerate(&h.to_polytope().unwrap()).unwrap();
        let ext = extreme_subset(&pts);
        prop_assert!(same_point_set(verts.vertices(), &ext, &zero()));
        // and back again
        let h2 = hull(verts.vertices()).unwrap();
        prop_assert!(same_facets(&h.facets, &h2.facets));
    }

    #[test]
    fn lp_over_h_matches_vertex_scan(raw in small_points(3, 8), obj in prop::collection::vec(-5i64..=5, 3)) {
        let pts: Vec<_> = raw.iter().map(|p| vq(p)).collect();
        let h = hull(&pts).unwrap();
        prop_assume!(!h.degenerate);
        let c = vq(&obj);
        let scan = pts.iter().map(|p| c.dot(p)).fold(None, |m: Option<Rational>, v| match m {
            Some(m) if m >= v => Some(m),
            _ => Some(v),
        }).unwrap();
        let via_lp = lp_max_h(&c, &h.to_polytope().unwrap()).unwrap();
        prop_assert_eq!(via_lp.value.clone(), scan.clone());
        prop_assert_eq!(c.dot(&via_lp.argmax), scan.clone());
        let via_v = lp_max_v(&c, &PolytopeV::new(pts).unwrap()).unwrap();
        prop_assert_eq!(via_v.value, scan);
    }

    #[test]
    fn cut_stays_inside(raw in small_points(2, 7), n in prop::collection::vec(-3i64..=3, 2), off in -3i64..=3) {
        prop_assume!(n.iter().any(|&x| x != 0));
        let pts: Vec<_> = raw.iter().map(|p| vq(p)).collect();
        let p = PolytopeV::new(pts.clone()).unwrap();
        let h = Halfspace::new(vq(&n), q(off, 1)).unwrap();
        let c = cut(&p, &h).unwrap();
        for v in c.vertices() {
            prop_assert!(h.contains(v, &zero()));
            prop_assert!(in_convex_hull(v, &pts));
            let on_boundary = h.slack(v) == zero();
            prop_assert!(on_boundary || pts.contains(v));
        }
    }

    #[test]
    fn float_hull_round_trip(raw in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 5..12)) {
        let pts: Vec<Vector<f64>> = raw.into_iter().map(Vector).collect();
        let h = hull(&pts).unwrap();
        prop_assume!(!h.degenerate);
        let verts = vertex_enumerate(&h.to_polytope().unwrap()).unwrap();
        for v in verts.vertices() {
            prop_assert!(pts.iter().any(|p| p.approx_eq(v, &1e-7)));
        }
        for p in &pts {
            prop_assert!(h.facets.iter().all(|f| f.contains(p, &1e-9)));
        }
    }
}
