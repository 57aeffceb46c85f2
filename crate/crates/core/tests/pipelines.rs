//! Cross-checks tying the combinatorial enumerations, the conversions, and
//! the extension pipelines together on the K4/K6 bench instances.

use xfkit_core::dd::{h_to_v, v_to_h};
use xfkit_core::ext::{
    martin_dual_extension, tcut_dominant_extension, tjoin_dominant_extension, tjoin_flow_piece,
    trivial_extension, ve_radial_cone_extension, PieceSelector,
};
use xfkit_core::graph::{CutSpec, EdgeSpace, EdgeSubset, SubsetKind};
use xfkit_core::num::{rat, Rat};
use xfkit_core::poly::{
    blocker, polar_face, radial_cone_h, tcut_dominant_h, tjoin_dominant_h, PointInP, VPolyhedron,
};
use xfkit_core::verify::{
    tcut_dominant_v, tjoin_dominant_v, verify_extension_projects_to, verify_integrality,
    verify_radial_cone_identity, verify_union_covers,
};

fn chi_of(space: &EdgeSpace, pairs: &[(usize, usize)]) -> Vec<Rat> {
    let subset = EdgeSubset::new(
        pairs.iter().map(|&(u, v)| space.edge_index(u, v).unwrap()).collect(),
        SubsetKind::Generic,
    );
    space.characteristic_vector(&subset)
}

#[test]
fn join_dominant_vertex_enumeration_matches_the_combinatorics() {
    // K4: 7 vertices (3 matchings, 4 stars), 6 unit rays.
    let space = EdgeSpace::odd_everything(4).unwrap();
    let h = tjoin_dominant_h(&space).unwrap();
    assert_eq!(h.ineqs().len(), 10);
    let v = h_to_v(&h).unwrap();
    assert_eq!(v.vertices().len(), 7);
    assert_eq!(v.rays().len(), 6);
    assert_eq!(&tjoin_dominant_v(&space).unwrap(), &v);

    // K6: 171 minimal joins, 15 unit rays; 16 odd-cut rows.
    let space6 = EdgeSpace::odd_everything(6).unwrap();
    let h6 = tjoin_dominant_h(&space6).unwrap();
    assert_eq!(h6.ineqs().len(), 15 + 16);
    let v6 = h_to_v(&h6).unwrap();
    assert_eq!(v6.vertices().len(), 171);
    assert_eq!(v6.rays().len(), 15);
}

#[test]
fn matching_polytope_survives_the_representation_round_trip() {
    // The 3 perfect matchings of K4, converted to rows and back.
    let space = EdgeSpace::odd_everything(4).unwrap();
    let matchings: Vec<Vec<Rat>> = space
        .enumerate_perfect_matchings()
        .unwrap()
        .iter()
        .map(|m| space.characteristic_vector(m))
        .collect();
    let v = VPolyhedron::new(6, matchings.clone(), vec![]).unwrap();
    let h = v_to_h(&v).unwrap();
    let back = h_to_v(&h).unwrap();
    assert_eq!(back.vertices().len(), 3);
    for m in &matchings {
        assert!(back.vertices().contains(m));
    }
    assert!(back.rays().is_empty());
}

#[test]
fn dominant_of_all_joins_prunes_to_the_minimal_ones() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let all_joins = space.enumerate_tjoins().unwrap();
    assert!(all_joins.len() > 7, "non-minimal joins exist");
    let vertices: Vec<Vec<Rat>> =
        all_joins.iter().map(|j| space.characteristic_vector(j)).collect();
    let raw = VPolyhedron::new(6, vertices, vec![]).unwrap();
    let dom = xfkit_core::poly::dominant(&raw).unwrap();
    assert_eq!(&dom, &tjoin_dominant_v(&space).unwrap());
}

#[test]
fn blocker_of_join_dominant_enumerates_the_odd_cuts() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let b = blocker(&tjoin_dominant_v(&space).unwrap()).unwrap();
    let b_v = h_to_v(&b).unwrap();
    let cuts: Vec<Vec<Rat>> = space
        .enumerate_tcuts()
        .unwrap()
        .iter()
        .map(|c| space.characteristic_vector(c))
        .collect();
    assert_eq!(b_v.vertices().len(), 4);
    for c in &cuts {
        assert!(b_v.vertices().contains(c));
    }
    assert_eq!(b_v.rays().len(), 6);
}

#[test]
fn polar_faces_pick_out_the_expected_vertices() {
    let space = EdgeSpace::odd_everything(4).unwrap();

    // Face of the odd-cut dominant at a perfect matching: all 4 single-node
    // cuts (each meets the matching exactly once).
    let cut_h = tcut_dominant_h(&space).unwrap();
    let chi_m = chi_of(&space, &[(1, 2), (3, 4)]);
    let face = polar_face(&cut_h, &chi_m).unwrap();
    let face_v = h_to_v(&face).unwrap();
    assert_eq!(face_v.vertices().len(), 4);

    // Face of the join dominant at the cut delta({1}): exactly the joins
    // meeting that cut once.
    let join_h = tjoin_dominant_h(&space).unwrap();
    let delta1 = space.cut_edges(&CutSpec::canonical(4, [1]));
    let chi_c = space.characteristic_vector(&delta1);
    let face2 = polar_face(&join_h, &chi_c).unwrap();
    let face2_v = h_to_v(&face2).unwrap();
    let expected: Vec<Vec<Rat>> = space
        .enumerate_minimal_tjoins()
        .unwrap()
        .iter()
        .filter(|j| j.intersection_size(&delta1) == 1)
        .map(|j| space.characteristic_vector(j))
        .collect();
    assert_eq!(face2_v.vertices().len(), expected.len());
    for x in &expected {
        assert!(face2_v.vertices().contains(x));
    }

    // A point outside the blocking polyhedron is rejected.
    assert!(polar_face(&cut_h, &vec![rat(0); 6]).is_err());

    // 2D pair: the polar face at (1, 0) is the blocker cut by y1 = 1.
    let pair = VPolyhedron::new(
        2,
        vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]],
        vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]],
    )
    .unwrap();
    let b2 = blocker(&pair).unwrap();
    let f2 = polar_face(&b2, &[rat(1), rat(0)]).unwrap();
    assert_eq!(f2.eqs().len(), 1);
    assert_eq!(f2.ineqs().len(), b2.ineqs().len());
}

#[test]
fn dual_extension_of_the_odd_cut_dominant_is_the_join_dominant() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    // The generator-derived inequality description of the odd-cut dominant.
    let cut_v = tcut_dominant_v(&space).unwrap();
    let cut_h_from_v = v_to_h(&cut_v).unwrap();
    let ext = martin_dual_extension(&trivial_extension(&cut_h_from_v), &rat(1)).unwrap();
    let report = verify_extension_projects_to(
        &ext,
        &tjoin_dominant_h(&space).unwrap(),
        &tjoin_dominant_v(&space).unwrap(),
    )
    .unwrap();
    assert!(report.is_verified());
}

#[test]
fn cut_dominant_extension_projects_onto_the_cut_dominant() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let ext = tcut_dominant_extension(&space).unwrap();
    let report = verify_extension_projects_to(
        &ext,
        &tcut_dominant_h(&space).unwrap(),
        &tcut_dominant_v(&space).unwrap(),
    )
    .unwrap();
    assert!(report.is_verified());
    // Its projection has the 4 odd cuts as vertices and the 6 unit rays.
    assert_eq!(tcut_dominant_v(&space).unwrap().vertices().len(), 4);
}

#[test]
fn radial_cone_identity_at_every_k4_vertex() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let dom = tjoin_dominant_h(&space).unwrap();
    for j in space.enumerate_minimal_tjoins().unwrap() {
        let chi = space.characteristic_vector(&j);
        let v = PointInP::new(&dom, chi).unwrap();
        assert!(verify_radial_cone_identity(&dom, &v).unwrap().is_verified());
    }
}

#[test]
fn active_rows_at_a_matching_vertex() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let dom = tjoin_dominant_h(&space).unwrap();
    let chi = chi_of(&space, &[(1, 2), (3, 4)]);
    let v = PointInP::new(&dom, chi).unwrap();
    let cone = radial_cone_h(&dom, &v);
    // All 4 odd-cut rows are tight, plus nonnegativity for the 4 edges off
    // the matching.
    assert_eq!(cone.ineqs().len(), 8);
    let cut_rows = cone.ineqs().iter().filter(|r| r.expr.entries().len() == 3).count();
    assert_eq!(cut_rows, 4);
}

#[test]
fn every_flow_piece_is_integral_and_the_union_covers() {
    let space = EdgeSpace::odd_everything(4).unwrap();
    let t: Vec<usize> = (1..=4).collect();
    let mut pieces = Vec::new();
    for a in 0..4 {
        for b in (a + 1)..4 {
            let sel = PieceSelector::new(&space, [t[a], t[b]]).unwrap();
            pieces.push(tjoin_flow_piece(&space, &sel).unwrap());
        }
    }
    assert_eq!(pieces.len(), 6);
    for piece in &pieces {
        assert!(verify_integrality(piece).unwrap().is_verified());
    }
    let report = verify_union_covers(&space, &pieces).unwrap();
    assert!(report.is_verified());
}

#[test]
fn union_covers_the_five_paths_with_two_pieces() {
    let space = EdgeSpace::new(4, [1, 2]).unwrap();
    let pieces: Vec<_> = [[1usize], [2usize]]
        .iter()
        .map(|s| {
            let sel = PieceSelector::new(&space, s.iter().copied()).unwrap();
            tjoin_flow_piece(&space, &sel).unwrap()
        })
        .collect();
    assert_eq!(space.enumerate_minimal_tjoins().unwrap().len(), 5);
    assert!(verify_union_covers(&space, &pieces).unwrap().is_verified());
}

#[test]
fn k6_pipeline_size_arithmetic() {
    let space = EdgeSpace::odd_everything(6).unwrap();
    assert_eq!(space.terminals().len(), 6);
    // C(6, 3) = 20 pieces, fewer than 2^6.
    let ext = tjoin_dominant_extension(&space).unwrap();
    assert_eq!(ext.size(), 20 * (3 * 15 + 1));
    assert!(20 < 1 << 6);

    // The radial-cone pipeline at a matching J: per edge the 2-terminal
    // pipeline costs 7|E| + 3 rows, the union adds one multiplier each,
    // the final dual step adds one.
    let join = EdgeSubset::new(
        vec![
            space.edge_index(1, 2).unwrap(),
            space.edge_index(3, 4).unwrap(),
            space.edge_index(5, 6).unwrap(),
        ],
        SubsetKind::TJoin,
    );
    let cone_ext = ve_radial_cone_extension(&space, &join).unwrap();
    let ne = space.num_edges();
    let j = join.len();
    assert_eq!(cone_ext.size(), j * (7 * ne + 4) + 1);
    // Desk-scale sanity bound with the toolkit's own constant: the count
    // stays under 4 |J| n^2.
    assert!(cone_ext.size() <= 4 * j * 6 * 6);
}
