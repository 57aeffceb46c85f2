//! Randomized exactness properties: representation round-trips, LP
//! certificate soundness, and blocking involution on generated instances.
//! Everything is checked by exact arithmetic; a failing case is a real
//! counterexample, never rounding noise.

use proptest::prelude::*;
use xfkit_core::dd::{h_to_v, v_to_h};
use xfkit_core::lp::{minimize, LpOutcome};
use xfkit_core::num::{dot, rat, Rat};
use xfkit_core::poly::{HPolyhedron, Row, VPolyhedron};
use xfkit_core::verify::verify_blocker_involution;

fn ratv(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

fn small_h(dim: usize) -> impl Strategy<Value = HPolyhedron> {
    let row = proptest::collection::vec(-3i64..=3, dim + 1);
    proptest::collection::vec(row, 1..=6).prop_map(move |rows| {
        let mut ineqs: Vec<Row> = rows
            .iter()
            .map(|r| Row::from_dense(&ratv(&r[..dim]), rat(r[dim])))
            .collect();
        // Nonnegativity keeps most samples pointed and bounded below.
        for i in 0..dim {
            let mut unit = vec![0i64; dim];
            unit[i] = 1;
            ineqs.push(Row::from_dense(&ratv(&unit), rat(0)));
        }
        HPolyhedron::new(dim, ineqs, vec![]).expect("generated rows are well-formed")
    })
}

fn check_certificates(p: &HPolyhedron, obj: &[Rat], outcome: &LpOutcome) {
    match outcome {
        LpOutcome::Optimal(o) => {
            assert!(p.contains(&o.witness).is_ok(), "witness must be feasible");
            assert_eq!(dot(obj, &o.witness), o.value, "witness must achieve the value");
            // Dual feasibility and matching objective, re-derived by hand.
            let mut combo = vec![Rat::from_integer(0.into()); p.dim()];
            let mut rhs = Rat::from_integer(0.into());
            for (y, r) in o.dual.ineq.iter().zip(p.ineqs()) {
                assert!(y >= &Rat::from_integer(0.into()));
                for (t, c) in r.expr.entries() {
                    combo[*t] += y * c;
                }
                rhs += y * &r.rhs;
            }
            for (y, r) in o.dual.eq.iter().zip(p.eqs()) {
                for (t, c) in r.expr.entries() {
                    combo[*t] += y * c;
                }
                rhs += y * &r.rhs;
            }
            assert_eq!(combo, obj.to_vec(), "dual combination must reproduce the objective");
            assert_eq!(rhs, o.value, "dual objective must match the primal value");
        }
        LpOutcome::Unbounded { point, ray } => {
            assert!(p.contains(point).is_ok());
            assert!(p.recession_contains(ray));
            assert!(dot(obj, ray) < Rat::from_integer(0.into()));
        }
        LpOutcome::Infeasible { farkas } => {
            let mut combo = vec![Rat::from_integer(0.into()); p.dim()];
            let mut rhs = Rat::from_integer(0.into());
            for (y, r) in farkas.ineq.iter().zip(p.ineqs()) {
                assert!(y >= &Rat::from_integer(0.into()));
                for (t, c) in r.expr.entries() {
                    combo[*t] += y * c;
                }
                rhs += y * &r.rhs;
            }
            for (y, r) in farkas.eq.iter().zip(p.eqs()) {
                for (t, c) in r.expr.entries() {
                    combo[*t] += y * c;
                }
                rhs += y * &r.rhs;
            }
            assert!(combo.iter().all(|c| c == &Rat::from_integer(0.into())));
            assert!(rhs > Rat::from_integer(0.into()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// h_to_v then v_to_h preserves the point set: the second conversion's
    /// generator form matches the first, and each representation's rows are
    /// valid over the other as checked by exact membership of generators.
    #[test]
    fn representation_round_trip(p in small_h(3)) {
        let v = h_to_v(&p).expect("nonneg samples are pointed");
        if v.is_empty() {
            return Ok(());
        }
        let h2 = v_to_h(&v).expect("within cap");
        let v2 = h_to_v(&h2).expect("still pointed");
        prop_assert_eq!(&v, &v2);
        // Generators of the round-trip satisfy the original rows and vice
        // versa.
        for x in v2.vertices() {
            prop_assert!(p.contains(x).is_ok());
        }
        for r in v2.rays() {
            prop_assert!(p.recession_contains(r));
        }
        for x in v.vertices() {
            prop_assert!(h2.contains(x).is_ok());
        }
    }

    /// Every LP outcome carries an exact certificate that re-checks by
    /// plain arithmetic.
    #[test]
    fn lp_certificates_are_sound(p in small_h(3), obj in proptest::collection::vec(-3i64..=3, 3)) {
        let c = ratv(&obj);
        let outcome = minimize(&p, &c).expect("well-formed LP");
        check_certificates(&p, &c, &outcome);
    }

    /// Identical inputs give identical outputs.
    #[test]
    fn lp_is_deterministic(p in small_h(3), obj in proptest::collection::vec(-3i64..=3, 3)) {
        let c = ratv(&obj);
        let a = minimize(&p, &c).expect("well-formed LP");
        let b = minimize(&p, &c).expect("well-formed LP");
        match (a, b) {
            (LpOutcome::Optimal(x), LpOutcome::Optimal(y)) => {
                prop_assert_eq!(x.value, y.value);
                prop_assert_eq!(x.witness, y.witness);
                prop_assert_eq!(x.dual, y.dual);
            }
            (LpOutcome::Unbounded { point: p1, ray: r1 }, LpOutcome::Unbounded { point: p2, ray: r2 }) => {
                prop_assert_eq!(p1, p2);
                prop_assert_eq!(r1, r2);
            }
            (LpOutcome::Infeasible { farkas: f1 }, LpOutcome::Infeasible { farkas: f2 }) => {
                prop_assert_eq!(f1, f2);
            }
            _ => prop_assert!(false, "outcome kind changed between runs"),
        }
    }

    /// Blocking polyhedra generated from random nonnegative vertices
    /// satisfy the involution.
    #[test]
    fn blocker_involution_on_random_blocking_polyhedra(
        raw in proptest::collection::vec(proptest::collection::vec(1i64..=4, 2), 1..=3)
    ) {
        let vertices: Vec<Vec<Rat>> = raw.iter().map(|v| ratv(v)).collect();
        let units = vec![ratv(&[1, 0]), ratv(&[0, 1])];
        let p = VPolyhedron::new(2, vertices, units).expect("well-formed generators");
        let dominant = xfkit_core::poly::dominant(&p).expect("nonnegative generators");
        let report = verify_blocker_involution(&dominant).expect("verifier runs");
        prop_assert!(report.is_verified());
    }
}
