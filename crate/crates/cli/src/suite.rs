//! Named verification suites: every verifier operation is addressable by
//! name, plus `all-desk-scale` which composes the full battery for a given
//! node budget. Claims are independent and run through a deterministic
//! worker pool; output order never depends on the worker count.

use std::collections::BTreeSet;
use xfkit_core::error::{Error, Result};
use xfkit_core::ext::{polar_face_pieces, tjoin_flow_piece, ExtendedFormulation, PieceSelector};
use xfkit_core::graph::{EdgeSpace, EdgeSubset, SubsetKind};
use xfkit_core::num::Rat;
use xfkit_core::par::parallel_map;
use xfkit_core::poly::{radial_cone_h, tcut_dominant_h, tjoin_dominant_h, PointInP};
use xfkit_core::verify::{
    radial_cone_directions, tcut_dominant_v, tjoin_dominant_v, verify_blocker_involution,
    verify_extension_projects_to, verify_fm_equals_gm, verify_integrality,
    verify_projection_commutes, verify_q_equals_qtilde, verify_radial_cone_identity,
    verify_structure_lemma, verify_polar_face_dual_bridge, verify_union_covers, Status,
    VerificationReport,
};

pub type Claim = (String, Box<dyn Fn() -> Result<VerificationReport> + Send + Sync>);

pub const SUITE_NAMES: &[&str] = &[
    "all-desk-scale",
    "extension-projects",
    "radial-cone-identity",
    "structure-lemma",
    "blocker-involution",
    "projection-commutes",
    "fm-equals-gm",
    "q-equals-qtilde",
    "union-covers",
    "integrality",
    "polar-face-bridge",
];

fn claim(
    id: impl Into<String>,
    f: impl Fn() -> Result<VerificationReport> + Send + Sync + 'static,
) -> Claim {
    (id.into(), Box::new(f))
}

pub fn run_claims(claims: Vec<Claim>, workers: usize) -> Vec<VerificationReport> {
    parallel_map(&claims, workers, |(id, f)| match f() {
        Ok(mut report) => {
            report.claim = id.clone();
            report
        }
        Err(e) => VerificationReport {
            claim: id.clone(),
            status: Status::Skipped { reason: format!("failed to run: {e}") },
            certificates: Vec::new(),
            elapsed: std::time::Duration::ZERO,
        },
    })
}

fn parse_terminals(n: usize, t: &Option<String>) -> Result<Vec<usize>> {
    match t {
        None => Ok((1..=n).collect()),
        Some(s) if s.trim() == "all" => Ok((1..=n).collect()),
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Malformed(format!("invalid node {tok:?}")))
            })
            .collect(),
    }
}

fn parse_join(space: &EdgeSpace, s: &str) -> Result<EdgeSubset> {
    let mut edges = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let (u, v) = if let Some((a, b)) = tok.split_once('-') {
            (
                a.parse::<usize>().map_err(|_| Error::Malformed(format!("bad edge {tok:?}")))?,
                b.parse::<usize>().map_err(|_| Error::Malformed(format!("bad edge {tok:?}")))?,
            )
        } else if tok.len() == 2 && tok.chars().all(|c| c.is_ascii_digit()) {
            (tok[..1].parse().unwrap(), tok[1..].parse().unwrap())
        } else {
            return Err(Error::Malformed(format!("bad edge {tok:?}")));
        };
        edges.push(space.edge_index(u, v)?);
    }
    Ok(EdgeSubset::new(edges, SubsetKind::TJoin))
}

fn parse_u1(n: usize, u1: &Option<String>) -> Result<BTreeSet<usize>> {
    let s = u1
        .as_ref()
        .ok_or_else(|| Error::Malformed("this suite needs --u1".to_string()))?;
    parse_terminals(n, &Some(s.clone())).map(|v| v.into_iter().collect())
}

/// Claims checking a loaded artifact against a named dominant target.
pub fn artifact_claims(
    ext: ExtendedFormulation,
    target: &str,
    n: usize,
    t: &Option<String>,
) -> Result<Vec<Claim>> {
    let space = EdgeSpace::new(n, parse_terminals(n, t)?)?;
    let (target_h, target_v) = match target {
        "tjoin-dominant" => (tjoin_dominant_h(&space)?, tjoin_dominant_v(&space)?),
        "tcut-dominant" => (tcut_dominant_h(&space)?, tcut_dominant_v(&space)?),
        other => {
            return Err(Error::Malformed(format!(
                "unknown target {other:?}; use tjoin-dominant or tcut-dominant"
            )))
        }
    };
    Ok(vec![claim(format!("artifact-projects-onto-{target}"), move || {
        verify_extension_projects_to(&ext, &target_h, &target_v)
    })])
}

fn flow_pieces(space: &EdgeSpace) -> Result<Vec<ExtendedFormulation>> {
    let t: Vec<usize> = space.terminals().iter().copied().collect();
    let half = t.len() / 2;
    let mut out = Vec::new();
    fn rec(items: &[usize], start: usize, need: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if need == 0 {
            all.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, need - 1, cur, all);
            cur.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(&t, 0, half, &mut Vec::new(), &mut subsets);
    for s in subsets {
        let sel = PieceSelector::new(space, s)?;
        out.push(tjoin_flow_piece(space, &sel)?);
    }
    Ok(out)
}

pub fn build_suite(
    name: &str,
    n: usize,
    t: &Option<String>,
    u1: &Option<String>,
    join: &Option<String>,
) -> Result<Vec<Claim>> {
    let terminals = parse_terminals(n, t)?;
    let space = EdgeSpace::new(n, terminals)?;
    let mut claims: Vec<Claim> = Vec::new();
    match name {
        "extension-projects" => {
            let ext = xfkit_core::ext::tjoin_dominant_extension(&space)?;
            let th = tjoin_dominant_h(&space)?;
            let tv = tjoin_dominant_v(&space)?;
            claims.push(claim(format!("tjoin-dominant-extension-projects-n{n}"), move || {
                verify_extension_projects_to(&ext, &th, &tv)
            }));
        }
        "radial-cone-identity" => {
            let dominant = tjoin_dominant_h(&space)?;
            for j in space.enumerate_minimal_tjoins()? {
                let chi = space.characteristic_vector(&j);
                let dom = dominant.clone();
                claims.push(claim(format!("radial-cone-identity-at-{:?}", j.edges()), move || {
                    let v = PointInP::new(&dom, chi.clone())?;
                    verify_radial_cone_identity(&dom, &v)
                }));
            }
        }
        "structure-lemma" => {
            let join_v = tjoin_dominant_v(&space)?;
            for j in space.enumerate_minimal_tjoins()? {
                let chi = space.characteristic_vector(&j);
                let pv = join_v.clone();
                claims.push(claim(format!("structure-lemma-join-{:?}", j.edges()), move || {
                    verify_structure_lemma(&pv, &chi)
                }));
            }
            let cut_v = tcut_dominant_v(&space)?;
            for c in space.enumerate_tcuts()? {
                let chi = space.characteristic_vector(&c);
                let pv = cut_v.clone();
                claims.push(claim(format!("structure-lemma-cut-{:?}", c.edges()), move || {
                    verify_structure_lemma(&pv, &chi)
                }));
            }
        }
        "blocker-involution" => {
            let join_v = tjoin_dominant_v(&space)?;
            claims.push(claim("blocker-involution-join-dominant", move || {
                verify_blocker_involution(&join_v)
            }));
            let cut_v = tcut_dominant_v(&space)?;
            claims.push(claim("blocker-involution-cut-dominant", move || {
                verify_blocker_involution(&cut_v)
            }));
        }
        "projection-commutes" => {
            let dominant = tjoin_dominant_h(&space)?;
            let joins = space.enumerate_minimal_tjoins()?;
            let first = joins
                .first()
                .ok_or_else(|| Error::Domain("no joins at this instance".to_string()))?;
            let chi = space.characteristic_vector(first);
            let dom = dominant.clone();
            claims.push(claim("projection-commutes-identity", move || {
                let v = PointInP::new(&dom, chi.clone())?;
                verify_projection_commutes(
                    &dom,
                    &v,
                    &xfkit_core::ext::LinearMap::identity(dom.dim()),
                )
            }));
            let chi2 = space.characteristic_vector(first);
            let dom2 = dominant.clone();
            claims.push(claim("projection-commutes-coordinate-deletion", move || {
                let v = PointInP::new(&dom2, chi2.clone())?;
                let keep: Vec<usize> = (0..dom2.dim() - 1).collect();
                verify_projection_commutes(
                    &dom2,
                    &v,
                    &xfkit_core::ext::LinearMap::selection(&keep, dom2.dim()),
                )
            }));
        }
        "fm-equals-gm" => {
            let j = match join {
                Some(s) => parse_join(&space, s)?,
                None => {
                    let joins = space.enumerate_minimal_tjoins()?;
                    joins
                        .first()
                        .cloned()
                        .ok_or_else(|| Error::Domain("no joins at this instance".to_string()))?
                }
            };
            for &m in j.edges() {
                let sp = space.clone();
                let jj = j.clone();
                claims.push(claim(format!("fm-equals-gm-edge-{m}"), move || {
                    verify_fm_equals_gm(&sp, &jj, m)
                }));
            }
        }
        "q-equals-qtilde" => {
            let side = parse_u1(n, u1)?;
            let sp = space.clone();
            claims.push(claim(format!("q-equals-qtilde-u1-{side:?}"), move || {
                verify_q_equals_qtilde(&sp, &side)
            }));
        }
        "union-covers" => {
            let pieces = flow_pieces(&space)?;
            let sp = space.clone();
            claims.push(claim("union-covers", move || verify_union_covers(&sp, &pieces)));
        }
        "integrality" => {
            for (i, piece) in flow_pieces(&space)?.into_iter().enumerate() {
                claims.push(claim(format!("integrality-piece-{i}"), move || {
                    verify_integrality(&piece)
                }));
            }
        }
        "polar-face-bridge" => {
            let join_v = tjoin_dominant_v(&space)?;
            let join_h = tjoin_dominant_h(&space)?;
            for j in space.enumerate_minimal_tjoins()? {
                let chi = space.characteristic_vector(&j);
                let (pv, ph) = (join_v.clone(), join_h.clone());
                claims.push(claim(format!("polar-face-bridge-join-{:?}", j.edges()), move || {
                    verify_polar_face_dual_bridge(&pv, &ph, &chi)
                }));
            }
            let cut_v = tcut_dominant_v(&space)?;
            let cut_h = tcut_dominant_h(&space)?;
            for c in space.enumerate_tcuts()? {
                let chi = space.characteristic_vector(&c);
                let (pv, ph) = (cut_v.clone(), cut_h.clone());
                claims.push(claim(format!("polar-face-bridge-cut-{:?}", c.edges()), move || {
                    verify_polar_face_dual_bridge(&pv, &ph, &chi)
                }));
            }
        }
        "all-desk-scale" => {
            claims.extend(all_desk_scale(n)?);
        }
        other => {
            return Err(Error::Malformed(format!(
                "unknown suite {other:?}; available: {}",
                SUITE_NAMES.join(", ")
            )))
        }
    }
    Ok(claims)
}

/// The full battery at a node budget: K4 always; the 5-node flow instance
/// and the K6 sweeps join in as the budget allows.
fn all_desk_scale(n_budget: usize) -> Result<Vec<Claim>> {
    let mut claims: Vec<Claim> = Vec::new();

    let mut flow_instances: Vec<(usize, Vec<usize>)> =
        vec![(4, vec![1, 2, 3, 4]), (4, vec![1, 2])];
    if n_budget >= 5 {
        flow_instances.push((5, vec![1, 2, 3, 4]));
    }
    for (n, t) in flow_instances {
        let space = EdgeSpace::new(n, t.clone())?;
        let ext = xfkit_core::ext::tjoin_dominant_extension(&space)?;
        let th = tjoin_dominant_h(&space)?;
        let tv = tjoin_dominant_v(&space)?;
        claims.push(claim(format!("flow-extension-projects-n{n}-t{}", t.len()), move || {
            verify_extension_projects_to(&ext, &th, &tv)
        }));
    }

    let space4 = EdgeSpace::odd_everything(4)?;
    let dom4_h = tjoin_dominant_h(&space4)?;
    let dom4_v = tjoin_dominant_v(&space4)?;
    for j in space4.enumerate_minimal_tjoins()? {
        let chi = space4.characteristic_vector(&j);
        let ext = xfkit_core::ext::ve_radial_cone_extension(&space4, &j)?;
        let dom = dom4_h.clone();
        let dirs = radial_cone_directions(&dom4_v, &chi);
        claims.push(claim(format!("radial-cone-pipeline-{:?}", j.edges()), move || {
            let v = PointInP::new(&dom, chi.clone())?;
            let cone = radial_cone_h(&dom, &v);
            let tv = xfkit_core::poly::VPolyhedron::new(dom.dim(), vec![chi.clone()], dirs.clone())?;
            verify_extension_projects_to(&ext, &cone, &tv)
        }));
        for &m in j.edges() {
            let sp = space4.clone();
            let jj = j.clone();
            claims.push(claim(format!("fm-equals-gm-{:?}-edge-{m}", j.edges()), move || {
                verify_fm_equals_gm(&sp, &jj, m)
            }));
        }
        let pv = dom4_v.clone();
        let chi2 = space4.characteristic_vector(&j);
        claims.push(claim(format!("structure-lemma-join-{:?}", j.edges()), move || {
            verify_structure_lemma(&pv, &chi2)
        }));
        let (pv3, ph3) = (dom4_v.clone(), dom4_h.clone());
        let chi3 = space4.characteristic_vector(&j);
        claims.push(claim(format!("polar-face-bridge-join-{:?}", j.edges()), move || {
            verify_polar_face_dual_bridge(&pv3, &ph3, &chi3)
        }));
    }
    let cut4_v = tcut_dominant_v(&space4)?;
    let cut4_h = tcut_dominant_h(&space4)?;
    for c in space4.enumerate_tcuts()? {
        let chi = space4.characteristic_vector(&c);
        let pv = cut4_v.clone();
        claims.push(claim(format!("structure-lemma-cut-{:?}", c.edges()), move || {
            verify_structure_lemma(&pv, &chi)
        }));
        let (pv2, ph2) = (cut4_v.clone(), cut4_h.clone());
        let chi2 = space4.characteristic_vector(&c);
        claims.push(claim(format!("polar-face-bridge-cut-{:?}", c.edges()), move || {
            verify_polar_face_dual_bridge(&pv2, &ph2, &chi2)
        }));
    }
    for side in odd_cut_sides(&space4) {
        let sp = space4.clone();
        claims.push(claim(format!("q-equals-qtilde-n4-{side:?}"), move || {
            verify_q_equals_qtilde(&sp, &side)
        }));
    }
    {
        let jv = dom4_v.clone();
        claims.push(claim("blocker-involution-k4-join", move || verify_blocker_involution(&jv)));
        let cv = cut4_v.clone();
        claims.push(claim("blocker-involution-k4-cut", move || verify_blocker_involution(&cv)));
        let pieces = flow_pieces(&space4)?;
        let sp = space4.clone();
        claims.push(claim("union-covers-k4", move || verify_union_covers(&sp, &pieces)));
        for (i, piece) in flow_pieces(&space4)?.into_iter().enumerate().take(2) {
            claims.push(claim(format!("integrality-piece-{i}"), move || {
                verify_integrality(&piece)
            }));
        }
    }

    if n_budget >= 6 {
        let space6 = EdgeSpace::odd_everything(6)?;
        let cut6_v = tcut_dominant_v(&space6)?;
        let cut6_h = tcut_dominant_h(&space6)?;
        for c in space6.enumerate_tcuts()? {
            let chi = space6.characteristic_vector(&c);
            let pv = cut6_v.clone();
            claims.push(claim(format!("structure-lemma-k6-cut-{:?}", c.edges()), move || {
                verify_structure_lemma(&pv, &chi)
            }));
            let (pv2, ph2) = (cut6_v.clone(), cut6_h.clone());
            let chi2 = space6.characteristic_vector(&c);
            claims.push(claim(format!("polar-face-bridge-k6-cut-{:?}", c.edges()), move || {
                verify_polar_face_dual_bridge(&pv2, &ph2, &chi2)
            }));
        }
        for side in odd_cut_sides(&space6) {
            let sp = space6.clone();
            claims.push(claim(format!("q-equals-qtilde-n6-{side:?}"), move || {
                verify_q_equals_qtilde(&sp, &side)
            }));
        }
        // One sampled matching vertex for the radial-cone pipeline.
        let e12 = space6.edge_index(1, 2)?;
        let e34 = space6.edge_index(3, 4)?;
        let e56 = space6.edge_index(5, 6)?;
        let join6 = EdgeSubset::new(vec![e12, e34, e56], SubsetKind::TJoin);
        let chi6 = space6.characteristic_vector(&join6);
        let ext6 = xfkit_core::ext::ve_radial_cone_extension(&space6, &join6)?;
        let dom6_h = tjoin_dominant_h(&space6)?;
        let dom6_v = tjoin_dominant_v(&space6)?;
        claims.push(claim("radial-cone-pipeline-k6-matching", move || {
            let v = PointInP::new(&dom6_h, chi6.clone())?;
            let cone = radial_cone_h(&dom6_h, &v);
            let dirs = xfkit_core::verify::reduce_cone_generators(&radial_cone_directions(
                &dom6_v,
                &chi6,
            ))?;
            let tv = xfkit_core::poly::VPolyhedron::new(15, vec![chi6.clone()], dirs)?;
            verify_extension_projects_to(&ext6, &cone, &tv)
        }));
    }

    // The mutation battery: all three expected refutations, reported as
    // verified meta-claims when the inner check refutes with a witness.
    claims.push(claim("mutation-deleted-cut-row-refutes", || {
        let space = EdgeSpace::odd_everything(4)?;
        let ext = xfkit_core::ext::tjoin_dominant_extension(&space)?;
        let target = tjoin_dominant_h(&space)?;
        let cut_idx = target
            .ineqs()
            .iter()
            .position(|r| r.expr.entries().len() > 1)
            .expect("cut rows exist");
        let mut rows = target.ineqs().to_vec();
        rows.remove(cut_idx);
        let mutated = xfkit_core::poly::HPolyhedron::new(target.dim(), rows, vec![])?;
        let mutated_v = xfkit_core::dd::h_to_v(&mutated)?;
        let inner = verify_extension_projects_to(&ext, &mutated, &mutated_v)?;
        Ok(meta_expect_refuted("deleted-cut-row", inner))
    }));
    claims.push(claim("mutation-deleted-capacity-row-refutes", || {
        let space = EdgeSpace::odd_everything(4)?;
        let ext = xfkit_core::ext::tjoin_dominant_extension(&space)?;
        let cap_idx = ext
            .lifted()
            .ineqs()
            .iter()
            .position(|r| r.expr.entries().len() == 3)
            .expect("capacity rows have three entries");
        let mut rows = ext.lifted().ineqs().to_vec();
        rows.remove(cap_idx);
        let damaged_lift = xfkit_core::poly::HPolyhedron::new(
            ext.lifted_dim(),
            rows,
            ext.lifted().eqs().to_vec(),
        )?;
        let damaged = ExtendedFormulation::new(
            damaged_lift,
            ext.projection().clone(),
            ext.blocks().to_vec(),
        )?;
        let inner = verify_extension_projects_to(
            &damaged,
            &tjoin_dominant_h(&space)?,
            &tjoin_dominant_v(&space)?,
        )?;
        Ok(meta_expect_refuted("deleted-capacity-row", inner))
    }));
    claims.push(claim("mutation-missing-union-piece-refutes", || {
        let space = EdgeSpace::odd_everything(4)?;
        let e12 = space.edge_index(1, 2)?;
        let e34 = space.edge_index(3, 4)?;
        let matching = EdgeSubset::new(vec![e12, e34], SubsetKind::TJoin);
        let chi = space.characteristic_vector(&matching);
        let pieces = polar_face_pieces(&space, &matching)?;
        let zeroed: BTreeSet<usize> = matching.edges().iter().copied().collect();
        let cone = xfkit_core::ext::RecessionCone::axis_cone(space.num_edges(), &zeroed);
        let partial = xfkit_core::ext::balas_union(&pieces[1..], Some(&cone))?.formulation;
        let face_h = xfkit_core::poly::polar_face(&tcut_dominant_h(&space)?, &chi)?;
        let face_vertices: Vec<Vec<Rat>> = space
            .enumerate_tcuts()?
            .iter()
            .filter(|c| c.intersection_size(&matching) == 1)
            .map(|c| space.characteristic_vector(c))
            .collect();
        let face_rays: Vec<Vec<Rat>> = (0..space.num_edges())
            .filter(|e| !matching.contains(*e))
            .map(|e| {
                let mut u = vec![Rat::from_integer(0.into()); space.num_edges()];
                u[e] = Rat::from_integer(1.into());
                u
            })
            .collect();
        let face_v = xfkit_core::poly::VPolyhedron::new(space.num_edges(), face_vertices, face_rays)?;
        let inner = verify_extension_projects_to(&partial, &face_h, &face_v)?;
        Ok(meta_expect_refuted("missing-union-piece", inner))
    }));

    Ok(claims)
}

/// Wraps a mutation check: the meta-claim verifies iff the inner report is
/// refuted and carries a witness certificate.
fn meta_expect_refuted(label: &str, inner: VerificationReport) -> VerificationReport {
    use xfkit_core::verify::Certificate;
    let has_witness = inner.certificates.iter().any(|c| {
        matches!(
            c,
            Certificate::ViolatedRow { .. }
                | Certificate::ViolatedRowRay { .. }
                | Certificate::UncoveredGenerator { .. }
        )
    });
    let ok = inner.status == Status::Refuted && has_witness;
    VerificationReport {
        claim: format!("mutation-{label}"),
        status: if ok { Status::Verified } else { Status::Refuted },
        certificates: inner.certificates,
        elapsed: inner.elapsed,
    }
}

fn odd_cut_sides(space: &EdgeSpace) -> Vec<BTreeSet<usize>> {
    let n = space.n();
    let t = space.terminals();
    let rest: Vec<usize> = (2..=n).collect();
    let mut seen = BTreeSet::new();
    let mut sides = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        let mut s: BTreeSet<usize> = [1].into_iter().collect();
        for (i, &v) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.insert(v);
            }
        }
        if s.intersection(t).count() % 2 != 1 {
            continue;
        }
        let cut = space.cut_edges(&xfkit_core::graph::CutSpec::canonical(n, s.iter().copied()));
        if seen.insert(cut.edges().to_vec()) {
            sides.push(s);
        }
    }
    sides
}
