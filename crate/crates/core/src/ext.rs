//! Extended formulations and the constructions that produce them: identity
//! lifts, radial-cone lifts, face restrictions, linear images, disjunctive
//! (Balas) unions, dual (Martin) extensions, bidirected-flow T-join pieces,
//! and the composed pipelines for T-join/T-cut dominants and their radial
//! cones.
//!
//! The size of a formulation is the number of inequality rows of its lifted
//! system; equalities are free. Each builder's size arithmetic is exact:
//! the radial-cone lift and the dual extension add one row, a union of
//! pieces costs the sum of piece sizes plus one multiplier bound per piece,
//! and a flow piece costs `3 |E_n|`.

use crate::error::{Error, Result};
use crate::graph::{EdgeSpace, EdgeSubset};
use crate::lp::{feasible_point, ineq_row_valid, PresolvedLp};
use crate::num::Rat;
use crate::poly::{HPolyhedron, LinExpr, Row};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A labelled contiguous group of lifted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBlock {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

/// A rational linear map `R^in_dim -> R^out_dim`, one expression per output
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    in_dim: usize,
    rows: Vec<LinExpr>,
}

impl LinearMap {
    pub fn new(in_dim: usize, rows: Vec<LinExpr>) -> Result<Self> {
        for r in &rows {
            if let Some(m) = r.max_coord() {
                if m >= in_dim {
                    return Err(Error::DimensionMismatch(format!(
                        "map row touches coordinate {m}, domain dimension is {in_dim}"
                    )));
                }
            }
        }
        Ok(LinearMap { in_dim, rows })
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap { in_dim: dim, rows: (0..dim).map(LinExpr::unit).collect() }
    }

    /// Coordinate selection: output `s` is input coordinate `coords[s]`.
    pub fn selection(coords: &[usize], in_dim: usize) -> Self {
        LinearMap { in_dim, rows: coords.iter().map(|&c| LinExpr::unit(c)).collect() }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[LinExpr] {
        &self.rows
    }

    pub fn apply(&self, point: &[Rat]) -> Vec<Rat> {
        self.rows.iter().map(|r| r.eval(point)).collect()
    }

    /// `outer . self`: first this map, then `outer`.
    pub fn then(&self, outer: &LinearMap) -> Result<LinearMap> {
        if outer.in_dim != self.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "composition mismatch: outer domain {} vs inner codomain {}",
                outer.in_dim,
                self.out_dim()
            )));
        }
        let rows = outer
            .rows
            .iter()
            .map(|orow| {
                let mut acc = LinExpr::default();
                for (t, c) in orow.entries() {
                    acc = acc.axpy(c, &self.rows[*t]);
                }
                acc
            })
            .collect();
        LinearMap::new(self.in_dim, rows)
    }

    /// Pulls a row over the codomain back through the map.
    pub fn pull_back(&self, row: &Row) -> Row {
        let mut acc = LinExpr::default();
        for (t, c) in row.expr.entries() {
            acc = acc.axpy(c, &self.rows[*t]);
        }
        Row::new(acc, row.rhs.clone())
    }

    /// Extends the domain by `extra` trailing coordinates the map ignores.
    fn widened(&self, extra: usize) -> LinearMap {
        LinearMap { in_dim: self.in_dim + extra, rows: self.rows.clone() }
    }
}

/// A lifted H-polyhedron together with the projection onto the target space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedFormulation {
    lifted: HPolyhedron,
    projection: LinearMap,
    blocks: Vec<VarBlock>,
}

impl ExtendedFormulation {
    pub fn new(lifted: HPolyhedron, projection: LinearMap, blocks: Vec<VarBlock>) -> Result<Self> {
        if projection.in_dim() != lifted.dim() {
            return Err(Error::DimensionMismatch(format!(
                "projection domain {} does not match lifted dimension {}",
                projection.in_dim(),
                lifted.dim()
            )));
        }
        Ok(ExtendedFormulation { lifted, projection, blocks })
    }

    pub fn lifted(&self) -> &HPolyhedron {
        &self.lifted
    }

    pub fn projection(&self) -> &LinearMap {
        &self.projection
    }

    pub fn blocks(&self) -> &[VarBlock] {
        &self.blocks
    }

    pub fn target_dim(&self) -> usize {
        self.projection.out_dim()
    }

    pub fn lifted_dim(&self) -> usize {
        self.lifted.dim()
    }

    /// Number of inequality rows of the lifted system.
    pub fn size(&self) -> usize {
        self.lifted.ineqs().len()
    }

    /// Rows fixing `projection(w) = target`, for appending to LP solves.
    pub fn projection_rows(&self, target: &[Rat]) -> Result<Vec<Row>> {
        if target.len() != self.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "target point has dimension {}, projection produces {}",
                target.len(),
                self.target_dim()
            )));
        }
        Ok(self
            .projection
            .rows()
            .iter()
            .zip(target.iter())
            .map(|(expr, t)| Row::new(expr.clone(), t.clone()))
            .collect())
    }

    /// A lifted point mapping to `target`, if one exists.
    pub fn preimage(&self, target: &[Rat]) -> Result<Option<Vec<Rat>>> {
        let rows = self.projection_rows(target)?;
        let pre = PresolvedLp::new(&self.lifted);
        let zero = vec![Rat::zero(); self.lifted.dim()];
        Ok(match pre.solve_with_appended_eqs(&rows, crate::lp::Sense::Minimize, &zero)? {
            crate::lp::LpOutcome::Optimal(o) => Some(o.witness),
            crate::lp::LpOutcome::Unbounded { point, .. } => Some(point),
            crate::lp::LpOutcome::Infeasible { .. } => None,
        })
    }

    /// A lifted recession direction mapping to `dir`, if one exists.
    pub fn recession_preimage(&self, dir: &[Rat]) -> Result<Option<Vec<Rat>>> {
        let rows = self.projection_rows(dir)?;
        let homog = self.lifted.homogenized();
        let pre = PresolvedLp::new(&homog);
        let zero = vec![Rat::zero(); homog.dim()];
        Ok(match pre.solve_with_appended_eqs(&rows, crate::lp::Sense::Minimize, &zero)? {
            crate::lp::LpOutcome::Optimal(o) => Some(o.witness),
            crate::lp::LpOutcome::Unbounded { point, .. } => Some(point),
            crate::lp::LpOutcome::Infeasible { .. } => None,
        })
    }
}

/// Identity lift: the polyhedron is its own extension.
pub fn trivial_extension(p: &HPolyhedron) -> ExtendedFormulation {
    let d = p.dim();
    ExtendedFormulation {
        lifted: p.clone(),
        projection: LinearMap::identity(d),
        blocks: vec![VarBlock { label: "x".to_string(), start: 0, len: d }],
    }
}

/// Radial-cone lift at `v`: translate the lifted system to a preimage of
/// `v`, homogenize against a new variable `mu >= 0`. Adds exactly one
/// inequality row; the projection becomes the radial cone of the target
/// at `v`.
pub fn radial_cone_extension(ext: &ExtendedFormulation, v: &[Rat]) -> Result<ExtendedFormulation> {
    let Some(w_v) = ext.preimage(v)? else {
        return Err(Error::Membership {
            row_index: 0,
            description: "point has no lifted preimage, so it is not in the projection".to_string(),
        });
    };
    let ldim = ext.lifted_dim();
    let mu = ldim;
    let translate = |r: &Row| {
        let at_wv = r.expr.eval(&w_v);
        // a.w - (rhs - a.w_v) mu >= a.w_v
        let gap = &r.rhs - &at_wv;
        let expr = r.expr.axpy(&-gap, &LinExpr::unit(mu));
        Row::new(expr, at_wv)
    };
    let mut ineqs: Vec<Row> = ext.lifted.ineqs().iter().map(translate).collect();
    ineqs.push(Row::new(LinExpr::unit(mu), Rat::zero()));
    let eqs: Vec<Row> = ext.lifted.eqs().iter().map(translate).collect();
    let lifted = HPolyhedron::new(ldim + 1, ineqs, eqs)?;
    let mut blocks = ext.blocks.clone();
    blocks.push(VarBlock { label: "mu".to_string(), start: mu, len: 1 });
    ExtendedFormulation::new(lifted, ext.projection.widened(1), blocks)
}

/// Restricts to the face induced by a valid inequality: the row is pulled
/// back through the projection and appended as an equality. Size unchanged.
pub fn face_extension(ext: &ExtendedFormulation, valid_row: &Row) -> Result<ExtendedFormulation> {
    if let Some(m) = valid_row.expr.max_coord() {
        if m >= ext.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "row touches coordinate {m}, target dimension is {}",
                ext.target_dim()
            )));
        }
    }
    let pulled = ext.projection.pull_back(valid_row);
    let pre = PresolvedLp::new(&ext.lifted);
    if !ineq_row_valid(&pre, &pulled)?.is_valid() {
        return Err(Error::Domain(format!(
            "row {} is not valid over the projection; it does not induce a face",
            valid_row.describe(ext.target_dim())
        )));
    }
    let lifted = ext.lifted.with_extra_rows(Vec::new(), vec![pulled])?;
    ExtendedFormulation::new(lifted, ext.projection.clone(), ext.blocks.clone())
}

/// Applies a further linear map to the target space. Size unchanged.
pub fn map_extension(ext: &ExtendedFormulation, map: &LinearMap) -> Result<ExtendedFormulation> {
    let projection = ext.projection.then(map)?;
    ExtendedFormulation::new(ext.lifted.clone(), projection, ext.blocks.clone())
}

/// A finitely generated cone given both ways: generators and a homogeneous
/// H-description. Used to certify that Balas pieces share a recession cone.
#[derive(Debug, Clone)]
pub struct RecessionCone {
    pub generators: Vec<Vec<Rat>>,
    pub rows: HPolyhedron,
}

impl RecessionCone {
    /// The nonnegative orthant of `R^dim`.
    pub fn orthant(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| {
                let mut e = vec![Rat::zero(); dim];
                e[i] = Rat::one();
                e
            })
            .collect();
        RecessionCone { generators, rows: HPolyhedron::nonneg_orthant(dim) }
    }

    /// `cone{ e_f : f not in zeroed }` inside `R^dim`.
    pub fn axis_cone(dim: usize, zeroed: &BTreeSet<usize>) -> Self {
        let generators = (0..dim)
            .filter(|i| !zeroed.contains(i))
            .map(|i| {
                let mut e = vec![Rat::zero(); dim];
                e[i] = Rat::one();
                e
            })
            .collect();
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for i in 0..dim {
            if zeroed.contains(&i) {
                eqs.push(Row::new(LinExpr::unit(i), Rat::zero()));
            } else {
                ineqs.push(Row::new(LinExpr::unit(i), Rat::zero()));
            }
        }
        RecessionCone {
            generators,
            rows: HPolyhedron::new(dim, ineqs, eqs).expect("axis cone rows are well-formed"),
        }
    }
}

/// Whether a Balas union certifiably equals the convex hull of its pieces,
/// or only its closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullStatus {
    /// All pieces share the supplied recession cone; the projection equals
    /// `conv(P_1 u ... u P_k)` exactly.
    Exact,
    /// Closure semantics only; equality with the convex hull not certified.
    ClosureOnly { reason: String },
}

#[derive(Debug, Clone)]
pub struct BalasUnion {
    pub formulation: ExtendedFormulation,
    pub hull: HullStatus,
}

/// Disjunctive union: the projection is the closed convex hull of the
/// nonempty pieces. Size is `sum_i (size_i + 1)`.
///
/// When `common_recession` is supplied, the builder certifies by LP that
/// every piece's projected recession cone is pinched between the supplied
/// generators and rows; on success the hull is exact, otherwise closure
/// semantics are reported.
pub fn balas_union(
    pieces: &[ExtendedFormulation],
    common_recession: Option<&RecessionCone>,
) -> Result<BalasUnion> {
    if pieces.is_empty() {
        return Err(Error::Domain("union of zero pieces".to_string()));
    }
    let d = pieces[0].target_dim();
    for (i, p) in pieces.iter().enumerate() {
        if p.target_dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "piece {i} projects to dimension {}, expected {d}",
                p.target_dim()
            )));
        }
        if feasible_point(p.lifted())?.is_none() {
            return Err(Error::Domain(format!(
                "piece {i} is empty; the disjunctive construction requires nonempty pieces"
            )));
        }
    }

    let k = pieces.len();
    let mut offsets = Vec::with_capacity(k);
    let mut cursor = d;
    for p in pieces {
        offsets.push(cursor);
        cursor += p.lifted_dim();
    }
    let lambda0 = cursor;
    let total = cursor + k;

    let mut ineqs: Vec<Row> = Vec::new();
    let mut eqs: Vec<Row> = Vec::new();
    let mut blocks = vec![VarBlock { label: "x".to_string(), start: 0, len: d }];

    for (i, p) in pieces.iter().enumerate() {
        let off = offsets[i];
        let li = lambda0 + i;
        for r in p.lifted().ineqs() {
            // a.w_i - rhs*lambda_i >= 0
            let expr = r.expr.shifted(off).axpy(&-r.rhs.clone(), &LinExpr::unit(li));
            ineqs.push(Row::new(expr, Rat::zero()));
        }
        for r in p.lifted().eqs() {
            let expr = r.expr.shifted(off).axpy(&-r.rhs.clone(), &LinExpr::unit(li));
            eqs.push(Row::new(expr, Rat::zero()));
        }
        for b in p.blocks() {
            blocks.push(VarBlock {
                label: format!("p{i}.{}", b.label),
                start: off + b.start,
                len: b.len,
            });
        }
    }
    for i in 0..k {
        ineqs.push(Row::new(LinExpr::unit(lambda0 + i), Rat::zero()));
    }
    blocks.push(VarBlock { label: "lambda".to_string(), start: lambda0, len: k });

    // x = sum_i pi_i(w_i)
    for t in 0..d {
        let mut expr = LinExpr::unit(t);
        for (i, p) in pieces.iter().enumerate() {
            expr = expr.axpy(&-Rat::one(), &p.projection().rows()[t].shifted(offsets[i]));
        }
        eqs.push(Row::new(expr, Rat::zero()));
    }
    // sum_i lambda_i = 1
    let lambda_sum = LinExpr::new((0..k).map(|i| (lambda0 + i, Rat::one())).collect());
    eqs.push(Row::new(lambda_sum, Rat::one()));

    let lifted = HPolyhedron::new(total, ineqs, eqs)?;
    let formulation = ExtendedFormulation::new(
        lifted,
        LinearMap::selection(&(0..d).collect::<Vec<_>>(), total),
        blocks,
    )?;

    let expected_size: usize = pieces.iter().map(|p| p.size() + 1).sum();
    debug_assert_eq!(formulation.size(), expected_size);

    let hull = match common_recession {
        None => HullStatus::ClosureOnly { reason: "no common recession cone supplied".to_string() },
        Some(cone) => certify_common_recession(pieces, cone)?,
    };
    Ok(BalasUnion { formulation, hull })
}

/// Certifies `cone(generators) <= rec(P_i) <= { rows }` for every piece;
/// when generators and rows describe the same cone this pinches every
/// recession cone to it.
fn certify_common_recession(
    pieces: &[ExtendedFormulation],
    cone: &RecessionCone,
) -> Result<HullStatus> {
    for (gi, g) in cone.generators.iter().enumerate() {
        if cone.rows.contains(g).is_err() {
            return Ok(HullStatus::ClosureOnly {
                reason: format!("recession generator {gi} violates the supplied cone rows"),
            });
        }
    }
    for (i, p) in pieces.iter().enumerate() {
        for (gi, g) in cone.generators.iter().enumerate() {
            if p.recession_preimage(g)?.is_none() {
                return Ok(HullStatus::ClosureOnly {
                    reason: format!("piece {i} does not recede along generator {gi}"),
                });
            }
        }
        let homog = p.lifted().homogenized();
        let pre = PresolvedLp::new(&homog);
        for row in cone.rows.ineqs() {
            let pulled = p.projection().pull_back(row);
            if !ineq_row_valid(&pre, &pulled)?.is_valid() {
                return Ok(HullStatus::ClosureOnly {
                    reason: format!(
                        "piece {i} recedes outside the supplied cone (row {})",
                        row.describe(cone.rows.dim())
                    ),
                });
            }
        }
        for row in cone.rows.eqs() {
            let pulled = p.projection().pull_back(row);
            if !crate::lp::eq_row_valid(&pre, &pulled)? {
                return Ok(HullStatus::ClosureOnly {
                    reason: format!(
                        "piece {i} recedes off the supplied cone hyperplane (row {})",
                        row.describe(cone.rows.dim())
                    ),
                });
            }
        }
    }
    Ok(HullStatus::Exact)
}

/// Dual (separation) extension: from an extension of a nonempty `Q`, build
/// an extension of `{ x : <y, x> >= gamma for all y in Q }` by LP duality
/// on the lifted system. Inequality rows of the lift get nonnegative
/// multipliers, equality rows free multipliers. Size is `size(Q) + 1`.
pub fn martin_dual_extension(ext: &ExtendedFormulation, gamma: &Rat) -> Result<ExtendedFormulation> {
    if feasible_point(ext.lifted())?.is_none() {
        return Err(Error::Domain(
            "the dual extension requires a nonempty polyhedron".to_string(),
        ));
    }
    let d = ext.target_dim();
    let ldim = ext.lifted_dim();
    let m = ext.lifted().ineqs().len();
    let k = ext.lifted().eqs().len();
    let lambda0 = d;
    let mu0 = d + m;
    let total = d + m + k;

    // For each lifted coordinate t of Q:
    //   sum_i lambda_i a_i[t] + sum_j mu_j b_j[t] = (Pi^T x)[t].
    let mut col_exprs: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); ldim];
    for (i, r) in ext.lifted().ineqs().iter().enumerate() {
        for (t, c) in r.expr.entries() {
            col_exprs[*t].push((lambda0 + i, c.clone()));
        }
    }
    for (j, r) in ext.lifted().eqs().iter().enumerate() {
        for (t, c) in r.expr.entries() {
            col_exprs[*t].push((mu0 + j, c.clone()));
        }
    }
    for (s, prow) in ext.projection().rows().iter().enumerate() {
        for (t, c) in prow.entries() {
            col_exprs[*t].push((s, -c.clone()));
        }
    }
    let eqs: Vec<Row> = col_exprs
        .into_iter()
        .map(|entries| Row::new(LinExpr::new(entries), Rat::zero()))
        .collect();

    let mut ineqs: Vec<Row> = Vec::new();
    for i in 0..m {
        ineqs.push(Row::new(LinExpr::unit(lambda0 + i), Rat::zero()));
    }
    // <rhs, (lambda, mu)> >= gamma
    let mut obj_entries: Vec<(usize, Rat)> = Vec::new();
    for (i, r) in ext.lifted().ineqs().iter().enumerate() {
        if !r.rhs.is_zero() {
            obj_entries.push((lambda0 + i, r.rhs.clone()));
        }
    }
    for (j, r) in ext.lifted().eqs().iter().enumerate() {
        if !r.rhs.is_zero() {
            obj_entries.push((mu0 + j, r.rhs.clone()));
        }
    }
    ineqs.push(Row::new(LinExpr::new(obj_entries), gamma.clone()));

    let lifted = HPolyhedron::new(total, ineqs, eqs)?;
    let blocks = vec![
        VarBlock { label: "x".to_string(), start: 0, len: d },
        VarBlock { label: "lambda".to_string(), start: lambda0, len: m },
        VarBlock { label: "mu".to_string(), start: mu0, len: k },
    ];
    ExtendedFormulation::new(
        lifted,
        LinearMap::selection(&(0..d).collect::<Vec<_>>(), total),
        blocks,
    )
}

/// Choice of source terminals for one flow piece: `S` of size `|T| / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSelector {
    s: BTreeSet<usize>,
}

impl PieceSelector {
    pub fn new(space: &EdgeSpace, s: impl IntoIterator<Item = usize>) -> Result<Self> {
        let s: BTreeSet<usize> = s.into_iter().collect();
        let t = space.terminals();
        if !t.len().is_multiple_of(2) {
            return Err(Error::Parity(format!("|T| = {} is odd", t.len())));
        }
        if !s.is_subset(t) {
            return Err(Error::Domain("selector is not a subset of the terminals".to_string()));
        }
        if s.len() * 2 != t.len() {
            return Err(Error::Domain(format!(
                "selector has {} nodes, need |T|/2 = {}",
                s.len(),
                t.len() / 2
            )));
        }
        Ok(PieceSelector { s })
    }

    pub fn sources(&self) -> &BTreeSet<usize> {
        &self.s
    }
}

/// One bidirected-flow piece `P_S`: variables `x` over edges and `f` over
/// the `2 |E_n|` arcs; flow conservation pushes one unit out of each node
/// of `S` and into each node of `T \ S`; capacity rows bound `x` from below
/// by the two arc flows of its edge. Exactly `3 |E_n|` inequality rows.
pub fn tjoin_flow_piece(space: &EdgeSpace, sel: &PieceSelector) -> Result<ExtendedFormulation> {
    let ne = space.num_edges();
    let n = space.n();
    let arc_fwd = |e: usize| ne + 2 * e;
    let arc_rev = |e: usize| ne + 2 * e + 1;
    let total = ne + 2 * ne;

    let mut eqs = Vec::new();
    for w in 1..=n {
        let mut entries: Vec<(usize, Rat)> = Vec::new();
        for (e, &(u, v)) in space.edges().iter().enumerate() {
            // Arc u->v is arc_fwd(e), arc v->u is arc_rev(e).
            if u == w {
                entries.push((arc_fwd(e), Rat::one()));
                entries.push((arc_rev(e), -Rat::one()));
            } else if v == w {
                entries.push((arc_rev(e), Rat::one()));
                entries.push((arc_fwd(e), -Rat::one()));
            }
        }
        let rhs = if sel.s.contains(&w) {
            Rat::one()
        } else if space.terminals().contains(&w) {
            -Rat::one()
        } else {
            Rat::zero()
        };
        eqs.push(Row::new(LinExpr::new(entries), rhs));
    }

    let mut ineqs = Vec::new();
    for a in 0..2 * ne {
        ineqs.push(Row::new(LinExpr::unit(ne + a), Rat::zero()));
    }
    for e in 0..ne {
        let expr = LinExpr::new(vec![
            (e, Rat::one()),
            (arc_fwd(e), -Rat::one()),
            (arc_rev(e), -Rat::one()),
        ]);
        ineqs.push(Row::new(expr, Rat::zero()));
    }

    let lifted = HPolyhedron::new(total, ineqs, eqs)?;
    let blocks = vec![
        VarBlock { label: "x".to_string(), start: 0, len: ne },
        VarBlock { label: "f".to_string(), start: ne, len: 2 * ne },
    ];
    let ext = ExtendedFormulation::new(
        lifted,
        LinearMap::selection(&(0..ne).collect::<Vec<_>>(), total),
        blocks,
    )?;
    debug_assert_eq!(ext.size(), 3 * ne);
    Ok(ext)
}

fn half_subsets(t: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let items: Vec<usize> = t.iter().copied().collect();
    let half = items.len() / 2;
    fn rec(
        items: &[usize],
        start: usize,
        need: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if need == 0 {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, need - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&items, 0, half, &mut Vec::new(), &mut out);
    out
}

/// Extension of the T-join dominant: the Balas union of all
/// `C(|T|, |T|/2)` flow pieces. The shared recession cone (the nonnegative
/// orthant) is certified, so the hull is exact.
pub fn tjoin_dominant_extension(space: &EdgeSpace) -> Result<ExtendedFormulation> {
    let t = space.terminals();
    if !t.len().is_multiple_of(2) {
        return Err(Error::Parity(format!("|T| = {} is odd", t.len())));
    }
    if t.len() < 2 {
        return Err(Error::Domain("need at least two terminals".to_string()));
    }
    let mut pieces = Vec::new();
    for s in half_subsets(t) {
        let sel = PieceSelector::new(space, s)?;
        pieces.push(tjoin_flow_piece(space, &sel)?);
    }
    let union = balas_union(&pieces, Some(&RecessionCone::orthant(space.num_edges())))?;
    match union.hull {
        HullStatus::Exact => Ok(union.formulation),
        HullStatus::ClosureOnly { reason } => Err(Error::Domain(format!(
            "flow pieces unexpectedly fail the common-recession check: {reason}"
        ))),
    }
}

/// Extension of the T-cut dominant: the dual extension of the T-join
/// dominant extension at threshold 1, with `x >= 0` appended explicitly
/// (the dual cone alone does not enforce nonnegativity).
pub fn tcut_dominant_extension(space: &EdgeSpace) -> Result<ExtendedFormulation> {
    let join_ext = tjoin_dominant_extension(space)?;
    let dual = martin_dual_extension(&join_ext, &Rat::one())?;
    let ne = space.num_edges();
    let nonneg: Vec<Row> = (0..ne).map(|e| Row::new(LinExpr::unit(e), Rat::zero())).collect();
    let lifted = dual.lifted().with_extra_rows(nonneg, Vec::new())?;
    ExtendedFormulation::new(lifted, dual.projection().clone(), dual.blocks().to_vec())
}

/// Extension of the polar face of the T-cut dominant at a minimal T-join
/// `J`: per edge `m` of `J`, the T'-cut dominant extension for the
/// endpoints of `m`, face-restricted to `x_m = 1` and `x_e = 0` for the
/// other edges of `J`, then the Balas union over `m`. All pieces share the
/// recession cone spanned by the units off `J`, so the hull is exact.
pub fn polar_face_pieces(
    space: &EdgeSpace,
    join: &EdgeSubset,
) -> Result<Vec<ExtendedFormulation>> {
    if !space.is_minimal_tjoin(join) {
        return Err(Error::Domain(
            "the supplied edge set is not an inclusion-minimal T-join".to_string(),
        ));
    }
    let mut pieces = Vec::new();
    for &m in join.edges() {
        let (u, v) = space.endpoints(m);
        let prime = space.with_terminals([u, v])?;
        let mut piece = tcut_dominant_extension(&prime)?;
        piece = face_extension(&piece, &Row::new(LinExpr::unit(m), Rat::one()))?;
        for &e in join.edges() {
            if e != m {
                piece = face_extension(&piece, &Row::new(LinExpr::unit(e), Rat::zero()))?;
            }
        }
        pieces.push(piece);
    }
    Ok(pieces)
}

pub fn polar_face_extension_at_join(
    space: &EdgeSpace,
    join: &EdgeSubset,
) -> Result<ExtendedFormulation> {
    let pieces = polar_face_pieces(space, join)?;
    let ne = space.num_edges();
    let zeroed: BTreeSet<usize> = join.edges().iter().copied().collect();
    let cone = RecessionCone::axis_cone(ne, &zeroed);
    let union = balas_union(&pieces, Some(&cone))?;
    match union.hull {
        HullStatus::Exact => Ok(union.formulation),
        HullStatus::ClosureOnly { reason } => Err(Error::Domain(format!(
            "face pieces unexpectedly fail the common-recession check: {reason}"
        ))),
    }
}

/// Radial-cone pipeline at a vertex `chi(J)` of the T-join dominant: the
/// polar-face extension at `J` followed by the dual extension at threshold
/// one. The projection is the radial cone of the T-join dominant at
/// `chi(J)`, whose nonnegativity is implied rather than appended.
pub fn ve_radial_cone_extension(
    space: &EdgeSpace,
    join: &EdgeSubset,
) -> Result<ExtendedFormulation> {
    let face = polar_face_extension_at_join(space, join)?;
    martin_dual_extension(&face, &Rat::one())
}

/// Radial-cone pipeline at an arbitrary point `v` of the T-join dominant:
/// picks the lexicographically smallest vertex `w` of the smallest face
/// containing `v` (by sorted edge-index lists), face-restricts the
/// polar-face extension at `w` by `<v, y> = 1`, and dualizes.
pub fn nonvertex_radial_cone_extension(
    space: &EdgeSpace,
    v: &[Rat],
) -> Result<ExtendedFormulation> {
    let dominant_h = crate::poly::tjoin_dominant_h(space)?;
    dominant_h.contains(v)?;
    // Vertices of the smallest face containing v are the minimal T-joins
    // whose characteristic vectors satisfy every row tight at v.
    let tight: Vec<&Row> = dominant_h.ineqs().iter().filter(|r| r.slack(v).is_zero()).collect();
    let joins = space.enumerate_minimal_tjoins()?;
    let mut candidates: Vec<&EdgeSubset> = joins
        .iter()
        .filter(|j| {
            let chi = space.characteristic_vector(j);
            tight.iter().all(|r| r.slack(&chi).is_zero())
        })
        .collect();
    candidates.sort_by(|a, b| a.edges().cmp(b.edges()));
    let Some(w_join) = candidates.first() else {
        return Err(Error::Domain(
            "no vertex of the dominant lies on the smallest face containing v".to_string(),
        ));
    };
    let face_at_w = polar_face_extension_at_join(space, w_join)?;
    let restricted = face_extension(&face_at_w, &Row::from_dense(v, Rat::one()))?;
    martin_dual_extension(&restricted, &Rat::one())
}

/// One coordinate block of a product decomposition, with its own
/// H-description over block-local coordinates.
#[derive(Debug, Clone)]
pub struct DecompBlock {
    pub label: String,
    /// Global edge indices, ascending; local coordinate `i` is
    /// `global_edges[i]`.
    pub global_edges: Vec<usize>,
    pub h: HPolyhedron,
}

#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    pub blocks: Vec<DecompBlock>,
}

/// The face construction for a T-cut vertex `chi(U1 : U2)` of the T-cut
/// dominant: the face `Q` of the T-join dominant (all T-odd cut rows plus
/// the fixings) and its factorized form with per-side cut rows only,
/// together with the three-block decomposition witnessing a Cartesian
/// product of two smaller join dominants and a single fixed vector.
#[derive(Debug, Clone)]
pub struct FaceFactorization {
    pub q: HPolyhedron,
    pub q_tilde: HPolyhedron,
    pub decomposition: ProductDecomposition,
    pub t1: usize,
    pub t2: usize,
    pub fixed_zero_edges: Vec<usize>,
}

pub fn face_factorization(space: &EdgeSpace, u1: &BTreeSet<usize>) -> Result<FaceFactorization> {
    let n = space.n();
    let t = space.terminals();
    let u2: BTreeSet<usize> = (1..=n).filter(|x| !u1.contains(x)).collect();
    let t_in_u1: BTreeSet<usize> = t.intersection(u1).copied().collect();
    let t_in_u2: BTreeSet<usize> = t.intersection(&u2).copied().collect();
    if t_in_u1.len() % 2 != 1 || t_in_u2.len() % 2 != 1 {
        return Err(Error::Parity(format!(
            "|T&U1| = {} and |T&U2| = {} must both be odd for delta(U1) to be a T-cut",
            t_in_u1.len(),
            t_in_u2.len()
        )));
    }
    // Deterministic terminal choice: smallest-index terminal on each side.
    let t1 = *t_in_u1.iter().next().expect("odd intersection is nonempty");
    let t2 = *t_in_u2.iter().next().expect("odd intersection is nonempty");
    let v1: BTreeSet<usize> = u1.iter().copied().filter(|&x| x != t1).collect();
    let v2: BTreeSet<usize> = u2.iter().copied().filter(|&x| x != t2).collect();
    let t1_side: BTreeSet<usize> = t_in_u1.iter().copied().filter(|&x| x != t1).collect();
    let t2_side: BTreeSet<usize> = t_in_u2.iter().copied().filter(|&x| x != t2).collect();
    let group = |x: usize| -> u8 {
        if v1.contains(&x) {
            1
        } else if v2.contains(&x) {
            2
        } else {
            3
        }
    };

    let ne = space.num_edges();
    let e_t1t2 = space.edge_index(t1, t2)?;
    let mut forbidden: Vec<usize> = Vec::new();
    let mut block1_edges: Vec<usize> = Vec::new();
    let mut block2_edges: Vec<usize> = Vec::new();
    for (e, &(a, b)) in space.edges().iter().enumerate() {
        match (group(a), group(b)) {
            (1, 1) => block1_edges.push(e),
            (2, 2) => block2_edges.push(e),
            (ga, gb) if ga != gb => forbidden.push(e),
            _ => {} // the edge {t1, t2}
        }
    }

    let nonneg: Vec<Row> = (0..ne).map(|e| Row::new(LinExpr::unit(e), Rat::zero())).collect();
    let mut fixed_eqs: Vec<Row> = vec![Row::new(LinExpr::unit(e_t1t2), Rat::one())];
    for &e in &forbidden {
        fixed_eqs.push(Row::new(LinExpr::unit(e), Rat::zero()));
    }

    // Q: nonnegativity, the fixings, every T-odd cut row.
    let mut q_ineqs = nonneg.clone();
    for c in space.enumerate_tcuts()? {
        let expr = LinExpr::new(c.edges().iter().map(|&e| (e, Rat::one())).collect());
        q_ineqs.push(Row::new(expr, Rat::one()));
    }
    let q = HPolyhedron::new(ne, q_ineqs, fixed_eqs.clone())?;

    // Per-side cut rows: x(S_i : V_i \ S_i) >= 1 for S_i with odd terminal
    // intersection; an empty side contributes nothing.
    let side_cut_rows = |side: &BTreeSet<usize>, t_side: &BTreeSet<usize>,
                         edge_of: &dyn Fn(usize) -> Option<usize>|
     -> Vec<Row> {
        let nodes: Vec<usize> = side.iter().copied().collect();
        let mut rows = Vec::new();
        for mask in 0u64..(1 << nodes.len()) {
            let s: BTreeSet<usize> = nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &x)| x)
                .collect();
            if s.intersection(t_side).count() % 2 != 1 {
                continue;
            }
            let mut entries = Vec::new();
            for &a in side {
                for &b in side.iter().filter(|&&b| b > a) {
                    if s.contains(&a) != s.contains(&b) {
                        let g = space.edge_index(a, b).expect("side edge exists");
                        if let Some(idx) = edge_of(g) {
                            entries.push((idx, Rat::one()));
                        }
                    }
                }
            }
            rows.push(Row::new(LinExpr::new(entries), Rat::one()));
        }
        rows
    };

    let global = |g: usize| Some(g);
    let mut qt_ineqs = nonneg;
    qt_ineqs.extend(side_cut_rows(&v1, &t1_side, &global));
    qt_ineqs.extend(side_cut_rows(&v2, &t2_side, &global));
    let q_tilde = HPolyhedron::new(ne, qt_ineqs, fixed_eqs)?;

    // Product blocks over local coordinates.
    let make_join_block = |side: &BTreeSet<usize>,
                           t_side: &BTreeSet<usize>,
                           edges: &[usize],
                           label: &str|
     -> Result<DecompBlock> {
        let local_of: std::collections::BTreeMap<usize, usize> =
            edges.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let mut rows: Vec<Row> =
            (0..edges.len()).map(|l| Row::new(LinExpr::unit(l), Rat::zero())).collect();
        let to_local = |g: usize| local_of.get(&g).copied();
        rows.extend(side_cut_rows(side, t_side, &to_local));
        Ok(DecompBlock {
            label: label.to_string(),
            global_edges: edges.to_vec(),
            h: HPolyhedron::new(edges.len(), rows, Vec::new())?,
        })
    };

    let block1 = make_join_block(&v1, &t1_side, &block1_edges, "E(V1)")?;
    let block2 = make_join_block(&v2, &t2_side, &block2_edges, "E(V2)")?;

    let mut fixed_edges: Vec<usize> = forbidden.clone();
    fixed_edges.push(e_t1t2);
    fixed_edges.sort_unstable();
    let fixed_nonneg: Vec<Row> =
        (0..fixed_edges.len()).map(|l| Row::new(LinExpr::unit(l), Rat::zero())).collect();
    let fixed_block_eqs: Vec<Row> = fixed_edges
        .iter()
        .enumerate()
        .map(|(l, &g)| {
            let rhs = if g == e_t1t2 { Rat::one() } else { Rat::zero() };
            Row::new(LinExpr::unit(l), rhs)
        })
        .collect();
    let fixed_block = DecompBlock {
        label: "fixed".to_string(),
        global_edges: fixed_edges.clone(),
        h: HPolyhedron::new(fixed_edges.len(), fixed_nonneg, fixed_block_eqs)?,
    };

    Ok(FaceFactorization {
        q,
        q_tilde,
        decomposition: ProductDecomposition { blocks: vec![block1, block2, fixed_block] },
        t1,
        t2,
        fixed_zero_edges: forbidden,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};
    use crate::poly::tjoin_dominant_h;

    fn ratv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn two_d_pair() -> HPolyhedron {
        HPolyhedron::new(
            2,
            vec![
                Row::from_dense(&ratv(&[1, 0]), rat(0)),
                Row::from_dense(&ratv(&[0, 1]), rat(0)),
                Row::from_dense(&ratv(&[1, 1]), rat(1)),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn trivial_extension_sizes() {
        let p = two_d_pair();
        assert_eq!(trivial_extension(&p).size(), 3);
        assert_eq!(trivial_extension(&HPolyhedron::free_space(4)).size(), 0);
        let space = EdgeSpace::odd_everything(4).unwrap();
        let dom = tjoin_dominant_h(&space).unwrap();
        assert_eq!(trivial_extension(&dom).size(), 10);
    }

    #[test]
    fn radial_cone_extension_adds_one_row() {
        let ext = trivial_extension(&two_d_pair());
        let lifted = radial_cone_extension(&ext, &ratv(&[1, 0])).unwrap();
        assert_eq!(lifted.size(), ext.size() + 1);
        // x1 >= 0 is relaxed away; x2 >= 0 and x1 + x2 >= 1 remain.
        assert!(lifted.preimage(&ratv(&[0, 2])).unwrap().is_some());
        assert!(lifted.preimage(&ratv(&[0, 0])).unwrap().is_none());
        assert!(lifted.preimage(&ratv(&[5, 0])).unwrap().is_some());
        assert!(lifted.preimage(&ratv(&[5, -1])).unwrap().is_none());
        assert!(radial_cone_extension(&ext, &ratv(&[2, -1])).is_err());
    }

    #[test]
    fn radial_cone_extension_at_interior_point_projects_everywhere() {
        let ext = trivial_extension(&two_d_pair());
        let lifted = radial_cone_extension(&ext, &ratv(&[3, 3])).unwrap();
        assert!(lifted.preimage(&ratv(&[-10, -10])).unwrap().is_some());
    }

    #[test]
    fn face_extension_keeps_size() {
        let ext = trivial_extension(&two_d_pair());
        let face = face_extension(&ext, &Row::from_dense(&ratv(&[1, 1]), rat(1))).unwrap();
        assert_eq!(face.size(), ext.size());
        assert!(face.preimage(&[rat(1), rat(0)]).unwrap().is_some());
        assert!(face.preimage(&[rat(1), rat(1)]).unwrap().is_none());
        assert!(face_extension(&ext, &Row::from_dense(&ratv(&[1, 0]), rat(1))).is_err());
    }

    #[test]
    fn map_extension_composes() {
        let ext = trivial_extension(&two_d_pair());
        let id = LinearMap::identity(2);
        assert_eq!(map_extension(&ext, &id).unwrap().size(), ext.size());
        let seg = face_extension(&ext, &Row::from_dense(&ratv(&[1, 1]), rat(1))).unwrap();
        let sum = LinearMap::new(2, vec![LinExpr::from_dense(&ratv(&[1, 1]))]).unwrap();
        let mapped = map_extension(&seg, &sum).unwrap();
        assert!(mapped.preimage(&[rat(1)]).unwrap().is_some());
        assert!(mapped.preimage(&[rat(2)]).unwrap().is_none());
    }

    #[test]
    fn balas_union_of_two_points() {
        let mk_point = |x: i64, y: i64| {
            let h = HPolyhedron::new(
                2,
                vec![],
                vec![
                    Row::from_dense(&ratv(&[1, 0]), rat(x)),
                    Row::from_dense(&ratv(&[0, 1]), rat(y)),
                ],
            )
            .unwrap();
            trivial_extension(&h)
        };
        let pieces = vec![mk_point(0, 1), mk_point(1, 0)];
        let cone = RecessionCone {
            generators: vec![],
            rows: HPolyhedron::new(
                2,
                vec![],
                vec![
                    Row::from_dense(&ratv(&[1, 0]), rat(0)),
                    Row::from_dense(&ratv(&[0, 1]), rat(0)),
                ],
            )
            .unwrap(),
        };
        let u = balas_union(&pieces, Some(&cone)).unwrap();
        assert_eq!(u.hull, HullStatus::Exact);
        assert_eq!(u.formulation.size(), 2);
        assert!(u.formulation.preimage(&[frac(1, 2), frac(1, 2)]).unwrap().is_some());
        assert!(u.formulation.preimage(&ratv(&[1, 1])).unwrap().is_none());
    }

    #[test]
    fn balas_union_singleton_adds_one() {
        let ext = trivial_extension(&two_d_pair());
        let u = balas_union(std::slice::from_ref(&ext), None).unwrap();
        assert_eq!(u.formulation.size(), ext.size() + 1);
        assert!(matches!(u.hull, HullStatus::ClosureOnly { .. }));
        assert!(u.formulation.preimage(&ratv(&[1, 0])).unwrap().is_some());
        assert!(u.formulation.preimage(&ratv(&[0, 0])).unwrap().is_none());
    }

    #[test]
    fn balas_union_rejects_empty_piece() {
        let empty = trivial_extension(
            &HPolyhedron::new(
                1,
                vec![
                    Row::from_dense(&ratv(&[1]), rat(1)),
                    Row::from_dense(&ratv(&[-1]), rat(0)),
                ],
                vec![],
            )
            .unwrap(),
        );
        assert!(matches!(balas_union(&[empty], None), Err(Error::Domain(_))));
    }

    #[test]
    fn martin_dual_of_blocker_is_the_two_d_pair() {
        let q = HPolyhedron::new(
            2,
            vec![
                Row::from_dense(&ratv(&[1, 0]), rat(0)),
                Row::from_dense(&ratv(&[0, 1]), rat(0)),
                Row::from_dense(&ratv(&[1, 0]), rat(1)),
                Row::from_dense(&ratv(&[0, 1]), rat(1)),
            ],
            vec![],
        )
        .unwrap();
        let ext = martin_dual_extension(&trivial_extension(&q), &Rat::one()).unwrap();
        assert_eq!(ext.size(), 4 + 1);
        assert!(ext.preimage(&ratv(&[1, 0])).unwrap().is_some());
        assert!(ext.preimage(&ratv(&[0, 1])).unwrap().is_some());
        assert!(ext.preimage(&[frac(1, 2), frac(1, 2)]).unwrap().is_some());
        assert!(ext.preimage(&[frac(1, 4), frac(1, 4)]).unwrap().is_none());
        assert!(ext.preimage(&[rat(2), rat(-1)]).unwrap().is_none());
    }

    #[test]
    fn martin_dual_of_single_point() {
        let q = HPolyhedron::new(
            2,
            vec![],
            vec![
                Row::from_dense(&ratv(&[1, 0]), rat(1)),
                Row::from_dense(&ratv(&[0, 1]), rat(1)),
            ],
        )
        .unwrap();
        let ext = martin_dual_extension(&trivial_extension(&q), &Rat::one()).unwrap();
        // P = { x : x1 + x2 >= 1 }.
        assert!(ext.preimage(&ratv(&[2, -1])).unwrap().is_some());
        assert!(ext.preimage(&ratv(&[0, 0])).unwrap().is_none());
    }

    #[test]
    fn martin_dual_rejects_empty_q() {
        let empty = HPolyhedron::new(
            1,
            vec![
                Row::from_dense(&ratv(&[1]), rat(1)),
                Row::from_dense(&ratv(&[-1]), rat(0)),
            ],
            vec![],
        )
        .unwrap();
        assert!(martin_dual_extension(&trivial_extension(&empty), &Rat::one()).is_err());
    }

    #[test]
    fn flow_piece_single_edge() {
        let space = EdgeSpace::new(2, [1, 2]).unwrap();
        let sel = PieceSelector::new(&space, [1]).unwrap();
        let ext = tjoin_flow_piece(&space, &sel).unwrap();
        assert_eq!(ext.size(), 3);
        // The two conservation rows are negatives of each other and collapse
        // to one canonical equality.
        assert_eq!(ext.lifted().eqs().len(), 1);
        assert!(ext.preimage(&[rat(1)]).unwrap().is_some());
        assert!(ext.preimage(&[rat(7)]).unwrap().is_some());
        assert!(ext.preimage(&[frac(1, 2)]).unwrap().is_none());
    }

    #[test]
    fn flow_piece_k4_size() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let sel = PieceSelector::new(&space, [1, 2]).unwrap();
        let ext = tjoin_flow_piece(&space, &sel).unwrap();
        assert_eq!(ext.size(), 18);
        assert_eq!(ext.lifted().eqs().len(), 4);
    }

    #[test]
    fn selector_validation() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        assert!(PieceSelector::new(&space, [1, 2]).is_ok());
        assert!(PieceSelector::new(&space, [1]).is_err());
        assert!(PieceSelector::new(&space, [1, 5]).is_err());
    }

    #[test]
    fn join_dominant_extension_size_k4() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let ext = tjoin_dominant_extension(&space).unwrap();
        assert_eq!(ext.size(), 114);
        let joins = space.enumerate_minimal_tjoins().unwrap();
        for j in joins.iter().take(4) {
            let chi = space.characteristic_vector(j);
            assert!(ext.preimage(&chi).unwrap().is_some());
        }
        assert!(ext.preimage(&vec![Rat::zero(); 6]).unwrap().is_none());
    }

    #[test]
    fn join_dominant_extension_pair_terminals() {
        let space = EdgeSpace::new(4, [1, 2]).unwrap();
        let ext = tjoin_dominant_extension(&space).unwrap();
        assert_eq!(ext.size(), 38);
    }

    #[test]
    fn join_dominant_extension_rejects_odd() {
        let space = EdgeSpace::new(4, [1, 2, 3]).unwrap();
        assert!(matches!(tjoin_dominant_extension(&space), Err(Error::Parity(_))));
    }

    #[test]
    fn cut_dominant_extension_size() {
        let space = EdgeSpace::new(2, [1, 2]).unwrap();
        let ext = tcut_dominant_extension(&space).unwrap();
        // Join ext: 2 pieces of size 3 plus one multiplier row each; dual
        // adds 1; nonnegativity adds |E| = 1.
        assert_eq!(ext.size(), 8 + 1 + 1);
        assert!(ext.preimage(&[rat(1)]).unwrap().is_some());
        assert!(ext.preimage(&[frac(1, 2)]).unwrap().is_none());
    }

    #[test]
    fn face_factorization_k4() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let u1: BTreeSet<usize> = [1].into_iter().collect();
        let f = face_factorization(&space, &u1).unwrap();
        assert_eq!((f.t1, f.t2), (1, 2));
        let total: usize = f.decomposition.blocks.iter().map(|b| b.global_edges.len()).sum();
        assert_eq!(total, 6);
        // V1 is empty; V2 = {3,4} carries a single-edge join dominant.
        let b1 = &f.decomposition.blocks[0];
        assert_eq!(b1.global_edges.len(), 0);
        assert_eq!(b1.h.num_rows(), 0);
        let b2 = &f.decomposition.blocks[1];
        assert_eq!(b2.global_edges.len(), 1);
        assert_eq!(space.endpoints(b2.global_edges[0]), (3, 4));
        let bad: BTreeSet<usize> = [1, 2].into_iter().collect();
        assert!(matches!(face_factorization(&space, &bad), Err(Error::Parity(_))));
    }
}
