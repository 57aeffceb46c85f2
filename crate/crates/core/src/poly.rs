//! H- and V-representations of polyhedra, and the polyhedral operations on
//! them: radial cones, dominants, blockers, polar faces, and the explicit
//! inequality descriptions of T-join and T-cut dominants.
//!
//! Inequality rows mean `<a, x> >= rhs`; equality rows mean `<a, x> = rhs`.
//! Every stored row is canonical: scaled to primitive integer coefficients
//! (positive scale factor, so inequalities keep their orientation), with
//! equality rows additionally sign-normalized so their leading nonzero
//! coefficient is positive. Duplicate rows are removed at construction.

use crate::error::{Error, Result};
use crate::graph::EdgeSpace;
use crate::num::{lex_cmp, primitive_direction, primitive_positive_scale, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashSet;

/// Sparse linear expression over ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    entries: Vec<(usize, Rat)>,
}

impl LinExpr {
    pub fn new(mut entries: Vec<(usize, Rat)>) -> Self {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(i, _)| *i);
        for w in entries.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate coordinate in LinExpr");
        }
        LinExpr { entries }
    }

    pub fn from_dense(v: &[Rat]) -> Self {
        LinExpr {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn unit(coord: usize) -> Self {
        LinExpr {
            entries: vec![(coord, Rat::from_integer(1.into()))],
        }
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_coord(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn coeff(&self, coord: usize) -> Rat {
        match self.entries.binary_search_by_key(&coord, |(i, _)| *i) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, c) in &self.entries {
            if !point[*i].is_zero() {
                acc += c * &point[*i];
            }
        }
        acc
    }

    pub fn scaled(&self, f: &Rat) -> LinExpr {
        if f.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            entries: self.entries.iter().map(|(i, c)| (*i, c * f)).collect(),
        }
    }

    /// `self + f * other`, merged sparsely.
    pub fn axpy(&self, f: &Rat, other: &LinExpr) -> LinExpr {
        if f.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, ca)), Some((j, cb))) => match i.cmp(j) {
                    Ordering::Less => {
                        out.push((*i, ca.clone()));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((*j, cb * f));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = ca.clone() + cb * f;
                        if !c.is_zero() {
                            out.push((*i, c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((i, ca)), None) => {
                    out.push((*i, ca.clone()));
                    a.next();
                }
                (None, Some((j, cb))) => {
                    out.push((*j, cb * f));
                    b.next();
                }
                (None, None) => break,
            }
        }
        LinExpr { entries: out }
    }

    /// Re-indexes every coordinate by `offset`.
    pub fn shifted(&self, offset: usize) -> LinExpr {
        LinExpr {
            entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect(),
        }
    }
}

/// One constraint row; interpretation (>= or =) comes from which list of the
/// host polyhedron it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub expr: LinExpr,
    pub rhs: Rat,
}

impl Row {
    pub fn new(expr: LinExpr, rhs: Rat) -> Self {
        Row { expr, rhs }
    }

    pub fn from_dense(coeffs: &[Rat], rhs: Rat) -> Self {
        Row { expr: LinExpr::from_dense(coeffs), rhs }
    }

    /// Scales to primitive integers with a positive factor. Valid for both
    /// row kinds since the factor is positive.
    fn canonicalize_scale(&mut self) {
        let s = primitive_positive_scale(
            self.expr.entries.iter().map(|(_, c)| c).chain(std::iter::once(&self.rhs)),
        );
        if !s.is_one() {
            for (_, c) in &mut self.expr.entries {
                *c *= &s;
            }
            self.rhs *= &s;
        }
    }

    fn negate(&mut self) {
        for (_, c) in &mut self.expr.entries {
            *c = -c.clone();
        }
        self.rhs = -self.rhs.clone();
    }

    pub fn canonical_ge(mut self) -> Row {
        self.canonicalize_scale();
        self
    }

    pub fn canonical_eq(mut self) -> Row {
        self.canonicalize_scale();
        let flip = match self.expr.entries.first() {
            Some((_, c)) => c.is_negative(),
            None => self.rhs.is_negative(),
        };
        if flip {
            self.negate();
        }
        self
    }

    /// Slack of a point: `<a, x> - rhs`.
    pub fn slack(&self, point: &[Rat]) -> Rat {
        self.expr.eval(point) - &self.rhs
    }

    pub fn describe(&self, dim: usize) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.expr.entries() {
            terms.push(format!("{}*x{}", c, i));
        }
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let _ = dim;
        format!("{} ? {}", lhs, self.rhs)
    }
}

/// Polyhedron given by inequality rows `<a,x> >= b` and equality rows
/// `<a,x> = b` over `R^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    dim: usize,
    ineqs: Vec<Row>,
    eqs: Vec<Row>,
}

impl HPolyhedron {
    pub fn new(dim: usize, ineqs: Vec<Row>, eqs: Vec<Row>) -> Result<Self> {
        let mut p = HPolyhedron { dim, ineqs: Vec::new(), eqs: Vec::new() };
        let mut seen_ineq = HashSet::new();
        for r in ineqs {
            p.check_row_dim(&r)?;
            let r = r.canonical_ge();
            if seen_ineq.insert(r.clone()) {
                p.ineqs.push(r);
            }
        }
        let mut seen_eq = HashSet::new();
        for r in eqs {
            p.check_row_dim(&r)?;
            let r = r.canonical_eq();
            if seen_eq.insert(r.clone()) {
                p.eqs.push(r);
            }
        }
        Ok(p)
    }

    fn check_row_dim(&self, r: &Row) -> Result<()> {
        if let Some(m) = r.expr.max_coord() {
            if m >= self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "row touches coordinate {m} but ambient dimension is {}",
                    self.dim
                )));
            }
        }
        Ok(())
    }

    /// The whole space: no constraints.
    pub fn free_space(dim: usize) -> Self {
        HPolyhedron { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    /// `x >= 0` in all coordinates.
    pub fn nonneg_orthant(dim: usize) -> Self {
        let rows = (0..dim).map(|i| Row::new(LinExpr::unit(i), Rat::zero())).collect();
        HPolyhedron::new(dim, rows, Vec::new()).expect("orthant rows are well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[Row] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Row] {
        &self.eqs
    }

    pub fn num_rows(&self) -> usize {
        self.ineqs.len() + self.eqs.len()
    }

    /// Exact membership test; returns the first violated row on failure.
    pub fn contains(&self, point: &[Rat]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, polyhedron {}",
                point.len(),
                self.dim
            )));
        }
        for (k, r) in self.ineqs.iter().enumerate() {
            if r.slack(point).is_negative() {
                return Err(Error::Membership {
                    row_index: k,
                    description: format!("inequality {}", r.describe(self.dim)),
                });
            }
        }
        for (k, r) in self.eqs.iter().enumerate() {
            if !r.slack(point).is_zero() {
                return Err(Error::Membership {
                    row_index: self.ineqs.len() + k,
                    description: format!("equality {}", r.describe(self.dim)),
                });
            }
        }
        Ok(())
    }

    /// Does the recession cone of `self` contain `dir`? Row-wise exact test.
    pub fn recession_contains(&self, dir: &[Rat]) -> bool {
        self.ineqs.iter().all(|r| !r.expr.eval(dir).is_negative())
            && self.eqs.iter().all(|r| r.expr.eval(dir).is_zero())
    }

    /// The homogenized system: all right-hand sides zeroed. Describes the
    /// recession cone.
    pub fn homogenized(&self) -> HPolyhedron {
        let z = |rows: &[Row]| {
            rows.iter()
                .map(|r| Row::new(r.expr.clone(), Rat::zero()))
                .collect::<Vec<_>>()
        };
        HPolyhedron::new(self.dim, z(&self.ineqs), z(&self.eqs))
            .expect("homogenization preserves well-formedness")
    }

    pub fn with_extra_rows(&self, ineqs: Vec<Row>, eqs: Vec<Row>) -> Result<HPolyhedron> {
        let mut all_ineqs = self.ineqs.clone();
        all_ineqs.extend(ineqs);
        let mut all_eqs = self.eqs.clone();
        all_eqs.extend(eqs);
        HPolyhedron::new(self.dim, all_ineqs, all_eqs)
    }
}

/// Polyhedron given by generators: `conv(vertices) + cone(rays)`.
/// Canonical form: vertices sorted lexicographically and deduplicated;
/// rays scaled to primitive integer direction, sorted, deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolyhedron {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
}

impl VPolyhedron {
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>) -> Result<Self> {
        for v in vertices.iter().chain(rays.iter()) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator has dimension {}, expected {dim}",
                    v.len()
                )));
            }
        }
        let mut vertices = vertices;
        vertices.sort_by(|a, b| lex_cmp(a, b));
        vertices.dedup();
        let mut rays: Vec<Vec<Rat>> = rays
            .into_iter()
            .map(|r| primitive_direction(&r))
            .filter(|r| !r.iter().all(Rat::is_zero))
            .collect();
        rays.sort_by(|a, b| lex_cmp(a, b));
        rays.dedup();
        Ok(VPolyhedron { dim, vertices, rays })
    }

    pub fn empty(dim: usize) -> Self {
        VPolyhedron { dim, vertices: Vec::new(), rays: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A point paired with the polyhedron it was verified to lie in.
#[derive(Debug, Clone)]
pub struct PointInP<'a> {
    host: &'a HPolyhedron,
    coords: Vec<Rat>,
}

impl<'a> PointInP<'a> {
    /// Exact membership check on construction.
    pub fn new(host: &'a HPolyhedron, coords: Vec<Rat>) -> Result<Self> {
        host.contains(&coords)?;
        Ok(PointInP { host, coords })
    }

    pub fn host(&self) -> &'a HPolyhedron {
        self.host
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

/// The rows of `p` tight at `v`: inequalities satisfied with equality plus
/// all equality rows. An interior point yields the whole space.
pub fn radial_cone_h(p: &HPolyhedron, v: &PointInP<'_>) -> HPolyhedron {
    let active: Vec<Row> = p
        .ineqs()
        .iter()
        .filter(|r| r.slack(v.coords()).is_zero())
        .cloned()
        .collect();
    HPolyhedron::new(p.dim(), active, p.eqs().to_vec())
        .expect("active rows of a well-formed polyhedron are well-formed")
}

/// `P + R_+^d` in generator form: unit rays appended, then vertices that
/// componentwise dominate another vertex are pruned.
pub fn dominant(p: &VPolyhedron) -> Result<VPolyhedron> {
    for g in p.vertices().iter().chain(p.rays().iter()) {
        if g.iter().any(Rat::is_negative) {
            return Err(Error::Domain(
                "dominant requires nonnegative generators".to_string(),
            ));
        }
    }
    let dim = p.dim();
    let mut rays = p.rays().to_vec();
    for i in 0..dim {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::from_integer(1.into());
        rays.push(e);
    }
    let verts = p.vertices();
    let dominated = |a: &[Rat], b: &[Rat]| a.iter().zip(b.iter()).all(|(x, y)| x >= y);
    let kept: Vec<Vec<Rat>> = verts
        .iter()
        .enumerate()
        .filter(|(i, v)| {
            !verts
                .iter()
                .enumerate()
                .any(|(j, w)| j != *i && dominated(v, w) && (!dominated(w, v) || j < *i))
        })
        .map(|(_, v)| v.clone())
        .collect();
    VPolyhedron::new(dim, kept, rays)
}

/// H-description of the blocker `B(P) = { y >= 0 : <x, y> >= 1 for all x in P }`:
/// one row per vertex of `p` plus nonnegativity.
///
/// `p` must describe a blocking polyhedron: nonnegative generators and all
/// unit directions among the rays.
pub fn blocker(p: &VPolyhedron) -> Result<HPolyhedron> {
    if p.vertices().is_empty() {
        return Err(Error::Domain("blocker of the empty polyhedron is undefined".to_string()));
    }
    for g in p.vertices().iter().chain(p.rays().iter()) {
        if g.iter().any(Rat::is_negative) {
            return Err(Error::Domain(
                "not a blocking polyhedron: a generator has a negative coordinate".to_string(),
            ));
        }
    }
    let dim = p.dim();
    for i in 0..dim {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::from_integer(1.into());
        if !p.rays().contains(&e) {
            return Err(Error::Domain(format!(
                "not a blocking polyhedron: unit ray e{i} missing, so the set is not closed under componentwise increase"
            )));
        }
    }
    let mut rows = Vec::new();
    for i in 0..dim {
        rows.push(Row::new(LinExpr::unit(i), Rat::zero()));
    }
    for v in p.vertices() {
        rows.push(Row::new(LinExpr::from_dense(v), Rat::from_integer(1.into())));
    }
    HPolyhedron::new(dim, rows, Vec::new())
}

/// H-description of the T-join dominant: nonnegativity plus `x(C) >= 1` for
/// every T-cut `C`.
pub fn tjoin_dominant_h(space: &EdgeSpace) -> Result<HPolyhedron> {
    let cuts = space.enumerate_tcuts()?;
    let mut rows = Vec::new();
    for e in 0..space.num_edges() {
        rows.push(Row::new(LinExpr::unit(e), Rat::zero()));
    }
    for c in &cuts {
        let expr = LinExpr::new(
            c.edges().iter().map(|&e| (e, Rat::from_integer(1.into()))).collect(),
        );
        rows.push(Row::new(expr, Rat::from_integer(1.into())));
    }
    HPolyhedron::new(space.num_edges(), rows, Vec::new())
}

/// H-description of the T-cut dominant: nonnegativity plus `x(J) >= 1` for
/// every inclusion-minimal T-join `J` (non-minimal joins give dominated rows
/// and are omitted).
pub fn tcut_dominant_h(space: &EdgeSpace) -> Result<HPolyhedron> {
    let joins = space.enumerate_minimal_tjoins()?;
    let mut rows = Vec::new();
    for e in 0..space.num_edges() {
        rows.push(Row::new(LinExpr::unit(e), Rat::zero()));
    }
    for j in &joins {
        let expr = LinExpr::new(
            j.edges().iter().map(|&e| (e, Rat::from_integer(1.into()))).collect(),
        );
        rows.push(Row::new(expr, Rat::from_integer(1.into())));
    }
    HPolyhedron::new(space.num_edges(), rows, Vec::new())
}

/// The polar face `{ y in B(P) : <v, y> = 1 }` of a blocker, for `v in P`.
///
/// Membership of `v` in `P = B(B(P))` is certified by checking that
/// `<v, y> >= 1` is valid over the blocker; an invalid row signals `v` is
/// not in `P`.
pub fn polar_face(blocker_h: &HPolyhedron, v: &[Rat]) -> Result<HPolyhedron> {
    if v.len() != blocker_h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point has dimension {}, blocker {}",
            v.len(),
            blocker_h.dim()
        )));
    }
    let row = Row::from_dense(v, Rat::one());
    let pre = crate::lp::PresolvedLp::new(blocker_h);
    if !crate::lp::ineq_row_valid(&pre, &row)?.is_valid() {
        return Err(Error::Domain(
            "<v, y> >= 1 is not valid over the blocker, so v is not in the blocking polyhedron"
                .to_string(),
        ));
    }
    blocker_h.with_extra_rows(Vec::new(), vec![row])
}

/// Converts the listed inequality rows of `p` into equalities. Rows must be
/// present in `p` (compared in canonical form).
pub fn face_restrict(p: &HPolyhedron, rows: &[Row]) -> Result<HPolyhedron> {
    let mut to_fix = HashSet::new();
    for r in rows {
        let canon = r.clone().canonical_ge();
        if !p.ineqs().contains(&canon) {
            return Err(Error::Malformed(format!(
                "row {} is not an inequality row of the polyhedron",
                canon.describe(p.dim())
            )));
        }
        to_fix.insert(canon);
    }
    let ineqs: Vec<Row> = p.ineqs().iter().filter(|r| !to_fix.contains(*r)).cloned().collect();
    let mut eqs = p.eqs().to_vec();
    // Fixed rows become equalities, in their original inequality order.
    eqs.extend(p.ineqs().iter().filter(|r| to_fix.contains(*r)).cloned());
    HPolyhedron::new(p.dim(), ineqs, eqs)
}
