//! Double description: exact conversion between H- and V-representations.
//!
//! The core works on homogeneous cones `{ z : M_in z >= 0, M_eq z = 0 }`,
//! maintaining a lineality basis plus a set of extreme rays and inserting
//! one constraint at a time. Adjacency of rays is decided by the standard
//! combinatorial zero-set test. `h_to_v` and `v_to_h` reduce to the cone
//! case by homogenization resp. by enumerating the cone of valid
//! inequalities.
//!
//! Conversion is gated by an ambient dimension cap (default 30): beyond
//! desk scale the ray counts explode, and all verification must go through
//! LP certificates instead.

use crate::error::{Error, Result};
use crate::num::{primitive_direction, Rat};
use crate::poly::{HPolyhedron, LinExpr, Row, VPolyhedron};
use num_traits::{One, Signed, Zero};

/// Default ambient-dimension cap for conversions.
pub const DEFAULT_DIM_CAP: usize = 30;

/// Environment variable overriding the cap for the whole process.
pub const DIM_CAP_ENV: &str = "XFKIT_DIM_CAP";

#[derive(Debug, Clone, Copy)]
pub struct DdOptions {
    pub dim_cap: usize,
}

impl Default for DdOptions {
    fn default() -> Self {
        DdOptions { dim_cap: effective_dim_cap() }
    }
}

/// The cap in effect: `XFKIT_DIM_CAP` when set to a positive integer, the
/// built-in default otherwise. Read once per process.
pub fn effective_dim_cap() -> usize {
    static CAP: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DIM_CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_DIM_CAP)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ConstraintKind {
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct RayRec {
    v: Vec<Rat>,
    /// Indices of processed constraints tight at this ray.
    zero: Vec<u64>,
}

fn bit_set(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

fn bit_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b.iter()).map(|(x, y)| x & y).collect()
}

fn bit_subset(sub: &[u64], sup: &[u64]) -> bool {
    sub.iter().zip(sup.iter()).all(|(x, y)| x & !y == 0)
}

/// Generators of the cone `{ z : <a, z> >= 0 for ineqs, <a, z> = 0 for eqs }`:
/// a lineality basis plus the extreme rays of the pointed part.
struct ConeGenerators {
    lineality: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
}

fn cone_generators(dim: usize, ineqs: &[Vec<Rat>], eqs: &[Vec<Rat>]) -> ConeGenerators {
    let constraints: Vec<(&Vec<Rat>, ConstraintKind)> = eqs
        .iter()
        .map(|a| (a, ConstraintKind::Eq))
        .chain(ineqs.iter().map(|a| (a, ConstraintKind::Ge)))
        .collect();
    let total = constraints.len();
    let words = total.div_ceil(64).max(1);

    let mut lineality: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut e = vec![Rat::zero(); dim];
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut rays: Vec<RayRec> = Vec::new();

    for (ci, (a, kind)) in constraints.iter().enumerate() {
        let vals: Vec<Rat> = lineality.iter().map(|l| crate::num::dot(a, l)).collect();
        if let Some(p) = vals.iter().position(|x| !x.is_zero()) {
            // The constraint cuts the lineality space.
            let pivot = lineality.remove(p);
            let ap = vals[p].clone();
            for (k, l) in lineality.iter_mut().enumerate() {
                let idx = if k < p { k } else { k + 1 };
                if vals[idx].is_zero() {
                    continue;
                }
                let f = -(&vals[idx] / &ap);
                for (x, pv) in l.iter_mut().zip(pivot.iter()) {
                    *x = &*x + &f * pv;
                }
                *l = primitive_direction(l);
            }
            for r in rays.iter_mut() {
                let av = crate::num::dot(a, &r.v);
                if av.is_zero() {
                    bit_set(&mut r.zero, ci);
                    continue;
                }
                let f = -(&av / &ap);
                for (x, pv) in r.v.iter_mut().zip(pivot.iter()) {
                    *x = &*x + &f * pv;
                }
                r.v = primitive_direction(&r.v);
                bit_set(&mut r.zero, ci);
            }
            if *kind == ConstraintKind::Ge {
                let dir = if ap.is_positive() {
                    pivot
                } else {
                    pivot.iter().map(|x| -x.clone()).collect()
                };
                // Tight at every earlier constraint, strictly positive here.
                let mut zero = vec![0u64; words];
                for j in 0..ci {
                    bit_set(&mut zero, j);
                }
                rays.push(RayRec { v: primitive_direction(&dir), zero });
            }
            continue;
        }

        // Lineality is orthogonal to the constraint: split the rays.
        let evals: Vec<Rat> = rays.iter().map(|r| crate::num::dot(a, &r.v)).collect();
        let mut next: Vec<RayRec> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            let keep = match kind {
                ConstraintKind::Ge => !evals[i].is_negative(),
                ConstraintKind::Eq => evals[i].is_zero(),
            };
            if keep {
                let mut nr = r.clone();
                if evals[i].is_zero() {
                    bit_set(&mut nr.zero, ci);
                }
                next.push(nr);
            }
        }
        for (i, ri) in rays.iter().enumerate() {
            if !evals[i].is_positive() {
                continue;
            }
            for (j, rj) in rays.iter().enumerate() {
                if !evals[j].is_negative() {
                    continue;
                }
                let common = bit_and(&ri.zero, &rj.zero);
                let adjacent = !rays.iter().enumerate().any(|(k, rk)| {
                    k != i && k != j && bit_subset(&common, &rk.zero)
                });
                if !adjacent {
                    continue;
                }
                // w = (a.ri) rj - (a.rj) ri is a nonnegative combination.
                let (si, sj) = (&evals[i], &evals[j]);
                let w: Vec<Rat> = ri
                    .v
                    .iter()
                    .zip(rj.v.iter())
                    .map(|(x, y)| si * y - sj * x)
                    .collect();
                let mut zero = common;
                bit_set(&mut zero, ci);
                next.push(RayRec { v: primitive_direction(&w), zero });
            }
        }
        rays = next;
    }

    let mut out: Vec<Vec<Rat>> = rays.into_iter().map(|r| r.v).collect();
    out.sort_by(|a, b| crate::num::lex_cmp(a, b));
    out.dedup();
    ConeGenerators { lineality, rays: out }
}

/// Converts an H-polyhedron to generator form by homogenization.
///
/// Errors: `DimensionCap` above the cap, `NotPointed` if the polyhedron has
/// a nontrivial lineality space. The empty polyhedron yields an empty
/// vertex list.
pub fn h_to_v_capped(p: &HPolyhedron, options: DdOptions) -> Result<VPolyhedron> {
    if p.dim() > options.dim_cap {
        return Err(Error::DimensionCap { dim: p.dim(), cap: options.dim_cap });
    }
    let d = p.dim();
    // Cone over (x, t): rows a.x - rhs*t >= 0 (resp. = 0), plus t >= 0.
    let mut ineqs: Vec<Vec<Rat>> = Vec::new();
    let mut eqs: Vec<Vec<Rat>> = Vec::new();
    for r in p.ineqs() {
        let mut row = r.expr.to_dense(d);
        row.push(-r.rhs.clone());
        ineqs.push(row);
    }
    let mut t_row = vec![Rat::zero(); d];
    t_row.push(Rat::one());
    ineqs.push(t_row);
    for r in p.eqs() {
        let mut row = r.expr.to_dense(d);
        row.push(-r.rhs.clone());
        eqs.push(row);
    }
    let gens = cone_generators(d + 1, &ineqs, &eqs);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for g in gens.rays {
        let t = &g[d];
        if t.is_zero() {
            rays.push(g[..d].to_vec());
        } else {
            vertices.push(g[..d].iter().map(|x| x / t).collect::<Vec<_>>());
        }
    }
    if vertices.is_empty() {
        return Ok(VPolyhedron::empty(d));
    }
    if !gens.lineality.is_empty() {
        return Err(Error::NotPointed);
    }
    VPolyhedron::new(d, vertices, rays)
}

pub fn h_to_v(p: &HPolyhedron) -> Result<VPolyhedron> {
    h_to_v_capped(p, DdOptions::default())
}

/// Converts generators to an irredundant H-description by enumerating the
/// extreme rays of the cone of valid inequalities.
pub fn v_to_h_capped(p: &VPolyhedron, options: DdOptions) -> Result<HPolyhedron> {
    if p.dim() > options.dim_cap {
        return Err(Error::DimensionCap { dim: p.dim(), cap: options.dim_cap });
    }
    let d = p.dim();
    if p.vertices().is_empty() {
        // Empty polyhedron: 0 >= 1.
        return HPolyhedron::new(d, vec![Row::new(LinExpr::default(), Rat::one())], vec![]);
    }
    // Valid rows (a, c) with a.x + c >= 0 on P, i.e. a.x >= -c:
    // one constraint per vertex (a.v + c >= 0) and per ray (a.r >= 0).
    let mut ineqs: Vec<Vec<Rat>> = Vec::new();
    for v in p.vertices() {
        let mut row = v.clone();
        row.push(Rat::one());
        ineqs.push(row);
    }
    for r in p.rays() {
        let mut row = r.clone();
        row.push(Rat::zero());
        ineqs.push(row);
    }
    let gens = cone_generators(d + 1, &ineqs, &[]);
    let mut rows_ge = Vec::new();
    let mut rows_eq = Vec::new();
    let to_row = |g: &[Rat]| Row::from_dense(&g[..d], -g[d].clone());
    for g in &gens.rays {
        if g[..d].iter().all(Rat::is_zero) {
            // The trivial valid row 0.x >= -c; skip.
            continue;
        }
        rows_ge.push(to_row(g));
    }
    for g in &gens.lineality {
        if g[..d].iter().all(Rat::is_zero) {
            continue;
        }
        rows_eq.push(to_row(g));
    }
    HPolyhedron::new(d, rows_ge, rows_eq)
}

pub fn v_to_h(p: &VPolyhedron) -> Result<HPolyhedron> {
    v_to_h_capped(p, DdOptions::default())
}
