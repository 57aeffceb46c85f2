//! Exact rational linear programming with replayable certificates.
//!
//! The solver is a two-phase primal simplex over exact rationals. Pricing
//! uses the most-negative reduced cost by default and falls back to Bland's
//! rule after a run of degenerate pivots, which keeps the termination
//! guarantee while avoiding Bland's slow zig-zag on non-degenerate problems.
//!
//! Lifted systems built by the extension constructions consist mostly of
//! equality rows over free multiplier variables. A sparse presolve
//! eliminates free variables through equality rows before the dense tableau
//! is assembled; witnesses and dual certificates are mapped back to the
//! original rows afterwards, so callers always see certificates in terms of
//! the system they supplied.
//!
//! Certificate conventions, for `constraints = { A_in x >= b_in, A_eq x = b_eq }`:
//! - `Optimal`: the witness satisfies every row exactly and achieves `value`;
//!   the dual multipliers satisfy `sum_r y_r a_r = c` with inequality
//!   multipliers `>= 0` (minimize) or `<= 0` (maximize) and `sum_r y_r b_r = value`.
//! - `Infeasible`: Farkas multipliers with inequality part `>= 0`,
//!   `sum_r y_r a_r = 0` and `sum_r y_r b_r > 0`.
//! - `Unbounded`: a feasible point plus a recession ray with negative
//!   (minimize) resp. positive (maximize) objective inner product.

use crate::error::{Error, Result};
use crate::num::Rat;
use crate::poly::{HPolyhedron, LinExpr, Row};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rat>,
    pub constraints: HPolyhedron,
}

/// Row multipliers aligned with the solved system: one entry per inequality
/// row, one per equality row, and one per appended equality row (empty
/// unless the solve appended rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub ineq: Vec<Rat>,
    pub eq: Vec<Rat>,
    pub appended: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct LpOptimal {
    pub value: Rat,
    pub witness: Vec<Rat>,
    pub dual: DualCertificate,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpOptimal),
    Infeasible { farkas: DualCertificate },
    Unbounded { point: Vec<Rat>, ray: Vec<Rat> },
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpOptimal> {
        match self {
            LpOutcome::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpOutcome> {
    PresolvedLp::new(&problem.constraints).solve(problem.sense, &problem.objective)
}

/// Minimizes `obj` over `h`.
pub fn minimize(h: &HPolyhedron, obj: &[Rat]) -> Result<LpOutcome> {
    PresolvedLp::new(h).solve(Sense::Minimize, obj)
}

/// Any exact feasible point of `h`, or `None` if empty.
pub fn feasible_point(h: &HPolyhedron) -> Result<Option<Vec<Rat>>> {
    let zero = vec![Rat::zero(); h.dim()];
    Ok(match minimize(h, &zero)? {
        LpOutcome::Optimal(o) => Some(o.witness),
        LpOutcome::Unbounded { point, .. } => Some(point),
        LpOutcome::Infeasible { .. } => None,
    })
}

/// Outcome of checking `<a, x> >= rhs` over a polyhedron.
#[derive(Debug, Clone)]
pub enum RowValidity {
    /// Minimum of `<a, x>` is `min_value >= rhs`; dual multipliers certify it.
    Valid { min_value: Rat, dual: DualCertificate },
    /// A feasible point with `<a, x> < rhs`.
    ViolatedAt { point: Vec<Rat> },
    /// A recession ray with `<a, r> < 0`, so the row is violated arbitrarily far.
    ViolatedRay { point: Vec<Rat>, ray: Vec<Rat> },
    /// The polyhedron is empty; the row is vacuously valid.
    Vacuous { farkas: DualCertificate },
}

impl RowValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, RowValidity::Valid { .. } | RowValidity::Vacuous { .. })
    }
}

/// Checks validity of the inequality `row` over `h` by exact minimization.
pub fn ineq_row_valid(pre: &PresolvedLp, row: &Row) -> Result<RowValidity> {
    let obj = row.expr.to_dense(pre.dim());
    Ok(match pre.solve(Sense::Minimize, &obj)? {
        LpOutcome::Optimal(o) => {
            if o.value >= row.rhs {
                RowValidity::Valid { min_value: o.value, dual: o.dual }
            } else {
                RowValidity::ViolatedAt { point: o.witness }
            }
        }
        LpOutcome::Unbounded { point, ray } => RowValidity::ViolatedRay { point, ray },
        LpOutcome::Infeasible { farkas } => RowValidity::Vacuous { farkas },
    })
}

/// Checks validity of the equality `row` over `h` (both `>=` and `<=`).
pub fn eq_row_valid(pre: &PresolvedLp, row: &Row) -> Result<bool> {
    if !ineq_row_valid(pre, row)?.is_valid() {
        return Ok(false);
    }
    let neg = Row::new(row.expr.scaled(&-Rat::one()), -row.rhs.clone());
    Ok(ineq_row_valid(pre, &neg)?.is_valid())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowOrigin {
    Ineq(usize),
    Eq(usize),
    Appended(usize),
}

#[derive(Debug, Clone)]
struct PRow {
    expr: LinExpr,
    rhs: Rat,
    kind: RowKind,
    origin: RowOrigin,
    /// Multipliers of earlier pivot rows folded into this row, recorded only
    /// while the row is still a candidate pivot (equality rows).
    acc: Vec<(usize, Rat)>,
}

#[derive(Debug, Clone)]
struct Pivot {
    var: usize,
    coeff: Rat,
    expr: LinExpr,
    rhs: Rat,
    origin: RowOrigin,
    acc: Vec<(usize, Rat)>,
}

/// A constraint system with its presolve applied once, reusable across many
/// objective vectors and appended equality rows.
///
/// The first solve without appended rows caches the phase-1 feasible
/// tableau; later solves restart phase 2 from it with a fresh objective
/// row, since the constraint part of the tableau does not depend on the
/// objective.
#[derive(Debug)]
pub struct PresolvedLp {
    dim: usize,
    orig_ineqs: Vec<Row>,
    orig_eqs: Vec<Row>,
    nonneg: Vec<bool>,
    bound_row: Vec<Option<usize>>,
    eliminated: Vec<bool>,
    pivots: Vec<Pivot>,
    rows: Vec<PRow>,
    feasible_snapshot: std::sync::OnceLock<Snapshot>,
}

impl Clone for PresolvedLp {
    fn clone(&self) -> Self {
        PresolvedLp {
            dim: self.dim,
            orig_ineqs: self.orig_ineqs.clone(),
            orig_eqs: self.orig_eqs.clone(),
            nonneg: self.nonneg.clone(),
            bound_row: self.bound_row.clone(),
            eliminated: self.eliminated.clone(),
            pivots: self.pivots.clone(),
            rows: self.rows.clone(),
            feasible_snapshot: std::sync::OnceLock::new(),
        }
    }
}

impl PresolvedLp {
    pub fn new(h: &HPolyhedron) -> Self {
        let dim = h.dim();
        let mut nonneg = vec![false; dim];
        let mut bound_row = vec![None; dim];
        let mut rows: Vec<PRow> = Vec::new();

        for (idx, r) in h.ineqs().iter().enumerate() {
            let entries = r.expr.entries();
            if entries.len() == 1 && r.rhs.is_zero() && entries[0].1.is_positive() {
                let var = entries[0].0;
                nonneg[var] = true;
                bound_row[var] = Some(idx);
                continue;
            }
            rows.push(PRow {
                expr: r.expr.clone(),
                rhs: r.rhs.clone(),
                kind: RowKind::Ge,
                origin: RowOrigin::Ineq(idx),
                acc: Vec::new(),
            });
        }
        for (idx, r) in h.eqs().iter().enumerate() {
            rows.push(PRow {
                expr: r.expr.clone(),
                rhs: r.rhs.clone(),
                kind: RowKind::Eq,
                origin: RowOrigin::Eq(idx),
                acc: Vec::new(),
            });
        }

        let mut me = PresolvedLp {
            dim,
            orig_ineqs: h.ineqs().to_vec(),
            orig_eqs: h.eqs().to_vec(),
            nonneg,
            bound_row,
            eliminated: vec![false; dim],
            pivots: Vec::new(),
            rows: Vec::new(),
            feasible_snapshot: std::sync::OnceLock::new(),
        };
        me.eliminate_free_vars(rows);
        me
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn eliminate_free_vars(&mut self, mut rows: Vec<PRow>) {
        let mut live: Vec<bool> = vec![true; rows.len()];
        loop {
            // Next pivot: first live equality row containing a free variable.
            let mut found = None;
            'scan: for (i, row) in rows.iter().enumerate() {
                if !live[i] || row.kind != RowKind::Eq {
                    continue;
                }
                for (v, _) in row.expr.entries() {
                    if !self.nonneg[*v] && !self.eliminated[*v] {
                        found = Some((i, *v));
                        break 'scan;
                    }
                }
            }
            let Some((pi, var)) = found else { break };
            live[pi] = false;
            let pivot_row = rows[pi].clone();
            let coeff = pivot_row.expr.coeff(var);
            let pivot_idx = self.pivots.len();
            self.eliminated[var] = true;

            for (i, row) in rows.iter_mut().enumerate() {
                if !live[i] {
                    continue;
                }
                let c = row.expr.coeff(var);
                if c.is_zero() {
                    continue;
                }
                let factor = -(c / &coeff);
                row.expr = row.expr.axpy(&factor, &pivot_row.expr);
                row.rhs = &row.rhs + &factor * &pivot_row.rhs;
                if row.kind == RowKind::Eq {
                    row.acc.push((pivot_idx, factor));
                }
            }
            self.pivots.push(Pivot {
                var,
                coeff,
                expr: pivot_row.expr,
                rhs: pivot_row.rhs,
                origin: pivot_row.origin,
                acc: pivot_row.acc,
            });
        }

        for (i, row) in rows.into_iter().enumerate() {
            if !live[i] {
                continue;
            }
            // Trivially satisfied residual rows carry multiplier zero.
            if row.expr.is_zero() {
                let redundant = match row.kind {
                    RowKind::Ge => !row.rhs.is_positive(),
                    RowKind::Eq => row.rhs.is_zero(),
                };
                if redundant {
                    continue;
                }
            }
            self.rows.push(row);
        }
    }

    /// Reduces a row through the recorded pivots (for appended equalities
    /// and objectives).
    fn reduce_expr(&self, expr: &LinExpr, rhs: &Rat) -> (LinExpr, Rat) {
        let mut e = expr.clone();
        let mut r = rhs.clone();
        for p in &self.pivots {
            let c = e.coeff(p.var);
            if c.is_zero() {
                continue;
            }
            let factor = -(c / &p.coeff);
            e = e.axpy(&factor, &p.expr);
            r = &r + &factor * &p.rhs;
        }
        (e, r)
    }

    pub fn solve(&self, sense: Sense, objective: &[Rat]) -> Result<LpOutcome> {
        self.solve_with_appended_eqs(&[], sense, objective)
    }

    /// Solves with extra equality rows appended to the system. The appended
    /// rows participate in certificates via `DualCertificate::appended`.
    pub fn solve_with_appended_eqs(
        &self,
        appended: &[Row],
        sense: Sense,
        objective: &[Rat],
    ) -> Result<LpOutcome> {
        if objective.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "objective has dimension {}, constraints {}",
                objective.len(),
                self.dim
            )));
        }
        for r in appended {
            if let Some(m) = r.expr.max_coord() {
                if m >= self.dim {
                    return Err(Error::DimensionMismatch(format!(
                        "appended row touches coordinate {m}, dimension is {}",
                        self.dim
                    )));
                }
            }
        }

        let minimized: Vec<Rat> = match sense {
            Sense::Minimize => objective.to_vec(),
            Sense::Maximize => objective.iter().map(|c| -c.clone()).collect(),
        };

        let outcome = self.solve_minimize(appended, &minimized)?;
        Ok(match (sense, outcome) {
            (Sense::Minimize, out) => out,
            (Sense::Maximize, LpOutcome::Optimal(o)) => LpOutcome::Optimal(LpOptimal {
                value: -o.value,
                witness: o.witness,
                dual: DualCertificate {
                    ineq: o.dual.ineq.iter().map(|y| -y.clone()).collect(),
                    eq: o.dual.eq.iter().map(|y| -y.clone()).collect(),
                    appended: o.dual.appended.iter().map(|y| -y.clone()).collect(),
                },
            }),
            (Sense::Maximize, other) => other,
        })
    }

    fn solve_minimize(&self, appended: &[Row], c: &[Rat]) -> Result<LpOutcome> {
        // Reduce objective and appended rows through the pivots.
        let obj_expr = LinExpr::from_dense(c);
        let (red_obj, neg_const) = self.reduce_expr(&obj_expr, &Rat::zero());
        // reduce_expr treats (expr, rhs) as a row `expr = rhs`; for the
        // objective c.x = c_red.x + const we need const = -reduced rhs.
        let obj_const = -neg_const;

        let mut tab_rows: Vec<PRow> = self.rows.clone();
        for (i, r) in appended.iter().enumerate() {
            let (e, rhs) = self.reduce_expr(&r.expr, &r.rhs);
            if e.is_zero() && rhs.is_zero() {
                continue;
            }
            tab_rows.push(PRow {
                expr: e,
                rhs,
                kind: RowKind::Eq,
                origin: RowOrigin::Appended(i),
                acc: Vec::new(),
            });
        }

        let cacheable = appended.is_empty();
        let mut tableau = match self.feasible_snapshot.get().filter(|_| cacheable) {
            Some(snapshot) => Tableau::from_snapshot(snapshot, self, &red_obj),
            None => {
                let mut t = Tableau::assemble(self, &tab_rows, &red_obj);
                let phase1 = t.run_phase1();
                if phase1.is_positive() {
                    let farkas = self.recover_duals(appended, &tab_rows, &t, &[], true)?;
                    return Ok(LpOutcome::Infeasible { farkas });
                }
                t.drive_out_artificials();
                if cacheable {
                    let _ = self.feasible_snapshot.set(t.snapshot());
                }
                t.reset_objective_row(false);
                t
            }
        };
        match tableau.run_phase2_from_feasible() {
            Phase2::Optimal => {
                let witness = self.recover_witness(&tableau, appended)?;
                let value = crate::num::dot(c, &witness);
                debug_assert_eq!(value, tableau.objective_value() + &obj_const);
                let dual = self.recover_duals(appended, &tab_rows, &tableau, c, false)?;
                self.check_optimal_certificates(appended, c, &witness, &value, &dual)?;
                Ok(LpOutcome::Optimal(LpOptimal { value, witness, dual }))
            }
            Phase2::Unbounded { entering } => {
                let point = self.recover_witness(&tableau, appended)?;
                let ray = self.recover_ray(&tableau, entering)?;
                let along = crate::num::dot(c, &ray);
                assert!(along.is_negative(), "unbounded ray must improve the objective");
                Ok(LpOutcome::Unbounded { point, ray })
            }
        }
    }

    /// Values of all original variables from the tableau solution.
    fn recover_witness(&self, tab: &Tableau, _appended: &[Row]) -> Result<Vec<Rat>> {
        let mut x = vec![Rat::zero(); self.dim];
        for (var, val) in tab.variable_values() {
            x[var] = val;
        }
        // Back-substitute eliminated variables in reverse elimination order.
        for p in self.pivots.iter().rev() {
            let mut rest = Rat::zero();
            for (v, cf) in p.expr.entries() {
                if *v != p.var && !x[*v].is_zero() {
                    rest += cf * &x[*v];
                }
            }
            x[p.var] = (&p.rhs - rest) / &p.coeff;
        }
        Ok(x)
    }

    fn recover_ray(&self, tab: &Tableau, entering: usize) -> Result<Vec<Rat>> {
        let mut x = vec![Rat::zero(); self.dim];
        for (var, val) in tab.ray_values(entering) {
            x[var] = val;
        }
        for p in self.pivots.iter().rev() {
            let mut rest = Rat::zero();
            for (v, cf) in p.expr.entries() {
                if *v != p.var && !x[*v].is_zero() {
                    rest += cf * &x[*v];
                }
            }
            // Homogeneous back-substitution: rays ignore right-hand sides.
            x[p.var] = -rest / &p.coeff;
        }
        Ok(x)
    }

    /// Maps tableau duals back to multipliers on the original rows. With
    /// `farkas` set, the target combination is the zero objective.
    fn recover_duals(
        &self,
        appended: &[Row],
        tab_rows: &[PRow],
        tab: &Tableau,
        c: &[Rat],
        farkas: bool,
    ) -> Result<DualCertificate> {
        let y_rows = tab.row_duals(farkas);
        let mut dual = DualCertificate {
            ineq: vec![Rat::zero(); self.orig_ineqs.len()],
            eq: vec![Rat::zero(); self.orig_eqs.len()],
            appended: vec![Rat::zero(); appended.len()],
        };
        // Residual of the target combination over original coordinates.
        let mut rho: Vec<Rat> = if farkas {
            vec![Rat::zero(); self.dim]
        } else {
            c.to_vec()
        };
        let mut rhs_sum = Rat::zero();
        for (row, y) in tab_rows.iter().zip(y_rows.iter()) {
            if y.is_zero() {
                continue;
            }
            let (orig_expr, orig_rhs) = match row.origin {
                RowOrigin::Ineq(i) => (&self.orig_ineqs[i].expr, &self.orig_ineqs[i].rhs),
                RowOrigin::Eq(i) => (&self.orig_eqs[i].expr, &self.orig_eqs[i].rhs),
                RowOrigin::Appended(i) => (&appended[i].expr, &appended[i].rhs),
            };
            for (v, cf) in orig_expr.entries() {
                rho[*v] -= y * cf;
            }
            rhs_sum += y * orig_rhs;
            match row.origin {
                RowOrigin::Ineq(i) => dual.ineq[i] = y.clone(),
                RowOrigin::Eq(i) => dual.eq[i] = y.clone(),
                RowOrigin::Appended(i) => dual.appended[i] = y.clone(),
            }
        }

        // Forward-triangular solve for the pivot-row multipliers, then expand
        // the reduced pivot rows back to the original equality rows they came
        // from.
        let m = self.pivots.len();
        let mut w = vec![Rat::zero(); m];
        for (k, p) in self.pivots.iter().enumerate() {
            let wk = &rho[p.var] / &p.coeff;
            if !wk.is_zero() {
                for (v, cf) in p.expr.entries() {
                    rho[*v] -= &wk * cf;
                }
            }
            w[k] = wk;
        }
        for k in (0..m).rev() {
            let wk = w[k].clone();
            if wk.is_zero() {
                continue;
            }
            for (i, delta) in &self.pivots[k].acc {
                w[*i] += &wk * delta;
            }
            let p = &self.pivots[k];
            match p.origin {
                RowOrigin::Eq(i) => {
                    dual.eq[i] = wk.clone();
                    rhs_sum += &wk * &self.orig_eqs[i].rhs;
                }
                _ => unreachable!("pivot rows come from equality rows"),
            }
        }

        // Remaining residual feeds the nonnegativity bound rows.
        #[allow(clippy::needless_range_loop)]
        for v in 0..self.dim {
            if rho[v].is_zero() {
                continue;
            }
            let Some(bound_idx) = self.bound_row[v] else {
                panic!("dual residual {} on unbounded variable {v}", rho[v]);
            };
            assert!(
                !rho[v].is_negative(),
                "negative dual residual on nonnegative variable {v}"
            );
            dual.ineq[bound_idx] = rho[v].clone();
        }
        if farkas {
            assert!(rhs_sum.is_positive(), "Farkas certificate must have positive rhs combination");
        }
        Ok(dual)
    }

    fn check_optimal_certificates(
        &self,
        appended: &[Row],
        c: &[Rat],
        witness: &[Rat],
        value: &Rat,
        dual: &DualCertificate,
    ) -> Result<()> {
        let mut rhs_sum = Rat::zero();
        for (y, r) in dual.ineq.iter().zip(self.orig_ineqs.iter()) {
            assert!(!y.is_negative(), "inequality multiplier must be nonnegative");
            rhs_sum += y * &r.rhs;
        }
        for (y, r) in dual.eq.iter().zip(self.orig_eqs.iter()) {
            rhs_sum += y * &r.rhs;
        }
        for (y, r) in dual.appended.iter().zip(appended.iter()) {
            rhs_sum += y * &r.rhs;
        }
        assert_eq!(&rhs_sum, value, "dual objective must match primal value");
        for (i, r) in self.orig_ineqs.iter().enumerate() {
            assert!(
                !r.slack(witness).is_negative(),
                "witness violates inequality row {i}"
            );
        }
        for (i, r) in self.orig_eqs.iter().enumerate() {
            assert!(r.slack(witness).is_zero(), "witness violates equality row {i}");
        }
        for (i, r) in appended.iter().enumerate() {
            assert!(r.slack(witness).is_zero(), "witness violates appended row {i}");
        }
        let _ = c;
        Ok(())
    }
}

enum Phase2 {
    Optimal,
    Unbounded { entering: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    /// Column of an original variable; `neg` marks the negative half of a
    /// split free variable.
    Var { var: usize, neg: bool },
    Slack,
    Artificial { row: usize },
}

/// Objective-independent part of a feasible tableau, cached after phase 1.
#[derive(Debug, Clone)]
struct Snapshot {
    ncols: usize,
    cols: Vec<ColKind>,
    col_of_var: Vec<Option<usize>>,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    row_back: Vec<Rat>,
    art_col_of_row: Vec<usize>,
    dead_rows: Vec<bool>,
}

/// Dense two-phase simplex tableau. Artificial columns are retained through
/// phase 2 (barred from entering) so row duals can be read off the objective
/// row directly.
struct Tableau {
    ncols: usize,
    cols: Vec<ColKind>,
    col_of_var: Vec<Option<usize>>,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    obj: Vec<Rat>,
    obj_value: Rat,
    costs: Vec<Rat>,
    /// Per tableau row: multiplier mapping a standard-form dual back to the
    /// reduced row (sign flip times primitive scale).
    row_back: Vec<Rat>,
    art_col_of_row: Vec<usize>,
    in_phase_one: bool,
    dead_rows: Vec<bool>,
}

const DEGENERATE_STREAK_LIMIT: u32 = 40;
const PIVOT_CAP: u64 = 2_000_000;

impl Tableau {
    fn assemble(pre: &PresolvedLp, rows: &[PRow], red_obj: &LinExpr) -> Tableau {
        // Column layout: one column per surviving nonnegative variable, two
        // per surviving free variable, then slacks, then artificials. Every
        // non-eliminated variable gets a column, so the layout does not
        // depend on the objective and feasible tableaus can be reused.
        let mut cols: Vec<ColKind> = Vec::new();
        let mut col_of_var: Vec<Option<usize>> = vec![None; pre.dim];
        #[allow(clippy::needless_range_loop)]
        for v in 0..pre.dim {
            if pre.eliminated[v] {
                continue;
            }
            col_of_var[v] = Some(cols.len());
            cols.push(ColKind::Var { var: v, neg: false });
            if !pre.nonneg[v] {
                cols.push(ColKind::Var { var: v, neg: true });
            }
        }
        let nslack: usize = rows.iter().filter(|r| r.kind == RowKind::Ge).count();
        let nart = rows.len();
        let first_slack = cols.len();
        for _ in 0..nslack {
            cols.push(ColKind::Slack);
        }
        let first_art = cols.len();
        for r in 0..nart {
            cols.push(ColKind::Artificial { row: r });
        }
        let ncols = cols.len();

        let mut trows: Vec<Vec<Rat>> = Vec::with_capacity(rows.len());
        let mut rhs: Vec<Rat> = Vec::with_capacity(rows.len());
        let mut row_back: Vec<Rat> = Vec::with_capacity(rows.len());
        let mut art_col_of_row = Vec::with_capacity(rows.len());
        let mut slack_cursor = first_slack;
        for (ri, row) in rows.iter().enumerate() {
            let scale = crate::num::primitive_positive_scale(
                row.expr.entries().iter().map(|(_, c)| c).chain(std::iter::once(&row.rhs)),
            );
            let mut dense = vec![Rat::zero(); ncols];
            for (v, cf) in row.expr.entries() {
                let base = col_of_var[*v].expect("referenced variable has a column");
                let scaled = cf * &scale;
                dense[base] = scaled.clone();
                if !pre.nonneg[*v] {
                    dense[base + 1] = -scaled;
                }
            }
            let mut b = &row.rhs * &scale;
            if row.kind == RowKind::Ge {
                dense[slack_cursor] = -Rat::one();
                slack_cursor += 1;
            }
            let flip = b.is_negative();
            if flip {
                for x in dense.iter_mut() {
                    if !x.is_zero() {
                        *x = -x.clone();
                    }
                }
                b = -b;
            }
            let art = first_art + ri;
            dense[art] = Rat::one();
            row_back.push(if flip { -scale } else { scale });
            art_col_of_row.push(art);
            trows.push(dense);
            rhs.push(b);
        }

        // Phase-2 costs per column from the reduced objective.
        let mut costs = vec![Rat::zero(); ncols];
        for (v, cf) in red_obj.entries() {
            if let Some(base) = col_of_var[*v] {
                costs[base] = cf.clone();
                if !pre.nonneg[*v] {
                    costs[base + 1] = -cf.clone();
                }
            }
        }

        let basis: Vec<usize> = art_col_of_row.clone();
        let nrows = trows.len();
        let mut t = Tableau {
            ncols,
            cols,
            col_of_var,
            rows: trows,
            rhs,
            basis,
            obj: vec![Rat::zero(); ncols],
            obj_value: Rat::zero(),
            costs,
            row_back,
            art_col_of_row,
            in_phase_one: true,
            dead_rows: vec![false; nrows],
        };
        t.reset_objective_row(true);
        t
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            ncols: self.ncols,
            cols: self.cols.clone(),
            col_of_var: self.col_of_var.clone(),
            rows: self.rows.clone(),
            rhs: self.rhs.clone(),
            basis: self.basis.clone(),
            row_back: self.row_back.clone(),
            art_col_of_row: self.art_col_of_row.clone(),
            dead_rows: self.dead_rows.clone(),
        }
    }

    /// Rebuilds a phase-2-ready tableau from a cached feasible snapshot with
    /// a fresh objective.
    fn from_snapshot(s: &Snapshot, pre: &PresolvedLp, red_obj: &LinExpr) -> Tableau {
        let mut costs = vec![Rat::zero(); s.ncols];
        for (v, cf) in red_obj.entries() {
            if let Some(base) = s.col_of_var[*v] {
                costs[base] = cf.clone();
                if !pre.nonneg[*v] {
                    costs[base + 1] = -cf.clone();
                }
            }
        }
        let mut t = Tableau {
            ncols: s.ncols,
            cols: s.cols.clone(),
            col_of_var: s.col_of_var.clone(),
            rows: s.rows.clone(),
            rhs: s.rhs.clone(),
            basis: s.basis.clone(),
            obj: vec![Rat::zero(); s.ncols],
            obj_value: Rat::zero(),
            costs,
            row_back: s.row_back.clone(),
            art_col_of_row: s.art_col_of_row.clone(),
            in_phase_one: false,
            dead_rows: s.dead_rows.clone(),
        };
        t.reset_objective_row(false);
        t
    }

    /// Rebuilds reduced costs `c_j - c_B^T B^{-1} A_j` from scratch.
    fn reset_objective_row(&mut self, phase1: bool) {
        self.in_phase_one = phase1;
        let cost_of = |t: &Tableau, col: usize| -> Rat {
            if phase1 {
                match t.cols[col] {
                    ColKind::Artificial { .. } => Rat::one(),
                    _ => Rat::zero(),
                }
            } else {
                t.costs[col].clone()
            }
        };
        let mut obj = vec![Rat::zero(); self.ncols];
        for (j, o) in obj.iter_mut().enumerate() {
            *o = cost_of(self, j);
        }
        let mut value = Rat::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost_of(self, self.basis[i]);
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    obj[j] -= &cb * a;
                }
            }
            value += &cb * &self.rhs[i];
        }
        self.obj = obj;
        self.obj_value = value;
    }

    fn objective_value(&self) -> Rat {
        self.obj_value.clone()
    }

    fn allowed_entering(&self, col: usize) -> bool {
        !matches!(self.cols[col], ColKind::Artificial { .. })
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        debug_assert!(!p.is_zero());
        if p != Rat::one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x / &p;
                }
            }
            self.rhs[r] = &self.rhs[r] / &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, pr) in self.rows[i].iter_mut().zip(pivot_row.iter()) {
                if !pr.is_zero() {
                    *x = &*x - &f * pr;
                }
            }
            self.rhs[i] = &self.rhs[i] - &f * &pivot_rhs;
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for (x, pr) in self.obj.iter_mut().zip(pivot_row.iter()) {
                if !pr.is_zero() {
                    *x = &*x - &f * pr;
                }
            }
            // Objective changes by (reduced cost) * (entering step).
            self.obj_value = &self.obj_value + &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Runs the simplex loop on the current objective row. Returns the
    /// entering column on unboundedness.
    fn optimize(&mut self) -> Option<usize> {
        let mut bland = false;
        let mut degenerate_streak: u32 = 0;
        let mut pivots: u64 = 0;
        loop {
            pivots += 1;
            assert!(pivots < PIVOT_CAP, "simplex exceeded pivot cap");
            let entering = if bland {
                (0..self.ncols)
                    .find(|&j| self.allowed_entering(j) && self.obj[j].is_negative())
            } else {
                let mut best: Option<(usize, &Rat)> = None;
                for j in 0..self.ncols {
                    if !self.allowed_entering(j) || !self.obj[j].is_negative() {
                        continue;
                    }
                    match best {
                        Some((_, b)) if &self.obj[j] >= b => {}
                        _ => best = Some((j, &self.obj[j])),
                    }
                }
                best.map(|(j, _)| j)
            };
            let col = entering?;

            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if self.dead_rows[i] {
                    continue;
                }
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr
                            || (ratio == *lr
                                && if bland {
                                    self.basis[i] < self.basis[*li]
                                } else {
                                    i < *li
                                })
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, ratio)) = leave else {
                return Some(col);
            };

            if ratio.is_zero() {
                degenerate_streak += 1;
                if degenerate_streak >= DEGENERATE_STREAK_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
                bland = false;
            }
            self.pivot(row, col);
        }
    }

    /// Phase 1: minimize the artificial sum. Returns the residual value.
    fn run_phase1(&mut self) -> Rat {
        let unbounded = self.optimize();
        assert!(unbounded.is_none(), "phase 1 objective is bounded below by zero");
        self.objective_value()
    }

    /// After a feasible phase 1: swap basic artificials for real columns
    /// where possible; rows with no real support are dead (redundant).
    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if !matches!(self.cols[self.basis[i]], ColKind::Artificial { .. }) {
                continue;
            }
            let target = (0..self.ncols)
                .find(|&j| self.allowed_entering(j) && !self.rows[i][j].is_zero());
            match target {
                Some(j) => self.pivot(i, j),
                None => self.dead_rows[i] = true,
            }
        }
    }

    /// Phase 2 from an already feasible basis with phase-2 costs loaded.
    fn run_phase2_from_feasible(&mut self) -> Phase2 {
        match self.optimize() {
            None => Phase2::Optimal,
            Some(entering) => Phase2::Unbounded { entering },
        }
    }

    /// Current values of original (surviving) variables.
    fn variable_values(&self) -> Vec<(usize, Rat)> {
        let mut vals: Vec<(usize, Rat)> = Vec::new();
        let mut acc: std::collections::BTreeMap<usize, Rat> = std::collections::BTreeMap::new();
        for (i, &b) in self.basis.iter().enumerate() {
            if let ColKind::Var { var, neg } = self.cols[b] {
                let v = if neg { -self.rhs[i].clone() } else { self.rhs[i].clone() };
                *acc.entry(var).or_insert_with(Rat::zero) += v;
            }
        }
        for (var, v) in acc {
            vals.push((var, v));
        }
        vals
    }

    /// Recession direction induced by letting `entering` grow.
    fn ray_values(&self, entering: usize) -> Vec<(usize, Rat)> {
        let mut acc: std::collections::BTreeMap<usize, Rat> = std::collections::BTreeMap::new();
        if let ColKind::Var { var, neg } = self.cols[entering] {
            *acc.entry(var).or_insert_with(Rat::zero) += if neg { -Rat::one() } else { Rat::one() };
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if let ColKind::Var { var, neg } = self.cols[b] {
                let delta = -self.rows[i][entering].clone();
                if delta.is_zero() {
                    continue;
                }
                *acc.entry(var).or_insert_with(Rat::zero) += if neg { -delta } else { delta };
            }
        }
        acc.into_iter().collect()
    }

    /// Duals on the reduced rows, read from the artificial columns of the
    /// objective row.
    fn row_duals(&self, farkas: bool) -> Vec<Rat> {
        let mut y = Vec::with_capacity(self.rows.len());
        for r in 0..self.rows.len() {
            let cbar = &self.obj[self.art_col_of_row[r]];
            // Artificial cost is 1 in phase one, 0 in phase two.
            let y_std = if farkas {
                assert!(self.in_phase_one);
                Rat::one() - cbar
            } else {
                assert!(!self.in_phase_one);
                -cbar.clone()
            };
            y.push(y_std * &self.row_back[r]);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};
    use crate::poly::{HPolyhedron, Row};

    fn h(dim: usize, ineqs: Vec<(Vec<i64>, i64)>, eqs: Vec<(Vec<i64>, i64)>) -> HPolyhedron {
        let conv = |rows: Vec<(Vec<i64>, i64)>| {
            rows.into_iter()
                .map(|(cs, b)| {
                    let dense: Vec<Rat> = cs.into_iter().map(rat).collect();
                    Row::from_dense(&dense, rat(b))
                })
                .collect::<Vec<_>>()
        };
        HPolyhedron::new(dim, conv(ineqs), conv(eqs)).unwrap()
    }

    fn ratv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn blocking_simplex_unit_example() {
        // minimize x1 + x2 over { x >= 0, x1 + x2 >= 1 }
        let p = h(2, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![1, 1], 1)], vec![]);
        let out = minimize(&p, &ratv(&[1, 1])).unwrap();
        let o = out.optimal().expect("optimal");
        assert_eq!(o.value, rat(1));
        assert_eq!(o.witness.iter().cloned().sum::<Rat>(), rat(1));
        // Dual certificate: y on (x1+x2 >= 1) is 1, combination matches.
        assert_eq!(o.dual.ineq[2], rat(1));
    }

    #[test]
    fn contradictory_bounds_are_infeasible_with_farkas() {
        // x1 >= 1 and -x1 >= 0 (i.e. x1 <= 0)
        let p = h(1, vec![(vec![1], 1), (vec![-1], 0)], vec![]);
        match minimize(&p, &ratv(&[1])).unwrap() {
            LpOutcome::Infeasible { farkas } => {
                // Verify the Farkas combination by hand: sum y_r a_r = 0 and
                // sum y_r b_r > 0.
                let mut coeff = Rat::zero();
                let mut rhs = Rat::zero();
                for (y, r) in farkas.ineq.iter().zip(p.ineqs().iter()) {
                    assert!(!y.is_negative());
                    coeff += y * &r.expr.coeff(0);
                    rhs += y * &r.rhs;
                }
                assert!(coeff.is_zero());
                assert!(rhs.is_positive());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn open_half_line_is_unbounded() {
        let p = h(1, vec![(vec![1], 0)], vec![]);
        match minimize(&p, &ratv(&[-1])).unwrap() {
            LpOutcome::Unbounded { point, ray } => {
                assert!(p.contains(&point).is_ok());
                assert_eq!(ray, ratv(&[1]));
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn equality_presolve_and_witness_recovery() {
        // x1 + x2 = 3, x2 - x3 = 1, x3 >= 0; minimize x1.
        // Substituting: x1 = 3 - x2 = 2 - x3, so infimum over x3 >= 0 is
        // unbounded below? No: x1 = 2 - x3 decreases with x3; x3 unbounded
        // above, so the LP is unbounded.
        let p = h(
            3,
            vec![(vec![0, 0, 1], 0)],
            vec![(vec![1, 1, 0], 3), (vec![0, 1, -1], 1)],
        );
        match minimize(&p, &ratv(&[1, 0, 0])).unwrap() {
            LpOutcome::Unbounded { point, ray } => {
                assert!(p.contains(&point).is_ok());
                assert!(p.recession_contains(&ray));
                assert!(crate::num::dot(&ratv(&[1, 0, 0]), &ray).is_negative());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }

        // Same system, minimize -x1: optimum at x3 = 0, x1 = 2.
        let out = minimize(&p, &ratv(&[-1, 0, 0])).unwrap();
        let o = out.optimal().expect("optimal");
        assert_eq!(o.value, rat(-2));
        assert_eq!(o.witness, ratv(&[2, 1, 0]));
        // Dual multipliers on the two equality rows participate.
        let dual_rhs: Rat = o.dual.eq[0].clone() * rat(3)
            + o.dual.eq[1].clone() * rat(1)
            + o.dual.ineq[0].clone() * rat(0);
        assert_eq!(dual_rhs, rat(-2));
    }

    #[test]
    fn maximize_sense() {
        let p = h(2, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], -1)], vec![]);
        let problem = LpProblem {
            sense: Sense::Maximize,
            objective: ratv(&[1, 2]),
            constraints: p,
        };
        let out = solve_lp(&problem).unwrap();
        let o = out.optimal().expect("optimal");
        assert_eq!(o.value, rat(2));
        assert_eq!(o.witness, ratv(&[0, 1]));
        // Maximize duals: inequality multipliers <= 0, combination matches c.
        for y in &o.dual.ineq {
            assert!(!y.is_positive());
        }
    }

    #[test]
    fn degenerate_lp_terminates() {
        // Many redundant rows through the same vertex.
        let p = h(
            2,
            vec![
                (vec![1, 0], 0),
                (vec![0, 1], 0),
                (vec![1, 1], 0),
                (vec![1, 2], 0),
                (vec![2, 1], 0),
                (vec![-1, -1], -10),
            ],
            vec![],
        );
        let out = minimize(&p, &ratv(&[1, 1])).unwrap();
        assert_eq!(out.optimal().unwrap().value, rat(0));
    }

    #[test]
    fn appended_equalities() {
        let p = h(2, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![1, 1], 1)], vec![]);
        let pre = PresolvedLp::new(&p);
        let extra = vec![Row::from_dense(&ratv(&[1, 0]), frac(1, 3))];
        let out = pre
            .solve_with_appended_eqs(&extra, Sense::Minimize, &ratv(&[0, 1]))
            .unwrap();
        let o = out.optimal().expect("optimal");
        assert_eq!(o.value, frac(2, 3));
        assert_eq!(o.witness, vec![frac(1, 3), frac(2, 3)]);
        assert_eq!(o.dual.appended.len(), 1);
    }

    #[test]
    fn free_variable_objective_is_unbounded() {
        let p = HPolyhedron::free_space(2);
        match minimize(&p, &ratv(&[0, 1])).unwrap() {
            LpOutcome::Unbounded { ray, .. } => {
                assert!(crate::num::dot(&ratv(&[0, 1]), &ray).is_negative());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
        // Zero objective over free space: optimal value 0.
        let out = minimize(&p, &ratv(&[0, 0])).unwrap();
        assert_eq!(out.optimal().unwrap().value, rat(0));
    }

    #[test]
    fn row_validity_checks() {
        let p = h(2, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![1, 1], 1)], vec![]);
        let pre = PresolvedLp::new(&p);
        assert!(ineq_row_valid(&pre, &Row::from_dense(&ratv(&[2, 2]), rat(2)))
            .unwrap()
            .is_valid());
        match ineq_row_valid(&pre, &Row::from_dense(&ratv(&[1, 0]), rat(1))).unwrap() {
            RowValidity::ViolatedAt { point } => {
                assert!(p.contains(&point).is_ok());
                assert!(point[0] < rat(1));
            }
            other => panic!("expected violation, got {other:?}"),
        }
        match ineq_row_valid(&pre, &Row::from_dense(&ratv(&[-1, 0]), rat(-10))).unwrap() {
            RowValidity::ViolatedRay { point, ray } => {
                assert!(p.contains(&point).is_ok());
                assert!(p.recession_contains(&ray));
            }
            other => panic!("expected ray violation, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_outputs() {
        let p = h(
            3,
            vec![
                (vec![1, 0, 0], 0),
                (vec![0, 1, 0], 0),
                (vec![0, 0, 1], 0),
                (vec![1, 1, 1], 2),
                (vec![1, 2, 3], 3),
            ],
            vec![],
        );
        let a = minimize(&p, &ratv(&[3, 1, 4])).unwrap();
        let b = minimize(&p, &ratv(&[3, 1, 4])).unwrap();
        match (a, b) {
            (LpOutcome::Optimal(x), LpOutcome::Optimal(y)) => {
                assert_eq!(x.value, y.value);
                assert_eq!(x.witness, y.witness);
                assert_eq!(x.dual, y.dual);
            }
            _ => panic!("expected optimal"),
        }
    }
}
