//! An exact linear-program solver over arbitrary-precision rationals.
//!
//! The weight optimization behind a combined witness is a small min–max
//! problem with one constraint per maximal independent set, and its
//! published solutions are exact integer ratios. Solving the LP in
//! `BigRational` arithmetic recovers those ratios identically instead of
//! as floating-point approximations, and Bland's anti-cycling rule makes
//! termination unconditional. Problem sizes here are tiny (tens of
//! variables and constraints), so a dense two-phase tableau is the
//! simplest correct tool.

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};

/// Constraint sense for [`Constraint`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// coeffs · x ≤ rhs
    Le,
    /// coeffs · x = rhs
    Eq,
    /// coeffs · x ≥ rhs
    Ge,
}

/// One linear constraint over the decision variables (all x ≥ 0).
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// Result of an LP solve.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// An optimal vertex with its objective value.
    Optimal { x: Vec<Rat>, objective: Rat },
    /// No point satisfies the constraints.
    Infeasible,
    /// The objective decreases without bound.
    Unbounded,
}

/// Minimizes `objective · x` over x ≥ 0 subject to `constraints`,
/// exactly, via two-phase simplex with Bland's rule.
pub fn solve_lp(objective: &[Rat], constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = objective.len();
    if n == 0 {
        return Err(Error::Argument("LP needs at least one variable".into()));
    }
    for (i, c) in constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(Error::Dimension(format!(
                "constraint {i} has {} coefficients for {n} variables",
                c.coeffs.len()
            )));
        }
    }

    let zero = rat_int(0);
    let one = rat_int(1);
    let m = constraints.len();

    // Normalize to equalities with b ≥ 0: flip rows with negative rhs,
    // then append one slack (Le), surplus (Ge), or nothing (Eq), plus an
    // artificial variable for rows lacking an obvious basic column.
    //
    // Column layout: [decision 0..n | slack/surplus | artificial].
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut senses: Vec<Relation> = Vec::with_capacity(m);
    for c in constraints {
        let mut coeffs = c.coeffs.clone();
        let mut b = c.rhs.clone();
        let mut sense = c.relation;
        if b < zero {
            for a in &mut coeffs {
                *a = -a.clone();
            }
            b = -b;
            sense = match sense {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push(coeffs);
        rhs.push(b);
        senses.push(sense);
    }

    let slack_count = senses.iter().filter(|s| **s != Relation::Eq).count();
    // Rows that get an artificial: Eq rows and Ge rows (their surplus
    // column is −1, unusable as a basis column).
    let artificial_count = senses.iter().filter(|s| **s != Relation::Le).count();
    let total = n + slack_count + artificial_count;

    let mut tableau: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.resize(total, zero.clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = vec![usize::MAX; m];
    let mut slack_col = n;
    let mut art_col = n + slack_count;
    let art_start = n + slack_count;
    for (i, sense) in senses.iter().enumerate() {
        match sense {
            Relation::Le => {
                tableau[i][slack_col] = one.clone();
                basis[i] = slack_col;
                slack_col += 1;
            }
            Relation::Ge => {
                tableau[i][slack_col] = -one.clone();
                slack_col += 1;
                tableau[i][art_col] = one.clone();
                basis[i] = art_col;
                art_col += 1;
            }
            Relation::Eq => {
                tableau[i][art_col] = one.clone();
                basis[i] = art_col;
                art_col += 1;
            }
        }
    }

    // Phase 1: minimize the sum of artificials.
    if artificial_count > 0 {
        let mut cost = vec![zero.clone(); total];
        for c in cost.iter_mut().skip(art_start) {
            *c = one.clone();
        }
        let value = run_simplex(&mut tableau, &mut rhs, &mut basis, &cost)?
            .ok_or_else(|| Error::Construction("phase-1 LP is never unbounded".into()))?;
        if value != zero {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot any artificial still in the basis out (degenerate rows),
        // or drop rows that are identically zero.
        for i in 0..m {
            if basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| tableau[i][j] != zero) {
                    pivot(&mut tableau, &mut rhs, &mut basis, i, j);
                } else {
                    // Redundant constraint; neutralize the row.
                    for v in tableau[i].iter_mut() {
                        *v = zero.clone();
                    }
                    rhs[i] = zero.clone();
                    basis[i] = usize::MAX;
                }
            }
        }
        // Remove artificial columns.
        for row in tableau.iter_mut() {
            row.truncate(art_start);
        }
    }

    // Phase 2: the real objective.
    let mut cost = objective.to_vec();
    cost.resize(tableau.first().map_or(n, Vec::len), zero.clone());
    match run_simplex(&mut tableau, &mut rhs, &mut basis, &cost)? {
        None => Ok(LpOutcome::Unbounded),
        Some(objective_value) => {
            let mut x = vec![zero.clone(); n];
            for (i, &b) in basis.iter().enumerate() {
                if b != usize::MAX && b < n {
                    x[b] = rhs[i].clone();
                }
            }
            Ok(LpOutcome::Optimal { x, objective: objective_value })
        }
    }
}

/// Runs simplex iterations to optimality. Returns `Some(objective)` at an
/// optimum and `None` when unbounded.
fn run_simplex(
    tableau: &mut [Vec<Rat>],
    rhs: &mut [Rat],
    basis: &mut [usize],
    cost: &[Rat],
) -> Result<Option<Rat>> {
    let zero = rat_int(0);
    let m = tableau.len();
    let total = cost.len();
    loop {
        // Reduced costs r_j = c_j − c_B · column_j for the current basis.
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j].clone();
            for i in 0..m {
                let b = basis[i];
                if b != usize::MAX && cost[b] != zero && tableau[i][j] != zero {
                    r -= &cost[b] * &tableau[i][j];
                }
            }
            if r < zero {
                entering = Some(j);
                break; // Bland: smallest eligible index.
            }
        }
        let Some(e) = entering else {
            let mut value = zero.clone();
            for i in 0..m {
                let b = basis[i];
                if b != usize::MAX && cost[b] != zero {
                    value += &cost[b] * &rhs[i];
                }
            }
            return Ok(Some(value));
        };

        // Ratio test; Bland ties on the smallest basis index.
        let mut leaving: Option<usize> = None;
        let mut best_ratio: Option<Rat> = None;
        for i in 0..m {
            if tableau[i][e] > zero {
                let ratio = &rhs[i] / &tableau[i][e];
                let better = match &best_ratio {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && basis[i] < basis[leaving.expect("ratio implies row")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    leaving = Some(i);
                }
            }
        }
        let Some(l) = leaving else {
            return Ok(None);
        };
        pivot(tableau, rhs, basis, l, e);
    }
}

/// Gauss–Jordan pivot on (row, col): row is scaled to make the pivot 1
/// and the column is eliminated from every other row.
fn pivot(tableau: &mut [Vec<Rat>], rhs: &mut [Rat], basis: &mut [usize], row: usize, col: usize) {
    let zero = rat_int(0);
    let p = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        *v /= &p;
    }
    rhs[row] /= &p;
    for i in 0..tableau.len() {
        if i == row || tableau[i][col] == zero {
            continue;
        }
        let factor = tableau[i][col].clone();
        for j in 0..tableau[i].len() {
            let delta = &factor * &tableau[row][j];
            tableau[i][j] -= delta;
        }
        let delta = &factor * &rhs[row];
        rhs[i] -= delta;
    }
    basis[row] = col;
}
