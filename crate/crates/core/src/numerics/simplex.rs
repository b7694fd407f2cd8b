//! Dense two-phase tableau simplex for small linear programs, and a solver for
//! difference-constrained programs `max c·x  s.t. |x_a − x_b| <= d_ab`.
//!
//! Pivoting uses Bland's rule, so the method terminates on degenerate
//! problems and the pivot sequence is deterministic.

use crate::error::{Error, Result};

const EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective·x` subject to `constraints` and `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; last column is the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn width(&self) -> usize {
        self.rows[0].len() - 1
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                row[col] = 0.0;
            }
        }
        self.basis[r] = col;
    }

    /// Installs reduced costs for `costs` (maximization) in the objective row.
    fn set_objective(&mut self, costs: &[f64]) {
        let m = self.m();
        let w = self.width();
        let mut obj = vec![0.0; w + 1];
        obj[..costs.len()].copy_from_slice(costs);
        for i in 0..m {
            let cb = costs.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (o, v) in obj.iter_mut().zip(&self.rows[i]) {
                    *o -= cb * v;
                }
            }
        }
        self.rows[m] = obj;
    }

    fn run(&mut self) -> Result<()> {
        let m = self.m();
        for _ in 0..MAX_PIVOTS {
            let obj = &self.rows[m];
            let Some(col) = (0..self.width()).find(|&j| self.allowed[j] && obj[j] > EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > EPS {
                    let ratio = self.rows[i][self.width()] / a;
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - EPS
                                || ((ratio - best).abs() <= EPS && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, col);
        }
        Err(Error::InvalidInput(
            "simplex pivot limit exceeded".to_string(),
        ))
    }

    fn value(&self) -> f64 {
        -self.rows[self.m()][self.width()]
    }
}

impl LinearProgram {
    pub fn maximize(&self) -> Result<LpSolution> {
        let n = self.objective.len();
        let m = self.constraints.len();
        if self.constraints.iter().any(|c| c.coeffs.len() != n) {
            return Err(Error::InvalidInput(
                "constraint width does not match objective".to_string(),
            ));
        }
        // normalise to rhs >= 0
        let rows: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    Constraint {
                        coeffs: c.coeffs.iter().map(|v| -v).collect(),
                        relation: match c.relation {
                            Relation::Le => Relation::Ge,
                            Relation::Ge => Relation::Le,
                            Relation::Eq => Relation::Eq,
                        },
                        rhs: -c.rhs,
                    }
                } else {
                    c.clone()
                }
            })
            .collect();

        let n_slack = rows.iter().filter(|c| c.relation != Relation::Eq).count();
        let n_art = rows.iter().filter(|c| c.relation != Relation::Le).count();
        let width = n + n_slack + n_art;
        let art_start = n + n_slack;

        let mut t = Tableau {
            rows: Vec::with_capacity(m + 1),
            basis: Vec::with_capacity(m),
            allowed: vec![true; width],
        };
        let (mut s, mut a) = (n, art_start);
        for c in &rows {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(&c.coeffs);
            row[width] = c.rhs;
            match c.relation {
                Relation::Le => {
                    row[s] = 1.0;
                    t.basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    row[a] = 1.0;
                    t.basis.push(a);
                    s += 1;
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = 1.0;
                    t.basis.push(a);
                    a += 1;
                }
            }
            t.rows.push(row);
        }
        t.rows.push(vec![0.0; width + 1]);

        if n_art > 0 {
            let mut phase1 = vec![0.0; width];
            for v in &mut phase1[art_start..] {
                *v = -1.0;
            }
            t.set_objective(&phase1);
            t.run()?;
            let scale = 1.0 + rows.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
            if t.value() < -1e-9 * scale {
                return Err(Error::Infeasible(
                    "no point satisfies all constraints".to_string(),
                ));
            }
            // drive zero-level artificials out of the basis where possible
            for i in 0..m {
                if t.basis[i] >= art_start {
                    if let Some(col) = (0..art_start).find(|&j| t.rows[i][j].abs() > EPS) {
                        t.pivot(i, col);
                    }
                }
            }
            for flag in &mut t.allowed[art_start..] {
                *flag = false;
            }
        }

        t.set_objective(&self.objective);
        t.run()?;

        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rows[i][width];
            }
        }
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution { x, objective })
    }
}

/// `|x_a − x_b| <= max_distance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBound {
    pub a: usize,
    pub b: usize,
    pub max_distance: f64,
}

/// Maximizes `costs·x` under pairwise difference bounds.
///
/// The optimum of a difference-constrained program is only defined up to a
/// common shift when the costs sum to zero; the returned vector is the
/// lexicographically smallest optimal point with `x >= 0`, which in
/// particular has `min x = 0`.
pub fn lp_solve(costs: &[f64], bounds: &[PairBound]) -> Result<LpSolution> {
    let n = costs.len();
    for pb in bounds {
        if pb.a >= n || pb.b >= n {
            return Err(Error::InvalidInput(format!(
                "pair ({}, {}) references a missing variable",
                pb.a, pb.b
            )));
        }
        if !pb.max_distance.is_finite() || pb.max_distance < 0.0 {
            return Err(Error::Infeasible(format!(
                "bound {} on |x_{} - x_{}| is negative or not finite",
                pb.max_distance, pb.a, pb.b
            )));
        }
    }
    if n == 0 {
        return Ok(LpSolution {
            x: Vec::new(),
            objective: 0.0,
        });
    }

    let mut base = Vec::with_capacity(2 * bounds.len());
    for pb in bounds {
        for (i, j) in [(pb.a, pb.b), (pb.b, pb.a)] {
            let mut coeffs = vec![0.0; n];
            coeffs[i] += 1.0;
            coeffs[j] -= 1.0;
            base.push(Constraint {
                coeffs,
                relation: Relation::Le,
                rhs: pb.max_distance,
            });
        }
    }
    let first = LinearProgram {
        objective: costs.to_vec(),
        constraints: base.clone(),
    }
    .maximize()?;

    // later stages pin earlier optima exactly; phase one absorbs rounding
    let mut constraints = base;
    constraints.push(Constraint {
        coeffs: costs.to_vec(),
        relation: Relation::Ge,
        rhs: first.objective,
    });
    let mut x = first.x;
    for i in 0..n {
        let mut objective = vec![0.0; n];
        objective[i] = -1.0;
        let sol = LinearProgram {
            objective,
            constraints: constraints.clone(),
        }
        .maximize()?;
        let mut coeffs = vec![0.0; n];
        coeffs[i] = 1.0;
        constraints.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: sol.x[i],
        });
        x = sol.x;
    }
    let lowest = x.iter().copied().fold(f64::INFINITY, f64::min);
    for v in &mut x {
        *v -= lowest;
    }
    let objective = costs.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { x, objective })
}
