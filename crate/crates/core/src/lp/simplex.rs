//! Exact primal simplex in slack form with Bland's rule.
//!
//! Problems are `maximize c.x subject to A x <= b, x >= 0`. Each basic
//! variable is kept as `x_B = b_i - sum_j a_ij x_N(j)` and the objective as
//! `z = v + sum_j c_j x_N(j)`, so the tableau is only `m x n` no matter how
//! many slack variables there are. Negative right-hand sides are handled
//! with a single auxiliary variable in a first phase.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LpSolution {
    pub x: Vec<Rational>,
    /// One multiplier per constraint; nonnegative at optimality.
    pub duals: Vec<Rational>,
    pub objective: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    v: Rational,
    /// Variable label of each basic row.
    basic: Vec<usize>,
    /// Variable label of each nonbasic column.
    nonbasic: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, l: usize, e: usize) {
        let piv = self.a[l][e].clone();
        debug_assert!(!piv.is_zero());
        let inv = piv.recip();
        for j in 0..self.nonbasic.len() {
            if j != e {
                self.a[l][j] = &self.a[l][j] * &inv;
            }
        }
        self.a[l][e] = inv;
        self.b[l] = &self.b[l] * &self.a[l][e];

        let pivot_row = self.a[l].clone();
        let pivot_b = self.b[l].clone();
        for i in 0..self.basic.len() {
            if i == l || self.a[i][e].is_zero() {
                continue;
            }
            let coef = self.a[i][e].clone();
            for (j, pj) in pivot_row.iter().enumerate() {
                if j != e && !pj.is_zero() {
                    self.a[i][j] -= &coef * pj;
                }
            }
            self.a[i][e] = -(&coef * &pivot_row[e]);
            self.b[i] -= &coef * &pivot_b;
        }

        if !self.c[e].is_zero() {
            let coef = self.c[e].clone();
            self.v += &coef * &pivot_b;
            for (j, pj) in pivot_row.iter().enumerate() {
                if j != e && !pj.is_zero() {
                    self.c[j] -= &coef * pj;
                }
            }
            self.c[e] = -(&coef * &pivot_row[e]);
        }

        std::mem::swap(&mut self.basic[l], &mut self.nonbasic[e]);
    }

    /// Runs Bland-rule pivots to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(e) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.basic.len() {
                if !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][e];
                let better = match &leaving {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basic[i] < self.basic[*l])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((l, _)) => self.pivot(l, e),
                None => return false,
            }
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let m = self.b.len();
        let n = self.c.len();
        debug_assert!(self.a.len() == m && self.a.iter().all(|row| row.len() == n));

        let mut t = Tableau {
            a: self.a.clone(),
            b: self.b.clone(),
            c: vec![Rational::zero(); n],
            v: Rational::zero(),
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
        };

        let most_negative = (0..m)
            .filter(|&i| self.b[i].is_negative())
            .min_by(|&i, &j| self.b[i].cmp(&self.b[j]).then(i.cmp(&j)));
        if let Some(l) = most_negative {
            if !t.find_feasible_basis(l, n + m) {
                return LpOutcome::Infeasible;
            }
        }

        // Express the real objective in the current nonbasic variables.
        t.c = vec![Rational::zero(); t.nonbasic.len()];
        t.v = Rational::zero();
        for (label, cost) in self.c.iter().enumerate() {
            if cost.is_zero() {
                continue;
            }
            if let Some(j) = t.nonbasic.iter().position(|&x| x == label) {
                t.c[j] += cost;
            } else if let Some(i) = t.basic.iter().position(|&x| x == label) {
                t.v += cost * &t.b[i];
                for j in 0..t.nonbasic.len() {
                    t.c[j] -= cost * &t.a[i][j];
                }
            }
        }

        if !t.optimize() {
            return LpOutcome::Unbounded;
        }

        let mut x = vec![Rational::zero(); n];
        for (i, &label) in t.basic.iter().enumerate() {
            if label < n {
                x[label] = t.b[i].clone();
            }
        }
        let mut duals = vec![Rational::zero(); m];
        for (j, &label) in t.nonbasic.iter().enumerate() {
            if label >= n {
                duals[label - n] = -t.c[j].clone();
            }
        }
        LpOutcome::Optimal(LpSolution {
            x,
            duals,
            objective: t.v,
        })
    }
}

impl Tableau {
    /// Phase one: minimize an auxiliary variable `x0` added with coefficient
    /// -1 to every row. On success the tableau holds a feasible basis of the
    /// original problem and the auxiliary column is removed.
    fn find_feasible_basis(&mut self, most_negative_row: usize, aux_label: usize) -> bool {
        for row in &mut self.a {
            row.push(-Rational::one());
        }
        self.nonbasic.push(aux_label);
        let aux_col = self.nonbasic.len() - 1;
        self.c = vec![Rational::zero(); self.nonbasic.len()];
        self.c[aux_col] = -Rational::one();
        self.v = Rational::zero();

        self.pivot(most_negative_row, aux_col);
        let bounded = self.optimize();
        debug_assert!(bounded, "auxiliary problem is bounded above by zero");
        if !self.v.is_zero() {
            return false;
        }

        if let Some(l) = self.basic.iter().position(|&x| x == aux_label) {
            // Degenerate: x0 is basic at level zero, swap it for any column
            // with a nonzero coefficient in its row.
            let e = (0..self.nonbasic.len())
                .filter(|&j| !self.a[l][j].is_zero())
                .min_by_key(|&j| self.nonbasic[j]);
            match e {
                Some(e) => self.pivot(l, e),
                None => {
                    // The row reads x0 = 0 with no other dependence.
                    self.a.remove(l);
                    self.b.remove(l);
                    self.basic.remove(l);
                }
            }
        }

        let col = self
            .nonbasic
            .iter()
            .position(|&x| x == aux_label)
            .expect("auxiliary variable is nonbasic");
        for row in &mut self.a {
            row.remove(col);
        }
        self.nonbasic.remove(col);
        self.c.remove(col);
        true
    }
}
