//! Exact solution of two-person zero-sum matrix games.
//!
//! The row player maximizes and the column player minimizes. In the search
//! game the rows are search sets and the columns are hiding locations, so the
//! row strategy belongs to the searcher and the column strategy to the hider.

mod simplex;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{sum, Rational};

use simplex::{LinearProgram, LpOutcome};

/// Value and one pair of optimal mixed strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedSolution {
    pub value: Rational,
    /// Searcher (maximizer) mix over rows.
    pub row_strategy: Vec<Rational>,
    /// Hider (minimizer) mix over columns.
    pub col_strategy: Vec<Rational>,
}

/// Range of each hider coordinate over the set of optimal hider strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub ranges: Vec<(Rational, Rational)>,
    pub unique: bool,
}

impl UniquenessReport {
    /// The optimal strategy, when the ranges all collapse.
    pub fn unique_strategy(&self) -> Option<Vec<Rational>> {
        self.unique
            .then(|| self.ranges.iter().map(|(lo, _)| lo.clone()).collect())
    }
}

/// Solves the game by the standard minimax LP.
///
/// Entries are shifted so the matrix is strictly positive; the hider's
/// problem `max 1.y  s.t.  M y <= 1, y >= 0` then has optimum `1/v`, and its
/// constraint multipliers are the searcher's scaled strategy.
pub fn solve_zero_sum(matrix: &Matrix) -> Result<MixedSolution> {
    if matrix.is_empty() {
        return Err(Error::DimensionMismatch(
            "game matrix has no rows or columns".into(),
        ));
    }
    if matrix.rows() <= ROW_GENERATION_THRESHOLD {
        return Ok(solve_dense(matrix));
    }
    Ok(solve_by_row_generation(matrix))
}

/// Above this many rows the LP is solved on a growing subset of rows.
const ROW_GENERATION_THRESHOLD: usize = 64;

/// Solves the game restricted to a working set of rows, then adds the rows
/// that beat the restricted hider strategy until none do. The final hider
/// strategy holds every row of the full matrix to the restricted value, and
/// the restricted searcher strategy guarantees it, so the result is exact.
fn solve_by_row_generation(matrix: &Matrix) -> MixedSolution {
    let mut working = initial_rows(matrix);
    loop {
        let sub = Matrix::from_rows(working.iter().map(|&r| matrix.row(r).to_vec()).collect())
            .expect("rows share a width");
        let sol = solve_dense(&sub);
        if !add_violated_rows(matrix, &mut working, &sol.col_strategy, &sol.value) {
            let mut row_strategy = vec![Rational::zero(); matrix.rows()];
            for (w, &r) in sol.row_strategy.into_iter().zip(&working) {
                row_strategy[r] = w;
            }
            return MixedSolution {
                value: sol.value,
                row_strategy,
                col_strategy: sol.col_strategy,
            };
        }
    }
}

/// Every row when the matrix is small; otherwise, for each column, the first
/// row paying the most there.
fn initial_rows(matrix: &Matrix) -> Vec<usize> {
    if matrix.rows() <= ROW_GENERATION_THRESHOLD {
        return (0..matrix.rows()).collect();
    }
    let mut working: Vec<usize> = (0..matrix.cols())
        .map(|c| {
            (0..matrix.rows())
                .max_by(|&a, &b| matrix[(a, c)].cmp(&matrix[(b, c)]).then(b.cmp(&a)))
                .expect("nonempty")
        })
        .collect();
    working.sort_unstable();
    working.dedup();
    working
}

/// Adds up to `cols` rows paying more than `bound` against `col_mix`, most
/// violated first. Returns false when no row outside the working set does.
fn add_violated_rows(
    matrix: &Matrix,
    working: &mut Vec<usize>,
    col_mix: &[Rational],
    bound: &Rational,
) -> bool {
    let mut violated: Vec<(Rational, usize)> = (0..matrix.rows())
        .filter(|r| working.binary_search(r).is_err())
        .filter_map(|r| {
            let payoff = matrix.row_payoff(r, col_mix);
            (payoff > *bound).then_some((payoff, r))
        })
        .collect();
    if violated.is_empty() {
        return false;
    }
    violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    working.extend(violated.into_iter().take(matrix.cols()).map(|(_, r)| r));
    working.sort_unstable();
    true
}

fn solve_dense(matrix: &Matrix) -> MixedSolution {
    let min = matrix.min_entry().expect("nonempty").clone();
    let shift = if min.is_positive() {
        Rational::zero()
    } else {
        Rational::one() - min
    };
    let shifted = matrix.map(|x| x + &shift);

    let program = LinearProgram {
        a: (0..shifted.rows())
            .map(|r| shifted.row(r).to_vec())
            .collect(),
        b: vec![Rational::one(); shifted.rows()],
        c: vec![Rational::one(); shifted.cols()],
    };
    let LpOutcome::Optimal(solution) = program.solve() else {
        unreachable!("the positive-matrix game LP is feasible and bounded");
    };
    let scale = solution.objective.recip();
    let col_strategy: Vec<Rational> = solution.x.iter().map(|y| y * &scale).collect();
    let row_strategy: Vec<Rational> = solution.duals.iter().map(|x| x * &scale).collect();
    debug_assert!(sum(&row_strategy).is_one() && sum(&col_strategy).is_one());

    MixedSolution {
        value: scale - shift,
        row_strategy,
        col_strategy,
    }
}

/// Diagonal game with positive entries: value `1 / sum(1/d_i)`, and both
/// players use strategy `i` with probability `value / d_i`.
pub fn solve_diagonal(d: &[Rational]) -> Result<MixedSolution> {
    if d.is_empty() {
        return Err(Error::DimensionMismatch("empty diagonal".into()));
    }
    if let Some(bad) = d.iter().find(|x| !x.is_positive()) {
        return Err(Error::Precondition(format!(
            "diagonal entries must be positive, got {bad}"
        )));
    }
    let value = d
        .iter()
        .fold(Rational::zero(), |acc, x| acc + x.recip())
        .recip();
    let strategy: Vec<Rational> = d.iter().map(|x| &value / x).collect();
    Ok(MixedSolution {
        value,
        row_strategy: strategy.clone(),
        col_strategy: strategy,
    })
}

/// For each column, the least and greatest probability any optimal hider
/// strategy can give it. `value` must be the exact value of `matrix`.
///
/// Two LPs per column over `{ y : M y <= v, sum y = 1, y >= 0 }`, each
/// solved on a growing working set of rows like [`solve_zero_sum`].
pub fn hider_uniqueness(matrix: &Matrix, value: &Rational) -> Result<UniquenessReport> {
    if matrix.is_empty() {
        return Err(Error::DimensionMismatch(
            "game matrix has no rows or columns".into(),
        ));
    }
    let cols = matrix.cols();
    let simplex_row = vec![Rational::one(); cols];
    let mut ranges = Vec::with_capacity(cols);
    for j in 0..cols {
        let bound = |sign: Rational| -> Result<Rational> {
            let mut c = vec![Rational::zero(); cols];
            c[j] = sign.clone();
            let mut working = initial_rows(matrix);
            loop {
                let mut a: Vec<Vec<Rational>> =
                    working.iter().map(|&r| matrix.row(r).to_vec()).collect();
                let mut b = vec![value.clone(); working.len()];
                a.push(simplex_row.clone());
                b.push(Rational::one());
                a.push(simplex_row.iter().map(|x| -x).collect());
                b.push(-Rational::one());
                let program = LinearProgram { a, b, c: c.clone() };
                let solution = match program.solve() {
                    LpOutcome::Optimal(s) => s,
                    LpOutcome::Infeasible => return Err(Error::InconsistentValue(value.clone())),
                    LpOutcome::Unbounded => unreachable!("probabilities are bounded"),
                };
                if !add_violated_rows(matrix, &mut working, &solution.x, value) {
                    return Ok(solution.objective * sign);
                }
            }
        };
        let hi = bound(Rational::one())?;
        let lo = bound(-Rational::one())?;
        ranges.push((lo, hi));
    }
    let unique = ranges.iter().all(|(lo, hi)| lo == hi);
    Ok(UniquenessReport { ranges, unique })
}

/// Row-player analogue of [`hider_uniqueness`], probed on the transposed
/// game with signs flipped.
pub fn searcher_uniqueness(matrix: &Matrix, value: &Rational) -> Result<UniquenessReport> {
    let flipped = matrix.transpose().map(|x| -x);
    hider_uniqueness(&flipped, &-value)
}
