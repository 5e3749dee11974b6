//! Independent checks on game solutions.
//!
//! Nothing here calls into the simplex code except [`sweep_k`], which drives
//! the main pipeline and then certifies each of its answers. The second solver,
//! [`support_enumeration_solve`], only enumerates square supports and solves
//! small linear systems by Gaussian elimination.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, MonotoneViolation, Result};
use crate::game::{reduced_matrix, GameSpec, SearchSet};
use crate::lp::{hider_uniqueness, solve_zero_sum, MixedSolution, UniquenessReport};
use crate::matrix::Matrix;
use crate::rational::{int, sum, Rational};

/// Largest matrix dimension accepted by [`support_enumeration_solve`].
pub const SUPPORT_ENUMERATION_MAX_DIM: usize = 6;

/// Exact slack bookkeeping for a claimed equilibrium.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub claimed_value: Rational,
    /// `v - payoff(row, hider_mix)` for every row.
    pub hider_slack: Vec<Rational>,
    /// `payoff(searcher_mix, column) - v` for every column.
    pub searcher_slack: Vec<Rational>,
    pub ok: bool,
}

impl Certificate {
    /// Row with the most negative hider slack, if any slack is negative.
    pub fn worst_row(&self) -> Option<(usize, &Rational)> {
        worst(&self.hider_slack)
    }

    /// Column with the most negative searcher slack, if any is negative.
    pub fn worst_col(&self) -> Option<(usize, &Rational)> {
        worst(&self.searcher_slack)
    }
}

fn worst(slack: &[Rational]) -> Option<(usize, &Rational)> {
    slack
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_negative())
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
}

fn check_distribution(mix: &[Rational], who: &str) -> Result<()> {
    if mix.iter().any(Signed::is_negative) || !sum(mix).is_one() {
        return Err(Error::InvalidStrategy(format!(
            "{who} mix is not a probability distribution"
        )));
    }
    Ok(())
}

/// Certifies that the hider mix holds every row to at most `claimed_value`
/// and the searcher mix earns at least `claimed_value` on every column.
pub fn verify_equilibrium(
    matrix: &Matrix,
    hider_mix: &[Rational],
    searcher_mix: &[Rational],
    claimed_value: &Rational,
) -> Result<Certificate> {
    if hider_mix.len() != matrix.cols() || searcher_mix.len() != matrix.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but mixes have lengths {} (searcher) and {} (hider)",
            matrix.rows(),
            matrix.cols(),
            searcher_mix.len(),
            hider_mix.len()
        )));
    }
    check_distribution(hider_mix, "hider")?;
    check_distribution(searcher_mix, "searcher")?;

    let hider_slack: Vec<Rational> = (0..matrix.rows())
        .map(|r| claimed_value - matrix.row_payoff(r, hider_mix))
        .collect();
    let searcher_slack: Vec<Rational> = (0..matrix.cols())
        .map(|c| matrix.col_payoff(c, searcher_mix) - claimed_value)
        .collect();
    let ok = hider_slack
        .iter()
        .chain(&searcher_slack)
        .all(|s| !s.is_negative());
    Ok(Certificate {
        claimed_value: claimed_value.clone(),
        hider_slack,
        searcher_slack,
        ok,
    })
}

/// Solves `a x = b` exactly. Returns `None` when `a` is singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Indifference system on a square support: the mix over `own` makes every
/// opposing pure strategy in `other` pay the same `v`, with `payoff(o, s)`
/// reading the matrix entry for opponent strategy `o` and own strategy `s`.
fn indifference(
    own: &[usize],
    other: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Option<(Vec<Rational>, Rational)> {
    let s = own.len();
    let mut a = Vec::with_capacity(s + 1);
    let mut b = Vec::with_capacity(s + 1);
    for &o in other {
        let mut row: Vec<Rational> = own.iter().map(|&j| payoff(o, j)).collect();
        row.push(-Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    let mut total = vec![Rational::one(); s];
    total.push(Rational::zero());
    a.push(total);
    b.push(Rational::one());
    let mut solution = solve_linear(a, b)?;
    let v = solution.pop()?;
    Some((solution, v))
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Second solver for small games: tries square support pairs in order of
/// size, solves both indifference systems, and returns the first pair that
/// passes [`verify_equilibrium`].
pub fn support_enumeration_solve(matrix: &Matrix) -> Result<MixedSolution> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if matrix.is_empty() {
        return Err(Error::DimensionMismatch(
            "game matrix has no rows or columns".into(),
        ));
    }
    if rows > SUPPORT_ENUMERATION_MAX_DIM || cols > SUPPORT_ENUMERATION_MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "support enumeration handles at most {0}x{0}, got {rows}x{cols}",
            SUPPORT_ENUMERATION_MAX_DIM
        )));
    }
    for size in 1..=rows.min(cols) {
        let row_sets = subsets(rows, size);
        let col_sets = subsets(cols, size);
        for rs in &row_sets {
            for cs in &col_sets {
                let Some((y, v_hider)) = indifference(cs, rs, |r, c| matrix.get(r, c).clone())
                else {
                    continue;
                };
                if y.iter().any(Signed::is_negative) {
                    continue;
                }
                let Some((x, v_searcher)) = indifference(rs, cs, |c, r| matrix.get(r, c).clone())
                else {
                    continue;
                };
                if v_hider != v_searcher || x.iter().any(Signed::is_negative) {
                    continue;
                }
                let mut col_strategy = vec![Rational::zero(); cols];
                for (&c, p) in cs.iter().zip(y) {
                    col_strategy[c] = p;
                }
                let mut row_strategy = vec![Rational::zero(); rows];
                for (&r, p) in rs.iter().zip(x) {
                    row_strategy[r] = p;
                }
                let cert = verify_equilibrium(matrix, &col_strategy, &row_strategy, &v_hider)?;
                if cert.ok {
                    return Ok(MixedSolution {
                        value: v_hider,
                        row_strategy,
                        col_strategy,
                    });
                }
            }
        }
    }
    Err(Error::NoEquilibrium(
        "no square support pair yields a certified equilibrium".into(),
    ))
}

/// One budget of a [`sweep_k`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub k: Rational,
    pub value: Rational,
    pub hider: Vec<Rational>,
    pub searcher: Vec<(SearchSet, Rational)>,
    pub hider_ranges: UniquenessReport,
    pub certified: bool,
}

/// Solves the family `spec` at every integer budget in `k_from..=k_to` and
/// fails if the value ever decreases as the budget grows.
pub fn sweep_k(
    spec: &GameSpec,
    k_from: i64,
    k_to: i64,
    max_subsets: usize,
) -> Result<Vec<SweepRow>> {
    if k_from > k_to || k_from < 0 {
        return Err(Error::Precondition(format!(
            "invalid budget range {k_from}..={k_to}"
        )));
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    for k in k_from..=k_to {
        let instance = spec.with_budget(int(k))?;
        let payoff = reduced_matrix(&instance, max_subsets)?;
        let solution = solve_zero_sum(payoff.matrix())?;
        let ranges = hider_uniqueness(payoff.matrix(), &solution.value)?;
        let cert = verify_equilibrium(
            payoff.matrix(),
            &solution.col_strategy,
            &solution.row_strategy,
            &solution.value,
        )?;
        if let Some(prev) = rows.last() {
            if solution.value < prev.value {
                return Err(Error::NotMonotone(Box::new(MonotoneViolation {
                    k: int(k),
                    previous: prev.value.clone(),
                    value: solution.value,
                })));
            }
        }
        let searcher = payoff
            .sets()
            .iter()
            .cloned()
            .zip(solution.row_strategy)
            .filter(|(_, p)| !p.is_zero())
            .collect();
        rows.push(SweepRow {
            k: int(k),
            value: solution.value,
            hider: solution.col_strategy,
            searcher,
            hider_ranges: ranges,
            certified: cert.ok,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn example_3_1() -> Matrix {
        Matrix::from_rows(vec![
            vec![ratio(1, 10), int(0), int(0), int(0)],
            vec![int(0), int(0), int(0), ratio(2, 5)],
            vec![int(0), ratio(1, 5), ratio(3, 20), int(0)],
        ])
        .unwrap()
    }

    #[test]
    fn certificate_of_the_four_location_solution() {
        let cert = verify_equilibrium(
            &example_3_1(),
            &[ratio(12, 23), int(0), ratio(8, 23), ratio(3, 23)],
            &[ratio(12, 23), ratio(3, 23), ratio(8, 23)],
            &ratio(6, 115),
        )
        .unwrap();
        assert!(cert.ok);
        assert!(cert.hider_slack.iter().all(Zero::is_zero));
        // Location 2 is off the hider's support and strictly over-covered.
        assert!(cert.searcher_slack[1].is_positive());
    }

    #[test]
    fn point_mass_is_not_an_equilibrium() {
        let cert = verify_equilibrium(
            &example_3_1(),
            &[int(1), int(0), int(0), int(0)],
            &[int(1), int(0), int(0)],
            &ratio(1, 10),
        )
        .unwrap();
        assert!(!cert.ok);
        for c in 1..4 {
            assert_eq!(cert.searcher_slack[c], ratio(-1, 10));
        }
        assert_eq!(cert.worst_col().unwrap().0, 1);
    }

    #[test]
    fn certificate_dimension_and_distribution_errors() {
        let m = example_3_1();
        assert!(matches!(
            verify_equilibrium(&m, &[int(1)], &[int(1), int(0), int(0)], &int(0)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            verify_equilibrium(
                &m,
                &[int(1), int(1), int(0), int(0)],
                &[int(1), int(0), int(0)],
                &int(0)
            ),
            Err(Error::InvalidStrategy(_))
        ));
    }

    #[test]
    fn gaussian_elimination() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(
            solve_linear(a, vec![int(3), int(5)]).unwrap(),
            vec![ratio(4, 5), ratio(7, 5)]
        );
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve_linear(singular, vec![int(1), int(2)]).is_none());
    }

    #[test]
    fn support_enumeration_examples() {
        assert_eq!(
            support_enumeration_solve(&example_3_1()).unwrap().value,
            ratio(6, 115)
        );
        let id = support_enumeration_solve(&Matrix::diagonal(&[int(1), int(1)])).unwrap();
        assert_eq!(id.value, ratio(1, 2));
        let spec = GameSpec::arithmetic(
            vec![
                ratio(1, 2),
                ratio(2, 5),
                ratio(3, 10),
                ratio(1, 5),
                ratio(1, 10),
            ],
            int(5),
        )
        .unwrap();
        let m = reduced_matrix(&spec, 1 << 10).unwrap();
        assert_eq!(
            support_enumeration_solve(m.matrix()).unwrap().value,
            ratio(3, 55)
        );
    }

    #[test]
    fn support_enumeration_handles_degenerate_games() {
        let zeros = Matrix::zeros(3, 2);
        assert_eq!(support_enumeration_solve(&zeros).unwrap().value, int(0));
        let dominated = Matrix::from_rows(vec![
            vec![int(1), int(1)],
            vec![int(1), int(1)],
            vec![int(0), int(2)],
        ])
        .unwrap();
        assert_eq!(support_enumeration_solve(&dominated).unwrap().value, int(1));
    }

    #[test]
    fn support_enumeration_dimension_cap() {
        assert!(support_enumeration_solve(&Matrix::zeros(7, 2)).is_err());
    }

    #[test]
    fn single_location_sweep() {
        let spec = GameSpec::new(vec![int(1)], vec![ratio(2, 3)], int(0)).unwrap();
        let rows = sweep_k(&spec, 0, 1, 16).unwrap();
        let values: Vec<_> = rows.iter().map(|r| r.value.clone()).collect();
        assert_eq!(values, vec![int(0), ratio(2, 3)]);
        assert!(rows.iter().all(|r| r.certified));
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let spec = GameSpec::new(vec![int(1)], vec![ratio(2, 3)], int(0)).unwrap();
        assert!(sweep_k(&spec, 2, 1, 16).is_err());
        assert!(sweep_k(&spec, -1, 1, 16).is_err());
    }
}
