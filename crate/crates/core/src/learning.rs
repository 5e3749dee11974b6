//! Two locations, two rounds, and escape probabilities that are learned.
//!
//! Nature gives each location an escape probability of `low` or `high`, each
//! with probability 1/2, independently. If the searcher finds the hider the
//! hider escapes with the location's escape probability; after an escape in
//! round one both players play once more, remembering where it happened.
//! Each player has two strategies: pick a random location in round one and
//! then return to the same one (`rs`) or switch to the other one (`rd`).
//!
//! Payoffs are unconditional probabilities that the searcher wins. The
//! factor 1/2 in every entry is the chance that both players pick the same
//! location in round one.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve_diagonal, solve_zero_sum};
use crate::matrix::Matrix;
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningSpec {
    low: Rational,
    high: Rational,
    prior: Rational,
}

impl LearningSpec {
    /// Escape probabilities `0 <= low <= high <= 1`; the prior of each
    /// location being `high` is fixed at 1/2.
    pub fn new(low: Rational, high: Rational) -> Result<Self> {
        if low.is_negative() || high > Rational::one() || low > high {
            return Err(Error::InvalidSpec(format!(
                "need 0 <= low <= high <= 1, got low = {low}, high = {high}"
            )));
        }
        Ok(LearningSpec {
            low,
            high,
            prior: ratio(1, 2),
        })
    }

    pub fn low(&self) -> &Rational {
        &self.low
    }

    pub fn high(&self) -> &Rational {
        &self.high
    }

    /// Prior probability that a location has the high escape probability.
    pub fn prior(&self) -> &Rational {
        &self.prior
    }

    /// Diagonal of `8A - (4 - 2h - 2l) J`, where `J` is the all-ones matrix.
    pub fn diagonal_reduction(&self) -> (Rational, Rational) {
        let (l, h) = (&self.low, &self.high);
        let two = int(2);
        let a = -(&two * h * h) + &two * h - &two * l * l + &two * l;
        let s = h + l;
        let b = &two * &s - &s * &s;
        (a, b)
    }

    fn offset(&self) -> Rational {
        int(4) - int(2) * &self.high - int(2) * &self.low
    }
}

/// Win probability when both players return to one location whose escape
/// probability is `x`, including the 1/2 for meeting in round one.
pub fn same_location_payoff(x: &Rational) -> Rational {
    let one = Rational::one();
    ratio(1, 2) * ((&one - x) + x * (&one - x))
}

/// Payoffs for every state of nature behind the `(rs, rs)` and `(rd, rd)`
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerStatePayoffs {
    /// `(rs, rs)` at a low-escape location.
    pub same_low: Rational,
    /// `(rs, rs)` at a high-escape location.
    pub same_high: Rational,
    /// `(rd, rd)` with escape probabilities (first, second) = (h, h).
    pub switch_hh: Rational,
    pub switch_ll: Rational,
    pub switch_lh: Rational,
    pub switch_hl: Rational,
}

impl PerStatePayoffs {
    pub fn same_average(&self) -> Rational {
        (&self.same_low + &self.same_high) / int(2)
    }

    pub fn switch_average(&self) -> Rational {
        (&self.switch_hh + &self.switch_ll + &self.switch_lh + &self.switch_hl) / int(4)
    }
}

pub fn per_state_payoffs(spec: &LearningSpec) -> PerStatePayoffs {
    let (l, h) = (&spec.low, &spec.high);
    let one = Rational::one();
    let half = ratio(1, 2);
    PerStatePayoffs {
        same_low: same_location_payoff(l),
        same_high: same_location_payoff(h),
        switch_hh: same_location_payoff(h),
        switch_ll: same_location_payoff(l),
        switch_lh: &half * ((&one - l) + l * (&one - h)),
        switch_hl: &half * ((&one - h) + h * (&one - l)),
    }
}

/// The 2x2 game `[[P(rs,rs), P(rs,rd)], [P(rd,rs), P(rd,rd)]]`, searcher on
/// rows.
pub fn build_learning_matrix(spec: &LearningSpec) -> Matrix {
    let (l, h) = (&spec.low, &spec.high);
    let s = h + l;
    let same = (int(2) - h * h - l * l) / int(4);
    let mixed = (int(2) - &s) / int(4);
    let switch = (int(4) - &s * &s) / int(8);
    Matrix::from_rows(vec![vec![same, mixed.clone()], vec![mixed, switch]]).expect("square")
}

/// Value of the learning game written out in closed form. `None` when a
/// diagonal entry of the reduction vanishes and the expression is undefined.
pub fn closed_form_value(spec: &LearningSpec) -> Option<Rational> {
    let (l, h) = (&spec.low, &spec.high);
    let two = int(2);
    let first = &two * h * h - &two * h + &two * l * l - &two * l;
    let s = h + l;
    let second = &two * &s - &s * &s;
    if first.is_zero() || second.is_zero() {
        return None;
    }
    let inner = first.recip() - second.recip();
    Some(ratio(1, 2) - l / int(4) - h / int(4) - (int(8) * inner).recip())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningSolution {
    pub matrix_a: Matrix,
    /// `(a, b)`, the diagonal of `Y = 8A - (4 - 2h - 2l) J`.
    pub diag_y: (Rational, Rational),
    pub value_a: Rational,
    pub value_y: Rational,
    /// Probability of `rs` (identical for both players when the diagonal
    /// shortcut applies; the hider's when it does not).
    pub prob_rs: Rational,
    pub prob_rd: Rational,
    /// Whether both diagonal entries were positive so the diagonal formula
    /// was used.
    pub shortcut_applied: bool,
    /// Value of `matrix_a` solved directly by the LP.
    pub value_lp: Rational,
    /// The written-out closed form, when defined.
    pub value_closed_form: Option<Rational>,
}

impl LearningSolution {
    /// True when every available route to the value agrees.
    pub fn values_agree(&self) -> bool {
        self.value_lp == self.value_a
            && self
                .value_closed_form
                .as_ref()
                .is_none_or(|v| *v == self.value_a)
    }
}

/// Solves the game by the diagonal reduction, falling back to the LP when a
/// diagonal entry is zero, and cross-checks against the LP and the closed
/// form.
pub fn solve_learning(spec: &LearningSpec) -> Result<LearningSolution> {
    let matrix_a = build_learning_matrix(spec);
    let (a, b) = spec.diagonal_reduction();
    let offset = spec.offset();
    let lp = solve_zero_sum(&matrix_a)?;
    let value_closed_form = closed_form_value(spec);

    if a.is_positive() && b.is_positive() {
        let diag = solve_diagonal(&[a.clone(), b.clone()])?;
        let value_a = (&diag.value + &offset) / int(8);
        Ok(LearningSolution {
            matrix_a,
            diag_y: (a, b),
            value_a,
            value_y: diag.value,
            prob_rs: diag.row_strategy[0].clone(),
            prob_rd: diag.row_strategy[1].clone(),
            shortcut_applied: true,
            value_lp: lp.value,
            value_closed_form,
        })
    } else {
        let value_y = int(8) * &lp.value - &offset;
        Ok(LearningSolution {
            matrix_a,
            diag_y: (a, b),
            value_a: lp.value.clone(),
            value_y,
            prob_rs: lp.col_strategy[0].clone(),
            prob_rd: lp.col_strategy[1].clone(),
            shortcut_applied: false,
            value_lp: lp.value,
            value_closed_form,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorResult {
    /// Probability that the escape location has the high escape probability.
    pub prob_high_given_escape: Rational,
    /// Expected escape probability there in round two.
    pub expected_escape_next: Rational,
    /// Capture probability at the escape location implied by the
    /// equilibrium mix: `prob_rs * x = prob_rd * (1 - (l + h)/2)`.
    pub implied_capture_x: Rational,
    /// Weight `q` on capture probability `1 - h` that reproduces
    /// `implied_capture_x`, i.e. `q (1 - h) + (1 - q)(1 - l) = x`.
    pub q_low_capture: Rational,
}

/// Belief update at a location after an escape in round one.
pub fn posterior_after_escape(
    spec: &LearningSpec,
    solution: &LearningSolution,
) -> Result<PosteriorResult> {
    let (l, h) = (&spec.low, &spec.high);
    let s = l + h;
    if s.is_zero() {
        return Err(Error::Precondition(
            "escape probabilities are both zero; no escape can happen".into(),
        ));
    }
    if solution.prob_rs.is_zero() {
        return Err(Error::Precondition(
            "rs is never played; no implied capture".into(),
        ));
    }
    let one = Rational::one();
    let prob_high_given_escape = h / &s;
    let expected_escape_next = (l * l + h * h) / &s;
    let other_capture = &one - &s / int(2);
    let implied_capture_x = &solution.prob_rd * other_capture / &solution.prob_rs;
    let q_low_capture = if l == h {
        spec.prior.clone()
    } else {
        (&one - l - &implied_capture_x) / (h - l)
    };
    Ok(PosteriorResult {
        prob_high_given_escape,
        expected_escape_next,
        implied_capture_x,
        q_low_capture,
    })
}

/// After an escape, both players favour returning to the same location.
/// Decided from the sign of `a - b = -(h - l)^2`.
pub fn proposition6_check(spec: &LearningSpec) -> bool {
    let (a, b) = spec.diagonal_reduction();
    (a - b).is_negative()
}
