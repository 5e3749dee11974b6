//! Closed-form solutions for special families of the search game, each of
//! which can be expanded to a full payoff matrix and checked by the oracle.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::{
    reduced_matrix, GameSpec, HiderStrategy, PayoffMatrix, SearchSet, DEFAULT_MAX_SUBSETS,
};
use crate::lp::solve_zero_sum;
use crate::oracle::verify_equilibrium;
use crate::rational::{int, Rational};

fn check_captures(p: &[Rational]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidSpec(
            "at least one location is required".into(),
        ));
    }
    if let Some(bad) = p.iter().find(|x| !x.is_positive() || **x > Rational::one()) {
        return Err(Error::InvalidSpec(format!(
            "capture probabilities must lie in (0, 1], got {bad}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The hider equalizes `h_i p_i` across all locations.
    Interior,
    /// The hider sits at a location with the smallest capture probability.
    Corner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTimeSolution {
    /// `sum_i 1/p_i`.
    pub lambda_sum: Rational,
    pub regime: Regime,
    pub h: HiderStrategy,
    pub value: Rational,
}

/// Unit search times and an integer budget of `k` locations.
///
/// The value is `min(k / sum(1/p_i), min_i p_i)`. Below the threshold the
/// hider plays `h_i = (1/p_i) / sum(1/p_j)`; above it the hider hides at the
/// location with the smallest capture probability. At equality the interior
/// distribution is returned.
pub fn solve_constant_times(p: &[Rational], k: usize) -> Result<ConstantTimeSolution> {
    check_captures(p)?;
    let n = p.len();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "budget must satisfy 1 <= k <= n = {n}, got {k}; use the general solver"
        )));
    }
    let lambda_sum = p.iter().fold(Rational::zero(), |acc, x| acc + x.recip());
    let interior_value = int(k as i64) / &lambda_sum;
    let (weakest, p_min) = p
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("nonempty");

    if interior_value <= *p_min {
        let h = p.iter().map(|x| x.recip() / &lambda_sum).collect();
        Ok(ConstantTimeSolution {
            lambda_sum,
            regime: Regime::Interior,
            h: HiderStrategy::new(h)?,
            value: interior_value,
        })
    } else {
        Ok(ConstantTimeSolution {
            lambda_sum,
            regime: Regime::Corner,
            h: HiderStrategy::point_mass(n, weakest),
            value: p_min.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `n = 2m + 1`.
    Odd,
    /// `n = 2m`; location `m` is left out of the pairing.
    Even,
}

/// Outcome of checking a closed form against the full game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    /// The closed-form strategies certify as an equilibrium of the full game.
    Confirmed,
    /// Certification failed; `lp_value` is the true value of the full game.
    Rejected { lp_value: Rational },
}

impl Verification {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verification::Confirmed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticTimesSolution {
    pub n: usize,
    pub m: usize,
    pub parity: Parity,
    /// `S(p) = sum over j = m+1..n of 1/p_j` (1-based).
    pub s: Rational,
    pub hider: HiderStrategy,
    /// Pairs `{j, n-j}` (a singleton when `n - j = 0`) with probability
    /// `1 / (p_j S)`.
    pub searcher: Vec<(SearchSet, Rational)>,
    pub value: Rational,
    /// Strictly decreasing capture probabilities; only then is the hider
    /// strategy claimed to be the unique optimum.
    pub strictly_decreasing: bool,
    pub verification: Verification,
}

/// Search times `t_i = i`, budget `k = n`, and decreasing capture
/// probabilities.
///
/// With `m = floor(n/2)` the hider uses only the locations `j > m`, with
/// `h_j = 1/(p_j S)`, and the searcher inspects `{j, n-j}` with the same
/// probability; the value is `1/S`. For odd `n` this is a proven optimum.
/// For even `n` the same pairing is applied and the result is checked
/// against the full game; see [`ArithmeticTimesSolution::verification`].
pub fn solve_arithmetic_times(p: &[Rational]) -> Result<ArithmeticTimesSolution> {
    check_captures(p)?;
    let n = p.len();
    let m = n / 2;
    let parity = if n % 2 == 1 {
        Parity::Odd
    } else {
        Parity::Even
    };
    let spec = GameSpec::arithmetic(p.to_vec(), int(n as i64))?;

    // Zero-based index j-1 for 1-based j = m+1..n.
    let s = p[m..]
        .iter()
        .fold(Rational::zero(), |acc, x| acc + x.recip());
    let mut hider = vec![Rational::zero(); n];
    let mut searcher = Vec::with_capacity(n - m);
    for j in m + 1..=n {
        let prob = (&p[j - 1] * &s).recip();
        hider[j - 1] = prob.clone();
        let partner = n - j;
        let members: Vec<usize> = if partner == 0 {
            vec![j - 1]
        } else {
            vec![partner - 1, j - 1]
        };
        searcher.push((spec.search_set(&members)?, prob));
    }
    let strictly_decreasing = p.windows(2).all(|w| w[0] > w[1]);
    let value = s.recip();
    let hider = HiderStrategy::new(hider)?;

    let payoff = reduced_matrix(&spec, DEFAULT_MAX_SUBSETS)?;
    let searcher_mix = mix_over_rows(&payoff, &searcher)?;
    let cert = verify_equilibrium(payoff.matrix(), hider.probs(), &searcher_mix, &value)?;
    let verification = if cert.ok {
        Verification::Confirmed
    } else {
        Verification::Rejected {
            lp_value: solve_zero_sum(payoff.matrix())?.value,
        }
    };

    Ok(ArithmeticTimesSolution {
        n,
        m,
        parity,
        s,
        hider,
        searcher,
        value,
        strictly_decreasing,
        verification,
    })
}

/// Spreads weights given per search set onto the rows of `payoff`.
pub fn mix_over_rows(
    payoff: &PayoffMatrix,
    weights: &[(SearchSet, Rational)],
) -> Result<Vec<Rational>> {
    let mut mix = vec![Rational::zero(); payoff.sets().len()];
    for (set, w) in weights {
        let row = payoff.row_of(set).ok_or_else(|| {
            Error::InvalidStrategy(format!("set {set} is not a row of the payoff matrix"))
        })?;
        mix[row] += w;
    }
    Ok(mix)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdCheckResult {
    /// Whether the game's value is exactly `p_n`.
    pub holds: bool,
    /// Value of the game without location `n` and with budget `k - n`;
    /// `None` stands for `+inf` when no locations remain.
    pub reduced_value: Option<Rational>,
}

/// Decides whether a game with `t_i = i` and `k >= n` has value `p_n`, by
/// solving the game with location `n` removed and `n` units less budget and
/// comparing its value with `p_n`.
pub fn check_pn_threshold(spec: &GameSpec) -> Result<ThresholdCheckResult> {
    check_pn_threshold_capped(spec, DEFAULT_MAX_SUBSETS)
}

pub fn check_pn_threshold_capped(
    spec: &GameSpec,
    max_subsets: usize,
) -> Result<ThresholdCheckResult> {
    let n = spec.n();
    if spec
        .times()
        .iter()
        .enumerate()
        .any(|(i, t)| *t != int(i as i64 + 1))
    {
        return Err(Error::Precondition(
            "search times must be 1, 2, ..., n".into(),
        ));
    }
    let n_time = int(n as i64);
    if *spec.budget() < n_time {
        return Err(Error::Precondition(format!(
            "budget {} is below n = {n}; the last location cannot be searched",
            spec.budget()
        )));
    }
    if n == 1 {
        return Ok(ThresholdCheckResult {
            holds: true,
            reduced_value: None,
        });
    }
    let reduced = GameSpec::arithmetic(spec.captures()[..n - 1].to_vec(), spec.budget() - n_time)?;
    let payoff = reduced_matrix(&reduced, max_subsets)?;
    let v = solve_zero_sum(payoff.matrix())?.value;
    Ok(ThresholdCheckResult {
        holds: v >= spec.captures()[n - 1],
        reduced_value: Some(v),
    })
}

/// `a` locations of type 1 (search time 1, capture `p`) and `b` of type 2
/// (search time `tau`, capture `q`), with integer budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTypeSpec {
    pub a: u32,
    pub b: u32,
    pub tau: u32,
    pub p: Rational,
    pub q: Rational,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTypeSolution {
    /// Probability of hiding at a (uniformly chosen) type-1 location.
    pub y_bar: Rational,
    /// Mean number of type-2 locations the searcher inspects.
    pub j_hat: Rational,
    /// Most type-2 locations that fit in the budget.
    pub m: u32,
    pub value: Rational,
    /// Probability of inspecting exactly `j` type-2 locations.
    pub searcher_mix: Vec<(u32, Rational)>,
}

impl TwoTypeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 || self.tau == 0 {
            return Err(Error::InvalidSpec("a, b and tau must be positive".into()));
        }
        check_captures(&[self.p.clone(), self.q.clone()])
    }

    /// Capture probability when the searcher inspects `j` type-2 locations
    /// (and `k - tau j` type-1 locations) and the hider picks type 1 with
    /// probability `y`.
    pub fn payoff(&self, j: u32, y: &Rational) -> Rational {
        let (a, b, tau, k) = (
            int(self.a.into()),
            int(self.b.into()),
            int(self.tau.into()),
            int(self.k.into()),
        );
        let j = int(j.into());
        y * &self.p * (k - tau * &j) / a + (Rational::one() - y) * &self.q * j / b
    }

    /// The same game with every location listed: type 1 first, then type 2.
    pub fn to_game_spec(&self) -> Result<GameSpec> {
        self.validate()?;
        let (a, b) = (self.a as usize, self.b as usize);
        let mut times = vec![Rational::one(); a];
        times.extend(std::iter::repeat_n(int(self.tau.into()), b));
        let mut captures = vec![self.p.clone(); a];
        captures.extend(std::iter::repeat_n(self.q.clone(), b));
        GameSpec::new(times, captures, int(self.k.into()))
    }

    /// Lifts a solution to the expanded game: the hider spreads each type's
    /// share evenly, and the searcher's weight on `j` is spread evenly over
    /// all sets with `j` type-2 and `k - tau j` type-1 locations. Returns the
    /// hider vector and the searcher mix over the rows of `payoff`.
    pub fn expand_strategies(
        &self,
        solution: &TwoTypeSolution,
        payoff: &PayoffMatrix,
    ) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let (a, b) = (self.a as usize, self.b as usize);
        let type1 = &solution.y_bar / int(self.a.into());
        let type2 = (Rational::one() - &solution.y_bar) / int(self.b.into());
        let mut hider = vec![type1; a];
        hider.extend(std::iter::repeat_n(type2, b));

        let mut searcher = vec![Rational::zero(); payoff.sets().len()];
        for (row, set) in payoff.sets().iter().enumerate() {
            let j = set.indices().iter().filter(|&&i| i >= a).count();
            let i = set.len() - j;
            let Some((_, weight)) = solution
                .searcher_mix
                .iter()
                .find(|(jj, _)| *jj as usize == j)
            else {
                continue;
            };
            if i as i64 != i64::from(self.k) - i64::from(self.tau) * j as i64 {
                continue;
            }
            let ways = binomial(b, j) * binomial(a, i);
            searcher[row] = weight / Rational::from_integer(ways);
        }
        Ok((hider, searcher))
    }
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Closed form for the two-type game.
///
/// The hider picks type 1 with probability `ybar = aq / (aq + b p tau)`,
/// which makes every searcher plan pay `pqk / (aq + b p tau)`. Any searcher
/// mix over `j` (type-2 locations inspected) with mean
/// `jhat = pbk / (b p tau + aq)` attains that value; a point mass is used
/// when `jhat` is an integer, otherwise the two neighbouring integers.
pub fn solve_two_type(spec: &TwoTypeSpec) -> Result<TwoTypeSolution> {
    spec.validate()?;
    let k = u64::from(spec.k);
    if u64::from(spec.a) < k || u64::from(spec.b) * u64::from(spec.tau) < k {
        return Err(Error::Precondition(
            "outside the two-type regime (needs a >= k and b*tau >= k); use the general solver"
                .into(),
        ));
    }
    let (a, b, tau, kr) = (
        int(spec.a.into()),
        int(spec.b.into()),
        int(spec.tau.into()),
        int(spec.k.into()),
    );
    let (p, q) = (&spec.p, &spec.q);
    let denom = &a * q + &b * p * &tau;
    let y_bar = &a * q / &denom;
    let j_hat = p * &b * &kr / &denom;
    let value = p * q * &kr / &denom;
    let m = spec.k / spec.tau;
    if j_hat > int(m.into()) {
        return Err(Error::Precondition(format!(
            "mean type-2 count {j_hat} exceeds floor(k/tau) = {m}; the searcher cannot \
             equalize, use the general solver"
        )));
    }

    let floor = j_hat.floor();
    let lo = floor.to_integer().to_u32().expect("bounded by m");
    let searcher_mix = if j_hat.is_integer() {
        vec![(lo, Rational::one())]
    } else {
        let upper_weight = &j_hat - &floor;
        vec![
            (lo, Rational::one() - &upper_weight),
            (lo + 1, upper_weight),
        ]
    };

    Ok(TwoTypeSolution {
        y_bar,
        j_hat,
        m,
        value,
        searcher_mix,
    })
}
