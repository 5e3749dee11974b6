//! The search game: locations with search times and capture probabilities, a
//! total search budget, and the searcher's feasible inspection sets.
//!
//! A pure searcher strategy is a set `A` of locations with total search time
//! `T(A) <= k`. A hider at location `i` is captured with probability `p_i` if
//! `i` is in `A` and escapes otherwise. Adding a location to a feasible set
//! never hurts the searcher, so only inclusion-maximal sets need to appear as
//! matrix rows.
//!
//! Locations are 1-based in every printed form and in [`SearchSet::labels`];
//! the vectors inside this module are indexed from zero.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{int, sum, Rational};

/// Cap on the number of feasible sets visited by exhaustive enumeration.
pub const DEFAULT_MAX_SUBSETS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    times: Vec<Rational>,
    captures: Vec<Rational>,
    budget: Rational,
}

impl GameSpec {
    pub fn new(times: Vec<Rational>, captures: Vec<Rational>, budget: Rational) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidSpec(
                "at least one location is required".into(),
            ));
        }
        if times.len() != captures.len() {
            return Err(Error::InvalidSpec(format!(
                "{} search times but {} capture probabilities",
                times.len(),
                captures.len()
            )));
        }
        if let Some(i) = times.iter().position(|t| !t.is_positive()) {
            return Err(Error::InvalidSpec(format!(
                "search time of location {} must be positive, got {}",
                i + 1,
                times[i]
            )));
        }
        if let Some(i) = captures
            .iter()
            .position(|p| !p.is_positive() || *p > Rational::one())
        {
            return Err(Error::InvalidSpec(format!(
                "capture probability of location {} must lie in (0, 1], got {}",
                i + 1,
                captures[i]
            )));
        }
        if budget.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "budget must be nonnegative, got {budget}"
            )));
        }
        Ok(GameSpec {
            times,
            captures,
            budget,
        })
    }

    /// Search times `1, 2, ..., n` for the given capture vector.
    pub fn arithmetic(captures: Vec<Rational>, budget: Rational) -> Result<Self> {
        let times = (1..=captures.len() as i64).map(int).collect();
        GameSpec::new(times, captures, budget)
    }

    /// Every location takes one unit of time to search.
    pub fn unit_times(captures: Vec<Rational>, budget: Rational) -> Result<Self> {
        let times = vec![Rational::one(); captures.len()];
        GameSpec::new(times, captures, budget)
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn captures(&self) -> &[Rational] {
        &self.captures
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn with_budget(&self, budget: Rational) -> Result<Self> {
        GameSpec::new(self.times.clone(), self.captures.clone(), budget)
    }

    pub fn total_time(&self) -> Rational {
        sum(&self.times)
    }

    /// `T(A)` for zero-based indices.
    pub fn time_of(&self, indices: &[usize]) -> Rational {
        sum(indices.iter().map(|&i| &self.times[i]))
    }

    pub fn search_set(&self, indices: &[usize]) -> Result<SearchSet> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::InvalidStrategy(
                "search set repeats a location".into(),
            ));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i >= self.n()) {
            return Err(Error::InvalidStrategy(format!(
                "location {} does not exist (n = {})",
                bad + 1,
                self.n()
            )));
        }
        let total_time = self.time_of(&sorted);
        Ok(SearchSet {
            indices: sorted,
            total_time,
        })
    }

    pub fn is_feasible(&self, set: &SearchSet) -> bool {
        set.total_time <= self.budget
    }
}

/// A set of locations inspected by the searcher.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SearchSet {
    indices: Vec<usize>,
    total_time: Rational,
}

impl SearchSet {
    /// Zero-based, sorted member indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// One-based location labels.
    pub fn labels(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn total_time(&self) -> &Rational {
        &self.total_time
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Renders the set with a custom label per zero-based index.
    pub fn display_with(&self, label: impl Fn(usize) -> String) -> String {
        let parts: Vec<String> = self.indices.iter().map(|&i| label(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for SearchSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| (i + 1).to_string()))
    }
}

/// A hiding distribution over the locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiderStrategy {
    probs: Vec<Rational>,
}

impl HiderStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidStrategy(
                "hiding probabilities must be nonnegative".into(),
            ));
        }
        let total = sum(&probs);
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!(
                "hiding probabilities sum to {total}, not 1"
            )));
        }
        Ok(HiderStrategy { probs })
    }

    pub fn point_mass(n: usize, index: usize) -> Self {
        let mut probs = vec![Rational::zero(); n];
        probs[index] = Rational::one();
        HiderStrategy { probs }
    }

    pub fn uniform(n: usize) -> Self {
        let share = Rational::new(1.into(), (n as i64).into());
        HiderStrategy {
            probs: vec![share; n],
        }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }
}

/// Payoffs `P(A, i)` for a list of search sets against every location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix {
    sets: Vec<SearchSet>,
    matrix: Matrix,
}

impl PayoffMatrix {
    pub fn sets(&self) -> &[SearchSet] {
        &self.sets
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, location: usize) -> &Rational {
        self.matrix.get(row, location)
    }

    pub fn row_of(&self, set: &SearchSet) -> Option<usize> {
        self.sets.iter().position(|s| s.indices == set.indices)
    }
}

/// Knapsack view of the searcher's best response: weights are search times,
/// benefits are `h_i * p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub weights: Vec<Rational>,
    pub benefits: Vec<Rational>,
    pub capacity: Rational,
}

impl KnapsackInstance {
    pub fn for_hider(spec: &GameSpec, h: &HiderStrategy) -> Result<Self> {
        if h.probs.len() != spec.n() {
            return Err(Error::DimensionMismatch(format!(
                "hider strategy has {} entries for {} locations",
                h.probs.len(),
                spec.n()
            )));
        }
        let benefits = h
            .probs
            .iter()
            .zip(&spec.captures)
            .map(|(hi, pi)| hi * pi)
            .collect();
        Ok(KnapsackInstance {
            weights: spec.times.clone(),
            benefits,
            capacity: spec.budget.clone(),
        })
    }

    /// Exact optimum over the inclusion-maximal packings. Returns the zero-based
    /// indices and the total benefit; ties go to the lexicographically smallest
    /// member list.
    pub fn solve(&self, max_subsets: usize) -> Result<(Vec<usize>, Rational)> {
        let mut best: Option<(Vec<usize>, Rational)> = None;
        walk_feasible(
            &self.weights,
            &self.capacity,
            max_subsets,
            |members, used| {
                if !is_maximal(&self.weights, &self.capacity, members, used) {
                    return;
                }
                let benefit = sum(members.iter().map(|&i| &self.benefits[i]));
                if best.as_ref().is_none_or(|(_, b)| benefit > *b) {
                    best = Some((members.to_vec(), benefit));
                }
            },
        )?;
        Ok(best.expect("the empty set is always feasible"))
    }
}

/// Depth-first walk over all sets with total weight at most `capacity`, in
/// lexicographic order of their sorted member lists (the empty set first).
fn walk_feasible(
    weights: &[Rational],
    capacity: &Rational,
    max_subsets: usize,
    mut visit: impl FnMut(&[usize], &Rational),
) -> Result<()> {
    struct Walk<'a, F> {
        weights: &'a [Rational],
        capacity: &'a Rational,
        max_subsets: usize,
        visited: usize,
        members: Vec<usize>,
        visit: F,
    }

    impl<F: FnMut(&[usize], &Rational)> Walk<'_, F> {
        fn descend(&mut self, start: usize, used: &Rational) -> Result<()> {
            self.visited += 1;
            if self.visited > self.max_subsets {
                return Err(Error::TooLarge {
                    cap: self.max_subsets,
                });
            }
            (self.visit)(&self.members, used);
            for i in start..self.weights.len() {
                let next = used + &self.weights[i];
                if next <= *self.capacity {
                    self.members.push(i);
                    self.descend(i + 1, &next)?;
                    self.members.pop();
                }
            }
            Ok(())
        }
    }

    if capacity.is_negative() {
        return Ok(());
    }
    let mut walk = Walk {
        weights,
        capacity,
        max_subsets,
        visited: 0,
        members: Vec::new(),
        visit: &mut visit,
    };
    walk.descend(0, &Rational::zero())
}

fn is_maximal(
    weights: &[Rational],
    capacity: &Rational,
    members: &[usize],
    used: &Rational,
) -> bool {
    let slack = capacity - used;
    weights
        .iter()
        .enumerate()
        .filter(|(i, _)| members.binary_search(i).is_err())
        .all(|(_, w)| *w > slack)
}

pub fn feasible_sets(spec: &GameSpec) -> Result<Vec<SearchSet>> {
    feasible_sets_capped(spec, DEFAULT_MAX_SUBSETS)
}

pub fn feasible_sets_capped(spec: &GameSpec, max_subsets: usize) -> Result<Vec<SearchSet>> {
    let mut out = Vec::new();
    walk_feasible(&spec.times, &spec.budget, max_subsets, |members, used| {
        out.push(SearchSet {
            indices: members.to_vec(),
            total_time: used.clone(),
        });
    })?;
    Ok(out)
}

/// Feasible sets with no feasible strict superset: the searcher strategies
/// that are not weakly dominated.
pub fn maximal_feasible_sets(spec: &GameSpec) -> Result<Vec<SearchSet>> {
    maximal_feasible_sets_capped(spec, DEFAULT_MAX_SUBSETS)
}

pub fn maximal_feasible_sets_capped(spec: &GameSpec, max_subsets: usize) -> Result<Vec<SearchSet>> {
    let mut out = Vec::new();
    walk_feasible(&spec.times, &spec.budget, max_subsets, |members, used| {
        if is_maximal(&spec.times, &spec.budget, members, used) {
            out.push(SearchSet {
                indices: members.to_vec(),
                total_time: used.clone(),
            });
        }
    })?;
    Ok(out)
}

/// Payoff matrix with one row per set, in the given order.
pub fn build_matrix(spec: &GameSpec, rows: &[SearchSet]) -> Result<PayoffMatrix> {
    let mut matrix = Matrix::zeros(rows.len(), spec.n());
    for (r, set) in rows.iter().enumerate() {
        if let Some(&bad) = set.indices.iter().find(|&&i| i >= spec.n()) {
            return Err(Error::InvalidStrategy(format!(
                "row {set} names location {} but n = {}",
                bad + 1,
                spec.n()
            )));
        }
        if !spec.is_feasible(set) {
            return Err(Error::InvalidStrategy(format!(
                "row {set} needs time {} but the budget is {}",
                set.total_time, spec.budget
            )));
        }
        for &i in &set.indices {
            matrix.set(r, i, spec.captures[i].clone());
        }
    }
    Ok(PayoffMatrix {
        sets: rows.to_vec(),
        matrix,
    })
}

/// Matrix over the undominated (maximal) sets.
pub fn reduced_matrix(spec: &GameSpec, max_subsets: usize) -> Result<PayoffMatrix> {
    let rows = maximal_feasible_sets_capped(spec, max_subsets)?;
    build_matrix(spec, &rows)
}

/// The searcher's best reply to `h` and the capture probability it achieves.
pub fn best_response_value(spec: &GameSpec, h: &HiderStrategy) -> Result<(SearchSet, Rational)> {
    best_response_value_capped(spec, h, DEFAULT_MAX_SUBSETS)
}

pub fn best_response_value_capped(
    spec: &GameSpec,
    h: &HiderStrategy,
    max_subsets: usize,
) -> Result<(SearchSet, Rational)> {
    let knapsack = KnapsackInstance::for_hider(spec, h)?;
    let (members, value) = knapsack.solve(max_subsets)?;
    Ok((spec.search_set(&members)?, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn example_3_1() -> GameSpec {
        GameSpec::new(
            ints(&[5, 3, 4, 7]),
            vec![ratio(1, 10), ratio(2, 10), ratio(15, 100), ratio(4, 10)],
            int(7),
        )
        .unwrap()
    }

    fn table_family(k: i64) -> GameSpec {
        GameSpec::arithmetic(
            vec![
                ratio(1, 2),
                ratio(2, 5),
                ratio(3, 10),
                ratio(1, 5),
                ratio(1, 10),
            ],
            int(k),
        )
        .unwrap()
    }

    fn labels(sets: &[SearchSet]) -> Vec<Vec<usize>> {
        sets.iter().map(SearchSet::labels).collect()
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(GameSpec::new(vec![], vec![], int(1)).is_err());
        assert!(GameSpec::new(ints(&[1, 2]), ints(&[1]), int(1)).is_err());
        assert!(GameSpec::new(ints(&[0]), ints(&[1]), int(1)).is_err());
        assert!(GameSpec::new(ints(&[1]), ints(&[0]), int(1)).is_err());
        assert!(GameSpec::new(ints(&[1]), vec![ratio(3, 2)], int(1)).is_err());
        assert!(GameSpec::new(ints(&[1]), ints(&[1]), int(-1)).is_err());
    }

    #[test]
    fn feasible_sets_of_the_four_location_example() {
        let sets = feasible_sets(&example_3_1()).unwrap();
        assert_eq!(
            labels(&sets),
            vec![vec![], vec![1], vec![2], vec![2, 3], vec![3], vec![4]]
        );
        assert_eq!(sets[3].total_time(), &int(7));
    }

    #[test]
    fn zero_budget_leaves_only_the_empty_set() {
        let spec = GameSpec::unit_times(ints(&[1, 1, 1]), int(0)).unwrap();
        let sets = feasible_sets(&spec).unwrap();
        assert_eq!(labels(&sets), vec![Vec::<usize>::new()]);
        assert_eq!(
            labels(&maximal_feasible_sets(&spec).unwrap()),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn unit_times_budget_two_gives_sixteen_sets() {
        let spec = GameSpec::unit_times(vec![ratio(1, 2); 5], int(2)).unwrap();
        let sets = feasible_sets(&spec).unwrap();
        assert_eq!(sets.len(), 1 + 5 + 10);
        assert!(sets.iter().all(|s| s.len() <= 2));
    }

    #[test]
    fn maximal_sets_match_the_reduced_example() {
        let sets = maximal_feasible_sets(&example_3_1()).unwrap();
        assert_eq!(labels(&sets), vec![vec![1], vec![2, 3], vec![4]]);

        let all = GameSpec::unit_times(ints(&[1, 1, 1]), int(3)).unwrap();
        assert_eq!(
            labels(&maximal_feasible_sets(&all).unwrap()),
            vec![vec![1, 2, 3]]
        );
    }

    #[test]
    fn maximal_sets_of_the_five_location_family() {
        let sets = maximal_feasible_sets(&table_family(5)).unwrap();
        let mut got = labels(&sets);
        got.sort();
        assert_eq!(
            got,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![5]]
        );
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let spec = GameSpec::unit_times(vec![ratio(1, 2); 10], int(10)).unwrap();
        assert_eq!(
            feasible_sets_capped(&spec, 1023),
            Err(Error::TooLarge { cap: 1023 })
        );
        assert_eq!(feasible_sets_capped(&spec, 1024).unwrap().len(), 1024);
        assert!(maximal_feasible_sets_capped(&spec, 100).is_err());
    }

    #[test]
    fn matrix_rows_follow_membership() {
        let spec = example_3_1();
        let rows = vec![
            spec.search_set(&[0]).unwrap(),
            spec.search_set(&[3]).unwrap(),
            spec.search_set(&[1, 2]).unwrap(),
        ];
        let m = build_matrix(&spec, &rows).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![ratio(1, 10), int(0), int(0), int(0)],
            vec![int(0), int(0), int(0), ratio(2, 5)],
            vec![int(0), ratio(1, 5), ratio(3, 20), int(0)],
        ])
        .unwrap();
        assert_eq!(m.matrix(), &expect);

        let empty = build_matrix(&spec, &[spec.search_set(&[]).unwrap()]).unwrap();
        assert!(empty.matrix().row(0).iter().all(Zero::is_zero));
    }

    #[test]
    fn matrix_of_the_five_location_family_in_printed_order() {
        let spec = table_family(5);
        let order: [&[usize]; 5] = [&[4], &[0, 3], &[1, 2], &[0, 2], &[0, 1]];
        let rows: Vec<SearchSet> = order.iter().map(|s| spec.search_set(s).unwrap()).collect();
        let m = build_matrix(&spec, &rows).unwrap();
        let (h, f, t, w, e) = (
            ratio(1, 2),
            ratio(2, 5),
            ratio(3, 10),
            ratio(1, 5),
            ratio(1, 10),
        );
        let z = int(0);
        let expect = Matrix::from_rows(vec![
            vec![z.clone(), z.clone(), z.clone(), z.clone(), e],
            vec![h.clone(), z.clone(), z.clone(), w, z.clone()],
            vec![z.clone(), f.clone(), t.clone(), z.clone(), z.clone()],
            vec![h.clone(), z.clone(), t, z.clone(), z.clone()],
            vec![h, f, z.clone(), z.clone(), z],
        ])
        .unwrap();
        assert_eq!(m.matrix(), &expect);
    }

    #[test]
    fn build_matrix_rejects_infeasible_rows() {
        let spec = example_3_1();
        let too_big = spec.search_set(&[0, 1]).unwrap();
        assert!(matches!(
            build_matrix(&spec, &[too_big]),
            Err(Error::InvalidStrategy(_))
        ));
    }

    #[test]
    fn best_response_against_the_equilibrium_hider() {
        let spec = example_3_1();
        let h =
            HiderStrategy::new(vec![ratio(12, 23), int(0), ratio(8, 23), ratio(3, 23)]).unwrap();
        let (set, value) = best_response_value(&spec, &h).unwrap();
        assert_eq!(value, ratio(6, 115));
        assert_eq!(set.labels(), vec![1]);

        let h = HiderStrategy::new(vec![
            int(0),
            int(0),
            ratio(2, 11),
            ratio(3, 11),
            ratio(6, 11),
        ])
        .unwrap();
        let spec = table_family(5);
        let (_, value) = best_response_value(&spec, &h).unwrap();
        assert_eq!(value, ratio(3, 55));
        let m = reduced_matrix(&spec, DEFAULT_MAX_SUBSETS).unwrap();
        for (r, set) in m.sets().iter().enumerate() {
            let payoff = m.matrix().row_payoff(r, h.probs());
            if set.labels() == vec![1, 2] {
                assert_eq!(payoff, int(0));
            } else {
                assert_eq!(payoff, ratio(3, 55));
            }
        }
    }

    #[test]
    fn best_response_to_a_point_mass() {
        let spec = example_3_1();
        let (set, value) = best_response_value(&spec, &HiderStrategy::point_mass(4, 0)).unwrap();
        assert!(set.contains(0));
        assert_eq!(value, ratio(1, 10));
    }

    #[test]
    fn hider_strategy_validation() {
        assert!(HiderStrategy::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(HiderStrategy::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(HiderStrategy::new(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        let spec = example_3_1();
        assert!(best_response_value(&spec, &HiderStrategy::uniform(3)).is_err());
    }
}
