use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use search_pursuit::closed_forms::{
    mix_over_rows, solve_arithmetic_times, solve_constant_times, solve_two_type, TwoTypeSpec,
};
use search_pursuit::game::{
    build_matrix, maximal_feasible_sets_capped, reduced_matrix, PayoffMatrix,
};
use search_pursuit::learning::{
    posterior_after_escape, proposition6_check, solve_learning, LearningSpec,
};
use search_pursuit::lp::solve_zero_sum;
use search_pursuit::oracle::{sweep_k, verify_equilibrium, Certificate};
use search_pursuit::rational::{format_rational, int, parse_rational};
use search_pursuit::{Error, GameSpec, Rational};

use crate::document::{
    hider_entries, CertificateSummary, ExactValue, Labels, Provenance, ResultDocument,
    SearcherEntry,
};
use crate::input::{GameFile, Mode};
use crate::render::{fraction_and_decimal, Table};
use crate::CliError;

const LEARNING_NAMES: [&str; 2] = ["rs", "rd"];

pub struct Settings {
    pub paper_names: bool,
    pub max_subsets: usize,
}

fn searcher_from_rows(
    payoff: &PayoffMatrix,
    weights: &[Rational],
    labels: &Labels,
) -> Vec<SearcherEntry> {
    payoff
        .sets()
        .iter()
        .zip(weights)
        .filter(|(_, w)| !w.is_zero())
        .map(|(set, w)| SearcherEntry {
            set: labels.set(set.indices()),
            locations: Some(set.labels()),
            probability: format_rational(w),
        })
        .collect()
}

fn provenance(closed: &Rational, lp: &Rational) -> (Provenance, Option<ExactValue>) {
    if closed == lp {
        (Provenance::Both, None)
    } else {
        (Provenance::ClosedForm, Some(ExactValue::new(lp)))
    }
}

struct Parts {
    value: Rational,
    hider: Vec<Rational>,
    searcher: Vec<SearcherEntry>,
    provenance: Provenance,
    lp_value: Option<ExactValue>,
    certificate: Certificate,
    labels: Labels,
}

/// Runs the solver for `mode` and certifies the result against the full
/// (maximal-set) payoff matrix.
pub fn solve(game: &GameFile, mode: Mode, settings: &Settings) -> Result<ResultDocument, CliError> {
    let parts = match mode {
        Mode::General => solve_general(&game.game_spec()?, settings)?,
        Mode::ConstantTimes => solve_constant(&game.game_spec()?, settings)?,
        Mode::ArithmeticTimes => solve_arithmetic(&game.game_spec()?, settings)?,
        Mode::TwoType => solve_two_type_mode(&game.two_type_spec()?, settings)?,
        Mode::Learning => solve_learning_mode(&game.learning_spec()?)?,
    };
    Ok(ResultDocument {
        mode,
        value: ExactValue::new(&parts.value),
        hider: hider_entries(&parts.labels, &parts.hider),
        searcher: parts.searcher,
        provenance: parts.provenance,
        certificate: CertificateSummary::new(&parts.certificate),
        lp_value: parts.lp_value,
        timing_ms: None,
    })
}

fn solve_general(spec: &GameSpec, settings: &Settings) -> Result<Parts, CliError> {
    let labels = Labels::new(spec.times(), settings.paper_names);
    let payoff = reduced_matrix(spec, settings.max_subsets)?;
    let sol = solve_zero_sum(payoff.matrix())?;
    let certificate = verify_equilibrium(
        payoff.matrix(),
        &sol.col_strategy,
        &sol.row_strategy,
        &sol.value,
    )?;
    Ok(Parts {
        searcher: searcher_from_rows(&payoff, &sol.row_strategy, &labels),
        value: sol.value,
        hider: sol.col_strategy,
        provenance: Provenance::Lp,
        lp_value: None,
        certificate,
        labels,
    })
}

fn solve_constant(spec: &GameSpec, settings: &Settings) -> Result<Parts, CliError> {
    let t = &spec.times()[0];
    if spec.times().iter().any(|x| x != t) {
        return Err(CliError::input(
            "mode constant-times needs equal search times",
        ));
    }
    let count = (spec.budget() / t)
        .floor()
        .to_integer()
        .to_usize()
        .ok_or_else(|| CliError::input("budget is too large"))?;
    let closed = solve_constant_times(spec.captures(), count)?;
    let labels = Labels::new(spec.times(), settings.paper_names);
    let payoff = reduced_matrix(spec, settings.max_subsets)?;
    let lp = solve_zero_sum(payoff.matrix())?;
    let certificate = verify_equilibrium(
        payoff.matrix(),
        closed.h.probs(),
        &lp.row_strategy,
        &closed.value,
    )?;
    let (provenance, lp_value) = provenance(&closed.value, &lp.value);
    Ok(Parts {
        searcher: searcher_from_rows(&payoff, &lp.row_strategy, &labels),
        value: closed.value,
        hider: closed.h.into_probs(),
        provenance,
        lp_value,
        certificate,
        labels,
    })
}

fn solve_arithmetic(spec: &GameSpec, settings: &Settings) -> Result<Parts, CliError> {
    let n = spec.n();
    let arithmetic = spec
        .times()
        .iter()
        .enumerate()
        .all(|(i, t)| *t == int(i as i64 + 1));
    if !arithmetic || *spec.budget() != int(n as i64) {
        return Err(CliError::input(
            "mode arithmetic-times needs search times 1, 2, ..., n and budget n",
        ));
    }
    let closed = solve_arithmetic_times(spec.captures())?;
    let labels = Labels::new(spec.times(), settings.paper_names);
    let payoff = reduced_matrix(spec, settings.max_subsets)?;
    let lp = solve_zero_sum(payoff.matrix())?;
    let mix = mix_over_rows(&payoff, &closed.searcher)?;
    let certificate =
        verify_equilibrium(payoff.matrix(), closed.hider.probs(), &mix, &closed.value)?;
    let (provenance, lp_value) = provenance(&closed.value, &lp.value);
    Ok(Parts {
        searcher: searcher_from_rows(&payoff, &mix, &labels),
        value: closed.value,
        hider: closed.hider.into_probs(),
        provenance,
        lp_value,
        certificate,
        labels,
    })
}

fn solve_two_type_mode(ts: &TwoTypeSpec, settings: &Settings) -> Result<Parts, CliError> {
    let closed = solve_two_type(ts)?;
    let spec = ts.to_game_spec()?;
    let labels = Labels::new(spec.times(), settings.paper_names);
    let payoff = reduced_matrix(&spec, settings.max_subsets)?;
    let lp = solve_zero_sum(payoff.matrix())?;
    let (hider, mix) = ts.expand_strategies(&closed, &payoff)?;
    let certificate = verify_equilibrium(payoff.matrix(), &hider, &mix, &closed.value)?;
    let (provenance, lp_value) = provenance(&closed.value, &lp.value);
    Ok(Parts {
        searcher: searcher_from_rows(&payoff, &mix, &labels),
        value: closed.value,
        hider,
        provenance,
        lp_value,
        certificate,
        labels,
    })
}

fn solve_learning_mode(spec: &LearningSpec) -> Result<Parts, CliError> {
    let sol = solve_learning(spec)?;
    let (hider, searcher) = if sol.shortcut_applied {
        let mix = vec![sol.prob_rs.clone(), sol.prob_rd.clone()];
        (mix.clone(), mix)
    } else {
        let lp = solve_zero_sum(&sol.matrix_a)?;
        (lp.col_strategy, lp.row_strategy)
    };
    let certificate = verify_equilibrium(&sol.matrix_a, &hider, &searcher, &sol.value_a)?;
    let (provenance, lp_value) = provenance(&sol.value_a, &sol.value_lp);
    Ok(Parts {
        searcher: LEARNING_NAMES
            .iter()
            .zip(&searcher)
            .filter(|(_, w)| !w.is_zero())
            .map(|(name, w)| SearcherEntry {
                set: name.to_string(),
                locations: None,
                probability: format_rational(w),
            })
            .collect(),
        value: sol.value_a,
        hider,
        provenance,
        lp_value,
        certificate,
        labels: Labels::named(&LEARNING_NAMES),
    })
}

pub fn solve_table(doc: &ResultDocument) -> String {
    let value = parse_rational(&doc.value.exact).expect("rendered by us");
    let mut out = String::new();
    out.push_str(&format!("mode         {}\n", doc.mode.name()));
    out.push_str(&format!("value        {}\n", fraction_and_decimal(&value)));
    let provenance = match doc.provenance {
        Provenance::Lp => "lp",
        Provenance::ClosedForm => "closed-form",
        Provenance::Both => "both (closed form = lp)",
    };
    out.push_str(&format!("provenance   {provenance}\n"));
    if let Some(lp) = &doc.lp_value {
        out.push_str(&format!(
            "lp value     {} ({})  -- closed form disagrees\n",
            lp.exact, lp.decimal
        ));
    }
    out.push_str(&format!(
        "certificate  {} (min hider slack {}, min searcher slack {})\n",
        if doc.certificate.ok { "ok" } else { "FAILED" },
        doc.certificate.min_hider_slack,
        doc.certificate.min_searcher_slack
    ));
    if let Some(ms) = doc.timing_ms {
        out.push_str(&format!("time         {ms:.3} ms\n"));
    }
    out.push_str("\nhider\n");
    let mut t = Table::new(&["location", "probability"]);
    for h in &doc.hider {
        t.row(vec![h.label.clone(), h.probability.clone()]);
    }
    out.push_str(&t.render());
    out.push_str("\nsearcher\n");
    let mut t = Table::new(&["set", "probability"]);
    for s in &doc.searcher {
        t.row(vec![s.set.clone(), s.probability.clone()]);
    }
    out.push_str(&t.render());
    out
}

#[derive(Debug, Serialize)]
pub struct SweepEntry {
    pub k: String,
    pub value: ExactValue,
    pub hider: Vec<String>,
    pub hider_unique: bool,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SweepDocument {
    pub rows: Vec<SweepEntry>,
}

impl SweepDocument {
    /// Every row certified and every closed form equal to its LP value.
    pub fn consistent(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.certified && r.closed_form.as_ref().is_none_or(|c| *c == r.value.exact))
    }
}

fn integer_budget(r: &Rational) -> Result<i64, CliError> {
    if !r.is_integer() {
        return Err(CliError::input(format!(
            "sweep budgets must be integers, file has {r}"
        )));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| CliError::input("budget is too large"))
}

/// Solves the file's game at each integer budget in the range (default: the
/// file's own budget). Two-type files also report the closed form wherever
/// it applies.
pub fn sweep(
    game: &GameFile,
    mode: Mode,
    k_from: Option<i64>,
    k_to: Option<i64>,
    settings: &Settings,
) -> Result<SweepDocument, CliError> {
    let spec = match mode {
        Mode::TwoType => game.two_type_spec()?.to_game_spec()?,
        Mode::Learning => return Err(CliError::input("sweep does not apply to the learning game")),
        _ => game.game_spec()?,
    };
    let from = match k_from {
        Some(k) => k,
        None => integer_budget(spec.budget())?,
    };
    let to = match k_to {
        Some(k) => k,
        None => from.max(integer_budget(spec.budget())?),
    };
    let rows = sweep_k(&spec, from, to, settings.max_subsets).map_err(|e| match e {
        Error::NotMonotone(_) => CliError::internal(format!("internal error: {e}")),
        other => other.into(),
    })?;
    let two_type = if mode == Mode::TwoType {
        Some(game.two_type_spec()?)
    } else {
        None
    };
    let rows = rows
        .into_iter()
        .map(|row| {
            let closed_form = two_type.as_ref().and_then(|ts| {
                let k = row.k.to_integer().to_u32()?;
                solve_two_type(&TwoTypeSpec { k, ..ts.clone() })
                    .ok()
                    .map(|s| format_rational(&s.value))
            });
            SweepEntry {
                k: format_rational(&row.k),
                value: ExactValue::new(&row.value),
                hider: row.hider.iter().map(format_rational).collect(),
                hider_unique: row.hider_ranges.unique,
                certified: row.certified,
                closed_form,
            }
        })
        .collect();
    Ok(SweepDocument { rows })
}

pub fn sweep_table(doc: &SweepDocument, labels: &Labels) -> String {
    let with_closed = doc.rows.iter().any(|r| r.closed_form.is_some());
    let n = doc.rows.first().map_or(0, |r| r.hider.len());
    let mut headers = vec!["k".to_string()];
    headers.extend((0..n).map(|i| format!("h{}", labels.get(i))));
    headers.extend(["value", "decimal", "unique"].map(String::from));
    if with_closed {
        headers.push("closed form".into());
    }
    let mut t = Table::new(&headers.iter().map(String::as_str).collect::<Vec<_>>());
    for r in &doc.rows {
        let mut cells = vec![r.k.clone()];
        cells.extend(r.hider.iter().cloned());
        cells.push(r.value.exact.clone());
        cells.push(r.value.decimal.clone());
        cells.push(if r.hider_unique { "yes" } else { "no" }.into());
        if with_closed {
            cells.push(r.closed_form.clone().unwrap_or_else(|| "-".into()));
        }
        t.row(cells);
    }
    t.render()
}

pub fn sweep_labels(game: &GameFile, mode: Mode, settings: &Settings) -> Result<Labels, CliError> {
    let spec = match mode {
        Mode::TwoType => game.two_type_spec()?.to_game_spec()?,
        _ => game.game_spec()?,
    };
    Ok(Labels::new(spec.times(), settings.paper_names))
}

#[derive(Debug, Serialize)]
pub struct LearningReport {
    pub low: String,
    pub high: String,
    pub matrix_a: Vec<Vec<String>>,
    pub diagonal_y: [String; 2],
    pub value: ExactValue,
    pub value_routes_agree: bool,
    pub prob_rs: String,
    pub prob_rd: String,
    pub diagonal_shortcut: bool,
    /// Absent when no escape can happen or `rs` is never played.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub posterior: Option<PosteriorReport>,
    pub return_to_same_location: bool,
}

#[derive(Debug, Serialize)]
pub struct PosteriorReport {
    pub prob_high_given_escape: String,
    pub expected_escape_next: String,
    pub implied_capture_x: String,
    pub q_low_capture: String,
}

pub fn learning(low: &Rational, high: &Rational) -> Result<LearningReport, CliError> {
    let spec = LearningSpec::new(low.clone(), high.clone())?;
    let sol = solve_learning(&spec)?;
    let posterior = posterior_after_escape(&spec, &sol)
        .ok()
        .map(|p| PosteriorReport {
            prob_high_given_escape: format_rational(&p.prob_high_given_escape),
            expected_escape_next: format_rational(&p.expected_escape_next),
            implied_capture_x: format_rational(&p.implied_capture_x),
            q_low_capture: format_rational(&p.q_low_capture),
        });
    let a = &sol.matrix_a;
    Ok(LearningReport {
        low: format_rational(low),
        high: format_rational(high),
        matrix_a: (0..a.rows())
            .map(|r| a.row(r).iter().map(format_rational).collect())
            .collect(),
        diagonal_y: [
            format_rational(&sol.diag_y.0),
            format_rational(&sol.diag_y.1),
        ],
        value: ExactValue::new(&sol.value_a),
        value_routes_agree: sol.values_agree(),
        prob_rs: format_rational(&sol.prob_rs),
        prob_rd: format_rational(&sol.prob_rd),
        diagonal_shortcut: sol.shortcut_applied,
        posterior,
        return_to_same_location: proposition6_check(&spec),
    })
}

pub fn learning_table(r: &LearningReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "escape probabilities  low {}  high {}\n\n",
        r.low, r.high
    ));
    out.push_str("matrix A (searcher rows, hider columns: rs, rd)\n");
    let mut t = Table::new(&["", "rs", "rd"]);
    for (name, row) in LEARNING_NAMES.iter().zip(&r.matrix_a) {
        t.row(vec![name.to_string(), row[0].clone(), row[1].clone()]);
    }
    out.push_str(&t.render());
    out.push_str(&format!(
        "\ndiag Y                {}, {}\n",
        r.diagonal_y[0], r.diagonal_y[1]
    ));
    out.push_str(&format!(
        "V(A)                  {} ({})\n",
        r.value.exact, r.value.decimal
    ));
    out.push_str(&format!(
        "routes agree          {}\n",
        if r.value_routes_agree { "yes" } else { "NO" }
    ));
    out.push_str(&format!("P(rs)                 {}\n", r.prob_rs));
    out.push_str(&format!("P(rd)                 {}\n", r.prob_rd));
    match &r.posterior {
        Some(p) => {
            out.push_str(&format!(
                "P(high | escape)      {}\n",
                p.prob_high_given_escape
            ));
            out.push_str(&format!(
                "E[escape next round]  {}\n",
                p.expected_escape_next
            ));
            out.push_str(&format!("implied capture x     {}\n", p.implied_capture_x));
            out.push_str(&format!("q                     {}\n", p.q_low_capture));
        }
        None => out.push_str("posterior             undefined (no escape possible or rs unused)\n"),
    }
    out.push_str(&format!(
        "return to same place  {}\n",
        if r.return_to_same_location {
            "yes"
        } else {
            "no"
        }
    ));
    out
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub value: String,
    pub min_hider_slack: String,
    pub min_searcher_slack: String,
    /// The plan that beats the claimed value the most against the hider.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_row: Option<Violation>,
    /// The location where the searcher falls furthest below the value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_column: Option<Violation>,
}

#[derive(Debug, Serialize)]
pub struct Violation {
    pub name: String,
    pub slack: String,
}

fn parse_probability(text: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::input(format!("{what}: {e}")))
}

/// Re-checks a result document against the game it claims to solve.
pub fn verify(
    game: &GameFile,
    doc: &ResultDocument,
    settings: &Settings,
) -> Result<VerifyReport, CliError> {
    let value = parse_probability(&doc.value.exact, "value")?;
    let (matrix, row_names, col_names, searcher) = match doc.mode {
        Mode::Learning => {
            let sol = solve_learning(&game.learning_spec()?)?;
            let mut mix = vec![Rational::zero(); 2];
            for entry in &doc.searcher {
                let row = LEARNING_NAMES
                    .iter()
                    .position(|n| *n == entry.set)
                    .ok_or_else(|| {
                        CliError::input(format!("unknown learning strategy `{}`", entry.set))
                    })?;
                mix[row] += parse_probability(&entry.probability, &entry.set)?;
            }
            let names: Vec<String> = LEARNING_NAMES.iter().map(|s| s.to_string()).collect();
            (sol.matrix_a, names.clone(), names, mix)
        }
        mode => {
            let spec = match mode {
                Mode::TwoType => game.two_type_spec()?.to_game_spec()?,
                _ => game.game_spec()?,
            };
            let labels = Labels::new(spec.times(), settings.paper_names);
            let mut sets = maximal_feasible_sets_capped(&spec, settings.max_subsets)?;
            let mut weights = Vec::new();
            for entry in &doc.searcher {
                let members = entry.locations.as_ref().ok_or_else(|| {
                    CliError::input(format!("set `{}` has no locations", entry.set))
                })?;
                if members.iter().any(|&m| m == 0 || m > spec.n()) {
                    return Err(CliError::input(format!(
                        "set `{}` names a missing location",
                        entry.set
                    )));
                }
                let zero_based: Vec<usize> = members.iter().map(|m| m - 1).collect();
                let set = spec.search_set(&zero_based)?;
                if !spec.is_feasible(&set) {
                    return Err(CliError::input(format!(
                        "set `{}` exceeds the budget",
                        entry.set
                    )));
                }
                if !sets.contains(&set) {
                    sets.push(set.clone());
                }
                weights.push((set, parse_probability(&entry.probability, &entry.set)?));
            }
            let payoff = build_matrix(&spec, &sets)?;
            let mix = mix_over_rows(&payoff, &weights)?;
            let row_names = payoff
                .sets()
                .iter()
                .map(|s| labels.set(s.indices()))
                .collect();
            let col_names = (0..spec.n()).map(|i| labels.get(i).to_string()).collect();
            (payoff.matrix().clone(), row_names, col_names, mix)
        }
    };
    let hider = hider_vector(doc, matrix.cols())?;
    let cert = verify_equilibrium(&matrix, &hider, &searcher, &value).map_err(|e| match e {
        Error::InvalidStrategy(m) | Error::DimensionMismatch(m) => CliError::input(m),
        other => other.into(),
    })?;
    let summary = CertificateSummary::new(&cert);
    Ok(VerifyReport {
        ok: cert.ok,
        value: format_rational(&value),
        min_hider_slack: summary.min_hider_slack,
        min_searcher_slack: summary.min_searcher_slack,
        worst_row: cert.worst_row().map(|(r, s)| Violation {
            name: row_names[r].clone(),
            slack: format_rational(s),
        }),
        worst_column: cert.worst_col().map(|(c, s)| Violation {
            name: col_names[c].clone(),
            slack: format_rational(s),
        }),
    })
}

fn hider_vector(doc: &ResultDocument, cols: usize) -> Result<Vec<Rational>, CliError> {
    if doc.hider.len() != cols {
        return Err(CliError::input(format!(
            "solution has {} hider entries, game has {cols} locations",
            doc.hider.len()
        )));
    }
    let mut probs: Vec<Option<Rational>> = vec![None; cols];
    for entry in &doc.hider {
        let slot = entry
            .location
            .checked_sub(1)
            .and_then(|i| probs.get_mut(i))
            .ok_or_else(|| {
                CliError::input(format!("hider location {} is out of range", entry.location))
            })?;
        if slot.is_some() {
            return Err(CliError::input(format!(
                "hider location {} listed twice",
                entry.location
            )));
        }
        *slot = Some(parse_probability(&entry.probability, &entry.label)?);
    }
    Ok(probs
        .into_iter()
        .map(|p| p.expect("each slot filled once"))
        .collect())
}

pub fn verify_table(r: &VerifyReport) -> String {
    let mut out = format!(
        "certificate  {}\nvalue        {}\nmin hider slack     {}\nmin searcher slack  {}\n",
        if r.ok { "ok" } else { "FAILED" },
        r.value,
        r.min_hider_slack,
        r.min_searcher_slack
    );
    if let Some(v) = &r.worst_row {
        out.push_str(&format!(
            "plan {} beats the value: hider slack {}\n",
            v.name, v.slack
        ));
    }
    if let Some(v) = &r.worst_column {
        out.push_str(&format!(
            "location {} holds the searcher below the value: searcher slack {}\n",
            v.name, v.slack
        ));
    }
    out
}
