//! Contrastive explanations read off analogical proportions.
//!
//! The table is a [`Dataset`] whose class column plays the role of the
//! result being explained. To answer "why is the result of `d` not `p`?" we
//! look for adverse examples: rows with result `p` that differ from `d` only
//! on a (small) change set `Z`. Pairs elsewhere in the table showing the same
//! change with the same result tilt support the explanation; pairs with the
//! same change and no tilt count against it.
//!
//! Nothing here looks at how the result column was produced.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ap::diff_unchecked;
use crate::classifier::PairIndex;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Code, Item};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "target")]
pub enum Question {
    /// Why does the query have its result rather than any other value?
    Why,
    /// Why is the query's result not this value?
    WhyNot(Code),
}

/// The item being explained and its result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub item: Item,
    pub result: Code,
    /// Row of the query in the table, when it is one of the rows.
    pub row: Option<usize>,
}

impl Query {
    pub fn from_row(table: &Dataset, row: usize) -> Result<Self> {
        if row >= table.len() {
            return Err(Error::InvalidParameter(format!(
                "row {row} out of range for {} rows",
                table.len()
            )));
        }
        Ok(Self {
            item: table.item(row).clone(),
            result: table.label(row),
            row: Some(row),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdverseExample {
    pub row: usize,
    /// Attributes where the row differs from the query.
    pub change: Vec<usize>,
}

/// Rows with result `target` that differ from the query on a non-empty set
/// of at most `max_change` attributes, sorted by change size then row.
pub fn find_adverse_examples(
    table: &Dataset,
    query: &Query,
    target: Code,
    max_change: Option<usize>,
) -> Result<Vec<AdverseExample>> {
    table.check_query(&query.item)?;
    if query.result == target {
        return Err(Error::VacuousQuestion(table.label_symbol(target).to_string()));
    }
    let mut out: Vec<AdverseExample> = table
        .rows()
        .enumerate()
        .filter(|(_, (_, label))| *label == target)
        .map(|(row, (x, _))| AdverseExample {
            row,
            change: diff_unchecked(x, &query.item).disagreement(),
        })
        .filter(|a| !a.change.is_empty() && max_change.is_none_or(|m| a.change.len() <= m))
        .collect();
    out.sort_by_key(|a| (a.change.len(), a.row));
    Ok(out)
}

/// Roles of the attributes in a quadruple `a : b :: c : d` with a result
/// tilt `p -> q` inside both pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextSplit {
    /// Same value on all four items.
    pub shared: Vec<usize>,
    /// `a = b` and `c = d`, but the two pairs differ.
    pub context: Vec<usize>,
    /// Changes inside each pair, the same way in both.
    pub change: Vec<usize>,
    pub s: Vec<Code>,
    pub t: Vec<Code>,
    pub u: Vec<Code>,
    pub v: Vec<Code>,
    pub w: Vec<Code>,
    pub p: Code,
    pub q: Code,
}

impl ContextSplit {
    /// Split for `a : b :: c : d` where `c`/`d` is the adverse example and
    /// the query. Without a supporting pair, `a`/`b` default to `c`/`d`.
    fn build(c: &Item, d: &Item, pair: Option<(&Item, &Item)>, p: Code, q: Code) -> Self {
        let (a, _) = pair.unwrap_or((c, d));
        let mut split = ContextSplit {
            shared: vec![],
            context: vec![],
            change: vec![],
            s: vec![],
            t: vec![],
            u: vec![],
            v: vec![],
            w: vec![],
            p,
            q,
        };
        for i in 0..c.len() {
            if c.get(i) != d.get(i) {
                split.change.push(i);
                split.v.push(c.get(i));
                split.w.push(d.get(i));
            } else if a.get(i) == c.get(i) {
                split.shared.push(i);
                split.s.push(c.get(i));
            } else {
                split.context.push(i);
                split.t.push(a.get(i));
                split.u.push(c.get(i));
            }
        }
        split
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub adverse_row: usize,
    /// Result of the adverse example.
    pub contrast: Code,
    pub split: ContextSplit,
    /// First supporting pair in row order.
    pub supporting_pair: Option<(usize, usize)>,
    /// Pairs with the same change and the same result tilt `p -> q`.
    pub supporting_pairs: u64,
    /// Pairs with the same change and result `p` on both sides.
    pub exception_pairs: u64,
    /// `supporting / (supporting + exception)`, 0 when both are 0.
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Explanation {
    pub question: Question,
    pub query_result: Code,
    pub supported: bool,
    pub best: Option<Candidate>,
    pub alternatives: Vec<Candidate>,
    /// Every adverse example considered, by row.
    pub adverse_rows: Vec<usize>,
}

impl Explanation {
    /// Templated answer, e.g. `because situation is sit_2 and not sit_1`.
    pub fn sentence(&self, table: &Dataset) -> String {
        let Some(best) = &self.best else {
            return "no adverse example exists".to_string();
        };
        let schema = table.schema();
        let parts: Vec<String> = best
            .split
            .change
            .iter()
            .zip(best.split.w.iter().zip(&best.split.v))
            .map(|(&i, (&w, &v))| {
                let attr = schema.attribute(i);
                format!(
                    "{} is {} and not {}",
                    attr.name,
                    attr.domain.symbol(w).unwrap_or("?"),
                    attr.domain.symbol(v).unwrap_or("?")
                )
            })
            .collect();
        format!(
            "{} is {} and not {} because {}",
            table.class().name,
            table.label_symbol(self.query_result),
            table.label_symbol(best.contrast),
            parts.join(" and ")
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExplainOptions {
    /// Ignore adverse examples differing on more attributes than this.
    pub max_change: Option<usize>,
}

/// Answers `question` for `query` from the rows of `table`.
///
/// Adverse examples with the smallest change set are scored; the one with
/// the highest strength wins, then the smaller change set, then the earlier
/// row. The remaining adverse examples are returned as alternatives in the
/// same order.
pub fn contrastive_explain(
    table: &Dataset,
    query: &Query,
    question: Question,
    options: ExplainOptions,
) -> Result<Explanation> {
    table.check_query(&query.item)?;
    let targets: Vec<Code> = match question {
        Question::WhyNot(t) => {
            if t == query.result {
                return Err(Error::VacuousQuestion(table.label_symbol(t).to_string()));
            }
            vec![t]
        }
        Question::Why => (0..table.class().domain.len() as Code)
            .filter(|&c| c != query.result)
            .collect(),
    };
    let mut adverse = Vec::new();
    for t in targets {
        adverse.extend(find_adverse_examples(table, query, t, options.max_change)?);
    }
    adverse.sort_by_key(|a| (a.change.len(), a.row));
    let adverse_rows = adverse.iter().map(|a| a.row).collect();

    let index = PairIndex::build(table);
    let mut candidates: Vec<Candidate> = adverse.iter().map(|a| score(table, &index, query, a.row)).collect();
    let smallest = adverse.first().map(|a| a.change.len());
    let order = |x: &Candidate, y: &Candidate| {
        y.strength
            .total_cmp(&x.strength)
            .then(x.split.change.len().cmp(&y.split.change.len()))
            .then(x.adverse_row.cmp(&y.adverse_row))
    };
    let (mut minimal, mut rest): (Vec<Candidate>, Vec<Candidate>) = candidates
        .drain(..)
        .partition(|c| Some(c.split.change.len()) == smallest);
    minimal.sort_by(order);
    rest.sort_by(order);
    let mut ranked = minimal.into_iter();
    let best = ranked.next();
    let alternatives = ranked.chain(rest).collect();
    Ok(Explanation {
        question,
        query_result: query.result,
        supported: best.is_some(),
        best,
        alternatives,
        adverse_rows,
    })
}

fn score(table: &Dataset, index: &PairIndex, query: &Query, adverse_row: usize) -> Candidate {
    let c = table.item(adverse_row);
    let p = table.label(adverse_row);
    let q = query.result;
    let change = diff_unchecked(c, &query.item);
    let explained = query.row.map(|r| (adverse_row as u32, r as u32));
    let mut supporting = 0;
    let mut exceptions = 0;
    let mut first = None;
    if let Some(group) = index.get(&change) {
        for &(a, b) in &group.pairs {
            if Some((a, b)) == explained {
                continue;
            }
            let (la, lb) = (table.label(a as usize), table.label(b as usize));
            if la == p && lb == q {
                supporting += 1;
                first.get_or_insert((a as usize, b as usize));
            } else if la == p && lb == p {
                exceptions += 1;
            }
        }
    }
    let pair = first.map(|(a, b)| (table.item(a), table.item(b)));
    let total = supporting + exceptions;
    Candidate {
        adverse_row,
        contrast: p,
        split: ContextSplit::build(c, &query.item, pair, p, q),
        supporting_pair: first,
        supporting_pairs: supporting,
        exception_pairs: exceptions,
        strength: if total == 0 {
            0.0
        } else {
            supporting as f64 / total as f64
        },
    }
}

/// Hypothesis: changing `change` from `from` to `to` moves the result from
/// `result_from` to `result_to`, whatever the context.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleCandidate {
    pub change: Vec<usize>,
    pub from: Vec<Code>,
    pub to: Vec<Code>,
    pub result_from: Code,
    pub result_to: Code,
    /// Ordered row pairs in the table instantiating the rule.
    pub supporting: u64,
    /// Ordered row pairs with the same change and no result tilt.
    pub exceptions: u64,
}

pub fn rule_candidate(table: &Dataset, split: &ContextSplit) -> Result<RuleCandidate> {
    if split.change.is_empty() {
        return Err(Error::DegenerateSplit);
    }
    let mut supporting = 0;
    let mut exceptions = 0;
    for (i, (a, la)) in table.rows().enumerate() {
        if !split.change.iter().zip(&split.v).all(|(&k, &v)| a.get(k) == v) {
            continue;
        }
        for (j, (b, lb)) in table.rows().enumerate() {
            if i == j {
                continue;
            }
            let same_outside = (0..a.len())
                .filter(|k| !split.change.contains(k))
                .all(|k| a.get(k) == b.get(k));
            let changed = split.change.iter().zip(&split.w).all(|(&k, &w)| b.get(k) == w);
            if !(same_outside && changed) || la != split.p {
                continue;
            }
            if lb == split.q {
                supporting += 1;
            } else if lb == split.p {
                exceptions += 1;
            }
        }
    }
    Ok(RuleCandidate {
        change: split.change.clone(),
        from: split.v.clone(),
        to: split.w.clone(),
        result_from: split.p,
        result_to: split.q,
        supporting,
        exceptions,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relevance {
    /// Plug-in estimate in nats.
    #[default]
    MutualInformation,
    /// Pearson chi-square statistic of the contingency table.
    ChiSquare,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttributeScore {
    pub attribute: usize,
    pub name: String,
    pub score: f64,
}

/// Scores every attribute against the result column, highest first; ties
/// keep schema order.
pub fn relevant_attributes(table: &Dataset, method: Relevance) -> Result<Vec<AttributeScore>> {
    if table.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let n = table.len() as f64;
    let mut scores: Vec<AttributeScore> = (0..table.schema().arity())
        .map(|k| {
            let mut joint: BTreeMap<(Code, Code), f64> = BTreeMap::new();
            let mut xs: BTreeMap<Code, f64> = BTreeMap::new();
            let mut ys: BTreeMap<Code, f64> = BTreeMap::new();
            for (item, label) in table.rows() {
                *joint.entry((item.get(k), label)).or_default() += 1.0;
                *xs.entry(item.get(k)).or_default() += 1.0;
                *ys.entry(label).or_default() += 1.0;
            }
            let score = match method {
                Relevance::MutualInformation => joint
                    .iter()
                    .map(|(&(x, y), &nxy)| nxy / n * (nxy * n / (xs[&x] * ys[&y])).ln())
                    .sum::<f64>()
                    .max(0.0),
                Relevance::ChiSquare => xs
                    .iter()
                    .flat_map(|(&x, &nx)| ys.iter().map(move |(&y, &ny)| (x, y, nx * ny / n)))
                    .map(|(x, y, expected)| {
                        let observed = joint.get(&(x, y)).copied().unwrap_or(0.0);
                        (observed - expected).powi(2) / expected
                    })
                    .sum(),
            };
            AttributeScore {
                attribute: k,
                name: table.schema().attribute(k).name.clone(),
                score,
            }
        })
        .collect();
    scores.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.attribute.cmp(&b.attribute)));
    Ok(scores)
}
