use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::pairs::PairIndex;
use super::{argmax, Prediction};
use crate::ap::diff_unchecked;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Code, Item};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub attribute: usize,
    pub value: Code,
}

/// A conjunction of `attribute = value` literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BongardProperty {
    pub literals: Vec<Literal>,
}

impl BongardProperty {
    pub fn holds(&self, item: &Item) -> bool {
        self.literals.iter().all(|l| item.get(l.attribute) == l.value)
    }
}

/// Smallest conjunction over `context` attributes that is true on every
/// same-label pair and false on every label-changing pair.
///
/// Pairs are read through their first member; both members agree on the
/// context attributes. Sizes are tried in increasing order and, within a
/// size, conjunctions in lexicographic order of `(attribute, value)`.
pub fn bongard_separation(
    same_label_pairs: &[(&Item, &Item)],
    diff_label_pairs: &[(&Item, &Item)],
    context: &[usize],
    max_literals: usize,
) -> Option<BongardProperty> {
    let same: Vec<&Item> = same_label_pairs.iter().map(|p| p.0).collect();
    let other: Vec<&Item> = diff_label_pairs.iter().map(|p| p.0).collect();
    separate(&same, &other, context, max_literals)
}

fn separate(same: &[&Item], other: &[&Item], context: &[usize], max_literals: usize) -> Option<BongardProperty> {
    let first = same.first()?;
    let mut attributes: Vec<usize> = context.to_vec();
    attributes.sort_unstable();
    attributes.dedup();
    // A conjunction true on every same-label context can only use literals
    // those contexts all share.
    let candidates: Vec<Literal> = attributes
        .into_iter()
        .filter(|&k| same.iter().all(|s| s.get(k) == first.get(k)))
        .map(|k| Literal {
            attribute: k,
            value: first.get(k),
        })
        .collect();

    let others: BTreeSet<Vec<Code>> = other
        .iter()
        .map(|o| candidates.iter().map(|l| o.get(l.attribute)).collect())
        .collect();
    // violated[d][i]: other context d fails literal i
    let violated: Vec<Vec<bool>> = others
        .iter()
        .map(|vals| vals.iter().zip(&candidates).map(|(v, l)| *v != l.value).collect())
        .collect();
    if violated.iter().any(|row| !row.contains(&true)) {
        return None;
    }

    for size in 1..=max_literals.min(candidates.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if violated.iter().all(|row| combo.iter().any(|&i| row[i])) {
                return Some(BongardProperty {
                    literals: combo.iter().map(|&i| candidates[i]).collect(),
                });
            }
            if !next_combination(&mut combo, candidates.len()) {
                break;
            }
        }
    }
    None
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Neighbor-by-neighbor analogical classification with Bongard resolution.
///
/// For each training neighbor `c` of the query, nearest first, the pairs
/// `(a, b)` sharing `diff(c, query)` are split into same-label and
/// label-changing pairs:
///
/// 1. only same-label pairs: vote `label(c)`;
/// 2. only label-changing pairs: among those with `label(a) = label(c)`, vote
///    the most frequent `label(b)`; skip `c` if there are none;
/// 3. both: look for a separating property on the shared context. If the
///    query satisfies it vote `label(c)`, otherwise vote as in case 2. If no
///    property exists, skip `c`.
///
/// Stops once `neighbor_budget` neighbors have voted.
pub struct Bongard<'a> {
    train: &'a Dataset,
    index: PairIndex,
}

impl<'a> Bongard<'a> {
    pub fn new(train: &'a Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(Self {
            train,
            index: PairIndex::build(train),
        })
    }

    pub fn classify(&self, query: &Item, neighbor_budget: usize, max_literals: usize) -> Result<Prediction> {
        if neighbor_budget < 1 || max_literals < 1 {
            return Err(Error::InvalidParameter(
                "neighbor_budget and max_literals must be at least 1".into(),
            ));
        }
        self.train.check_query(query)?;
        let train = self.train;
        let mut neighbors: Vec<(usize, usize)> = (0..train.len()).map(|i| (train.item(i).hamming(query), i)).collect();
        neighbors.sort_unstable();

        let mut votes: BTreeMap<Code, u64> = BTreeMap::new();
        let mut examined = 0u64;
        let mut voters = 0;
        for (_, c) in neighbors {
            if voters == neighbor_budget {
                break;
            }
            let label_c = train.label(c);
            let change = diff_unchecked(train.item(c), query);
            let Some(group) = self.index.get(&change) else {
                continue;
            };
            examined += group.len() as u64;
            let (same, changing): (Vec<_>, Vec<_>) = group
                .pairs
                .iter()
                .partition(|&&(a, b)| train.label(a as usize) == train.label(b as usize));

            let tilted = || {
                let mut tally = BTreeMap::new();
                for &(a, b) in &changing {
                    if train.label(a as usize) == label_c {
                        *tally.entry(train.label(b as usize)).or_insert(0u64) += 1;
                    }
                }
                argmax(&tally)
            };
            let vote = if changing.is_empty() {
                Some(label_c)
            } else if same.is_empty() {
                tilted()
            } else {
                let same_items: Vec<&Item> = same.iter().map(|&(a, _)| train.item(a as usize)).collect();
                let other_items: Vec<&Item> = changing.iter().map(|&(a, _)| train.item(a as usize)).collect();
                match separate(&same_items, &other_items, &change.agreement(), max_literals) {
                    Some(p) if p.holds(query) => Some(label_c),
                    Some(_) => tilted(),
                    None => None,
                }
            };
            if let Some(label) = vote {
                *votes.entry(label).or_insert(0) += 1;
                voters += 1;
            }
        }
        Ok(Prediction::from_votes(votes, examined))
    }
}

pub fn bongard_classify(
    train: &Dataset,
    query: &Item,
    neighbor_budget: usize,
    max_literals: usize,
) -> Result<Prediction> {
    Bongard::new(train)?.classify(query, neighbor_budget, max_literals)
}
