use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::pairs::PairIndex;
use super::Prediction;
use crate::ap::{diff_unchecked, solve_raw};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::Item;

/// Votes over every ordered training triplet `(a, b, c)` with
/// `a : b :: c : query` and a solvable class equation.
///
/// The triplets are not enumerated one by one: for each `c` the pairs
/// `(a, b)` with `diff(a, b) = diff(c, query)` are read from a [`PairIndex`],
/// which gives the same vote counts in quadratic time per query.
pub struct BruteForce<'a> {
    train: &'a Dataset,
    index: PairIndex,
}

impl<'a> BruteForce<'a> {
    pub fn new(train: &'a Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(Self {
            train,
            index: PairIndex::build(train),
        })
    }

    pub fn classify(&self, query: &Item) -> Result<Prediction> {
        self.train.check_query(query)?;
        let mut votes = BTreeMap::new();
        let mut examined = 0u64;
        for (c, label_c) in self.train.rows() {
            let Some(group) = self.index.get(&diff_unchecked(c, query)) else {
                continue;
            };
            examined += group.len() as u64;
            for (&(la, lb), &count) in &group.tilts {
                if let Some(x) = solve_raw(la, lb, label_c) {
                    *votes.entry(x).or_insert(0) += count;
                }
            }
        }
        Ok(Prediction::from_votes(votes, examined))
    }
}

pub fn brute_force_classify(train: &Dataset, query: &Item) -> Result<Prediction> {
    BruteForce::new(train)?.classify(query)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuitabilityReport {
    /// Wrong predictions over non-abstained predictions; 0 when every
    /// prediction abstained.
    pub error_ratio: f64,
    pub errors: usize,
    pub predictions: usize,
    pub abstentions: usize,
}

/// Leave-one-out error of brute-force analogical inference on `train`.
///
/// Each held-out example gets a freshly built index, so the cost is cubic in
/// the dataset size.
pub fn analogical_suitability(train: &Dataset) -> Result<SuitabilityReport> {
    if train.len() < 4 {
        return Err(Error::TooFewExamples {
            needed: 4,
            found: train.len(),
        });
    }
    let outcomes: Vec<Option<bool>> = (0..train.len())
        .into_par_iter()
        .map(|held_out| {
            let rest: Vec<usize> = (0..train.len()).filter(|&i| i != held_out).collect();
            let reduced = train.subset(&rest);
            let p = brute_force_classify(&reduced, train.item(held_out))?;
            Ok(p.label.map(|l| l == train.label(held_out)))
        })
        .collect::<Result<_>>()?;
    let abstentions = outcomes.iter().filter(|o| o.is_none()).count();
    let predictions = outcomes.len() - abstentions;
    let errors = outcomes.iter().filter(|o| **o == Some(false)).count();
    Ok(SuitabilityReport {
        error_ratio: if predictions == 0 {
            0.0
        } else {
            errors as f64 / predictions as f64
        },
        errors,
        predictions,
        abstentions,
    })
}
