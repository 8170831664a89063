//! Analogical classifiers and their evaluation harness.
//!
//! Every classifier here returns a [`Prediction`] built from integer vote
//! counts, so serial and parallel runs agree exactly. Vote ties go to the
//! smallest class code.

mod bongard;
mod brute;
mod eval;
mod knn;
mod pairs;
mod selected;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::schema::Code;

pub use bongard::{bongard_classify, bongard_separation, Bongard, BongardProperty, Literal};
pub use brute::{analogical_suitability, brute_force_classify, BruteForce, SuitabilityReport};
pub use eval::{
    cross_validate, evaluate_split, fold_assignment, grid_search, CvConfig, CvReport, Fallback, FoldReport, GridReport,
    SplitReport, Strategy,
};
pub use knn::{knn_classify, Knn};
pub use pairs::{extract_competent_pairs, Behavior, CompetentPair, PairGroup, PairIndex};
pub use selected::{selected_triplet_classify, SelectedTriplets};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    /// `None` exactly when the classifier abstained.
    pub label: Option<Code>,
    pub votes: BTreeMap<Code, u64>,
    /// Candidate triplets (or neighbor pairs, for kNN) that reached the
    /// class-level step: the attribute-level proportion with the query held.
    pub triplets_examined: u64,
    pub abstained: bool,
}

impl Prediction {
    pub(crate) fn from_votes(votes: BTreeMap<Code, u64>, triplets_examined: u64) -> Self {
        let label = argmax(&votes);
        Self {
            abstained: label.is_none(),
            label,
            votes,
            triplets_examined,
        }
    }
}

/// Highest count wins; among equal counts the smallest code. Zero counts
/// never win.
pub(crate) fn argmax(votes: &BTreeMap<Code, u64>) -> Option<Code> {
    let mut best: Option<(Code, u64)> = None;
    for (&label, &count) in votes {
        if count == 0 {
            continue;
        }
        match best {
            Some((_, c)) if c >= count => {}
            _ => best = Some((label, count)),
        }
    }
    best.map(|(l, _)| l)
}
