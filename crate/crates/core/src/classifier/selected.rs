use std::collections::{BTreeMap, HashMap};

use super::pairs::CompetentPair;
use super::Prediction;
use crate::ap::{diff_unchecked, solve_raw, DiffVector};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Code, Item};

/// Triplet voting restricted to competent pairs `(a, b)` and to `c` within a
/// Hamming radius of the query.
///
/// A training item identical to the query casts one vote for its own label
/// (the triplet `(c, c, c)`); competent pairs never carry an empty change.
pub struct SelectedTriplets<'a> {
    train: &'a Dataset,
    tilts: HashMap<DiffVector, BTreeMap<(Code, Code), u64>>,
}

impl<'a> SelectedTriplets<'a> {
    pub fn new(train: &'a Dataset, pairs: &[CompetentPair]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::NoCompetentPairs);
        }
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let mut tilts: HashMap<DiffVector, BTreeMap<(Code, Code), u64>> = HashMap::new();
        for p in pairs {
            *tilts
                .entry(p.rule_change.clone())
                .or_default()
                .entry(p.tilt)
                .or_default() += 1;
        }
        Ok(Self { train, tilts })
    }

    pub fn classify(&self, query: &Item, radius: usize) -> Result<Prediction> {
        self.train.check_query(query)?;
        let mut votes = BTreeMap::new();
        let mut examined = 0u64;
        for (c, label_c) in self.train.rows() {
            let distance = c.hamming(query);
            if distance > radius {
                continue;
            }
            if distance == 0 {
                examined += 1;
                *votes.entry(label_c).or_insert(0) += 1;
                continue;
            }
            let Some(tilts) = self.tilts.get(&diff_unchecked(c, query)) else {
                continue;
            };
            for (&(la, lb), &count) in tilts {
                examined += count;
                if let Some(x) = solve_raw(la, lb, label_c) {
                    *votes.entry(x).or_insert(0) += count;
                }
            }
        }
        Ok(Prediction::from_votes(votes, examined))
    }
}

pub fn selected_triplet_classify(
    train: &Dataset,
    pairs: &[CompetentPair],
    query: &Item,
    radius: usize,
) -> Result<Prediction> {
    SelectedTriplets::new(train, pairs)?.classify(query, radius)
}
