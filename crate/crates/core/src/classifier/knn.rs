use std::collections::BTreeMap;

use super::Prediction;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::Item;

/// Hamming-distance k nearest neighbors with a plain majority vote.
///
/// Neighbors are ranked by distance, then by row order.
pub struct Knn<'a> {
    train: &'a Dataset,
}

impl<'a> Knn<'a> {
    pub fn new(train: &'a Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(Self { train })
    }

    pub fn classify(&self, query: &Item, k: usize) -> Result<Prediction> {
        if k < 1 || k > self.train.len() {
            return Err(Error::InvalidParameter(format!(
                "k must lie in 1..={}, got {k}",
                self.train.len()
            )));
        }
        self.train.check_query(query)?;
        let mut ranked: Vec<(usize, usize)> = self
            .train
            .items()
            .iter()
            .enumerate()
            .map(|(i, item)| (item.hamming(query), i))
            .collect();
        ranked.select_nth_unstable(k - 1);
        let mut votes = BTreeMap::new();
        for &(_, i) in &ranked[..k] {
            *votes.entry(self.train.label(i)).or_insert(0) += 1;
        }
        Ok(Prediction::from_votes(votes, k as u64))
    }
}

pub fn knn_classify(train: &Dataset, query: &Item, k: usize) -> Result<Prediction> {
    Knn::new(train)?.classify(query, k)
}
