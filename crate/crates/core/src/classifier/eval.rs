//! Stratified k-fold evaluation.
//!
//! All randomness comes from one ChaCha8 stream seeded with the run seed: it
//! first shuffles the fold assignment, then hands one sub-seed to each fold
//! (used for the pair-mining subsample). Folds and queries run on the rayon
//! pool; results are collected in fold and row order, so reports do not
//! depend on the worker count.

use std::time::{Duration, Instant};

use rand::seq::{index, SliceRandom};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bongard::Bongard;
use super::brute::BruteForce;
use super::knn::Knn;
use super::pairs::extract_competent_pairs;
use super::selected::SelectedTriplets;
use super::{argmax, Prediction};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Code, Item};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Baseline,
    Selected {
        radius: usize,
        min_support: u64,
        min_confidence: f64,
        /// Fraction of each training fold used for pair mining.
        subsample: f64,
    },
    Bongard {
        neighbor_budget: usize,
        max_literals: usize,
    },
    Knn {
        k: usize,
    },
    /// Majority class of the training fold.
    Constant,
}

impl Strategy {
    fn validate(&self) -> Result<()> {
        match *self {
            Strategy::Selected {
                min_support,
                min_confidence,
                subsample,
                ..
            } => {
                if min_support < 1 {
                    return Err(Error::InvalidParameter("min_support must be at least 1".into()));
                }
                if !(0.0..=1.0).contains(&min_confidence) {
                    return Err(Error::InvalidParameter("min_confidence must lie in [0, 1]".into()));
                }
                if !(subsample > 0.0 && subsample <= 1.0) {
                    return Err(Error::InvalidParameter("subsample must lie in (0, 1]".into()));
                }
            }
            Strategy::Bongard {
                neighbor_budget,
                max_literals,
            } => {
                if neighbor_budget < 1 || max_literals < 1 {
                    return Err(Error::InvalidParameter(
                        "neighbor_budget and max_literals must be at least 1".into(),
                    ));
                }
            }
            Strategy::Knn { k } if k < 1 => {
                return Err(Error::InvalidParameter("k must be at least 1".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

/// What to predict when the strategy abstains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    /// Count the abstention as an error.
    None,
    /// Use the single nearest neighbor.
    Knn1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub fallback: Fallback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub abstentions: usize,
    pub triplets_examined: u64,
    pub test_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvReport {
    pub strategy: Strategy,
    pub folds: usize,
    pub seed: u64,
    pub fallback: Fallback,
    pub stratified: bool,
    pub warnings: Vec<String>,
    pub instances: usize,
    pub mean_accuracy: f64,
    /// Sample standard deviation of the per-fold accuracies.
    pub std_accuracy: f64,
    pub abstention_rate: f64,
    pub triplets_examined: u64,
    pub per_fold: Vec<FoldReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Test rows for each fold, and whether the split is stratified.
///
/// Stratification deals each class's shuffled rows round-robin over the
/// folds. When some class has fewer rows than folds the split falls back to
/// a plain shuffled round-robin.
pub fn fold_assignment(data: &Dataset, folds: usize, rng: &mut ChaCha8Rng) -> Result<(Vec<Vec<usize>>, bool)> {
    if folds < 2 {
        return Err(Error::InvalidParameter("need at least 2 folds".into()));
    }
    if folds > data.len() {
        return Err(Error::TooFewExamples {
            needed: folds,
            found: data.len(),
        });
    }
    let counts = data.class_counts();
    let stratified = counts.iter().all(|&c| c == 0 || c >= folds);
    let mut groups: Vec<Vec<usize>> = if stratified {
        (0..counts.len())
            .map(|class| (0..data.len()).filter(|&i| data.label(i) as usize == class).collect())
            .collect()
    } else {
        vec![(0..data.len()).collect()]
    };
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for group in &mut groups {
        group.shuffle(rng);
        for &row in group.iter() {
            out[next % folds].push(row);
            next += 1;
        }
    }
    for fold in &mut out {
        fold.sort_unstable();
    }
    Ok((out, stratified))
}

enum Model<'a> {
    Brute(BruteForce<'a>),
    Selected(Option<SelectedTriplets<'a>>, usize),
    Bongard(Bongard<'a>, usize, usize),
    Knn(Knn<'a>, usize),
    Constant(Code),
}

impl Model<'_> {
    /// Predicted label (`None` on abstention) and triplets examined.
    fn classify(&self, query: &Item) -> Result<(Option<Code>, u64)> {
        let p: Prediction = match self {
            Model::Brute(m) => m.classify(query)?,
            Model::Selected(Some(m), radius) => m.classify(query, *radius)?,
            Model::Selected(None, _) => return Ok((None, 0)),
            Model::Bongard(m, budget, literals) => m.classify(query, *budget, *literals)?,
            Model::Knn(m, k) => m.classify(query, *k)?,
            Model::Constant(label) => return Ok((Some(*label), 0)),
        };
        Ok((p.label, p.triplets_examined))
    }
}

fn build_model<'a>(strategy: &Strategy, train: &'a Dataset, mining: Option<&Dataset>) -> Result<Model<'a>> {
    Ok(match *strategy {
        Strategy::Baseline => Model::Brute(BruteForce::new(train)?),
        Strategy::Selected {
            radius,
            min_support,
            min_confidence,
            ..
        } => {
            let pairs = extract_competent_pairs(mining.unwrap_or(train), min_support, min_confidence)?;
            let model = if pairs.is_empty() {
                None
            } else {
                Some(SelectedTriplets::new(train, &pairs)?)
            };
            Model::Selected(model, radius)
        }
        Strategy::Bongard {
            neighbor_budget,
            max_literals,
        } => Model::Bongard(Bongard::new(train)?, neighbor_budget, max_literals),
        Strategy::Knn { k } => {
            if k > train.len() {
                return Err(Error::InvalidParameter(format!(
                    "k = {k} exceeds training fold size {}",
                    train.len()
                )));
            }
            Model::Knn(Knn::new(train)?, k)
        }
        Strategy::Constant => {
            let counts = train.class_counts();
            let votes = counts.iter().enumerate().map(|(c, &n)| (c as Code, n as u64)).collect();
            Model::Constant(argmax(&votes).ok_or(Error::EmptyTrainingSet)?)
        }
    })
}

/// Per query: predicted label after fallback, whether the strategy itself
/// abstained, and triplets examined.
type Outcome = (Option<Code>, bool, u64);

fn predict_all(
    train: &Dataset,
    strategy: &Strategy,
    fallback: Fallback,
    seed: u64,
    queries: &[&Item],
) -> Result<Vec<Outcome>> {
    let mining = match *strategy {
        Strategy::Selected { subsample, .. } if subsample < 1.0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = ((train.len() as f64 * subsample).round() as usize).clamp(1, train.len());
            let mut picked = index::sample(&mut rng, train.len(), m).into_vec();
            picked.sort_unstable();
            Some(train.subset(&picked))
        }
        _ => None,
    };
    let model = build_model(strategy, train, mining.as_ref())?;
    let backup = Knn::new(train)?;
    queries
        .par_iter()
        .map(|&query| {
            let (label, examined) = model.classify(query)?;
            let abstained = label.is_none();
            let label = match (label, fallback) {
                (Some(l), _) => Some(l),
                (None, Fallback::Knn1) => backup.classify(query, 1)?.label,
                (None, Fallback::None) => None,
            };
            Ok((label, abstained, examined))
        })
        .collect()
}

fn run_fold(
    data: &Dataset,
    strategy: &Strategy,
    fallback: Fallback,
    fold: usize,
    test_rows: &[usize],
    fold_seed: u64,
) -> Result<FoldReport> {
    let train_rows: Vec<usize> = {
        let mut in_test = vec![false; data.len()];
        for &r in test_rows {
            in_test[r] = true;
        }
        (0..data.len()).filter(|&r| !in_test[r]).collect()
    };
    let train = data.subset(&train_rows);
    let queries: Vec<&Item> = test_rows.iter().map(|&r| data.item(r)).collect();
    let outcomes = predict_all(&train, strategy, fallback, fold_seed, &queries)?;
    let correct = outcomes
        .iter()
        .zip(test_rows)
        .filter(|(o, &r)| o.0 == Some(data.label(r)))
        .count();
    Ok(FoldReport {
        fold,
        train_size: train.len(),
        test_size: test_rows.len(),
        correct,
        accuracy: correct as f64 / test_rows.len() as f64,
        abstentions: outcomes.iter().filter(|o| o.1).count(),
        triplets_examined: outcomes.iter().map(|o| o.2).sum(),
        test_rows: test_rows.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub fallback: Fallback,
    pub train_size: usize,
    pub test_size: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub abstentions: usize,
    pub abstention_rate: f64,
    pub triplets_examined: u64,
    /// Label per test row after fallback; `None` for an unresolved abstention.
    pub predictions: Vec<Option<Code>>,
}

/// Trains on `train` and scores every row of `test`, which must share the
/// training schema and class domain.
pub fn evaluate_split(
    train: &Dataset,
    test: &Dataset,
    strategy: &Strategy,
    fallback: Fallback,
    seed: u64,
) -> Result<SplitReport> {
    strategy.validate()?;
    if train.schema() != test.schema() || train.class() != test.class() {
        return Err(Error::InvalidParameter(
            "test set schema differs from the training set".into(),
        ));
    }
    if test.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let queries: Vec<&Item> = test.items().iter().collect();
    let outcomes = predict_all(train, strategy, fallback, seed, &queries)?;
    let correct = outcomes
        .iter()
        .enumerate()
        .filter(|(r, o)| o.0 == Some(test.label(*r)))
        .count();
    let abstentions = outcomes.iter().filter(|o| o.1).count();
    Ok(SplitReport {
        strategy: strategy.clone(),
        seed,
        fallback,
        train_size: train.len(),
        test_size: test.len(),
        correct,
        accuracy: correct as f64 / test.len() as f64,
        abstentions,
        abstention_rate: abstentions as f64 / test.len() as f64,
        triplets_examined: outcomes.iter().map(|o| o.2).sum(),
        predictions: outcomes.iter().map(|o| o.0).collect(),
    })
}

pub fn cross_validate(data: &Dataset, strategy: &Strategy, config: &CvConfig) -> Result<CvReport> {
    strategy.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (assignment, stratified) = fold_assignment(data, config.folds, &mut rng)?;
    let fold_seeds: Vec<u64> = (0..config.folds).map(|_| rng.next_u64()).collect();
    let mut warnings = Vec::new();
    if !stratified {
        warnings.push(format!(
            "a class has fewer than {} members; folds are not stratified",
            config.folds
        ));
    }

    let per_fold: Vec<FoldReport> = assignment
        .par_iter()
        .enumerate()
        .map(|(fold, rows)| run_fold(data, strategy, config.fallback, fold, rows, fold_seeds[fold]))
        .collect::<Result<_>>()?;

    let k = per_fold.len() as f64;
    let mean = per_fold.iter().map(|f| f.accuracy).sum::<f64>() / k;
    let var = per_fold.iter().map(|f| (f.accuracy - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let tested: usize = per_fold.iter().map(|f| f.test_size).sum();
    let abstained: usize = per_fold.iter().map(|f| f.abstentions).sum();
    Ok(CvReport {
        strategy: strategy.clone(),
        folds: config.folds,
        seed: config.seed,
        fallback: config.fallback,
        stratified,
        warnings,
        instances: data.len(),
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        abstention_rate: abstained as f64 / tested as f64,
        triplets_examined: per_fold.iter().map(|f| f.triplets_examined).sum(),
        per_fold,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridReport {
    pub grid: Vec<usize>,
    pub best_k: usize,
    pub best_mean_accuracy: f64,
    pub runs: Vec<CvReport>,
}

/// Cross-validates `make(k)` for each `k`; the best mean accuracy wins, ties
/// go to the earlier grid entry.
pub fn grid_search(
    data: &Dataset,
    grid: &[usize],
    make: impl Fn(usize) -> Strategy,
    config: &CvConfig,
) -> Result<GridReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty parameter grid".into()));
    }
    let runs: Vec<CvReport> = grid
        .iter()
        .map(|&k| cross_validate(data, &make(k), config))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.mean_accuracy > runs[best].mean_accuracy {
            best = i;
        }
    }
    Ok(GridReport {
        grid: grid.to_vec(),
        best_k: grid[best],
        best_mean_accuracy: runs[best].mean_accuracy,
        runs,
    })
}
