use std::time::Instant;

use analogy::classifier::{
    cross_validate, evaluate_split, grid_search, CvConfig, CvReport, Fallback, GridReport, Strategy,
};
use analogy::io::SchemaFile;
use analogy::Dataset;
use serde::Serialize;

use crate::args::{EvaluateArgs, FallbackName, Format, Profile, StrategyName};
use crate::error::{CliError, Outcome};
use crate::output::{load, load_options, percent, print_json};

pub const TABLE3_GRID: [usize; 6] = [1, 3, 5, 7, 9, 11];

/// Fully resolved run settings.
#[derive(Debug)]
struct Plan {
    name: StrategyName,
    radius: usize,
    min_support: u64,
    min_confidence: f64,
    subsample: f64,
    neighbor_budget: usize,
    max_literals: usize,
    k: usize,
    grid: Option<Vec<usize>>,
    folds: usize,
    seed: u64,
    fallback: Fallback,
}

impl Plan {
    fn strategy(&self, k: usize) -> Strategy {
        match self.name {
            StrategyName::Baseline => Strategy::Baseline,
            StrategyName::Selected => Strategy::Selected {
                radius: self.radius,
                min_support: self.min_support,
                min_confidence: self.min_confidence,
                subsample: self.subsample,
            },
            StrategyName::Bongard => Strategy::Bongard {
                neighbor_budget: k,
                max_literals: self.max_literals,
            },
            StrategyName::Knn => Strategy::Knn { k },
            StrategyName::Constant => Strategy::Constant,
        }
    }

    fn single_k(&self) -> usize {
        match self.name {
            StrategyName::Bongard => self.neighbor_budget,
            _ => self.k,
        }
    }
}

/// Applies the profile, then defaults, and reports every problem at once.
fn resolve(a: &EvaluateArgs) -> Result<Plan, CliError> {
    let mut problems = Vec::new();
    let (mut folds, mut radius, mut subsample, mut grid) = (a.folds, a.radius, a.subsample, a.k_grid.clone());
    let mut name = a.strategy;
    match a.profile {
        Some(Profile::Table2) => {
            match name {
                None | Some(StrategyName::Selected) => name = Some(StrategyName::Selected),
                Some(other) => problems.push(format!("profile table2 runs the selected strategy, not {other:?}")),
            }
            folds = folds.or(Some(10));
            radius = radius.or(Some(2));
            subsample = subsample.or(Some(0.5));
        }
        Some(Profile::Table3) => {
            match name {
                None => name = Some(StrategyName::Bongard),
                Some(StrategyName::Bongard | StrategyName::Knn) => {}
                Some(other) => problems.push(format!("profile table3 grids bongard or knn, not {other:?}")),
            }
            folds = folds.or(Some(10));
            grid = grid.or(Some(TABLE3_GRID.to_vec()));
        }
        None => {}
    }
    let name = match name {
        Some(n) => n,
        None => {
            problems.push("--strategy or --profile is required".into());
            StrategyName::Constant
        }
    };

    let only = |flag: &str, set: bool, ok: bool, problems: &mut Vec<String>| {
        if set && !ok {
            problems.push(format!("--{flag} does not apply to {name:?}"));
        }
    };
    let selected = name == StrategyName::Selected;
    only("radius", radius.is_some(), selected, &mut problems);
    only("min-support", a.min_support.is_some(), selected, &mut problems);
    only("min-confidence", a.min_confidence.is_some(), selected, &mut problems);
    only("subsample", subsample.is_some(), selected, &mut problems);
    only(
        "neighbor-budget",
        a.neighbor_budget.is_some(),
        name == StrategyName::Bongard,
        &mut problems,
    );
    only(
        "max-literals",
        a.max_literals.is_some(),
        name == StrategyName::Bongard,
        &mut problems,
    );
    only("k", a.k.is_some(), name == StrategyName::Knn, &mut problems);
    only(
        "k-grid",
        grid.is_some(),
        matches!(name, StrategyName::Bongard | StrategyName::Knn),
        &mut problems,
    );

    let plan = Plan {
        name,
        radius: radius.unwrap_or(2),
        min_support: a.min_support.unwrap_or(2),
        min_confidence: a.min_confidence.unwrap_or(0.9),
        subsample: subsample.unwrap_or(1.0),
        neighbor_budget: a.neighbor_budget.unwrap_or(5),
        max_literals: a.max_literals.unwrap_or(3),
        k: a.k.unwrap_or(1),
        grid,
        folds: folds.unwrap_or(10),
        seed: a.seed.unwrap_or(0),
        fallback: match a.fallback.unwrap_or(FallbackName::Knn1) {
            FallbackName::None => Fallback::None,
            FallbackName::Knn1 => Fallback::Knn1,
        },
    };

    if plan.min_support < 1 {
        problems.push("--min-support must be at least 1".into());
    }
    if !(0.0..=1.0).contains(&plan.min_confidence) {
        problems.push("--min-confidence must lie in [0, 1]".into());
    }
    if !(plan.subsample > 0.0 && plan.subsample <= 1.0) {
        problems.push("--subsample must lie in (0, 1]".into());
    }
    if plan.neighbor_budget < 1 || plan.max_literals < 1 || plan.k < 1 {
        problems.push("--neighbor-budget, --max-literals and --k must be at least 1".into());
    }
    if let Some(g) = &plan.grid {
        if g.is_empty() || g.contains(&0) {
            problems.push("--k-grid needs positive values".into());
        }
    }
    if a.test.is_some() {
        if plan.grid.is_some() {
            problems.push("--k-grid needs cross-validation; drop --test".into());
        }
        if a.folds.is_some() {
            problems.push("--folds does not apply with --test".into());
        }
        if selected && plan.subsample < 1.0 && a.seed.is_none() {
            problems.push("--seed is required when pair mining is subsampled".into());
        }
    } else {
        if plan.folds < 2 {
            problems.push("--folds must be at least 2".into());
        }
        if a.seed.is_none() {
            problems.push("--seed is required for cross-validation".into());
        }
    }
    if problems.is_empty() {
        Ok(plan)
    } else {
        Err(CliError::Config(problems))
    }
}

#[derive(Serialize)]
struct ClassCount<'a> {
    label: &'a str,
    count: usize,
}

#[derive(Serialize)]
struct DataSummary<'a> {
    path: String,
    instances: usize,
    attributes: usize,
    class: &'a str,
    class_counts: Vec<ClassCount<'a>>,
}

impl<'a> DataSummary<'a> {
    fn of(path: String, data: &'a Dataset) -> Self {
        Self {
            path,
            instances: data.len(),
            attributes: data.schema().arity(),
            class: &data.class().name,
            class_counts: data
                .class_counts()
                .into_iter()
                .enumerate()
                .map(|(c, count)| ClassCount {
                    label: data.label_symbol(c as u16),
                    count,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct SplitOutput<'a> {
    test_path: String,
    strategy: &'a Strategy,
    seed: u64,
    fallback: Fallback,
    train_size: usize,
    test_size: usize,
    correct: usize,
    accuracy: f64,
    abstentions: usize,
    abstention_rate: f64,
    triplets_examined: u64,
    predictions: Vec<Option<&'a str>>,
}

#[derive(Serialize)]
struct EvaluateReport<'a> {
    data: DataSummary<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_validation: Option<&'a CvReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<&'a GridReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<SplitOutput<'a>>,
}

fn describe(s: &Strategy) -> String {
    match s {
        Strategy::Baseline => "baseline (all triplets)".into(),
        Strategy::Selected {
            radius,
            min_support,
            min_confidence,
            subsample,
        } => format!(
            "selected triplets (radius {radius}, min support {min_support}, min confidence {min_confidence}, mining subsample {subsample})"
        ),
        Strategy::Bongard {
            neighbor_budget,
            max_literals,
        } => format!("bongard (neighbor budget {neighbor_budget}, max literals {max_literals})"),
        Strategy::Knn { k } => format!("knn (k = {k})"),
        Strategy::Constant => "majority class".into(),
    }
}

fn print_cv(r: &CvReport) {
    println!("strategy: {}", describe(&r.strategy));
    println!(
        "folds: {} ({}), seed {}, fallback {:?}",
        r.folds,
        if r.stratified { "stratified" } else { "not stratified" },
        r.seed,
        r.fallback
    );
    for w in &r.warnings {
        println!("warning: {w}");
    }
    println!("accuracy: {} ± {} %", percent(r.mean_accuracy), percent(r.std_accuracy));
    println!("abstention rate: {} %", percent(r.abstention_rate));
    println!("triplets examined: {}", r.triplets_examined);
    for f in &r.per_fold {
        println!(
            "  fold {:>2}: {}/{} correct ({} %), {} abstained",
            f.fold,
            f.correct,
            f.test_size,
            percent(f.accuracy),
            f.abstentions
        );
    }
}

pub fn run(a: EvaluateArgs, format: Format) -> Result<Outcome, CliError> {
    let plan = resolve(&a)?;
    let options = load_options(&a.data)?;
    let data = load(&a.data.data, &options)?;
    let summary = DataSummary::of(a.data.data.display().to_string(), &data);
    let start = Instant::now();

    if let Some(test_path) = &a.test {
        let test_options = analogy::io::LoadOptions {
            schema: Some(SchemaFile::of_dataset(&data)),
            class_column: Some(data.class().name.clone()),
            ..options
        };
        let test = load(test_path, &test_options)?;
        let strategy = plan.strategy(plan.single_k());
        let r = evaluate_split(&data, &test, &strategy, plan.fallback, plan.seed)?;
        let out = SplitOutput {
            test_path: test_path.display().to_string(),
            strategy: &r.strategy,
            seed: r.seed,
            fallback: r.fallback,
            train_size: r.train_size,
            test_size: r.test_size,
            correct: r.correct,
            accuracy: r.accuracy,
            abstentions: r.abstentions,
            abstention_rate: r.abstention_rate,
            triplets_examined: r.triplets_examined,
            predictions: r.predictions.iter().map(|p| p.map(|c| data.label_symbol(c))).collect(),
        };
        match format {
            Format::Json => print_json(&EvaluateReport {
                data: summary,
                cross_validation: None,
                grid: None,
                split: Some(out),
            })?,
            Format::Human => {
                println!("strategy: {}", describe(&r.strategy));
                println!("train {} rows, test {} rows", r.train_size, r.test_size);
                println!("accuracy: {}/{} ({} %)", r.correct, r.test_size, percent(r.accuracy));
                println!("abstention rate: {} %", percent(r.abstention_rate));
                println!("triplets examined: {}", r.triplets_examined);
            }
        }
    } else {
        let config = CvConfig {
            folds: plan.folds,
            seed: plan.seed,
            fallback: plan.fallback,
        };
        match &plan.grid {
            Some(grid) => {
                let r = grid_search(&data, grid, |k| plan.strategy(k), &config)?;
                match format {
                    Format::Json => print_json(&EvaluateReport {
                        data: summary,
                        cross_validation: None,
                        grid: Some(&r),
                        split: None,
                    })?,
                    Format::Human => {
                        for (k, run) in r.grid.iter().zip(&r.runs) {
                            println!(
                                "k = {k:>3}: {} ± {} %  ({})",
                                percent(run.mean_accuracy),
                                percent(run.std_accuracy),
                                describe(&run.strategy)
                            );
                        }
                        println!("best k = {} ({} %)", r.best_k, percent(r.best_mean_accuracy));
                    }
                }
            }
            None => {
                let r = cross_validate(&data, &plan.strategy(plan.single_k()), &config)?;
                match format {
                    Format::Json => print_json(&EvaluateReport {
                        data: summary,
                        cross_validation: Some(&r),
                        grid: None,
                        split: None,
                    })?,
                    Format::Human => print_cv(&r),
                }
            }
        }
    }
    if a.timings && format == Format::Human {
        println!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    Ok(Outcome::Done)
}
