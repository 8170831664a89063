use analogy::explainer::{
    contrastive_explain, rule_candidate, Candidate, ExplainOptions, Explanation, Query, Question,
};
use analogy::{Code, Dataset, Error};
use serde::Serialize;

use crate::args::{ExplainArgs, Format};
use crate::error::{CliError, Outcome};
use crate::output::{load, load_options, print_json};

#[derive(Serialize)]
struct AttributeValue<'a> {
    attribute: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct Change<'a> {
    attribute: &'a str,
    /// Value in the adverse example.
    from: &'a str,
    /// Value in the query.
    to: &'a str,
}

#[derive(Serialize)]
struct Rule<'a> {
    change: Vec<Change<'a>>,
    result_from: &'a str,
    result_to: &'a str,
    supporting: u64,
    exceptions: u64,
}

#[derive(Serialize)]
struct CandidateOut<'a> {
    adverse_row: usize,
    contrast: &'a str,
    change: Vec<Change<'a>>,
    shared: Vec<&'a str>,
    context: Vec<&'a str>,
    supporting_pair: Option<(usize, usize)>,
    supporting_pairs: u64,
    exception_pairs: u64,
    strength: f64,
    rule: Rule<'a>,
}

#[derive(Serialize)]
struct ExplainReport<'a> {
    question: &'static str,
    target: Option<&'a str>,
    row: Option<usize>,
    query: Vec<AttributeValue<'a>>,
    result: &'a str,
    supported: bool,
    sentence: String,
    best: Option<CandidateOut<'a>>,
    alternatives: Vec<CandidateOut<'a>>,
    adverse_rows: Vec<usize>,
}

fn symbol(table: &Dataset, attribute: usize, code: Code) -> &str {
    table.schema().attribute(attribute).domain.symbol(code).unwrap_or("?")
}

fn render<'a>(table: &'a Dataset, c: &Candidate) -> Result<CandidateOut<'a>, CliError> {
    let name = |i: usize| table.schema().attribute(i).name.as_str();
    let changes = |codes_from: &[Code], codes_to: &[Code]| -> Vec<Change<'a>> {
        c.split
            .change
            .iter()
            .zip(codes_from.iter().zip(codes_to))
            .map(|(&i, (&v, &w))| Change {
                attribute: &table.schema().attribute(i).name,
                from: symbol(table, i, v),
                to: symbol(table, i, w),
            })
            .collect()
    };
    let rule = rule_candidate(table, &c.split)?;
    Ok(CandidateOut {
        adverse_row: c.adverse_row,
        contrast: table.label_symbol(c.contrast),
        change: changes(&c.split.v, &c.split.w),
        shared: c.split.shared.iter().map(|&i| name(i)).collect(),
        context: c.split.context.iter().map(|&i| name(i)).collect(),
        supporting_pair: c.supporting_pair,
        supporting_pairs: c.supporting_pairs,
        exception_pairs: c.exception_pairs,
        strength: c.strength,
        rule: Rule {
            change: changes(&rule.from, &rule.to),
            result_from: table.label_symbol(rule.result_from),
            result_to: table.label_symbol(rule.result_to),
            supporting: rule.supporting,
            exceptions: rule.exceptions,
        },
    })
}

fn class_code(table: &Dataset, s: &str) -> Result<Code, CliError> {
    table.class().domain.code(s).ok_or_else(|| {
        CliError::Core(Error::UnknownSymbol {
            attribute: table.class().name.clone(),
            symbol: s.to_string(),
        })
    })
}

fn build_query(table: &Dataset, a: &ExplainArgs) -> Result<Query, CliError> {
    match (a.row, &a.query, &a.result) {
        (Some(row), None, _) => Ok(Query::from_row(table, row)?),
        (None, Some(q), Some(r)) => {
            let symbols: Vec<&str> = q.split(',').map(str::trim).collect();
            let item = table.schema().item(&symbols)?;
            let result = class_code(table, r)?;
            let row = (0..table.len()).find(|&i| *table.item(i) == item && table.label(i) == result);
            Ok(Query { item, result, row })
        }
        _ => Err(CliError::Usage("give --row, or --query with --result".into())),
    }
}

fn print_human(table: &Dataset, e: &Explanation, out: &ExplainReport) {
    println!("{}", out.sentence);
    if let Some(best) = &out.best {
        println!(
            "adverse example: row {} ({} = {}), strength {:.4} ({} supporting, {} exception pairs)",
            best.adverse_row,
            table.class().name,
            best.contrast,
            best.strength,
            best.supporting_pairs,
            best.exception_pairs
        );
        println!(
            "rule: {} supporting, {} exceptions",
            best.rule.supporting, best.rule.exceptions
        );
    }
    if !e.alternatives.is_empty() {
        let rows: Vec<String> = e.alternatives.iter().map(|c| c.adverse_row.to_string()).collect();
        println!("other adverse rows: {}", rows.join(", "));
    }
}

pub fn run(a: ExplainArgs, format: Format) -> Result<Outcome, CliError> {
    let options = load_options(&a.data)?;
    let table = load(&a.data.data, &options)?;
    let query = build_query(&table, &a)?;
    let question = match &a.target {
        Some(t) => Question::WhyNot(class_code(&table, t)?),
        None => Question::Why,
    };
    let e = contrastive_explain(
        &table,
        &query,
        question,
        ExplainOptions {
            max_change: a.max_change,
        },
    )?;
    let out = ExplainReport {
        question: match question {
            Question::Why => "why",
            Question::WhyNot(_) => "why_not",
        },
        target: a.target.as_deref(),
        row: query.row,
        query: table
            .schema()
            .attributes()
            .iter()
            .enumerate()
            .map(|(i, attr)| AttributeValue {
                attribute: &attr.name,
                value: symbol(&table, i, query.item.get(i)),
            })
            .collect(),
        result: table.label_symbol(query.result),
        supported: e.supported,
        sentence: e.sentence(&table),
        best: e.best.as_ref().map(|c| render(&table, c)).transpose()?,
        alternatives: e
            .alternatives
            .iter()
            .map(|c| render(&table, c))
            .collect::<Result<_, _>>()?,
        adverse_rows: e.adverse_rows.clone(),
    };
    match format {
        Format::Json => print_json(&out)?,
        Format::Human => print_human(&table, &e, &out),
    }
    Ok(if e.supported { Outcome::Done } else { Outcome::NoAnswer })
}
