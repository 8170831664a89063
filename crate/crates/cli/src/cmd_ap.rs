use analogy::ap::{holds, inverse_paralogy_raw, solve_raw};
use serde::Serialize;

use crate::args::{ApArgs, ApOp, Format};
use crate::error::{CliError, Outcome};
use crate::output::print_json;

#[derive(Serialize)]
struct CheckReport<'a> {
    relation: &'a str,
    values: &'a [String],
    holds: bool,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    values: &'a [String],
    solution: Option<String>,
}

/// Splits each value into components and checks arity and domain.
fn components<'v>(values: &'v [String], domain: Option<&[String]>) -> Result<Vec<Vec<&'v str>>, CliError> {
    let split: Vec<Vec<&str>> = values.iter().map(|v| v.split(',').map(str::trim).collect()).collect();
    let arity = split[0].len();
    if split.iter().any(|s| s.len() != arity) {
        return Err(CliError::Usage(
            "all values must have the same number of components".into(),
        ));
    }
    if let Some(domain) = domain {
        if let Some(bad) = split.iter().flatten().find(|s| !domain.iter().any(|d| d == *s)) {
            return Err(CliError::Usage(format!("`{bad}` is not in the domain")));
        }
    }
    Ok(split)
}

fn boolean(s: &str) -> Result<bool, CliError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(CliError::Usage(format!("inverse paralogy needs 0/1 values, got `{s}`"))),
    }
}

pub fn run(args: ApArgs, format: Format) -> Result<Outcome, CliError> {
    match args.op {
        ApOp::Check { values, ip, domain } => {
            let v = components(&values, domain.as_deref())?;
            let mut result = true;
            for (((&a, &b), &c), &d) in v[0].iter().zip(&v[1]).zip(&v[2]).zip(&v[3]) {
                let ok = if ip {
                    inverse_paralogy_raw(boolean(a)?, boolean(b)?, boolean(c)?, boolean(d)?)
                } else {
                    holds(a, b, c, d)
                };
                result &= ok;
            }
            match format {
                Format::Human => println!("{result}"),
                Format::Json => print_json(&CheckReport {
                    relation: if ip {
                        "inverse_paralogy"
                    } else {
                        "analogical_proportion"
                    },
                    values: &values,
                    holds: result,
                })?,
            }
            Ok(Outcome::Done)
        }
        ApOp::Solve { values, domain } => {
            let v = components(&values, domain.as_deref())?;
            let solution: Option<Vec<&str>> = (0..v[0].len()).map(|i| solve_raw(v[0][i], v[1][i], v[2][i])).collect();
            let solution = solution.map(|s| s.join(","));
            match format {
                Format::Human => println!("{}", solution.as_deref().unwrap_or("NO-SOLUTION")),
                Format::Json => print_json(&SolveReport {
                    values: &values,
                    solution: solution.clone(),
                })?,
            }
            Ok(if solution.is_some() {
                Outcome::Done
            } else {
                Outcome::NoAnswer
            })
        }
    }
}
