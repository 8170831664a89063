use analogy::dependencies::{
    fd_holds, intermediary_tuples, is_trivial_mvd, lossless_join_check, mvd_inference_check, mvd_violation,
    nest_rewrite, weak_mvd_holds, weak_mvd_via_ap, AttrSet, InferenceReport, Relation, EXHAUSTIVE_LIMIT,
};
use analogy::io::{load_table, LoadOptions};
use analogy::{Error, Item, Schema};
use serde::Serialize;

use crate::args::{DepsArgs, DepsMode, Format};
use crate::error::{CliError, Outcome};
use crate::output::{load_sidecar, print_json};

#[derive(Serialize)]
struct Dependency {
    x: Vec<String>,
    y: Vec<String>,
}

#[derive(Serialize)]
struct Mvd {
    x: Vec<String>,
    y: Vec<String>,
    trivial: bool,
    lossless_join: bool,
}

#[derive(Serialize)]
struct ExhaustiveReport {
    attributes: Vec<String>,
    tuples: usize,
    duplicates_dropped: usize,
    fds: Vec<Dependency>,
    mvds: Vec<Mvd>,
    weak_mvds: Vec<Dependency>,
    /// `X ->> Y` and the lossless-join check agreed on every pair.
    lossless_agreement: bool,
    /// The weak-MVD check and its proportion form agreed on every pair.
    ap_agreement: bool,
    inference: InferenceReport,
}

#[derive(Serialize)]
struct Witness<'a> {
    t1: Vec<&'a str>,
    t2: Vec<&'a str>,
    missing: Vec<&'a str>,
}

/// `t1 : t3 :: t4 : t2` with `t3`, `t4` the exchanged tuples, all in the
/// relation.
#[derive(Serialize)]
struct ApWitness<'a> {
    t1: Vec<&'a str>,
    t3: Vec<&'a str>,
    t4: Vec<&'a str>,
    t2: Vec<&'a str>,
}

#[derive(Serialize)]
struct NestedGroup<'a> {
    x: Vec<&'a str>,
    y: Vec<Vec<&'a str>>,
    rest: Vec<Vec<&'a str>>,
    product: bool,
}

#[derive(Serialize)]
struct SingleReport<'a> {
    x: Vec<String>,
    y: Vec<String>,
    tuples: usize,
    duplicates_dropped: usize,
    fd: bool,
    mvd: bool,
    trivial: bool,
    lossless_join: bool,
    weak_mvd: bool,
    weak_mvd_via_ap: bool,
    witness: Option<Witness<'a>>,
    ap_witnesses: Vec<ApWitness<'a>>,
    nested: Vec<NestedGroup<'a>>,
}

fn names(schema: &Schema, s: AttrSet) -> Vec<String> {
    s.names(schema)
}

fn show(names: &[String]) -> String {
    if names.is_empty() {
        "{}".into()
    } else {
        names.join(",")
    }
}

fn symbols_of<'a>(schema: &'a Schema, set: AttrSet, codes: &[u16]) -> Vec<&'a str> {
    set.indices()
        .zip(codes)
        .map(|(i, &c)| schema.attribute(i).domain.symbol(c).unwrap_or("?"))
        .collect()
}

fn exhaustive(r: &Relation, dropped: usize) -> Result<ExhaustiveReport, CliError> {
    let schema = r.schema();
    let n = schema.arity();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::SchemaTooLarge {
            arity: n,
            limit: EXHAUSTIVE_LIMIT,
        }
        .into());
    }
    let inference = mvd_inference_check(r)?;
    let mut report = ExhaustiveReport {
        attributes: schema.names().map(str::to_string).collect(),
        tuples: r.len(),
        duplicates_dropped: dropped,
        fds: vec![],
        mvds: vec![],
        weak_mvds: vec![],
        lossless_agreement: true,
        ap_agreement: true,
        inference,
    };
    for x in r.all().subsets() {
        for y in r.all().minus(x).subsets().filter(|y| !y.is_empty()) {
            if y.len() == 1 && fd_holds(r, x, y)? {
                report.fds.push(Dependency {
                    x: names(schema, x),
                    y: names(schema, y),
                });
            }
            let mvd = mvd_violation(r, x, y)?.is_none();
            let lossless = lossless_join_check(r, x, y)?;
            report.lossless_agreement &= mvd == lossless;
            if mvd {
                report.mvds.push(Mvd {
                    x: names(schema, x),
                    y: names(schema, y),
                    trivial: is_trivial_mvd(schema, x, y),
                    lossless_join: lossless,
                });
            }
            let weak = weak_mvd_holds(r, x, y)?;
            report.ap_agreement &= weak == weak_mvd_via_ap(r, x, y)?;
            if weak {
                report.weak_mvds.push(Dependency {
                    x: names(schema, x),
                    y: names(schema, y),
                });
            }
        }
    }
    Ok(report)
}

fn single<'a>(
    r: &'a Relation,
    dropped: usize,
    x: AttrSet,
    y: AttrSet,
    cap: usize,
) -> Result<SingleReport<'a>, CliError> {
    let schema = r.schema();
    let all = r.all();
    let sym = |t: &Item| symbols_of(schema, all, t.codes());
    let xy = x.union(y);
    let mut ap_witnesses = Vec::new();
    'outer: for t1 in r.tuples() {
        for t2 in r.tuples() {
            if x.indices().any(|k| t1.get(k) != t2.get(k)) {
                continue;
            }
            if let Some((t3, t4)) = intermediary_tuples(t1, t2, xy) {
                if t1 < t2 && r.contains(&t3) && r.contains(&t4) {
                    if ap_witnesses.len() == cap {
                        break 'outer;
                    }
                    ap_witnesses.push(ApWitness {
                        t1: sym(t1),
                        t3: sym(&t3),
                        t4: sym(&t4),
                        t2: sym(t2),
                    });
                }
            }
        }
    }
    let nested = nest_rewrite(r, x, y)?;
    let z = all.minus(xy);
    let witness = mvd_violation(r, x, y)?;
    Ok(SingleReport {
        x: names(schema, x),
        y: names(schema, y),
        tuples: r.len(),
        duplicates_dropped: dropped,
        fd: fd_holds(r, x, y)?,
        mvd: witness.is_none(),
        trivial: is_trivial_mvd(schema, x, y),
        lossless_join: lossless_join_check(r, x, y)?,
        weak_mvd: weak_mvd_holds(r, x, y)?,
        weak_mvd_via_ap: weak_mvd_via_ap(r, x, y)?,
        witness: witness.map(|w| Witness {
            t1: sym(&w.t1),
            t2: sym(&w.t2),
            missing: sym(&w.missing),
        }),
        ap_witnesses,
        nested: nested
            .rows
            .iter()
            .map(|row| NestedGroup {
                x: symbols_of(schema, x, &row.x_values),
                y: row.y_values.iter().map(|v| symbols_of(schema, y.minus(x), v)).collect(),
                rest: row.z_values.iter().map(|v| symbols_of(schema, z, v)).collect(),
                product: row.is_product,
            })
            .collect(),
    })
}

fn attr_set(schema: &Schema, flag: &str, names: &Option<Vec<String>>) -> Result<AttrSet, CliError> {
    let names: Vec<&str> = names
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("--mode single needs --{flag}")))?
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(AttrSet::from_names(schema, &names)?)
}

pub fn run(a: DepsArgs, format: Format) -> Result<Outcome, CliError> {
    let options = LoadOptions {
        delimiter: a.delimiter.byte(),
        schema: load_sidecar(a.schema.as_deref())?,
        ..LoadOptions::default()
    };
    let load_err = |source| CliError::Load {
        path: a.data.display().to_string(),
        source,
    };
    let (schema, tuples) = load_table(&a.data, &options).map_err(load_err)?;
    let (r, dropped) = Relation::new(schema, tuples).map_err(load_err)?;
    match a.mode {
        DepsMode::Exhaustive => {
            let rep = exhaustive(&r, dropped)?;
            match format {
                Format::Json => print_json(&rep)?,
                Format::Human => {
                    println!("{} tuples over {}", rep.tuples, rep.attributes.join(", "));
                    for d in &rep.fds {
                        println!("FD   {} -> {}", show(&d.x), show(&d.y));
                    }
                    for d in rep.mvds.iter().filter(|d| !d.trivial) {
                        println!(
                            "MVD  {} ->> {}  (lossless join: {})",
                            show(&d.x),
                            show(&d.y),
                            d.lossless_join
                        );
                    }
                    println!("trivial MVDs: {}", rep.mvds.iter().filter(|d| d.trivial).count());
                    println!("weak MVDs: {}", rep.weak_mvds.len());
                    println!("MVD/lossless-join agreement: {}", rep.lossless_agreement);
                    println!("weak-MVD/proportion agreement: {}", rep.ap_agreement);
                    println!("inference rule violations: {}", rep.inference.violations.len());
                }
            }
        }
        DepsMode::Single => {
            let x = attr_set(r.schema(), "x", &a.x)?;
            let y = attr_set(r.schema(), "y", &a.y)?;
            let rep = single(&r, dropped, x, y, a.max_witnesses)?;
            match format {
                Format::Json => print_json(&rep)?,
                Format::Human => {
                    let (xs, ys) = (show(&rep.x), show(&rep.y));
                    println!("FD   {xs} -> {ys}: {}", rep.fd);
                    println!(
                        "MVD  {xs} ->> {ys}: {}{}",
                        rep.mvd,
                        if rep.trivial { " (trivial)" } else { "" }
                    );
                    println!("lossless join: {}", rep.lossless_join);
                    println!("weak MVD: {} (via proportions: {})", rep.weak_mvd, rep.weak_mvd_via_ap);
                    if let Some(w) = &rep.witness {
                        println!(
                            "witness: ({}) and ({}) need ({})",
                            w.t1.join(", "),
                            w.t2.join(", "),
                            w.missing.join(", ")
                        );
                    }
                    for w in &rep.ap_witnesses {
                        println!(
                            "({}) : ({}) :: ({}) : ({})",
                            w.t1.join(", "),
                            w.t3.join(", "),
                            w.t4.join(", "),
                            w.t2.join(", ")
                        );
                    }
                }
            }
        }
    }
    Ok(Outcome::Done)
}
