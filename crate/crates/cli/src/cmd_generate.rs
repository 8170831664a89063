use std::fs::File;
use std::io::{BufWriter, Write};

use analogy::generate::{
    generate_affine, generate_planted_rules, generate_random_relation, monk, AffineSpec, PlantedSpec,
};
use analogy::io::{write_dataset, write_table};
use analogy::{Attribute, Domain, Schema};

use crate::args::{GenerateArgs, GenerateKind};
use crate::error::{CliError, Outcome};

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Config(vec![format!("--seed is required for {what}")]))
}

pub fn run(a: GenerateArgs) -> Result<Outcome, CliError> {
    let stdout = std::io::stdout().lock();
    match a.kind {
        GenerateKind::Affine { n, coefficients, seed } => {
            let coefficients = match coefficients {
                Some(c) => {
                    if let Some(bad) = c.iter().find(|&&b| b > 1) {
                        return Err(CliError::Config(vec![format!("coefficient {bad} is not 0 or 1")]));
                    }
                    Some(c.iter().map(|&b| b == 1).collect())
                }
                None => None,
            };
            let seed = match coefficients {
                Some(_) => seed.unwrap_or(0),
                None => need_seed(seed, "randomly drawn coefficients")?,
            };
            let data = generate_affine(&AffineSpec { n, coefficients, seed })?;
            write_dataset(stdout, &data, b',')?;
        }
        GenerateKind::Planted { config, truth } => {
            let load_err = |source| CliError::Load {
                path: config.display().to_string(),
                source,
            };
            let file = File::open(&config).map_err(|e| load_err(e.into()))?;
            let spec: PlantedSpec = serde_json::from_reader(file).map_err(|e| load_err(e.into()))?;
            let planted = generate_planted_rules(&spec)?;
            write_dataset(stdout, &planted.data, b',')?;
            if let Some(path) = truth {
                let mut w = BufWriter::new(File::create(path)?);
                serde_json::to_writer_pretty(&mut w, &planted.rules).map_err(analogy::Error::from)?;
                writeln!(w)?;
            }
        }
        GenerateKind::RandomRelation {
            arity,
            domain_size,
            count,
            seed,
        } => {
            let seed = need_seed(seed, "random relations")?;
            if arity == 0 {
                return Err(CliError::Config(vec!["--arity must be at least 1".into()]));
            }
            let schema = Schema::new(
                (0..arity)
                    .map(|i| {
                        let name = format!("A{}", i + 1);
                        let domain = Domain::new(&name, (0..domain_size).map(|v| v.to_string()))?;
                        Ok(Attribute::new(name, domain))
                    })
                    .collect::<analogy::Result<_>>()?,
            )?;
            let r = generate_random_relation(&schema, count, seed)?;
            write_table(stdout, r.schema(), r.tuples(), b',')?;
        }
        GenerateKind::Monk { problem } => write_dataset(stdout, &monk(problem)?, b',')?,
    }
    Ok(Outcome::Done)
}
