//! Seeded synthetic tables: affine Boolean truth tables, datasets with
//! planted change rules, random relations, and the three MONK's problems.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the spec's seed, so
//! output is a pure function of the spec.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ap::{DiffEntry, DiffVector};
use crate::classifier::PairIndex;
use crate::dataset::Dataset;
use crate::dependencies::Relation;
use crate::error::{Error, Result};
use crate::schema::{Attribute, Code, Domain, Item, Schema};

/// Largest arity for full truth tables.
pub const MAX_TRUTH_TABLE_ARITY: usize = 20;

fn boolean_class() -> Attribute {
    Attribute::new("class", Domain::boolean())
}

/// Full truth table of `f` over `n` Boolean attributes. Rows count upward in
/// binary with `x1` as the most significant bit.
pub fn truth_table(n: usize, f: impl Fn(&[bool]) -> bool) -> Result<Dataset> {
    if n == 0 || n > MAX_TRUTH_TABLE_ARITY {
        return Err(Error::InvalidParameter(format!(
            "truth tables need 1..={MAX_TRUTH_TABLE_ARITY} attributes, got {n}"
        )));
    }
    let mut items = Vec::with_capacity(1 << n);
    let mut labels = Vec::with_capacity(1 << n);
    for row in 0u32..(1 << n) {
        let bits: Vec<bool> = (0..n).map(|i| row >> (n - 1 - i) & 1 == 1).collect();
        labels.push(f(&bits) as Code);
        items.push(Item::new(bits.iter().map(|&b| b as Code).collect()));
    }
    Dataset::new(Schema::boolean(n), boolean_class(), items, labels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpec {
    pub n: usize,
    /// `c0, c1, ..., cn` for `f(x) = c0 ⊕ c1·x1 ⊕ ... ⊕ cn·xn`; drawn from
    /// the seed when absent.
    pub coefficients: Option<Vec<bool>>,
    pub seed: u64,
}

impl AffineSpec {
    pub fn resolved_coefficients(&self) -> Result<Vec<bool>> {
        match &self.coefficients {
            Some(c) if c.len() == self.n + 1 => Ok(c.clone()),
            Some(c) => Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                self.n + 1,
                c.len()
            ))),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok((0..=self.n).map(|_| rng.random::<bool>()).collect())
            }
        }
    }
}

pub fn generate_affine(spec: &AffineSpec) -> Result<Dataset> {
    let c = spec.resolved_coefficients()?;
    truth_table(spec.n, |x| {
        x.iter().zip(&c[1..]).fold(c[0], |acc, (&xi, &ci)| acc ^ (xi && ci))
    })
}

/// Every coefficient vector of length `n + 1`, in binary counting order.
pub fn all_affine_coefficients(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << (n + 1)).map(move |m| (0..=n).map(|i| m >> i & 1 == 1).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeSpec {
    pub attribute: usize,
    pub from: Code,
    pub to: Code,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedRule {
    pub change: Vec<ChangeSpec>,
    /// Result tilt `(p, q)` with `p != q`.
    pub tilt: (Code, Code),
    /// Pairs showing the tilt.
    pub instances: usize,
    /// Pairs with the same change but label `p` on both sides.
    pub exceptions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub domain_sizes: Vec<usize>,
    pub classes: Vec<String>,
    pub rules: Vec<PlantedRule>,
    /// Extra random rows that must not disturb the planted counts.
    pub background: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundTruth {
    pub change: DiffVector,
    pub tilt: (Code, Code),
    pub instances: usize,
    pub exceptions: usize,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedDataset {
    pub data: Dataset,
    pub rules: Vec<GroundTruth>,
}

fn symbol_names(size: usize) -> Vec<String> {
    let width = (size.saturating_sub(1)).to_string().len();
    (0..size).map(|i| format!("{i:0width$}")).collect()
}

fn planted_schema(sizes: &[usize]) -> Result<Schema> {
    Schema::new(
        sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let name = format!("a{}", i + 1);
                Ok(Attribute::new(name.clone(), Domain::new(&name, symbol_names(k))?))
            })
            .collect::<Result<_>>()?,
    )
}

impl PlantedSpec {
    fn check(&self) -> Result<Vec<DiffVector>> {
        let bad = |m: String| Err(Error::InconsistentSpec(m));
        if self.classes.len() < 2 {
            return bad("need at least two classes".into());
        }
        let mut seen = HashSet::new();
        let mut changes = Vec::new();
        for (r, rule) in self.rules.iter().enumerate() {
            let (p, q) = rule.tilt;
            if p == q || p as usize >= self.classes.len() || q as usize >= self.classes.len() {
                return bad(format!("rule {r}: invalid tilt"));
            }
            if rule.instances == 0 || rule.change.is_empty() {
                return bad(format!("rule {r}: needs a change and at least one instance"));
            }
            let mut entries = vec![DiffEntry::Equal; self.domain_sizes.len()];
            for c in &rule.change {
                let size = *self.domain_sizes.get(c.attribute).unwrap_or(&0);
                if c.from == c.to || c.from as usize >= size || c.to as usize >= size {
                    return bad(format!("rule {r}: invalid change on attribute {}", c.attribute));
                }
                if entries[c.attribute] != DiffEntry::Equal {
                    return bad(format!("rule {r}: attribute {} changed twice", c.attribute));
                }
                entries[c.attribute] = DiffEntry::Change { from: c.from, to: c.to };
            }
            let change = DiffVector::from_entries(entries);
            if !seen.insert(change.clone()) || seen.contains(&change.reversed()) {
                return bad(format!("rule {r}: change overlaps another rule"));
            }
            changes.push(change);
        }
        Ok(changes)
    }
}

/// Builds a dataset in which each planted change occurs in exactly
/// `instances + exceptions` ordered pairs with the requested labels.
///
/// Contexts are drawn at random; draws that create accidental extra pairs
/// are rejected and redrawn.
pub fn generate_planted_rules(spec: &PlantedSpec) -> Result<PlantedDataset> {
    let changes = spec.check()?;
    let schema = planted_schema(&spec.domain_sizes)?;
    let class = Attribute::new("class", Domain::new("class", spec.classes.iter().cloned())?);
    if class.domain.len() != spec.classes.len() {
        return Err(Error::InconsistentSpec("duplicate class names".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let mut items: Vec<Item> = Vec::new();
        let mut labels: Vec<Code> = Vec::new();
        let mut used: HashSet<Item> = HashSet::new();
        let mut ok = true;
        let random_item = |rng: &mut ChaCha8Rng| -> Item {
            Item::new(
                spec.domain_sizes
                    .iter()
                    .map(|&k| rng.random_range(0..k) as Code)
                    .collect(),
            )
        };
        'rules: for rule in &spec.rules {
            for n in 0..rule.instances + rule.exceptions {
                let mut a = random_item(&mut rng);
                let mut b;
                let mut tries = 0;
                loop {
                    let mut codes_a = a.codes().to_vec();
                    for c in &rule.change {
                        codes_a[c.attribute] = c.from;
                    }
                    let mut codes_b = codes_a.clone();
                    for c in &rule.change {
                        codes_b[c.attribute] = c.to;
                    }
                    a = Item::new(codes_a);
                    b = Item::new(codes_b);
                    if !used.contains(&a) && !used.contains(&b) {
                        break;
                    }
                    tries += 1;
                    if tries > 100 {
                        ok = false;
                        break 'rules;
                    }
                    a = random_item(&mut rng);
                }
                let (p, q) = rule.tilt;
                let lb = if n < rule.instances { q } else { p };
                used.insert(a.clone());
                used.insert(b.clone());
                items.extend([a, b]);
                labels.extend([p, lb]);
            }
        }
        if !ok {
            continue;
        }
        for _ in 0..spec.background {
            let x = random_item(&mut rng);
            if used.insert(x.clone()) {
                items.push(x);
                labels.push(rng.random_range(0..spec.classes.len()) as Code);
            }
        }
        let data = Dataset::new(schema.clone(), class.clone(), items, labels)?;
        if let Some(rules) = verify_planted(&data, spec, &changes) {
            return Ok(PlantedDataset { data, rules });
        }
    }
    Err(Error::InconsistentSpec(format!(
        "no layout reproduced the planted counts in {ATTEMPTS} attempts"
    )))
}

fn verify_planted(data: &Dataset, spec: &PlantedSpec, changes: &[DiffVector]) -> Option<Vec<GroundTruth>> {
    let index = PairIndex::build(data);
    let mut truth = Vec::new();
    for (rule, change) in spec.rules.iter().zip(changes) {
        let group = index.get(change)?;
        let expected: BTreeMap<(Code, Code), u64> = [
            (rule.tilt, rule.instances as u64),
            ((rule.tilt.0, rule.tilt.0), rule.exceptions as u64),
        ]
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .collect();
        if group.tilts != expected {
            return None;
        }
        truth.push(GroundTruth {
            change: change.clone(),
            tilt: rule.tilt,
            instances: rule.instances,
            exceptions: rule.exceptions,
            confidence: rule.instances as f64 / (rule.instances + rule.exceptions) as f64,
        });
    }
    Some(truth)
}

/// `tuple_count` distinct tuples drawn uniformly from the product of the
/// schema's domains.
pub fn generate_random_relation(schema: &Schema, tuple_count: usize, seed: u64) -> Result<Relation> {
    let space = schema.space_size();
    if tuple_count as u128 > space {
        return Err(Error::SpaceExceeded {
            requested: tuple_count as u128,
            available: space,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decode = |mut k: u128| -> Item {
        let mut codes = vec![0; schema.arity()];
        for (i, a) in schema.attributes().iter().enumerate().rev() {
            let size = a.domain.len() as u128;
            codes[i] = (k % size) as Code;
            k /= size;
        }
        Item::new(codes)
    };
    let tuples: Vec<Item> = match usize::try_from(space) {
        Ok(space) if space <= 1 << 24 => index::sample(&mut rng, space, tuple_count)
            .into_iter()
            .map(|k| decode(k as u128))
            .collect(),
        _ => {
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(tuple_count);
            while out.len() < tuple_count {
                let t = Item::new(
                    schema
                        .attributes()
                        .iter()
                        .map(|a| rng.random_range(0..a.domain.len()) as Code)
                        .collect(),
                );
                if seen.insert(t.clone()) {
                    out.push(t);
                }
            }
            out
        }
    };
    Ok(Relation::new(schema.clone(), tuples)?.0)
}

/// The full 432-row instance space of MONK's problem 1, 2 or 3, labeled by
/// the problem's target concept (no label noise).
pub fn monk(problem: u8) -> Result<Dataset> {
    const SIZES: [usize; 6] = [3, 3, 2, 3, 4, 2];
    let concept: fn(&[u16; 6]) -> bool = match problem {
        1 => |a| a[0] == a[1] || a[4] == 1,
        2 => |a| a.iter().filter(|&&v| v == 1).count() == 2,
        3 => |a| (a[4] == 3 && a[3] == 1) || (a[4] != 4 && a[1] != 3),
        _ => return Err(Error::InvalidParameter(format!("no MONK's problem {problem}"))),
    };
    let schema = Schema::new(
        SIZES
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let name = format!("a{}", i + 1);
                Ok(Attribute::new(
                    name.clone(),
                    Domain::new(&name, (1..=k).map(|v| v.to_string()))?,
                ))
            })
            .collect::<Result<_>>()?,
    )?;
    let mut items = Vec::new();
    let mut labels = Vec::new();
    let mut values = [1u16; 6];
    loop {
        items.push(Item::new(values.iter().map(|v| v - 1).collect()));
        labels.push(concept(&values) as Code);
        let mut i = 5;
        loop {
            if (values[i] as usize) < SIZES[i] {
                values[i] += 1;
                break;
            }
            values[i] = 1;
            if i == 0 {
                return Dataset::new(schema, boolean_class(), items, labels);
            }
            i -= 1;
        }
    }
}
