use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::ap::{diff_unchecked, DiffVector};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Code, Item};

/// Ordered training pairs grouped by their diff vector.
///
/// Since `a : b :: c : d` holds exactly when `diff(a,b) = diff(c,d)`, looking
/// up `diff(c, query)` yields every `(a,b)` completing a proportion with
/// `(c, query)`.
#[derive(Clone, Debug, Default)]
pub struct PairIndex {
    groups: HashMap<DiffVector, PairGroup>,
}

#[derive(Clone, Debug, Default)]
pub struct PairGroup {
    /// Row indices `(a, b)`, sorted.
    pub pairs: Vec<(u32, u32)>,
    /// Count per label tilt `(label(a), label(b))`.
    pub tilts: BTreeMap<(Code, Code), u64>,
}

impl PairGroup {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl PairIndex {
    /// All ordered pairs, including `(a, a)`.
    pub fn build(data: &Dataset) -> Self {
        let n = data.len();
        let mut groups: HashMap<DiffVector, PairGroup> = HashMap::new();
        for i in 0..n {
            let a = data.item(i);
            for j in 0..n {
                let group = groups.entry(diff_unchecked(a, data.item(j))).or_default();
                group.pairs.push((i as u32, j as u32));
                *group.tilts.entry((data.label(i), data.label(j))).or_default() += 1;
            }
        }
        Self { groups }
    }

    pub fn get(&self, key: &DiffVector) -> Option<&PairGroup> {
        self.groups.get(key)
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> impl Iterator<Item = (&DiffVector, &PairGroup)> {
        self.groups.iter()
    }
}

/// How a pair's label behaves across its change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Behavior {
    SameLabel,
    Tilt { from: Code, to: Code },
}

impl Behavior {
    pub fn of(from: Code, to: Code) -> Self {
        if from == to {
            Behavior::SameLabel
        } else {
            Behavior::Tilt { from, to }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompetentPair {
    /// Row indices of `a` and `b` in the mined dataset.
    pub rows: (usize, usize),
    pub a: Item,
    pub b: Item,
    pub rule_change: DiffVector,
    pub tilt: (Code, Code),
    pub behavior: Behavior,
    /// Pairs in the dataset with this change and this behavior.
    pub support: u64,
    /// `support` over the number of pairs with this change.
    pub confidence: f64,
}

/// Mines ordered pairs whose change-to-behavior rule is frequent and reliable.
///
/// Pairs are grouped by diff vector; inside a group each behavior (same
/// label, or a specific tilt `p -> q`) gets a support count and a confidence
/// equal to its share of the group. Pairs without any change are skipped.
/// Output is sorted by row indices.
pub fn extract_competent_pairs(train: &Dataset, min_support: u64, min_confidence: f64) -> Result<Vec<CompetentPair>> {
    if min_support < 1 {
        return Err(Error::InvalidParameter("min_support must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&min_confidence) {
        return Err(Error::InvalidParameter("min_confidence must lie in [0, 1]".into()));
    }
    let index = PairIndex::build(train);
    let mut out = Vec::new();
    for (change, group) in index.groups() {
        if change.is_identity() {
            continue;
        }
        let mut by_behavior: BTreeMap<Behavior, u64> = BTreeMap::new();
        for (&(p, q), &count) in &group.tilts {
            *by_behavior.entry(Behavior::of(p, q)).or_default() += count;
        }
        let size = group.len() as f64;
        for &(i, j) in &group.pairs {
            let (i, j) = (i as usize, j as usize);
            let tilt = (train.label(i), train.label(j));
            let behavior = Behavior::of(tilt.0, tilt.1);
            let support = by_behavior[&behavior];
            let confidence = support as f64 / size;
            if support >= min_support && confidence >= min_confidence {
                out.push(CompetentPair {
                    rows: (i, j),
                    a: train.item(i).clone(),
                    b: train.item(j).clone(),
                    rule_change: change.clone(),
                    tilt,
                    behavior,
                    support,
                    confidence,
                });
            }
        }
    }
    out.sort_by_key(|p| p.rows);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{Attribute, Domain, Schema};

    fn dataset(rows: &[(&[Code], Code)]) -> Dataset {
        let n = rows[0].0.len();
        Dataset::new(
            Schema::boolean(n),
            Attribute::new("class", Domain::new("class", ["p", "q"]).unwrap()),
            rows.iter().map(|(x, _)| Item::new(x.to_vec())).collect(),
            rows.iter().map(|(_, l)| *l).collect(),
        )
        .unwrap()
    }

    #[test]
    fn index_covers_all_ordered_pairs() {
        let d = dataset(&[(&[0, 0], 0), (&[0, 1], 1), (&[1, 0], 0)]);
        let index = PairIndex::build(&d);
        let total: usize = index.groups().map(|(_, g)| g.len()).sum();
        assert_eq!(total, 9);
        let ident = diff_unchecked(d.item(0), d.item(0));
        assert_eq!(index.get(&ident).unwrap().len(), 3);
    }

    #[test]
    fn exception_free_rule_has_full_confidence() {
        // x2: 0 -> 1 always tilts p -> q.
        let d = dataset(&[(&[0, 0], 0), (&[0, 1], 1), (&[1, 0], 0), (&[1, 1], 1)]);
        let pairs = extract_competent_pairs(&d, 1, 1.0).unwrap();
        let change = diff_unchecked(d.item(0), d.item(1));
        let rule: Vec<_> = pairs.iter().filter(|p| p.rule_change == change).collect();
        assert_eq!(rule.len(), 2);
        assert!(rule.iter().all(|p| p.confidence == 1.0 && p.support == 2));
    }

    #[test]
    fn exception_lowers_confidence() {
        // (0,0)->(0,1) tilts p->q, (1,0)->(1,1) keeps p.
        let d = dataset(&[(&[0, 0], 0), (&[0, 1], 1), (&[1, 0], 0), (&[1, 1], 0)]);
        let pairs = extract_competent_pairs(&d, 1, 0.0).unwrap();
        let p = pairs.iter().find(|p| p.rows == (0, 1)).unwrap();
        assert_eq!(p.confidence, 0.5);
        let e = pairs.iter().find(|p| p.rows == (2, 3)).unwrap();
        assert_eq!(e.behavior, Behavior::SameLabel);
        assert_eq!(e.confidence, 0.5);
    }

    #[test]
    fn threshold_validation() {
        let d = dataset(&[(&[0], 0), (&[1], 1)]);
        assert!(extract_competent_pairs(&d, 0, 0.5).is_err());
        assert!(extract_competent_pairs(&d, 1, 1.5).is_err());
    }
}
