//! Functional, multivalued and weak multivalued dependencies on finite
//! relations, and how the latter line up with analogical proportions.
//!
//! Attribute subsets are bitmasks over schema positions ([`AttrSet`]), so
//! they are always canonical (schema order) when listed.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::ap::{holds_vec, solve_vec};
use crate::error::{Error, Result};
use crate::schema::{Code, Item, Schema};

/// Exhaustive subset enumeration is limited to schemas of this size.
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// A subset of schema positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(arity: usize) -> Self {
        if arity >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << arity) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn from_names<S: AsRef<str>>(schema: &Schema, names: &[S]) -> Result<Self> {
        let mut bits = 0;
        for name in names {
            bits |= 1u64 << schema.index_of(name.as_ref())?;
        }
        Ok(Self(bits))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: AttrSet) -> AttrSet {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: AttrSet) -> AttrSet {
        Self(self.0 & other.0)
    }

    pub fn minus(self, other: AttrSet) -> AttrSet {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn names(self, schema: &Schema) -> Vec<String> {
        self.indices().map(|i| schema.attribute(i).name.clone()).collect()
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = AttrSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == full {
                None
            } else {
                Some((current.wrapping_sub(full)) & full)
            };
            Some(AttrSet(current))
        })
    }
}

impl fmt::Display for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A finite set of tuples over a schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    schema: Schema,
    tuples: Vec<Item>,
    members: HashSet<Item>,
}

impl Relation {
    /// Sorts the tuples and drops duplicates; returns the relation and the
    /// number of duplicates dropped.
    pub fn new(schema: Schema, tuples: Vec<Item>) -> Result<(Self, usize)> {
        if schema.arity() > 64 {
            return Err(Error::SchemaTooLarge {
                arity: schema.arity(),
                limit: 64,
            });
        }
        for t in &tuples {
            schema.validate(t)?;
        }
        let before = tuples.len();
        let mut tuples = tuples;
        tuples.sort();
        tuples.dedup();
        let dropped = before - tuples.len();
        let members = tuples.iter().cloned().collect();
        Ok((
            Self {
                schema,
                tuples,
                members,
            },
            dropped,
        ))
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn tuples(&self) -> &[Item] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &Item) -> bool {
        self.members.contains(t)
    }

    pub fn all(&self) -> AttrSet {
        AttrSet::full(self.schema.arity())
    }

    fn check(&self, sets: &[AttrSet]) -> Result<()> {
        let all = self.all();
        for s in sets {
            if !s.is_subset(all) {
                let bad = s.minus(all).indices().next().unwrap_or(0);
                return Err(Error::UnknownAttribute(format!("#{bad}")));
            }
        }
        Ok(())
    }

    /// Copy with `t` removed.
    pub fn without(&self, t: &Item) -> Relation {
        let tuples: Vec<Item> = self.tuples.iter().filter(|u| *u != t).cloned().collect();
        let members = tuples.iter().cloned().collect();
        Relation {
            schema: self.schema.clone(),
            tuples,
            members,
        }
    }
}

fn project(t: &Item, set: AttrSet) -> Vec<Code> {
    set.indices().map(|i| t.get(i)).collect()
}

/// Tuple taking `on` positions from `left` and the rest from `right`.
fn splice(left: &Item, right: &Item, on: AttrSet) -> Item {
    Item::new(
        (0..left.len())
            .map(|i| if on.contains(i) { left.get(i) } else { right.get(i) })
            .collect(),
    )
}

/// `X -> Y`: tuples equal on `X` are equal on `Y`.
pub fn fd_holds(r: &Relation, x: AttrSet, y: AttrSet) -> Result<bool> {
    r.check(&[x, y])?;
    let mut seen: HashMap<Vec<Code>, Vec<Code>> = HashMap::new();
    for t in r.tuples() {
        let image = project(t, y);
        match seen.get(&project(t, x)) {
            Some(prev) if *prev != image => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(project(t, x), image);
            }
        }
    }
    Ok(true)
}

/// Evidence that `X ->> Y` fails: `t1`, `t2` agree on `X` but the exchanged
/// tuple taking `XY` from `t1` and the rest from `t2` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvdWitness {
    pub t1: Item,
    pub t2: Item,
    pub missing: Item,
}

/// First violation of `X ->> Y` in tuple order, if any.
pub fn mvd_violation(r: &Relation, x: AttrSet, y: AttrSet) -> Result<Option<MvdWitness>> {
    r.check(&[x, y])?;
    let xy = x.union(y);
    let mut by_x: HashMap<Vec<Code>, Vec<&Item>> = HashMap::new();
    for t in r.tuples() {
        by_x.entry(project(t, x)).or_default().push(t);
    }
    for t1 in r.tuples() {
        for t2 in &by_x[&project(t1, x)] {
            let t3 = splice(t1, t2, xy);
            if !r.contains(&t3) {
                return Ok(Some(MvdWitness {
                    t1: t1.clone(),
                    t2: (*t2).clone(),
                    missing: t3,
                }));
            }
        }
    }
    Ok(None)
}

/// `X ->> Y`: for all `t1`, `t2` agreeing on `X`, the tuple with `t1`'s
/// `XY` part and `t2`'s remaining part is in `r`.
pub fn mvd_holds(r: &Relation, x: AttrSet, y: AttrSet) -> Result<bool> {
    Ok(mvd_violation(r, x, y)?.is_none())
}

/// `X ->>w Y`: for all `t1, t2, t3` with `t1[XY] = t2[XY]` and
/// `t1[X(R\Y)] = t3[X(R\Y)]`, some `t4` has `t4[XY] = t3[XY]` and
/// `t4[X(R\Y)] = t2[X(R\Y)]`.
pub fn weak_mvd_holds(r: &Relation, x: AttrSet, y: AttrSet) -> Result<bool> {
    r.check(&[x, y])?;
    let xy = x.union(y);
    let xrest = x.union(r.all().minus(y));
    let mut by_xy: HashMap<Vec<Code>, Vec<&Item>> = HashMap::new();
    let mut by_xrest: HashMap<Vec<Code>, Vec<&Item>> = HashMap::new();
    for t in r.tuples() {
        by_xy.entry(project(t, xy)).or_default().push(t);
        by_xrest.entry(project(t, xrest)).or_default().push(t);
    }
    for t1 in r.tuples() {
        for t2 in &by_xy[&project(t1, xy)] {
            for t3 in &by_xrest[&project(t1, xrest)] {
                let t4_xy = project(t3, xy);
                let t4_xrest = project(t2, xrest);
                let found = by_xy
                    .get(&t4_xy)
                    .is_some_and(|cands| cands.iter().any(|t4| project(t4, xrest) == t4_xrest));
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The weak-MVD condition restated through analogical proportions: every
/// `(t1, t2, t3)` in the weak-MVD layout yields an equation
/// `t1 : t2 :: t3 : x` whose solution is a tuple of `r`.
pub fn weak_mvd_via_ap(r: &Relation, x: AttrSet, y: AttrSet) -> Result<bool> {
    r.check(&[x, y])?;
    let xy = x.union(y);
    let xrest = x.union(r.all().minus(y));
    for t1 in r.tuples() {
        for t2 in r.tuples() {
            if project(t1, xy) != project(t2, xy) {
                continue;
            }
            for t3 in r.tuples() {
                if project(t1, xrest) != project(t3, xrest) {
                    continue;
                }
                match solve_vec(t1, t2, t3)? {
                    Some(t4) if r.contains(&t4) => {}
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}

/// Trivial when `Y ⊆ X` or `X ∪ Y` covers the schema.
pub fn is_trivial_mvd(schema: &Schema, x: AttrSet, y: AttrSet) -> bool {
    y.is_subset(x) || x.union(y) == AttrSet::full(schema.arity())
}

/// Projects `r` onto `XY` and `X(R\Y)`, joins the projections on their
/// shared attributes and compares the result with `r`.
pub fn lossless_join_check(r: &Relation, x: AttrSet, y: AttrSet) -> Result<bool> {
    r.check(&[x, y])?;
    let left_attrs = x.union(y);
    let right_attrs = x.union(r.all().minus(y));
    let left: BTreeSet<Vec<Code>> = r.tuples().iter().map(|t| project(t, left_attrs)).collect();
    let right: BTreeSet<Vec<Code>> = r.tuples().iter().map(|t| project(t, right_attrs)).collect();
    let joined = natural_join(r.schema().arity(), left_attrs, &left, right_attrs, &right);
    let original: BTreeSet<Item> = r.tuples().iter().cloned().collect();
    Ok(joined == original)
}

fn natural_join(
    arity: usize,
    left_attrs: AttrSet,
    left: &BTreeSet<Vec<Code>>,
    right_attrs: AttrSet,
    right: &BTreeSet<Vec<Code>>,
) -> BTreeSet<Item> {
    let left_pos: Vec<usize> = left_attrs.indices().collect();
    let right_pos: Vec<usize> = right_attrs.indices().collect();
    let mut out = BTreeSet::new();
    for l in left {
        'right: for rt in right {
            let mut row: Vec<Option<Code>> = vec![None; arity];
            for (k, &i) in left_pos.iter().enumerate() {
                row[i] = Some(l[k]);
            }
            for (k, &i) in right_pos.iter().enumerate() {
                match row[i] {
                    Some(v) if v != rt[k] => continue 'right,
                    _ => row[i] = Some(rt[k]),
                }
            }
            if let Some(codes) = row.into_iter().collect::<Option<Vec<Code>>>() {
                out.insert(Item::new(codes));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceRule {
    /// `X -> Y` implies `X ->> Y`.
    FdToMvd,
    /// `X ->> Y` implies `X ->> R\Y`.
    Complementation,
    /// `X ->> Y` and `Z ⊆ U` imply `XU ->> YZ`.
    Augmentation,
    /// `X ->> Y` and `Y ->> Z` imply `X ->> Z\Y`.
    Transitivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InferenceViolation {
    pub rule: InferenceRule,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Option<Vec<usize>>,
    pub u: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InferenceReport {
    pub arity: usize,
    /// Instances of each rule whose premises held on the relation.
    pub fd_to_mvd: u64,
    pub complementation: u64,
    pub augmentation: u64,
    pub transitivity: u64,
    pub violations: Vec<InferenceViolation>,
}

/// Checks the four MVD inference rules on every applicable subset
/// combination. Any violation means the checkers disagree with the theory.
pub fn mvd_inference_check(r: &Relation) -> Result<InferenceReport> {
    let n = r.schema().arity();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::SchemaTooLarge {
            arity: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let all = r.all();
    let size = 1usize << n;
    let mut fd = vec![false; size * size];
    let mut mvd = vec![false; size * size];
    for x in all.subsets() {
        for y in all.subsets() {
            let k = x.bits() as usize * size + y.bits() as usize;
            fd[k] = fd_holds(r, x, y)?;
            mvd[k] = mvd_holds(r, x, y)?;
        }
    }
    let at = |x: AttrSet, y: AttrSet| x.bits() as usize * size + y.bits() as usize;
    let idx = |s: AttrSet| s.indices().collect::<Vec<_>>();
    let mut report = InferenceReport {
        arity: n,
        ..Default::default()
    };
    let violation = |rule, x: AttrSet, y: AttrSet, z: Option<AttrSet>, u: Option<AttrSet>| InferenceViolation {
        rule,
        x: idx(x),
        y: idx(y),
        z: z.map(idx),
        u: u.map(idx),
    };
    for x in all.subsets() {
        for y in all.subsets() {
            if fd[at(x, y)] {
                report.fd_to_mvd += 1;
                if !mvd[at(x, y)] {
                    report
                        .violations
                        .push(violation(InferenceRule::FdToMvd, x, y, None, None));
                }
            }
            if !mvd[at(x, y)] {
                continue;
            }
            report.complementation += 1;
            if !mvd[at(x, all.minus(y))] {
                report
                    .violations
                    .push(violation(InferenceRule::Complementation, x, y, None, None));
            }
            for u in all.subsets() {
                for z in u.subsets() {
                    report.augmentation += 1;
                    if !mvd[at(x.union(u), y.union(z))] {
                        report
                            .violations
                            .push(violation(InferenceRule::Augmentation, x, y, Some(z), Some(u)));
                    }
                }
            }
            for z in all.subsets() {
                if mvd[at(y, z)] {
                    report.transitivity += 1;
                    if !mvd[at(x, z.minus(y))] {
                        report
                            .violations
                            .push(violation(InferenceRule::Transitivity, x, y, Some(z), None));
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedRow {
    pub x_values: Vec<Code>,
    pub y_values: BTreeSet<Vec<Code>>,
    pub z_values: BTreeSet<Vec<Code>>,
    /// The group is exactly `{x} × Y-values × Z-values`.
    pub is_product: bool,
}

/// Tuples grouped by their `X` part, with set-valued `Y` and `Z` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedRelation {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub rows: Vec<NestedRow>,
}

impl NestedRelation {
    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.is_product)
    }

    /// Expands each row into its Cartesian product. For product rows this is
    /// exactly the group that produced them.
    pub fn unnest(&self, arity: usize, rows: impl Fn(&NestedRow) -> bool) -> BTreeSet<Item> {
        let mut out = BTreeSet::new();
        for row in self.rows.iter().filter(|r| rows(r)) {
            for yv in &row.y_values {
                for zv in &row.z_values {
                    let mut codes = vec![0; arity];
                    for (k, &i) in self.x.iter().enumerate() {
                        codes[i] = row.x_values[k];
                    }
                    for (k, &i) in self.y.iter().enumerate() {
                        codes[i] = yv[k];
                    }
                    for (k, &i) in self.z.iter().enumerate() {
                        codes[i] = zv[k];
                    }
                    out.insert(Item::new(codes));
                }
            }
        }
        out
    }
}

/// Groups `r` by `X`; `Y` is taken without `X`, and `Z` is what remains.
pub fn nest_rewrite(r: &Relation, x: AttrSet, y: AttrSet) -> Result<NestedRelation> {
    r.check(&[x, y])?;
    let y = y.minus(x);
    let z = r.all().minus(x.union(y));
    let mut groups: Vec<(Vec<Code>, Vec<&Item>)> = Vec::new();
    let mut slot: HashMap<Vec<Code>, usize> = HashMap::new();
    for t in r.tuples() {
        let key = project(t, x);
        let i = *slot.entry(key.clone()).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[i].1.push(t);
    }
    let rows = groups
        .into_iter()
        .map(|(x_values, members)| {
            let y_values: BTreeSet<Vec<Code>> = members.iter().map(|t| project(t, y)).collect();
            let z_values: BTreeSet<Vec<Code>> = members.iter().map(|t| project(t, z)).collect();
            let is_product = members.len() == y_values.len() * z_values.len();
            NestedRow {
                x_values,
                y_values,
                z_values,
                is_product,
            }
        })
        .collect();
    Ok(NestedRelation {
        x: x.indices().collect(),
        y: y.indices().collect(),
        z: z.indices().collect(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    /// `t1 : t2 :: t3 : t4`
    pub direct: bool,
    /// `t1 : t4 :: t3 : t2`
    pub reordered: bool,
    /// `(t1, t2, t3)` matches the weak-MVD premise for `(X, Y)`.
    pub weak_layout: bool,
    /// Solution of `t1 : t2 :: t3 : x`, when the layout matches.
    pub solution: Option<Item>,
    pub solution_is_t4: Option<bool>,
}

pub fn mvd_ap_correspondence(
    t1: &Item,
    t2: &Item,
    t3: &Item,
    t4: &Item,
    x: AttrSet,
    y: AttrSet,
) -> Result<Correspondence> {
    let direct = crate::ap::ap_holds_vec(t1, t2, t3, t4)?;
    let reordered = holds_vec(t1, t4, t3, t2);
    let all = AttrSet::full(t1.len());
    let xy = x.union(y);
    let xrest = x.union(all.minus(y));
    let weak_layout = project(t1, xy) == project(t2, xy) && project(t1, xrest) == project(t3, xrest);
    let solution = if weak_layout { solve_vec(t1, t2, t3)? } else { None };
    let solution_is_t4 = solution.as_ref().map(|s| s == t4);
    Ok(Correspondence {
        direct,
        reordered,
        weak_layout,
        solution,
        solution_is_t4,
    })
}

/// The two tuples obtained by exchanging the `on` part of `t1` and `t2`:
/// `t3` takes `on` from `t1` and the rest from `t2`, `t4` the reverse.
/// Returns `None` unless both are distinct from `t1` and `t2`, which needs
/// the tuples to differ both inside and outside `on`.
pub fn intermediary_tuples(t1: &Item, t2: &Item, on: AttrSet) -> Option<(Item, Item)> {
    let t3 = splice(t1, t2, on);
    let t4 = splice(t2, t1, on);
    let distinct = [&t3, &t4].iter().all(|t| *t != t1 && *t != t2);
    distinct.then_some((t3, t4))
}
