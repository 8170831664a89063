//! The analogical proportion `a : b :: c : d` and its algebra.
//!
//! On a single nominal attribute the proportion holds for exactly three
//! patterns: `(g,g,g,g)`, `(g,h,g,h)` and `(g,g,h,h)`. On a two-symbol domain
//! that leaves six of the sixteen valuations. Tuples are compared
//! component-wise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schema::{Code, Item, Schema, Value};

/// Pattern check on raw symbols, with no domain bookkeeping.
#[inline]
pub fn holds<T: PartialEq>(a: T, b: T, c: T, d: T) -> bool {
    (a == b && c == d) || (a == c && b == d)
}

/// Unique `x` with `a : b :: c : x`, if any.
#[inline]
pub fn solve_raw<T: PartialEq + Copy>(a: T, b: T, c: T) -> Option<T> {
    if a == b {
        Some(c)
    } else if a == c {
        Some(b)
    } else {
        None
    }
}

/// Boolean inverse paralogy: what `a` and `b` share, `c` and `d` do not, and
/// vice versa.
#[inline]
pub fn inverse_paralogy_raw(a: bool, b: bool, c: bool, d: bool) -> bool {
    ((a && b) == (!c && !d)) && ((!a && !b) == (c && d))
}

fn check_domains(values: &[Value<'_>]) -> Result<()> {
    let first = &values[0];
    if values[1..].iter().all(|v| v.same_domain(first)) {
        Ok(())
    } else {
        Err(Error::DomainMismatch)
    }
}

pub fn ap_holds(a: Value<'_>, b: Value<'_>, c: Value<'_>, d: Value<'_>) -> Result<bool> {
    check_domains(&[a, b, c, d])?;
    Ok(holds(a.code(), b.code(), c.code(), d.code()))
}

pub fn solve<'d>(a: Value<'d>, b: Value<'d>, c: Value<'d>) -> Result<Option<Value<'d>>> {
    check_domains(&[a, b, c])?;
    Ok(solve_raw(a, b, c))
}

pub fn inverse_paralogy(a: Value<'_>, b: Value<'_>, c: Value<'_>, d: Value<'_>) -> Result<bool> {
    check_domains(&[a, b, c, d])?;
    if !a.domain().is_boolean() {
        return Err(Error::NonBoolean);
    }
    // On a two-symbol domain the truth assignment is the code.
    let t = |v: Value<'_>| v.code() == 1;
    Ok(inverse_paralogy_raw(t(a), t(b), t(c), t(d)))
}

fn check_arity(items: &[&Item]) -> Result<usize> {
    let n = items[0].len();
    for item in &items[1..] {
        if item.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: item.len(),
            });
        }
    }
    Ok(n)
}

pub fn ap_holds_vec(a: &Item, b: &Item, c: &Item, d: &Item) -> Result<bool> {
    check_arity(&[a, b, c, d])?;
    Ok(holds_vec(a, b, c, d))
}

/// Unchecked component-wise test; callers guarantee equal arity.
#[inline]
pub(crate) fn holds_vec(a: &Item, b: &Item, c: &Item, d: &Item) -> bool {
    let (a, b, c, d) = (a.codes(), b.codes(), c.codes(), d.codes());
    (0..a.len()).all(|i| holds(a[i], b[i], c[i], d[i]))
}

/// Component-wise solution. Stops at the first unsolvable attribute.
pub fn solve_vec(a: &Item, b: &Item, c: &Item) -> Result<Option<Item>> {
    check_arity(&[a, b, c])?;
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        match solve_raw(a.get(i), b.get(i), c.get(i)) {
            Some(x) => out.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Item::new(out)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DiffEntry {
    Equal,
    Change { from: Code, to: Code },
}

/// Per-attribute record of how one item turns into another.
///
/// Two pairs `(a,b)` and `(c,d)` form an analogical proportion exactly when
/// their diff vectors are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DiffVector(Vec<DiffEntry>);

impl DiffVector {
    pub fn from_entries(entries: Vec<DiffEntry>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[DiffEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no attribute changes.
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|e| *e == DiffEntry::Equal)
    }

    pub fn change_count(&self) -> usize {
        self.0.iter().filter(|e| **e != DiffEntry::Equal).count()
    }

    /// Indices of the agreement set.
    pub fn agreement(&self) -> Vec<usize> {
        self.positions(|e| *e == DiffEntry::Equal)
    }

    /// Indices of the disagreement set.
    pub fn disagreement(&self) -> Vec<usize> {
        self.positions(|e| *e != DiffEntry::Equal)
    }

    fn positions(&self, keep: impl Fn(&DiffEntry) -> bool) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| keep(e))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn reversed(&self) -> DiffVector {
        DiffVector(
            self.0
                .iter()
                .map(|e| match *e {
                    DiffEntry::Equal => DiffEntry::Equal,
                    DiffEntry::Change { from, to } => DiffEntry::Change { from: to, to: from },
                })
                .collect(),
        )
    }

    /// `{-1, 0, 1}` reading for all-Boolean schemas: `Change(1,0)` is `+1`,
    /// `Change(0,1)` is `-1`. `None` if any attribute is not Boolean.
    pub fn boolean_projection(&self, schema: &Schema) -> Option<Vec<i8>> {
        if !schema.is_boolean() || schema.arity() != self.len() {
            return None;
        }
        Some(
            self.0
                .iter()
                .map(|e| match *e {
                    DiffEntry::Equal => 0,
                    DiffEntry::Change { from, to } => from as i8 - to as i8,
                })
                .collect(),
        )
    }
}

pub fn diff(a: &Item, b: &Item) -> Result<DiffVector> {
    check_arity(&[a, b])?;
    Ok(diff_unchecked(a, b))
}

#[inline]
pub(crate) fn diff_unchecked(a: &Item, b: &Item) -> DiffVector {
    DiffVector(
        a.codes()
            .iter()
            .zip(b.codes())
            .map(|(&x, &y)| {
                if x == y {
                    DiffEntry::Equal
                } else {
                    DiffEntry::Change { from: x, to: y }
                }
            })
            .collect(),
    )
}
