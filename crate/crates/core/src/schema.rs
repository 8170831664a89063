//! Nominal attributes, their finite domains, and the tuples built over them.
//!
//! Symbols are interned per attribute: a [`Domain`] keeps its symbols sorted
//! lexicographically and every value is stored as the index of its symbol
//! ([`Code`]). All iteration and tie-breaking downstream follows that order.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol inside its attribute domain.
pub type Code = u16;

/// A finite, sorted set of symbols with at least two members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    symbols: Vec<String>,
}

impl Domain {
    /// Builds a domain from arbitrary symbols; duplicates are merged and the
    /// result is sorted.
    pub fn new<I, S>(name: &str, symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        symbols.sort();
        symbols.dedup();
        if symbols.len() < 2 {
            return Err(Error::DomainTooSmall(name.to_string()));
        }
        if symbols.len() > Code::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "domain of `{name}` has {} symbols",
                symbols.len()
            )));
        }
        Ok(Self { symbols })
    }

    /// The Boolean domain `{0, 1}`; code 0 is `"0"`, code 1 is `"1"`.
    pub fn boolean() -> Self {
        Self {
            symbols: vec!["0".to_string(), "1".to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_boolean(&self) -> bool {
        self.symbols.len() == 2
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn code(&self, symbol: &str) -> Option<Code> {
        self.symbols
            .binary_search_by(|s| s.as_str().cmp(symbol))
            .ok()
            .map(|i| i as Code)
    }

    pub fn symbol(&self, code: Code) -> Option<&str> {
        self.symbols.get(code as usize).map(String::as_str)
    }

    pub fn value(&self, symbol: &str) -> Option<Value<'_>> {
        self.code(symbol).map(|code| Value { domain: self, code })
    }

    pub fn values(&self) -> impl Iterator<Item = Value<'_>> {
        (0..self.symbols.len()).map(move |i| Value {
            domain: self,
            code: i as Code,
        })
    }
}

/// A symbol tied to the domain it was drawn from.
#[derive(Clone, Copy, Debug)]
pub struct Value<'d> {
    domain: &'d Domain,
    code: Code,
}

impl<'d> Value<'d> {
    pub fn new(domain: &'d Domain, code: Code) -> Option<Self> {
        ((code as usize) < domain.len()).then_some(Self { domain, code })
    }

    pub fn code(&self) -> Code {
        self.code
    }

    pub fn domain(&self) -> &'d Domain {
        self.domain
    }

    pub fn symbol(&self) -> &'d str {
        &self.domain.symbols[self.code as usize]
    }

    pub(crate) fn same_domain(&self, other: &Value<'_>) -> bool {
        std::ptr::eq(self.domain, other.domain) || self.domain == other.domain
    }
}

impl PartialEq for Value<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.same_domain(other)
    }
}

impl Eq for Value<'_> {}

impl fmt::Display for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub name: String,
    pub domain: Domain,
}

impl Attribute {
    pub fn new(name: impl Into<String>, domain: Domain) -> Self {
        Self {
            name: name.into(),
            domain,
        }
    }
}

/// Ordered list of uniquely named attributes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schema {
    attributes: Vec<Attribute>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        let mut seen = HashSet::new();
        for attribute in &attributes {
            if !seen.insert(attribute.name.as_str()) {
                return Err(Error::DuplicateAttribute(attribute.name.clone()));
            }
        }
        Ok(Self { attributes })
    }

    /// `n` Boolean attributes named `x1..xn`.
    pub fn boolean(n: usize) -> Self {
        Self {
            attributes: (1..=n)
                .map(|i| Attribute::new(format!("x{i}"), Domain::boolean()))
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }

    pub fn is_boolean(&self) -> bool {
        self.attributes.iter().all(|a| a.domain.is_boolean())
    }

    /// Product of the domain sizes, saturating at `u128::MAX`.
    pub fn space_size(&self) -> u128 {
        self.attributes
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.domain.len() as u128))
    }

    pub fn item<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Item> {
        if symbols.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: symbols.len(),
            });
        }
        symbols
            .iter()
            .zip(&self.attributes)
            .map(|(s, a)| {
                a.domain.code(s.as_ref()).ok_or_else(|| Error::UnknownSymbol {
                    attribute: a.name.clone(),
                    symbol: s.as_ref().to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Item)
    }

    pub fn validate(&self, item: &Item) -> Result<()> {
        if item.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: item.len(),
            });
        }
        for (&code, attribute) in item.codes().iter().zip(&self.attributes) {
            if code as usize >= attribute.domain.len() {
                return Err(Error::CodeOutOfRange {
                    attribute: attribute.name.clone(),
                    code: code as usize,
                });
            }
        }
        Ok(())
    }

    pub fn symbols<'s>(&'s self, item: &Item) -> Vec<&'s str> {
        item.codes()
            .iter()
            .zip(&self.attributes)
            .map(|(&c, a)| a.domain.symbol(c).unwrap_or("?"))
            .collect()
    }

    pub fn value(&self, item: &Item, index: usize) -> Value<'_> {
        Value {
            domain: &self.attributes[index].domain,
            code: item.codes()[index],
        }
    }
}

/// A fixed-arity tuple of attribute codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Item(Vec<Code>);

impl Item {
    pub fn new(codes: Vec<Code>) -> Self {
        Self(codes)
    }

    pub fn codes(&self) -> &[Code] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Code {
        self.0[index]
    }

    /// Number of attributes on which the two items differ.
    pub fn hamming(&self, other: &Item) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl From<Vec<Code>> for Item {
    fn from(codes: Vec<Code>) -> Self {
        Self(codes)
    }
}
