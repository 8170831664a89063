use crate::error::{Error, Result};
use crate::schema::{Attribute, Code, Item, Schema};

/// Labeled examples over a schema. Row order is preserved everywhere.
///
/// Duplicate items, even with conflicting labels, are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    schema: Schema,
    class: Attribute,
    items: Vec<Item>,
    labels: Vec<Code>,
}

impl Dataset {
    pub fn new(schema: Schema, class: Attribute, items: Vec<Item>, labels: Vec<Code>) -> Result<Self> {
        if items.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} items but {} labels",
                items.len(),
                labels.len()
            )));
        }
        for item in &items {
            schema.validate(item)?;
        }
        if let Some(&bad) = labels.iter().find(|&&l| l as usize >= class.domain.len()) {
            return Err(Error::CodeOutOfRange {
                attribute: class.name.clone(),
                code: bad as usize,
            });
        }
        if schema.names().any(|n| n == class.name) {
            return Err(Error::DuplicateAttribute(class.name.clone()));
        }
        Ok(Self {
            schema,
            class,
            items,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn class(&self) -> &Attribute {
        &self.class
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn labels(&self) -> &[Code] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, index: usize) -> &Item {
        &self.items[index]
    }

    pub fn label(&self, index: usize) -> Code {
        self.labels[index]
    }

    pub fn label_symbol(&self, code: Code) -> &str {
        self.class.domain.symbol(code).unwrap_or("?")
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Item, Code)> {
        self.items.iter().zip(self.labels.iter().copied())
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            class: self.class.clone(),
            items: indices.iter().map(|&i| self.items[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Count per class code, indexed by code.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class.domain.len()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }

    pub fn check_query(&self, query: &Item) -> Result<()> {
        self.schema.validate(query)
    }
}
