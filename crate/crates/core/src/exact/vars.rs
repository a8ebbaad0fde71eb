use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{ExactError, Result};

/// Index of a variable inside its [`VarTable`].
pub type VarId = usize;

#[derive(Debug)]
struct Inner {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

/// Ordered, immutable set of variable names. Cloning is cheap; two tables are
/// the same table iff they share storage or list identical names.
#[derive(Clone)]
pub struct VarTable(Arc<Inner>);

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut index = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if index.insert(n.clone(), i).is_some() {
                return Err(ExactError::DuplicateVariable(n));
            }
            owned.push(n);
        }
        Ok(VarTable(Arc::new(Inner { names: owned, index })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.0.names[id]
    }

    pub fn id(&self, name: &str) -> Result<VarId> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))
    }

    pub fn same(&self, other: &VarTable) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }

    pub(crate) fn check(&self, other: &VarTable) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(ExactError::VarTableMismatch)
        }
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.names.iter()).finish()
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for VarTable {}
