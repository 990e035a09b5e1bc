use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block is empty")]
    Empty,
    #[error("block repeats variety {0}")]
    Duplicate(u32),
    #[error("block is not strictly ascending at variety {0}")]
    Unsorted(u32),
}

/// A nonempty set of variety ids stored strictly ascending.
///
/// Ordering is lexicographic on the id sequence, which is the canonical
/// block order used by design files.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<u32>);

impl Block {
    /// Accepts an already sorted id list.
    pub fn new(ids: Vec<u32>) -> Result<Self, BlockError> {
        if ids.is_empty() {
            return Err(BlockError::Empty);
        }
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(BlockError::Duplicate(w[1]));
            }
            if w[0] > w[1] {
                return Err(BlockError::Unsorted(w[1]));
            }
        }
        Ok(Self(ids))
    }

    /// Sorts `ids` first; duplicates are still an error.
    pub fn from_unsorted(mut ids: Vec<u32>) -> Result<Self, BlockError> {
        ids.sort_unstable();
        Self::new(ids)
    }

    pub(crate) fn from_sorted_unchecked(ids: Vec<u32>) -> Self {
        debug_assert!(Self::new(ids.clone()).is_ok());
        Self(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max_id(&self) -> u32 {
        *self.0.last().expect("blocks are nonempty")
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl AsRef<[u32]> for Block {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for id in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{id}")?;
            first = false;
        }
        Ok(())
    }
}
