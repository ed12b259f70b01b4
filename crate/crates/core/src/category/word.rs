use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Index of an object in a [`PresentedCategory`](super::PresentedCategory).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId(pub usize);

/// Index of a generating morphism in a [`PresentedCategory`](super::PresentedCategory).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub usize);

/// A composable string of generators.
///
/// Letters are stored in composition order: the word `f.g` is `f ∘ g`, so
/// `g` is applied first and `letters[0]` last. The empty word is the
/// identity of its source (which then equals its target).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismWord {
    source: ObjectId,
    target: ObjectId,
    letters: Vec<GenId>,
}

impl MorphismWord {
    pub fn identity(object: ObjectId) -> Self {
        MorphismWord {
            source: object,
            target: object,
            letters: Vec::new(),
        }
    }

    /// Builds a word without checking composability; callers in this crate
    /// only use it on letters they have already checked.
    pub(crate) fn from_parts(source: ObjectId, target: ObjectId, letters: Vec<GenId>) -> Self {
        debug_assert!(!letters.is_empty() || source == target);
        MorphismWord {
            source,
            target,
            letters,
        }
    }

    pub fn source(&self) -> ObjectId {
        self.source
    }

    pub fn target(&self) -> ObjectId {
        self.target
    }

    pub fn letters(&self) -> &[GenId] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &MorphismWord) -> Result<MorphismWord> {
        if other.target != self.source {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose: inner word ends at object {} but outer starts at {}",
                other.target.0, self.source.0
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(MorphismWord {
            source: other.source,
            target: self.target,
            letters,
        })
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &MorphismWord) -> Result<MorphismWord> {
        other.compose(self)
    }

    /// Shortlex comparison on letters, then endpoints.
    pub fn shortlex_cmp(&self, other: &MorphismWord) -> Ordering {
        shortlex(&self.letters, &other.letters)
            .then(self.source.cmp(&other.source))
            .then(self.target.cmp(&other.target))
    }
}

impl PartialOrd for MorphismWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MorphismWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

pub(crate) fn shortlex(a: &[GenId], b: &[GenId]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
