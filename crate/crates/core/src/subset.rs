//! Subsets of a small ground set `[n] = {1, .., n}` packed into machine words.
//!
//! Element `i` (1-based) is stored in bit `i - 1`. Masks compare in the
//! canonical order used throughout the crate: by cardinality first, then by
//! the raw bit pattern. Sorting any collection of masks therefore lists
//! smaller sets before larger ones, and two masks of the same size are
//! never nested.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground dimension.
pub const MAX_DIMENSION: usize = 16;

/// Validates `1 <= n <= MAX_DIMENSION`.
pub fn check_dimension(n: usize) -> Result<usize> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(n)
    } else {
        Err(Error::DimensionOutOfRange(n, 1, MAX_DIMENSION))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    /// `{1, .., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_DIMENSION);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    /// `{i}` for a 1-based element `i`.
    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_DIMENSION).contains(&i));
        SubsetMask(1 << (i - 1))
    }

    /// Builds a mask from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, i| acc | SubsetMask::singleton(i))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, element: usize) -> bool {
        element >= 1 && element <= 32 && self.0 & (1 << (element - 1)) != 0
    }

    pub const fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when every element is at most `n`.
    pub fn fits(self, n: usize) -> bool {
        (self.0 as u64) < (1u64 << n)
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    /// All nonempty subsets of `self`, in canonical order.
    pub fn nonempty_subsets(self) -> Vec<SubsetMask> {
        let mut out = Vec::with_capacity((1usize << self.len()) - 1);
        let mut sub = self.0;
        while sub != 0 {
            out.push(SubsetMask(sub));
            sub = (sub - 1) & self.0;
        }
        out.sort();
        out
    }

    /// Dense index used by vectors over the nonempty subsets of `[n]`.
    pub(crate) fn index(self) -> usize {
        debug_assert!(!self.is_empty());
        self.0 as usize - 1
    }

    /// Re-labels a mask over `{1, .., |ground|}` onto the elements of `ground`:
    /// local element `j` becomes the `j`-th smallest element of `ground`.
    pub fn lift_into(self, ground: SubsetMask) -> SubsetMask {
        let targets: Vec<usize> = ground.elements().collect();
        SubsetMask::from_elements(self.elements().map(|j| targets[j - 1]))
    }

    /// Parses `"1,2,4"`; the empty string is the empty set. Elements must be
    /// at most `n` and may not repeat.
    pub fn parse(text: &str, n: usize) -> Result<SubsetMask> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(SubsetMask::EMPTY);
        }
        let mut mask = SubsetMask::EMPTY;
        for piece in trimmed.split(',') {
            let element: usize = piece
                .trim()
                .parse()
                .map_err(|_| Error::MalformedSubset(text.to_string()))?;
            if element == 0 {
                return Err(Error::MalformedSubset(text.to_string()));
            }
            if element > n {
                return Err(Error::ElementOutOfRange {
                    key: text.to_string(),
                    element,
                    n,
                });
            }
            let single = SubsetMask::singleton(element);
            if !(mask & single).is_empty() {
                return Err(Error::MalformedSubset(text.to_string()));
            }
            mask = mask | single;
        }
        Ok(mask)
    }

    /// Like [`SubsetMask::parse`] but rejects the empty set.
    pub fn parse_nonempty(text: &str, n: usize) -> Result<SubsetMask> {
        let mask = SubsetMask::parse(text, n)?;
        if mask.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(mask)
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: Self) -> Self {
        SubsetMask(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: Self) -> Self {
        SubsetMask(self.0 & rhs.0)
    }
}

/// Comma-separated ascending elements, the key syntax of every file format.
impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.elements() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// All `2^n - 1` nonempty subsets of `[n]`, ordered by size and then by bits.
///
/// Equal-size sets are incomparable and a later set is never contained in
/// an earlier one, which is the ordering precondition of the box
/// construction in [`crate::realize`].
pub fn canonical_subset_order(n: usize) -> Result<Vec<SubsetMask>> {
    check_dimension(n)?;
    Ok(SubsetMask::full(n).nonempty_subsets())
}
