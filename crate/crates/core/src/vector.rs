//! Vectors indexed by the nonempty subsets of `[n]`, and the vector file format.
//!
//! A vector file is a JSON object
//!
//! ```json
//! {"n":2,"entries":{"1":"1","2":"1","1,2":"1"}}
//! ```
//!
//! Keys are comma-separated 1-based elements; values are exact rationals
//! written as `"p/q"` or integers. Keys that are absent read as zero.

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::StringPairs;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::subset::{check_dimension, SubsetMask};

/// A point `x` of `R^(2^n - 1)`, one exact coordinate `x_A` per nonempty `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectionVector {
    n: usize,
    entries: Vec<Rational>,
}

impl ProjectionVector {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(ProjectionVector {
            n,
            entries: vec![Rational::zero(); (1 << n) - 1],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(SubsetMask) -> Rational) -> Result<Self> {
        let mut v = ProjectionVector::zeros(n)?;
        for (i, slot) in v.entries.iter_mut().enumerate() {
            *slot = f(SubsetMask::from_bits(i as u32 + 1));
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of coordinates, `2^n - 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, subset: SubsetMask) -> &Rational {
        assert!(
            subset.fits(self.n),
            "subset {subset:?} outside [{}]",
            self.n
        );
        &self.entries[subset.index()]
    }

    pub fn set(&mut self, subset: SubsetMask, value: Rational) {
        assert!(
            subset.fits(self.n),
            "subset {subset:?} outside [{}]",
            self.n
        );
        self.entries[subset.index()] = value;
    }

    /// Coordinates in canonical subset order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, &Rational)> {
        let mut order: Vec<SubsetMask> = (1..=self.entries.len() as u32)
            .map(SubsetMask::from_bits)
            .collect();
        order.sort();
        order
            .into_iter()
            .map(move |m| (m, &self.entries[m.index()]))
    }

    pub fn scaled(&self, factor: &Rational) -> ProjectionVector {
        ProjectionVector {
            n: self.n,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    /// Adds `shift` to every coordinate.
    pub fn shifted(&self, shift: &Rational) -> ProjectionVector {
        ProjectionVector {
            n: self.n,
            entries: self.entries.iter().map(|x| x + shift).collect(),
        }
    }

    /// The same coordinates viewed in dimension `n >= self.n()`; subsets
    /// that mention a new element get `0`.
    pub fn embed(&self, n: usize) -> Result<ProjectionVector> {
        if n < self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        ProjectionVector::from_fn(n, |m| {
            if m.fits(self.n) {
                self.get(m).clone()
            } else {
                Rational::zero()
            }
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VectorFile {
    n: usize,
    #[serde(default)]
    entries: StringPairs,
}

/// Parses a vector file. Missing keys default to zero.
pub fn read_vector(text: &str) -> Result<ProjectionVector> {
    let file: VectorFile = serde_json::from_str(text)?;
    let mut v = ProjectionVector::zeros(file.n)?;
    let mut seen = HashSet::new();
    for (key, value) in &file.entries.0 {
        let subset = SubsetMask::parse_nonempty(key, file.n)?;
        if !seen.insert(subset) {
            return Err(Error::DuplicateKey(key.clone()));
        }
        v.set(subset, parse_rational(value)?);
    }
    Ok(v)
}

/// Serializes every coordinate, zeros included, in canonical subset order.
pub fn write_vector(v: &ProjectionVector) -> String {
    let file = VectorFile {
        n: v.n,
        entries: StringPairs(
            v.iter()
                .map(|(m, x)| (m.to_string(), format_rational(x)))
                .collect(),
        ),
    };
    serde_json::to_string(&file).expect("vector serialization cannot fail")
}
