//! The cone of vectors satisfying every uniform cover inequality, as an
//! explicit finite list of generator inequalities.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::covers::{irreducible_covers, UniformCover};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subset::{check_dimension, SubsetMask};
use crate::vector::ProjectionVector;

/// Largest dimension for which the generator system is materialized.
pub const MAX_SYSTEM_DIMENSION: usize = 6;

/// `Σ_i x_{Y_i} ≥ k·x_Y` for a uniform cover `Y_1, .., Y_l` of `Y`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct CoverInequality {
    cover: UniformCover,
}

impl CoverInequality {
    pub fn new(cover: UniformCover) -> Self {
        CoverInequality { cover }
    }

    pub fn cover(&self) -> &UniformCover {
        &self.cover
    }

    /// Integer coefficients of `Σ x_{Y_i} - k·x_Y`, zero terms omitted.
    pub fn coefficients(&self) -> BTreeMap<SubsetMask, i64> {
        let mut coeffs = BTreeMap::new();
        for &p in self.cover.parts() {
            *coeffs.entry(p).or_insert(0) += 1;
        }
        *coeffs.entry(self.cover.ground()).or_insert(0) -= self.cover.k() as i64;
        coeffs.retain(|_, c| *c != 0);
        coeffs
    }

    /// `Σ x_{Y_i} - k·x_Y`; nonnegative exactly when the inequality holds.
    pub fn slack(&self, v: &ProjectionVector) -> Rational {
        let mut total = Rational::zero();
        for &p in self.cover.parts() {
            total += v.get(p);
        }
        total - v.get(self.cover.ground()) * Rational::from_integer(self.cover.k().into())
    }
}

/// Renders the plain-text H-representation line, e.g.
/// `1*{1,2} + 1*{1,3} + 1*{2,3} >= 2*{1,2,3}`.
impl fmt::Display for CoverInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, c)) in self.cover.part_counts().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{{{p}}}")?;
        }
        write!(f, " >= {}*{{{}}}", self.cover.k(), self.cover.ground())
    }
}

#[derive(Clone, Debug)]
pub struct ConeSystem {
    n: usize,
    k_max: u32,
    generators: Vec<CoverInequality>,
}

impl ConeSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn generators(&self) -> &[CoverInequality] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators whose cover has the given ground set.
    pub fn generators_for(&self, ground: SubsetMask) -> impl Iterator<Item = &CoverInequality> {
        self.generators
            .iter()
            .filter(move |g| g.cover.ground() == ground)
    }

    fn check_vector(&self, v: &ProjectionVector) -> Result<()> {
        if v.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.n(),
            });
        }
        Ok(())
    }

    /// True when every generator holds with strict inequality.
    pub fn is_strictly_inside(&self, v: &ProjectionVector) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.generators.iter().all(|g| g.slack(v).is_positive()))
    }

    /// One line per generator.
    pub fn to_hrep(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// Collects the nontrivial irreducible covers of every nonempty `Y ⊆ [n]`.
///
/// Covers are enumerated once per ground size on `{1, .., s}` and relabeled
/// onto each `Y` of that size.
pub fn build_bt_system(n: usize, k_max: u32) -> Result<ConeSystem> {
    check_dimension(n)?;
    if n > MAX_SYSTEM_DIMENSION {
        return Err(Error::DimensionOutOfRange(n, 1, MAX_SYSTEM_DIMENSION));
    }
    let mut by_size: Vec<Vec<UniformCover>> = vec![Vec::new()];
    for s in 1..=n {
        by_size.push(
            irreducible_covers(SubsetMask::full(s), k_max)?
                .into_iter()
                .filter(|c| !c.is_trivial())
                .collect(),
        );
    }
    let mut generators = Vec::new();
    for ground in SubsetMask::full(n).nonempty_subsets() {
        for local in &by_size[ground.len()] {
            generators.push(CoverInequality::new(local.lift_into(ground)));
        }
    }
    Ok(ConeSystem {
        n,
        k_max,
        generators,
    })
}

/// [`build_bt_system`] with the default `k_max = n`.
pub fn default_system(n: usize) -> Result<ConeSystem> {
    build_bt_system(n, n as u32)
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub inside: bool,
    pub violated: Vec<CoverInequality>,
    pub tight: Vec<CoverInequality>,
}

/// Evaluates every generator exactly on `v`.
pub fn membership(sys: &ConeSystem, v: &ProjectionVector) -> Result<MembershipReport> {
    sys.check_vector(v)?;
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    for g in &sys.generators {
        let slack = g.slack(v);
        if slack.is_negative() {
            violated.push(g.clone());
        } else if slack.is_zero() {
            tight.push(g.clone());
        }
    }
    Ok(MembershipReport {
        inside: violated.is_empty(),
        violated,
        tight,
    })
}
