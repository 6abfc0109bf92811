//! The four-dimensional cone point that no family of bodies approaches
//! along a scaled sequence, and the discrete product inequality for traces
//! of set families.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boxgeom::{log_projection_vector, thicken, AxisBox, BoxUnionBody};
use crate::cone::{membership, ConeSystem, CoverInequality};
use crate::error::{Error, Result};
use crate::precise;
use crate::rational::{format_rational, int, ratio, Rational};
use crate::subset::{check_dimension, SubsetMask};
use crate::vector::{write_vector, ProjectionVector};

fn m(elements: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(elements.iter().copied())
}

/// `v_13 = v_24 = 2`, `v_123 = v_234 = v_1 = .. = v_4 = 1`, every other
/// coordinate `0`, in dimension `n >= 4`.
pub fn witness_vector(n: usize) -> Result<ProjectionVector> {
    check_dimension(n)?;
    if n < 4 {
        return Err(Error::DimensionOutOfRange(
            n,
            4,
            crate::subset::MAX_DIMENSION,
        ));
    }
    let mut v = ProjectionVector::zeros(n)?;
    for pair in [m(&[1, 3]), m(&[2, 4])] {
        v.set(pair, int(2));
    }
    for one in [
        m(&[1, 2, 3]),
        m(&[2, 3, 4]),
        m(&[1]),
        m(&[2]),
        m(&[3]),
        m(&[4]),
    ] {
        v.set(one, int(1));
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub vector: ProjectionVector,
    pub in_cone: bool,
    pub tight: Vec<CoverInequality>,
    /// `v_123 - v_12`.
    pub obstruction_lhs: Rational,
    /// `v_234 - v_24`.
    pub obstruction_rhs: Rational,
    pub obstruction_holds: bool,
}

impl WitnessReport {
    /// Tight generators with multiplicity `k` on grounds of `size` elements.
    pub fn tight_with(&self, size: usize, k: u32) -> Vec<&CoverInequality> {
        self.tight
            .iter()
            .filter(|g| g.cover().ground().len() == size && g.cover().k() == k)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            vector: serde_json::Value,
            in_cone: bool,
            tight: Vec<String>,
            obstruction_lhs: String,
            obstruction_rhs: String,
            obstruction_holds: bool,
        }
        let out = Out {
            vector: serde_json::from_str(&write_vector(&self.vector)).expect("vector JSON"),
            in_cone: self.in_cone,
            tight: self.tight.iter().map(ToString::to_string).collect(),
            obstruction_lhs: format_rational(&self.obstruction_lhs),
            obstruction_rhs: format_rational(&self.obstruction_rhs),
            obstruction_holds: self.obstruction_holds,
        };
        serde_json::to_value(out).expect("report JSON")
    }
}

/// Membership, tight generators, and the equation
/// `v_123 - v_12 = v_234 - v_24` that every limit of scaled bodies satisfies
/// at a point where both triangle covers are tight. Coordinates beyond the
/// vector's dimension read as `0`.
pub fn analyze_witness(sys: &ConeSystem, v: &ProjectionVector) -> Result<WitnessReport> {
    let report = membership(sys, v)?;
    let get = |s: SubsetMask| {
        if s.fits(v.n()) {
            v.get(s).clone()
        } else {
            Rational::default()
        }
    };
    let obstruction_lhs = get(m(&[1, 2, 3])) - get(m(&[1, 2]));
    let obstruction_rhs = get(m(&[2, 3, 4])) - get(m(&[2, 4]));
    Ok(WitnessReport {
        vector: v.clone(),
        in_cone: report.inside,
        tight: report.tight,
        obstruction_holds: obstruction_lhs == obstruction_rhs,
        obstruction_lhs,
        obstruction_rhs,
    })
}

/// A duplicate-free family of subsets of `[n]`; the empty set may belong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    /// Repeated members are merged.
    pub fn new(n: usize, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        check_dimension(n)?;
        let members: BTreeSet<SubsetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| !s.fits(n)) {
            return Err(Error::ElementOutOfRange {
                key: bad.to_string(),
                element: bad.elements().last().unwrap_or(0),
                n,
            });
        }
        Ok(SetFamily {
            n,
            members: members.into_iter().collect(),
        })
    }

    pub fn power_set(n: usize) -> Result<Self> {
        check_dimension(n)?;
        SetFamily::new(n, (0..(1u32 << n)).map(SubsetMask::from_bits))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `{F ∩ A : F ∈ family}`.
    pub fn trace(&self, a: SubsetMask) -> BTreeSet<SubsetMask> {
        self.members.iter().map(|&f| f & a).collect()
    }
}

#[derive(Deserialize)]
struct FamilyFile {
    n: usize,
    members: Vec<String>,
}

/// Reads `{"n":4,"members":["","1","2,4"]}`; `""` is the empty set.
pub fn read_family(text: &str) -> Result<SetFamily> {
    let file: FamilyFile = serde_json::from_str(text)?;
    check_dimension(file.n)?;
    let members = file
        .members
        .iter()
        .map(|s| SubsetMask::parse(s, file.n))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(file.n, members)
}

#[derive(Deserialize)]
struct SetsFile {
    n: usize,
    sets: Vec<String>,
}

/// Reads `{"n":4,"sets":["1,2","2,3","3,4","1,4"]}`; repeated sets count
/// separately.
pub fn read_cover_sets(text: &str) -> Result<(usize, Vec<SubsetMask>)> {
    let file: SetsFile = serde_json::from_str(text)?;
    check_dimension(file.n)?;
    let sets = file
        .sets
        .iter()
        .map(|s| SubsetMask::parse(s, file.n))
        .collect::<Result<Vec<_>>>()?;
    Ok((file.n, sets))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearerReport {
    pub lhs_product: BigUint,
    pub rhs_power: BigUint,
    pub holds: bool,
    /// `|F_i|` per cover set, in input order.
    pub traces: Vec<usize>,
}

impl ShearerReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lhs_product": self.lhs_product.to_string(),
            "rhs_power": self.rhs_power.to_string(),
            "holds": self.holds,
            "traces": self.traces,
        })
    }
}

/// Evaluates `∏ |F_i| >= |F|^k` where `F_i` is the trace of the family on
/// the `i`-th set, after checking that every element of `[n]` lies in at
/// least `k` of the sets.
pub fn shearer_check(family: &SetFamily, sets: &[SubsetMask], k: u32) -> Result<ShearerReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if let Some(bad) = sets.iter().find(|s| !s.fits(family.n)) {
        return Err(Error::ElementOutOfRange {
            key: bad.to_string(),
            element: bad.elements().last().unwrap_or(0),
            n: family.n,
        });
    }
    for element in 1..=family.n {
        let count = sets.iter().filter(|s| s.contains(element)).count();
        if count < k as usize {
            return Err(Error::CoverageViolated { element, count, k });
        }
    }
    let traces: Vec<usize> = sets.iter().map(|&a| family.trace(a).len()).collect();
    let lhs_product = traces
        .iter()
        .fold(BigUint::one(), |acc, &t| acc * BigUint::from(t));
    let rhs_power = BigUint::from(family.len()).pow(k);
    Ok(ShearerReport {
        holds: lhs_product >= rhs_power,
        lhs_product,
        rhs_power,
        traces,
    })
}

/// How close sampled box-union bodies come to a vector.
#[derive(Clone, Debug, Serialize)]
pub struct SampleDistance {
    pub samples: usize,
    /// Smallest max-norm distance between `v` and a sampled log vector.
    pub nearest: f64,
    pub nearest_vector: Option<Vec<(String, f64)>>,
}

/// Samples `samples` random bodies (up to four boxes, endpoints on a grid of
/// step `1/4` in `[0, 8]`, thickened by `1/64` so every projection is
/// positive) and reports the nearest log projection vector to `v`.
pub fn nearest_sample_distance(
    v: &ProjectionVector,
    samples: usize,
    seed: u64,
) -> Result<SampleDistance> {
    let n = v.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target: Vec<(SubsetMask, f64)> = v
        .iter()
        .map(|(s, x)| (s, precise::to_f64(&precise::from_rational(x))))
        .collect();
    let mut nearest = f64::INFINITY;
    let mut nearest_vector = None;
    for _ in 0..samples {
        let body = random_body(&mut rng, n)?;
        let logs = log_projection_vector(&body);
        let mut dist = 0.0f64;
        let mut point = Vec::with_capacity(target.len());
        for &(s, t) in &target {
            let x = precise::to_f64(logs.log(s).expect("thickened bodies are positive"));
            dist = dist.max((x - t).abs());
            point.push((s.to_string(), x));
        }
        if dist < nearest {
            nearest = dist;
            nearest_vector = Some(point);
        }
    }
    Ok(SampleDistance {
        samples,
        nearest,
        nearest_vector,
    })
}

fn random_body(rng: &mut ChaCha8Rng, n: usize) -> Result<BoxUnionBody> {
    let count = rng.gen_range(1..=4);
    let mut boxes = Vec::with_capacity(count);
    for _ in 0..count {
        let intervals = (0..n)
            .map(|_| {
                let a = rng.gen_range(0..=32i64);
                let b = rng.gen_range(0..=32i64);
                (ratio(a.min(b), 4), ratio(a.max(b), 4))
            })
            .collect();
        boxes.push(AxisBox::new(intervals)?);
    }
    thicken(&BoxUnionBody::new(boxes)?, &ratio(1, 64))
}
