//! Deciding whether a linear inequality in the projection coordinates holds
//! on the whole cone. Either it is a nonnegative combination of generators
//! (and the weights are returned), or a cone vector violates it, from which a
//! box-union body violating the multiplicative form is built.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::boxgeom::{log_projection_vector, thicken, BoxUnionBody, ProjectionVolumes};
use crate::cone::{membership, ConeSystem, CoverInequality};
use crate::error::{Error, Result};
use crate::format::StringPairs;
use crate::precise::{self, Real};
use crate::rational::{format_rational, int, parse_rational, pow, Rational};
use crate::realize::find_lambda;
use crate::simplex::{LinearProgram, LpOutcome, Relation};
use crate::subset::{check_dimension, SubsetMask};
use crate::vector::ProjectionVector;

/// Default largest scale tried when building a violating body.
pub const DEFAULT_VIOLATION_LAMBDA_CAP: i64 = 4096;

/// `Σ α_A x_A ≥ Σ β_B x_B` with nonnegative rational coefficients. Subsets
/// appearing on both sides are cancelled down to their net coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearInequality {
    n: usize,
    lhs: BTreeMap<SubsetMask, Rational>,
    rhs: BTreeMap<SubsetMask, Rational>,
}

impl LinearInequality {
    pub fn new(
        n: usize,
        lhs: impl IntoIterator<Item = (SubsetMask, Rational)>,
        rhs: impl IntoIterator<Item = (SubsetMask, Rational)>,
    ) -> Result<Self> {
        check_dimension(n)?;
        let mut net: BTreeMap<SubsetMask, Rational> = BTreeMap::new();
        for (side, terms) in [
            (1, lhs.into_iter().collect::<Vec<_>>()),
            (-1, rhs.into_iter().collect()),
        ] {
            for (subset, coeff) in terms {
                if subset.is_empty() {
                    return Err(Error::EmptySubset);
                }
                if !subset.fits(n) {
                    return Err(Error::ElementOutOfRange {
                        key: subset.to_string(),
                        element: subset.elements().last().unwrap_or(0),
                        n,
                    });
                }
                if coeff.is_negative() {
                    return Err(Error::NegativeCoefficient(format!(
                        "{} on {{{subset}}}",
                        format_rational(&coeff)
                    )));
                }
                *net.entry(subset).or_insert_with(Rational::zero) += coeff * int(side);
            }
        }
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (subset, c) in net {
            if c.is_positive() {
                lhs.insert(subset, c);
            } else if c.is_negative() {
                rhs.insert(subset, -c);
            }
        }
        Ok(LinearInequality { n, lhs, rhs })
    }

    /// The inequality of a uniform cover, in dimension `n`.
    pub fn from_cover(n: usize, ineq: &CoverInequality) -> Result<Self> {
        let cover = ineq.cover();
        LinearInequality::new(
            n,
            cover.parts().iter().map(|&p| (p, Rational::one())),
            [(cover.ground(), int(cover.k().into()))],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lhs(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.lhs
    }

    pub fn rhs(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.rhs
    }

    /// `t = α - β` as a dense vector; the inequality reads `t·x ≥ 0`.
    pub fn target(&self) -> ProjectionVector {
        ProjectionVector::from_fn(self.n, |m| {
            self.lhs.get(&m).cloned().unwrap_or_default()
                - self.rhs.get(&m).cloned().unwrap_or_default()
        })
        .expect("dimension validated at construction")
    }

    /// `Σ α_A v_A - Σ β_B v_B`.
    pub fn slack(&self, v: &ProjectionVector) -> Rational {
        let lhs: Rational = self.lhs.iter().map(|(&m, c)| c * v.get(m)).sum();
        let rhs: Rational = self.rhs.iter().map(|(&m, c)| c * v.get(m)).sum();
        lhs - rhs
    }
}

#[derive(Serialize, Deserialize)]
struct InequalityFile {
    n: usize,
    #[serde(default)]
    lhs: StringPairs,
    #[serde(default)]
    rhs: StringPairs,
}

fn read_side(pairs: &StringPairs, n: usize) -> Result<Vec<(SubsetMask, Rational)>> {
    let mut seen = HashSet::new();
    let mut terms = Vec::with_capacity(pairs.0.len());
    for (key, value) in &pairs.0 {
        let subset = SubsetMask::parse_nonempty(key, n)?;
        if !seen.insert(subset) {
            return Err(Error::DuplicateKey(key.clone()));
        }
        terms.push((subset, parse_rational(value)?));
    }
    Ok(terms)
}

pub fn read_inequality(text: &str) -> Result<LinearInequality> {
    let file: InequalityFile = serde_json::from_str(text)?;
    check_dimension(file.n)?;
    let lhs = read_side(&file.lhs, file.n)?;
    let rhs = read_side(&file.rhs, file.n)?;
    LinearInequality::new(file.n, lhs, rhs)
}

pub fn write_inequality(ineq: &LinearInequality) -> String {
    let side = |terms: &BTreeMap<SubsetMask, Rational>| {
        StringPairs(
            terms
                .iter()
                .map(|(m, c)| (m.to_string(), format_rational(c)))
                .collect(),
        )
    };
    let file = InequalityFile {
        n: ineq.n,
        lhs: side(&ineq.lhs),
        rhs: side(&ineq.rhs),
    };
    serde_json::to_string(&file).expect("inequality serialization cannot fail")
}

/// Positive weights on generators (by index into the system) whose sum
/// reproduces the target of the inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub weights: Vec<(usize, Rational)>,
}

impl FarkasCertificate {
    /// Checks `Σ λ_g (Σ_i e_{Y_i} - k e_Y) = α - β` exactly.
    pub fn verify(&self, sys: &ConeSystem, ineq: &LinearInequality) -> bool {
        if sys.n() != ineq.n() {
            return false;
        }
        let mut sum = ProjectionVector::zeros(sys.n()).expect("system dimension is valid");
        for (g, weight) in &self.weights {
            let Some(gen) = sys.generators().get(*g) else {
                return false;
            };
            if !weight.is_positive() {
                return false;
            }
            for (m, c) in gen.coefficients() {
                let updated = sum.get(m) + weight * int(c);
                sum.set(m, updated);
            }
        }
        sum == ineq.target()
    }

    pub fn entries(&self, sys: &ConeSystem) -> Vec<CertificateEntry> {
        self.weights
            .iter()
            .map(|(g, w)| {
                let cover = sys.generators()[*g].cover();
                CertificateEntry {
                    ground: cover.ground().to_string(),
                    parts: cover.parts().iter().map(|p| p.to_string()).collect(),
                    k: cover.k(),
                    weight: format_rational(w),
                }
            })
            .collect()
    }
}

/// One weighted generator, in the CLI output format.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    pub ground: String,
    pub parts: Vec<String>,
    pub k: u32,
    pub weight: String,
}

#[derive(Clone, Debug)]
pub enum Implication {
    Certificate(FarkasCertificate),
    /// A cone vector with `α·x - β·x = -1`.
    Witness(ProjectionVector),
}

/// Solves `Σ_g λ_g g = α - β`, `λ ≥ 0` exactly. Infeasibility yields a dual
/// vector `y` with `y·g ≤ 0` for every generator and `y·t > 0`; its negation,
/// scaled, lies in the cone and violates the inequality.
pub fn check_implication(sys: &ConeSystem, ineq: &LinearInequality) -> Result<Implication> {
    if sys.n() != ineq.n() {
        return Err(Error::DimensionMismatch {
            expected: sys.n(),
            found: ineq.n(),
        });
    }
    let target = ineq.target();
    let ngen = sys.len();
    let columns: Vec<BTreeMap<SubsetMask, i64>> = sys
        .generators()
        .iter()
        .map(CoverInequality::coefficients)
        .collect();
    let mut lp = LinearProgram::new(ngen);
    for (a, t) in target.iter() {
        let terms: Vec<(usize, Rational)> = columns
            .iter()
            .enumerate()
            .filter_map(|(g, col)| col.get(&a).map(|&c| (g, int(c))))
            .collect();
        lp.add_sparse_row(&terms, Relation::Eq, t.clone());
    }
    // Least total weight, for a small certificate.
    lp.maximize(vec![-Rational::one(); ngen]);
    match lp.solve()? {
        LpOutcome::Optimal { x, .. } => {
            let weights = x
                .into_iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive())
                .collect();
            let cert = FarkasCertificate { weights };
            if !cert.verify(sys, ineq) {
                return Err(Error::VerificationFailed {
                    subset: SubsetMask::full(sys.n()),
                    detail: "certificate does not reproduce the inequality".into(),
                });
            }
            Ok(Implication::Certificate(cert))
        }
        LpOutcome::Infeasible { certificate } => {
            let y_dot_t: Rational = target
                .iter()
                .zip(&certificate)
                .map(|((_, t), y)| t * y)
                .sum();
            let scale = -y_dot_t.recip();
            let mut witness = ProjectionVector::zeros(sys.n())?;
            for ((a, _), y) in target.iter().zip(&certificate) {
                witness.set(a, y * &scale);
            }
            let report = membership(sys, &witness)?;
            if !report.inside || ineq.slack(&witness) != -Rational::one() {
                return Err(Error::VerificationFailed {
                    subset: SubsetMask::full(sys.n()),
                    detail: "dual vector is not a violating cone point".into(),
                });
            }
            Ok(Implication::Witness(witness))
        }
        LpOutcome::Unbounded => unreachable!("objective is bounded above by zero"),
    }
}

#[derive(Clone, Debug)]
pub struct ViolatingBody {
    pub body: BoxUnionBody,
    pub lambda: Rational,
    /// The interior vector that was realized.
    pub vector: ProjectionVector,
    /// `Σ α_A log|T_A|`.
    pub lhs_log: Real,
    /// `Σ β_B log|T_B|`.
    pub rhs_log: Real,
}

impl ViolatingBody {
    /// `Σ β log|T| - Σ α log|T|`, positive for a violation.
    pub fn margin(&self) -> f64 {
        precise::to_f64(&(&self.rhs_log - &self.lhs_log))
    }
}

fn lcm_of_denominators(ineq: &LinearInequality) -> BigInt {
    ineq.lhs
        .values()
        .chain(ineq.rhs.values())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn exact_product(
    volumes: &ProjectionVolumes,
    terms: &BTreeMap<SubsetMask, Rational>,
    d: &BigInt,
) -> Result<Rational> {
    let mut product = Rational::one();
    for (&m, c) in terms {
        let exponent = (c * Rational::from_integer(d.clone())).to_integer();
        let exponent = exponent
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument(format!("exponent {exponent} too large")))?;
        product *= pow(volumes.get(m), exponent);
    }
    Ok(product)
}

/// Realizes a violating cone vector as a body with
/// `∏ |T_A|^{α_A} < ∏ |T_B|^{β_B}`, checked exactly after raising both
/// sides to the common denominator of the coefficients.
pub fn violating_body(
    sys: &ConeSystem,
    ineq: &LinearInequality,
    witness: &ProjectionVector,
    lambda_cap: &Rational,
) -> Result<ViolatingBody> {
    let gap = -ineq.slack(witness);
    if !gap.is_positive() {
        return Err(Error::InvalidArgument(
            "witness does not violate the inequality".into(),
        ));
    }
    let target = ineq.target();
    let total: Rational = target.iter().map(|(_, t)| t.clone()).sum();
    // keeps at least half the violation after the shift
    let epsilon = &gap / (int(2) * (total.abs() + int(1)));
    let result = find_lambda(sys, witness, &epsilon, lambda_cap)?;
    debug_assert!((-ineq.slack(&result.vector)) * int(2) >= gap);

    let logs = log_projection_vector(&result.body);
    let mut finest = 0.0f64;
    for a in SubsetMask::full(sys.n()).nonempty_subsets() {
        let log = logs
            .log(a)
            .expect("realized bodies are positive on every subset");
        let bound = (precise::to_f64(log) / std::f64::consts::LN_2 - 40.0) / a.len() as f64;
        finest = finest.min(bound);
    }
    let thickness = pow(&Rational::new(1.into(), 2.into()), (-finest.floor()) as u64);
    let body = thicken(&result.body, &thickness)?;

    let volumes = ProjectionVolumes::of(&body);
    let d = lcm_of_denominators(ineq);
    let lhs = exact_product(&volumes, &ineq.lhs, &d)?;
    let rhs = exact_product(&volumes, &ineq.rhs, &d)?;
    if lhs >= rhs {
        return Err(Error::VerificationFailed {
            subset: SubsetMask::full(sys.n()),
            detail: "constructed body satisfies the inequality".into(),
        });
    }
    let logs = log_projection_vector(&body);
    let weighted = |terms: &BTreeMap<SubsetMask, Rational>| {
        terms
            .iter()
            .fold(precise::real_from_int(0), |acc, (&m, c)| {
                acc + precise::from_rational(c) * logs.log(m).expect("thickened body is positive")
            })
    };
    Ok(ViolatingBody {
        lhs_log: weighted(&ineq.lhs),
        rhs_log: weighted(&ineq.rhs),
        body,
        lambda: result.lambda,
        vector: result.vector,
    })
}
