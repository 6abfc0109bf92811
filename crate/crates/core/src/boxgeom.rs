//! Bodies that are finite unions of closed axis-aligned boxes, and their
//! exact projection volumes.
//!
//! A box may be degenerate (a single point) on some axes; such a box lives
//! in a proper coordinate subspace and contributes nothing to the volume of
//! any projection that keeps a degenerate axis.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::CoverInequality;
use crate::error::{Error, Result};
use crate::precise::{self, Real};
use crate::rational::{self, format_rational, parse_rational, Rational};
use crate::subset::{check_dimension, SubsetMask};
use crate::vector::ProjectionVector;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxisBox {
    intervals: Vec<(Rational, Rational)>,
}

impl AxisBox {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        check_dimension(intervals.len())?;
        for (axis, (a, b)) in intervals.iter().enumerate() {
            if a > b {
                return Err(Error::InvalidBox(format!(
                    "axis {} has lower end {} above upper end {}",
                    axis + 1,
                    a,
                    b
                )));
            }
        }
        Ok(AxisBox { intervals })
    }

    /// `∏ [lower_i, lower_i + side_i]` for `i ∈ support`, and the point
    /// `lower_i` on every other axis.
    pub fn in_span(
        n: usize,
        support: SubsetMask,
        corner: &[Rational],
        sides: &[Rational],
    ) -> Result<Self> {
        assert_eq!(corner.len(), n);
        assert_eq!(sides.len(), n);
        let intervals = (0..n)
            .map(|i| {
                let lo = corner[i].clone();
                let hi = if support.contains(i + 1) {
                    &lo + &sides[i]
                } else {
                    lo.clone()
                };
                (lo, hi)
            })
            .collect();
        AxisBox::new(intervals)
    }

    /// `[0, 1]^n`.
    pub fn unit_cube(n: usize) -> Result<Self> {
        AxisBox::new(vec![(Rational::zero(), Rational::one()); n])
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    /// Extent along a 0-based axis.
    pub fn side(&self, axis: usize) -> Rational {
        let (a, b) = &self.intervals[axis];
        b - a
    }

    /// Volume of the projection onto `Span(A)`.
    pub fn projection_volume(&self, subset: SubsetMask) -> Rational {
        subset
            .elements()
            .map(|e| self.side(e - 1))
            .fold(Rational::one(), |acc, s| acc * s)
    }

    pub fn translated(&self, shift: &Rational) -> AxisBox {
        AxisBox {
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| (a + shift, b + shift))
                .collect(),
        }
    }

    fn lowest(&self) -> &Rational {
        self.intervals.iter().map(|(a, _)| a).min().expect("n >= 1")
    }

    fn highest(&self) -> &Rational {
        self.intervals.iter().map(|(_, b)| b).max().expect("n >= 1")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoxUnionBody {
    n: usize,
    boxes: Vec<AxisBox>,
}

impl BoxUnionBody {
    pub fn new(boxes: Vec<AxisBox>) -> Result<Self> {
        let Some(first) = boxes.first() else {
            return Err(Error::InvalidBox("a body needs at least one box".into()));
        };
        let n = first.n();
        if let Some(other) = boxes.iter().find(|b| b.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.n(),
            });
        }
        Ok(BoxUnionBody { n, boxes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn into_boxes(self) -> Vec<AxisBox> {
        self.boxes
    }
}

/// Exact `|A|`-dimensional measure of `∪_j proj_A(box_j)`.
///
/// The endpoints of the boxes along each axis of `A` induce a grid; the
/// measure is accumulated slab by slab along one axis at a time, recursing
/// into the boxes that span each slab.
pub fn projection_volume(body: &BoxUnionBody, subset: SubsetMask) -> Rational {
    assert!(!subset.is_empty(), "projection onto the empty set");
    assert!(
        subset.fits(body.n),
        "subset {subset:?} outside [{}]",
        body.n
    );
    let axes: Vec<usize> = subset.elements().map(|e| e - 1).collect();
    let solid: Vec<&AxisBox> = body
        .boxes
        .iter()
        .filter(|b| axes.iter().all(|&a| b.side(a).is_positive()))
        .collect();
    union_measure(&solid, &axes)
}

fn union_measure(boxes: &[&AxisBox], axes: &[usize]) -> Rational {
    let Some((&axis, rest)) = axes.split_first() else {
        return if boxes.is_empty() {
            Rational::zero()
        } else {
            Rational::one()
        };
    };
    match boxes {
        [] => return Rational::zero(),
        [single] => {
            return axes
                .iter()
                .map(|&a| single.side(a))
                .fold(Rational::one(), |acc, s| acc * s)
        }
        _ => {}
    }
    let mut cuts: Vec<&Rational> = boxes
        .iter()
        .flat_map(|b| {
            let (lo, hi) = &b.intervals[axis];
            [lo, hi]
        })
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut total = Rational::zero();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let active: Vec<&AxisBox> = boxes
            .iter()
            .copied()
            .filter(|b| {
                let (a, c) = &b.intervals[axis];
                a <= lo && hi <= c
            })
            .collect();
        if !active.is_empty() {
            total += (hi - lo) * union_measure(&active, rest);
        }
    }
    total
}

/// Exact projection volumes for every nonempty subset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectionVolumes {
    n: usize,
    volumes: Vec<Rational>,
}

impl ProjectionVolumes {
    pub fn of(body: &BoxUnionBody) -> Self {
        let volumes = (1..(1u32 << body.n))
            .map(|bits| projection_volume(body, SubsetMask::from_bits(bits)))
            .collect();
        ProjectionVolumes { n: body.n, volumes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, subset: SubsetMask) -> &Rational {
        &self.volumes[subset.index()]
    }

    pub fn all_positive(&self) -> bool {
        self.volumes.iter().all(Signed::is_positive)
    }

    /// `∏_i |T_{Y_i}| ≥ |T_Y|^k`, the exponentiated form of a cover inequality.
    pub fn satisfies(&self, ineq: &CoverInequality) -> bool {
        let cover = ineq.cover();
        let lhs = cover
            .parts()
            .iter()
            .fold(Rational::one(), |acc, &p| acc * self.get(p));
        let rhs = rational::pow(self.get(cover.ground()), cover.k().into());
        lhs >= rhs
    }
}

/// Exact projection volumes together with their logarithms at working
/// precision. Subsets whose projection has measure zero carry no logarithm.
#[derive(Clone, Debug)]
pub struct LogProjection {
    volumes: ProjectionVolumes,
    logs: Vec<Option<Real>>,
}

impl LogProjection {
    pub fn n(&self) -> usize {
        self.volumes.n
    }

    pub fn volumes(&self) -> &ProjectionVolumes {
        &self.volumes
    }

    pub fn volume(&self, subset: SubsetMask) -> &Rational {
        self.volumes.get(subset)
    }

    pub fn log(&self, subset: SubsetMask) -> Option<&Real> {
        self.logs[subset.index()].as_ref()
    }

    /// False when some projection has zero measure, so the log vector is
    /// undefined as it stands.
    pub fn is_positive(&self) -> bool {
        self.logs.iter().all(Option::is_some)
    }

    /// Subsets with zero projection volume.
    pub fn zero_subsets(&self) -> Vec<SubsetMask> {
        let mut out: Vec<SubsetMask> = (1..=self.logs.len() as u32)
            .map(SubsetMask::from_bits)
            .filter(|m| self.logs[m.index()].is_none())
            .collect();
        out.sort();
        out
    }

    /// Logarithms rounded to `digits` significant decimal digits, as an exact
    /// vector; `None` if any projection is zero.
    pub fn to_vector(&self, digits: usize) -> Option<ProjectionVector> {
        if !self.is_positive() {
            return None;
        }
        ProjectionVector::from_fn(self.n(), |m| {
            precise::to_decimal_rational(self.log(m).expect("positive"), digits)
        })
        .ok()
    }
}

pub fn log_projection_vector(body: &BoxUnionBody) -> LogProjection {
    let volumes = ProjectionVolumes::of(body);
    let logs = volumes
        .volumes
        .iter()
        .map(|v| v.is_positive().then(|| precise::ln_rational(v)))
        .collect();
    LogProjection { volumes, logs }
}

/// Adds a cube of side `epsilon` beyond every existing box on every axis, so
/// its projections are disjoint from the rest and all projections become
/// positive.
pub fn thicken(body: &BoxUnionBody, epsilon: &Rational) -> Result<BoxUnionBody> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let corner = body
        .boxes
        .iter()
        .map(AxisBox::highest)
        .max()
        .expect("nonempty")
        + Rational::one();
    let cube = AxisBox::new(vec![(corner.clone(), &corner + epsilon); body.n])?;
    let mut boxes = body.boxes.clone();
    boxes.push(cube);
    BoxUnionBody::new(boxes)
}

/// Places the boxes along the diagonal so that, on every axis, each box's
/// interval lies strictly beyond all earlier ones. Projections of distinct
/// boxes onto any coordinate subspace are then disjoint, so
/// `|T_A| = Σ_j |proj_A(box_j)|`.
pub fn disjoint_offset(boxes: Vec<AxisBox>) -> Result<BoxUnionBody> {
    let mut placed: Vec<AxisBox> = Vec::with_capacity(boxes.len());
    let mut frontier: Option<Rational> = None;
    for b in boxes {
        let moved = match &frontier {
            None => b,
            Some(f) => {
                let shift = f + Rational::one() - b.lowest();
                b.translated(&shift)
            }
        };
        let top = moved.highest().clone();
        frontier = Some(match frontier {
            Some(f) if f > top => f,
            _ => top,
        });
        placed.push(moved);
    }
    BoxUnionBody::new(placed)
}

/// True when no two boxes share a point on any axis.
pub fn pairwise_axis_disjoint(body: &BoxUnionBody) -> bool {
    let boxes = &body.boxes;
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            for axis in 0..body.n {
                let (a0, a1) = &boxes[i].intervals[axis];
                let (b0, b1) = &boxes[j].intervals[axis];
                if a0 <= b1 && b0 <= a1 {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct BoxEntry {
    intervals: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct BodyFile {
    n: usize,
    boxes: Vec<BoxEntry>,
}

/// Parses a body file:
/// `{"n":2,"boxes":[{"intervals":[["0","1"],["0","1"]]}]}`.
pub fn read_body(text: &str) -> Result<BoxUnionBody> {
    let file: BodyFile = serde_json::from_str(text)?;
    check_dimension(file.n)?;
    let mut boxes = Vec::with_capacity(file.boxes.len());
    for entry in &file.boxes {
        if entry.intervals.len() != file.n {
            return Err(Error::DimensionMismatch {
                expected: file.n,
                found: entry.intervals.len(),
            });
        }
        let intervals = entry
            .intervals
            .iter()
            .map(|[a, b]| Ok((parse_rational(a)?, parse_rational(b)?)))
            .collect::<Result<Vec<_>>>()?;
        boxes.push(AxisBox::new(intervals)?);
    }
    BoxUnionBody::new(boxes)
}

pub fn write_body(body: &BoxUnionBody) -> String {
    let file = BodyFile {
        n: body.n,
        boxes: body
            .boxes
            .iter()
            .map(|b| BoxEntry {
                intervals: b
                    .intervals
                    .iter()
                    .map(|(lo, hi)| [format_rational(lo), format_rational(hi)])
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("body serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(elements: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(elements.iter().copied())
    }

    fn bx(intervals: &[(Rational, Rational)]) -> AxisBox {
        AxisBox::new(intervals.to_vec()).unwrap()
    }

    fn two_box_body() -> BoxUnionBody {
        BoxUnionBody::new(vec![
            bx(&[(int(0), int(1)), (int(0), int(1))]),
            bx(&[(int(0), int(2)), (int(0), ratio(1, 2))]),
        ])
        .unwrap()
    }

    #[test]
    fn unit_cube_projections_are_one() {
        for n in 1..=4 {
            let body = BoxUnionBody::new(vec![AxisBox::unit_cube(n).unwrap()]).unwrap();
            for a in SubsetMask::full(n).nonempty_subsets() {
                assert_eq!(projection_volume(&body, a), int(1));
            }
        }
    }

    #[test]
    fn overlapping_pair() {
        let body = two_box_body();
        assert_eq!(projection_volume(&body, m(&[1, 2])), ratio(3, 2));
        assert_eq!(projection_volume(&body, m(&[1])), int(2));
        assert_eq!(projection_volume(&body, m(&[2])), int(1));
    }

    #[test]
    fn degenerate_segment() {
        let body = BoxUnionBody::new(vec![bx(&[(int(0), int(5)), (int(0), int(0))])]).unwrap();
        assert_eq!(projection_volume(&body, m(&[1, 2])), int(0));
        assert_eq!(projection_volume(&body, m(&[1])), int(5));
        assert_eq!(projection_volume(&body, m(&[2])), int(0));
        let logs = log_projection_vector(&body);
        assert!(!logs.is_positive());
        assert_eq!(logs.zero_subsets(), vec![m(&[2]), m(&[1, 2])]);
        assert!(logs.to_vector(30).is_none());
    }

    #[test]
    fn two_box_log_vector() {
        let logs = log_projection_vector(&two_box_body());
        assert!(logs.is_positive());
        let ln2 = std::f64::consts::LN_2;
        assert!((precise::to_f64(logs.log(m(&[1])).unwrap()) - ln2).abs() < 1e-15);
        assert_eq!(precise::to_f64(logs.log(m(&[2])).unwrap()), 0.0);
        assert!((precise::to_f64(logs.log(m(&[1, 2])).unwrap()) - 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn axis_scaling_shifts_logs_by_log_s() {
        let s = int(3);
        let body = BoxUnionBody::new(vec![bx(&[
            (int(0), s.clone()),
            (int(0), int(1)),
            (int(0), int(1)),
        ])])
        .unwrap();
        let logs = log_projection_vector(&body);
        for a in SubsetMask::full(3).nonempty_subsets() {
            let got = precise::to_f64(logs.log(a).unwrap());
            let want = if a.contains(1) { 3f64.ln() } else { 0.0 };
            assert!((got - want).abs() < 1e-15, "{a:?}");
        }
    }

    #[test]
    fn thickening_makes_everything_positive() {
        let segment = BoxUnionBody::new(vec![bx(&[
            (int(0), int(5)),
            (int(0), int(0)),
            (int(2), int(2)),
        ])])
        .unwrap();
        let eps = ratio(1, 1024);
        let thick = thicken(&segment, &eps).unwrap();
        let before = ProjectionVolumes::of(&segment);
        let after = ProjectionVolumes::of(&thick);
        assert!(after.all_positive());
        for a in SubsetMask::full(3).nonempty_subsets() {
            assert_eq!(
                *after.get(a),
                before.get(a) + rational::pow(&eps, a.len() as u64)
            );
        }
        assert!(thicken(&segment, &int(0)).is_err());
    }

    #[test]
    fn disjoint_offset_adds_volumes() {
        let squares = vec![
            AxisBox::unit_cube(2).unwrap(),
            AxisBox::unit_cube(2).unwrap(),
        ];
        let body = disjoint_offset(squares).unwrap();
        assert!(pairwise_axis_disjoint(&body));
        assert_eq!(projection_volume(&body, m(&[1])), int(2));
        assert_eq!(projection_volume(&body, m(&[1, 2])), int(2));

        let single = bx(&[(int(3), int(4)), (int(-1), int(7))]);
        let body = disjoint_offset(vec![single.clone()]).unwrap();
        assert_eq!(body.boxes(), &[single]);
    }

    #[test]
    fn body_file_round_trip() {
        let text = r#"{"n":2,"boxes":[{"intervals":[["0","1"],["0","1"]]},{"intervals":[["0","2"],["0","1/2"]]}]}"#;
        let body = read_body(text).unwrap();
        assert_eq!(body, two_box_body());
        assert_eq!(write_body(&body), text);
    }

    #[test]
    fn body_file_errors() {
        for text in [
            r#"{"n":2,"boxes":[]}"#,
            r#"{"n":2,"boxes":[{"intervals":[["0","1"]]}]}"#,
            r#"{"n":1,"boxes":[{"intervals":[["1","0"]]}]}"#,
            r#"{"n":1,"boxes":[{"intervals":[["0","0.5"]]}]}"#,
            r#"{"n":0,"boxes":[]}"#,
        ] {
            assert!(read_body(text).is_err(), "accepted {text}");
        }
    }
}
