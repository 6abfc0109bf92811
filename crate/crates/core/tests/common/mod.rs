//! Independent oracles and samplers shared by the integration suites.
#![allow(dead_code)]

use cover_cone::{
    membership, AxisBox, BoxUnionBody, ConeSystem, ProjectionVector, Rational, SubsetMask,
};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn m(elements: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(elements.iter().copied())
}

/// A rational in `[0, hi]` with denominator at most 4.
pub fn random_endpoint(rng: &mut ChaCha8Rng, hi: i64) -> Rational {
    let denom = rng.gen_range(1..=4);
    q(rng.gen_range(0..=hi * denom), denom)
}

pub fn random_box(rng: &mut ChaCha8Rng, n: usize, hi: i64) -> AxisBox {
    let intervals = (0..n)
        .map(|_| {
            let a = random_endpoint(rng, hi);
            let b = random_endpoint(rng, hi);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    AxisBox::new(intervals).unwrap()
}

pub fn random_body(rng: &mut ChaCha8Rng, n: usize, max_boxes: usize, hi: i64) -> BoxUnionBody {
    let count = rng.gen_range(1..=max_boxes);
    BoxUnionBody::new((0..count).map(|_| random_box(rng, n, hi)).collect()).unwrap()
}

/// Union volume of the projections onto `a` by inclusion–exclusion over all
/// nonempty sub-collections of boxes.
pub fn inclusion_exclusion(boxes: &[AxisBox], a: SubsetMask) -> Rational {
    let axes: Vec<usize> = a.elements().map(|i| i - 1).collect();
    let mut total = q(0, 1);
    for pick in 1u32..(1 << boxes.len()) {
        let chosen: Vec<&AxisBox> = (0..boxes.len())
            .filter(|&j| pick >> j & 1 == 1)
            .map(|j| &boxes[j])
            .collect();
        let mut volume = q(1, 1);
        for &axis in &axes {
            let lo = chosen
                .iter()
                .map(|b| b.intervals()[axis].0.clone())
                .max()
                .unwrap();
            let hi = chosen
                .iter()
                .map(|b| b.intervals()[axis].1.clone())
                .min()
                .unwrap();
            if hi <= lo {
                volume = q(0, 1);
                break;
            }
            volume *= hi - lo;
        }
        if chosen.len() % 2 == 1 {
            total += volume;
        } else {
            total -= volume;
        }
    }
    total
}

/// A cover written as part bit patterns (sorted) and its multiplicity.
pub type RawCover = (Vec<u32>, u32);

/// Every `k`-uniform cover of `{1..s}` with `k <= k_max`, found by running
/// through all vectors of part multiplicities in `[0, k_max]`.
pub fn brute_force_covers(s: usize, k_max: u32) -> Vec<RawCover> {
    let types: Vec<u32> = (1..(1u32 << s)).collect();
    let mut counts = vec![0u32; types.len()];
    let mut out = Vec::new();
    loop {
        let coverage: Vec<u32> = (0..s)
            .map(|e| {
                types
                    .iter()
                    .zip(&counts)
                    .filter(|(t, _)| *t >> e & 1 == 1)
                    .map(|(_, c)| c)
                    .sum()
            })
            .collect();
        let k = coverage[0];
        if k >= 1 && k <= k_max && coverage.iter().all(|&c| c == k) {
            let mut parts = Vec::new();
            for (t, &c) in types.iter().zip(&counts) {
                parts.extend(std::iter::repeat(*t).take(c as usize));
            }
            parts.sort();
            out.push((parts, k));
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == counts.len() {
                return out;
            }
            if counts[i] < k_max {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// True when some nonempty proper sub-multiset of the parts is itself a
/// uniform cover of `{1..s}`; runs through every vector of sub-multiplicities.
pub fn brute_force_reducible(s: usize, cover: &RawCover) -> bool {
    let mut distinct: Vec<(u32, u32)> = Vec::new();
    for &p in &cover.0 {
        match distinct.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => distinct.push((p, 1)),
        }
    }
    let mut take = vec![0u32; distinct.len()];
    loop {
        let mut i = 0;
        loop {
            if i == take.len() {
                return false;
            }
            if take[i] < distinct[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
        if take.iter().zip(&distinct).all(|(t, (_, c))| t == c) {
            continue;
        }
        let coverage: Vec<u32> = (0..s)
            .map(|e| {
                distinct
                    .iter()
                    .zip(&take)
                    .map(|((p, _), t)| (p >> e & 1) * t)
                    .sum()
            })
            .collect();
        if coverage.iter().all(|&c| c == coverage[0]) {
            return true;
        }
    }
}

pub fn raw(cover: &cover_cone::UniformCover) -> RawCover {
    let mut parts: Vec<u32> = cover.parts().iter().map(|p| p.bits()).collect();
    parts.sort();
    (parts, cover.k())
}

/// Rejection-samples a vector of the cone with coordinates in `[-2, 3]`,
/// denominators dividing 4.
pub fn random_cone_vector(rng: &mut ChaCha8Rng, sys: &ConeSystem) -> ProjectionVector {
    loop {
        let v = ProjectionVector::from_fn(sys.n(), |_| q(rng.gen_range(-8..=12), 4)).unwrap();
        if membership(sys, &v).unwrap().inside {
            return v;
        }
    }
}
