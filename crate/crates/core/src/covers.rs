//! `k`-uniform covers of a ground set and their decomposition.
//!
//! A `k`-uniform cover of `Y` is a multiset of nonempty subsets of `Y` in
//! which every element of `Y` lies in exactly `k` parts. It is irreducible
//! when its parts cannot be split into two uniform covers of `Y`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{SubsetMask, MAX_DIMENSION};

/// Upper bound on the number of covers a single enumeration may produce.
pub const DEFAULT_COVER_CAP: usize = 2_000_000;

/// Visited multisets allowed per enumerated cover cap in the irreducible
/// search; `5` elements with `k <= 5` visit about 3.4 million.
const NODES_PER_CAP: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniformCover {
    ground: SubsetMask,
    parts: Vec<SubsetMask>,
    k: u32,
}

impl UniformCover {
    /// Validates and canonicalizes (parts sorted by size, then bits).
    pub fn new(ground: SubsetMask, mut parts: Vec<SubsetMask>, k: u32) -> Result<Self> {
        if ground.is_empty() {
            return Err(Error::InvalidCover("ground set is empty".into()));
        }
        if k == 0 {
            return Err(Error::InvalidCover(
                "multiplicity k must be positive".into(),
            ));
        }
        for p in &parts {
            if p.is_empty() {
                return Err(Error::InvalidCover("empty part".into()));
            }
            if !p.is_subset_of(ground) {
                return Err(Error::InvalidCover(format!(
                    "part {{{p}}} is not inside ground {{{ground}}}"
                )));
            }
        }
        for e in ground.elements() {
            let count = parts.iter().filter(|p| p.contains(e)).count();
            if count != k as usize {
                return Err(Error::InvalidCover(format!(
                    "element {e} is covered {count} times, expected {k}"
                )));
            }
        }
        parts.sort();
        Ok(UniformCover { ground, parts, k })
    }

    fn from_sorted_unchecked(ground: SubsetMask, parts: Vec<SubsetMask>, k: u32) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]));
        UniformCover { ground, parts, k }
    }

    pub fn ground(&self) -> SubsetMask {
        self.ground
    }

    pub fn parts(&self) -> &[SubsetMask] {
        &self.parts
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The cover `{Y}` with `k = 1`, whose inequality reads `x_Y ≥ x_Y`.
    pub fn is_trivial(&self) -> bool {
        self.k == 1 && self.parts.len() == 1
    }

    /// Relabels a cover of `{1, .., s}` onto the elements of `ground`.
    pub fn lift_into(&self, ground: SubsetMask) -> UniformCover {
        assert_eq!(self.ground.len(), ground.len());
        let mut parts: Vec<SubsetMask> = self.parts.iter().map(|p| p.lift_into(ground)).collect();
        parts.sort();
        UniformCover::from_sorted_unchecked(ground, parts, self.k)
    }

    /// Renames `from[i]` to `to[i]` in every part.
    fn relabeled(&self, from: &[usize], to: &[usize]) -> UniformCover {
        let rename = |p: &SubsetMask| {
            SubsetMask::from_elements(
                from.iter()
                    .zip(to)
                    .filter(|(&a, _)| p.contains(a))
                    .map(|(_, &b)| b),
            )
        };
        let mut parts: Vec<SubsetMask> = self.parts.iter().map(rename).collect();
        parts.sort();
        UniformCover::from_sorted_unchecked(self.ground, parts, self.k)
    }

    /// Distinct parts with their multiplicities, in canonical order.
    pub fn part_counts(&self) -> Vec<(SubsetMask, u32)> {
        let mut out: Vec<(SubsetMask, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl Ord for UniformCover {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ground
            .cmp(&other.ground)
            .then(self.k.cmp(&other.k))
            .then(self.parts.len().cmp(&other.parts.len()))
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for UniformCover {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UniformCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-uniform cover of {{{}}}: [", self.k, self.ground)?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{{{p}}}")?;
        }
        f.write_str("]")
    }
}

/// All `k`-uniform covers of `ground` with `1 <= k <= k_max`.
pub fn enumerate_covers(ground: SubsetMask, k_max: u32) -> Result<Vec<UniformCover>> {
    enumerate_covers_capped(ground, k_max, DEFAULT_COVER_CAP)
}

pub fn enumerate_covers_capped(
    ground: SubsetMask,
    k_max: u32,
    cap: usize,
) -> Result<Vec<UniformCover>> {
    if ground.is_empty() {
        return Err(Error::InvalidCover("ground set is empty".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let types = ground.nonempty_subsets();
    let elements: Vec<usize> = ground.elements().collect();
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut search = CoverSearch {
            types: &types,
            elements: &elements,
            k,
            coverage: vec![0; MAX_DIMENSION + 1],
            chosen: Vec::new(),
            found: Vec::new(),
            cap: cap.saturating_sub(out.len()),
        };
        search.run(0)?;
        out.extend(
            search
                .found
                .into_iter()
                .map(|parts| UniformCover::from_sorted_unchecked(ground, parts, k)),
        );
    }
    out.sort();
    Ok(out)
}

struct CoverSearch<'a> {
    types: &'a [SubsetMask],
    elements: &'a [usize],
    k: u32,
    coverage: Vec<u32>,
    chosen: Vec<SubsetMask>,
    found: Vec<Vec<SubsetMask>>,
    cap: usize,
}

impl CoverSearch<'_> {
    fn run(&mut self, start: usize) -> Result<()> {
        if self.elements.iter().all(|&e| self.coverage[e] == self.k) {
            if self.found.len() >= self.cap {
                return Err(Error::EnumerationCap(self.cap));
            }
            self.found.push(self.chosen.clone());
            return Ok(());
        }
        for t in start..self.types.len() {
            let part = self.types[t];
            if part.elements().any(|e| self.coverage[e] >= self.k) {
                continue;
            }
            for e in part.elements() {
                self.coverage[e] += 1;
            }
            self.chosen.push(part);
            let result = self.run(t);
            self.chosen.pop();
            for e in part.elements() {
                self.coverage[e] -= 1;
            }
            result?;
        }
        Ok(())
    }
}

/// Splits `cover` into two uniform covers of the same ground whose parts
/// partition its parts, or returns `None` when it is irreducible.
pub fn decompose(cover: &UniformCover) -> Option<(UniformCover, UniformCover)> {
    let counts = cover.part_counts();
    let elements: Vec<usize> = cover.ground.elements().collect();
    // A k'-uniform sub-multiset leaves a (k - k')-uniform complement, so
    // searching k' <= k / 2 is enough.
    for sub_k in 1..=cover.k / 2 {
        let mut targets = [0; MAX_DIMENSION + 1];
        for &e in &elements {
            targets[e] = sub_k;
        }
        let mut search = SplitSearch::new(&counts, &elements, targets);
        if search.run(0) {
            let mut first = Vec::new();
            let mut second = Vec::new();
            for ((p, c), &t) in counts.iter().zip(&search.take) {
                first.extend(std::iter::repeat_n(*p, t as usize));
                second.extend(std::iter::repeat_n(*p, (c - t) as usize));
            }
            return Some((
                UniformCover::from_sorted_unchecked(cover.ground, first, sub_k),
                UniformCover::from_sorted_unchecked(cover.ground, second, cover.k - sub_k),
            ));
        }
    }
    None
}

/// Per-element counters, indexed by element.
type Counts = [u32; MAX_DIMENSION + 1];

/// Looks for a sub-multiset of `counts` covering each element exactly
/// `targets[e]` times.
struct SplitSearch<'a> {
    counts: &'a [(SubsetMask, u32)],
    elements: &'a [usize],
    targets: Counts,
    coverage: Counts,
    /// Coverage still obtainable from part types not yet decided.
    remaining: Counts,
    take: Vec<u32>,
}

impl<'a> SplitSearch<'a> {
    fn new(counts: &'a [(SubsetMask, u32)], elements: &'a [usize], targets: Counts) -> Self {
        let mut remaining = [0; MAX_DIMENSION + 1];
        for (p, c) in counts {
            for e in p.elements() {
                remaining[e] += c;
            }
        }
        SplitSearch {
            counts,
            elements,
            targets,
            coverage: [0; MAX_DIMENSION + 1],
            remaining,
            take: vec![0; counts.len()],
        }
    }

    fn run(&mut self, t: usize) -> bool {
        if t == self.counts.len() {
            return self
                .elements
                .iter()
                .all(|&e| self.coverage[e] == self.targets[e]);
        }
        let (part, available) = self.counts[t];
        for e in part.elements() {
            self.remaining[e] -= available;
        }
        let mut found = false;
        // Larger takes first: the split reported keeps earlier parts together.
        for take in (0..=available).rev() {
            let fits = part
                .elements()
                .all(|e| self.coverage[e] + take <= self.targets[e]);
            if !fits {
                continue;
            }
            for e in part.elements() {
                self.coverage[e] += take;
            }
            let reachable = self
                .elements
                .iter()
                .all(|&e| self.coverage[e] + self.remaining[e] >= self.targets[e]);
            if reachable {
                self.take[t] = take;
                found = self.run(t + 1);
            }
            for e in part.elements() {
                self.coverage[e] -= take;
            }
            if found {
                break;
            }
        }
        for e in part.elements() {
            self.remaining[e] += available;
        }
        found
    }
}

/// The irreducible covers among [`enumerate_covers`]`(ground, k_max)`.
///
/// A multiset of parts containing a proper uniform sub-multiset can only
/// extend to reducible covers, so the search abandons it; when the multiset
/// itself becomes uniform it is irreducible and is emitted. Only prefixes of
/// irreducible covers are ever visited.
pub fn irreducible_covers(ground: SubsetMask, k_max: u32) -> Result<Vec<UniformCover>> {
    irreducible_covers_capped(ground, k_max, DEFAULT_COVER_CAP)
}

pub fn irreducible_covers_capped(
    ground: SubsetMask,
    k_max: u32,
    cap: usize,
) -> Result<Vec<UniformCover>> {
    if ground.is_empty() {
        return Err(Error::InvalidCover("ground set is empty".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    // Larger parts first; this prunes far earlier than the canonical order.
    let mut types = ground.nonempty_subsets();
    types.reverse();
    let elements: Vec<usize> = ground.elements().collect();
    // Relabeling the ground moves some largest part of any cover onto the
    // top elements, so only those are tried as the first part and the
    // results are closed under relabeling afterwards.
    let leaders: Vec<SubsetMask> = (1..=elements.len())
        .map(|s| SubsetMask::from_elements(elements[elements.len() - s..].iter().copied()))
        .collect();
    let mut search = IrreducibleSearch {
        ground,
        types: &types,
        leaders: &leaders,
        elements: &elements,
        k_max,
        coverage: vec![0; MAX_DIMENSION + 1],
        counts: Vec::new(),
        found: Vec::new(),
        cap,
        nodes: 0,
    };
    search.run(0)?;
    let mut out = BTreeSet::new();
    for_each_permutation(&elements, |image| {
        for cover in &search.found {
            out.insert(cover.relabeled(&elements, image));
        }
    });
    if out.len() > cap {
        return Err(Error::EnumerationCap(cap));
    }
    Ok(out.into_iter().collect())
}

/// Calls `f` with every ordering of `items` (Heap's algorithm).
fn for_each_permutation(items: &[usize], mut f: impl FnMut(&[usize])) {
    let mut perm = items.to_vec();
    let mut c = vec![0; perm.len()];
    f(&perm);
    let mut i = 0;
    while i < perm.len() {
        if c[i] < i {
            perm.swap(if i % 2 == 0 { 0 } else { c[i] }, i);
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

struct IrreducibleSearch<'a> {
    ground: SubsetMask,
    types: &'a [SubsetMask],
    leaders: &'a [SubsetMask],
    elements: &'a [usize],
    k_max: u32,
    coverage: Vec<u32>,
    /// The chosen multiset, as (part, multiplicity) in canonical order.
    counts: Vec<(SubsetMask, u32)>,
    found: Vec<UniformCover>,
    cap: usize,
    nodes: usize,
}

impl IrreducibleSearch<'_> {
    /// Level `k` when every element is covered exactly `k` times.
    fn uniform_level(&self) -> Option<u32> {
        let k = self.coverage[self.elements[0]];
        self.elements
            .iter()
            .all(|&e| self.coverage[e] == k)
            .then_some(k)
    }

    /// True when the chosen multiset has a uniform sub-multiset containing
    /// the last chosen part, other than the whole multiset.
    fn has_new_uniform_part(&mut self, last: SubsetMask) -> bool {
        let whole = self.uniform_level();
        let slot = self.counts.len() - 1;
        self.counts[slot].1 -= 1;
        let max_level = self
            .elements
            .iter()
            .map(|&e| self.coverage[e])
            .min()
            .unwrap_or(0);
        let mut hit = false;
        for level in 1..=max_level {
            if Some(level) == whole {
                continue;
            }
            let mut targets = [0; MAX_DIMENSION + 1];
            for &e in self.elements {
                targets[e] = level - u32::from(last.contains(e));
            }
            if SplitSearch::new(&self.counts, self.elements, targets).run(0) {
                hit = true;
                break;
            }
        }
        self.counts[slot].1 += 1;
        hit
    }

    fn run(&mut self, start: usize) -> Result<()> {
        for t in start..self.types.len() {
            let part = self.types[t];
            if self.counts.is_empty() && !self.leaders.contains(&part) {
                continue;
            }
            if part.elements().any(|e| self.coverage[e] >= self.k_max) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap.saturating_mul(NODES_PER_CAP) {
                return Err(Error::SearchBudget(self.cap.saturating_mul(NODES_PER_CAP)));
            }
            for e in part.elements() {
                self.coverage[e] += 1;
            }
            match self.counts.last_mut() {
                Some((p, c)) if *p == part => *c += 1,
                _ => self.counts.push((part, 1)),
            }

            let mut result = Ok(());
            if !self.has_new_uniform_part(part) {
                if let Some(k) = self.uniform_level() {
                    if self.found.len() >= self.cap {
                        result = Err(Error::EnumerationCap(self.cap));
                    } else {
                        let mut parts: Vec<SubsetMask> = self
                            .counts
                            .iter()
                            .flat_map(|&(p, c)| std::iter::repeat_n(p, c as usize))
                            .collect();
                        parts.sort();
                        self.found
                            .push(UniformCover::from_sorted_unchecked(self.ground, parts, k));
                    }
                } else {
                    result = self.run(t);
                }
            }

            match self.counts.last_mut() {
                Some((_, c)) if *c > 1 => *c -= 1,
                _ => {
                    self.counts.pop();
                }
            }
            for e in part.elements() {
                self.coverage[e] -= 1;
            }
            result?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CoverFile {
    ground: String,
    k: u32,
    parts: Vec<String>,
}

impl Serialize for UniformCover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverFile {
            ground: self.ground.to_string(),
            k: self.k,
            parts: self.parts.iter().map(|p| p.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniformCover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = CoverFile::deserialize(d)?;
        let ground =
            SubsetMask::parse_nonempty(&file.ground, MAX_DIMENSION).map_err(D::Error::custom)?;
        let parts = file
            .parts
            .iter()
            .map(|p| SubsetMask::parse_nonempty(p, MAX_DIMENSION))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        UniformCover::new(ground, parts, file.k).map_err(D::Error::custom)
    }
}

/// Parses a cover file: `{"ground":"1,2,3","k":2,"parts":["1,2","1,3","2,3"]}`.
pub fn read_cover(text: &str) -> Result<UniformCover> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_cover(cover: &UniformCover) -> String {
    serde_json::to_string(cover).expect("cover serialization cannot fail")
}
