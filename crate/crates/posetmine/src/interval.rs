//! Interval lattices and chain-pair realizations.
//!
//! Usage-interval attributes live on the lattice generated by a finite set
//! of closed intervals: the closure under pairwise intersection and span,
//! ordered by containment, with a bottom adjoined when some pair is
//! disjoint. Quantitative attributes live on the reverse-containment
//! semilattice of intervals over the observed values. Both are realized
//! for mining as a pair of chains (left endpoint, right endpoint); this
//! module owns that embedding and the decoding of mined coordinates back
//! to concrete intervals.

use std::collections::HashSet;

use crate::errors::{MineError, Result};
use crate::poset::{FactorKind, FactorPoset, NodeId};

/// Exact scaled integer endpoint (e.g. minutes for time-of-day data).
pub type Endpoint = i64;

/// Closure of lattice construction is refused beyond this many nodes.
const LATTICE_NODE_CAP: usize = 4096;

/// A closed interval with `lo ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self> {
        if lo > hi {
            return Err(MineError::data(format!("interval [{lo},{hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(p: Endpoint) -> Self {
        Interval { lo: p, hi: p }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> i64 {
        self.hi - self.lo
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Minimum interval containing both.
    pub fn span(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Sorted distinct endpoints of a column of intervals.
pub fn endpoints(column: &[Interval]) -> Vec<Endpoint> {
    let mut ps: Vec<Endpoint> = column.iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// The consecutive intervals between adjacent distinct endpoints of a
/// column. A column whose endpoints collapse to a single point yields that
/// point as a single degenerate interval.
pub fn elementary_intervals(column: &[Interval]) -> Result<Vec<Interval>> {
    if column.is_empty() {
        return Err(MineError::data("column has no usable interval entries"));
    }
    let ps = endpoints(column);
    if ps.len() == 1 {
        return Ok(vec![Interval::point(ps[0])]);
    }
    Ok(ps.windows(2).map(|w| Interval { lo: w[0], hi: w[1] }).collect())
}

/// The containment lattice generated by a set of intervals: closure under
/// pairwise intersection and span, with a bottom ("no constraint met")
/// adjoined exactly when some pair of closure elements is disjoint.
#[derive(Clone, Debug)]
pub struct IntervalLattice {
    poset: FactorPoset,
    /// Interval per node id; `None` marks the adjoined bottom.
    intervals: Vec<Option<Interval>>,
}

impl IntervalLattice {
    pub fn poset(&self) -> &FactorPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval_of(&self, x: NodeId) -> Option<Interval> {
        self.intervals[x as usize]
    }

    pub fn node_of(&self, iv: Option<Interval>) -> Option<NodeId> {
        self.intervals.iter().position(|&i| i == iv).map(|i| i as NodeId)
    }

    /// Total Hasse edge count (handy for structural assertions).
    pub fn hasse_edge_count(&self) -> usize {
        (0..self.len()).map(|x| self.poset.immediate_predecessors(x as NodeId).len()).sum()
    }
}

/// Fixed-point closure of the generators under intersection and span,
/// ordered by containment.
pub fn build_lattice(generators: &[Interval]) -> Result<IntervalLattice> {
    if generators.is_empty() {
        return Err(MineError::data("interval lattice needs at least one generator"));
    }
    let mut seen: HashSet<Interval> = HashSet::new();
    let mut items: Vec<Interval> = Vec::new();
    let mut queue: Vec<Interval> = Vec::new();
    let mut disjoint_pair = false;
    for &g in generators {
        if seen.insert(g) {
            items.push(g);
            queue.push(g);
        }
    }
    // Worklist closure: every new element is paired against everything
    // accumulated so far.
    while let Some(x) = queue.pop() {
        for idx in 0..items.len() {
            let y = items[idx];
            match x.intersect(&y) {
                Some(m) => {
                    if seen.insert(m) {
                        items.push(m);
                        queue.push(m);
                    }
                }
                None => disjoint_pair = true,
            }
            let j = x.span(&y);
            if seen.insert(j) {
                items.push(j);
                queue.push(j);
            }
            if items.len() > LATTICE_NODE_CAP {
                return Err(MineError::resource(format!(
                    "interval lattice closure exceeds {LATTICE_NODE_CAP} nodes"
                )));
            }
        }
    }
    // Containment-compatible numbering: strictly contained intervals are
    // strictly shorter, so (length, lo) sorts predecessors first.
    items.sort_unstable_by_key(|iv| (iv.length(), iv.lo));
    let mut nodes: Vec<Option<Interval>> = Vec::with_capacity(items.len() + 1);
    if disjoint_pair {
        nodes.push(None);
    }
    nodes.extend(items.iter().copied().map(Some));

    let contains = |a: &Option<Interval>, b: &Option<Interval>| -> bool {
        // b ⪯ a in the lattice order (bottom below everything).
        match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.contains(b),
        }
    };
    let n = nodes.len();
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for x in 0..n {
        // Immediate predecessors = maximal elements strictly below x.
        // Scanning candidates from largest to smallest, a candidate is
        // immediate iff no already-chosen predecessor contains it.
        for y in (0..x).rev() {
            if !contains(&nodes[x], &nodes[y]) || nodes[x] == nodes[y] {
                continue;
            }
            if !preds[x].iter().any(|&p| contains(&nodes[p as usize], &nodes[y])) {
                preds[x].push(y as NodeId);
            }
        }
        preds[x].sort_unstable();
    }
    let labels = nodes
        .iter()
        .map(|iv| match iv {
            None => "empty".to_string(),
            Some(iv) if iv.is_point() => format!("{}", iv.lo),
            Some(iv) => format!("[{},{}]", iv.lo, iv.hi),
        })
        .collect();
    let poset = FactorPoset::from_hasse(FactorKind::IntervalLattice, labels, preds)?;
    Ok(IntervalLattice { poset, intervals: nodes })
}

/// How a chain pair maps coordinates to intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrientation {
    /// Quantitative values: the bottom pair is the full span and climbing
    /// either chain tightens the interval (reverse containment).
    ValuePoints,
    /// Usage intervals: the bottom pair is the empty interval and climbing
    /// either chain widens the interval (containment).
    UsageIntervals,
}

/// A two-chain realization of an interval (semi)lattice. Coordinate `l` on
/// the left chain picks the left endpoint, coordinate `r` on the right
/// chain picks the right endpoint; not every pair denotes a real interval.
#[derive(Clone, Debug)]
pub struct ChainPair {
    values: Vec<Endpoint>,
    orientation: PairOrientation,
}

impl ChainPair {
    fn new(mut values: Vec<Endpoint>, orientation: PairOrientation) -> Result<Self> {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(MineError::data("chain pair needs at least one value"));
        }
        Ok(ChainPair { values, orientation })
    }

    /// Reverse-containment semilattice over the distinct values: minimum =
    /// full span, maxima = the value points.
    pub fn quantitative(values: Vec<Endpoint>) -> Result<Self> {
        Self::new(values, PairOrientation::ValuePoints)
    }

    /// Containment order over a grid of interval endpoints: minimum = the
    /// empty interval, maximum = the full span.
    pub fn usage(grid: Vec<Endpoint>) -> Result<Self> {
        Self::new(grid, PairOrientation::UsageIntervals)
    }

    pub fn orientation(&self) -> PairOrientation {
        self.orientation
    }

    /// Sorted distinct values (quantitative) or endpoints (usage).
    pub fn values(&self) -> &[Endpoint] {
        &self.values
    }

    /// Number of distinct values; each chain has this many nodes.
    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// The interval a coordinate pair denotes; `None` for structurally
    /// invalid pairs (left endpoint beyond right endpoint).
    pub fn interval_of(&self, l: NodeId, r: NodeId) -> Option<Interval> {
        let m = self.m();
        let (lo_idx, hi_idx) = match self.orientation {
            PairOrientation::ValuePoints => (l as usize, m - 1 - r as usize),
            PairOrientation::UsageIntervals => (m - 1 - l as usize, r as usize),
        };
        (lo_idx <= hi_idx).then(|| Interval {
            lo: self.values[lo_idx],
            hi: self.values[hi_idx],
        })
    }

    pub fn is_valid(&self, l: NodeId, r: NodeId) -> bool {
        self.interval_of(l, r).is_some()
    }

    /// The two chain factors, bottom-first per the pair's order.
    pub fn factors(&self, attr: &str) -> (FactorPoset, FactorPoset) {
        let m = self.m();
        let (left_labels, right_labels): (Vec<String>, Vec<String>) = match self.orientation {
            PairOrientation::ValuePoints => (
                (0..m).map(|i| format!("{attr}.lo≥{}", self.values[i])).collect(),
                (0..m).map(|r| format!("{attr}.hi≤{}", self.values[m - 1 - r])).collect(),
            ),
            PairOrientation::UsageIntervals => (
                (0..m).map(|l| format!("{attr}.lo≤{}", self.values[m - 1 - l])).collect(),
                (0..m).map(|r| format!("{attr}.hi≥{}", self.values[r])).collect(),
            ),
        };
        (
            FactorPoset::chain(left_labels).expect("nonempty chain"),
            FactorPoset::chain(right_labels).expect("nonempty chain"),
        )
    }

    /// Coordinates of a quantitative row value.
    pub fn encode_point(&self, v: Endpoint) -> Result<(NodeId, NodeId)> {
        debug_assert_eq!(self.orientation, PairOrientation::ValuePoints);
        let m = self.m();
        let k = self
            .values
            .binary_search(&v)
            .map_err(|_| MineError::data(format!("value {v} not in attribute domain")))?;
        Ok((k as NodeId, (m - 1 - k) as NodeId))
    }

    /// Coordinates of a usage row: `None` (no usage) sits at the bottom.
    pub fn encode_interval(&self, iv: Option<Interval>) -> Result<(NodeId, NodeId)> {
        debug_assert_eq!(self.orientation, PairOrientation::UsageIntervals);
        let Some(iv) = iv else {
            return Ok((0, 0));
        };
        let m = self.m();
        let lookup = |p: Endpoint| {
            self.values
                .binary_search(&p)
                .map_err(|_| MineError::data(format!("endpoint {p} not in attribute grid")))
        };
        let lo_idx = lookup(iv.lo)?;
        let hi_idx = lookup(iv.hi)?;
        Ok(((m - 1 - lo_idx) as NodeId, hi_idx as NodeId))
    }
}

/// Reverse-containment interval semilattice over the observed values of a
/// quantitative attribute, realized as a chain pair.
pub fn quantitative_semilattice(values: &[Endpoint]) -> Result<ChainPair> {
    ChainPair::quantitative(values.to_vec())
}

/// Concrete reading of one mined coordinate over an interval structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodedInterval {
    /// The empty interval (no constraint can meet it).
    Empty,
    /// A single point.
    Point(Endpoint),
    /// The family of single points strictly between two adjacent grid
    /// endpoints.
    OpenRange(Endpoint, Endpoint),
    /// A closed interval with exact (possibly ε-padded) endpoints.
    Closed(Endpoint, Endpoint),
}

/// Literal reading: what the coordinate's interval is, verbatim.
pub fn decode_literal(iv: Option<Interval>) -> DecodedInterval {
    match iv {
        None => DecodedInterval::Empty,
        Some(iv) if iv.is_point() => DecodedInterval::Point(iv.lo),
        Some(iv) => DecodedInterval::Closed(iv.lo, iv.hi),
    }
}

/// Border reading of a minimal infrequent coordinate over a usage-interval
/// grid. Walking down from the node, the nearest strictly-smaller lattice
/// elements determine the tightest interval with the same support:
///
/// * bottom → empty;
/// * a point → that point;
/// * an elementary interval `[p_a, p_{a+1}]` (its lower covers are points)
///   → every single point strictly inside, reported as an open range;
/// * a wider interval `[p_a, p_b]` (its lower covers are the two one-step
///   shrinkings) → `[p_{a+1} − ε, p_{b−1} + ε]`.
pub fn decode_min_infrequent_usage(
    grid: &[Endpoint],
    iv: Option<Interval>,
    eps: i64,
) -> Result<DecodedInterval> {
    let Some(iv) = iv else {
        return Ok(DecodedInterval::Empty);
    };
    let idx = |p: Endpoint| {
        grid.binary_search(&p)
            .map_err(|_| MineError::data(format!("endpoint {p} not on the attribute grid")))
    };
    let a = idx(iv.lo)?;
    let b = idx(iv.hi)?;
    Ok(match b - a {
        0 => DecodedInterval::Point(iv.lo),
        1 => DecodedInterval::OpenRange(iv.lo, iv.hi),
        _ => DecodedInterval::Closed(grid[a + 1] - eps, grid[b - 1] + eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: Endpoint, hi: Endpoint) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    /// The Friday usage column of the shipped interval fixture (hours).
    fn friday() -> Vec<Interval> {
        vec![iv(2, 3), iv(1, 3), iv(2, 4), iv(1, 2), iv(3, 4)]
    }

    #[test]
    fn single_interval_lattice_is_one_node() {
        let lat = build_lattice(&[iv(5, 9)]).unwrap();
        assert_eq!(lat.len(), 1);
        assert_eq!(lat.interval_of(0), Some(iv(5, 9)));
        assert_eq!(lat.hasse_edge_count(), 0);
    }

    #[test]
    fn friday_lattice_has_nine_nodes_and_twelve_edges() {
        let lat = build_lattice(&friday()).unwrap();
        assert_eq!(lat.len(), 9);
        assert_eq!(lat.hasse_edge_count(), 12);
        // Bottom plus the two interior points plus all six spans.
        assert_eq!(lat.interval_of(0), None);
        for want in [
            Interval::point(2),
            Interval::point(3),
            iv(1, 2),
            iv(2, 3),
            iv(3, 4),
            iv(1, 3),
            iv(2, 4),
            iv(1, 4),
        ] {
            assert!(lat.node_of(Some(want)).is_some(), "missing {want:?}");
        }
    }

    #[test]
    fn lattice_is_meet_and_join_closed() {
        let lat = build_lattice(&friday()).unwrap();
        for x in 0..lat.len() {
            for y in 0..lat.len() {
                let (a, b) = (lat.interval_of(x as NodeId), lat.interval_of(y as NodeId));
                if let (Some(a), Some(b)) = (a, b) {
                    let meet = a.intersect(&b);
                    assert!(lat.node_of(meet).is_some(), "meet of {a:?},{b:?} missing");
                    assert!(lat.node_of(Some(a.span(&b))).is_some(), "span missing");
                }
            }
        }
    }

    #[test]
    fn lattice_order_is_containment() {
        let lat = build_lattice(&friday()).unwrap();
        for x in 0..lat.len() as NodeId {
            for y in 0..lat.len() as NodeId {
                let expect = match (lat.interval_of(x), lat.interval_of(y)) {
                    (None, _) => true,
                    (Some(_), None) => false,
                    (Some(a), Some(b)) => b.contains(&a),
                };
                assert_eq!(lat.poset().leq(x, y), expect, "order mismatch at {x},{y}");
            }
        }
    }

    #[test]
    fn elementary_intervals_of_friday() {
        let elems = elementary_intervals(&friday()).unwrap();
        assert_eq!(elems, vec![iv(1, 2), iv(2, 3), iv(3, 4)]);
        assert_eq!(elementary_intervals(&[iv(7, 11)]).unwrap(), vec![iv(7, 11)]);
        assert!(elementary_intervals(&[]).is_err());
    }

    #[test]
    fn quantitative_semilattice_over_ages() {
        // Distinct ages of the shipped quantitative fixture.
        let pair = quantitative_semilattice(&[23, 25, 29, 34, 38]).unwrap();
        let m = pair.m() as NodeId;
        assert_eq!(pair.interval_of(0, 0), Some(iv(23, 38)), "bottom = full span");
        // Valid pairs count m(m+1)/2; maximal valid pairs are the points.
        let mut valid = Vec::new();
        for l in 0..m {
            for r in 0..m {
                if let Some(i) = pair.interval_of(l, r) {
                    valid.push(((l, r), i));
                }
            }
        }
        assert_eq!(valid.len(), 15);
        let maximal: Vec<Interval> = valid
            .iter()
            .filter(|((l, r), _)| {
                !valid
                    .iter()
                    .any(|((l2, r2), _)| (l2, r2) != (l, r) && l2 >= l && r2 >= r)
            })
            .map(|&(_, i)| i)
            .collect();
        assert_eq!(
            maximal,
            vec![
                Interval::point(23),
                Interval::point(25),
                Interval::point(29),
                Interval::point(34),
                Interval::point(38)
            ]
        );
        // Row encoding round-trips.
        let (l, r) = pair.encode_point(29).unwrap();
        assert_eq!(pair.interval_of(l, r), Some(Interval::point(29)));
        assert!(pair.encode_point(30).is_err());
    }

    #[test]
    fn usage_pair_bottom_is_empty_interval() {
        let pair = ChainPair::usage(vec![60, 120, 180, 240]).unwrap();
        assert_eq!(pair.interval_of(0, 0), None, "product bottom is the empty interval");
        assert_eq!(pair.encode_interval(None).unwrap(), (0, 0));
        let (l, r) = pair.encode_interval(Some(iv(120, 240))).unwrap();
        assert_eq!(pair.interval_of(l, r), Some(iv(120, 240)));
        assert_eq!(pair.interval_of(3, 3), Some(iv(60, 240)), "top = full span");
    }

    #[test]
    fn usage_pair_agrees_with_built_lattice() {
        // The chain-pair view of the Friday grid covers the closure lattice:
        // same containment order on shared elements; the only extras are the
        // two extreme single points.
        let grid = endpoints(&friday());
        let pair = ChainPair::usage(grid.clone()).unwrap();
        let lat = build_lattice(&elementary_intervals(&friday()).unwrap()).unwrap();
        let m = pair.m() as NodeId;
        let mut shared = 0;
        let mut valid = 0;
        for l in 0..m {
            for r in 0..m {
                match pair.interval_of(l, r) {
                    Some(i) => {
                        valid += 1;
                        if lat.node_of(Some(i)).is_some() {
                            shared += 1;
                        } else {
                            assert!(
                                i.is_point() && (i.lo == grid[0] || i.lo == grid[grid.len() - 1]),
                                "only extreme points may be missing from the lattice, got {i:?}"
                            );
                        }
                    }
                    // The invalid region is exactly lo-index > hi-index.
                    None => assert!(grid.len() - 1 - l as usize > r as usize),
                }
            }
        }
        assert_eq!(valid, grid.len() * (grid.len() + 1) / 2);
        assert_eq!(shared, lat.len() - 1, "all lattice nodes but the bottom have a valid pair");
        for l1 in 0..m {
            for r1 in 0..m {
                for l2 in 0..m {
                    for r2 in 0..m {
                        if let (Some(a), Some(b)) = (pair.interval_of(l1, r1), pair.interval_of(l2, r2)) {
                            assert_eq!(l1 <= l2 && r1 <= r2, b.contains(&a), "pair order must be containment");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decode_minimal_infrequent_cases() {
        let grid = vec![60, 120, 180, 240];
        let d = |i: Option<Interval>| decode_min_infrequent_usage(&grid, i, 1).unwrap();
        assert_eq!(d(None), DecodedInterval::Empty);
        assert_eq!(d(Some(Interval::point(120))), DecodedInterval::Point(120));
        assert_eq!(d(Some(iv(120, 180))), DecodedInterval::OpenRange(120, 180));
        // Two proper predecessors [60,120] and [120,180]: pad the inner
        // endpoints by one precision unit.
        assert_eq!(d(Some(iv(60, 180))), DecodedInterval::Closed(119, 121));
        assert_eq!(d(Some(iv(60, 240))), DecodedInterval::Closed(119, 181));
    }

    #[test]
    fn decode_round_trip_preserves_support() {
        // Support of the decoded form (rows whose interval contains it)
        // equals support of the lattice element itself.
        let rows = friday();
        let grid = endpoints(&rows);
        let pair = ChainPair::usage(grid.clone()).unwrap();
        let m = pair.m() as NodeId;
        for l in 0..m {
            for r in 0..m {
                let Some(node) = pair.interval_of(l, r) else { continue };
                let support = rows.iter().filter(|row| row.contains(&node)).count();
                let decoded_support = match decode_min_infrequent_usage(&grid, Some(node), 1).unwrap() {
                    DecodedInterval::Empty => rows.len(),
                    DecodedInterval::Point(p) => {
                        rows.iter().filter(|row| row.contains(&Interval::point(p))).count()
                    }
                    DecodedInterval::OpenRange(a, b) => rows
                        .iter()
                        .filter(|row| row.lo <= a && b <= row.hi) // grid rows cover (a,b) iff they cover [a,b]
                        .count(),
                    DecodedInterval::Closed(a, b) => {
                        rows.iter().filter(|row| row.lo <= a && b <= row.hi).count()
                    }
                };
                assert_eq!(decoded_support, support, "round trip broke at {node:?}");
            }
        }
    }

    fn arb_intervals(max_n: usize, hi: Endpoint) -> impl Strategy<Value = Vec<Interval>> {
        proptest::collection::vec((0..hi, 0..hi), 1..=max_n).prop_map(|ps| {
            ps.into_iter()
                .map(|(a, b)| Interval { lo: a.min(b), hi: a.max(b) })
                .collect()
        })
    }

    /// Naive full-pass closure oracle.
    fn closure_oracle(gens: &[Interval]) -> (HashSet<Interval>, bool) {
        let mut set: HashSet<Interval> = gens.iter().copied().collect();
        let mut disjoint = false;
        loop {
            let items: Vec<Interval> = set.iter().copied().collect();
            let before = set.len();
            for &a in &items {
                for &b in &items {
                    match a.intersect(&b) {
                        Some(m) => {
                            set.insert(m);
                        }
                        None => disjoint = true,
                    }
                    set.insert(a.span(&b));
                }
            }
            if set.len() == before {
                return (set, disjoint);
            }
        }
    }

    proptest! {
        #[test]
        fn closure_matches_naive_oracle(gens in arb_intervals(5, 7)) {
            let lat = build_lattice(&gens).unwrap();
            let (want, disjoint) = closure_oracle(&gens);
            let got: HashSet<Interval> =
                (0..lat.len() as NodeId).filter_map(|x| lat.interval_of(x)).collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(lat.node_of(None).is_some(), disjoint);
        }

        #[test]
        fn quantitative_order_is_reverse_containment(vals in proptest::collection::vec(0i64..20, 1..=8)) {
            let pair = ChainPair::quantitative(vals).unwrap();
            let m = pair.m() as NodeId;
            for l1 in 0..m { for r1 in 0..m { for l2 in 0..m { for r2 in 0..m {
                if let (Some(a), Some(b)) = (pair.interval_of(l1, r1), pair.interval_of(l2, r2)) {
                    prop_assert_eq!(l1 <= l2 && r1 <= r2, a.contains(&b));
                }
            }}}}
        }

        #[test]
        fn endpoint_grid_matches_sort_unique_oracle(col in arb_intervals(6, 10)) {
            let mut want: Vec<Endpoint> = col.iter().flat_map(|i| [i.lo, i.hi]).collect();
            want.sort_unstable();
            want.dedup();
            prop_assert_eq!(endpoints(&col), want);
        }
    }
}
