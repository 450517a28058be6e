//! Factor posets and their products.
//!
//! A *factor* is a finite poset given by its Hasse diagram (immediate
//! precedence). The kinds used by the mining pipeline are chains, bottomed
//! antichains ("stars"), rooted trees (every node has a unique immediate
//! predecessor — so every pair has a meet), and interval lattices (a DAG
//! kind used for usage-interval data). A *product space* combines factors
//! componentwise; elements are coordinate vectors of node ids.

use fixedbitset::FixedBitSet;

use crate::errors::{MineError, Result};

/// Node identifier inside a single factor. Ids are topologically ordered:
/// every immediate predecessor of a node has a smaller id.
pub type NodeId = u32;

/// An element of a product space: one node id per factor.
pub type Element = Vec<NodeId>;

/// Structural flavor of a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// Totally ordered: 0 ≺ 1 ≺ … ≺ n−1.
    Chain,
    /// A bottom element covered by pairwise-incomparable leaves.
    Star,
    /// A rooted tree (root = unique minimum).
    Tree,
    /// A general DAG with a unique minimum (interval containment lattices).
    IntervalLattice,
}

impl FactorKind {
    /// Tree-shaped factors admit the dualization machinery; lattice factors
    /// only support the level-wise search.
    pub fn is_tree(self) -> bool {
        matches!(self, FactorKind::Chain | FactorKind::Star | FactorKind::Tree)
    }
}

/// A single finite factor poset with precomputed order structure.
#[derive(Clone, Debug)]
pub struct FactorPoset {
    kind: FactorKind,
    labels: Vec<String>,
    preds: Vec<Vec<NodeId>>,
    succs: Vec<Vec<NodeId>>,
    /// Unique immediate predecessor where one exists (all tree kinds).
    parent: Vec<Option<NodeId>>,
    /// up[x] = { y : y ⪰ x }
    up: Vec<FixedBitSet>,
    /// down[x] = { y : y ⪯ x }
    down: Vec<FixedBitSet>,
    /// Longest path from a minimal element (depth for trees).
    level: Vec<u32>,
    /// Longest path from a maximal element, walking downward.
    colevel: Vec<u32>,
    maximal: Vec<NodeId>,
    bottom: Option<NodeId>,
}

impl FactorPoset {
    /// Build a factor from its Hasse diagram. `preds[x]` lists the immediate
    /// predecessors of node `x`; every listed id must be smaller than `x`
    /// (topological numbering), which all construction paths guarantee.
    pub fn from_hasse(kind: FactorKind, labels: Vec<String>, preds: Vec<Vec<NodeId>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(MineError::data("factor poset must have at least one node"));
        }
        if preds.len() != n {
            return Err(MineError::data("predecessor table size mismatch"));
        }
        for (x, ps) in preds.iter().enumerate() {
            for &p in ps {
                if (p as usize) >= x {
                    return Err(MineError::data(format!(
                        "node {x} lists predecessor {p}; ids must be topologically ordered"
                    )));
                }
            }
        }
        let mut succs = vec![Vec::new(); n];
        for (x, ps) in preds.iter().enumerate() {
            for &p in ps {
                succs[p as usize].push(x as NodeId);
            }
        }
        let mut down = Vec::with_capacity(n);
        let mut level = vec![0u32; n];
        for x in 0..n {
            let mut d = FixedBitSet::with_capacity(n);
            d.insert(x);
            for &p in &preds[x] {
                d.union_with(&down[p as usize]);
                level[x] = level[x].max(level[p as usize] + 1);
            }
            down.push(d);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut colevel = vec![0u32; n];
        for x in (0..n).rev() {
            let mut u = FixedBitSet::with_capacity(n);
            u.insert(x);
            for &s in &succs[x] {
                u.union_with(&up[s as usize]);
                colevel[x] = colevel[x].max(colevel[s as usize] + 1);
            }
            up[x] = u;
        }
        let maximal: Vec<NodeId> = (0..n).filter(|&x| succs[x].is_empty()).map(|x| x as NodeId).collect();
        let minimal: Vec<NodeId> = (0..n).filter(|&x| preds[x].is_empty()).map(|x| x as NodeId).collect();
        let bottom = if minimal.len() == 1 { Some(minimal[0]) } else { None };
        let parent = preds
            .iter()
            .map(|ps| if ps.len() == 1 { Some(ps[0]) } else { None })
            .collect();
        Ok(FactorPoset {
            kind,
            labels,
            preds,
            succs,
            parent,
            up,
            down,
            level,
            colevel,
            maximal,
            bottom,
        })
    }

    /// A chain 0 ≺ 1 ≺ … with the given labels.
    pub fn chain(labels: Vec<String>) -> Result<Self> {
        let preds = (0..labels.len())
            .map(|i| if i == 0 { vec![] } else { vec![(i - 1) as NodeId] })
            .collect();
        Self::from_hasse(FactorKind::Chain, labels, preds)
    }

    /// A bottom element covered by the given leaves (a "don't care" value
    /// below pairwise-incomparable alternatives).
    pub fn star(bottom_label: String, leaf_labels: Vec<String>) -> Result<Self> {
        let mut labels = vec![bottom_label];
        labels.extend(leaf_labels);
        let preds = (0..labels.len()).map(|i| if i == 0 { vec![] } else { vec![0] }).collect();
        Self::from_hasse(FactorKind::Star, labels, preds)
    }

    /// A rooted tree from a parent table (`None` exactly at the root).
    /// Parent ids must be smaller than their children (topological order).
    pub fn tree(labels: Vec<String>, parent: Vec<Option<NodeId>>) -> Result<Self> {
        if parent.len() != labels.len() {
            return Err(MineError::data("parent table size mismatch"));
        }
        let roots = parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(MineError::data(format!("tree factor must have exactly one root, found {roots}")));
        }
        let preds = parent.iter().map(|p| p.map(|q| vec![q]).unwrap_or_default()).collect();
        Self::from_hasse(FactorKind::Tree, labels, preds)
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: NodeId) -> &str {
        &self.labels[x as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// x ⪯ y
    pub fn leq(&self, x: NodeId, y: NodeId) -> bool {
        self.up[x as usize].contains(y as usize)
    }

    /// x ≺ y
    pub fn lt(&self, x: NodeId, y: NodeId) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn immediate_predecessors(&self, x: NodeId) -> &[NodeId] {
        &self.preds[x as usize]
    }

    pub fn immediate_successors(&self, x: NodeId) -> &[NodeId] {
        &self.succs[x as usize]
    }

    /// Unique immediate predecessor, when the node has exactly one.
    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x as usize]
    }

    /// Longest path from a minimal element up to `x`.
    pub fn level(&self, x: NodeId) -> u32 {
        self.level[x as usize]
    }

    /// Longest path from a maximal element down to `x`.
    pub fn colevel(&self, x: NodeId) -> u32 {
        self.colevel[x as usize]
    }

    pub fn maximal_elements(&self) -> &[NodeId] {
        &self.maximal
    }

    pub fn bottom(&self) -> Option<NodeId> {
        self.bottom
    }

    /// Bitset of everything above (and including) `x`.
    pub fn up_set(&self, x: NodeId) -> &FixedBitSet {
        &self.up[x as usize]
    }

    /// Bitset of everything below (and including) `x`.
    pub fn down_set(&self, x: NodeId) -> &FixedBitSet {
        &self.down[x as usize]
    }

    /// Greatest lower bound. Exists and is unique for all shipped kinds
    /// (trees by construction, interval lattices by closure under meets).
    pub fn meet(&self, x: NodeId, y: NodeId) -> Result<NodeId> {
        if self.leq(x, y) {
            return Ok(x);
        }
        if self.leq(y, x) {
            return Ok(y);
        }
        let mut common = self.down[x as usize].clone();
        common.intersect_with(&self.down[y as usize]);
        // The maximal elements of the common down-set; a meet exists iff
        // there is exactly one.
        let members: Vec<usize> = common.ones().collect();
        let mut best: Option<usize> = None;
        for &m in &members {
            if members.iter().all(|&o| o == m || !self.leq(m as NodeId, o as NodeId)) {
                if best.is_some() {
                    return Err(MineError::data("meet is not unique; factor is not a meet-semilattice"));
                }
                best = Some(m);
            }
        }
        best.map(|m| m as NodeId)
            .ok_or_else(|| MineError::data("elements have no common lower bound"))
    }

    /// The order-reversed factor. Requires a unique maximum (which becomes
    /// the bottom of the view); node `x` maps to `n − 1 − x`.
    pub fn dual_view(&self) -> Result<FactorPoset> {
        if self.maximal.len() != 1 {
            return Err(MineError::NotDualizable(format!(
                "factor has {} maximal elements; dual view needs a unique maximum",
                self.maximal.len()
            )));
        }
        let n = self.len();
        let flip = |x: NodeId| (n as NodeId) - 1 - x;
        let mut labels = self.labels.clone();
        labels.reverse();
        let mut preds = vec![Vec::new(); n];
        for x in 0..n {
            // Successors of the original become predecessors of the view.
            let mut ps: Vec<NodeId> = self.succs[x].iter().map(|&s| flip(s)).collect();
            ps.sort_unstable();
            preds[flip(x as NodeId) as usize] = ps;
        }
        let kind = match self.kind {
            FactorKind::Chain => FactorKind::Chain,
            // A tree with a unique maximum is a path; a reversed lattice
            // stays a lattice-like DAG.
            FactorKind::Star | FactorKind::Tree => FactorKind::Chain,
            FactorKind::IntervalLattice => FactorKind::IntervalLattice,
        };
        FactorPoset::from_hasse(kind, labels, preds)
    }

    /// Find a node id by its label.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label).map(|i| i as NodeId)
    }
}

/// A product of factors, ordered componentwise.
#[derive(Clone, Debug)]
pub struct ProductPoset {
    factors: Vec<FactorPoset>,
}

impl ProductPoset {
    pub fn new(factors: Vec<FactorPoset>) -> Result<Self> {
        if factors.is_empty() {
            return Err(MineError::data("product space needs at least one factor"));
        }
        Ok(ProductPoset { factors })
    }

    pub fn factors(&self) -> &[FactorPoset] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &FactorPoset {
        &self.factors[i]
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Total number of elements, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
    }

    /// Whether every factor is tree-shaped (chain / star / tree).
    pub fn all_tree_factors(&self) -> bool {
        self.factors.iter().all(|f| f.kind().is_tree())
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.len() == self.arity() && x.iter().zip(&self.factors).all(|(&c, f)| (c as usize) < f.len())
    }

    /// Componentwise order.
    pub fn leq(&self, x: &Element, y: &Element) -> bool {
        debug_assert_eq!(x.len(), self.arity());
        debug_assert_eq!(y.len(), self.arity());
        x.iter().zip(y).zip(&self.factors).all(|((&a, &b), f)| f.leq(a, b))
    }

    pub fn lt(&self, x: &Element, y: &Element) -> bool {
        x != y && self.leq(x, y)
    }

    /// Σ of factor levels: longest path from the product minimum.
    pub fn level(&self, x: &Element) -> u32 {
        x.iter().zip(&self.factors).map(|(&c, f)| f.level(c)).sum()
    }

    /// Σ of factor colevels: longest path from a maximal element downward.
    pub fn colevel(&self, x: &Element) -> u32 {
        x.iter().zip(&self.factors).map(|(&c, f)| f.colevel(c)).sum()
    }

    /// Immediate predecessors: lower exactly one coordinate one Hasse step.
    pub fn immediate_predecessors(&self, x: &Element) -> Vec<Element> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for &p in f.immediate_predecessors(x[i]) {
                let mut y = x.clone();
                y[i] = p;
                out.push(y);
            }
        }
        out
    }

    /// Immediate successors: raise exactly one coordinate one Hasse step.
    pub fn immediate_successors(&self, x: &Element) -> Vec<Element> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for &s in f.immediate_successors(x[i]) {
                let mut y = x.clone();
                y[i] = s;
                out.push(y);
            }
        }
        out
    }

    /// Componentwise greatest lower bound.
    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element> {
        x.iter()
            .zip(y)
            .zip(&self.factors)
            .map(|((&a, &b), f)| f.meet(a, b))
            .collect()
    }

    /// The product minimum, when every factor has one.
    pub fn bottom(&self) -> Result<Element> {
        self.factors
            .iter()
            .map(|f| f.bottom().ok_or_else(|| MineError::data("factor has no unique minimum")))
            .collect()
    }

    /// All maximal elements (cartesian product of factor maxima).
    pub fn maximal_elements(&self) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::with_capacity(out.len() * f.maximal_elements().len());
            for prefix in &out {
                for &m in f.maximal_elements() {
                    let mut e = prefix.clone();
                    e.push(m);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Iterate over every element (odometer order). Intended for tests and
    /// brute-force oracles on small spaces.
    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter {
            product: self,
            current: Some(vec![0; self.arity()]),
        }
    }

    /// The order-reversed product (every factor must be dualizable).
    pub fn dual_view(&self) -> Result<ProductPoset> {
        let factors = self
            .factors
            .iter()
            .map(|f| f.dual_view())
            .collect::<Result<Vec<_>>>()?;
        ProductPoset::new(factors)
    }
}

/// Odometer iterator over all elements of a product space.
pub struct ElementIter<'a> {
    product: &'a ProductPoset,
    current: Option<Element>,
}

impl Iterator for ElementIter<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if (next[i] as usize) < self.product.factor(i).len() {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(cur)
    }
}

/// Keep only the minimal elements of a set (pairwise comparison filter).
pub fn min_antichain(p: &ProductPoset, xs: &[Element]) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for x in xs {
        if out.iter().any(|o| p.leq(o, x)) {
            continue;
        }
        out.retain(|o| !p.leq(x, o));
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out.sort_unstable();
    out
}

/// Keep only the maximal elements of a set (pairwise comparison filter).
pub fn max_antichain(p: &ProductPoset, xs: &[Element]) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for x in xs {
        if out.iter().any(|o| p.leq(x, o)) {
            continue;
        }
        out.retain(|o| !p.leq(o, x));
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out.sort_unstable();
    out
}
