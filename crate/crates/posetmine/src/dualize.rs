//! Partial-duality testing on products of meet semi-lattice tree posets.
//!
//! Given antichains A (a lower boundary) and B (an upper boundary) with
//! a ⋠ b for every pair, `dual_check` decides whether A⁺ ∪ B⁻ covers the
//! whole product and, when it does not, returns a witness x with x ⋡ a for
//! all a ∈ A and x ⋠ b for all b ∈ B. The decomposition keeps every factor
//! slice a meet-closed subtree, so projections ("the unique element above
//! a / below b in Q") stay well-defined throughout the recursion.

use fixedbitset::FixedBitSet;
use std::collections::HashSet;

use crate::errors::{MineError, Result};
use crate::poset::{Element, FactorPoset, NodeId, ProductPoset};

/// Tuning knobs for the dualization recursion.
#[derive(Clone, Copy, Debug)]
pub struct DualizeCfg {
    /// Subproblems with at most this many elements are decided by direct
    /// enumeration inside the base case.
    pub pd_enum_cap: u128,
    /// Recursion-depth guard; exceeding it is a resource error.
    pub max_depth: usize,
}

impl Default for DualizeCfg {
    fn default() -> Self {
        DualizeCfg { pd_enum_cap: 4096, max_depth: 4096 }
    }
}

/// Outcome of a duality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualOutcome {
    /// A⁺ ∪ B⁻ covers the whole product.
    Dual,
    /// An element outside A⁺ ∪ B⁻.
    Witness(Element),
}

/// χ(v) with χ^χ = v, by bisection of c·ln c − ln v on [1, max(2, log₂ v)]
/// (the upper end satisfies c·ln c ≥ ln v for every v ≥ 1).
pub fn chi(v: f64) -> f64 {
    debug_assert!(v >= 1.0);
    if v <= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0f64, v.log2().max(2.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.ln() < v.ln() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// ε(v) = 1/χ(v), the balance threshold of the decomposition.
pub fn epsilon(v: f64) -> f64 {
    1.0 / chi(v)
}

fn is_witness(p: &ProductPoset, a: &[Element], b: &[Element], x: &Element) -> bool {
    a.iter().all(|ai| !p.leq(ai, x)) && b.iter().all(|bi| !p.leq(x, bi))
}

/// Exhaustive duality check over the whole product; the testing oracle.
pub fn brute_dualizer(p: &ProductPoset, a: &[Element], b: &[Element]) -> Result<DualOutcome> {
    if p.size() > 1_000_000 {
        return Err(MineError::resource(format!(
            "brute-force dualizer refused: space has {} elements",
            p.size()
        )));
    }
    for x in p.elements() {
        if is_witness(p, a, b, &x) {
            return Ok(DualOutcome::Witness(x));
        }
    }
    Ok(DualOutcome::Dual)
}

/// Per-factor slice of the current subproblem: allowed node sets, each a
/// nonempty meet-closed subtree of its factor.
type Slices = Vec<FixedBitSet>;

struct Ctx<'a> {
    p: &'a ProductPoset,
    cfg: &'a DualizeCfg,
}

fn volume(q: &Slices) -> u128 {
    q.iter().fold(1u128, |acc, s| acc.saturating_mul(s.count_ones(..) as u128))
}

/// Minimum of a nonempty meet-closed slice. Topological ids make it the
/// smallest set bit.
fn slice_min(q: &FixedBitSet) -> NodeId {
    q.ones().next().expect("slice must be nonempty") as NodeId
}

/// Nearest ancestor of `x` that lies in the slice (the unique immediate
/// predecessor within the slice as an induced tree), or None at the min.
fn parent_in_slice(f: &FactorPoset, q: &FixedBitSet, x: NodeId) -> Option<NodeId> {
    let mut cur = x;
    loop {
        // Tree kinds have a unique immediate predecessor everywhere above
        // their root.
        let p = f.parent(cur)?;
        if q.contains(p as usize) {
            return Some(p);
        }
        cur = p;
    }
}

fn up_in(f: &FactorPoset, q: &FixedBitSet, x: NodeId) -> FixedBitSet {
    let mut s = f.up_set(x).clone();
    s.intersect_with(q);
    s
}

fn down_in(f: &FactorPoset, q: &FixedBitSet, x: NodeId) -> FixedBitSet {
    let mut s = f.down_set(x).clone();
    s.intersect_with(q);
    s
}

/// Minimal elements of a subset of a tree factor, ascending by id.
fn minimal_of(f: &FactorPoset, set: &FixedBitSet) -> Vec<NodeId> {
    set.ones()
        .map(|x| x as NodeId)
        .filter(|&x| {
            let mut d = f.down_set(x).clone();
            d.intersect_with(set);
            d.count_ones(..) == 1
        })
        .collect()
}

/// Maximal elements of a subset of a tree factor, ascending by id.
fn maximal_of(f: &FactorPoset, set: &FixedBitSet) -> Vec<NodeId> {
    set.ones()
        .map(|x| x as NodeId)
        .filter(|&x| {
            let mut u = f.up_set(x).clone();
            u.intersect_with(set);
            u.count_ones(..) == 1
        })
        .collect()
}

/// Decompose a subset of a tree factor into its connected components
/// (one per minimal element, each the up-set of its minimum within the
/// residue). The residue of a meet-closed slice minus a down-set is a
/// disjoint union of such subtrees.
fn components_of(f: &FactorPoset, residue: &FixedBitSet) -> Vec<FixedBitSet> {
    let mut out = Vec::new();
    for mu in minimal_of(f, residue) {
        out.push(up_in(f, residue, mu));
    }
    debug_assert_eq!(
        out.iter().map(|c| c.count_ones(..)).sum::<usize>(),
        residue.count_ones(..),
        "components must partition the residue"
    );
    out
}

/// Restrict A to the members with a⁺ ∩ Q ≠ ∅ and project each onto the
/// unique minimum of a⁺ ∩ Q, then drop dominated members (A⁺ ∩ Q is
/// unchanged by both).
fn restrict_project_a(p: &ProductPoset, q: &Slices, a: &[Element]) -> Vec<Element> {
    let mut projected: Vec<Element> = Vec::new();
    'outer: for cand in a {
        let mut image = Vec::with_capacity(cand.len());
        for (i, &ci) in cand.iter().enumerate() {
            let up = up_in(p.factor(i), &q[i], ci);
            if up.count_ones(..) == 0 {
                continue 'outer;
            }
            // Meet-closed ∩ up-set is meet-closed: unique minimum.
            image.push(slice_min(&up));
        }
        projected.push(image);
    }
    crate::poset::min_antichain(p, &projected)
}

/// Restrict B to the members with b⁻ ∩ Q ≠ ∅ and project each onto the
/// unique maximum of b⁻ ∩ Q (an ancestor chain), then drop dominated
/// members.
fn restrict_project_b(p: &ProductPoset, q: &Slices, b: &[Element]) -> Vec<Element> {
    let mut projected: Vec<Element> = Vec::new();
    'outer: for cand in b {
        let mut image = Vec::with_capacity(cand.len());
        for (i, &ci) in cand.iter().enumerate() {
            let down = down_in(p.factor(i), &q[i], ci);
            let Some(top) = down.ones().last() else {
                continue 'outer;
            };
            // b⁻ is a chain in a tree, so the largest id is its maximum.
            image.push(top as NodeId);
        }
        projected.push(image);
    }
    crate::poset::max_antichain(p, &projected)
}

/// Base case: exhaustive search. Either the slice volume is small enough
/// to enumerate outright, or one side has at most three members and the
/// witness search reduces to coordinate assignments for that side.
fn pd(ctx: &Ctx, q: &Slices, a: &[Element], b: &[Element]) -> Result<Option<Element>> {
    if volume(q) <= ctx.cfg.pd_enum_cap {
        return Ok(pd_enumerate(ctx, q, a, b));
    }
    if b.len() <= 3 {
        return Ok(pd_few_b(ctx, q, a, b));
    }
    debug_assert!(a.len() <= 3, "base case requires min{{|A|,|B|}} ≤ 3");
    Ok(pd_few_a(ctx, q, a, b))
}

fn pd_enumerate(ctx: &Ctx, q: &Slices, a: &[Element], b: &[Element]) -> Option<Element> {
    let nodes: Vec<Vec<NodeId>> = q.iter().map(|s| s.ones().map(|x| x as NodeId).collect()).collect();
    let mut idx = vec![0usize; nodes.len()];
    loop {
        let x: Element = idx.iter().zip(&nodes).map(|(&i, ns)| ns[i]).collect();
        if is_witness(ctx.p, a, b, &x) {
            return Some(x);
        }
        let mut c = nodes.len();
        loop {
            if c == 0 {
                return None;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < nodes[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

/// Iterate all maps side → coordinate (n^|side| counters).
fn assignments(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur = vec![0usize; k];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut c = k;
        loop {
            if c == 0 {
                done = true;
                break;
            }
            c -= 1;
            cur[c] += 1;
            if cur[c] < n {
                break;
            }
            cur[c] = 0;
        }
        Some(out)
    })
}

/// |B| ≤ 3: guess, for every b, a coordinate σ(b) where the witness will
/// escape b. The escape sets U_i = Q_i ∖ ⋃ b_i⁻ are up-closed, so any
/// witness can be pushed down to a product of their minimal elements
/// (unconstrained coordinates to the slice minimum) without entering A⁺.
fn pd_few_b(ctx: &Ctx, q: &Slices, a: &[Element], b: &[Element]) -> Option<Element> {
    let n = q.len();
    'sigma: for sigma in assignments(n, b.len()) {
        let mut cand_nodes: Vec<Vec<NodeId>> = Vec::with_capacity(n);
        for i in 0..n {
            let constrained: Vec<&Element> =
                b.iter().zip(&sigma).filter(|&(_, &s)| s == i).map(|(bb, _)| bb).collect();
            if constrained.is_empty() {
                cand_nodes.push(vec![slice_min(&q[i])]);
                continue;
            }
            let mut u = q[i].clone();
            for bb in constrained {
                u.difference_with(ctx.p.factor(i).down_set(bb[i]));
            }
            if u.count_ones(..) == 0 {
                continue 'sigma;
            }
            cand_nodes.push(minimal_of(ctx.p.factor(i), &u));
        }
        let mut idx = vec![0usize; n];
        loop {
            let x: Element = idx.iter().zip(&cand_nodes).map(|(&i, ns)| ns[i]).collect();
            // Escape from every b is guaranteed by construction; only A
            // containment needs checking.
            debug_assert!(b.iter().all(|bb| !ctx.p.leq(&x, bb)));
            if a.iter().all(|aa| !ctx.p.leq(aa, &x)) {
                return Some(x);
            }
            let mut c = n;
            loop {
                if c == 0 {
                    continue 'sigma;
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < cand_nodes[c].len() {
                    break;
                }
                idx[c] = 0;
            }
        }
    }
    None
}

/// |A| ≤ 3: guess, for every a, a coordinate σ(a) where the witness stays
/// below a. The stay sets W_i = Q_i ∖ ⋃ a_i⁺ are down-closed, so witnesses
/// normalize up to combinations of their maximal elements. Each b ∈ B
/// dominates at most one combination (its coordinate chains b_i⁻ meet the
/// antichain Max(W_i) at most once), so a witness exists iff fewer than
/// ∏|Max(W_i)| distinct combinations are dominated.
fn pd_few_a(ctx: &Ctx, q: &Slices, a: &[Element], b: &[Element]) -> Option<Element> {
    let n = q.len();
    'sigma: for sigma in assignments(n, a.len()) {
        let mut maxs: Vec<Vec<NodeId>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut w = q[i].clone();
            for (aa, &s) in a.iter().zip(&sigma) {
                if s == i {
                    w.difference_with(ctx.p.factor(i).up_set(aa[i]));
                }
            }
            if w.count_ones(..) == 0 {
                continue 'sigma;
            }
            maxs.push(maximal_of(ctx.p.factor(i), &w));
        }
        let total: u128 = maxs.iter().fold(1u128, |acc, m| acc.saturating_mul(m.len() as u128));
        let mut covered: HashSet<Element> = HashSet::new();
        'next_b: for bb in b {
            let mut tuple = Vec::with_capacity(n);
            for i in 0..n {
                let down = ctx.p.factor(i).down_set(bb[i]);
                let mut hits = maxs[i].iter().copied().filter(|&m| down.contains(m as usize));
                match (hits.next(), hits.next()) {
                    (Some(m), None) => tuple.push(m),
                    (None, _) => continue 'next_b, // b dominates no combination
                    (Some(_), Some(_)) => unreachable!("antichain meets a chain at most once"),
                }
            }
            covered.insert(tuple);
        }
        if (covered.len() as u128) >= total {
            continue 'sigma;
        }
        // Extract an uncovered combination coordinate by coordinate,
        // descending wherever the covered count cannot exhaust the
        // remaining product.
        let mut prefix: Element = Vec::with_capacity(n);
        let mut pool: Vec<&Element> = covered.iter().collect();
        for i in 0..n {
            let remaining: u128 = maxs[i + 1..]
                .iter()
                .fold(1u128, |acc, m| acc.saturating_mul(m.len() as u128));
            let mut chosen = None;
            for &m in &maxs[i] {
                let matching = pool.iter().filter(|t| t[i] == m).count() as u128;
                if matching < remaining {
                    chosen = Some(m);
                    break;
                }
            }
            let m = chosen.expect("an uncovered branch must exist");
            pool.retain(|t| t[i] == m);
            prefix.push(m);
        }
        debug_assert!(is_witness(ctx.p, a, b, &prefix));
        return Some(prefix);
    }
    None
}

/// The recursive decomposition. Returns a witness in Q ∖ (A⁺ ∪ B⁻), or
/// None when A and B are dual in Q.
fn fdtb(ctx: &Ctx, q: &Slices, a: &[Element], b: &[Element], depth: usize) -> Result<Option<Element>> {
    if depth > ctx.cfg.max_depth {
        return Err(MineError::resource(format!(
            "dualization recursion exceeded depth {}",
            ctx.cfg.max_depth
        )));
    }
    let a = restrict_project_a(ctx.p, q, a);
    let b = restrict_project_b(ctx.p, q, b);
    if a.len().min(b.len()) <= 3 {
        return pd(ctx, q, &a, &b);
    }
    // Pick a violated pair and coordinate: projections preserve a ⋠ b.
    let (pa, pb) = (&a[0], &b[0]);
    let i = (0..q.len())
        .find(|&i| !ctx.p.factor(i).leq(pa[i], pb[i]))
        .expect("antichains satisfy the duality precondition");
    let ai = pa[i];
    let fi = ctx.p.factor(i);
    let v = (a.len() * b.len()) as f64;
    let eps = epsilon(v);
    let eps_a = a.iter().filter(|x| fi.leq(ai, x[i])).count() as f64 / a.len() as f64;
    let eps_b = b.iter().filter(|x| !fi.leq(ai, x[i])).count() as f64 / b.len() as f64;

    let q_up = up_in(fi, &q[i], ai); // Q_i′
    let mut q_rest = q[i].clone(); // Q_i″
    q_rest.difference_with(&q_up);
    debug_assert!(q_rest.count_ones(..) > 0, "b_i ∈ Q_i lies outside a_i⁺");

    let with_slice = |slice: FixedBitSet| {
        let mut nq = q.clone();
        nq[i] = slice;
        nq
    };

    if eps_a.min(eps_b) > eps {
        // Balanced: split factor i into a_i⁺ and the rest.
        if let Some(w) = fdtb(ctx, &with_slice(q_up), &a, &b, depth + 1)? {
            return Ok(Some(w));
        }
        return fdtb(ctx, &with_slice(q_rest), &a, &b, depth + 1);
    }

    let pai = parent_in_slice(fi, &q[i], ai).expect("a_i is not the slice minimum");
    if eps_b <= eps {
        // Few b escape through coordinate i: recurse on the subtree
        // components away from p(a_i)⁻, then handle the chain below
        // p(a_i) under each a′ that can reach it.
        let q0 = down_in(fi, &q[i], pai);
        let mut residue = q[i].clone();
        residue.difference_with(&q0);
        for comp in components_of(fi, &residue) {
            if let Some(w) = fdtb(ctx, &with_slice(comp), &a, &b, depth + 1)? {
                return Ok(Some(w));
            }
        }
        for aprime in a.iter().filter(|x| fi.leq(x[i], ai)) {
            let mut nq = with_slice(q0.clone());
            for (j, slice) in nq.iter_mut().enumerate() {
                if j != i {
                    slice.intersect_with(ctx.p.factor(j).up_set(aprime[j]));
                }
            }
            if let Some(w) = fdtb(ctx, &nq, &a, &b, depth + 1)? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }

    // Few a stay inside a_i⁺: solve the outside first, then pin each
    // x ∈ Q_i′ in topological order against the b's reachable from its
    // parent.
    if let Some(w) = fdtb(ctx, &with_slice(q_rest), &a, &b, depth + 1)? {
        return Ok(Some(w));
    }
    for xj in q_up.ones().map(|x| x as NodeId) {
        let pxj = parent_in_slice(fi, &q[i], xj).expect("a_i⁺ excludes the slice minimum");
        for bb in b.iter().filter(|x| fi.leq(pxj, x[i])) {
            let mut single = FixedBitSet::with_capacity(fi.len());
            single.insert(xj as usize);
            let mut nq = with_slice(single);
            for (j, slice) in nq.iter_mut().enumerate() {
                if j != i {
                    slice.intersect_with(ctx.p.factor(j).down_set(bb[j]));
                }
            }
            if let Some(w) = fdtb(ctx, &nq, &a, &b, depth + 1)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Decide DUAL(P, A, B) and produce a witness when the union is not a
/// cover. A and B must satisfy the precondition a ⋠ b for all pairs; all
/// factors must be tree-shaped.
pub fn dual_check(
    p: &ProductPoset,
    a: &[Element],
    b: &[Element],
    cfg: &DualizeCfg,
) -> Result<DualOutcome> {
    if !p.all_tree_factors() {
        return Err(MineError::NotDualizable(
            "duality testing requires tree-shaped factors (chains, bottomed antichains, taxonomies)"
                .into(),
        ));
    }
    for (ia, aa) in a.iter().enumerate() {
        for (ib, bb) in b.iter().enumerate() {
            if p.leq(aa, bb) {
                return Err(MineError::config(format!(
                    "duality precondition violated: A[{ia}] ⪯ B[{ib}]"
                )));
            }
        }
    }
    let q: Slices = p
        .factors()
        .iter()
        .map(|f| {
            let mut s = FixedBitSet::with_capacity(f.len());
            s.insert_range(..);
            s
        })
        .collect();
    let ctx = Ctx { p, cfg };
    match fdtb(&ctx, &q, a, b, 0)? {
        Some(w) => {
            debug_assert!(is_witness(p, a, b, &w), "witness fails the escape conditions");
            Ok(DualOutcome::Witness(w))
        }
        None => Ok(DualOutcome::Dual),
    }
}
