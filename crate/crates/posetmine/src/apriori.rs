//! Level-wise enumeration of frequent and infrequent elements.
//!
//! The ascending search grows frontiers F_k = {x : d(x) = k, support ≥ t}
//! from the product minimum, where d(x) is the longest path from the
//! bottom(s). The descending variant runs the same engine on the reversed
//! precedence graph, seeded from every maximal element, and collects the
//! infrequent elements (an up-closed family, so the walk from the maxima
//! is complete).

use std::collections::HashSet;

use rayon::prelude::*;

use crate::dataset::SupportOracle;
use crate::errors::{MineError, Result};
use crate::poset::{Element, ProductPoset};

/// Memory guards for the level-wise search.
#[derive(Clone, Copy, Debug)]
pub struct LevelCaps {
    /// Maximum number of elements retained in one frontier.
    pub level_width: usize,
    /// Maximum number of frontier steps.
    pub depth: usize,
}

impl Default for LevelCaps {
    fn default() -> Self {
        LevelCaps { level_width: 10_000_000, depth: 10_000 }
    }
}

/// One emitted element with its search level and support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelItem {
    pub element: Element,
    pub level: u32,
    pub support: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// From the bottom upward; level = longest path from the minimum.
    Ascending,
    /// From the maxima downward; level = longest path from a maximal
    /// element.
    Descending,
}

impl Direction {
    fn level(self, space: &ProductPoset, x: &Element) -> u32 {
        match self {
            Direction::Ascending => space.level(x),
            Direction::Descending => space.colevel(x),
        }
    }

    /// One Hasse step in the walk direction.
    fn forward(self, space: &ProductPoset, x: &Element) -> Vec<Element> {
        match self {
            Direction::Ascending => space.immediate_successors(x),
            Direction::Descending => space.immediate_predecessors(x),
        }
    }

    /// One Hasse step back toward the seeds.
    fn backward(self, space: &ProductPoset, x: &Element) -> Vec<Element> {
        match self {
            Direction::Ascending => space.immediate_predecessors(x),
            Direction::Descending => space.immediate_successors(x),
        }
    }
}

/// All next-level candidates generated by a frontier: elements one step
/// forward at level k+1 whose every level-k backward neighbor lies in the
/// frontier. Returned sorted and deduplicated.
fn candidates_dir(
    space: &ProductPoset,
    frontier: &[Element],
    k: u32,
    dir: Direction,
) -> Vec<Element> {
    let in_frontier: HashSet<&Element> = frontier.iter().collect();
    let mut out: Vec<Element> = Vec::new();
    let mut seen: HashSet<Element> = HashSet::new();
    for x in frontier {
        for y in dir.forward(space, x) {
            if dir.level(space, &y) != k + 1 || seen.contains(&y) {
                continue;
            }
            let closed = dir
                .backward(space, &y)
                .into_iter()
                .filter(|z| dir.level(space, z) == k)
                .all(|z| in_frontier.contains(&z));
            if closed {
                seen.insert(y.clone());
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Ascending candidate generation (exposed for direct testing): level-(k+1)
/// successors of the frontier whose level-k predecessors are all present.
pub fn candidates(space: &ProductPoset, frontier: &[Element], k: u32) -> Vec<Element> {
    candidates_dir(space, frontier, k, Direction::Ascending)
}

/// Filter a candidate set by support ≥ t (one batched scan, parallel over
/// candidates, deterministic order).
pub fn prune<O: SupportOracle>(db: &O, cands: Vec<Element>, t: usize) -> Vec<(Element, usize)> {
    cands
        .into_par_iter()
        .map(|c| {
            let s = db.support(&c);
            (c, s)
        })
        .filter(|&(_, s)| s >= t)
        .collect()
}

fn run_levelwise<O: SupportOracle>(
    db: &O,
    seeds: Vec<Element>,
    keep: impl Fn(usize) -> bool + Sync,
    dir: Direction,
    caps: &LevelCaps,
) -> Result<Vec<LevelItem>> {
    let space = db.space();
    let mut out: Vec<LevelItem> = Vec::new();
    let mut frontier: Vec<Element> = seeds;
    frontier.sort_unstable();
    frontier.dedup();
    let mut k: u32 = 0;
    while !frontier.is_empty() {
        if frontier.len() > caps.level_width {
            return Err(MineError::resource(format!(
                "level {k} holds {} elements (cap {})",
                frontier.len(),
                caps.level_width
            )));
        }
        if k as usize > caps.depth {
            return Err(MineError::resource(format!("search depth exceeds {}", caps.depth)));
        }
        let cands = candidates_dir(space, &frontier, k, dir);
        // Emit the current frontier (the seeds level is emitted filtered;
        // deeper frontiers are already support-filtered).
        for x in &frontier {
            let s = db.support(x);
            if keep(s) {
                out.push(LevelItem { element: x.clone(), level: dir.level(space, x), support: s });
            }
        }
        let kept: Vec<(Element, usize)> = cands
            .into_par_iter()
            .map(|c| {
                let s = db.support(&c);
                (c, s)
            })
            .filter(|&(_, s)| keep(s))
            .collect();
        frontier = kept.into_iter().map(|(c, _)| c).collect();
        k += 1;
    }
    Ok(out)
}

/// All t-frequent elements, grouped by level (longest path from the
/// bottom), lexicographic within a level. The bottom appears iff it is
/// itself frequent; everything else is reachable through frequent
/// immediate predecessors (downward closure).
pub fn apriori_frequent<O: SupportOracle>(db: &O, t: usize, caps: &LevelCaps) -> Result<Vec<LevelItem>> {
    let bottom = db.space().bottom()?;
    // The bottom seeds the search unconditionally; if it is infrequent no
    // level-1 candidate survives pruning and the output is empty.
    run_levelwise(db, vec![bottom], |s| s >= t, Direction::Ascending, caps)
}

/// All t-infrequent elements (support < t), grouped by co-level (longest
/// path from a maximal element), lexicographic within a level. Infrequency
/// is up-closed, so the walk descends from every maximal element.
pub fn apriori_infrequent<O: SupportOracle>(db: &O, t: usize, caps: &LevelCaps) -> Result<Vec<LevelItem>> {
    if t == 0 {
        return Ok(Vec::new()); // nothing has support < 0
    }
    let seeds = db.space().maximal_elements();
    run_levelwise(db, seeds, |s| s < t, Direction::Descending, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::{itemset, table1, table3};
    use crate::dataset::TransactionDb;
    use crate::poset::Element;
    use proptest::prelude::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn chain_db(sizes: &[usize], rows: Vec<Element>) -> TransactionDb {
        let spec = sizes
            .iter()
            .enumerate()
            .map(|(i, &m)| (format!("c{i}"), labels(m)))
            .collect();
        TransactionDb::from_chains(spec, rows).unwrap()
    }

    #[test]
    fn threshold_above_db_size_gives_empty_output() {
        let db = table1();
        let out = apriori_frequent(&db, 11, &LevelCaps::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn bottom_emitted_iff_frequent() {
        let db = table1();
        let out = apriori_frequent(&db, 10, &LevelCaps::default()).unwrap();
        assert_eq!(out[0].element, vec![0; 6]);
        assert_eq!(out[0].support, 10);
    }

    #[test]
    fn empty_frontier_yields_no_candidates() {
        let db = table1();
        assert!(candidates(db.space(), &[], 0).is_empty());
    }

    #[test]
    fn boolean_cube_singleton_frontier_joins_to_pairs() {
        let db = table1();
        let singles: Vec<Element> = (0..6)
            .map(|i| {
                let mut e = vec![0; 6];
                e[i] = 1;
                e
            })
            .collect();
        let pairs = candidates(db.space(), &singles, 1);
        assert_eq!(pairs.len(), 15);
        assert!(pairs.iter().all(|p| p.iter().sum::<u32>() == 2));
    }

    #[test]
    fn prune_on_two_itemsets_keeps_the_supported_ones() {
        let db = table1();
        let singles: Vec<Element> = (0..6)
            .map(|i| {
                let mut e = vec![0; 6];
                e[i] = 1;
                e
            })
            .collect();
        let pairs = candidates(db.space(), &singles, 1);
        let kept = prune(&db, pairs, 4);
        let bread_butter = itemset(&db, &["Bread", "Butter"]);
        assert!(kept.iter().any(|(e, s)| e == &bread_butter && *s == 8));
        // Every pair clears t = 4 on this database; the first failures are
        // triples such as {Bread, Cheese, Milk} with support 3.
        assert_eq!(kept.len(), 15);
        let bcm = itemset(&db, &["Bread", "Cheese", "Milk"]);
        assert!(prune(&db, vec![bcm], 4).is_empty());
    }

    #[test]
    fn hierarchy_database_frequent_and_infrequent_examples() {
        let db = table3();
        let clothes = db.space().factor(0);
        let footwear = db.space().factor(1);
        let outwear = clothes.node_by_label("Outwear").unwrap();
        let jacket = clothes.node_by_label("Jacket").unwrap();
        let hiking = footwear.node_by_label("Hiking Boots").unwrap();
        let fw = footwear.node_by_label("Footwear").unwrap();

        let freq = apriori_frequent(&db, 2, &LevelCaps::default()).unwrap();
        assert!(freq.iter().any(|it| it.element == vec![outwear, hiking]));

        let infreq = apriori_infrequent(&db, 2, &LevelCaps::default()).unwrap();
        assert!(infreq.iter().any(|it| it.element == vec![jacket, fw]));
        // Nothing is infrequent at t = 0.
        assert!(apriori_infrequent(&db, 0, &LevelCaps::default()).unwrap().is_empty());
    }

    #[test]
    fn emission_is_level_grouped_and_lexicographic() {
        let db = table1();
        let out = apriori_frequent(&db, 4, &LevelCaps::default()).unwrap();
        for w in out.windows(2) {
            assert!(w[0].level <= w[1].level);
            if w[0].level == w[1].level {
                assert!(w[0].element < w[1].element);
            }
        }
        // Downward closure: each non-bottom output has an emitted
        // immediate predecessor.
        let emitted: HashSet<&Element> = out.iter().map(|it| &it.element).collect();
        for it in &out {
            if it.level == 0 {
                continue;
            }
            assert!(db
                .space()
                .immediate_predecessors(&it.element)
                .iter()
                .any(|p| emitted.contains(p)));
        }
    }

    #[test]
    fn level_width_cap_is_enforced() {
        let db = table1();
        let caps = LevelCaps { level_width: 3, depth: 10_000 };
        let err = apriori_frequent(&db, 1, &caps).unwrap_err();
        assert!(err.to_string().contains("cap"), "{err}");
    }

    fn brute_frequent(db: &TransactionDb, t: usize) -> Vec<Element> {
        db.space()
            .elements()
            .filter(|x| crate::dataset::SupportOracle::support(db, x) >= t)
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn frequent_matches_brute_force_on_chain_products(
            rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 3), 1..8),
            t in 0usize..9,
        ) {
            let db = chain_db(&[3, 3, 3], rows);
            let got: Vec<Element> =
                apriori_frequent(&db, t, &LevelCaps::default()).unwrap().into_iter().map(|i| i.element).collect();
            let mut want = brute_frequent(&db, t);
            want.sort_unstable_by_key(|x| (db.space().level(x), x.clone()));
            prop_assert_eq!(got, want);
        }

        #[test]
        fn infrequent_is_the_exact_complement(
            rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 3), 1..8),
            t in 0usize..9,
        ) {
            let db = chain_db(&[3, 3, 3], rows);
            let freq: HashSet<Element> =
                apriori_frequent(&db, t, &LevelCaps::default()).unwrap().into_iter().map(|i| i.element).collect();
            let infreq: HashSet<Element> =
                apriori_infrequent(&db, t, &LevelCaps::default()).unwrap().into_iter().map(|i| i.element).collect();
            prop_assert!(freq.is_disjoint(&infreq));
            prop_assert_eq!(freq.len() + infreq.len(), 27);
        }

        #[test]
        fn frontier_levels_and_supports_are_exact(
            rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 2), 1..6),
            t in 1usize..7,
        ) {
            let db = chain_db(&[3, 3], rows);
            for it in apriori_frequent(&db, t, &LevelCaps::default()).unwrap() {
                prop_assert_eq!(it.level, db.space().level(&it.element));
                prop_assert_eq!(it.support, crate::dataset::SupportOracle::support(&db, &it.element));
                prop_assert!(it.support >= t);
            }
            for it in apriori_infrequent(&db, t, &LevelCaps::default()).unwrap() {
                prop_assert_eq!(it.level, db.space().colevel(&it.element));
                prop_assert!(it.support < t);
            }
        }
    }

    use std::collections::HashSet;
}
