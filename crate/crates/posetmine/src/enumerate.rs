//! Joint generation of the minimal infrequent and maximal frequent borders
//! by repeated duality testing: every witness of a non-dual pair is walked
//! to the border it belongs to and added, until the two antichains cover
//! the whole space.

use crate::dataset::SupportOracle;
use crate::dualize::{dual_check, DualOutcome, DualizeCfg};
use crate::errors::Result;
use crate::poset::Element;

/// The two borders of the frequency landscape at threshold `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Border {
    /// Antichain of elements with support < t whose immediate predecessors
    /// all have support ≥ t.
    pub minimal_infrequent: Vec<Element>,
    /// Antichain of elements with support ≥ t whose immediate successors
    /// all have support < t.
    pub maximal_frequent: Vec<Element>,
}

/// Sort key shared by all border output: structural level, then
/// coordinates lexicographically.
fn canonical_sort(space: &crate::poset::ProductPoset, items: &mut [Element]) {
    items.sort_by_key(|x| (space.level(x), x.clone()));
}

/// Descend from an infrequent element to a minimal infrequent one.
///
/// Coordinates are scanned cyclically; within a coordinate the immediate
/// predecessors are tried in ascending node id and the first step that
/// stays infrequent is taken. The walk is a fixpoint iteration, so the
/// result is canonical for a given input.
pub fn minimalize<O: SupportOracle>(db: &O, t: usize, x: Element) -> Element {
    debug_assert!(db.support(&x) < t, "minimalize requires an infrequent start");
    let space = db.space();
    let n = space.factors().len();
    let mut cur = x;
    let mut idle = 0;
    let mut i = 0;
    while idle < n {
        let mut preds: Vec<_> = space.factor(i).immediate_predecessors(cur[i]).to_vec();
        preds.sort_unstable();
        let step = preds.into_iter().find(|&p| {
            let mut cand = cur.clone();
            cand[i] = p;
            db.support(&cand) < t
        });
        match step {
            Some(p) => {
                cur[i] = p;
                idle = 0;
            }
            None => idle += 1,
        }
        i = (i + 1) % n;
    }
    cur
}

/// Ascend from a frequent element to a maximal frequent one; the mirror
/// image of `minimalize`.
pub fn maximalize<O: SupportOracle>(db: &O, t: usize, x: Element) -> Element {
    debug_assert!(db.support(&x) >= t, "maximalize requires a frequent start");
    let space = db.space();
    let n = space.factors().len();
    let mut cur = x;
    let mut idle = 0;
    let mut i = 0;
    while idle < n {
        let succs = space.factor(i).immediate_successors(cur[i]);
        let step = succs.iter().copied().find(|&s| {
            let mut cand = cur.clone();
            cand[i] = s;
            db.support(&cand) >= t
        });
        match step {
            Some(s) => {
                cur[i] = s;
                idle = 0;
            }
            None => idle += 1,
        }
        i = (i + 1) % n;
    }
    cur
}

/// Grow both borders from optional starting points. Each seed is walked to
/// whichever border it belongs to, so non-extremal (or even frequent)
/// seeds are harmless. The main loop adds one border element per duality
/// test until the pair becomes dual.
pub fn generate_borders<O: SupportOracle>(
    db: &O,
    t: usize,
    seeds: &[Element],
    cfg: &DualizeCfg,
) -> Result<Border> {
    let space = db.space();
    let mut x: Vec<Element> = Vec::new();
    let mut y: Vec<Element> = Vec::new();
    for seed in seeds {
        if db.support(seed) < t {
            let m = minimalize(db, t, seed.clone());
            if !x.contains(&m) {
                x.push(m);
            }
        } else {
            let m = maximalize(db, t, seed.clone());
            if !y.contains(&m) {
                y.push(m);
            }
        }
    }
    loop {
        match dual_check(space, &x, &y, cfg)? {
            DualOutcome::Dual => break,
            DualOutcome::Witness(w) => {
                if db.support(&w) < t {
                    let m = minimalize(db, t, w);
                    // The witness lies outside X⁺, so its minimalization is
                    // new, and minimal infrequent elements are pairwise
                    // incomparable.
                    debug_assert!(!x.contains(&m));
                    debug_assert!(x.iter().all(|o| !space.leq(o, &m) && !space.leq(&m, o)));
                    x.push(m);
                } else {
                    let m = maximalize(db, t, w);
                    debug_assert!(!y.contains(&m));
                    debug_assert!(y.iter().all(|o| !space.leq(o, &m) && !space.leq(&m, o)));
                    y.push(m);
                }
            }
        }
    }
    // The maximal frequent side obeys |Y| ≤ (|D| + 1 − t)·max(1, |X|)
    // counted over semantically distinct elements, but not over raw
    // vectors: usage-interval spaces encode one empty interval as many
    // incomparable vectors, all collapsing to the same canonical form, so
    // no raw-count assertion is made here (see the usage-space border
    // test).
    canonical_sort(space, &mut x);
    canonical_sort(space, &mut y);
    Ok(Border { minimal_infrequent: x, maximal_frequent: y })
}

/// Compute both frequency borders of `db` at threshold `t`.
pub fn generate_minimal_infrequent<O: SupportOracle>(
    db: &O,
    t: usize,
    cfg: &DualizeCfg,
) -> Result<Border> {
    generate_borders(db, t, &[], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::{itemset, table1, table3};
    use crate::dataset::TransactionDb;
    use crate::poset::{max_antichain, min_antichain, ProductPoset};
    use proptest::prelude::*;

    fn brute_border(db: &TransactionDb, t: usize) -> Border {
        let space = db.space();
        let infreq: Vec<Element> = space.elements().filter(|x| db.support(x) < t).collect();
        let freq: Vec<Element> = space.elements().filter(|x| db.support(x) >= t).collect();
        let mut b = Border {
            minimal_infrequent: min_antichain(space, &infreq),
            maximal_frequent: max_antichain(space, &freq),
        };
        canonical_sort(space, &mut b.minimal_infrequent);
        canonical_sort(space, &mut b.maximal_frequent);
        b
    }

    #[test]
    fn minimalize_keeps_minimal_elements_fixed() {
        let db = table1();
        let start = itemset(&db, &["Bread", "Cheese", "Milk"]);
        assert!(db.support(&start) < 4);
        assert_eq!(minimalize(&db, 4, start.clone()), start);
    }

    #[test]
    fn minimalize_descends_to_a_true_minimal_set() {
        let db = table1();
        let full: Element = db.space().maximal_elements()[0].clone();
        assert_eq!(db.support(&full), 3);
        let m = minimalize(&db, 4, full.clone());
        assert!(db.support(&m) < 4);
        assert!(db.space().leq(&m, &full));
        for pred in db.space().immediate_predecessors(&m) {
            assert!(db.support(&pred) >= 4, "every predecessor of a minimal element is frequent");
        }
    }

    #[test]
    fn maximalize_ascends_to_a_true_maximal_set() {
        let db = table1();
        let bottom = db.space().bottom().unwrap();
        let m = maximalize(&db, 4, bottom);
        assert!(db.support(&m) >= 4);
        for succ in db.space().immediate_successors(&m) {
            assert!(db.support(&succ) < 4, "every successor of a maximal element is infrequent");
        }
    }

    #[test]
    fn table1_borders_match_full_enumeration() {
        let db = table1();
        let got = generate_minimal_infrequent(&db, 4, &DualizeCfg::default()).unwrap();
        let want = brute_border(&db, 4);
        assert_eq!(got, want);
        // The maximal frequent side contains the four-item basket.
        let basket = itemset(&db, &["Bread", "Butter", "Cheese", "Orange Juice"]);
        assert!(got.maximal_frequent.contains(&basket));
        // All minimal infrequent sets at this threshold are triples.
        assert!(got
            .minimal_infrequent
            .iter()
            .all(|x| x.iter().map(|&v| v as usize).sum::<usize>() == 3));
    }

    #[test]
    fn table3_borders_contain_the_expected_pairs() {
        let db = table3();
        let got = generate_minimal_infrequent(&db, 2, &DualizeCfg::default()).unwrap();
        let jacket_footwear = itemset(&db, &["Jacket", "Footwear"]);
        let outwear_boots = itemset(&db, &["Outwear", "Hiking Boots"]);
        assert!(got.minimal_infrequent.contains(&jacket_footwear));
        assert!(got.maximal_frequent.contains(&outwear_boots));
        assert_eq!(got, brute_border(&db, 2));
    }

    #[test]
    fn zero_threshold_yields_only_the_global_maxima() {
        let db = table3();
        let got = generate_minimal_infrequent(&db, 0, &DualizeCfg::default()).unwrap();
        assert!(got.minimal_infrequent.is_empty());
        let mut maxima = db.space().maximal_elements();
        canonical_sort(db.space(), &mut maxima);
        assert_eq!(got.maximal_frequent, maxima);
    }

    #[test]
    fn impossible_threshold_yields_only_the_bottom() {
        let db = table3();
        let t = db.rows().len() + 1;
        let got = generate_minimal_infrequent(&db, t, &DualizeCfg::default()).unwrap();
        assert_eq!(got.minimal_infrequent, vec![db.space().bottom().unwrap()]);
        assert!(got.maximal_frequent.is_empty());
    }

    #[test]
    fn usage_borders_respect_the_dual_bound_up_to_collapse() {
        use crate::dataset::fixtures::table4;
        use std::collections::BTreeSet;
        // Two of the five schedules have days with no usage at all, so at
        // t = |D| no valid interval on those days is frequent and the
        // frequent set is exactly the region of vectors denoting empty
        // intervals everywhere. Its raw maximal elements are the many
        // encodings of one semantic element, so the dual bound
        // |Y| ≤ (|D| + 1 − t)·max(1, |X|) holds for distinct canonical
        // forms but not for raw vectors.
        let db = table4();
        let t = db.rows().len();
        let got = generate_minimal_infrequent(&db, t, &DualizeCfg::default()).unwrap();
        assert_eq!(got, brute_border(&db, t));
        let canonical = |xs: &[Element]| -> BTreeSet<Element> {
            xs.iter()
                .map(|x| db.canonical_form(x).expect("usage vectors always canonicalize"))
                .collect()
        };
        let y = canonical(&got.maximal_frequent);
        let x = canonical(&got.minimal_infrequent);
        assert!(got.maximal_frequent.len() > y.len(), "raw junk encodings are present");
        assert_eq!(x.len(), got.minimal_infrequent.len(), "the minimal side is collapse-free");
        assert!(y.len() <= (db.rows().len() + 1 - t) * x.len().max(1));
        // Here the whole maximal side is one element: no usage anywhere.
        assert_eq!(y.into_iter().collect::<Vec<_>>(), vec![db.space().bottom().unwrap()]);
    }

    #[test]
    fn seeding_with_border_or_junk_changes_nothing() {
        let db = table1();
        let plain = generate_minimal_infrequent(&db, 4, &DualizeCfg::default()).unwrap();
        let seeded = generate_borders(&db, 4, &plain.minimal_infrequent, &DualizeCfg::default()).unwrap();
        assert_eq!(plain, seeded);
        // A non-minimal infrequent seed and a frequent seed are both walked
        // to their borders.
        let junk = vec![
            db.space().maximal_elements()[0].clone(),
            db.space().bottom().unwrap(),
        ];
        let seeded = generate_borders(&db, 4, &junk, &DualizeCfg::default()).unwrap();
        assert_eq!(plain, seeded);
    }

    /// Random small transaction databases over products of chains.
    fn arb_db() -> impl Strategy<Value = TransactionDb> {
        (1usize..=3, 2usize..=3, 1usize..=8).prop_flat_map(|(nf, sz, nrows)| {
            let row = proptest::collection::vec(0u32..sz as u32, nf);
            proptest::collection::vec(row, nrows).prop_map(move |rows| {
                let cols = (0..nf)
                    .map(|i| {
                        (format!("c{i}"), (0..sz).map(|v| format!("v{v}")).collect::<Vec<_>>())
                    })
                    .collect();
                TransactionDb::from_chains(cols, rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn borders_partition_the_space(db in arb_db(), t_off in 0usize..=2) {
            let t = (db.rows().len() + 1).min(1 + t_off * db.rows().len() / 2);
            let border = generate_minimal_infrequent(&db, t, &DualizeCfg::default()).unwrap();
            prop_assert_eq!(&border, &brute_border(&db, t));
            let space: &ProductPoset = db.space();
            for x in space.elements() {
                let below_y = border.maximal_frequent.iter().any(|y| space.leq(&x, y));
                let above_x = border.minimal_infrequent.iter().any(|m| space.leq(m, &x));
                prop_assert!(below_y ^ above_x, "exactly one side must cover {:?}", x);
            }
            // Uniform dual bound, nonvacuous since t ≥ 1.
            let bound = (db.rows().len() + 1 - t) * border.minimal_infrequent.len().max(1);
            prop_assert!(border.maximal_frequent.len() <= bound);
        }

        #[test]
        fn walks_are_extremal(db in arb_db()) {
            let t = db.rows().len() / 2 + 1;
            let space = db.space();
            for x in space.elements() {
                if db.support(&x) < t {
                    let m = minimalize(&db, t, x.clone());
                    prop_assert!(space.leq(&m, &x));
                    prop_assert!(db.support(&m) < t);
                    for p in space.immediate_predecessors(&m) {
                        prop_assert!(db.support(&p) >= t);
                    }
                } else {
                    let m = maximalize(&db, t, x.clone());
                    prop_assert!(space.leq(&x, &m));
                    prop_assert!(db.support(&m) >= t);
                    for s in space.immediate_successors(&m) {
                        prop_assert!(db.support(&s) < t);
                    }
                }
            }
        }
    }
}
