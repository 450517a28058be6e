//! Association-rule generation: irredundant rules over itemsets, their
//! generalization to poset products (taxonomies, quantitative intervals,
//! signed items), and rare rules mined between two support thresholds.
//!
//! All variants share one engine: for each qualifying consequent `z`
//! (processed by descending level), the antecedent candidates live in the
//! subcube that keeps or drops each active attribute of `z` whole, and the
//! minimal antecedents are exactly the minimal infrequent elements of that
//! subcube at threshold ⌊support(z)/c⌋ + 1. Minimal sets are inherited
//! from the already-processed supersets of `z` both as seeds and as the
//! emission filter, so every rule surfaces at its unique maximal `z`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::apriori::{apriori_frequent, LevelCaps};
use crate::dataset::{SupportOracle, TransactionDb};
use crate::dualize::DualizeCfg;
use crate::enumerate::{generate_borders, generate_minimal_infrequent};
use crate::errors::{MineError, Result};
use crate::poset::{Element, FactorPoset, ProductPoset};
use crate::{ceil_snap, floor_snap};

/// An association rule antecedent ⇒ consequent∖antecedent, stored as the
/// antecedent element x and the full consequent element z with x ⪯ z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    /// The kept part x; coordinates are either z's or the factor bottom.
    pub antecedent: Element,
    /// The full mined element z (the displayed consequent is z beyond x).
    pub consequent: Element,
    /// |S_D(x)|
    pub antecedent_support: usize,
    /// |S_D(z)|
    pub consequent_support: usize,
    /// |D|
    pub db_size: usize,
}

impl Rule {
    /// Fraction of transactions supporting the whole rule.
    pub fn support(&self) -> f64 {
        self.consequent_support as f64 / self.db_size as f64
    }

    /// Fraction of antecedent supporters that support the consequent.
    pub fn confidence(&self) -> f64 {
        self.consequent_support as f64 / self.antecedent_support as f64
    }
}

/// True when `r2` is a logical consequence of `r1`: r2's antecedent
/// assumes at least as much and r2's conclusion claims no more.
pub fn check_rule_implication(space: &ProductPoset, r1: &Rule, r2: &Rule) -> bool {
    space.leq(&r1.antecedent, &r2.antecedent) && space.leq(&r2.consequent, &r1.consequent)
}

/// Thresholds for rare-rule mining: qualifying consequents have support
/// between s1·|D| and s2·|D|.
#[derive(Clone, Copy, Debug)]
pub struct RareRuleConfig {
    pub s1: f64,
    pub s2: f64,
    pub confidence: f64,
}

fn validate_fraction(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(MineError::config(format!("{name} must lie in (0, 1], got {v}")));
    }
    Ok(())
}

/// Support oracle restricted to a fixed subset of transactions.
struct FilteredOracle<'a> {
    db: &'a TransactionDb,
    rows: FixedBitSet,
}

impl SupportOracle for FilteredOracle<'_> {
    fn space(&self) -> &ProductPoset {
        self.db.space()
    }

    fn db_size(&self) -> usize {
        self.rows.count_ones(..)
    }

    fn support(&self, p: &Element) -> usize {
        let mut m = self.db.support_mask(p);
        m.intersect_with(&self.rows);
        m.count_ones(..)
    }
}

/// The antecedent search space of a consequent z: one two-element chain
/// per active attribute ("drop to bottom" versus "keep z's value"), so
/// attributes spanning several encoded factors move as a unit. Supports
/// are evaluated against the full database.
struct SubcubeOracle<'a> {
    db: &'a TransactionDb,
    z: &'a Element,
    /// (first factor, factor count) of each active attribute of z.
    spans: Vec<(usize, usize)>,
    space: ProductPoset,
}

impl<'a> SubcubeOracle<'a> {
    fn new(db: &'a TransactionDb, z: &'a Element) -> Result<Self> {
        let mut spans = Vec::new();
        let mut chains = Vec::new();
        for attr in db.attrs() {
            let lo = attr.first_factor;
            let hi = lo + attr.factor_count();
            if z[lo..hi].iter().any(|&v| v != 0) {
                spans.push((lo, hi - lo));
                chains.push(FactorPoset::chain(vec!["-".into(), attr.name.clone()])?);
            }
        }
        Ok(SubcubeOracle { db, z, spans, space: ProductPoset::new(chains)? })
    }

    /// Lift a subcube element (one keep/drop bit per active attribute)
    /// back into the full space.
    fn expand(&self, bits: &Element) -> Element {
        let mut x = vec![0; self.z.len()];
        for (&bit, &(lo, len)) in bits.iter().zip(&self.spans) {
            if bit == 1 {
                x[lo..lo + len].copy_from_slice(&self.z[lo..lo + len]);
            }
        }
        x
    }

    /// Inverse of `expand`; None when x moves some attribute to anything
    /// other than z's value or the bottom.
    fn project(&self, x: &Element) -> Option<Element> {
        let mut bits = Vec::with_capacity(self.spans.len());
        let mut seen = vec![false; x.len()];
        for &(lo, len) in &self.spans {
            let span = &x[lo..lo + len];
            if span == &self.z[lo..lo + len] {
                bits.push(1);
            } else if span.iter().all(|&v| v == 0) {
                bits.push(0);
            } else {
                return None;
            }
            for s in seen[lo..lo + len].iter_mut() {
                *s = true;
            }
        }
        // Inactive attributes must stay at the bottom.
        if x.iter().zip(&seen).any(|(&v, &s)| v != 0 && !s) {
            return None;
        }
        Some(bits)
    }
}

impl SupportOracle for SubcubeOracle<'_> {
    fn space(&self) -> &ProductPoset {
        &self.space
    }

    fn db_size(&self) -> usize {
        self.db.db_size()
    }

    fn support(&self, p: &Element) -> usize {
        self.db.support(&self.expand(p))
    }
}

/// Shared rule engine: `family` holds the qualifying consequents with
/// their supports (frequent elements for ordinary rules, the support
/// window for rare rules). Emits each minimal antecedent at the unique
/// largest consequent it belongs to.
fn rules_over_family(
    db: &TransactionDb,
    family: Vec<(Element, usize)>,
    c: f64,
    dcfg: &DualizeCfg,
) -> Result<Vec<Rule>> {
    let space = db.space();
    let all_tree = space.all_tree_factors();
    let mut by_level: BTreeMap<u32, Vec<(Element, usize)>> = BTreeMap::new();
    for (z, s) in family {
        by_level.entry(space.level(&z)).or_default().push((z, s));
    }
    let family_members: HashSet<Element> =
        by_level.values().flatten().map(|(z, _)| z.clone()).collect();
    let mut xsets: HashMap<Element, Vec<Element>> = HashMap::new();
    let mut rules = Vec::new();
    for (_, mut zs) in by_level.into_iter().rev() {
        zs.sort();
        let mut level_xsets: HashMap<Element, Vec<Element>> = HashMap::new();
        for (z, s_z) in zs {
            let oracle = SubcubeOracle::new(db, &z)?;
            let t_prime = floor_snap(s_z as f64 / c) as usize + 1;
            // Minimal antecedents of already-processed supersets that fit
            // this subcube seed the generator and are barred from emission.
            let mut inherited: BTreeSet<Element> = BTreeSet::new();
            for z_up in space.immediate_successors(&z) {
                if !family_members.contains(&z_up) {
                    continue;
                }
                for x in xsets.get(&z_up).map(Vec::as_slice).unwrap_or(&[]) {
                    if oracle.project(x).is_some() {
                        inherited.insert(x.clone());
                    }
                }
            }
            let seeds: Vec<Element> =
                inherited.iter().map(|x| oracle.project(x).expect("filtered above")).collect();
            let border = generate_borders(&oracle, t_prime, &seeds, dcfg)?;
            let minimal: Vec<Element> =
                border.minimal_infrequent.iter().map(|b| oracle.expand(b)).collect();
            for x in &minimal {
                if !inherited.contains(x) {
                    rules.push(Rule {
                        antecedent: x.clone(),
                        consequent: z.clone(),
                        antecedent_support: db.support(x),
                        consequent_support: s_z,
                        db_size: db.db_size(),
                    });
                }
            }
            level_xsets.insert(z, minimal);
        }
        if all_tree {
            // Hasse steps raise the level by exactly one on tree factors,
            // so only the level just processed can seed the next one.
            xsets = level_xsets;
        } else {
            xsets.extend(level_xsets);
        }
    }
    rules.sort_by(|a, b| {
        (space.level(&a.consequent), &a.consequent, space.level(&a.antecedent), &a.antecedent)
            .cmp(&(space.level(&b.consequent), &b.consequent, space.level(&b.antecedent), &b.antecedent))
    });
    Ok(rules)
}

/// Mine the irredundant rules of a database at minimum support `s` and
/// minimum confidence `c` (both fractions of |D| and of the antecedent
/// support respectively).
pub fn gen_generalized_rules(
    db: &TransactionDb,
    c: f64,
    s: f64,
    caps: &LevelCaps,
    dcfg: &DualizeCfg,
) -> Result<Vec<Rule>> {
    validate_fraction("confidence", c)?;
    validate_fraction("support", s)?;
    let t = ceil_snap(s * db.db_size() as f64) as usize;
    let family: Vec<(Element, usize)> = apriori_frequent(db, t, caps)?
        .into_iter()
        .filter(|item| item.level >= 1)
        .filter(|item| db.canonical_form(&item.element).as_ref() == Some(&item.element))
        .map(|item| (item.element, item.support))
        .collect();
    rules_over_family(db, family, c, dcfg)
}

/// Irredundant rules over a plain itemset database; the two-element
/// factors make the generalized engine coincide with the classical
/// procedure.
pub fn gen_rules(
    db: &TransactionDb,
    c: f64,
    s: f64,
    caps: &LevelCaps,
    dcfg: &DualizeCfg,
) -> Result<Vec<Rule>> {
    gen_generalized_rules(db, c, s, caps, dcfg)
}

/// The rare-rule consequent family: every element supported by at least
/// s1·|D| and at most s2·|D| transactions, found by descending from the
/// minimal sets under the upper threshold and re-mining upward inside
/// their supporting transactions.
fn rare_family(
    db: &TransactionDb,
    cfg: &RareRuleConfig,
    caps: &LevelCaps,
    dcfg: &DualizeCfg,
) -> Result<BTreeMap<Element, usize>> {
    let n = db.db_size();
    // Sets supported by at most s2·|D| rows are exactly the infrequent
    // ones at this threshold.
    let t_hi = floor_snap(cfg.s2 * n as f64) as usize + 1;
    let rare_roots = generate_minimal_infrequent(db, t_hi, dcfg)?.minimal_infrequent;
    let t_lo = ceil_snap(cfg.s1 * n as f64) as usize;
    let mut family: BTreeMap<Element, usize> = BTreeMap::new();
    for root in &rare_roots {
        // Mining above `root` within its supporting transactions keeps
        // full-database supports for every superset of root.
        let oracle = FilteredOracle { db, rows: db.support_mask(root) };
        for item in apriori_frequent(&oracle, t_lo, caps)? {
            if !db.space().leq(root, &item.element) {
                continue;
            }
            if db.canonical_form(&item.element).as_ref() != Some(&item.element) {
                continue;
            }
            debug_assert!(
                item.support as f64 >= cfg.s1 * n as f64 - 1e-9
                    && item.support as f64 <= cfg.s2 * n as f64 + 1e-9,
                "qualifying sets must sit inside the support window"
            );
            family.insert(item.element, item.support);
        }
    }
    Ok(family)
}

/// Mine rules whose consequents are rare: supported by at least s1·|D|
/// but at most s2·|D| transactions.
pub fn gen_rare_rules(
    db: &TransactionDb,
    cfg: &RareRuleConfig,
    caps: &LevelCaps,
    dcfg: &DualizeCfg,
) -> Result<Vec<Rule>> {
    validate_fraction("confidence", cfg.confidence)?;
    if !(cfg.s1 > 0.0 && cfg.s2 < 1.0 && cfg.s1 < cfg.s2) {
        return Err(MineError::config(format!(
            "rare-rule thresholds require 0 < s1 < s2 < 1, got s1 = {}, s2 = {}",
            cfg.s1, cfg.s2
        )));
    }
    let family = rare_family(db, cfg, caps, dcfg)?;
    rules_over_family(db, family.into_iter().collect(), cfg.confidence, dcfg)
}
