//! Display forms for mined elements and rules.
//!
//! An element renders as one atom per attribute whose slice is above the
//! attribute bottom: bare labels for items and taxonomy nodes, `Name:
//! value` for categorical and chain levels, `Name: lo..hi` for value
//! ranges, and `Name: H:MM-H:MM` for clock usage intervals. Rules render
//! in the `⟨atom⟩ and ⟨atom⟩ ⇒ …` style with the consequent reduced to
//! what lies beyond the antecedent.

use crate::dataset::{AttrKind, Attribute, TransactionDb};
use crate::interval::Endpoint;
use crate::poset::Element;
use crate::rules::Rule;

/// Scale a stored endpoint back to its raw value, printing integral
/// results without a decimal point.
pub fn fmt_scaled(v: Endpoint, precision: f64) -> String {
    let raw = v as f64 * precision;
    if (raw - raw.round()).abs() < 1e-9 {
        format!("{}", raw.round() as i64)
    } else {
        format!("{raw}")
    }
}

/// Minutes from midnight as `H:MM`.
pub fn fmt_clock(v: Endpoint) -> String {
    format!("{}:{:02}", v / 60, v.rem_euclid(60))
}

/// One display atom per attribute of `e` above its bottom, in attribute
/// order. Coordinates denoting empty value ranges produce no atom.
pub fn atoms(db: &TransactionDb, e: &Element) -> Vec<String> {
    db.attrs().iter().filter_map(|attr| atom(db, attr, e)).collect()
}

fn atom(db: &TransactionDb, attr: &Attribute, e: &Element) -> Option<String> {
    let f = attr.first_factor;
    match &attr.kind {
        AttrKind::Binary => (e[f] == 1).then(|| attr.name.clone()),
        AttrKind::Chain => (e[f] != 0)
            .then(|| format!("{}: {}", attr.name, db.space().factor(f).label(e[f]))),
        AttrKind::Categorical => {
            if e[f] == 0 {
                return None;
            }
            // The +/− stars of negative encoding read better as signed items.
            match db.space().factor(f).label(e[f]) {
                "+" => Some(attr.name.clone()),
                "-" => Some(format!("¬{}", attr.name)),
                label => Some(format!("{}: {label}", attr.name)),
            }
        }
        AttrKind::Taxonomy => {
            (e[f] != 0).then(|| db.space().factor(f).label(e[f]).to_string())
        }
        AttrKind::Quantitative { pair, precision } => {
            if e[f] == 0 && e[f + 1] == 0 {
                return None; // full span, the attribute bottom
            }
            let iv = pair.interval_of(e[f], e[f + 1])?;
            Some(if iv.is_point() {
                format!("{}: {}", attr.name, fmt_scaled(iv.lo, *precision))
            } else {
                format!(
                    "{}: {}..{}",
                    attr.name,
                    fmt_scaled(iv.lo, *precision),
                    fmt_scaled(iv.hi, *precision)
                )
            })
        }
        AttrKind::Usage { pair, precision, clock } => {
            // The empty interval (any crossed pair) is the bottom.
            let iv = pair.interval_of(e[f], e[f + 1])?;
            let (lo, hi) = if *clock {
                (fmt_clock(iv.lo), fmt_clock(iv.hi))
            } else {
                (fmt_scaled(iv.lo, *precision), fmt_scaled(iv.hi, *precision))
            };
            Some(format!("{}: {lo}-{hi}", attr.name))
        }
    }
}

/// The consequent's atoms beyond the antecedent. Antecedent attribute
/// slices equal the consequent's or sit at bottom, so atom-set difference
/// is exact.
pub fn consequent_atoms(db: &TransactionDb, r: &Rule) -> Vec<String> {
    let lhs = atoms(db, &r.antecedent);
    atoms(db, &r.consequent).into_iter().filter(|a| !lhs.contains(a)).collect()
}

/// Paper-style rule text, e.g. `⟨Age: 34..38⟩ ⇒ ⟨Married: Yes⟩ and
/// ⟨NumCars: 2⟩`. An empty side renders as `∅`.
pub fn rule_text(db: &TransactionDb, r: &Rule) -> String {
    format!(
        "{} ⇒ {}",
        joined(&atoms(db, &r.antecedent)),
        joined(&consequent_atoms(db, r))
    )
}

fn joined(atoms: &[String]) -> String {
    if atoms.is_empty() {
        "∅".to_string()
    } else {
        atoms.iter().map(|a| format!("⟨{a}⟩")).collect::<Vec<_>>().join(" and ")
    }
}
