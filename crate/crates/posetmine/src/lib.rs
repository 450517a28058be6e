//! Frequent-element and border mining over products of partially ordered
//! factor spaces.
//!
//! The library models each transaction attribute as a small poset (chain,
//! star, taxonomy tree, or interval lattice), combines them into a product
//! space, and provides:
//!
//! * level-wise search for the frequent / infrequent borders,
//! * a decremental dualization routine that converts between the two
//!   borders and jointly generates both from scratch,
//! * association-rule generation (binary, generalized, rare) and maximal
//!   empty-box search on point data.

pub mod apriori;
pub mod dataset;
pub mod dualize;
pub mod enumerate;
pub mod errors;
pub mod interval;
pub mod kbox;
pub mod poset;
pub mod render;
pub mod rules;

pub use errors::{MineError, Result};
pub use poset::{Element, FactorKind, FactorPoset, NodeId, ProductPoset};

/// Snap-guarded ceiling: values within `1e-9` of an integer round to it,
/// everything else goes up. Keeps thresholds like `0.3 * 10` from landing
/// on 4 because of float representation.
pub fn ceil_snap(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as u64
    } else {
        v.ceil() as u64
    }
}

/// Snap-guarded floor: values within `1e-9` of an integer round to it,
/// everything else goes down.
pub fn floor_snap(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as u64
    } else {
        v.floor() as u64
    }
}
