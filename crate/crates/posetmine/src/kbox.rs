//! Maximal k-box search over numeric point sets.
//!
//! An axis-parallel box is a *k-box* when its open interior holds at most
//! `k` of the data points; it is *maximal* when no face can be pushed
//! outward without trapping more than `k`. Encoding a candidate box
//! `[a, b]` as the vector `(a, u − b)` over per-axis face grids turns
//! widening into stepping the vector down in a product of chains, so the
//! maximal k-boxes are exactly the minimal vectors whose interior holds
//! fewer than `k + 1` points — a border-generation instance under the
//! strict-dominance support count.

use std::collections::BTreeSet;

use crate::dataset::{SupportOracle, TransactionDb};
use crate::dualize::DualizeCfg;
use crate::enumerate::generate_minimal_infrequent;
use crate::errors::{MineError, Result};
use crate::interval::Endpoint;
use crate::poset::{Element, ProductPoset};

/// A closed axis-parallel box together with its open-interior point count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct KBox {
    /// Lower corner, one coordinate per axis.
    pub lower: Vec<Endpoint>,
    /// Upper corner; strictly above `lower` on every axis.
    pub upper: Vec<Endpoint>,
    /// Number of points strictly inside the box on every axis.
    pub interior_count: usize,
}

/// Support adapter counting the rows strictly above the probe on every
/// coordinate — the open-interior count of the encoded box. Strictness
/// keeps the count anti-monotone, which the border walk relies on.
struct DominanceOracle<'a>(&'a TransactionDb);

impl SupportOracle for DominanceOracle<'_> {
    fn space(&self) -> &ProductPoset {
        self.0.space()
    }

    fn db_size(&self) -> usize {
        self.0.db_size()
    }

    fn support(&self, p: &Element) -> usize {
        self.0.strict_dominance_support(p)
    }
}

/// All maximal k-boxes for `points` inside a bounding box.
///
/// `bounds` must strictly contain every point; when omitted it defaults to
/// the coordinate-wise min/max padded by one unit per side. Box faces are
/// drawn from the per-axis grid of distinct point coordinates plus the two
/// bounding faces: pushing a face past the next grid line never changes
/// the interior, so nothing is lost by staying on the grid.
///
/// Errors: `k ≥ |points|` is a trivial instance (the whole bounding box
/// qualifies) and is rejected, as are bounds that touch a point and
/// points of mixed dimension.
pub fn gen_maximal_kboxes(
    points: &[Vec<Endpoint>],
    k: usize,
    bounds: Option<(Vec<Endpoint>, Vec<Endpoint>)>,
    cfg: &DualizeCfg,
) -> Result<Vec<KBox>> {
    if k >= points.len() {
        return Err(MineError::config(format!(
            "k = {k} with {} points: every box in the bounding region holds at most k points",
            points.len()
        )));
    }
    let n = points[0].len();
    if n == 0 {
        return Err(MineError::data("points must have at least one coordinate"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(MineError::data(format!(
            "points disagree on dimension: expected {n} coordinates, found {}",
            p.len()
        )));
    }
    let (lo, hi) = match bounds {
        Some((lo, hi)) => {
            if lo.len() != n || hi.len() != n {
                return Err(MineError::config(format!(
                    "bounding box has {}/{} coordinates but points have {n}",
                    lo.len(),
                    hi.len()
                )));
            }
            for p in points {
                for i in 0..n {
                    if p[i] <= lo[i] || p[i] >= hi[i] {
                        return Err(MineError::config(format!(
                            "bounding box must strictly contain every point; \
                             axis {i} of {p:?} touches [{}, {}]",
                            lo[i], hi[i]
                        )));
                    }
                }
            }
            (lo, hi)
        }
        None => {
            let mut lo = vec![Endpoint::MAX; n];
            let mut hi = vec![Endpoint::MIN; n];
            for p in points {
                for i in 0..n {
                    lo[i] = lo[i].min(p[i]);
                    hi[i] = hi[i].max(p[i]);
                }
            }
            for i in 0..n {
                // One unit of slack per side keeps every point interior.
                lo[i] = lo[i].checked_sub(1).ok_or_else(|| {
                    MineError::config("point coordinates leave no room for a lower bounding face")
                })?;
                hi[i] = hi[i].checked_add(1).ok_or_else(|| {
                    MineError::config("point coordinates leave no room for an upper bounding face")
                })?;
            }
            (lo, hi)
        }
    };

    // Per-axis face grid: distinct point coordinates plus the two bounds.
    let grids: Vec<Vec<Endpoint>> = (0..n)
        .map(|i| {
            let mut vals: BTreeSet<Endpoint> = points.iter().map(|p| p[i]).collect();
            vals.insert(lo[i]);
            vals.insert(hi[i]);
            vals.into_iter().collect()
        })
        .collect();

    // Axes 0..n carry the lower faces ascending; axes n..2n carry the
    // upper faces descending, so growing any coordinate shrinks the box.
    let mut chains = Vec::with_capacity(2 * n);
    for (i, g) in grids.iter().enumerate() {
        chains.push((format!("x{i}.lower"), g.iter().map(|v| v.to_string()).collect()));
    }
    for (i, g) in grids.iter().enumerate() {
        chains.push((format!("x{i}.upper"), g.iter().rev().map(|v| v.to_string()).collect()));
    }
    let rows: Vec<Element> = points
        .iter()
        .map(|p| {
            let mut e = vec![0u32; 2 * n];
            for i in 0..n {
                let idx = grids[i]
                    .binary_search(&p[i])
                    .expect("every point coordinate is on its own grid");
                e[i] = idx as u32;
                e[n + i] = (grids[i].len() - 1 - idx) as u32;
            }
            e
        })
        .collect();
    let db = TransactionDb::from_chains(chains, rows)?;

    let border = generate_minimal_infrequent(&DominanceOracle(&db), k + 1, cfg)?;
    let mut out = Vec::new();
    for v in &border.minimal_infrequent {
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for i in 0..n {
            lower.push(grids[i][v[i] as usize]);
            upper.push(grids[i][grids[i].len() - 1 - v[n + i] as usize]);
        }
        // Vectors whose faces cross on some axis denote no box at all;
        // they form an up-closed sliver of the search space whose minimal
        // elements the border can list, so they are dropped here.
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            continue;
        }
        // Flat boxes never survive: widening a flat axis one grid step
        // adds no interior point, so the vector was not minimal.
        debug_assert!(
            lower.iter().zip(&upper).all(|(a, b)| a < b),
            "flat box survived the minimality filter"
        );
        out.push(KBox { lower, upper, interior_count: db.strict_dominance_support(v) });
    }
    out.sort();
    Ok(out)
}
