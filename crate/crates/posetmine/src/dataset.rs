//! Transaction databases over poset products.
//!
//! Ingestion maps CSV records to coordinate vectors: binary columns become
//! two-node chains, categorical columns bottomed antichains ("don't care"
//! below each value), taxonomy item columns a tree factor with a synthetic
//! "Item" bottom, quantitative columns a reverse-containment interval pair,
//! and usage-interval columns a containment pair over the endpoint grid.
//! Support queries are answered from per-node row bitmasks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use fixedbitset::FixedBitSet;
use serde::Deserialize;

use crate::errors::{MineError, Result};
use crate::interval::{ChainPair, Endpoint, Interval};
use crate::poset::{Element, FactorPoset, NodeId, ProductPoset};

/// Declared kind of one CSV column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Binary,
    Categorical,
    Quantitative,
    Interval,
    Ignore,
}

/// Parsed per-column schema entry.
#[derive(Clone, Debug)]
pub struct ColumnSpec {
    pub kind: ColumnKind,
    pub precision: Option<f64>,
}

/// A named taxonomy: `child → parent` edges in file order.
#[derive(Clone, Debug)]
pub struct Taxonomy {
    pub name: String,
    pub edges: Vec<(String, String)>,
}

impl Taxonomy {
    /// Parse the edge-list format: one `child<TAB>parent` per line; blank
    /// lines and `#` comments are skipped.
    pub fn parse(name: &str, text: &str) -> Result<Taxonomy> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((child, parent)) = line.split_once('\t') else {
                return Err(MineError::data(format!(
                    "taxonomy {name}, line {}: expected child<TAB>parent",
                    lineno + 1
                )));
            };
            edges.push((child.trim().to_string(), parent.trim().to_string()));
        }
        if edges.is_empty() {
            return Err(MineError::data(format!("taxonomy {name} has no edges")));
        }
        Ok(Taxonomy { name: name.to_string(), edges })
    }

    /// Build the tree factor: a synthetic "Item" bottom below every root,
    /// then the file's nodes in breadth-first, file order.
    pub fn build_factor(&self) -> Result<FactorPoset> {
        let mut order: Vec<String> = Vec::new();
        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut child_set: HashSet<String> = HashSet::new();
        for (child, parent) in &self.edges {
            for name in [child, parent] {
                if !order.contains(name) {
                    order.push(name.clone());
                }
            }
            if !child_set.insert(child.clone()) {
                return Err(MineError::data(format!(
                    "taxonomy {}: node {child} has more than one parent",
                    self.name
                )));
            }
            children.entry(parent.clone()).or_default().push(child.clone());
        }
        let roots: Vec<String> = order.iter().filter(|n| !child_set.contains(*n)).cloned().collect();
        if roots.is_empty() {
            return Err(MineError::data(format!("taxonomy {}: no root (cycle?)", self.name)));
        }
        let mut labels = vec!["Item".to_string()];
        let mut parent: Vec<Option<NodeId>> = vec![None];
        let mut id_of: HashMap<String, NodeId> = HashMap::new();
        let mut queue: Vec<(String, NodeId)> = roots.iter().map(|r| (r.clone(), 0)).collect();
        let mut qi = 0;
        while qi < queue.len() {
            let (name, par) = queue[qi].clone();
            qi += 1;
            let id = labels.len() as NodeId;
            if id_of.insert(name.clone(), id).is_some() {
                return Err(MineError::data(format!("taxonomy {}: node {name} repeated", self.name)));
            }
            labels.push(name.clone());
            parent.push(Some(par));
            for c in children.get(&name).into_iter().flatten() {
                queue.push((c.clone(), id));
            }
        }
        if labels.len() != order.len() + 1 {
            return Err(MineError::data(format!(
                "taxonomy {}: {} nodes unreachable from the roots (cycle?)",
                self.name,
                order.len() + 1 - labels.len()
            )));
        }
        FactorPoset::tree(labels, parent)
    }
}

/// Dataset schema: per-column kinds plus taxonomy definitions. Columns not
/// mentioned and not matching a taxonomy node default to binary; columns
/// named `TID` or `ID` are row identifiers and are skipped.
#[derive(Clone, Debug, Default)]
pub struct Schema {
    pub columns: BTreeMap<String, ColumnSpec>,
    pub taxonomies: Vec<Taxonomy>,
}

#[derive(Deserialize)]
struct RawSchema {
    #[serde(default)]
    columns: BTreeMap<String, RawColumn>,
    #[serde(default)]
    taxonomies: Vec<RawTaxonomy>,
}

#[derive(Deserialize)]
struct RawColumn {
    kind: String,
    #[serde(default)]
    precision: Option<f64>,
}

#[derive(Deserialize)]
struct RawTaxonomy {
    name: String,
    file: String,
}

impl Schema {
    pub fn empty() -> Schema {
        Schema::default()
    }

    /// Load a JSON schema; taxonomy files are resolved relative to the
    /// schema file's directory.
    pub fn load(path: &Path) -> Result<Schema> {
        let text = std::fs::read_to_string(path).map_err(|source| MineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let raw: RawSchema = serde_json::from_str(&text)
            .map_err(|e| MineError::data(format!("schema {}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let mut columns = BTreeMap::new();
        for (name, col) in raw.columns {
            let kind = match col.kind.as_str() {
                "binary" => ColumnKind::Binary,
                "categorical" => ColumnKind::Categorical,
                "quantitative" => ColumnKind::Quantitative,
                "interval" => ColumnKind::Interval,
                "ignore" | "id" => ColumnKind::Ignore,
                other => {
                    return Err(MineError::data(format!(
                        "schema column {name}: unknown kind {other:?}"
                    )))
                }
            };
            columns.insert(name, ColumnSpec { kind, precision: col.precision });
        }
        let mut taxonomies = Vec::new();
        for t in raw.taxonomies {
            let tax_path = dir.join(&t.file);
            let text = std::fs::read_to_string(&tax_path).map_err(|source| MineError::Io {
                path: tax_path.display().to_string(),
                source,
            })?;
            taxonomies.push(Taxonomy::parse(&t.name, &text)?);
        }
        Ok(Schema { columns, taxonomies })
    }
}

/// Realization of one logical attribute inside the product space.
#[derive(Clone, Debug)]
pub enum AttrKind {
    /// Two-node chain 0 < 1.
    Binary,
    /// A plain chain of arbitrary length (grid reductions, synthetic data).
    Chain,
    /// Bottomed antichain with a "don't care" minimum.
    Categorical,
    /// Taxonomy tree with the synthetic "Item" bottom.
    Taxonomy,
    /// Reverse-containment interval pair over the observed values
    /// (two chain factors).
    Quantitative { pair: ChainPair, precision: f64 },
    /// Containment interval pair over the endpoint grid (two chain
    /// factors); `clock` selects H:MM formatting.
    Usage { pair: ChainPair, precision: f64, clock: bool },
}

/// One logical attribute: display name, realization, and the index of its
/// first factor in the product (pair kinds own two consecutive factors).
#[derive(Clone, Debug)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
    pub first_factor: usize,
}

impl Attribute {
    pub fn factor_count(&self) -> usize {
        match self.kind {
            AttrKind::Quantitative { .. } | AttrKind::Usage { .. } => 2,
            _ => 1,
        }
    }

    /// The chain pair, for the two-factor kinds.
    pub fn pair(&self) -> Option<&ChainPair> {
        match &self.kind {
            AttrKind::Quantitative { pair, .. } | AttrKind::Usage { pair, .. } => Some(pair),
            _ => None,
        }
    }
}

/// An immutable transaction database: the product space, the logical
/// attribute map onto its factors, and the rows (a multiset).
#[derive(Clone, Debug)]
pub struct TransactionDb {
    space: ProductPoset,
    attrs: Vec<Attribute>,
    rows: Vec<Element>,
    /// masks[f][v] = bitmask of rows whose f-th coordinate is ⪰ v.
    masks: Vec<Vec<FixedBitSet>>,
    multiplicity: HashMap<Element, u32>,
}

/// Anything that can answer support queries over a product space. The
/// level-wise and border engines are written against this.
pub trait SupportOracle: Sync {
    fn space(&self) -> &ProductPoset;
    /// Number of transactions (multiset size).
    fn db_size(&self) -> usize;
    /// |{q ∈ D : q ⪰ p}|
    fn support(&self, p: &Element) -> usize;
}

impl TransactionDb {
    pub fn new(attrs: Vec<Attribute>, factors: Vec<FactorPoset>, rows: Vec<Element>) -> Result<Self> {
        let space = ProductPoset::new(factors)?;
        for (i, row) in rows.iter().enumerate() {
            if !space.contains(row) {
                return Err(MineError::data(format!("row {} is not a valid element", i + 1)));
            }
        }
        let mut masks: Vec<Vec<FixedBitSet>> = space
            .factors()
            .iter()
            .map(|f| vec![FixedBitSet::with_capacity(rows.len()); f.len()])
            .collect();
        for (r, row) in rows.iter().enumerate() {
            for (f, &coord) in row.iter().enumerate() {
                for v in space.factor(f).down_set(coord).ones() {
                    masks[f][v].insert(r);
                }
            }
        }
        let mut multiplicity: HashMap<Element, u32> = HashMap::new();
        for row in &rows {
            *multiplicity.entry(row.clone()).or_insert(0) += 1;
        }
        Ok(TransactionDb { space, attrs, rows, masks, multiplicity })
    }

    pub fn space(&self) -> &ProductPoset {
        &self.space
    }

    pub fn attrs(&self) -> &[Attribute] {
        &self.attrs
    }

    pub fn rows(&self) -> &[Element] {
        &self.rows
    }

    pub fn multiplicity(&self, p: &Element) -> usize {
        self.multiplicity.get(p).copied().unwrap_or(0) as usize
    }

    /// A product of plain chains with the given names and node labels
    /// (grid reductions and synthetic instances).
    pub fn from_chains(names_and_labels: Vec<(String, Vec<String>)>, rows: Vec<Element>) -> Result<Self> {
        let mut attrs = Vec::with_capacity(names_and_labels.len());
        let mut factors = Vec::with_capacity(names_and_labels.len());
        for (i, (name, labels)) in names_and_labels.into_iter().enumerate() {
            factors.push(FactorPoset::chain(labels)?);
            attrs.push(Attribute { name, kind: AttrKind::Chain, first_factor: i });
        }
        TransactionDb::new(attrs, factors, rows)
    }

    /// Bitmask of the rows supporting `p`. Invalid usage-interval pairs
    /// denote the empty interval, which every row's interval contains, so
    /// those coordinates constrain nothing.
    pub fn support_mask(&self, p: &Element) -> FixedBitSet {
        debug_assert!(self.space.contains(p));
        let mut acc = FixedBitSet::with_capacity(self.rows.len());
        acc.insert_range(..);
        for attr in &self.attrs {
            let f = attr.first_factor;
            match &attr.kind {
                AttrKind::Usage { pair, .. } => {
                    if pair.is_valid(p[f], p[f + 1]) {
                        acc.intersect_with(&self.masks[f][p[f] as usize]);
                        acc.intersect_with(&self.masks[f + 1][p[f + 1] as usize]);
                    }
                }
                AttrKind::Quantitative { .. } => {
                    // Invalid pairs denote empty value ranges; the plain
                    // masks are already exact (no row lies in them).
                    acc.intersect_with(&self.masks[f][p[f] as usize]);
                    acc.intersect_with(&self.masks[f + 1][p[f + 1] as usize]);
                }
                _ => acc.intersect_with(&self.masks[f][p[f] as usize]),
            }
        }
        acc
    }

    /// Row ids of the supporting transactions.
    pub fn supporting_rows(&self, p: &Element) -> Vec<u32> {
        self.support_mask(p).ones().map(|r| r as u32).collect()
    }

    /// |{q ∈ D : q ≻ p}| in the product order (support minus the
    /// multiplicity of p itself).
    pub fn strict_support(&self, p: &Element) -> usize {
        self.support(p) - self.multiplicity(p)
    }

    /// Rows strictly above `p` in *every* coordinate. Only meaningful on
    /// all-chain spaces (grid data), where it counts open-interior points.
    pub fn strict_dominance_support(&self, p: &Element) -> usize {
        let mut acc = FixedBitSet::with_capacity(self.rows.len());
        acc.insert_range(..);
        for (f, &coord) in p.iter().enumerate() {
            let next = coord as usize + 1;
            if next >= self.space.factor(f).len() {
                return 0;
            }
            acc.intersect_with(&self.masks[f][next]);
        }
        acc.count_ones(..)
    }

    /// Output form of a mined vector: quantitative coordinates denoting
    /// empty value ranges disqualify the vector (`None`); invalid
    /// usage-interval coordinates collapse to the canonical bottom pair.
    pub fn canonical_form(&self, p: &Element) -> Option<Element> {
        let mut out = p.clone();
        for attr in &self.attrs {
            let f = attr.first_factor;
            match &attr.kind {
                AttrKind::Quantitative { pair, .. } => {
                    if !pair.is_valid(p[f], p[f + 1]) {
                        return None;
                    }
                }
                AttrKind::Usage { pair, .. } => {
                    if !pair.is_valid(p[f], p[f + 1]) {
                        out[f] = 0;
                        out[f + 1] = 0;
                    }
                }
                _ => {}
            }
        }
        Some(out)
    }
}

impl SupportOracle for TransactionDb {
    fn space(&self) -> &ProductPoset {
        &self.space
    }

    fn db_size(&self) -> usize {
        self.rows.len()
    }

    fn support(&self, p: &Element) -> usize {
        self.support_mask(p).count_ones(..)
    }
}

fn data_at(row: usize, col: &str, msg: impl std::fmt::Display) -> MineError {
    MineError::data(format!("row {row}, column {col:?}: {msg}"))
}

fn parse_bit(cell: &str, row: usize, col: &str) -> Result<NodeId> {
    match cell.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(data_at(row, col, format!("expected 0 or 1, got {other:?}"))),
    }
}

/// Scale a decimal string to integer precision units.
fn parse_scaled(cell: &str, precision: f64, row: usize, col: &str) -> Result<Endpoint> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| data_at(row, col, format!("expected a number, got {:?}", cell.trim())))?;
    let scaled = v / precision;
    if (scaled - scaled.round()).abs() > 1e-6 {
        return Err(data_at(row, col, format!("value {v} is not aligned to precision {precision}")));
    }
    Ok(scaled.round() as Endpoint)
}

/// Parse one endpoint, either H:MM clock time (minutes) or a plain number.
fn parse_endpoint(text: &str, precision: f64, row: usize, col: &str) -> Result<(Endpoint, bool)> {
    let text = text.trim();
    if let Some((h, m)) = text.split_once(':') {
        let hours: i64 = h
            .parse()
            .map_err(|_| data_at(row, col, format!("bad clock time {text:?}")))?;
        let mins: i64 = m
            .parse()
            .map_err(|_| data_at(row, col, format!("bad clock time {text:?}")))?;
        if !(0..60).contains(&mins) || hours < 0 {
            return Err(data_at(row, col, format!("bad clock time {text:?}")));
        }
        Ok((hours * 60 + mins, true))
    } else {
        Ok((parse_scaled(text, precision, row, col)?, false))
    }
}

/// Parse a usage cell: `-` means no usage; otherwise `start-end`.
fn parse_usage(cell: &str, precision: f64, row: usize, col: &str) -> Result<(Option<Interval>, bool)> {
    let cell = cell.trim();
    if cell == "-" || cell.is_empty() {
        return Ok((None, false));
    }
    let Some((a, b)) = cell.split_once('-') else {
        return Err(data_at(row, col, format!("expected start-end interval, got {cell:?}")));
    };
    let (lo, clock_a) = parse_endpoint(a, precision, row, col)?;
    let (hi, clock_b) = parse_endpoint(b, precision, row, col)?;
    if lo > hi {
        return Err(data_at(row, col, format!("interval {cell:?} runs backwards")));
    }
    Ok((Some(Interval { lo, hi }), clock_a || clock_b))
}

/// Read the CSV into headers plus string records.
fn read_csv<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| MineError::data(format!("bad CSV header: {e}")))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| MineError::data(format!("row {}: {e}", i + 1)))?;
        records.push(rec.iter().map(|c| c.to_string()).collect());
    }
    Ok((headers, records))
}

enum ColumnRole {
    Skip,
    Spec(ColumnSpec),
    TaxonomyItem(usize),
    DefaultBinary,
}

/// Ingest a CSV under a schema. Unmentioned columns are binary items;
/// columns whose header names a taxonomy node feed that taxonomy's
/// coordinate; `TID`/`ID` columns are row identifiers.
pub fn ingest<R: Read>(reader: R, schema: &Schema) -> Result<TransactionDb> {
    let (headers, records) = read_csv(reader)?;
    let tax_factors: Vec<FactorPoset> = schema
        .taxonomies
        .iter()
        .map(|t| t.build_factor())
        .collect::<Result<Vec<_>>>()?;
    // Node label → owning taxonomy (the synthetic bottom is not addressable).
    let mut node_owner: HashMap<&str, usize> = HashMap::new();
    for (ti, f) in tax_factors.iter().enumerate() {
        for label in f.labels().iter().skip(1) {
            if node_owner.insert(label, ti).is_some() {
                return Err(MineError::data(format!(
                    "node {label:?} appears in more than one taxonomy"
                )));
            }
        }
    }
    let roles: Vec<ColumnRole> = headers
        .iter()
        .map(|h| {
            if h == "TID" || h == "ID" {
                return ColumnRole::Skip;
            }
            if let Some(spec) = schema.columns.get(h) {
                return match spec.kind {
                    ColumnKind::Ignore => ColumnRole::Skip,
                    _ => ColumnRole::Spec(spec.clone()),
                };
            }
            match node_owner.get(h.as_str()) {
                Some(&ti) => ColumnRole::TaxonomyItem(ti),
                None => ColumnRole::DefaultBinary,
            }
        })
        .collect();
    for rec in records.iter() {
        if rec.len() != headers.len() {
            return Err(MineError::data(format!(
                "record has {} cells, header has {} columns",
                rec.len(),
                headers.len()
            )));
        }
    }

    let mut attrs: Vec<Attribute> = Vec::new();
    let mut factors: Vec<FactorPoset> = Vec::new();
    let mut row_coords: Vec<Vec<NodeId>> = vec![Vec::new(); records.len()];
    let mut placed_tax: HashMap<usize, ()> = HashMap::new();

    let cell = |r: usize, c: usize| -> &str { records[r][c].as_str() };

    for (c, header) in headers.iter().enumerate() {
        match &roles[c] {
            ColumnRole::Skip => {}
            ColumnRole::DefaultBinary => {
                let first_factor = factors.len();
                factors.push(FactorPoset::chain(vec!["0".into(), "1".into()])?);
                attrs.push(Attribute { name: header.clone(), kind: AttrKind::Binary, first_factor });
                for r in 0..records.len() {
                    row_coords[r].push(parse_bit(cell(r, c), r + 1, header)?);
                }
            }
            ColumnRole::Spec(spec) => match spec.kind {
                ColumnKind::Binary => {
                    let first_factor = factors.len();
                    factors.push(FactorPoset::chain(vec!["0".into(), "1".into()])?);
                    attrs.push(Attribute { name: header.clone(), kind: AttrKind::Binary, first_factor });
                    for r in 0..records.len() {
                        row_coords[r].push(parse_bit(cell(r, c), r + 1, header)?);
                    }
                }
                ColumnKind::Categorical => {
                    let mut values: Vec<String> = records
                        .iter()
                        .map(|rec| rec[c].clone())
                        .filter(|v| !v.is_empty() && v != "-")
                        .collect();
                    values.sort();
                    values.dedup();
                    let first_factor = factors.len();
                    factors.push(FactorPoset::star("*".into(), values.clone())?);
                    attrs.push(Attribute {
                        name: header.clone(),
                        kind: AttrKind::Categorical,
                        first_factor,
                    });
                    for r in 0..records.len() {
                        let v = cell(r, c);
                        let coord = if v.is_empty() || v == "-" {
                            0
                        } else {
                            1 + values.iter().position(|x| x == v).unwrap() as NodeId
                        };
                        row_coords[r].push(coord);
                    }
                }
                ColumnKind::Quantitative => {
                    let precision = spec.precision.unwrap_or(1.0);
                    let mut scaled = Vec::with_capacity(records.len());
                    for r in 0..records.len() {
                        scaled.push(parse_scaled(cell(r, c), precision, r + 1, header)?);
                    }
                    let pair = ChainPair::quantitative(scaled.clone())?;
                    let (left, right) = pair.factors(header);
                    let first_factor = factors.len();
                    factors.push(left);
                    factors.push(right);
                    for (r, &v) in scaled.iter().enumerate() {
                        let (l, rr) = pair.encode_point(v)?;
                        row_coords[r].push(l);
                        row_coords[r].push(rr);
                    }
                    attrs.push(Attribute {
                        name: header.clone(),
                        kind: AttrKind::Quantitative { pair, precision },
                        first_factor,
                    });
                }
                ColumnKind::Interval => {
                    let precision = spec.precision.unwrap_or(1.0);
                    let mut cells = Vec::with_capacity(records.len());
                    let mut clock = false;
                    for r in 0..records.len() {
                        let (iv, is_clock) = parse_usage(cell(r, c), precision, r + 1, header)?;
                        clock |= is_clock;
                        cells.push(iv);
                    }
                    let used: Vec<Interval> = cells.iter().flatten().copied().collect();
                    if used.is_empty() {
                        return Err(MineError::data(format!(
                            "column {header:?} has no usable interval entries"
                        )));
                    }
                    let grid = crate::interval::endpoints(&used);
                    // Single points at the extreme grid endpoints have no
                    // place in the containment lattice (no intersection
                    // produces them), so such records are rejected.
                    for (r, iv) in cells.iter().enumerate() {
                        if let Some(iv) = iv {
                            if iv.is_point() && (iv.lo == grid[0] || iv.lo == grid[grid.len() - 1]) {
                                return Err(data_at(
                                    r + 1,
                                    header,
                                    format!("degenerate interval at the extreme endpoint {}", iv.lo),
                                ));
                            }
                        }
                    }
                    let pair = ChainPair::usage(grid)?;
                    let (left, right) = pair.factors(header);
                    let first_factor = factors.len();
                    factors.push(left);
                    factors.push(right);
                    for (r, iv) in cells.iter().enumerate() {
                        let (l, rr) = pair.encode_interval(*iv)?;
                        row_coords[r].push(l);
                        row_coords[r].push(rr);
                    }
                    attrs.push(Attribute {
                        name: header.clone(),
                        kind: AttrKind::Usage { pair, precision, clock },
                        first_factor,
                    });
                }
                ColumnKind::Ignore => unreachable!("ignore handled as Skip"),
            },
            ColumnRole::TaxonomyItem(ti) => {
                if placed_tax.insert(*ti, ()).is_some() {
                    continue; // the taxonomy was realized at its first column
                }
                let tax = &schema.taxonomies[*ti];
                let factor = tax_factors[*ti].clone();
                // All columns feeding this taxonomy, in header order.
                let item_cols: Vec<usize> = (0..headers.len())
                    .filter(|&j| matches!(roles[j], ColumnRole::TaxonomyItem(tj) if tj == *ti))
                    .collect();
                for r in 0..records.len() {
                    let mut hit: Option<NodeId> = None;
                    for &j in &item_cols {
                        if parse_bit(cell(r, j), r + 1, &headers[j])? == 1 {
                            let node = factor.node_by_label(&headers[j]).expect("column matched a node");
                            if hit.replace(node).is_some() {
                                return Err(MineError::data(format!(
                                    "row {}: more than one item from taxonomy {:?}",
                                    r + 1,
                                    tax.name
                                )));
                            }
                        }
                    }
                    row_coords[r].push(hit.unwrap_or(0));
                }
                let first_factor = factors.len();
                factors.push(factor);
                attrs.push(Attribute {
                    name: tax.name.clone(),
                    kind: AttrKind::Taxonomy,
                    first_factor,
                });
            }
        }
    }
    for (ti, tax) in schema.taxonomies.iter().enumerate() {
        if !placed_tax.contains_key(&ti) {
            return Err(MineError::data(format!(
                "taxonomy {:?} has no item columns in the CSV",
                tax.name
            )));
        }
    }
    if attrs.is_empty() {
        return Err(MineError::data("no data columns after applying the schema"));
    }
    TransactionDb::new(attrs, factors, row_coords)
}

/// Ingest a plain binary database (every column an item).
pub fn ingest_binary<R: Read>(reader: R) -> Result<TransactionDb> {
    ingest(reader, &Schema::empty())
}

/// Re-encode a binary database for negative association mining: each item
/// factor becomes the bottomed antichain {*, +, −}, so the absence of an
/// item is a first-class value.
pub fn negative_encode(db: &TransactionDb) -> Result<TransactionDb> {
    if !db.attrs.iter().all(|a| matches!(a.kind, AttrKind::Binary)) {
        return Err(MineError::config(
            "negative encoding requires a purely binary database",
        ));
    }
    let mut factors = Vec::with_capacity(db.attrs.len());
    let mut attrs = Vec::with_capacity(db.attrs.len());
    for (i, attr) in db.attrs.iter().enumerate() {
        factors.push(FactorPoset::star("*".into(), vec!["+".into(), "-".into()])?);
        attrs.push(Attribute {
            name: attr.name.clone(),
            kind: AttrKind::Categorical,
            first_factor: i,
        });
    }
    let rows = db
        .rows
        .iter()
        .map(|row| row.iter().map(|&b| if b == 1 { 1 } else { 2 }).collect())
        .collect();
    TransactionDb::new(attrs, factors, rows)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const TABLE1: &str = "\
TID,Bread,Butter,Cheese,Milk,Orange Juice,Yogurt
T1,1,1,1,1,1,1
T2,1,1,1,0,0,0
T3,1,1,0,1,1,1
T4,1,1,1,0,1,0
T5,1,1,1,0,0,1
T6,1,0,0,0,1,0
T7,1,1,1,1,1,1
T8,0,1,1,1,0,0
T9,1,1,0,0,1,0
T10,1,1,1,1,1,1
";

    pub const TABLE2: &str = "\
ID,Age,Married,NumCars
I1,23,No,1
I2,25,Yes,1
I3,29,No,0
I4,34,Yes,2
I5,38,Yes,2
";

    pub const TABLE3: &str = "\
TID,Jacket,Scarf,Shirts,Ski Pants,Hiking Boots,Shoes
T1,0,0,1,0,0,0
T2,1,0,0,0,1,0
T3,0,0,0,1,1,0
T4,0,0,0,0,0,1
T5,0,0,0,0,0,1
T6,1,0,0,0,0,0
";

    pub const TABLE4: &str = "\
TID,Friday,Saturday,Sunday
T1,2:00-3:00,2:00-3:00,1:00-2:00
T2,1:00-3:00,1:00-3:00,1:00-3:00
T3,2:00-4:00,2:00-4:00,1:00-4:00
T4,1:00-2:00,1:00-4:00,-
T5,3:00-4:00,-,1:00-3:00
";

    pub const CLOTHES_TAX: &str =
        "Outwear\tClothes\nShirts\tClothes\nJacket\tOutwear\nSki Pants\tOutwear\nScarf\tOutwear\n";
    pub const FOOTWEAR_TAX: &str = "Shoes\tFootwear\nHiking Boots\tFootwear\n";

    pub fn table1() -> TransactionDb {
        ingest_binary(TABLE1.as_bytes()).unwrap()
    }

    pub fn table2() -> TransactionDb {
        let mut columns = BTreeMap::new();
        columns.insert("Age".into(), ColumnSpec { kind: ColumnKind::Quantitative, precision: None });
        columns.insert("Married".into(), ColumnSpec { kind: ColumnKind::Categorical, precision: None });
        columns.insert(
            "NumCars".into(),
            ColumnSpec { kind: ColumnKind::Quantitative, precision: None },
        );
        ingest(TABLE2.as_bytes(), &Schema { columns, taxonomies: vec![] }).unwrap()
    }

    pub fn table3() -> TransactionDb {
        let schema = Schema {
            columns: BTreeMap::new(),
            taxonomies: vec![
                Taxonomy::parse("Clothes", CLOTHES_TAX).unwrap(),
                Taxonomy::parse("Footwear", FOOTWEAR_TAX).unwrap(),
            ],
        };
        ingest(TABLE3.as_bytes(), &schema).unwrap()
    }

    pub fn table4() -> TransactionDb {
        let mut columns = BTreeMap::new();
        for day in ["Friday", "Saturday", "Sunday"] {
            columns.insert(day.into(), ColumnSpec { kind: ColumnKind::Interval, precision: None });
        }
        ingest(TABLE4.as_bytes(), &Schema { columns, taxonomies: vec![] }).unwrap()
    }

    /// Encode an itemset as an element vector: each name is either a binary
    /// attribute (coordinate 1) or a node label inside a taxonomy factor.
    pub fn itemset(db: &TransactionDb, names: &[&str]) -> Element {
        let mut e = vec![0; db.space().arity()];
        for name in names {
            if let Some(attr) = db.attrs().iter().find(|a| &a.name == name) {
                e[attr.first_factor] = 1;
                continue;
            }
            let hits: Vec<(usize, NodeId)> = db
                .space()
                .factors()
                .iter()
                .enumerate()
                .filter_map(|(f, factor)| factor.node_by_label(name).map(|id| (f, id)))
                .collect();
            match hits.as_slice() {
                [(f, id)] => e[*f] = *id,
                [] => panic!("no attribute or node labeled {name:?}"),
                _ => panic!("label {name:?} is ambiguous across factors"),
            }
        }
        e
    }
}
