//! Serializable rows for the group-table sweep.

use serde::Serialize;

use quadclass::groups::TableRow;

/// Flat, serializable form of a table-verification row.
#[derive(Debug, Clone, Serialize)]
pub struct TableRowOut {
    pub gtype: u8,
    pub alpha: u32,
    pub n: u32,
    pub s: Option<u32>,
    pub k: Option<u64>,
    pub i: u8,
    pub level: u8,
    pub computed_derived_order: u64,
    pub computed_ab: String,
    pub expected_derived_order: Option<u64>,
    pub expected_ab: Option<String>,
    pub generators_match: Option<bool>,
    pub outcome: String,
}

impl From<&TableRow> for TableRowOut {
    fn from(row: &TableRow) -> Self {
        TableRowOut {
            gtype: row.params.gtype,
            alpha: row.params.alpha,
            n: row.params.n,
            s: row.params.s,
            k: row.params.k,
            i: row.i,
            level: row.level,
            computed_derived_order: row.computed_derived_order,
            computed_ab: row.computed_ab.to_string(),
            expected_derived_order: row.expected_derived_order,
            expected_ab: row.expected_ab.as_ref().map(|t| t.to_string()),
            generators_match: row.generators_match,
            outcome: row.outcome.as_str().to_string(),
        }
    }
}

pub const TABLE_CSV_COLUMNS: [&str; 13] = [
    "gtype",
    "alpha",
    "n",
    "s",
    "k",
    "i",
    "level",
    "computed_derived_order",
    "computed_ab",
    "expected_derived_order",
    "expected_ab",
    "generators_match",
    "outcome",
];

impl TableRowOut {
    pub fn csv_fields(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        vec![
            self.gtype.to_string(),
            self.alpha.to_string(),
            self.n.to_string(),
            opt(&self.s),
            opt(&self.k),
            self.i.to_string(),
            self.level.to_string(),
            self.computed_derived_order.to_string(),
            self.computed_ab.clone(),
            opt(&self.expected_derived_order),
            opt(&self.expected_ab),
            opt(&self.generators_match),
            self.outcome.clone(),
        ]
    }
}
