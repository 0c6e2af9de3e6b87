//! The expected-values table (rows of the classification table and the
//! diagram labels) and comparison of computed reports against it.

use serde::{Deserialize, Serialize};
use trigeom_core::harness::InstanceReport;
use trigeom_core::incidence::{Diagram, PairLabel};
use trigeom_core::space::SpaceKind;

const TABLE1: &str = include_str!("../data/table1.json");

/// Inclusive parameter range; `null` upper bound means unbounded.
pub type Range = [Option<u32>; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPattern {
    pub kind: String,
    #[serde(default)]
    pub n: Option<Range>,
    #[serde(default)]
    pub q: Option<Range>,
    #[serde(default)]
    pub v: Option<Range>,
}

fn in_range(range: &Option<Range>, x: u32) -> bool {
    match range {
        None => true,
        Some([lo, hi]) => lo.is_none_or(|lo| x >= lo) && hi.is_none_or(|hi| x <= hi),
    }
}

impl FamilyPattern {
    pub fn matches(&self, kind: SpaceKind) -> bool {
        match kind {
            SpaceKind::Projective { n, q } => self.kind == "projective" && in_range(&self.n, n) && in_range(&self.q, q),
            SpaceKind::Affine { n, q } => self.kind == "affine" && in_range(&self.n, n) && in_range(&self.q, q),
            SpaceKind::Complete { v } => self.kind == "complete" && in_range(&self.v, v),
            SpaceKind::Unital { q } => self.kind == "unital" && in_range(&self.q, q),
            SpaceKind::Custom => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceExpectation {
    pub space: SpaceKind,
    pub aut_order: u128,
    pub cor_order: u128,
    #[serde(default)]
    pub components: Option<usize>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub row: String,
    pub family: FamilyPattern,
    pub connected: bool,
    pub residually_connected: bool,
    pub thin: bool,
    pub has_duality: bool,
    pub aut_group: String,
    pub cor_group: String,
    pub instances: Vec<InstanceExpectation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramExpectation {
    pub space: SpaceKind,
    pub count: usize,
    pub order: usize,
    pub edge: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub rows: Vec<Row>,
    pub diagrams: Vec<DiagramExpectation>,
}

impl Table {
    pub fn row_for(&self, kind: SpaceKind) -> Option<&Row> {
        self.rows.iter().find(|r| r.family.matches(kind))
    }

    pub fn instance(&self, kind: SpaceKind) -> Option<&InstanceExpectation> {
        self.rows.iter().flat_map(|r| &r.instances).find(|i| i.space == kind)
    }

    pub fn diagram(&self, kind: SpaceKind) -> Option<&DiagramExpectation> {
        self.diagrams.iter().find(|d| d.space == kind)
    }

    /// Every concrete instance listed in the table, in row order.
    pub fn instances(&self) -> Vec<SpaceKind> {
        self.rows.iter().flat_map(|r| r.instances.iter().map(|i| i.space)).collect()
    }
}

/// The bundled table.
pub fn table1() -> Table {
    serde_json::from_str(TABLE1).expect("bundled table parses")
}

/// Which report fields to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Selection {
    pub connected: bool,
    pub rc: bool,
    pub thin: bool,
    pub ft: bool,
    pub duality: bool,
    pub triality: bool,
    pub orders: bool,
    pub diagram: bool,
}

impl Selection {
    pub fn all() -> Self {
        Selection {
            connected: true,
            rc: true,
            thin: true,
            ft: true,
            duality: true,
            triality: true,
            orders: true,
            diagram: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub field: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

fn show<T: std::fmt::Debug>(x: Option<T>) -> String {
    match x {
        Some(v) => format!("{v:?}"),
        None => "omitted".to_string(),
    }
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<Check>, field: &str, expected: T, actual: Option<T>) {
    out.push(Check {
        field: field.to_string(),
        expected: format!("{expected:?}"),
        passed: actual.as_ref() == Some(&expected),
        actual: show(actual),
    });
}

/// Compares the selected fields of a report with the table. Returns `None`
/// when the table has nothing to say about this space.
pub fn compare(report: &InstanceReport, table: &Table, sel: &Selection) -> Option<Vec<Check>> {
    let kind = report.kind;
    let row = table.row_for(kind);
    let instance = table.instance(kind);
    let diagram = table.diagram(kind);
    if row.is_none() && diagram.is_none() {
        return None;
    }
    let mut out = Vec::new();
    if let Some(row) = row {
        if sel.connected {
            check(&mut out, "connected", row.connected, report.connected);
            if let Some(c) = instance.and_then(|i| i.components) {
                check(&mut out, "components", c, report.components);
            }
        }
        if sel.rc {
            check(&mut out, "residually_connected", row.residually_connected, report.residually_connected);
        }
        if sel.thin {
            check(&mut out, "thin", row.thin, report.thin);
        }
        if sel.ft {
            // every row comes from a space with a group transitive on triples
            check(&mut out, "flag_transitive", true, report.flag_transitive);
        }
        if sel.duality {
            check(&mut out, "has_duality", row.has_duality, report.has_duality);
        }
        if sel.triality {
            check(&mut out, "has_triality", true, report.has_triality);
        }
        if sel.orders {
            if let Some(inst) = instance {
                check(&mut out, "aut_order", inst.aut_order, report.aut_order);
                check(&mut out, "cor_order", inst.cor_order, report.cor_order);
            }
        }
    }
    if sel.diagram {
        if let Some(d) = diagram {
            out.extend(compare_diagram(d, report.diagram.as_ref()));
        }
    }
    Some(out)
}

pub fn compare_diagram(expected: &DiagramExpectation, actual: Option<&Diagram>) -> Vec<Check> {
    let mut out = Vec::new();
    let Some(diagram) = actual else {
        check(&mut out, "diagram", expected.edge, None);
        return out;
    };
    for node in &diagram.nodes {
        check(&mut out, &format!("count[{}]", node.type_label), expected.count, Some(node.count));
        check(&mut out, &format!("order[{}]", node.type_label), Some(expected.order), Some(node.order));
    }
    for edge in &diagram.edges {
        let actual = match edge.label {
            PairLabel::Uniform(p) => p.gonality.map(|g| [p.point_diameter, g, p.line_diameter]),
            _ => None,
        };
        check(&mut out, &format!("edge[{},{}]", edge.i + 1, edge.j + 1), expected.edge, actual);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_is_consistent() {
        let t = table1();
        assert_eq!(t.rows.len(), 11);
        assert_eq!(t.instances().len(), 12);
        for kind in t.instances() {
            let row = t.row_for(kind).unwrap();
            assert!(row.instances.iter().any(|i| i.space == kind), "{kind} is matched by its own row");
        }
        assert!(t.row_for(SpaceKind::Projective { n: 2, q: 7 }).is_some());
        assert!(t.row_for(SpaceKind::Unital { q: 3 }).is_none());
    }
}
