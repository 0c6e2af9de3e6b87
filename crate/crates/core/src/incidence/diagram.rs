use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{IncidenceError, IncidenceSystem, Rank2Params};

/// Label of the edge between two types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairLabel {
    /// Every residue of this type pair has these parameters.
    Uniform(Rank2Params),
    /// Residues disagree.
    Nonuniform,
    /// Some residue of this type pair is disconnected.
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramNode {
    pub type_label: String,
    /// Number of elements of this type.
    pub count: usize,
    /// `s_i`: residues of flags of co-type `i` have `s_i + 1` elements; `None` if that varies.
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub i: usize,
    pub j: usize,
    pub label: PairLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
}

impl Diagram {
    pub fn edge(&self, i: usize, j: usize) -> Option<&PairLabel> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| &e.label)
    }

    /// The common label when every edge carries the same uniform parameters.
    pub fn common_edge_label(&self) -> Option<Rank2Params> {
        let mut labels = self.edges.iter().map(|e| match e.label {
            PairLabel::Uniform(p) => Some(p),
            _ => None,
        });
        let first = labels.next()??;
        labels.all(|l| l == Some(first)).then_some(first)
    }
}

impl IncidenceSystem {
    /// Buekenhout diagram: per-type counts and residue orders, and for each
    /// pair of types the parameters of its rank-2 residues.
    pub fn diagram(&self) -> Result<Diagram, IncidenceError> {
        self.require_geometry()?;
        let rank = self.rank();
        let counts = self.type_counts();
        let orders = self.residue_orders();
        let nodes = (0..rank)
            .map(|t| DiagramNode {
                type_label: self.types[t].clone(),
                count: counts[t],
                order: orders[t],
            })
            .collect();

        let pair_index = |i: usize, j: usize| i * rank + j;
        let mut labels: Vec<Option<PairLabel>> = vec![None; rank * rank];
        let mut merge = |i: usize, j: usize, label: PairLabel| {
            let slot = &mut labels[pair_index(i, j)];
            *slot = Some(match (*slot, label) {
                (None, l) => l,
                (Some(PairLabel::Disconnected), _) | (_, PairLabel::Disconnected) => {
                    PairLabel::Disconnected
                }
                (Some(a), b) if a == b => a,
                _ => PairLabel::Nonuniform,
            });
        };

        let mut residue_of = |members: &[u32], present: &[bool]| {
            let missing: Vec<usize> = (0..rank).filter(|&t| !present[t]).collect();
            let (i, j) = (missing[0], missing[1]);
            let sub = self.rank2_residue(members, (i, j));
            let label = match sub.rank2_parameters() {
                Ok(p) => PairLabel::Uniform(p),
                Err(_) => PairLabel::Disconnected,
            };
            merge(i, j, label);
        };

        if rank == 2 {
            let all: Vec<u32> = (0..self.len() as u32).collect();
            residue_of(&all, &[false, false]);
        } else if rank > 2 {
            self.for_each_flag(|flag, common| {
                if flag.len() == rank - 2 {
                    let mut present = vec![false; rank];
                    for &x in flag {
                        present[self.type_of[x]] = true;
                    }
                    residue_of(common, &present);
                }
            });
        }

        let mut edges = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                if let Some(label) = labels[pair_index(i, j)] {
                    edges.push(DiagramEdge { i, j, label });
                }
            }
        }
        Ok(Diagram { nodes, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::polygon;
    use super::*;

    #[test]
    fn rank_two_diagram_is_its_own_parameters() {
        let d = polygon(5).diagram().unwrap();
        assert_eq!(d.nodes[0].count, 5);
        assert_eq!(d.nodes[0].order, Some(1));
        let expected = Rank2Params {
            point_diameter: 5,
            gonality: Some(5),
            line_diameter: 5,
        };
        assert_eq!(d.edge(0, 1), Some(&PairLabel::Uniform(expected)));
        assert_eq!(d.common_edge_label(), Some(expected));
    }
}
