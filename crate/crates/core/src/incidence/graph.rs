//! Breadth-first machinery on the incidence graph.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{IncidenceError, IncidenceSystem};

/// Point-diameter, gonality and line-diameter of a connected rank-2 system.
/// `gonality` is `None` when the incidence graph is a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank2Params {
    pub point_diameter: u32,
    pub gonality: Option<u32>,
    pub line_diameter: u32,
}

const UNSEEN: u32 = u32::MAX;

fn bfs(adj: &[Vec<u32>], root: usize, dist: &mut [u32], queue: &mut VecDeque<u32>) {
    dist.fill(UNSEEN);
    dist[root] = 0;
    queue.clear();
    queue.push_back(root as u32);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in &adj[u as usize] {
            if dist[w as usize] == UNSEEN {
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Length of the shortest cycle of an undirected simple graph, `None` for forests.
pub fn girth(adj: &[Vec<u32>]) -> Option<u32> {
    let n = adj.len();
    let mut best = UNSEEN;
    let mut dist = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.fill(UNSEEN);
        dist[root] = 0;
        parent[root] = UNSEEN;
        queue.clear();
        queue.push_back(root as u32);
        'bfs: while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if 2 * du + 1 >= best {
                break;
            }
            for &w in &adj[u as usize] {
                let wi = w as usize;
                if dist[wi] == UNSEEN {
                    dist[wi] = du + 1;
                    parent[wi] = u;
                    queue.push_back(w);
                } else if parent[u as usize] != w {
                    best = best.min(du + dist[wi] + 1);
                    if best <= 3 {
                        break 'bfs;
                    }
                }
            }
        }
    }
    (best != UNSEEN).then_some(best)
}

impl IncidenceSystem {
    pub(crate) fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    /// Connected components of the incidence graph, each sorted, ordered by
    /// smallest element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![UNSEEN; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != UNSEEN {
                continue;
            }
            let id = out.len() as u32;
            let mut members = vec![start];
            comp[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if comp[w] == UNSEEN {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Connectivity of the subgraph induced on a sorted member list.
    fn members_connected(&self, members: &[u32], mark: &mut [u32], stamp: u32) -> bool {
        let Some(&first) = members.first() else {
            return true;
        };
        for &x in members {
            mark[x as usize] = stamp;
        }
        // stamp + 1 marks visited members
        let visited = stamp + 1;
        let mut stack = vec![first];
        mark[first as usize] = visited;
        let mut seen = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u as usize] {
                if mark[w as usize] == stamp {
                    mark[w as usize] = visited;
                    seen += 1;
                    stack.push(w);
                }
            }
        }
        seen == members.len()
    }

    fn proper_residues_connected_unchecked(&self) -> bool {
        let rank = self.rank();
        let mut mark = vec![0u32; self.len()];
        let mut stamp = 1u32;
        let mut ok = true;
        self.for_each_flag(|flag, common| {
            if !ok || rank < flag.len() + 2 {
                return;
            }
            if !self.members_connected(common, &mut mark, stamp) {
                ok = false;
            }
            stamp += 2;
        });
        ok
    }

    /// True iff the system and every residue of rank at least two (flags of
    /// co-rank >= 2, the empty flag included) have connected incidence graphs.
    pub fn is_residually_connected(&self) -> Result<bool, IncidenceError> {
        self.require_geometry()?;
        if self.rank() >= 2 && !self.is_connected() {
            return Ok(false);
        }
        Ok(self.proper_residues_connected_unchecked())
    }

    /// Like [`is_residually_connected`](Self::is_residually_connected) but
    /// only over residues of nonempty flags; the connectivity of the whole
    /// system is left out.
    pub fn proper_residues_connected(&self) -> Result<bool, IncidenceError> {
        self.require_geometry()?;
        Ok(self.proper_residues_connected_unchecked())
    }

    /// Diameters and gonality of a connected rank-2 system. Type 0 plays the
    /// role of points.
    pub fn rank2_parameters(&self) -> Result<Rank2Params, IncidenceError> {
        if self.rank() != 2 {
            return Err(IncidenceError::NotRankTwo(self.rank()));
        }
        if !self.is_connected() {
            return Err(IncidenceError::Disconnected);
        }
        let n = self.len();
        let mut dist = vec![UNSEEN; n];
        let mut queue = VecDeque::new();
        let mut diam = [0u32; 2];
        for root in 0..n {
            bfs(&self.adj, root, &mut dist, &mut queue);
            let ecc = dist.iter().copied().max().unwrap_or(0);
            let t = self.type_of[root];
            diam[t] = diam[t].max(ecc);
        }
        Ok(Rank2Params {
            point_diameter: diam[0],
            gonality: girth(&self.adj).map(|g| g / 2),
            line_diameter: diam[1],
        })
    }

    /// The residue of a flag restricted to the given pair of types, as a
    /// rank-2 system with `types.0` as points.
    pub(crate) fn rank2_residue(&self, members: &[u32], types: (usize, usize)) -> IncidenceSystem {
        self.induced(members, &[types.0, types.1]).0
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{names, polygon};
    use super::*;

    /// Shortest cycle through each edge by deleting it and searching for the
    /// shortest detour. Independent of the BFS-tree argument used by `girth`.
    fn girth_by_edge_deletion(adj: &[Vec<u32>]) -> Option<u32> {
        let mut best = None::<u32>;
        for u in 0..adj.len() {
            for &w in &adj[u] {
                if (w as usize) < u {
                    continue;
                }
                let mut dist = vec![UNSEEN; adj.len()];
                dist[u] = 0;
                let mut q = VecDeque::from([u as u32]);
                while let Some(x) = q.pop_front() {
                    for &y in &adj[x as usize] {
                        let skip = (x as usize == u && y == w) || (x == w && y as usize == u);
                        if !skip && dist[y as usize] == UNSEEN {
                            dist[y as usize] = dist[x as usize] + 1;
                            q.push_back(y);
                        }
                    }
                }
                if dist[w as usize] != UNSEEN {
                    let len = dist[w as usize] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    #[test]
    fn polygon_parameters() {
        for n in 3..8 {
            let p = polygon(n).rank2_parameters().unwrap();
            assert_eq!(p.gonality, Some(n as u32));
            assert_eq!(p.point_diameter, n as u32);
            assert_eq!(p.line_diameter, n as u32);
            assert_eq!(girth(polygon(n).adjacency()), girth_by_edge_deletion(polygon(n).adjacency()));
        }
    }

    #[test]
    fn generalized_digon() {
        // two points, two lines, everything incident
        let sys = IncidenceSystem::new(
            names(&["P", "L"]),
            vec![0, 0, 1, 1],
            Vec::new(),
            [(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap();
        let p = sys.rank2_parameters().unwrap();
        assert_eq!((p.point_diameter, p.gonality, p.line_diameter), (2, Some(2), 2));
    }

    #[test]
    fn trees_have_no_gonality_and_disconnected_is_rejected() {
        let path = IncidenceSystem::new(
            names(&["P", "L"]),
            vec![0, 1, 0],
            Vec::new(),
            [(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(path.rank2_parameters().unwrap().gonality, None);

        let split = IncidenceSystem::new(
            names(&["P", "L"]),
            vec![0, 1, 0, 1],
            Vec::new(),
            [(0, 1), (2, 3)],
        )
        .unwrap();
        assert_eq!(split.connected_components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(split.rank2_parameters(), Err(IncidenceError::Disconnected));
    }
}
