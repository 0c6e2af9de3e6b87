//! Typed incidence systems: elements, a symmetric cross-type incidence
//! relation, flags, residues and the firmness classification.
//!
//! Incidence of an element with itself is implicit; the stored relation only
//! holds pairs of elements of distinct types, as sorted neighbor lists.

mod correlation;
mod diagram;
mod graph;

pub use correlation::{induced_type_perm, Correlation, CorrelationError};
pub use diagram::{Diagram, DiagramEdge, DiagramNode, PairLabel};
pub use graph::{girth, Rank2Params};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("invalid incidence system: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("elements {0:?} do not form a flag")]
    NotAFlag(Vec<usize>),
    #[error("the incidence system is not a geometry")]
    NotAGeometry,
    #[error("expected a rank-2 system, got rank {0}")]
    NotRankTwo(usize),
    #[error("the incidence graph is disconnected")]
    Disconnected,
    #[error("element {0} is out of range")]
    OutOfRange(usize),
}

/// One broken incidence-system axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two distinct elements of the same type are incident (or an element lists itself).
    SameTypeIncidence { a: usize, b: usize },
    /// `b` is listed as a neighbor of `a` but not the other way round.
    Asymmetric { a: usize, b: usize },
    /// Neighbor id outside the element range.
    DanglingNeighbor { a: usize, b: usize },
    /// Element carries a type index outside the type set.
    UnknownType { element: usize },
    /// A type with no elements.
    EmptyType { type_index: usize },
    /// Neighbor list not strictly increasing.
    UnsortedNeighbors { element: usize },
}

/// Chamber-count classification of co-rank-1 flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Firmness {
    /// Some co-rank-1 flag lies in fewer than two chambers.
    NotFirm,
    /// Every co-rank-1 flag lies in exactly two chambers.
    Thin,
    /// Every co-rank-1 flag lies in at least three chambers.
    Thick,
    /// Firm, with a mix of exactly-two and three-or-more.
    FirmMixed,
}

impl Firmness {
    pub fn is_firm(self) -> bool {
        !matches!(self, Firmness::NotFirm)
    }
}

/// A set of pairwise incident elements, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Flag(Vec<usize>);

impl Flag {
    pub fn empty() -> Self {
        Flag(Vec::new())
    }

    /// Checks pairwise incidence (which also forces distinct types).
    pub fn new(sys: &IncidenceSystem, mut elements: Vec<usize>) -> Result<Self, IncidenceError> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= sys.len()) {
            return Err(IncidenceError::OutOfRange(x));
        }
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[i + 1..] {
                if !sys.incident(a, b) {
                    return Err(IncidenceError::NotAFlag(elements));
                }
            }
        }
        Ok(Flag(elements))
    }

    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        Flag(elements)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Sorted type indices of the members.
    pub fn types(&self, sys: &IncidenceSystem) -> Vec<usize> {
        let mut t: Vec<usize> = self.0.iter().map(|&x| sys.type_of(x)).collect();
        t.sort_unstable();
        t
    }

    pub fn union(&self, other: &Flag) -> Vec<usize> {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// A finite incidence system over an ordered type set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSystem {
    types: Vec<String>,
    type_of: Vec<usize>,
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
}

impl IncidenceSystem {
    /// Builds a system from an incidence list; pairs may be given in any order
    /// and are symmetrized. Fails if any axiom is broken.
    pub fn new(
        types: Vec<String>,
        type_of: Vec<usize>,
        labels: Vec<String>,
        incidences: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, IncidenceError> {
        let n = type_of.len();
        let mut adj = vec![Vec::new(); n];
        let mut dangling = Vec::new();
        for (a, b) in incidences {
            if a >= n || b >= n {
                dangling.push(Violation::DanglingNeighbor { a, b });
                continue;
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let sys = Self::from_raw_parts(types, type_of, labels, adj);
        let mut violations = sys.validate();
        violations.extend(dangling);
        if violations.is_empty() {
            Ok(sys)
        } else {
            Err(IncidenceError::Invalid(violations))
        }
    }

    /// Assembles a system without any checking. Use [`validate`](Self::validate) afterwards.
    pub fn from_raw_parts(
        types: Vec<String>,
        type_of: Vec<usize>,
        mut labels: Vec<String>,
        adj: Vec<Vec<u32>>,
    ) -> Self {
        labels.resize(type_of.len(), String::new());
        IncidenceSystem {
            types,
            type_of,
            labels,
            adj,
        }
    }

    /// Lists every broken axiom; empty iff the system is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for (x, &t) in self.type_of.iter().enumerate() {
            if t >= self.types.len() {
                out.push(Violation::UnknownType { element: x });
            }
        }
        for (a, list) in self.adj.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                out.push(Violation::UnsortedNeighbors { element: a });
            }
            for &b in list {
                let b = b as usize;
                if b >= n {
                    out.push(Violation::DanglingNeighbor { a, b });
                    continue;
                }
                if self.type_of[a] == self.type_of[b] && a <= b {
                    out.push(Violation::SameTypeIncidence { a, b });
                }
                if !self.adj[b].contains(&(a as u32)) {
                    out.push(Violation::Asymmetric { a, b });
                }
            }
        }
        for t in 0..self.types.len() {
            if !self.type_of.contains(&t) {
                out.push(Violation::EmptyType { type_index: t });
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.type_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.type_of.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn type_of(&self, x: usize) -> usize {
        self.type_of[x]
    }

    pub fn type_map(&self) -> &[usize] {
        &self.type_of
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, x: usize) -> &[u32] {
        &self.adj[x]
    }

    pub fn incident(&self, a: usize, b: usize) -> bool {
        a == b || self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn elements_of_type(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.type_of[x] == t).collect()
    }

    pub fn type_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.rank()];
        for &t in &self.type_of {
            c[t] += 1;
        }
        c
    }

    /// Incident pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&b| (b as usize) > a)
                .map(move |&b| (a, b as usize))
        })
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Depth-first enumeration of all nonempty flags in lexicographic order.
    /// The callback also receives the elements incident to every member of
    /// the flag (and not in it), sorted.
    pub fn for_each_flag(&self, mut f: impl FnMut(&[usize], &[u32])) {
        let mut stack = Vec::with_capacity(self.rank());
        for x in 0..self.len() {
            stack.push(x);
            let common = self.adj[x].clone();
            self.extend_flags(&mut stack, &common, &mut f);
            stack.pop();
        }
    }

    fn extend_flags(
        &self,
        stack: &mut Vec<usize>,
        common: &[u32],
        f: &mut impl FnMut(&[usize], &[u32]),
    ) {
        f(stack, common);
        let last = *stack.last().unwrap() as u32;
        for &y in common.iter().filter(|&&y| y > last) {
            let next = intersect(common, &self.adj[y as usize]);
            stack.push(y as usize);
            self.extend_flags(stack, &next, f);
            stack.pop();
        }
    }

    /// Inclusion-maximal flags in lexicographic order.
    pub fn maximal_flags(&self) -> Vec<Flag> {
        if self.is_empty() {
            return alloc::vec![Flag::empty()];
        }
        let mut out = Vec::new();
        self.for_each_flag(|flag, common| {
            if common.is_empty() {
                out.push(Flag::from_sorted(flag.to_vec()));
            }
        });
        out
    }

    /// Flags containing one element of every type.
    pub fn chambers(&self) -> Vec<Flag> {
        if self.rank() == 0 {
            return alloc::vec![Flag::empty()];
        }
        let rank = self.rank();
        let mut out = Vec::new();
        self.for_each_flag(|flag, _| {
            if flag.len() == rank {
                out.push(Flag::from_sorted(flag.to_vec()));
            }
        });
        out
    }

    pub fn num_chambers(&self) -> usize {
        let rank = self.rank();
        let mut n = 0;
        self.for_each_flag(|flag, _| n += (flag.len() == rank) as usize);
        n
    }

    /// True iff every maximal flag is a chamber.
    pub fn is_geometry(&self) -> bool {
        let rank = self.rank();
        let mut ok = true;
        self.for_each_flag(|flag, common| {
            if common.is_empty() && flag.len() != rank {
                ok = false;
            }
        });
        ok
    }

    pub(crate) fn require_geometry(&self) -> Result<(), IncidenceError> {
        if self.is_geometry() {
            Ok(())
        } else {
            Err(IncidenceError::NotAGeometry)
        }
    }

    /// Elements incident to every member of `flag` and not in it.
    pub fn incident_to_flag(&self, flag: &Flag) -> Vec<u32> {
        match flag.elements().split_first() {
            None => (0..self.len() as u32).collect(),
            Some((&first, rest)) => rest
                .iter()
                .fold(self.adj[first].clone(), |acc, &x| intersect(&acc, &self.adj[x])),
        }
    }

    /// The residue of `flag`.
    pub fn residue(&self, flag: &Flag) -> Result<IncidenceSystem, IncidenceError> {
        self.residue_embedded(flag).map(|(sys, _)| sys)
    }

    /// The residue together with the parent id of each of its elements.
    pub fn residue_embedded(
        &self,
        flag: &Flag,
    ) -> Result<(IncidenceSystem, Vec<usize>), IncidenceError> {
        let checked = Flag::new(self, flag.elements().to_vec())?;
        let used = checked.types(self);
        let kept: Vec<usize> = (0..self.rank()).filter(|t| !used.contains(t)).collect();
        let members = self.incident_to_flag(&checked);
        Ok(self.induced(&members, &kept))
    }

    /// Subsystem induced on `members` (sorted) whose types all lie in `kept`.
    pub(crate) fn induced(&self, members: &[u32], kept: &[usize]) -> (IncidenceSystem, Vec<usize>) {
        let mut type_index = vec![usize::MAX; self.rank()];
        for (i, &t) in kept.iter().enumerate() {
            type_index[t] = i;
        }
        let mut local = hashbrown::HashMap::with_capacity(members.len());
        for (i, &x) in members.iter().enumerate() {
            local.insert(x, i as u32);
        }
        let adj = members
            .iter()
            .map(|&x| {
                self.adj[x as usize]
                    .iter()
                    .filter_map(|y| local.get(y).copied())
                    .collect()
            })
            .collect();
        let sys = IncidenceSystem {
            types: kept.iter().map(|&t| self.types[t].clone()).collect(),
            type_of: members
                .iter()
                .map(|&x| type_index[self.type_of[x as usize]])
                .collect(),
            labels: members
                .iter()
                .map(|&x| self.labels[x as usize].clone())
                .collect(),
            adj,
        };
        (sys, members.iter().map(|&x| x as usize).collect())
    }

    /// Number of chambers through each co-rank-1 flag, keyed by the missing type.
    fn corank_one_counts(&self) -> Vec<Vec<usize>> {
        let rank = self.rank();
        let mut out = vec![Vec::new(); rank];
        if rank == 0 {
            return out;
        }
        if rank == 1 {
            out[0].push(self.len());
            return out;
        }
        self.for_each_flag(|flag, common| {
            if flag.len() == rank - 1 {
                let mut present = vec![false; rank];
                for &x in flag {
                    present[self.type_of[x]] = true;
                }
                let missing = present.iter().position(|p| !p).unwrap();
                out[missing].push(common.len());
            }
        });
        out
    }

    /// Classifies the geometry by how many chambers contain each co-rank-1 flag.
    pub fn firmness(&self) -> Result<Firmness, IncidenceError> {
        self.require_geometry()?;
        let counts: Vec<usize> = self.corank_one_counts().into_iter().flatten().collect();
        Ok(if counts.iter().any(|&c| c < 2) {
            Firmness::NotFirm
        } else if counts.iter().all(|&c| c == 2) {
            Firmness::Thin
        } else if counts.iter().all(|&c| c >= 3) {
            Firmness::Thick
        } else {
            Firmness::FirmMixed
        })
    }

    /// For each type `i`, `Some(s_i)` when every flag of co-type `i` has a
    /// residue of exactly `s_i + 1` elements.
    pub fn residue_orders(&self) -> Vec<Option<usize>> {
        self.corank_one_counts()
            .into_iter()
            .map(|c| match c.split_first() {
                Some((&first, rest)) if first > 0 && rest.iter().all(|&x| x == first) => {
                    Some(first - 1)
                }
                _ => None,
            })
            .collect()
    }
}

pub fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Points and lines of a polygon with `n` sides (gonality `n`).
    pub(crate) fn polygon(n: usize) -> IncidenceSystem {
        let mut inc = Vec::new();
        for i in 0..n {
            inc.push((i, n + i));
            inc.push(((i + 1) % n, n + i));
        }
        let type_of = (0..2 * n).map(|x| (x >= n) as usize).collect();
        IncidenceSystem::new(names(&["P", "L"]), type_of, Vec::new(), inc).unwrap()
    }

    /// Vertices and edges of the triangle, as a point-line system.
    pub(crate) fn triangle() -> IncidenceSystem {
        polygon(3)
    }

    #[test]
    fn validate_reports_injected_faults() {
        let good = triangle();
        assert!(good.validate().is_empty());

        let mut adj: Vec<Vec<u32>> = (0..good.len()).map(|x| good.neighbors(x).to_vec()).collect();
        adj[0].insert(0, 1);
        adj[1].insert(0, 0);
        let same_type = IncidenceSystem::from_raw_parts(
            good.types().to_vec(),
            good.type_map().to_vec(),
            Vec::new(),
            adj,
        );
        assert_eq!(same_type.validate(), vec![Violation::SameTypeIncidence { a: 0, b: 1 }]);

        let mut adj: Vec<Vec<u32>> = (0..good.len()).map(|x| good.neighbors(x).to_vec()).collect();
        adj[3].retain(|&y| y != 0);
        let asym = IncidenceSystem::from_raw_parts(
            good.types().to_vec(),
            good.type_map().to_vec(),
            Vec::new(),
            adj,
        );
        assert_eq!(asym.validate(), vec![Violation::Asymmetric { a: 0, b: 3 }]);
    }

    #[test]
    fn empty_type_class_is_a_violation() {
        let err = IncidenceSystem::new(names(&["P", "L"]), vec![0, 0], Vec::new(), []).unwrap_err();
        assert_eq!(
            err,
            IncidenceError::Invalid(vec![Violation::EmptyType { type_index: 1 }])
        );
    }

    #[test]
    fn triangle_flags() {
        let t = triangle();
        let chambers = t.chambers();
        assert_eq!(chambers.len(), 6);
        assert_eq!(t.maximal_flags(), chambers);
        assert!(t.is_geometry());
        assert_eq!(t.firmness().unwrap(), Firmness::Thin);
    }

    #[test]
    fn square_maximal_flags_are_chambers() {
        let sq = polygon(4);
        assert_eq!(sq.maximal_flags().len(), 8);
        assert!(sq.maximal_flags().iter().all(|f| f.len() == 2));
    }

    #[test]
    fn rank_one_system_is_a_geometry() {
        let sys = IncidenceSystem::new(names(&["P"]), vec![0, 0, 0], Vec::new(), []).unwrap();
        assert!(sys.is_geometry());
        assert_eq!(sys.chambers().len(), 3);
    }

    #[test]
    fn residues() {
        let sq = polygon(4);
        let r = sq.residue(&Flag::new(&sq, vec![0]).unwrap()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.types(), &["L".to_string()]);

        let chamber = sq.chambers()[0].clone();
        let empty = sq.residue(&chamber).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.rank(), 0);

        assert_eq!(sq.residue(&Flag::empty()).unwrap(), sq);
        assert!(matches!(
            sq.residue(&Flag::from_sorted(vec![0, 1])),
            Err(IncidenceError::NotAFlag(_))
        ));
    }
}
