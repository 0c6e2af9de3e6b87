//! The rank-three triangle complex of a point-line geometry.
//!
//! Elements are triples `(p, L, i)` with `(p, L)` a flag and `i` one of three
//! copies; copy `i` is type `i` (0-based here, printed 1-based). Element ids
//! are `i * F + f` where `f` indexes the flags sorted by point, then line.
//! `(p, L, i)` is incident to `(p', L', i + 1 mod 3)` when `L` and `L'` meet
//! exactly in `p` and `p' != p`; the stored relation is the symmetric closure.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::incidence::{intersect, Correlation, CorrelationError, IncidenceSystem};
use crate::perm::Permutation;
use crate::space::{LinearSpace, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("the source geometry is not a linear space")]
    NotLinear,
    #[error("points {0:?} are not a non-collinear triple")]
    Collinear([u32; 3]),
    #[error("elements {0:?} do not form a chamber")]
    NotAChamber(Vec<usize>),
    #[error("map is not an automorphism of the source geometry")]
    NotAnAutomorphism,
    #[error("map is not a duality of the source geometry")]
    NotADuality,
    #[error("the source geometry is not a complete graph")]
    NotCompleteGraph,
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error("projection needs a thick linear space or K_v with v >= 4: {0}")]
    NotApplicable(String),
    #[error("flags through element {element} of the source are not sent to a common element")]
    PencilSplit { element: usize },
    #[error("extracted map does not reproduce the correlation at element {element}")]
    Reconstruction { element: usize },
    #[error("extracted map is not a bijection")]
    NotAMap,
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionKind {
    /// `lift(map) ∘ τ^rotation`.
    Automorphism,
    /// `lift_duality(map) ∘ τ^rotation`.
    Duality,
    /// `lift(map) ∘ β ∘ τ^rotation`, only for complete graphs.
    KvBeta,
}

/// A correlation of the complex factored through the source geometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    /// Permutation of the source's elements (points, then lines).
    pub map: Permutation,
    pub kind: ProjectionKind,
    /// Power of the canonical triality, in `0..3`.
    pub rotation: u8,
}

#[derive(Debug, Clone)]
pub struct TriangleComplex {
    space: LinearSpace,
    sys: IncidenceSystem,
    flags: Vec<(u32, u32)>,
    point_start: Vec<u32>,
}

/// Type permutation of `τ^k` on three types.
fn rotation_types(k: usize) -> Permutation {
    Permutation::from_fn(3, |t| (t + k) % 3).expect("rotation")
}

const SWAP_TWO_THREE: [usize; 3] = [0, 2, 1];

impl TriangleComplex {
    pub fn new(space: &LinearSpace) -> Self {
        let flags = space.flags();
        let f = flags.len();
        let v = space.num_points();
        let mut point_start = vec![0u32; v + 1];
        for &(p, _) in &flags {
            point_start[p as usize + 1] += 1;
        }
        for p in 0..v {
            point_start[p + 1] += point_start[p];
        }
        let flag_index = |p: u32, l: u32| -> usize {
            let pos = space.pencil(p as usize).binary_search(&l).expect("flag");
            point_start[p as usize] as usize + pos
        };

        let mut adj = vec![Vec::new(); 3 * f];
        for (fi, &(p, l)) in flags.iter().enumerate() {
            let line = space.line(l as usize);
            for &l2 in space.pencil(p as usize) {
                if l2 == l {
                    continue;
                }
                let other = space.line(l2 as usize);
                if !space.is_linear() && intersect(line, other).len() != 1 {
                    continue;
                }
                for &p2 in other {
                    if p2 == p {
                        continue;
                    }
                    let gi = flag_index(p2, l2);
                    for copy in 0..3 {
                        let a = copy * f + fi;
                        let b = ((copy + 1) % 3) * f + gi;
                        adj[a].push(b as u32);
                        adj[b].push(a as u32);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let labels = (0..3)
            .flat_map(|copy| {
                flags
                    .iter()
                    .map(move |&(p, l)| format!("({},{},{})", p, l, copy + 1))
            })
            .collect();
        let type_of = (0..3 * f).map(|x| x / f.max(1)).collect();
        let sys = IncidenceSystem::from_raw_parts(
            vec![String::from("1"), String::from("2"), String::from("3")],
            type_of,
            labels,
            adj,
        );
        debug_assert!(f == 0 || sys.validate().is_empty());
        TriangleComplex {
            space: space.clone(),
            sys,
            flags,
            point_start,
        }
    }

    /// True when the source is not a linear space, so the complex need not be a geometry.
    pub fn has_warning(&self) -> bool {
        !self.space.is_linear()
    }

    pub fn space(&self) -> &LinearSpace {
        &self.space
    }

    pub fn incidence_system(&self) -> &IncidenceSystem {
        &self.sys
    }

    pub fn num_flags(&self) -> usize {
        self.flags.len()
    }

    pub fn len(&self) -> usize {
        self.sys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sys.is_empty()
    }

    /// Id of `(p, line, copy)`, `copy` in `0..3`.
    pub fn element(&self, p: usize, line: usize, copy: usize) -> Option<usize> {
        if copy >= 3 || p >= self.space.num_points() {
            return None;
        }
        let pos = self.space.pencil(p).binary_search(&(line as u32)).ok()?;
        Some(copy * self.flags.len() + self.point_start[p] as usize + pos)
    }

    /// `(p, line, copy)` of an element id.
    pub fn decode(&self, x: usize) -> (usize, usize, usize) {
        let f = self.flags.len();
        let (p, l) = self.flags[x % f];
        (p as usize, l as usize, x / f)
    }

    fn build(&self, image: impl Fn(usize, usize, usize) -> (usize, usize, usize)) -> Permutation {
        let images = (0..self.len())
            .map(|x| {
                let (p, l, c) = self.decode(x);
                let (p2, l2, c2) = image(p, l, c);
                self.element(p2, l2, c2).expect("image is a flag") as u32
            })
            .collect();
        Permutation::from_images_unchecked(images)
    }

    fn tau_perm(&self, k: usize) -> Permutation {
        let f = self.flags.len();
        let n = self.len();
        Permutation::from_fn(n, |x| (x + (k % 3) * f) % n).expect("rotation")
    }

    /// `τ^k` without re-verification.
    pub(crate) fn tau_power(&self, k: usize) -> Correlation {
        Correlation::from_parts(self.tau_perm(k), rotation_types(k))
    }

    /// The canonical triality `(p, L, i) ↦ (p, L, i + 1)`, verified.
    pub fn canonical_triality(&self) -> Result<Correlation, TriangleError> {
        Ok(Correlation::with_type_perm(
            &self.sys,
            self.tau_perm(1),
            &rotation_types(1),
        )?)
    }

    /// All chambers in lexicographic order.
    pub fn chambers(&self) -> Vec<[usize; 3]> {
        self.sys
            .chambers()
            .into_iter()
            .map(|c| [c.elements()[0], c.elements()[1], c.elements()[2]])
            .collect()
    }

    /// The non-collinear triple `(p1, p2, p3)` of a chamber
    /// `{(p1,[p1,p3],1), (p2,[p2,p1],2), (p3,[p2,p3],3)}`.
    pub fn chamber_to_triple(&self, chamber: &[usize]) -> Result<[u32; 3], TriangleError> {
        let bad = || TriangleError::NotAChamber(chamber.to_vec());
        if !self.space.is_linear() {
            return Err(TriangleError::NotLinear);
        }
        let mut c = chamber.to_vec();
        c.sort_unstable();
        if c.len() != 3 || c.iter().any(|&x| x >= self.len()) {
            return Err(bad());
        }
        if (0..3).any(|i| self.sys.type_of(c[i]) != i)
            || !(self.sys.incident(c[0], c[1]) && self.sys.incident(c[1], c[2]) && self.sys.incident(c[0], c[2]))
        {
            return Err(bad());
        }
        let (p1, l1, _) = self.decode(c[0]);
        let (p2, l2, _) = self.decode(c[1]);
        let (p3, l3, _) = self.decode(c[2]);
        let join = |a, b| self.space.line_through(a, b).ok();
        if join(p1, p3) != Some(l1) || join(p2, p1) != Some(l2) || join(p2, p3) != Some(l3) {
            return Err(bad());
        }
        Ok([p1 as u32, p2 as u32, p3 as u32])
    }

    pub fn triple_to_chamber(&self, triple: [u32; 3]) -> Result<[usize; 3], TriangleError> {
        if !self.space.is_linear() {
            return Err(TriangleError::NotLinear);
        }
        let [p1, p2, p3] = triple.map(|p| p as usize);
        let v = self.space.num_points();
        if p1 >= v || p2 >= v || p3 >= v || p1 == p2 || p2 == p3 || p1 == p3 || self.space.collinear(p1, p2, p3) {
            return Err(TriangleError::Collinear(triple));
        }
        let join = |a, b| self.space.line_through(a, b).expect("linear space");
        Ok([
            self.element(p1, join(p1, p3), 0).expect("flag"),
            self.element(p2, join(p2, p1), 1).expect("flag"),
            self.element(p3, join(p2, p3), 2).expect("flag"),
        ])
    }

    /// `(p, L, i) ↦ (g p, g L, i)` for an automorphism `g` of the source,
    /// given on all its elements.
    pub fn lift_automorphism(&self, g: &Permutation) -> Result<Correlation, TriangleError> {
        let (points, lines) = self
            .space
            .split_automorphism(g)
            .map_err(|_| TriangleError::NotAnAutomorphism)?;
        let perm = self.build(|p, l, c| (points.apply(p), lines.apply(l), c));
        Ok(Correlation::with_type_perm(&self.sys, perm, &Permutation::identity(3))?)
    }

    /// [`lift_automorphism`](Self::lift_automorphism) for a map given on points only.
    pub fn lift_point_map(&self, g: &Permutation) -> Result<Correlation, TriangleError> {
        let full = self
            .space
            .automorphism_from_points(g)
            .map_err(|_| TriangleError::NotAnAutomorphism)?;
        self.lift_automorphism(&full)
    }

    /// `(p, L, i) ↦ (α L, α p, i')` with copies 2 and 3 exchanged, for a
    /// duality `α` of the source.
    pub fn lift_duality(&self, alpha: &Permutation) -> Result<Correlation, TriangleError> {
        if !self.space.is_duality(alpha) {
            return Err(TriangleError::NotADuality);
        }
        let v = self.space.num_points();
        let perm = self.build(|p, l, c| (alpha.apply(v + l), alpha.apply(p) - v, SWAP_TWO_THREE[c]));
        let types = Permutation::from_fn(3, |t| SWAP_TWO_THREE[t]).expect("swap");
        Ok(Correlation::with_type_perm(&self.sys, perm, &types)?)
    }

    /// The duality `β` of the complex of a complete graph: `p` moves to the
    /// other endpoint of its edge, copies 2 and 3 are exchanged.
    pub fn kv_beta(&self) -> Result<Correlation, TriangleError> {
        if !matches!(self.space.kind(), SpaceKind::Complete { .. }) {
            return Err(TriangleError::NotCompleteGraph);
        }
        let space = &self.space;
        let perm = self.build(|p, l, c| {
            let e = space.line(l);
            let other = if e[0] as usize == p { e[1] } else { e[0] };
            (other as usize, l, SWAP_TWO_THREE[c])
        });
        let types = Permutation::from_fn(3, |t| SWAP_TWO_THREE[t]).expect("swap");
        Ok(Correlation::with_type_perm(&self.sys, perm, &types)?)
    }

    fn projection_applies(&self) -> Result<bool, ProjectionError> {
        let s = &self.space;
        if !s.is_linear() {
            return Err(ProjectionError::NotApplicable(String::from("source is not a linear space")));
        }
        if let SpaceKind::Complete { v } = s.kind() {
            return if v >= 4 {
                Ok(true)
            } else {
                Err(ProjectionError::NotApplicable(format!("K_{v}")))
            };
        }
        let thick = s.lines().iter().all(|l| l.len() >= 3) && (0..s.num_points()).all(|p| s.pencil(p).len() >= 3);
        if thick {
            Ok(false)
        } else {
            Err(ProjectionError::NotApplicable(String::from("source is not thick")))
        }
    }

    /// Factors a correlation through the source geometry, checking pencil
    /// consistency and that the factorization reproduces it on every element.
    pub fn project_correlation(&self, phi: &Correlation) -> Result<Projection, ProjectionError> {
        let complete = self.projection_applies()?;
        phi.verify(&self.sys)?;
        let tp = phi.type_perm();
        let odd = tp.is_odd();
        // choose k so that phi ∘ τ^-k fixes type 0
        let pre = tp.inverse().apply(0);
        let k = if odd { (3 - pre) % 3 } else { tp.apply(0) };
        let psi = phi.compose(&self.tau_power(3 - k % 3));
        debug_assert_eq!(psi.type_perm().apply(0), 0);

        let (map, kind) = if !odd {
            (self.extract(psi.perm(), false)?, ProjectionKind::Automorphism)
        } else if complete {
            let beta = self.kv_beta()?;
            let rest = psi.compose(&beta);
            (self.extract(rest.perm(), false)?, ProjectionKind::KvBeta)
        } else {
            (self.extract(psi.perm(), true)?, ProjectionKind::Duality)
        };
        let projection = Projection {
            map,
            kind,
            rotation: k as u8,
        };
        let rebuilt = self.reconstruct(&projection)?;
        if let Some(x) = (0..self.len()).find(|&x| rebuilt.apply(x) != phi.apply(x)) {
            return Err(ProjectionError::Reconstruction { element: x });
        }
        Ok(projection)
    }

    /// Reads off the map on the source from the copy-0 elements: a point
    /// image from each pencil, a line image from each point row.
    fn extract(&self, psi: &Permutation, dual: bool) -> Result<Permutation, ProjectionError> {
        let v = self.space.num_points();
        let b = self.space.num_lines();
        let mut images = vec![u32::MAX; v + b];
        let mut set = |slot: usize, value: usize| -> Result<(), ProjectionError> {
            if images[slot] == u32::MAX {
                images[slot] = value as u32;
                Ok(())
            } else if images[slot] as usize == value {
                Ok(())
            } else {
                Err(ProjectionError::PencilSplit { element: slot })
            }
        };
        for (fi, &(p, l)) in self.flags.iter().enumerate() {
            let (p2, l2, c2) = self.decode(psi.apply(fi));
            if c2 != 0 {
                return Err(ProjectionError::Reconstruction { element: fi });
            }
            if dual {
                set(v + l as usize, p2)?;
                set(p as usize, v + l2)?;
            } else {
                set(p as usize, p2)?;
                set(v + l as usize, v + l2)?;
            }
        }
        Permutation::from_images(images).map_err(|_| ProjectionError::NotAMap)
    }

    /// The correlation described by a projection.
    pub fn reconstruct(&self, proj: &Projection) -> Result<Correlation, TriangleError> {
        let base = match proj.kind {
            ProjectionKind::Automorphism => self.lift_automorphism(&proj.map)?,
            ProjectionKind::Duality => self.lift_duality(&proj.map)?,
            ProjectionKind::KvBeta => self.lift_automorphism(&proj.map)?.compose(&self.kv_beta()?),
        };
        Ok(base.compose(&self.tau_power(proj.rotation as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(space: LinearSpace) -> TriangleComplex {
        TriangleComplex::new(&space)
    }

    #[test]
    fn sizes() {
        let ag = delta(LinearSpace::affine_space(2, 3).unwrap());
        assert_eq!(ag.len(), 108);
        assert_eq!(ag.incidence_system().type_counts(), vec![36, 36, 36]);
        let fano = delta(LinearSpace::projective_space(2, 2).unwrap());
        assert_eq!(fano.len(), 63);
        assert!(fano.incidence_system().validate().is_empty());
        let k3 = delta(LinearSpace::complete_graph(3).unwrap());
        assert_eq!(k3.len(), 18);
        assert_eq!(k3.incidence_system().connected_components().len(), 6);
    }

    #[test]
    fn incidence_rule_by_definition() {
        // recompute every pair from the rule on point and line sets
        let s = LinearSpace::projective_space(2, 2).unwrap();
        let d = delta(s.clone());
        let sys = d.incidence_system();
        for x in 0..d.len() {
            for y in (0..d.len()).filter(|&y| y != x) {
                let (p, l, i) = d.decode(x);
                let (p2, l2, j) = d.decode(y);
                let rule = |p: usize, l: usize, p2: usize, l2: usize| {
                    let common: Vec<u32> = s.line(l).iter().filter(|q| s.line(l2).contains(q)).copied().collect();
                    common == [p as u32] && p != p2
                };
                let expected = (j == (i + 1) % 3 && rule(p, l, p2, l2)) || (i == (j + 1) % 3 && rule(p2, l2, p, l));
                assert_eq!(sys.incident(x, y), expected, "{x} {y}");
            }
        }
    }

    #[test]
    fn triality_and_chambers() {
        let d = delta(LinearSpace::complete_graph(4).unwrap());
        let tau = d.canonical_triality().unwrap();
        assert!(tau.is_triality());
        assert!(tau.pow(3).perm().is_identity());
        let c = d.triple_to_chamber([0, 1, 2]).unwrap();
        let edge = |a, b| d.space().line_through(a, b).unwrap();
        assert_eq!(
            c,
            [
                d.element(0, edge(0, 2), 0).unwrap(),
                d.element(1, edge(1, 0), 1).unwrap(),
                d.element(2, edge(1, 2), 2).unwrap()
            ]
        );
        assert_eq!(d.chamber_to_triple(&c).unwrap(), [0, 1, 2]);
        assert!(d.triple_to_chamber([0, 1, 1]).is_err());
    }

    #[test]
    fn kv_beta_is_an_involutive_duality() {
        let d = delta(LinearSpace::complete_graph(4).unwrap());
        let beta = d.kv_beta().unwrap();
        assert!(beta.is_duality());
        assert_eq!(beta.order(), 2);
        let tau = d.canonical_triality().unwrap();
        assert_eq!(beta.compose(&tau).type_perm().order(), 2);
        let c = d.triple_to_chamber([0, 1, 2]).unwrap();
        let mut img: Vec<usize> = c.iter().map(|&x| beta.apply(x)).collect();
        img.sort_unstable();
        assert!(d.chamber_to_triple(&img).is_ok());
        let p = d.project_correlation(&beta).unwrap();
        assert_eq!(p.kind, ProjectionKind::KvBeta);
        assert!(p.map.is_identity());
        assert!(delta(LinearSpace::affine_space(2, 3).unwrap()).kv_beta().is_err());
    }

    #[test]
    fn projecting_tau_and_lifts() {
        let s = LinearSpace::affine_space(2, 4).unwrap();
        let d = delta(s.clone());
        let tau = d.canonical_triality().unwrap();
        let p = d.project_correlation(&tau).unwrap();
        assert_eq!((p.kind, p.rotation), (ProjectionKind::Automorphism, 1));
        assert!(p.map.is_identity());
        // x -> x + (1, 0)
        let field = s.field().unwrap().clone();
        let shift = Permutation::from_fn(16, |x| {
            let c = s.coords(x);
            s.locate(&[field.add_idx(c[0], field.one_idx()), c[1]]).unwrap()
        })
        .unwrap();
        let g = d.lift_point_map(&shift).unwrap();
        assert!((0..d.len()).all(|x| g.apply(x) != x));
        assert_eq!(g.compose(&tau), tau.compose(&g));
        let back = d.project_correlation(&g.compose(&tau.pow(2))).unwrap();
        assert_eq!(back.rotation, 2);
        assert_eq!(back.map, s.automorphism_from_points(&shift).unwrap());
    }

    #[test]
    fn fano_polarity_lifts_to_a_duality() {
        // point (a,b,c) <-> line a x + b y + c z = 0
        let s = LinearSpace::projective_space(2, 2).unwrap();
        let d = delta(s.clone());
        let v = s.num_points();
        let mut images = vec![0u32; 2 * v];
        for p in 0..v {
            let c = s.coords(p);
            let on: Vec<u32> = (0..v as u32)
                .filter(|&x| {
                    let y = s.coords(x as usize);
                    (c[0] * y[0] + c[1] * y[1] + c[2] * y[2]).is_multiple_of(2)
                })
                .collect();
            let l = s.lines().iter().position(|line| *line == on).unwrap();
            images[p] = (v + l) as u32;
            images[v + l] = p as u32;
        }
        let alpha = Permutation::from_images(images).unwrap();
        assert!(s.is_duality(&alpha));
        let lifted = d.lift_duality(&alpha).unwrap();
        assert_eq!(lifted.order(), 2);
        assert_eq!(lifted.type_perm(), &Permutation::from_cycles(3, &[&[1, 2]]).unwrap());
        assert!(lifted.compose(&lifted).perm().is_identity());
        let p = d.project_correlation(&lifted).unwrap();
        assert_eq!((p.kind, p.rotation), (ProjectionKind::Duality, 0));
        assert_eq!(p.map, alpha);
        let tau = d.canonical_triality().unwrap();
        let p = d.project_correlation(&lifted.compose(&tau)).unwrap();
        assert_eq!(p.kind, ProjectionKind::Duality);
    }

    #[test]
    fn projection_refuses_thin_sources() {
        let d = delta(LinearSpace::complete_graph(3).unwrap());
        let tau = d.canonical_triality().unwrap();
        assert!(matches!(d.project_correlation(&tau), Err(ProjectionError::NotApplicable(_))));
    }

    #[test]
    fn non_linear_sources_carry_a_warning() {
        let d = delta(LinearSpace::cycle(4).unwrap());
        assert!(d.has_warning());
        assert!(!d.incidence_system().is_geometry());
        let cube = delta(LinearSpace::cube());
        assert!(!cube.incidence_system().is_geometry());
    }
}
