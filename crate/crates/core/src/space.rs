//! Finite point-line geometries: complete graphs, projective and affine
//! spaces, Hermitian unitals, and a few small non-linear controls.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::incidence::IncidenceSystem;
use crate::perm::Permutation;

/// Upper bound on the number of points a builder will produce.
pub const MAX_POINTS: usize = 4096;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("too many points ({0})")]
    TooLarge(usize),
    #[error("not a linear space: {0:?}")]
    NotLinear(LinearityViolation),
    #[error("{0} is not a point")]
    NotAPoint(usize),
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("map is not an automorphism")]
    NotAnAutomorphism,
}

/// The first linear-space axiom found to fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearityViolation {
    NotRankTwo { rank: usize },
    ShortLine { line: usize },
    PoorPoint { point: usize },
    NoCommonLine { a: usize, b: usize },
    SeveralCommonLines { a: usize, b: usize },
}

/// Which family a space was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    Complete { v: u32 },
    Projective { n: u32, q: u32 },
    Affine { n: u32, q: u32 },
    Unital { q: u32 },
    Custom,
}

impl core::fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            SpaceKind::Complete { v } => write!(f, "K{v}"),
            SpaceKind::Projective { n, q } => write!(f, "PG({n},{q})"),
            SpaceKind::Affine { n, q } => write!(f, "AG({n},{q})"),
            SpaceKind::Unital { q } => write!(f, "UH({q})"),
            SpaceKind::Custom => write!(f, "custom"),
        }
    }
}

/// Checks the three linear-space axioms on a rank-2 system whose type 0
/// holds the points.
pub fn is_linear_space(sys: &IncidenceSystem) -> Result<(), LinearityViolation> {
    if sys.rank() != 2 {
        return Err(LinearityViolation::NotRankTwo { rank: sys.rank() });
    }
    let points = sys.elements_of_type(0);
    for x in 0..sys.len() {
        if sys.neighbors(x).len() < 2 {
            return Err(if sys.type_of(x) == 0 {
                LinearityViolation::PoorPoint { point: x }
            } else {
                LinearityViolation::ShortLine { line: x }
            });
        }
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let common = crate::incidence::intersect(sys.neighbors(a), sys.neighbors(b));
            match common.len() {
                0 => return Err(LinearityViolation::NoCommonLine { a, b }),
                1 => {}
                _ => return Err(LinearityViolation::SeveralCommonLines { a, b }),
            }
        }
    }
    Ok(())
}

/// A rank-2 point-line geometry, normally a linear space.
///
/// Points are `0..v`; in the underlying incidence system line `j` has id `v + j`.
#[derive(Debug, Clone)]
pub struct LinearSpace {
    kind: SpaceKind,
    sys: IncidenceSystem,
    lines: Vec<Vec<u32>>,
    pencils: Vec<Vec<u32>>,
    /// `v * v` table of the line through two points, when unique.
    joins: Vec<u32>,
    linear: bool,
    coords: Vec<Vec<u16>>,
    field: Option<Field>,
}

impl PartialEq for LinearSpace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.lines == other.lines && self.num_points() == other.num_points()
    }
}

fn check_points(v: usize) -> Result<(), SpaceError> {
    if v > MAX_POINTS {
        Err(SpaceError::TooLarge(v))
    } else {
        Ok(())
    }
}

fn fmt_coords(c: &[u16]) -> String {
    let parts: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}

/// Row-major index of a coordinate vector, first coordinate most significant.
fn encode(c: &[u16], q: usize) -> usize {
    c.iter().fold(0, |acc, &x| acc * q + x as usize)
}

fn decode(mut idx: usize, len: usize, q: usize) -> Vec<u16> {
    let mut out = vec![0u16; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as u16;
        idx /= q;
    }
    out
}

/// Scales a nonzero vector so its first nonzero coordinate is one.
fn normalize(field: &Field, c: &mut [u16]) {
    if let Some(&lead) = c.iter().find(|&&x| x != 0) {
        let inv = field.inv_idx(lead).expect("nonzero");
        for x in c.iter_mut() {
            *x = field.mul_idx(*x, inv);
        }
    }
}

impl LinearSpace {
    /// Builds the geometry on `0..v` with the given lines and checks the
    /// linear-space axioms.
    pub fn from_lines(v: usize, lines: Vec<Vec<usize>>) -> Result<Self, SpaceError> {
        let space = Self::from_lines_unchecked(v, lines)?;
        is_linear_space(&space.sys).map_err(SpaceError::NotLinear)?;
        Ok(space)
    }

    /// Builds any point-line geometry, linear or not. Only the point ids are
    /// checked.
    pub fn from_lines_unchecked(v: usize, lines: Vec<Vec<usize>>) -> Result<Self, SpaceError> {
        check_points(v)?;
        let lines = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                match l.iter().find(|&&p| p >= v) {
                    Some(&p) => Err(SpaceError::NotAPoint(p)),
                    None => Ok(l.into_iter().map(|p| p as u32).collect()),
                }
            })
            .collect::<Result<Vec<Vec<u32>>, _>>()?;
        let labels = (0..v)
            .map(|p| format!("{p}"))
            .chain(lines.iter().map(|l| {
                let parts: Vec<String> = l.iter().map(|p| format!("{p}")).collect();
                format!("{{{}}}", parts.join(","))
            }))
            .collect();
        Ok(Self::assemble(SpaceKind::Custom, v, lines, labels, Vec::new(), None))
    }

    fn assemble(
        kind: SpaceKind,
        v: usize,
        lines: Vec<Vec<u32>>,
        labels: Vec<String>,
        coords: Vec<Vec<u16>>,
        field: Option<Field>,
    ) -> Self {
        let mut pencils = vec![Vec::new(); v];
        for (j, l) in lines.iter().enumerate() {
            for &p in l {
                pencils[p as usize].push(j as u32);
            }
        }
        let mut joins = vec![NONE; v * v];
        let mut linear = true;
        for (j, l) in lines.iter().enumerate() {
            for (i, &a) in l.iter().enumerate() {
                for &b in &l[i + 1..] {
                    let (a, b) = (a as usize, b as usize);
                    if joins[a * v + b] != NONE {
                        linear = false;
                        continue;
                    }
                    joins[a * v + b] = j as u32;
                    joins[b * v + a] = j as u32;
                }
            }
        }
        let type_of = (0..v).map(|_| 0).chain(lines.iter().map(|_| 1)).collect();
        let incidences = lines
            .iter()
            .enumerate()
            .flat_map(|(j, l)| l.iter().map(move |&p| (p as usize, v + j)));
        let sys = IncidenceSystem::new(
            vec![String::from("P"), String::from("L")],
            type_of,
            labels,
            incidences,
        );
        let sys = match sys {
            Ok(s) => s,
            // an empty line class or point class; keep the raw data for diagnostics
            Err(_) => {
                let mut adj = vec![Vec::new(); v + lines.len()];
                for (j, l) in lines.iter().enumerate() {
                    for &p in l {
                        adj[p as usize].push((v + j) as u32);
                        adj[v + j].push(p);
                    }
                }
                for a in adj.iter_mut() {
                    a.sort_unstable();
                }
                IncidenceSystem::from_raw_parts(
                    vec![String::from("P"), String::from("L")],
                    (0..v).map(|_| 0).chain(lines.iter().map(|_| 1)).collect(),
                    (0..v + lines.len()).map(|x| format!("{x}")).collect(),
                    adj,
                )
            }
        };
        let linear = linear && is_linear_space(&sys).is_ok();
        LinearSpace {
            kind,
            sys,
            lines,
            pencils,
            joins,
            linear,
            coords,
            field,
        }
    }

    /// Builds lines by scanning point pairs in order; `span(a, b)` returns the
    /// points of the line through `a` and `b`.
    fn by_pair_scan(v: usize, mut span: impl FnMut(usize, usize) -> Vec<u32>) -> Vec<Vec<u32>> {
        let mut done = vec![false; v * v];
        let mut lines = Vec::new();
        for a in 0..v {
            for b in a + 1..v {
                if done[a * v + b] {
                    continue;
                }
                let mut line = span(a, b);
                line.sort_unstable();
                for (i, &x) in line.iter().enumerate() {
                    for &y in &line[i + 1..] {
                        done[x as usize * v + y as usize] = true;
                        done[y as usize * v + x as usize] = true;
                    }
                }
                lines.push(line);
            }
        }
        lines
    }

    /// The complete graph `K_v`: lines are the 2-subsets of `0..v`.
    pub fn complete_graph(v: u32) -> Result<Self, SpaceError> {
        if v < 3 {
            return Err(SpaceError::InvalidParameter(format!(
                "complete graph needs v >= 3, got {v}"
            )));
        }
        let n = v as usize;
        check_points(n)?;
        let lines = Self::by_pair_scan(n, |a, b| vec![a as u32, b as u32]);
        let labels = (0..n)
            .map(|p| format!("{p}"))
            .chain(lines.iter().map(|l| format!("{{{},{}}}", l[0], l[1])))
            .collect();
        Ok(Self::assemble(SpaceKind::Complete { v }, n, lines, labels, Vec::new(), None))
    }

    /// `PG(n, q)`: points are normalized nonzero vectors of `GF(q)^(n+1)`,
    /// sorted lexicographically.
    pub fn projective_space(n: u32, q: u32) -> Result<Self, SpaceError> {
        if n < 2 {
            return Err(SpaceError::InvalidParameter(format!(
                "projective space needs n >= 2, got {n}"
            )));
        }
        let field = Field::of_order(q)?;
        let dim = n as usize + 1;
        let qs = q as usize;
        let total = qs.checked_pow(dim as u32).filter(|&t| t <= 64 * MAX_POINTS);
        let total = total.ok_or(SpaceError::TooLarge(usize::MAX))?;
        check_points((total - 1) / (qs - 1))?;

        let mut lookup = vec![NONE; total];
        let mut coords = Vec::new();
        for idx in 1..total {
            let c = decode(idx, dim, qs);
            if c.iter().find(|&&x| x != 0) == Some(&field.one_idx()) {
                lookup[idx] = coords.len() as u32;
                coords.push(c);
            }
        }
        let v = coords.len();
        let lines = Self::by_pair_scan(v, |a, b| {
            let (x, y) = (&coords[a], &coords[b]);
            let mut pts = vec![a as u32];
            for lambda in 0..qs as u16 {
                let mut c: Vec<u16> = y
                    .iter()
                    .zip(x)
                    .map(|(&yi, &xi)| field.add_idx(yi, field.mul_idx(lambda, xi)))
                    .collect();
                normalize(&field, &mut c);
                pts.push(lookup[encode(&c, qs)]);
            }
            pts
        });
        let labels = coords
            .iter()
            .map(|c| fmt_coords(c))
            .chain(lines.iter().map(|l| {
                format!("[{},{}]", fmt_coords(&coords[l[0] as usize]), fmt_coords(&coords[l[1] as usize]))
            }))
            .collect();
        Ok(Self::assemble(
            SpaceKind::Projective { n, q },
            v,
            lines,
            labels,
            coords,
            Some(field),
        ))
    }

    /// `AG(n, q)` for `q >= 3`: points are the vectors of `GF(q)^n`, lines
    /// the cosets of one-dimensional subspaces.
    pub fn affine_space(n: u32, q: u32) -> Result<Self, SpaceError> {
        if n < 2 {
            return Err(SpaceError::InvalidParameter(format!(
                "affine space needs n >= 2, got {n}"
            )));
        }
        if q == 2 {
            return Err(SpaceError::InvalidParameter(String::from(
                "AG(n,2) has two-point lines; use the complete graph kv 2^n instead",
            )));
        }
        let field = Field::of_order(q)?;
        let qs = q as usize;
        let v = qs
            .checked_pow(n)
            .filter(|&t| t <= MAX_POINTS)
            .ok_or(SpaceError::TooLarge(usize::MAX))?;
        let coords: Vec<Vec<u16>> = (0..v).map(|i| decode(i, n as usize, qs)).collect();
        let lines = Self::by_pair_scan(v, |a, b| {
            let (x, y) = (&coords[a], &coords[b]);
            let dir: Vec<u16> = y.iter().zip(x).map(|(&yi, &xi)| field.sub_idx(yi, xi)).collect();
            (0..qs as u16)
                .map(|lambda| {
                    let c: Vec<u16> = x
                        .iter()
                        .zip(&dir)
                        .map(|(&xi, &di)| field.add_idx(xi, field.mul_idx(lambda, di)))
                        .collect();
                    encode(&c, qs) as u32
                })
                .collect()
        });
        let labels = coords
            .iter()
            .map(|c| fmt_coords(c))
            .chain(lines.iter().map(|l| {
                format!("[{},{}]", fmt_coords(&coords[l[0] as usize]), fmt_coords(&coords[l[1] as usize]))
            }))
            .collect();
        Ok(Self::assemble(
            SpaceKind::Affine { n, q },
            v,
            lines,
            labels,
            coords,
            Some(field),
        ))
    }

    /// The Hermitian unital `UH(q)`: points of `PG(2, q^2)` on
    /// `x0^(q+1) + x1^(q+1) + x2^(q+1) = 0`, lines cut out by secants.
    pub fn hermitian_unital(q: u32) -> Result<Self, SpaceError> {
        if !(2..=5).contains(&q) {
            return Err(SpaceError::InvalidParameter(format!(
                "unital order must be in 2..=5, got {q}"
            )));
        }
        let field = Field::of_order(q * q)?;
        let qq = (q * q) as usize;
        let norm = |x: u16| field.pow_idx(x, q as u64 + 1);
        let on_curve = |c: &[u16]| {
            c.iter()
                .fold(0u16, |acc, &x| field.add_idx(acc, norm(x)))
                == 0
        };
        let total = qq * qq * qq;
        let mut lookup = vec![NONE; total];
        let mut coords = Vec::new();
        for idx in 1..total {
            let c = decode(idx, 3, qq);
            if c.iter().find(|&&x| x != 0) == Some(&field.one_idx()) && on_curve(&c) {
                lookup[idx] = coords.len() as u32;
                coords.push(c);
            }
        }
        let v = coords.len();
        let lines = Self::by_pair_scan(v, |a, b| {
            let (x, y) = (&coords[a], &coords[b]);
            let mut pts = vec![a as u32];
            for lambda in 0..qq as u16 {
                let mut c: Vec<u16> = y
                    .iter()
                    .zip(x)
                    .map(|(&yi, &xi)| field.add_idx(yi, field.mul_idx(lambda, xi)))
                    .collect();
                normalize(&field, &mut c);
                let p = lookup[encode(&c, qq)];
                if p != NONE {
                    pts.push(p);
                }
            }
            pts
        });
        let labels = coords
            .iter()
            .map(|c| fmt_coords(c))
            .chain(lines.iter().map(|l| {
                format!("[{},{}]", fmt_coords(&coords[l[0] as usize]), fmt_coords(&coords[l[1] as usize]))
            }))
            .collect();
        Ok(Self::assemble(
            SpaceKind::Unital { q },
            v,
            lines,
            labels,
            coords,
            Some(field),
        ))
    }

    /// The cycle `C_n` as a vertex-edge geometry (gonality `n`).
    pub fn cycle(n: usize) -> Result<Self, SpaceError> {
        Self::from_lines_unchecked(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
    }

    /// Vertex-edge geometry of the 3-cube (gonality 4).
    pub fn cube() -> Self {
        let mut edges = Vec::new();
        for a in 0..8usize {
            for bit in 0..3 {
                let b = a ^ (1 << bit);
                if a < b {
                    edges.push(vec![a, b]);
                }
            }
        }
        Self::from_lines_unchecked(8, edges).expect("valid point ids")
    }

    /// Near-pencil on `v` points: one line of `v - 1` points and `v - 1`
    /// two-point lines through the remaining point.
    pub fn near_pencil(v: usize) -> Result<Self, SpaceError> {
        if v < 3 {
            return Err(SpaceError::InvalidParameter(format!(
                "near-pencil needs v >= 3, got {v}"
            )));
        }
        let mut lines = vec![(1..v).collect::<Vec<_>>()];
        lines.extend((1..v).map(|p| vec![0, p]));
        Self::from_lines(v, lines)
    }

    /// Two points joined by two lines.
    pub fn digon() -> Self {
        Self::from_lines_unchecked(2, vec![vec![0, 1], vec![0, 1]]).expect("valid point ids")
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn incidence_system(&self) -> &IncidenceSystem {
        &self.sys
    }

    /// True when the linear-space axioms hold.
    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn num_points(&self) -> usize {
        self.pencils.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Sorted points of a line.
    pub fn line(&self, j: usize) -> &[u32] {
        &self.lines[j]
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    /// Sorted lines through a point.
    pub fn pencil(&self, p: usize) -> &[u32] {
        &self.pencils[p]
    }

    pub fn on_line(&self, p: usize, j: usize) -> bool {
        self.lines[j].binary_search(&(p as u32)).is_ok()
    }

    /// Common line size, if constant.
    pub fn line_size(&self) -> Option<usize> {
        constant(self.lines.iter().map(Vec::len))
    }

    /// Common number of lines per point, if constant.
    pub fn point_degree(&self) -> Option<usize> {
        constant(self.pencils.iter().map(Vec::len))
    }

    pub fn num_flags(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }

    /// Point-line flags sorted by point, then line.
    pub fn flags(&self) -> Vec<(u32, u32)> {
        self.pencils
            .iter()
            .enumerate()
            .flat_map(|(p, pencil)| pencil.iter().map(move |&l| (p as u32, l)))
            .collect()
    }

    /// Coordinates of a point (empty for spaces without coordinates).
    pub fn coords(&self, p: usize) -> &[u16] {
        self.coords.get(p).map_or(&[], Vec::as_slice)
    }

    /// Field of coordinates, when the space has one.
    pub fn field(&self) -> Option<&Field> {
        self.field.as_ref()
    }

    /// The point with the given coordinates, normalizing projective vectors.
    pub fn locate(&self, c: &[u16]) -> Option<usize> {
        let field = self.field.as_ref()?;
        let mut c = c.to_vec();
        if !matches!(self.kind, SpaceKind::Affine { .. }) {
            if c.iter().all(|&x| x == 0) {
                return None;
            }
            normalize(field, &mut c);
        }
        self.coords.binary_search(&c).ok()
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> Result<usize, SpaceError> {
        let v = self.num_points();
        for p in [a, b] {
            if p >= v {
                return Err(SpaceError::NotAPoint(p));
            }
        }
        if a == b {
            return Err(SpaceError::SamePoint);
        }
        match self.joins[a * v + b] {
            NONE => Err(SpaceError::NotLinear(LinearityViolation::NoCommonLine { a, b })),
            j => Ok(j as usize),
        }
    }

    /// True when `p3` lies on a common line with `p1` and `p2`.
    pub fn collinear(&self, p1: usize, p2: usize, p3: usize) -> bool {
        self.pencil(p1)
            .iter()
            .any(|&j| self.on_line(p2, j as usize) && self.on_line(p3, j as usize))
    }

    /// Ordered triples of pairwise distinct, non-collinear points, in
    /// lexicographic order.
    pub fn noncollinear_triples(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        let v = self.num_points();
        (0..v).flat_map(move |a| {
            (0..v).filter(move |&b| b != a).flat_map(move |b| {
                (0..v)
                    .filter(move |&c| c != a && c != b && !self.collinear(a, b, c))
                    .map(move |c| [a as u32, b as u32, c as u32])
            })
        })
    }

    pub fn num_noncollinear_triples(&self) -> usize {
        let v = self.num_points();
        let mut n = 0;
        for a in 0..v {
            for b in 0..v {
                if a == b {
                    continue;
                }
                match self.line_through(a, b) {
                    Ok(j) => n += v - self.lines[j].len(),
                    Err(_) => n += (0..v).filter(|&c| c != a && c != b && !self.collinear(a, b, c)).count(),
                }
            }
        }
        n
    }

    /// Index of a triple in lexicographic order, for orbit bookkeeping.
    pub fn triple_key(&self, t: [u32; 3]) -> usize {
        let v = self.num_points();
        (t[0] as usize * v + t[1] as usize) * v + t[2] as usize
    }

    /// The line permutation induced by a point permutation, if it maps lines to lines.
    pub fn induced_line_map(&self, g: &Permutation) -> Option<Permutation> {
        if g.degree() != self.num_points() {
            return None;
        }
        let images: Option<Vec<u32>> = self
            .lines
            .iter()
            .map(|l| {
                let mut img: Vec<u32> = l.iter().map(|&p| g.apply(p as usize) as u32).collect();
                img.sort_unstable();
                let j = self.line_of_points(&img)?;
                Some(j as u32)
            })
            .collect();
        Permutation::from_images(images?).ok()
    }

    fn line_of_points(&self, pts: &[u32]) -> Option<usize> {
        match pts {
            [a, b, ..] => {
                let j = self.line_through(*a as usize, *b as usize).ok()?;
                (self.lines[j] == pts).then_some(j)
            }
            _ => None,
        }
    }

    /// Extends a point permutation to all elements (points then lines).
    pub fn automorphism_from_points(&self, g: &Permutation) -> Result<Permutation, SpaceError> {
        let lines = self.induced_line_map(g).ok_or(SpaceError::NotAnAutomorphism)?;
        let v = self.num_points() as u32;
        let images = g
            .images()
            .iter()
            .copied()
            .chain(lines.images().iter().map(|&j| j + v))
            .collect();
        Ok(Permutation::from_images_unchecked(images))
    }

    /// Splits an element permutation into point and line parts, checking that
    /// it preserves type and incidence.
    pub fn split_automorphism(&self, g: &Permutation) -> Result<(Permutation, Permutation), SpaceError> {
        let v = self.num_points();
        if g.degree() != self.sys.len() {
            return Err(SpaceError::NotAnAutomorphism);
        }
        let points: Vec<u32> = (0..v).map(|p| g.apply(p) as u32).collect();
        if points.iter().any(|&p| p as usize >= v) {
            return Err(SpaceError::NotAnAutomorphism);
        }
        let points = Permutation::from_images(points).map_err(|_| SpaceError::NotAnAutomorphism)?;
        let expected = self.automorphism_from_points(&points)?;
        if &expected != g {
            return Err(SpaceError::NotAnAutomorphism);
        }
        let lines = self.induced_line_map(&points).ok_or(SpaceError::NotAnAutomorphism)?;
        Ok((points, lines))
    }

    /// Checks that an element permutation swaps points and lines and
    /// preserves incidence.
    pub fn is_duality(&self, alpha: &Permutation) -> bool {
        let n = self.sys.len();
        if alpha.degree() != n {
            return false;
        }
        (0..n).all(|x| self.sys.type_of(alpha.apply(x)) != self.sys.type_of(x))
            && self
                .sys
                .edges()
                .all(|(a, b)| self.sys.incident(alpha.apply(a), alpha.apply(b)))
    }
}

fn constant(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_design(s: &LinearSpace, v: usize, b: usize, k: usize, r: usize) {
        assert!(s.is_linear(), "{}", s.kind());
        assert_eq!(is_linear_space(s.incidence_system()), Ok(()));
        assert_eq!(s.num_points(), v);
        assert_eq!(s.num_lines(), b);
        assert_eq!(s.line_size(), Some(k));
        assert_eq!(s.point_degree(), Some(r));
        assert_eq!(s.num_flags(), v * r);
        assert_eq!(r, (v - 1) / (k - 1));
    }

    #[test]
    fn complete_graphs() {
        assert_design(&LinearSpace::complete_graph(3).unwrap(), 3, 3, 2, 2);
        let k5 = LinearSpace::complete_graph(5).unwrap();
        assert_design(&k5, 5, 10, 2, 4);
        assert_eq!(k5.num_flags(), 20);
        assert_eq!(LinearSpace::complete_graph(4).unwrap().point_degree(), Some(3));
        assert!(LinearSpace::complete_graph(2).is_err());
        let k4 = LinearSpace::complete_graph(4).unwrap();
        assert_eq!(k4.line(k4.line_through(0, 1).unwrap()), &[0, 1]);
    }

    #[test]
    fn projective_spaces() {
        let fano = LinearSpace::projective_space(2, 2).unwrap();
        assert_design(&fano, 7, 7, 3, 3);
        assert_eq!(fano.num_flags(), 21);
        assert_eq!(fano.coords(0), &[0, 0, 1]);
        assert_design(&LinearSpace::projective_space(3, 2).unwrap(), 15, 35, 3, 7);
        assert_design(&LinearSpace::projective_space(2, 3).unwrap(), 13, 13, 4, 4);
        assert_design(&LinearSpace::projective_space(2, 4).unwrap(), 21, 21, 5, 5);
        assert!(LinearSpace::projective_space(2, 6).is_err());
        assert!(LinearSpace::projective_space(1, 2).is_err());
    }

    #[test]
    fn projective_lines_are_two_dimensional_subspaces() {
        // x, y, z collinear iff det = 0 over GF(3)
        let s = LinearSpace::projective_space(2, 3).unwrap();
        let det = |a: &[u16], b: &[u16], c: &[u16]| {
            let a: Vec<i64> = a.iter().map(|&x| x as i64).collect();
            let b: Vec<i64> = b.iter().map(|&x| x as i64).collect();
            let c: Vec<i64> = c.iter().map(|&x| x as i64).collect();
            (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
                .rem_euclid(3)
        };
        for l in s.lines() {
            for &z in &l[2..] {
                assert_eq!(det(s.coords(l[0] as usize), s.coords(l[1] as usize), s.coords(z as usize)), 0);
            }
        }
        assert_eq!(s.noncollinear_triples().count(), 13 * 12 * 9);
    }

    #[test]
    fn affine_spaces() {
        let ag23 = LinearSpace::affine_space(2, 3).unwrap();
        assert_design(&ag23, 9, 12, 3, 4);
        assert_eq!(ag23.num_flags(), 36);
        assert_design(&LinearSpace::affine_space(2, 4).unwrap(), 16, 20, 4, 5);
        assert_design(&LinearSpace::affine_space(3, 3).unwrap(), 27, 117, 3, 13);
        assert!(LinearSpace::affine_space(2, 2).is_err());
        // the coset of the x-axis through the origin
        let l = ag23.line_through(0, 1).unwrap();
        assert_eq!(ag23.line(l), &[0, 1, 2]);
    }

    #[test]
    fn unitals() {
        assert_design(&LinearSpace::hermitian_unital(2).unwrap(), 9, 12, 3, 4);
        assert_design(&LinearSpace::hermitian_unital(3).unwrap(), 28, 63, 4, 9);
        let uh4 = LinearSpace::hermitian_unital(4).unwrap();
        assert_design(&uh4, 65, 208, 5, 16);
        assert_eq!(uh4.num_flags(), 1040);
        assert!(LinearSpace::hermitian_unital(6).is_err());
    }

    #[test]
    fn non_linear_controls() {
        assert_eq!(
            is_linear_space(LinearSpace::digon().incidence_system()),
            Err(LinearityViolation::SeveralCommonLines { a: 0, b: 1 })
        );
        assert_eq!(
            is_linear_space(LinearSpace::cycle(4).unwrap().incidence_system()),
            Err(LinearityViolation::NoCommonLine { a: 0, b: 2 })
        );
        assert!(!LinearSpace::cube().is_linear());
        let np = LinearSpace::near_pencil(7).unwrap();
        assert!(np.is_linear());
        assert_eq!(np.line_size(), None);
    }

    #[test]
    fn triple_counts_match_enumeration() {
        for s in [
            LinearSpace::projective_space(2, 2).unwrap(),
            LinearSpace::affine_space(2, 3).unwrap(),
            LinearSpace::complete_graph(5).unwrap(),
            LinearSpace::near_pencil(6).unwrap(),
        ] {
            let brute = s.noncollinear_triples().count();
            assert_eq!(s.num_noncollinear_triples(), brute);
            if let Some(n) = s.line_size() {
                let v = s.num_points();
                assert_eq!(brute, v * (v - 1) * (v - n));
            }
        }
    }

    #[test]
    fn induced_maps() {
        let s = LinearSpace::affine_space(2, 3).unwrap();
        // translation by (0,1)
        let t = Permutation::from_fn(9, |p| (p / 3) * 3 + (p % 3 + 1) % 3).unwrap();
        let g = s.automorphism_from_points(&t).unwrap();
        let (pts, _) = s.split_automorphism(&g).unwrap();
        assert_eq!(pts, t);
        let swap = Permutation::from_cycles(9, &[&[0, 1]]).unwrap();
        assert!(s.induced_line_map(&swap).is_none());
        assert_eq!(s.locate(&[1, 2]), Some(5));
    }
}
