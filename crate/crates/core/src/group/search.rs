//! Automorphisms, correlations and isomorphisms of incidence systems by
//! partition backtracking.
//!
//! Partitions are ordered; cells are named by their first position. Each
//! refinement step splits cells by neighbor counts into a splitter cell and
//! orders the fragments by count, so refinement commutes with isomorphisms.
//! A hash of the splitting events is compared with the first path to cut
//! branches early; every leaf is checked edge by edge.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{orbit_roots, PermGroup, StabChain};
use crate::incidence::{Correlation, IncidenceSystem};
use crate::perm::Permutation;

/// Default bound on the number of elements a search accepts.
pub const DEFAULT_MAX_ELEMENTS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{elements} elements exceed the search bound of {bound}")]
    TooLarge { elements: usize, bound: usize },
    #[error("type permutation has degree {got}, system has rank {rank}")]
    TypePermDegree { rank: usize, got: usize },
    #[error("supplied group does not act by automorphisms")]
    BadSuppliedGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_elements: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(FNV_PRIME).rotate_left(17)
}

#[derive(Debug, Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    start_of: Vec<u32>,
    /// Exclusive end of the cell starting at each position (valid at starts).
    end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn from_cells(n: usize, cells: &[Vec<u32>]) -> Self {
        let mut p = Partition {
            elems: Vec::with_capacity(n),
            pos: vec![0; n],
            start_of: vec![0; n],
            end: vec![0; n],
            cells: 0,
        };
        for cell in cells.iter().filter(|c| !c.is_empty()) {
            let s = p.elems.len() as u32;
            for &x in cell {
                p.pos[x as usize] = p.elems.len() as u32;
                p.start_of[x as usize] = s;
                p.elems.push(x);
            }
            p.end[s as usize] = p.elems.len() as u32;
            p.cells += 1;
        }
        p
    }

    fn starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.elems.len() {
            out.push(s as u32);
            s = self.end[s] as usize;
        }
        out
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        let mut s = 0;
        while s < self.elems.len() {
            let e = self.end[s] as usize;
            if e - s > 1 {
                return Some(s);
            }
            s = e;
        }
        None
    }

    fn is_cell(&self, s: usize, size: usize) -> bool {
        s < self.elems.len()
            && self.start_of[self.elems[s] as usize] as usize == s
            && self.end[s] as usize == s + size
    }

    fn swap(&mut self, i: usize, j: usize) {
        let (a, b) = (self.elems[i], self.elems[j]);
        self.elems[i] = b;
        self.elems[j] = a;
        self.pos[a as usize] = j as u32;
        self.pos[b as usize] = i as u32;
    }

    /// Splits `x` off the front of the cell starting at `s`.
    fn individualize(&mut self, s: usize, x: u32) {
        let e = self.end[s] as usize;
        let i = self.pos[x as usize] as usize;
        self.swap(s, i);
        self.end[s] = s as u32 + 1;
        self.end[s + 1] = e as u32;
        for k in s + 1..e {
            self.start_of[self.elems[k] as usize] = s as u32 + 1;
        }
        self.cells += 1;
    }
}

struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    fragments: Vec<u32>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            fragments: Vec::new(),
        }
    }

    /// Refines to the coarsest equitable partition below `p`, starting from
    /// the given splitter cells, and returns a trace hash.
    fn refine(&mut self, adj: &[Vec<u32>], p: &mut Partition, splitters: &[u32]) -> u64 {
        let n = p.elems.len();
        let mut h = FNV_OFFSET;
        for &s in splitters {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(w) = self.queue.pop_front() {
            self.in_queue[w as usize] = false;
            if p.is_discrete() {
                continue;
            }
            let (ws, we) = (w as usize, p.end[w as usize] as usize);
            for i in ws..we {
                for &u in &adj[p.elems[i] as usize] {
                    if self.count[u as usize] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            let count = &self.count;
            let start_of = &p.start_of;
            self.touched
                .sort_unstable_by_key(|&u| (start_of[u as usize], count[u as usize]));
            h = mix(h, (w as u64) << 32 | self.touched.len() as u64);

            let mut i = 0;
            while i < self.touched.len() {
                let c = p.start_of[self.touched[i] as usize] as usize;
                let mut j = i;
                while j < self.touched.len() && p.start_of[self.touched[j] as usize] as usize == c {
                    j += 1;
                }
                let e = p.end[c] as usize;
                let k = j - i;
                let lo = self.count[self.touched[i] as usize];
                let hi = self.count[self.touched[j - 1] as usize];
                h = mix(h, (c as u64) << 40 | (k as u64) << 20 | lo as u64);
                if e - c == 1 || (k == e - c && lo == hi) {
                    i = j;
                    continue;
                }
                // touched vertices go to the tail in count order
                for idx in 0..k {
                    let u = self.touched[i + idx];
                    let target = e - k + idx;
                    let cur = p.pos[u as usize] as usize;
                    p.swap(cur, target);
                }
                self.fragments.clear();
                if e - k > c {
                    self.fragments.push(c as u32);
                }
                let mut r = e - k;
                while r < e {
                    let value = self.count[p.elems[r] as usize];
                    let mut t = r;
                    while t < e && self.count[p.elems[t] as usize] == value {
                        t += 1;
                    }
                    self.fragments.push(r as u32);
                    h = mix(h, (r as u64) << 32 | (t - r) as u64 | (value as u64) << 48);
                    r = t;
                }
                for (fi, &fs) in self.fragments.iter().enumerate() {
                    let fe = self.fragments.get(fi + 1).map_or(e, |&x| x as usize);
                    p.end[fs as usize] = fe as u32;
                    if fs as usize != c {
                        for idx in fs as usize..fe {
                            p.start_of[p.elems[idx] as usize] = fs;
                        }
                    }
                }
                p.cells += self.fragments.len() - 1;
                let keep_first = self.in_queue[c];
                for &fs in &self.fragments {
                    if fs as usize == c && keep_first {
                        continue;
                    }
                    if !self.in_queue[fs as usize] {
                        self.in_queue[fs as usize] = true;
                        self.queue.push_back(fs);
                    }
                }
                i = j;
            }
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
        }
        debug_assert!(p.cells <= n);
        h
    }
}

/// Coloured partition of a system's elements by type, with type `k` of the
/// source matched to type `type_map[k]` of the target.
fn type_cells(sys: &IncidenceSystem, order: &[usize]) -> Vec<Vec<u32>> {
    let mut cells = vec![Vec::new(); sys.rank()];
    for x in 0..sys.len() {
        cells[sys.type_of(x)].push(x as u32);
    }
    order.iter().map(|&t| core::mem::take(&mut cells[t])).collect()
}

struct Engine<'a> {
    src: &'a IncidenceSystem,
    dst: &'a IncidenceSystem,
    refiner: Refiner,
    parts: Vec<Partition>,
    cells: Vec<u32>,
    base: Vec<u32>,
    traces: Vec<u64>,
    nodes: u64,
}

impl<'a> Engine<'a> {
    fn new(src: &'a IncidenceSystem, dst: &'a IncidenceSystem) -> Self {
        let n = src.len();
        let mut refiner = Refiner::new(n);
        let identity: Vec<usize> = (0..src.rank()).collect();
        let mut p = Partition::from_cells(n, &type_cells(src, &identity));
        let starts = p.starts();
        let mut traces = vec![refiner.refine(src.adjacency(), &mut p, &starts)];
        let mut parts = Vec::new();
        let mut cells = Vec::new();
        let mut base = Vec::new();
        while let Some(s) = p.first_nonsingleton() {
            let x = p.elems[s];
            parts.push(p.clone());
            cells.push(s as u32);
            base.push(x);
            p.individualize(s, x);
            traces.push(refiner.refine(src.adjacency(), &mut p, &[s as u32]));
        }
        parts.push(p);
        Engine {
            src,
            dst,
            refiner,
            parts,
            cells,
            base,
            traces,
            nodes: 0,
        }
    }

    fn depth(&self) -> usize {
        self.base.len()
    }

    fn leaf(&self, q: &Partition) -> Option<Permutation> {
        let src_leaf = &self.parts[self.depth()];
        let n = q.elems.len();
        let mut images = vec![0u32; n];
        for k in 0..n {
            images[src_leaf.elems[k] as usize] = q.elems[k];
        }
        let ok = self.src.edges().all(|(a, b)| {
            self.dst.incident(images[a] as usize, images[b] as usize)
        });
        ok.then(|| Permutation::from_images_unchecked(images))
    }

    /// Depth-first search for a leaf below `q`, whose prefix equals the
    /// base exactly when `on_base` is set; `stabilizers[j]` generates the
    /// target's automorphisms fixing the first `j` base points.
    fn descend(
        &mut self,
        q: &Partition,
        level: usize,
        on_base: bool,
        stabilizers: &mut Stabilizers,
    ) -> Option<Permutation> {
        self.nodes += 1;
        if level == self.depth() {
            return if q.is_discrete() { self.leaf(q) } else { None };
        }
        let s = self.cells[level] as usize;
        let size = self.parts[level].end[s] as usize - s;
        if !q.is_cell(s, size) {
            return None;
        }
        let mut candidates: Vec<u32> = q.elems[s..s + size].to_vec();
        if on_base {
            if let Some(roots) = stabilizers.roots(level, q.elems.len()) {
                let b = self.base[level];
                candidates.sort_unstable_by_key(|&c| (c != b, c));
                let mut seen = Vec::new();
                candidates.retain(|&c| {
                    let r = roots[c as usize];
                    if seen.contains(&r) {
                        false
                    } else {
                        seen.push(r);
                        true
                    }
                });
            }
        }
        for c in candidates {
            let mut q2 = q.clone();
            q2.individualize(s, c);
            let t = self.refiner.refine(self.dst.adjacency(), &mut q2, &[s as u32]);
            if t != self.traces[level + 1] {
                continue;
            }
            let next_on_base = on_base && c == self.base[level];
            if let Some(m) = self.descend(&q2, level + 1, next_on_base, stabilizers) {
                return Some(m);
            }
        }
        None
    }

    /// Strong generators for the automorphism group, level by level from the
    /// bottom of the first path.
    fn automorphisms(&mut self) -> (Vec<Vec<Permutation>>, Vec<usize>) {
        let n = self.src.len();
        let depth = self.depth();
        let mut by_level: Vec<Vec<Permutation>> = vec![Vec::new(); depth + 1];
        let mut orbit_sizes = vec![1usize; depth];
        let mut current: Vec<Permutation> = Vec::new();
        let mut none = Stabilizers::default();
        for i in (0..depth).rev() {
            let s = self.cells[i] as usize;
            let e = self.parts[i].end[s] as usize;
            let cell: Vec<u32> = self.parts[i].elems[s..e].to_vec();
            let b = self.base[i];
            let mut roots = orbit_roots(n, &current);
            let mut failed: Vec<u32> = Vec::new();
            for &c in &cell {
                if roots[c as usize] == roots[b as usize]
                    || failed.iter().any(|&f| roots[f as usize] == roots[c as usize])
                {
                    continue;
                }
                let mut q = self.parts[i].clone();
                q.individualize(s, c);
                let t = self.refiner.refine(self.src.adjacency(), &mut q, &[s as u32]);
                let found = if t == self.traces[i + 1] {
                    self.descend(&q, i + 1, false, &mut none)
                } else {
                    None
                };
                match found {
                    Some(g) => {
                        current.push(g.clone());
                        by_level[i].push(g);
                        roots = orbit_roots(n, &current);
                    }
                    None => failed.push(c),
                }
            }
            orbit_sizes[i] = cell.iter().filter(|&&c| roots[c as usize] == roots[b as usize]).count();
        }
        // generators of the stabilizer of the first j base points
        let mut stabs = vec![Vec::new(); depth + 1];
        for j in (0..depth).rev() {
            let mut g = stabs[j + 1].clone();
            g.extend(by_level[j].iter().cloned());
            stabs[j] = g;
        }
        (stabs, orbit_sizes)
    }
}

/// Lazily computed orbit roots of point stabilizers along the base.
#[derive(Default)]
struct Stabilizers {
    gens: Vec<Vec<Permutation>>,
    roots: Vec<Option<Vec<u32>>>,
}

impl Stabilizers {
    fn new(gens: Vec<Vec<Permutation>>) -> Self {
        let roots = vec![None; gens.len()];
        Stabilizers { gens, roots }
    }

    fn roots(&mut self, level: usize, n: usize) -> Option<&[u32]> {
        let gens = self.gens.get(level)?;
        if self.roots[level].is_none() {
            self.roots[level] = Some(orbit_roots(n, gens));
        }
        self.roots[level].as_deref()
    }
}

/// Automorphism group found by search, with a certified stabilizer chain.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub base: Vec<u32>,
    pub generators: Vec<Permutation>,
    pub orbit_sizes: Vec<usize>,
    pub group: PermGroup,
}

impl AutomorphismGroup {
    pub fn order(&self) -> u128 {
        self.group.order()
    }
}

/// Where an automorphism group came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutSource {
    Search,
    Supplied,
}

/// Correlations of a system whose type permutations lie in an allowed set.
#[derive(Debug, Clone)]
pub struct CorrelationGroup {
    pub automorphisms: PermGroup,
    pub aut_source: AutSource,
    /// One correlation for each type permutation generator realized beyond the identity.
    pub extra: Vec<Correlation>,
    /// All realized type permutations.
    pub type_group: Vec<Permutation>,
    pub search_nodes: u64,
}

impl CorrelationGroup {
    pub fn aut_order(&self) -> u128 {
        self.automorphisms.order()
    }

    /// `|Aut| · |realized type permutations|`.
    pub fn order(&self) -> u128 {
        self.aut_order() * self.type_group.len() as u128
    }

    /// Generators of the whole group: automorphisms and the extra correlations.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = self.automorphisms.generators().to_vec();
        out.extend(self.extra.iter().map(|c| c.perm().clone()));
        out
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.automorphisms.degree(), self.generators())
    }

    pub fn has_odd_type_perm(&self) -> bool {
        self.type_group.iter().any(Permutation::is_odd)
    }
}

fn check_size(sys: &IncidenceSystem, opts: &SearchOptions) -> Result<(), SearchError> {
    if sys.len() > opts.max_elements {
        Err(SearchError::TooLarge {
            elements: sys.len(),
            bound: opts.max_elements,
        })
    } else {
        Ok(())
    }
}

/// The type-preserving automorphism group.
pub fn automorphism_group(sys: &IncidenceSystem, opts: &SearchOptions) -> Result<AutomorphismGroup, SearchError> {
    check_size(sys, opts)?;
    let mut engine = Engine::new(sys, sys);
    let (stabs, orbit_sizes) = engine.automorphisms();
    Ok(assemble(sys, &engine.base, stabs, orbit_sizes))
}

fn assemble(sys: &IncidenceSystem, base: &[u32], stabs: Vec<Vec<Permutation>>, orbit_sizes: Vec<usize>) -> AutomorphismGroup {
    let generators = stabs[0].clone();
    let group = PermGroup::with_base(sys.len(), generators.clone(), base.to_vec());
    debug_assert_eq!(
        group.order(),
        orbit_sizes.iter().map(|&x| x as u128).product::<u128>()
    );
    AutomorphismGroup {
        base: base.to_vec(),
        generators,
        orbit_sizes,
        group,
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_type_perms(k: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::from_images(prefix.clone()).expect("permutation"));
            return;
        }
        for t in 0..used.len() {
            if !used[t] {
                used[t] = true;
                prefix.push(t as u32);
                rec(prefix, used, out);
                prefix.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn closure(gens: &[Permutation], k: usize) -> Vec<Permutation> {
    let mut g = PermGroup::new(k, gens.to_vec()).elements();
    g.sort();
    g
}

/// Correlations with type permutations in `allowed` (all of them when
/// `None`). The automorphism group is searched, or taken from `supplied`
/// when given; a supplied group must act by automorphisms and is trusted to
/// be the full automorphism group.
pub fn correlation_group(
    sys: &IncidenceSystem,
    allowed: Option<&[Permutation]>,
    supplied: Option<&PermGroup>,
    opts: &SearchOptions,
) -> Result<CorrelationGroup, SearchError> {
    check_size(sys, opts)?;
    let k = sys.rank();
    let allowed: Vec<Permutation> = match allowed {
        Some(a) => a.to_vec(),
        None => all_type_perms(k),
    };
    if let Some(p) = allowed.iter().find(|p| p.degree() != k) {
        return Err(SearchError::TypePermDegree { rank: k, got: p.degree() });
    }
    let mut engine = Engine::new(sys, sys);
    let (automorphisms, stabs, source) = match supplied {
        None => {
            let (stabs, orbit_sizes) = engine.automorphisms();
            let aut = assemble(sys, &engine.base, stabs.clone(), orbit_sizes);
            (aut.group, stabs, AutSource::Search)
        }
        Some(g) => {
            for h in g.generators() {
                if !matches!(Correlation::new(sys, h.clone()), Ok(c) if c.is_automorphism()) {
                    return Err(SearchError::BadSuppliedGroup);
                }
            }
            let chain = StabChain::new(sys.len(), g.generators(), &engine.base);
            let stabs = (0..=engine.depth())
                .map(|j| chain.stabilizer_generators(j).to_vec())
                .collect();
            let group = PermGroup::with_base(sys.len(), g.generators().to_vec(), engine.base.clone());
            (group, stabs, AutSource::Supplied)
        }
    };
    let mut stabilizers = Stabilizers::new(stabs);
    let mut realized = vec![Permutation::identity(k)];
    let mut extra = Vec::new();
    for pi in &allowed {
        if realized.contains(pi) {
            continue;
        }
        if let Some(perm) = search_with_types(&mut engine, pi, &mut stabilizers) {
            let c = Correlation::with_type_perm(sys, perm, pi).expect("search leaves are verified");
            extra.push(c);
            let mut gens: Vec<Permutation> = realized.clone();
            gens.push(pi.clone());
            realized = closure(&gens, k);
        }
    }
    Ok(CorrelationGroup {
        automorphisms,
        aut_source: source,
        extra,
        type_group: realized,
        search_nodes: engine.nodes,
    })
}

fn search_with_types(engine: &mut Engine<'_>, type_map: &Permutation, stabilizers: &mut Stabilizers) -> Option<Permutation> {
    let dst = engine.dst;
    let order: Vec<usize> = (0..dst.rank()).map(|t| type_map.apply(t)).collect();
    let cells = type_cells(dst, &order);
    let src_sizes = type_cells(engine.src, &(0..engine.src.rank()).collect::<Vec<_>>());
    if cells.iter().map(Vec::len).ne(src_sizes.iter().map(Vec::len)) {
        return None;
    }
    let mut q = Partition::from_cells(dst.len(), &cells);
    let starts = q.starts();
    let t = engine.refiner.refine(dst.adjacency(), &mut q, &starts);
    if t != engine.traces[0] {
        return None;
    }
    engine.descend(&q, 0, true, stabilizers)
}

/// An isomorphism from `a` to `b` sending type `t` of `a` to type
/// `type_map(t)` of `b`, if one exists.
pub fn find_isomorphism(
    a: &IncidenceSystem,
    b: &IncidenceSystem,
    type_map: &Permutation,
    opts: &SearchOptions,
) -> Result<Option<Permutation>, SearchError> {
    check_size(a, opts)?;
    if a.len() != b.len() || a.rank() != b.rank() {
        return Ok(None);
    }
    if type_map.degree() != a.rank() {
        return Err(SearchError::TypePermDegree {
            rank: a.rank(),
            got: type_map.degree(),
        });
    }
    let mut engine = Engine::new(a, b);
    let mut none = Stabilizers::default();
    Ok(search_with_types(&mut engine, type_map, &mut none))
}
