//! Permutation groups given by generators: orbits, orders, membership.

pub mod classical;
mod schreier;
pub mod search;

pub use schreier::StabChain;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use hashbrown::HashSet;

use crate::incidence::{Correlation, IncidenceSystem};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base_hint: Vec<u32>,
    chain: OnceCell<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Self {
        assert!(generators.iter().all(|g| g.degree() == degree), "generator degree");
        PermGroup {
            degree,
            generators,
            base_hint: Vec::new(),
            chain: OnceCell::new(),
        }
    }

    /// Like [`new`](Self::new), asking the stabilizer chain to start with `base`.
    pub fn with_base(degree: usize, generators: Vec<Permutation>, base: Vec<u32>) -> Self {
        let mut g = Self::new(degree, generators);
        g.base_hint = base;
        g
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators, &self.base_hint))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    /// True when every conjugate of a generator of `sub` by a generator of
    /// `self` lies in `sub`.
    pub fn normalizes(&self, sub: &PermGroup) -> bool {
        self.generators.iter().all(|g| {
            let gi = g.inverse();
            sub.generators
                .iter()
                .all(|s| sub.contains(&gi.compose(s).compose(g)))
        })
    }

    /// Orbit of a point in breadth-first order.
    pub fn orbit(&self, x: usize) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x as u32];
        let mut i = 0;
        while i < out.len() {
            let y = out[i] as usize;
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z as u32);
                }
            }
            i += 1;
        }
        out
    }

    /// All orbits, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        orbit_partition(self.degree, &self.generators)
    }

    /// Orbit of a tuple under the componentwise action, breadth-first.
    pub fn tuple_orbit(&self, seed: &[u32]) -> Vec<Vec<u32>> {
        self.closure(seed.to_vec(), |g, t| t.iter().map(|&x| g.apply(x as usize) as u32).collect())
    }

    /// Orbit of a set (given in any order) under the induced action; members sorted.
    pub fn set_orbit(&self, seed: &[u32]) -> Vec<Vec<u32>> {
        let mut start = seed.to_vec();
        start.sort_unstable();
        self.closure(start, |g, t| {
            let mut img: Vec<u32> = t.iter().map(|&x| g.apply(x as usize) as u32).collect();
            img.sort_unstable();
            img
        })
    }

    /// Number of elements in the orbit of a set, without keeping the orbit in order.
    pub fn set_orbit_len(&self, seed: &[u32]) -> usize {
        self.set_orbit(seed).len()
    }

    fn closure(&self, start: Vec<u32>, act: impl Fn(&Permutation, &[u32]) -> Vec<u32>) -> Vec<Vec<u32>> {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(start.clone());
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let img = act(g, &out[i]);
                if seen.insert(img.clone()) {
                    out.push(img);
                }
            }
            i += 1;
        }
        out
    }

    /// Every element, by breadth-first closure. Only for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
            out.push(x);
        }
        out
    }
}

/// Orbits of the group generated by `gens`, via union-find.
pub fn orbit_partition(degree: usize, gens: &[Permutation]) -> Vec<Vec<u32>> {
    let root = orbit_roots(degree, gens);
    let mut slot = vec![usize::MAX; degree];
    let mut out: Vec<Vec<u32>> = Vec::new();
    for x in 0..degree {
        let r = root[x] as usize;
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(x as u32);
    }
    out
}

/// For each point, the smallest point of its orbit.
pub fn orbit_roots(degree: usize, gens: &[Permutation]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..degree as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    for g in gens {
        for x in 0..degree as u32 {
            let a = find(&mut parent, x);
            let b = find(&mut parent, g.apply(x as usize) as u32);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..degree as u32).map(|x| find(&mut parent, x)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransitivityError {
    #[error("generator {0} is not a type-preserving automorphism")]
    NotAnAutomorphism(usize),
    #[error("the system has no chambers")]
    NoChambers,
}

/// Chamber-orbit test: the group (acting on elements) is checked generator by
/// generator, then the orbit of the first chamber is compared with the
/// number of chambers.
pub fn is_flag_transitive(sys: &IncidenceSystem, group: &PermGroup) -> Result<bool, TransitivityError> {
    Ok(chamber_orbit(sys, group)?.0)
}

/// Whether the chamber orbit covers all chambers, with the orbit size.
pub fn chamber_orbit(sys: &IncidenceSystem, group: &PermGroup) -> Result<(bool, usize), TransitivityError> {
    for (i, g) in group.generators().iter().enumerate() {
        match Correlation::new(sys, g.clone()) {
            Ok(c) if c.is_automorphism() => {}
            _ => return Err(TransitivityError::NotAnAutomorphism(i)),
        }
    }
    let chambers = sys.num_chambers();
    let first = sys.chambers().into_iter().next().ok_or(TransitivityError::NoChambers)?;
    let seed: Vec<u32> = first.elements().iter().map(|&x| x as u32).collect();
    let size = group.set_orbit_len(&seed);
    Ok((size == chambers, size))
}
