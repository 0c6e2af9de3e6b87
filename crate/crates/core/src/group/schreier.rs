//! Deterministic Schreier–Sims with explicit transversals.

use alloc::vec;
use alloc::vec::Vec;

use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `reps[b] = u_b` with `u_b(base) = b`, and its inverse.
    reps: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut reps = vec![None; degree];
        reps[base as usize] = Some((Permutation::identity(degree), Permutation::identity(degree)));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            reps,
        }
    }

    /// Extends the orbit and transversal after new generators were added.
    fn grow_orbit(&mut self) {
        let mut i = 0;
        // every known orbit point must be re-expanded under the new generator set
        while i < self.orbit.len() {
            let b = self.orbit[i] as usize;
            for s in &self.gens {
                let c = s.apply(b);
                if self.reps[c].is_none() {
                    let (u, _) = self.reps[b].as_ref().expect("orbit point has a rep");
                    let rep = s.compose(u);
                    let inv = rep.inverse();
                    self.reps[c] = Some((rep, inv));
                    self.orbit.push(c as u32);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set with transversals.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a chain for the group generated by `gens`, using `base_prefix`
    /// as the first base points and smallest moved points afterwards.
    pub fn new(degree: usize, gens: &[Permutation], base_prefix: &[u32]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for &b in base_prefix {
            if chain.levels.iter().all(|l| l.base != b) {
                chain.levels.push(Level::new(b, degree));
            }
        }
        for g in &gens {
            assert_eq!(g.degree(), degree, "generator degree");
            if chain.levels.iter().all(|l| g.apply(l.base as usize) == l.base as usize) {
                let b = g.smallest_moved_point().expect("nontrivial") as u32;
                chain.levels.push(Level::new(b, degree));
            }
        }
        for i in 0..chain.levels.len() {
            let fixing: Vec<Permutation> = gens
                .iter()
                .filter(|g| chain.levels[..i].iter().all(|l| g.apply(l.base as usize) == l.base as usize))
                .cloned()
                .collect();
            chain.levels[i].gens = fixing;
            chain.levels[i].grow_orbit();
        }
        chain.complete();
        chain.trim();
        chain
    }

    /// Drops trailing levels with trivial orbits beyond the last nontrivial one.
    fn trim(&mut self) {
        while self.levels.last().is_some_and(|l| l.orbit.len() == 1 && l.gens.is_empty()) {
            self.levels.pop();
        }
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let mut k = 0;
            while k < self.levels[lvl].orbit.len() {
                let b = self.levels[lvl].orbit[k] as usize;
                for gi in 0..self.levels[lvl].gens.len() {
                    let h = {
                        let level = &self.levels[lvl];
                        let s = &level.gens[gi];
                        let (u_b, _) = level.reps[b].as_ref().expect("rep");
                        let (_, inv_sb) = level.reps[s.apply(b)].as_ref().expect("rep");
                        let images: Vec<u32> = (0..self.degree)
                            .map(|x| inv_sb.apply(s.apply(u_b.apply(x))) as u32)
                            .collect();
                        Permutation::from_images_unchecked(images)
                    };
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, depth) = self.sift_from(h, lvl + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    if depth == self.levels.len() {
                        let b = residue.smallest_moved_point().expect("nontrivial") as u32;
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in lvl + 1..=depth {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].grow_orbit();
                    }
                    i = depth + 1;
                    continue 'outer;
                }
                k += 1;
            }
            i -= 1;
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it went through).
    fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.base as usize);
            match &level.reps[b] {
                None => return (g, i),
                Some((_, inv)) => g = inv.compose(&g),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Basic orbit sizes along the base.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of the pointwise stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> &[Permutation] {
        self.levels.get(depth).map_or(&[], |l| l.gens.as_slice())
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        self.stabilizer_generators(0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> Vec<Permutation> {
        let cycle: Vec<usize> = (0..n).collect();
        vec![
            Permutation::from_cycles(n, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(n, &[&cycle]).unwrap(),
        ]
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        assert_eq!(StabChain::new(5, &sym(5), &[]).order(), 120);
        assert_eq!(StabChain::new(8, &sym(8), &[]).order(), 40320);
        let a5 = [
            Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
        ];
        let chain = StabChain::new(5, &a5, &[]);
        assert_eq!(chain.order(), 60);
        assert!(!chain.contains(&Permutation::from_cycles(5, &[&[0, 1]]).unwrap()));
        assert!(chain.contains(&Permutation::from_cycles(5, &[&[0, 1], &[2, 3]]).unwrap()));
    }

    #[test]
    fn base_prefix_is_respected() {
        let chain = StabChain::new(6, &sym(6), &[4, 2]);
        assert_eq!(&chain.base()[..2], &[4, 2]);
        assert_eq!(chain.order(), 720);
        assert_eq!(chain.orbit_sizes(), vec![6, 5, 4, 3, 2]);
    }

    #[test]
    fn trivial_group() {
        let chain = StabChain::new(4, &[Permutation::identity(4)], &[]);
        assert_eq!(chain.order(), 1);
        assert!(chain.contains(&Permutation::identity(4)));
    }
}
