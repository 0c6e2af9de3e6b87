use alloc::vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::IncidenceSystem;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrelationError {
    #[error("permutation has degree {got}, system has {expected} elements")]
    Degree { expected: usize, got: usize },
    #[error("elements of type {0} are sent to different types")]
    TypeSplit(usize),
    #[error("induced type map is not a permutation")]
    TypeCollapse,
    #[error("incident pair ({0}, {1}) is not mapped to an incident pair")]
    Incidence(usize, usize),
    #[error("stated type permutation disagrees with the element map")]
    TypePermMismatch,
}

/// An incidence-preserving permutation of elements with the permutation it
/// induces on types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Correlation {
    perm: Permutation,
    type_perm: Permutation,
}

impl Correlation {
    /// Verifies `perm` against `sys` and derives its type permutation.
    pub fn new(sys: &IncidenceSystem, perm: Permutation) -> Result<Self, CorrelationError> {
        let type_perm = induced_type_perm(sys, &perm)?;
        for (a, b) in sys.edges() {
            if !sys.incident(perm.apply(a), perm.apply(b)) {
                return Err(CorrelationError::Incidence(a, b));
            }
        }
        Ok(Correlation { perm, type_perm })
    }

    /// Like [`new`](Self::new), also checking a claimed type permutation.
    pub fn with_type_perm(
        sys: &IncidenceSystem,
        perm: Permutation,
        type_perm: &Permutation,
    ) -> Result<Self, CorrelationError> {
        let c = Self::new(sys, perm)?;
        if &c.type_perm != type_perm {
            return Err(CorrelationError::TypePermMismatch);
        }
        Ok(c)
    }

    /// Re-checks this correlation against a system.
    pub fn verify(&self, sys: &IncidenceSystem) -> Result<(), CorrelationError> {
        Self::with_type_perm(sys, self.perm.clone(), &self.type_perm).map(|_| ())
    }

    /// Trusted constructor for maps already known to be correlations.
    pub(crate) fn from_parts(perm: Permutation, type_perm: Permutation) -> Self {
        Correlation { perm, type_perm }
    }

    pub fn identity(sys: &IncidenceSystem) -> Self {
        Correlation {
            perm: Permutation::identity(sys.len()),
            type_perm: Permutation::identity(sys.rank()),
        }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn type_perm(&self) -> &Permutation {
        &self.type_perm
    }

    pub fn into_perm(self) -> Permutation {
        self.perm
    }

    pub fn apply(&self, x: usize) -> usize {
        self.perm.apply(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Correlation) -> Correlation {
        Correlation {
            perm: self.perm.compose(&other.perm),
            type_perm: self.type_perm.compose(&other.type_perm),
        }
    }

    pub fn inverse(&self) -> Correlation {
        Correlation {
            perm: self.perm.inverse(),
            type_perm: self.type_perm.inverse(),
        }
    }

    pub fn pow(&self, e: i64) -> Correlation {
        Correlation {
            perm: self.perm.pow(e),
            type_perm: self.type_perm.pow(e),
        }
    }

    pub fn order(&self) -> u128 {
        self.perm.order()
    }

    pub fn is_automorphism(&self) -> bool {
        self.type_perm.is_identity()
    }

    /// Type permutation of order two.
    pub fn is_duality(&self) -> bool {
        self.type_perm.order() == 2
    }

    /// Type permutation of order three.
    pub fn is_triality(&self) -> bool {
        self.type_perm.order() == 3
    }
}

/// The type permutation induced by an element permutation.
pub fn induced_type_perm(
    sys: &IncidenceSystem,
    perm: &Permutation,
) -> Result<Permutation, CorrelationError> {
    if perm.degree() != sys.len() {
        return Err(CorrelationError::Degree {
            expected: sys.len(),
            got: perm.degree(),
        });
    }
    let mut image = vec![u32::MAX; sys.rank()];
    for x in 0..sys.len() {
        let t = sys.type_of(x);
        let s = sys.type_of(perm.apply(x)) as u32;
        if image[t] == u32::MAX {
            image[t] = s;
        } else if image[t] != s {
            return Err(CorrelationError::TypeSplit(t));
        }
    }
    Permutation::from_images(image).map_err(|_| CorrelationError::TypeCollapse)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{names, polygon};
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn polygon_rotation_and_duality() {
        let sq = polygon(4);
        // points 0..4, lines 4..8 with line 4+i joining i and i+1
        let rot = Permutation::from_fn(8, |x| if x < 4 { (x + 1) % 4 } else { 4 + (x - 3) % 4 }).unwrap();
        let c = Correlation::new(&sq, rot).unwrap();
        assert!(c.is_automorphism());
        assert_eq!(c.order(), 4);
        // point i -> line i, line i -> point i+1
        let dual = Permutation::from_fn(8, |x| if x < 4 { x + 4 } else { (x - 3) % 4 }).unwrap();
        let d = Correlation::new(&sq, dual).unwrap();
        assert!(d.is_duality());
        assert!(d.compose(&d).is_automorphism());
    }

    #[test]
    fn rejects_non_correlations() {
        let sq = polygon(4);
        let swap = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        assert!(matches!(Correlation::new(&sq, swap), Err(CorrelationError::Incidence(..))));
        let mixed = Permutation::from_cycles(8, &[&[0, 4]]).unwrap();
        assert_eq!(Correlation::new(&sq, mixed), Err(CorrelationError::TypeSplit(0)));
        let sys = IncidenceSystem::new(names(&["P", "L"]), vec![0, 1], Vec::new(), [(0, 1)]).unwrap();
        assert!(Correlation::new(&sys, Permutation::identity(3)).is_err());
    }
}
