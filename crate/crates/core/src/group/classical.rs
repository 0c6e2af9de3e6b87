//! Generators of the classical groups acting on the points of a built space.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::PermGroup;
use crate::field::Field;
use crate::perm::Permutation;
use crate::space::{LinearSpace, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("unknown group case {0:?}")]
    UnknownCase(String),
    #[error("group {case:?} does not act on {space}")]
    Mismatch { case: ClassicalCase, space: String },
    #[error("matrix does not preserve the point set")]
    NotPreserved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalCase {
    Symmetric,
    Pgl,
    Pgammal,
    Agl,
    Agammal,
    Pgammau,
}

impl FromStr for ClassicalCase {
    type Err = ClassicalError;

    fn from_str(s: &str) -> Result<Self, ClassicalError> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "symmetric" | "sym" => ClassicalCase::Symmetric,
            "pgl" => ClassicalCase::Pgl,
            "pgammal" => ClassicalCase::Pgammal,
            "agl" => ClassicalCase::Agl,
            "agammal" | "aggammal" => ClassicalCase::Agammal,
            "pgammau" => ClassicalCase::Pgammau,
            _ => return Err(ClassicalError::UnknownCase(String::from(s))),
        })
    }
}

impl ClassicalCase {
    /// The full automorphism group's case for each family.
    pub fn natural_for(kind: SpaceKind) -> Option<Self> {
        match kind {
            SpaceKind::Complete { .. } => Some(ClassicalCase::Symmetric),
            SpaceKind::Projective { .. } => Some(ClassicalCase::Pgammal),
            SpaceKind::Affine { .. } => Some(ClassicalCase::Agammal),
            SpaceKind::Unital { .. } => Some(ClassicalCase::Pgammau),
            SpaceKind::Custom => None,
        }
    }
}

type Matrix = Vec<Vec<u16>>;

fn identity(field: &Field, d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { field.one_idx() } else { 0 }).collect())
        .collect()
}

fn permutation_matrix(field: &Field, d: usize, images: &[usize]) -> Matrix {
    let mut m = vec![vec![0u16; d]; d];
    for (j, &i) in images.iter().enumerate() {
        m[i][j] = field.one_idx();
    }
    m
}

fn apply(field: &Field, m: &Matrix, x: &[u16]) -> Vec<u16> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&a, &b)| field.add_idx(acc, field.mul_idx(a, b)))
        })
        .collect()
}

/// Generators of `GL(d, q)`: a primitive diagonal entry, a transposition and a
/// cyclic permutation matrix, and one elementary transvection.
fn general_linear(field: &Field, d: usize) -> Vec<Matrix> {
    let mut gens = Vec::new();
    let mut diag = identity(field, d);
    diag[0][0] = field.primitive_idx();
    if diag[0][0] != field.one_idx() {
        gens.push(diag);
    }
    let mut swap: Vec<usize> = (0..d).collect();
    swap.swap(0, 1);
    gens.push(permutation_matrix(field, d, &swap));
    let cycle: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    gens.push(permutation_matrix(field, d, &cycle));
    let mut tv = identity(field, d);
    tv[0][1] = field.one_idx();
    gens.push(tv);
    gens
}

/// Generators of `GU(3, q)` for the form `Σ x_i y_i^q` over `GF(q^2)`:
/// coordinate permutations, a diagonal entry of norm one and maximal order,
/// and one non-monomial unitary 2×2 block.
fn unitary(field: &Field, q: u32) -> Vec<Matrix> {
    let conj = |x: u16| field.pow_idx(x, q as u64);
    let norm = |x: u16| field.mul_idx(x, conj(x));
    let one = field.one_idx();
    let mut gens = vec![
        permutation_matrix(field, 3, &[1, 0, 2]),
        permutation_matrix(field, 3, &[1, 2, 0]),
    ];
    let mut diag = identity(field, 3);
    diag[0][0] = field.pow_idx(field.primitive_idx(), q as u64 - 1);
    gens.push(diag);
    let size = field.order() as u16;
    let before = gens.len();
    'search: for a in 1..size {
        for c in 1..size {
            if field.add_idx(norm(a), norm(c)) != one {
                continue;
            }
            for b in 1..size {
                for d in 1..size {
                    let off = field.add_idx(field.mul_idx(a, conj(b)), field.mul_idx(c, conj(d)));
                    if off == 0 && field.add_idx(norm(b), norm(d)) == one {
                        let mut m = identity(field, 3);
                        m[0][0] = a;
                        m[0][1] = b;
                        m[1][0] = c;
                        m[1][1] = d;
                        gens.push(m);
                        break 'search;
                    }
                }
            }
        }
    }
    if gens.len() == before {
        // columns of a 2x2 block cannot have norm one in characteristic two
        // when q = 2, so look for a full 3x3 unitary matrix instead
        gens.extend(full_unitary(field, q));
    }
    gens
}

fn full_unitary(field: &Field, q: u32) -> Option<Matrix> {
    let conj = |x: u16| field.pow_idx(x, q as u64);
    let size = field.order() as u64;
    let nonzero = size - 1;
    let dot = |m: &[u16], i: usize, j: usize| {
        (0..3).fold(0, |acc, r| {
            field.add_idx(acc, field.mul_idx(m[3 * r + i], conj(m[3 * r + j])))
        })
    };
    for code in 0..nonzero.pow(9) {
        let m: Vec<u16> = (0..9)
            .map(|k| 1 + ((code / nonzero.pow(k)) % nonzero) as u16)
            .collect();
        let orthonormal = (0..3).all(|i| {
            (0..3).all(|j| dot(&m, i, j) == if i == j { field.one_idx() } else { 0 })
        });
        if orthonormal {
            return Some((0..3).map(|r| m[3 * r..3 * r + 3].to_vec()).collect());
        }
    }
    None
}

fn point_perm(space: &LinearSpace, f: impl Fn(&[u16]) -> Vec<u16>) -> Result<Permutation, ClassicalError> {
    let images = (0..space.num_points())
        .map(|p| {
            space
                .locate(&f(space.coords(p)))
                .map(|x| x as u32)
                .ok_or(ClassicalError::NotPreserved)
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Permutation::from_images(images).map_err(|_| ClassicalError::NotPreserved)
}

/// The group of a classification case, acting on the points of `space`.
pub fn classification_group(space: &LinearSpace, case: ClassicalCase) -> Result<PermGroup, ClassicalError> {
    let kind = space.kind();
    let mismatch = || ClassicalError::Mismatch {
        case,
        space: format!("{kind}"),
    };
    let v = space.num_points();
    let gens = match (case, kind) {
        (ClassicalCase::Symmetric, _) => {
            let cycle: Vec<usize> = (0..v).collect();
            vec![
                Permutation::from_cycles(v, &[&[0, 1]]).map_err(|_| mismatch())?,
                Permutation::from_cycles(v, &[&cycle]).map_err(|_| mismatch())?,
            ]
        }
        (ClassicalCase::Pgl | ClassicalCase::Pgammal, SpaceKind::Projective { n, .. })
        | (ClassicalCase::Agl | ClassicalCase::Agammal, SpaceKind::Affine { n, .. }) => {
            let field = space.field().expect("coordinatized");
            let projective = matches!(kind, SpaceKind::Projective { .. });
            let d = n as usize + projective as usize;
            let mut gens = general_linear(field, d)
                .iter()
                .map(|m| point_perm(space, |x| apply(field, m, x)))
                .collect::<Result<Vec<_>, _>>()?;
            if !projective {
                gens.push(point_perm(space, |x| {
                    let mut y = x.to_vec();
                    y[0] = field.add_idx(y[0], field.one_idx());
                    y
                })?);
            }
            if matches!(case, ClassicalCase::Pgammal | ClassicalCase::Agammal) && field.degree() > 1 {
                gens.push(point_perm(space, |x| {
                    x.iter().map(|&c| field.frobenius_idx(c, 1)).collect()
                })?);
            }
            gens
        }
        (ClassicalCase::Pgammau, SpaceKind::Unital { q }) => {
            let field = space.field().expect("coordinatized");
            let mut gens = unitary(field, q)
                .iter()
                .map(|m| point_perm(space, |x| apply(field, m, x)))
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(point_perm(space, |x| {
                x.iter().map(|&c| field.frobenius_idx(c, 1)).collect()
            })?);
            gens
        }
        _ => return Err(mismatch()),
    };
    let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
    Ok(PermGroup::new(v, gens))
}
