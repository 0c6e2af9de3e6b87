//! Space descriptors as typed on the command line: `pg n q`, `ag n q`, `kv v`, `uh q`.

use thiserror::Error;
use trigeom_core::space::SpaceKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("unknown space family {0:?} (expected pg, ag, kv or uh)")]
    UnknownFamily(String),
    #[error("{family} takes {expected} parameter(s), got {got}")]
    Arity {
        family: &'static str,
        expected: usize,
        got: usize,
    },
}

pub fn parse_space(family: &str, params: &[u32]) -> Result<SpaceKind, DescriptorError> {
    let arity = |family: &'static str, expected: usize| {
        if params.len() == expected {
            Ok(())
        } else {
            Err(DescriptorError::Arity {
                family,
                expected,
                got: params.len(),
            })
        }
    };
    match family.to_ascii_lowercase().as_str() {
        "pg" => {
            arity("pg", 2)?;
            Ok(SpaceKind::Projective {
                n: params[0],
                q: params[1],
            })
        }
        "ag" => {
            arity("ag", 2)?;
            Ok(SpaceKind::Affine {
                n: params[0],
                q: params[1],
            })
        }
        "kv" | "k" => {
            arity("kv", 1)?;
            Ok(SpaceKind::Complete { v: params[0] })
        }
        "uh" => {
            arity("uh", 1)?;
            Ok(SpaceKind::Unital { q: params[0] })
        }
        other => Err(DescriptorError::UnknownFamily(other.to_string())),
    }
}

/// The command-line spelling of a space.
pub fn cli_name(kind: SpaceKind) -> String {
    match kind {
        SpaceKind::Complete { v } => format!("kv {v}"),
        SpaceKind::Projective { n, q } => format!("pg {n} {q}"),
        SpaceKind::Affine { n, q } => format!("ag {n} {q}"),
        SpaceKind::Unital { q } => format!("uh {q}"),
        SpaceKind::Custom => "custom".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for kind in [
            SpaceKind::Projective { n: 2, q: 3 },
            SpaceKind::Affine { n: 3, q: 4 },
            SpaceKind::Complete { v: 5 },
            SpaceKind::Unital { q: 4 },
        ] {
            let name = cli_name(kind);
            let mut words = name.split(' ');
            let family = words.next().unwrap();
            let params: Vec<u32> = words.map(|w| w.parse().unwrap()).collect();
            assert_eq!(parse_space(family, &params), Ok(kind));
        }
        assert!(parse_space("xx", &[1]).is_err());
        assert!(parse_space("pg", &[2]).is_err());
    }
}
