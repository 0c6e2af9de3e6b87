//! End-to-end checks on built spaces: instance reports, the characterization
//! of firm, residually connected, flag-transitive complexes, orbit checks on
//! triples, and hypermap export of thin complexes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::classical::{classification_group, ClassicalCase, ClassicalError};
use crate::group::search::{
    automorphism_group, correlation_group, AutSource, CorrelationGroup, SearchError, SearchOptions,
    DEFAULT_MAX_ELEMENTS,
};
use crate::group::{chamber_orbit, PermGroup, TransitivityError};
use crate::incidence::{Diagram, Firmness, IncidenceError};
use crate::perm::Permutation;
use crate::space::{LinearSpace, SpaceError, SpaceKind};
use crate::triangle::{TriangleComplex, TriangleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("{elements} elements exceed the bound of {bound}")]
    Scale { elements: usize, bound: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
    #[error(transparent)]
    Transitivity(#[from] TransitivityError),
    #[error("{0} has no family group")]
    NoGroup(String),
}

/// Builds the space named by a kind.
pub fn build_space(kind: SpaceKind) -> Result<LinearSpace, SpaceError> {
    match kind {
        SpaceKind::Complete { v } => LinearSpace::complete_graph(v),
        SpaceKind::Projective { n, q } => LinearSpace::projective_space(n, q),
        SpaceKind::Affine { n, q } => LinearSpace::affine_space(n, q),
        SpaceKind::Unital { q } => LinearSpace::hermitian_unital(q),
        SpaceKind::Custom => Err(SpaceError::InvalidParameter("custom spaces have no builder".to_string())),
    }
}

/// How the automorphism group of the complex is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutStrategy {
    /// Lifted family generators for unitals of order at least 4, search otherwise.
    Auto,
    Search,
    Supplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub max_elements: usize,
    pub aut: AutStrategy,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            max_elements: DEFAULT_MAX_ELEMENTS,
            aut: AutStrategy::Auto,
        }
    }
}

impl ReportOptions {
    fn search(&self) -> SearchOptions {
        SearchOptions {
            max_elements: self.max_elements,
        }
    }

    fn uses_supplied(&self, kind: SpaceKind) -> bool {
        match self.aut {
            AutStrategy::Search => false,
            AutStrategy::Supplied => true,
            AutStrategy::Auto => matches!(kind, SpaceKind::Unital { q } if q >= 4),
        }
    }
}

/// Everything computed about one complex. Fields are `None` when skipped
/// for scale; `omitted` names them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub space: String,
    pub kind: SpaceKind,
    pub points: usize,
    pub lines: usize,
    pub elements: usize,
    /// Common line size of the source, `None` if lines differ.
    pub line_size: Option<usize>,
    /// Common number of lines per point of the source.
    pub point_degree: Option<usize>,
    pub chambers: Option<usize>,
    pub is_geometry: Option<bool>,
    pub connected: Option<bool>,
    pub components: Option<usize>,
    /// Connectivity of every residue of a nonempty flag of rank at least two.
    pub residually_connected: Option<bool>,
    pub firmness: Option<Firmness>,
    pub thin: Option<bool>,
    pub flag_transitive: Option<bool>,
    pub chamber_orbit: Option<usize>,
    pub has_duality: Option<bool>,
    pub has_triality: Option<bool>,
    pub source_has_duality: Option<bool>,
    pub aut_order: Option<u128>,
    pub cor_order: Option<u128>,
    pub aut_source: Option<AutSource>,
    pub tau_normal: Option<bool>,
    pub diagram: Option<Diagram>,
    pub omitted: Vec<String>,
}

impl InstanceReport {
    /// Firm, connected, residually connected and flag-transitive.
    pub fn is_interesting(&self) -> Option<bool> {
        Some(
            self.firmness?.is_firm()
                && self.connected?
                && self.residually_connected?
                && self.flag_transitive?,
        )
    }
}

const HEAVY_FIELDS: [&str; 15] = [
    "chambers",
    "is_geometry",
    "connected",
    "components",
    "residually_connected",
    "firmness",
    "thin",
    "flag_transitive",
    "chamber_orbit",
    "has_duality",
    "has_triality",
    "source_has_duality",
    "aut_order",
    "cor_order",
    "diagram",
];

/// Runs the full pipeline on one space.
pub fn report(kind: SpaceKind, opts: &ReportOptions) -> Result<InstanceReport, HarnessError> {
    let space = build_space(kind)?;
    report_space(&space, opts)
}

/// Like [`report`] for an already built space.
pub fn report_space(space: &LinearSpace, opts: &ReportOptions) -> Result<InstanceReport, HarnessError> {
    let kind = space.kind();
    let elements = 3 * space.num_flags();
    let mut rep = InstanceReport {
        space: format!("{kind}"),
        kind,
        points: space.num_points(),
        lines: space.num_lines(),
        elements,
        line_size: space.line_size(),
        point_degree: space.point_degree(),
        chambers: None,
        is_geometry: None,
        connected: None,
        components: None,
        residually_connected: None,
        firmness: None,
        thin: None,
        flag_transitive: None,
        chamber_orbit: None,
        has_duality: None,
        has_triality: None,
        source_has_duality: None,
        aut_order: None,
        cor_order: None,
        aut_source: None,
        tau_normal: None,
        diagram: None,
        omitted: Vec::new(),
    };
    if elements > opts.max_elements {
        rep.omitted = HEAVY_FIELDS.iter().map(|s| s.to_string()).collect();
        rep.omitted.push("aut_source".to_string());
        rep.omitted.push("tau_normal".to_string());
        return Ok(rep);
    }
    let delta = TriangleComplex::new(space);
    let sys = delta.incidence_system();
    rep.chambers = Some(sys.num_chambers());
    let geometry = sys.is_geometry();
    rep.is_geometry = Some(geometry);
    let components = sys.connected_components().len();
    rep.connected = Some(components == 1);
    rep.components = Some(components);
    let tau = delta.canonical_triality()?;
    rep.has_triality = Some(tau.is_triality() && tau.order() == 3);
    if geometry {
        rep.residually_connected = Some(sys.proper_residues_connected()?);
        let firmness = sys.firmness()?;
        rep.firmness = Some(firmness);
        rep.thin = Some(firmness == Firmness::Thin);
        rep.diagram = Some(sys.diagram()?);
    } else {
        for f in ["residually_connected", "firmness", "thin", "diagram"] {
            rep.omitted.push(f.to_string());
        }
    }

    let cor = complex_correlations(&delta, opts)?;
    let aut = &cor.automorphisms;
    let (ft, orbit) = chamber_orbit(sys, aut)?;
    rep.flag_transitive = Some(ft);
    rep.chamber_orbit = Some(orbit);
    rep.aut_order = Some(cor.aut_order());
    rep.cor_order = Some(cor.order());
    rep.aut_source = Some(cor.aut_source);
    rep.has_duality = Some(cor.has_odd_type_perm());
    let tau_group = PermGroup::new(sys.len(), vec![tau.into_perm()]);
    rep.tau_normal = Some(cor.group().normalizes(&tau_group));

    let gamma = correlation_group(space.incidence_system(), None, None, &opts.search())?;
    rep.source_has_duality = Some(gamma.has_odd_type_perm());
    Ok(rep)
}

/// The correlation group of a complex, by search or from lifted family
/// generators as the options ask.
pub fn complex_correlations(delta: &TriangleComplex, opts: &ReportOptions) -> Result<CorrelationGroup, HarnessError> {
    let sys = delta.incidence_system();
    let kind = delta.space().kind();
    let supplied = if opts.uses_supplied(kind) {
        Some(lifted_family_group(delta)?)
    } else {
        None
    };
    Ok(correlation_group(sys, None, supplied.as_ref(), &opts.search())?)
}

/// The full automorphism group of the source family lifted to the complex.
pub fn lifted_family_group(delta: &TriangleComplex) -> Result<PermGroup, HarnessError> {
    let space = delta.space();
    let case = ClassicalCase::natural_for(space.kind()).ok_or_else(|| HarnessError::NoGroup(format!("{}", space.kind())))?;
    let group = classification_group(space, case)?;
    let gens = group
        .generators()
        .iter()
        .map(|g| delta.lift_point_map(g).map(|c| c.into_perm()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermGroup::new(delta.len(), gens))
}

/// Orbit of the first non-collinear triple under a group on points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleOrbit {
    pub orbit: usize,
    pub triples: usize,
}

impl TripleOrbit {
    pub fn is_transitive(&self) -> bool {
        self.orbit == self.triples
    }
}

pub fn triple_orbit(space: &LinearSpace, group: &PermGroup) -> Result<TripleOrbit, HarnessError> {
    let triples = space.num_noncollinear_triples();
    let orbit = match space.noncollinear_triples().next() {
        Some(t) => group.tuple_orbit(&t).len(),
        None => 0,
    };
    Ok(TripleOrbit { orbit, triples })
}

/// Triple orbit under the family group of the given case.
pub fn family_triple_orbit(space: &LinearSpace, case: ClassicalCase) -> Result<TripleOrbit, HarnessError> {
    triple_orbit(space, &classification_group(space, case)?)
}

/// The two sides of the flag-transitivity criterion, computed apart: the
/// chamber orbit of the searched automorphism group of the complex, and the
/// triple orbit of the searched automorphism group of the source restricted
/// to points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityComparison {
    pub chamber_orbit: usize,
    pub chambers: usize,
    pub triples: TripleOrbit,
}

impl TransitivityComparison {
    pub fn flag_transitive(&self) -> bool {
        self.chamber_orbit == self.chambers
    }

    pub fn agrees(&self) -> bool {
        self.flag_transitive() == self.triples.is_transitive()
    }
}

pub fn compare_transitivity(space: &LinearSpace, opts: &SearchOptions) -> Result<TransitivityComparison, HarnessError> {
    let delta = TriangleComplex::new(space);
    let sys = delta.incidence_system();
    let aut = automorphism_group(sys, opts)?;
    let (_, orbit) = chamber_orbit(sys, &aut.group)?;
    let source = automorphism_group(space.incidence_system(), opts)?;
    let v = space.num_points();
    let point_gens = source
        .generators
        .iter()
        .map(|g| Permutation::from_images(g.images()[..v].to_vec()).expect("points map to points"))
        .collect();
    let triples = triple_orbit(space, &PermGroup::new(v, point_gens))?;
    Ok(TransitivityComparison {
        chamber_orbit: orbit,
        chambers: sys.num_chambers(),
        triples,
    })
}

/// Outcome of one case of the characterization check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationCase {
    pub space: String,
    pub expected_interesting: bool,
    pub firm: bool,
    pub residually_connected: bool,
    pub flag_transitive: bool,
    pub has_triality: bool,
    pub has_duality: bool,
    pub source_has_duality: bool,
    /// Whether the source is thick and the complex flag-transitive, so that
    /// duality presence must agree.
    pub duality_rule_applies: bool,
    pub passed: bool,
}

/// Spaces whose complex is firm, residually connected and flag-transitive.
pub fn positive_cases() -> Vec<SpaceKind> {
    vec![
        SpaceKind::Projective { n: 2, q: 2 },
        SpaceKind::Projective { n: 2, q: 3 },
        SpaceKind::Projective { n: 2, q: 4 },
        SpaceKind::Affine { n: 2, q: 3 },
        SpaceKind::Affine { n: 2, q: 4 },
        SpaceKind::Affine { n: 2, q: 5 },
        SpaceKind::Unital { q: 2 },
        SpaceKind::Unital { q: 4 },
    ]
}

/// Spaces whose complex fails at least one of the three properties.
pub fn negative_cases() -> Vec<SpaceKind> {
    vec![
        SpaceKind::Projective { n: 3, q: 2 },
        SpaceKind::Affine { n: 3, q: 3 },
        SpaceKind::Complete { v: 4 },
        SpaceKind::Complete { v: 5 },
    ]
}

/// Checks each case against the characterization: a positive case must be
/// firm, residually connected (connectivity included) and flag-transitive,
/// a negative one must fail one of these; every case must carry the
/// canonical triality, and for thick sources with a flag-transitive complex
/// the complex has a duality exactly when its source has one.
pub fn verify_characterization(
    cases: &[(SpaceKind, bool)],
    opts: &ReportOptions,
) -> Result<Vec<CharacterizationCase>, HarnessError> {
    let mut out = Vec::new();
    for &(kind, expected) in cases {
        let rep = report(kind, opts)?;
        out.push(classify(&rep, expected).ok_or(HarnessError::Scale {
            elements: rep.elements,
            bound: opts.max_elements,
        })?);
    }
    Ok(out)
}

/// One characterization case from a report; `None` if the report was cut
/// short by the scale bound.
pub fn classify(rep: &InstanceReport, expected: bool) -> Option<CharacterizationCase> {
    let firm = rep.firmness?.is_firm();
    let rc = rep.connected? && rep.residually_connected?;
    let ft = rep.flag_transitive?;
    let has_triality = rep.has_triality?;
    let has_duality = rep.has_duality?;
    let source_has_duality = rep.source_has_duality?;
    let interesting = firm && rc && ft;
    // dualities of the complex and of the source correspond for thick
    // sources with a flag-transitive complex
    let thick_source = rep.line_size.is_some_and(|k| k >= 3) && rep.point_degree.is_some_and(|r| r >= 3);
    let duality_rule_applies = thick_source && ft;
    Some(CharacterizationCase {
        space: rep.space.clone(),
        expected_interesting: expected,
        firm,
        residually_connected: rc,
        flag_transitive: ft,
        has_triality,
        has_duality,
        source_has_duality,
        duality_rule_applies,
        passed: interesting == expected
            && has_triality
            && (!duality_rule_applies || has_duality == source_has_duality),
    })
}

/// The default case list: positives then negatives.
pub fn characterization_cases() -> Vec<(SpaceKind, bool)> {
    positive_cases()
        .into_iter()
        .map(|k| (k, true))
        .chain(negative_cases().into_iter().map(|k| (k, false)))
        .collect()
}

/// One row of the gonality control.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityCase {
    pub name: String,
    pub gonality: Option<u32>,
    pub is_geometry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityControl {
    pub cases: Vec<GonalityCase>,
    pub passed: bool,
}

/// Sources of gonality four give complexes that are not geometries; sources
/// of gonality three give geometries.
pub fn negative_gonality_control() -> Result<GonalityControl, HarnessError> {
    let sources = [
        ("4-cycle", LinearSpace::cycle(4)?),
        ("cube", LinearSpace::cube()),
        ("PG(2,2)", LinearSpace::projective_space(2, 2)?),
        ("K4", LinearSpace::complete_graph(4)?),
    ];
    let mut cases = Vec::new();
    let mut passed = true;
    for (name, space) in sources {
        let gonality = space.incidence_system().rank2_parameters()?.gonality;
        let is_geometry = TriangleComplex::new(&space).incidence_system().is_geometry();
        passed &= match gonality {
            Some(g) if g > 3 => !is_geometry,
            _ => is_geometry,
        };
        cases.push(GonalityCase {
            name: name.to_string(),
            gonality,
            is_geometry,
        });
    }
    Ok(GonalityControl { cases, passed })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypermapError {
    #[error("the complex is not a geometry")]
    NotGeometry,
    #[error("the complex is not connected")]
    NotConnected,
    #[error("not thin: a flag of cotype {type_index} lies in {count} chambers")]
    NotThin { type_index: usize, count: usize },
    #[error("not orientable: the chamber graph is not bipartite (euler characteristic {euler})")]
    NotOrientable { euler: i64 },
}

/// An oriented hypermap: permutations of darts with `σ α φ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypermap {
    pub darts: usize,
    pub sigma: Permutation,
    pub alpha: Permutation,
    pub phi: Permutation,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub genus: i64,
    pub orientable: bool,
    /// Sorted cycle lengths of σ, α and φ.
    pub cycle_types: [Vec<usize>; 3],
}

impl Hypermap {
    pub fn summary(&self) -> String {
        format!(
            "D={}, V={}, E={}, F={}, χ={}, genus={}",
            self.darts, self.vertices, self.edges, self.faces, self.euler, self.genus
        )
    }
}

fn cycle_type(p: &Permutation) -> Vec<usize> {
    let mut lens: Vec<usize> = p.all_cycles().iter().map(Vec::len).collect();
    lens.sort_unstable();
    lens
}

/// Chamber adjacency involutions `r_i` of a thin complex: `r_i` swaps the
/// two chambers sharing everything but the type-`i` element.
pub fn chamber_involutions(delta: &TriangleComplex) -> Result<(Vec<[usize; 3]>, [Permutation; 3]), HypermapError> {
    let sys = delta.incidence_system();
    if !sys.is_geometry() {
        return Err(HypermapError::NotGeometry);
    }
    let chambers = delta.chambers();
    let index: HashMap<[usize; 3], u32> = chambers.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
    let mut images = [vec![0u32; chambers.len()], vec![0u32; chambers.len()], vec![0u32; chambers.len()]];
    for (ci, c) in chambers.iter().enumerate() {
        for (t, image) in images.iter_mut().enumerate() {
            let (a, b) = match t {
                0 => (c[1], c[2]),
                1 => (c[0], c[2]),
                _ => (c[0], c[1]),
            };
            let others: Vec<u32> = crate::incidence::intersect(sys.neighbors(a), sys.neighbors(b))
                .into_iter()
                .filter(|&x| sys.type_of(x as usize) == t && x as usize != c[t])
                .collect();
            if others.len() != 1 {
                return Err(HypermapError::NotThin {
                    type_index: t + 1,
                    count: others.len() + 1,
                });
            }
            let mut d = *c;
            d[t] = others[0] as usize;
            image[ci] = index[&d];
        }
    }
    let [r0, r1, r2] = images.map(|im| Permutation::from_images(im).expect("thin adjacency is an involution"));
    Ok((chambers, [r0, r1, r2]))
}

fn orbit_count(n: usize, gens: &[&Permutation]) -> usize {
    let owned: Vec<Permutation> = gens.iter().map(|&g| g.clone()).collect();
    crate::group::orbit_partition(n, &owned).len()
}

/// Exports a thin, connected complex as an oriented hypermap on one class
/// of the bipartite chamber graph.
pub fn hypermap_export(delta: &TriangleComplex) -> Result<Hypermap, HypermapError> {
    let (chambers, [r1, r2, r3]) = chamber_involutions(delta)?;
    let n = chambers.len();
    if delta.incidence_system().connected_components().len() != 1 {
        return Err(HypermapError::NotConnected);
    }
    // residues of single elements are the orbits of the two other involutions
    let vertices = orbit_count(n, &[&r2, &r3]);
    let edges = orbit_count(n, &[&r3, &r1]);
    let faces = orbit_count(n, &[&r1, &r2]);
    let euler = (vertices + edges + faces) as i64 - (n / 2) as i64;

    let mut side = vec![u8::MAX; n];
    let mut stack = vec![0usize];
    side[0] = 0;
    while let Some(c) = stack.pop() {
        for r in [&r1, &r2, &r3] {
            let d = r.apply(c);
            if side[d] == u8::MAX {
                side[d] = 1 - side[c];
                stack.push(d);
            } else if side[d] == side[c] {
                return Err(HypermapError::NotOrientable { euler });
            }
        }
    }
    let darts: Vec<usize> = (0..n).filter(|&c| side[c] == 0).collect();
    let mut slot = vec![u32::MAX; n];
    for (i, &c) in darts.iter().enumerate() {
        slot[c] = i as u32;
    }
    let restrict = |a: &Permutation, b: &Permutation| {
        let images = darts.iter().map(|&c| slot[a.apply(b.apply(c))]).collect();
        Permutation::from_images(images).expect("even words preserve the class")
    };
    let sigma = restrict(&r2, &r3);
    let alpha = restrict(&r3, &r1);
    let phi = restrict(&r1, &r2);
    debug_assert!(sigma.compose(&alpha).compose(&phi).is_identity());
    let d = darts.len();
    let (v, e, f) = (
        sigma.all_cycles().len(),
        alpha.all_cycles().len(),
        phi.all_cycles().len(),
    );
    let euler_darts = (v + e + f) as i64 - d as i64;
    debug_assert_eq!(euler_darts, euler);
    let cycle_types = [cycle_type(&sigma), cycle_type(&alpha), cycle_type(&phi)];
    Ok(Hypermap {
        darts: d,
        sigma,
        alpha,
        phi,
        vertices: v,
        edges: e,
        faces: f,
        euler: euler_darts,
        genus: (2 - euler_darts) / 2,
        orientable: true,
        cycle_types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_reports() {
        let rep = report(SpaceKind::Affine { n: 2, q: 3 }, &ReportOptions::default()).unwrap();
        assert_eq!(rep.elements, 108);
        assert_eq!(rep.chambers, Some(432));
        assert_eq!(rep.aut_order, Some(432));
        assert_eq!(rep.cor_order, Some(1296));
        assert_eq!(rep.has_duality, Some(false));
        assert_eq!(rep.tau_normal, Some(true));
        assert_eq!(rep.is_interesting(), Some(true));

        let k3 = report(SpaceKind::Complete { v: 3 }, &ReportOptions::default()).unwrap();
        assert_eq!(k3.components, Some(6));
        assert_eq!(k3.residually_connected, Some(true));
    }

    #[test]
    fn scale_bound_gives_partial_report() {
        let opts = ReportOptions {
            max_elements: 100,
            ..ReportOptions::default()
        };
        let rep = report(SpaceKind::Affine { n: 2, q: 3 }, &opts).unwrap();
        assert_eq!(rep.aut_order, None);
        assert!(rep.omitted.iter().any(|f| f == "aut_order"));
    }

    #[test]
    fn hypermap_of_small_planes() {
        let ag = LinearSpace::affine_space(2, 3).unwrap();
        let h = hypermap_export(&TriangleComplex::new(&ag)).unwrap();
        assert_eq!((h.darts, h.euler, h.genus), (216, -108, 55));
        let ag4 = LinearSpace::affine_space(2, 4).unwrap();
        assert!(matches!(
            hypermap_export(&TriangleComplex::new(&ag4)),
            Err(HypermapError::NotThin { .. })
        ));
    }

    #[test]
    fn gonality_control() {
        assert!(negative_gonality_control().unwrap().passed);
    }
}
