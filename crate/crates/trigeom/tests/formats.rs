use std::collections::BTreeSet;

use proptest::prelude::*;
use trigeom::core::harness::hypermap_export;
use trigeom::core::incidence::Correlation;
use trigeom::core::perm::Permutation;
use trigeom::core::space::LinearSpace;
use trigeom::core::triangle::TriangleComplex;
use trigeom::dot::to_dot;
use trigeom::format::{read_correlation, read_geometry, write_correlation, GeometryFile, HypermapFile};

fn fano_complex() -> TriangleComplex {
    TriangleComplex::new(&LinearSpace::projective_space(2, 2).unwrap())
}

#[test]
fn geometry_round_trip() {
    for space in [
        LinearSpace::projective_space(2, 3).unwrap(),
        LinearSpace::hermitian_unital(2).unwrap(),
        LinearSpace::complete_graph(3).unwrap(),
    ] {
        for sys in [space.incidence_system().clone(), TriangleComplex::new(&space).incidence_system().clone()] {
            let text = GeometryFile::from_system(&sys, Some("x".into())).to_json();
            let back = read_geometry(&text).unwrap();
            assert_eq!(back.types(), sys.types());
            assert_eq!(back.labels(), sys.labels());
            assert_eq!(back.edges().collect::<Vec<_>>(), sys.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn geometry_rejects_bad_ids_and_types() {
    let good = r#"{"types":["P","L"],"elements":[{"id":0,"type":"P","label":"a"},{"id":1,"type":"L","label":"b"}],"incidences":[[0,1]]}"#;
    assert_eq!(read_geometry(good).unwrap().len(), 2);
    let sparse = good.replace(r#""id":1"#, r#""id":5"#);
    assert!(read_geometry(&sparse).is_err());
    let unknown = good.replace(r#""type":"L""#, r#""type":"Q""#);
    assert!(read_geometry(&unknown).is_err());
    let same_type = good.replace(r#""type":"L""#, r#""type":"P""#);
    assert!(read_geometry(&same_type).is_err());
}

#[test]
fn correlation_round_trip() {
    let delta = fano_complex();
    let sys = delta.incidence_system();
    let tau = delta.canonical_triality().unwrap();
    let text = write_correlation(&tau);
    assert_eq!(read_correlation(sys, &text).unwrap(), tau);

    // a transposition of two elements of the same type is not an automorphism
    let broken = Permutation::from_cycles(sys.len(), &[&[0, 1]]).unwrap();
    let bad = serde_json::json!({ "perm": broken, "type_perm": [0, 1, 2] }).to_string();
    assert!(read_correlation(sys, &bad).is_err());
}

#[test]
fn dot_of_fano_complex() {
    let delta = fano_complex();
    let dot = to_dot(delta.incidence_system(), "PG(2,2)");
    assert!(dot.starts_with("graph \"PG(2,2)\" {"));
    let nodes: Vec<&str> = dot.lines().filter(|l| l.contains("label=")).collect();
    assert_eq!(nodes.len(), 63);
    let colors: BTreeSet<&str> = nodes
        .iter()
        .filter_map(|l| l.split("fillcolor=").nth(1))
        .map(|rest| rest.split([',', ']']).next().unwrap())
        .collect();
    assert_eq!(colors.len(), 3);
    let edges = dot.lines().filter(|l| l.contains(" -- ")).count();
    assert_eq!(edges, delta.incidence_system().num_edges());
}

#[test]
fn hypermap_file_has_summary() {
    let delta = TriangleComplex::new(&LinearSpace::affine_space(2, 3).unwrap());
    let file = HypermapFile::new(hypermap_export(&delta).unwrap());
    let value: serde_json::Value = serde_json::from_str(&file.to_json()).unwrap();
    assert_eq!(value["summary"], "D=216, V=36, E=36, F=36, χ=-108, genus=55");
    assert_eq!(value["darts"], 216);
    assert_eq!(value["sigma"].as_array().unwrap().len(), 216);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_powers_round_trip(k in 0i64..6, g in 0usize..20) {
        let delta = fano_complex();
        let sys = delta.incidence_system();
        let space = delta.space();
        let group = trigeom::core::group::classical::classification_group(
            space,
            trigeom::core::group::classical::ClassicalCase::Pgl,
        )
        .unwrap();
        let gens = group.generators();
        let lifted = delta.lift_point_map(&gens[g % gens.len()]).unwrap();
        let c: Correlation = lifted.compose(&delta.canonical_triality().unwrap().pow(k));
        let back = read_correlation(sys, &write_correlation(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn random_labels_survive(labels in proptest::collection::vec("[a-z(),0-9 ]{0,8}", 4)) {
        let file = GeometryFile {
            name: None,
            types: vec!["P".into(), "L".into()],
            elements: labels
                .iter()
                .enumerate()
                .map(|(id, label)| trigeom::format::ElementRecord {
                    id,
                    type_label: if id < 2 { "P" } else { "L" }.into(),
                    label: label.clone(),
                })
                .collect(),
            incidences: vec![[0, 2], [1, 2], [0, 3]],
            components: None,
        };
        let back = GeometryFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&back, &file);
        let sys = back.to_system().unwrap();
        prop_assert_eq!(sys.labels(), &labels[..]);
    }
}
