use std::path::PathBuf;

use analogy::classifier::{analogical_suitability, extract_competent_pairs};
use analogy::generate::*;
use analogy::io::{load_dataset, read_dataset, write_dataset, LoadOptions, MissingPolicy, SchemaFile};
use analogy::{Attribute, Dataset, Domain, Error, Item, Schema};
use proptest::prelude::*;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (1usize..5, 2usize..5, 2usize..4).prop_flat_map(|(n, k, classes)| {
        let row = (prop::collection::vec(0u16..k as u16, n), 0u16..classes as u16);
        prop::collection::vec(row, 1..20).prop_map(move |rows| {
            let schema = Schema::new(
                (0..n)
                    .map(|i| {
                        let name = format!("f{i}");
                        let d = Domain::new(&name, (0..k).map(|v| format!("v{v}"))).unwrap();
                        Attribute::new(name, d)
                    })
                    .collect(),
            )
            .unwrap();
            let class = Attribute::new(
                "label",
                Domain::new("label", (0..classes).map(|c| format!("c{c}"))).unwrap(),
            );
            let (items, labels) = rows.into_iter().map(|(codes, l)| (Item::new(codes), l)).unzip();
            Dataset::new(schema, class, items, labels).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn write_then_read_round_trips(data in dataset_strategy()) {
        let mut bytes = Vec::new();
        write_dataset(&mut bytes, &data, b';').unwrap();
        let options = LoadOptions {
            delimiter: b';',
            schema: Some(SchemaFile::of_dataset(&data)),
            ..LoadOptions::default()
        };
        let back = read_dataset(bytes.as_slice(), &options).unwrap();
        prop_assert_eq!(back.items(), data.items());
        prop_assert_eq!(back.labels(), data.labels());
        prop_assert_eq!(back.schema(), data.schema());
        let mut again = Vec::new();
        write_dataset(&mut again, &back, b';').unwrap();
        prop_assert_eq!(again, bytes);
    }
}

#[test]
fn monk_files_match_generator() {
    for problem in 1..=3u8 {
        let generated = monk(problem).unwrap();
        assert_eq!(generated.len(), 432);
        let path = data_dir().join(format!("monks-{problem}.csv"));
        let loaded = load_dataset(&path, &LoadOptions::default()).unwrap();
        assert_eq!(loaded.items(), generated.items());
        assert_eq!(loaded.labels(), generated.labels());
        let mut bytes = Vec::new();
        write_dataset(&mut bytes, &generated, b',').unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
    }
    assert!(monk(4).is_err());
}

#[test]
fn monk_concepts_on_known_rows() {
    // a1..a6 with 1-based symbols
    let row = |d: &Dataset, s: [&str; 6]| {
        let item = d.schema().item(&s).unwrap();
        let i = d.items().iter().position(|x| *x == item).unwrap();
        d.label_symbol(d.label(i)).to_string()
    };
    let m1 = monk(1).unwrap();
    assert_eq!(row(&m1, ["2", "2", "1", "3", "4", "2"]), "1");
    assert_eq!(row(&m1, ["1", "2", "1", "1", "1", "1"]), "1");
    assert_eq!(row(&m1, ["1", "2", "1", "1", "2", "1"]), "0");
    let m2 = monk(2).unwrap();
    assert_eq!(row(&m2, ["1", "1", "2", "2", "2", "2"]), "1");
    assert_eq!(row(&m2, ["1", "1", "1", "2", "2", "2"]), "0");
    let m3 = monk(3).unwrap();
    assert_eq!(row(&m3, ["1", "3", "1", "1", "3", "1"]), "1");
    assert_eq!(row(&m3, ["1", "3", "1", "2", "3", "1"]), "0");
    assert_eq!(row(&m3, ["1", "1", "1", "2", "4", "1"]), "0");
    assert_eq!(row(&m3, ["1", "1", "1", "2", "1", "1"]), "1");
}

#[test]
fn affine_truth_tables() {
    for n in 1..=4 {
        for c in all_affine_coefficients(n) {
            let d = generate_affine(&AffineSpec {
                n,
                coefficients: Some(c.clone()),
                seed: 0,
            })
            .unwrap();
            assert_eq!(d.len(), 1 << n);
            for (item, label) in d.rows() {
                let expected = (0..n).fold(c[0], |acc, i| acc ^ (c[i + 1] && item.get(i) == 1));
                assert_eq!(label == 1, expected);
            }
        }
        assert_eq!(all_affine_coefficients(n).count(), 1 << (n + 1));
    }
    let bad = AffineSpec {
        n: 3,
        coefficients: Some(vec![true]),
        seed: 0,
    };
    assert!(generate_affine(&bad).is_err());
    let drawn = AffineSpec {
        n: 3,
        coefficients: None,
        seed: 9,
    };
    assert_eq!(generate_affine(&drawn).unwrap(), generate_affine(&drawn).unwrap());
}

#[test]
fn conjunction_is_not_affine() {
    let conj = truth_table(3, |x| x.iter().all(|&b| b)).unwrap();
    assert!(analogical_suitability(&conj).unwrap().errors > 0);
}

fn one_rule(instances: usize, exceptions: usize) -> PlantedSpec {
    PlantedSpec {
        domain_sizes: vec![3; 4],
        classes: vec!["p".into(), "q".into()],
        rules: vec![PlantedRule {
            change: vec![ChangeSpec {
                attribute: 2,
                from: 0,
                to: 1,
            }],
            tilt: (0, 1),
            instances,
            exceptions,
        }],
        background: 3,
        seed: 21,
    }
}

#[test]
fn planted_confidence_is_recovered() {
    for (instances, exceptions, confidence) in [(3, 0, 1.0), (3, 1, 0.75)] {
        let planted = generate_planted_rules(&one_rule(instances, exceptions)).unwrap();
        assert_eq!(planted.rules[0].confidence, confidence);
        let pairs = extract_competent_pairs(&planted.data, 1, 0.0).unwrap();
        let found = pairs
            .iter()
            .find(|p| p.rule_change == planted.rules[0].change && p.tilt == (0, 1))
            .unwrap();
        assert_eq!(found.support, instances as u64);
        assert_eq!(found.confidence, confidence);
    }
}

#[test]
fn planted_with_no_rules_is_background_only() {
    let spec = PlantedSpec {
        rules: vec![],
        ..one_rule(1, 0)
    };
    let planted = generate_planted_rules(&spec).unwrap();
    assert!(planted.rules.is_empty());
    assert!(planted.data.len() <= 3);
}

#[test]
fn inconsistent_planted_specs_rejected() {
    let mut spec = one_rule(1, 0);
    spec.rules[0].tilt = (1, 1);
    assert!(matches!(generate_planted_rules(&spec), Err(Error::InconsistentSpec(_))));
    let mut spec = one_rule(1, 0);
    spec.rules[0].change[0].to = 7;
    assert!(generate_planted_rules(&spec).is_err());
    let mut spec = one_rule(1, 0);
    spec.rules.push(spec.rules[0].clone());
    assert!(generate_planted_rules(&spec).is_err());
}

#[test]
fn planted_is_seed_deterministic() {
    let a = generate_planted_rules(&one_rule(2, 1)).unwrap();
    let b = generate_planted_rules(&one_rule(2, 1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn missing_values_rejected_or_dropped() {
    let text = "a,b,class\nx,?,yes\ny,1,no\nx,0,yes\n";
    assert!(matches!(
        read_dataset(text.as_bytes(), &LoadOptions::default()),
        Err(Error::MissingValue { .. })
    ));
    let options = LoadOptions {
        missing: MissingPolicy::DropRow,
        ..LoadOptions::default()
    };
    let d = read_dataset(text.as_bytes(), &options).unwrap();
    assert_eq!(d.len(), 2);
}

#[test]
fn ragged_and_empty_files_rejected() {
    assert!(matches!(
        read_dataset("a,b,c\nx,y\n".as_bytes(), &LoadOptions::default()),
        Err(Error::RaggedRow { .. })
    ));
    assert!(matches!(
        read_dataset("a,b\n".as_bytes(), &LoadOptions::default()),
        Err(Error::EmptyFile)
    ));
}

#[test]
fn class_column_by_name() {
    let text = "label,a,b\nyes,x,0\nno,y,1\n";
    let options = LoadOptions {
        class_column: Some("label".into()),
        ..LoadOptions::default()
    };
    let d = read_dataset(text.as_bytes(), &options).unwrap();
    assert_eq!(d.schema().names().collect::<Vec<_>>(), ["a", "b"]);
    assert_eq!(d.label_symbol(d.label(0)), "yes");
    let missing = LoadOptions {
        class_column: Some("nope".into()),
        ..LoadOptions::default()
    };
    assert!(read_dataset(text.as_bytes(), &missing).is_err());
}

#[test]
fn coffee_sidecar_declares_unobserved_value() {
    let schema = SchemaFile::load(data_dir().join("coffee.schema.json")).unwrap();
    let options = LoadOptions {
        schema: Some(schema),
        ..LoadOptions::default()
    };
    let d = load_dataset(data_dir().join("coffee.csv"), &options).unwrap();
    let dec = d.schema().index_of("dec.").unwrap();
    assert_eq!(d.schema().attribute(dec).domain.symbols(), ["coffee", "tea"]);
    assert!(load_dataset(data_dir().join("coffee.csv"), &LoadOptions::default()).is_err());
}
