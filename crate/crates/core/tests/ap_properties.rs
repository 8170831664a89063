use analogy::ap::{diff, holds, inverse_paralogy_raw, solve_raw, DiffEntry};
use analogy::{ap_holds, ap_holds_vec, solve, solve_vec, Domain, Item};
use proptest::prelude::*;

const AP_TRUE: [[u8; 4]; 6] = [
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 0, 1],
    [1, 0, 1, 0],
    [0, 0, 0, 0],
    [1, 1, 1, 1],
];

const IP_TRUE: [[u8; 4]; 6] = [
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
    [1, 0, 1, 0],
    [0, 1, 0, 1],
];

fn all_boolean_quadruples() -> impl Iterator<Item = [u8; 4]> {
    (0u8..16).map(|m| [m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1])
}

#[test]
fn ap_truth_table_is_exactly_six_valuations() {
    let d = Domain::boolean();
    let mut found = Vec::new();
    for q in all_boolean_quadruples() {
        let v = q.map(|x| d.value(if x == 1 { "1" } else { "0" }).unwrap());
        if ap_holds(v[0], v[1], v[2], v[3]).unwrap() {
            found.push(q);
        }
    }
    let mut expected = AP_TRUE.to_vec();
    expected.sort();
    found.sort();
    assert_eq!(found, expected);
}

#[test]
fn inverse_paralogy_truth_table() {
    let mut found: Vec<[u8; 4]> = all_boolean_quadruples()
        .filter(|q| inverse_paralogy_raw(q[0] == 1, q[1] == 1, q[2] == 1, q[3] == 1))
        .collect();
    let mut expected = IP_TRUE.to_vec();
    expected.sort();
    found.sort();
    assert_eq!(found, expected);
}

fn postulates_hold(a: u8, b: u8, c: u8, d: u8) -> bool {
    if !holds(a, b, c, d) {
        return true;
    }
    holds(c, d, a, b) && holds(a, c, b, d) && holds(d, b, c, a) && holds(b, a, d, c) && holds(d, c, b, a)
}

#[test]
fn postulates_on_boolean_quadruples() {
    for [a, b, c, d] in all_boolean_quadruples() {
        assert!(postulates_hold(a, b, c, d));
        assert!(holds(a, b, a, b));
        assert!(holds(a, a, b, b));
    }
}

#[test]
fn boolean_solvability_and_value() {
    for m in 0u8..8 {
        let (a, b, c) = (m >> 2 & 1 == 1, m >> 1 & 1 == 1, m & 1 == 1);
        let by_search: Vec<bool> = [false, true].into_iter().filter(|&x| holds(a, b, c, x)).collect();
        let solved = solve_raw(a, b, c);
        assert_eq!(solved.is_some(), a == b || a == c);
        match solved {
            Some(x) => {
                assert_eq!(by_search, vec![x]);
                assert_eq!(x, c == (a == b));
            }
            None => assert!(by_search.is_empty()),
        }
    }
}

#[test]
fn nominal_solver_over_domain_of_four() {
    let d = Domain::new("n", ["g", "h", "k", "m"]).unwrap();
    let values = d.values().collect::<Vec<_>>();
    for &a in &values {
        for &b in &values {
            for &c in &values {
                let by_search: Vec<_> = values
                    .iter()
                    .copied()
                    .filter(|&x| ap_holds(a, b, c, x).unwrap())
                    .collect();
                match solve(a, b, c).unwrap() {
                    Some(x) => assert_eq!(by_search, vec![x]),
                    None => assert!(by_search.is_empty()),
                }
            }
        }
    }
}

fn nominal_quadruple() -> impl Strategy<Value = (u16, [u16; 4])> {
    (2u16..=5).prop_flat_map(|k| (Just(k), prop::array::uniform4(0..k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn nominal_postulates((k, [a, b, c, d]) in nominal_quadruple(), shift in 1u16..5) {
        prop_assert!(holds(a, b, a, b));
        prop_assert!(holds(a, a, b, b));
        if holds(a, b, c, d) {
            prop_assert!(holds(c, d, a, b));
            prop_assert!(holds(a, c, b, d));
            prop_assert!(holds(d, b, c, a));
            prop_assert!(holds(b, a, d, c));
            prop_assert!(holds(d, c, b, a));
        }
        // cyclic renaming is a bijection of the domain
        let s = |x: u16| (x + shift) % k;
        prop_assert_eq!(holds(a, b, c, d), holds(s(a), s(b), s(c), s(d)));
    }

    #[test]
    fn solver_sound_and_unique((k, [a, b, c, _]) in nominal_quadruple()) {
        let hits: Vec<u16> = (0..k).filter(|&x| holds(a, b, c, x)).collect();
        match solve_raw(a, b, c) {
            Some(x) => prop_assert_eq!(hits, vec![x]),
            None => prop_assert!(hits.is_empty()),
        }
    }
}

fn item_quadruple() -> impl Strategy<Value = [Vec<u16>; 4]> {
    (1usize..6).prop_flat_map(|n| {
        let v = || prop::collection::vec(0u16..3, n);
        (v(), v(), v(), v()).prop_map(|(a, b, c, d)| [a, b, c, d])
    })
}

proptest! {
    #[test]
    fn pairing_characterization(q in item_quadruple()) {
        let [a, b, c, d] = q.map(Item::new);
        let by_components = ap_holds_vec(&a, &b, &c, &d).unwrap();
        prop_assert_eq!(by_components, diff(&a, &b).unwrap() == diff(&c, &d).unwrap());
    }

    #[test]
    fn pairing_on_solved_fourth(q in item_quadruple()) {
        let [a, b, c, _] = q.map(Item::new);
        if let Some(x) = solve_vec(&a, &b, &c).unwrap() {
            prop_assert_eq!(diff(&a, &b).unwrap(), diff(&c, &x).unwrap());
        }
    }

    #[test]
    fn diff_antisymmetry(q in item_quadruple()) {
        let [a, b, _, _] = q.map(Item::new);
        let ab = diff(&a, &b).unwrap();
        let ba = diff(&b, &a).unwrap();
        prop_assert_eq!(ab.agreement(), ba.agreement());
        for (x, y) in ab.entries().iter().zip(ba.entries()) {
            match (*x, *y) {
                (DiffEntry::Equal, DiffEntry::Equal) => {}
                (DiffEntry::Change { from, to }, DiffEntry::Change { from: f2, to: t2 }) => {
                    prop_assert_eq!((from, to), (t2, f2));
                }
                _ => prop_assert!(false, "mismatched entries"),
            }
        }
        prop_assert_eq!(ab.reversed(), ba);
    }

    #[test]
    fn vector_solution_is_componentwise(q in item_quadruple()) {
        let [a, b, c, _] = q.map(Item::new);
        let parts: Option<Vec<u16>> = (0..a.len()).map(|i| solve_raw(a.get(i), b.get(i), c.get(i))).collect();
        prop_assert_eq!(solve_vec(&a, &b, &c).unwrap(), parts.map(Item::new));
    }
}
