use nss_core::crystalgraph::{
    census_table, check_axioms, e_hat, explore, export, import_json, weight_census, Format,
};
use nss_core::maya::canonical_diagrams;
use nss_core::mvoracle::{compare, Mode};
use nss_core::nss::{eps_hat, fingerprint, CartanData, NssDatum};
use nss_core::par::Execution;
use proptest::prelude::*;

fn cartan(n: usize) -> CartanData {
    CartanData::new(n).unwrap()
}

#[test]
fn json_round_trip_is_byte_identical() {
    let g = explore(cartan(3), 3, 12, Execution::Parallel).unwrap();
    let json = export(&g, Format::Json).unwrap();
    let back = import_json(&json).unwrap();
    assert_eq!(export(&back, Format::Json).unwrap(), json);
    assert!(check_axioms(&back).is_empty());
    assert!(census_table(&back, 3).unwrap().iter().all(|r| r.ok()));
}

#[test]
fn dot_counts_match_census() {
    let g = explore(cartan(2), 2, 6, Execution::Sequential).unwrap();
    let dot = export(&g, Format::Dot).unwrap();
    let total: u64 = weight_census(&g).values().sum();
    assert_eq!(dot.matches(" [label=\"").count() - dot.matches(" -> ").count(), total as usize);
    // every node of height < 2 has one outgoing edge per residue
    assert_eq!(dot.matches(" -> ").count(), 2 * 3);
    assert_eq!(weight_census(&g)[&vec![1, 1]], 2);
}

#[test]
fn eps_is_the_e_string_length() {
    let g = explore(cartan(2), 5, 12, Execution::Parallel).unwrap();
    for b in 0..g.len() {
        for i in 0..2 {
            let mut len = 0;
            let mut cur = b;
            while let Some(prev) = e_hat(&g, cur, i) {
                cur = prev;
                len += 1;
            }
            assert_eq!(g.nodes[b].eps[i], len);
        }
    }
}

#[test]
fn corrupted_graph_fails_checks() {
    let g = explore(cartan(2), 3, 8, Execution::Sequential).unwrap();
    let json = export(&g, Format::Json).unwrap();
    // bump one phi entry
    let mut value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let phi = value["nodes"][2]["phi"][0].as_i64().unwrap();
    value["nodes"][2]["phi"][0] = serde_json::json!(phi + 1);
    let bad = import_json(&value.to_string()).unwrap();
    assert!(!check_axioms(&bad).is_empty());
    assert!(import_json("{\"n\": 1, \"depth\": 0, \"nodes\": [], \"edges\": []}").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_words_land_on_explored_nodes(word in proptest::collection::vec(0usize..3, 0..5)) {
        let g = explore(cartan(3), 4, 15, Execution::Sequential).unwrap();
        let m = NssDatum::from_word(cartan(3), &word).unwrap();
        let fp = fingerprint(&m, 15).unwrap();
        let hits: Vec<usize> = (0..g.len())
            .filter(|&k| fingerprint(g.datum(k).unwrap(), 15).unwrap() == fp)
            .collect();
        prop_assert_eq!(hits.len(), 1);
        // following the word along f-edges reaches the same node
        let mut cur = 0;
        for &i in &word {
            cur = g.f_hat(cur, i).unwrap();
        }
        prop_assert_eq!(hits[0], cur);
        for i in 0..3 {
            prop_assert_eq!(eps_hat(&m, i).unwrap(), g.nodes[cur].eps[i]);
        }
    }

    #[test]
    fn random_and_symbolic_modes_agree(word in proptest::collection::vec(0usize..2, 0..4), seed in 0u64..1000) {
        let m = NssDatum::from_word(cartan(2), &word).unwrap();
        let gammas = canonical_diagrams(2, 5);
        let symbolic = compare(&m, &gammas, Mode::Symbolic, Execution::Sequential).unwrap();
        let random = compare(&m, &gammas, Mode::Random { seed }, Execution::Sequential).unwrap();
        prop_assert!(symbolic.pass);
        let a: Vec<_> = symbolic.results.iter().map(|r| r.oracle).collect();
        let b: Vec<_> = random.results.iter().map(|r| r.oracle).collect();
        prop_assert_eq!(a, b);
    }
}
