use graphwalk::graph::{Color, VertexSet};
use graphwalk::oracle::brute::minimal_covers_bruteforce;
use graphwalk::oracle::generate::{random_instance, GeneratorConfig};
use graphwalk::report::stp_report_json;
use graphwalk::scp::enumerate_pseudo_bases;
use graphwalk::stp::mine_stp;
use graphwalk::{Fidelity, MiningConfig, Mode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pseudo_bases_match_subset_scan(seed in 0u64..5000, picks in any::<(u64, u64, u64)>()) {
        let inst = random_instance(seed, &GeneratorConfig { max_vertices: 10, ..Default::default() });
        let g = &inst.graph;
        let n = g.vertex_count();
        let from_bits = |bits: u64| VertexSet::from_ids(n, (0..n).filter(|i| bits >> i & 1 == 1));
        let (pool, b, extra) = (from_bits(picks.0), from_bits(picks.1), from_bits(picks.2));
        let m = b.union(&extra);
        let c = Color((picks.0 >> 20) as u32 % g.color_count() as u32);

        let got = enumerate_pseudo_bases(g, &pool, &b, &m, c);
        let images: Vec<VertexSet> = (0..n).map(|v| g.vertex_color_image(v, c)).collect();
        let injecting = VertexSet::from_ids(n, pool.iter().filter(|&v| images[v].is_subset(&m)));
        let expected = if b.is_empty() {
            Vec::new()
        } else {
            minimal_covers_bruteforce(&injecting, &images, &b).unwrap()
        };
        prop_assert_eq!(&got, &expected);
        for basis in &got {
            for v in basis {
                let mut smaller = basis.clone();
                smaller.remove(v);
                prop_assert!(!b.is_subset(&g.color_image(&smaller, c)));
            }
        }
    }
}

#[test]
fn toset_reports_are_deterministic() {
    let cfg = GeneratorConfig { ordered_dims: 2, ..Default::default() };
    for seed in 0..40 {
        let inst = random_instance(seed, &cfg);
        for mode in [Mode::Exact, Mode::Feasible] {
            for fidelity in [Fidelity::Repaired, Fidelity::Literal] {
                let config = MiningConfig::new(3).with_fidelity(fidelity).with_max_triples(20_000);
                let render = || -> Vec<String> {
                    mine_stp(&inst.graph, &inst.source, &inst.target, mode, &config)
                        .unwrap()
                        .iter()
                        .map(|r| stp_report_json(&inst.graph, r).to_string())
                        .collect()
                };
                assert_eq!(render(), render(), "{}", inst.describe());
            }
        }
    }
}
