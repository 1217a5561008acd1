//! Seeded random instances for differential testing.
//!
//! Every instance is a pure function of its seed and config, so a failing
//! seed can be re-emitted as a fixture file with [`Instance::to_json`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::json::write_graph;
use crate::graph::{DirectedGraph, FeatureKind, FeatureSchema, FeatureValue, GraphBuilder, VertexSet};

pub const PALETTE: [&str; 8] = ["blue", "red", "green", "yellow", "purple", "brown", "orange", "grey"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Edges only between consecutive layers.
    Layered,
    /// Any ordered pair, self-loops included.
    Unlayered,
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_colors: usize,
    /// Extra ordered dimensions besides the colour.
    pub ordered_dims: usize,
    /// `None` picks the family from the seed.
    pub family: Option<Family>,
    /// Chance that an ordered feature is missing.
    pub missing_rate: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            min_vertices: 3,
            max_vertices: 12,
            max_colors: 4,
            ordered_dims: 0,
            family: None,
            missing_rate: 0.15,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub family: Family,
    pub density: f64,
    pub graph: DirectedGraph,
    pub source: VertexSet,
    pub target: VertexSet,
}

impl Instance {
    /// Standalone graph document with the planted source and target.
    pub fn to_json(&self) -> String {
        write_graph(&self.graph, Some(&self.source), Some(&self.target))
    }

    /// One-line provenance for test logs.
    pub fn describe(&self) -> String {
        format!(
            "seed={} family={:?} |V|={} |E|={} k={} density={:.2}",
            self.seed,
            self.family,
            self.graph.vertex_count(),
            self.graph.edge_count(),
            self.graph.color_count(),
            self.density
        )
    }
}

fn schema(k: usize, ordered_dims: usize) -> FeatureSchema {
    let mut s = FeatureSchema::new();
    s.add_dimension("color", FeatureKind::Categorical).unwrap();
    for name in &PALETTE[..k] {
        s.intern(0, name).unwrap();
    }
    for d in 0..ordered_dims {
        s.add_dimension(&format!("f{}", d + 1), FeatureKind::Ordered).unwrap();
    }
    s
}

fn random_subset(rng: &mut ChaCha8Rng, pool: &[usize], max: usize, universe: usize) -> VertexSet {
    let size = rng.gen_range(1..=max.min(pool.len()));
    VertexSet::from_ids(universe, pool.choose_multiple(rng, size).copied())
}

pub fn random_instance(seed: u64, config: &GeneratorConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(config.min_vertices..=config.max_vertices.max(config.min_vertices));
    let k = rng.gen_range(1..=config.max_colors.clamp(1, PALETTE.len()));
    let family = config.family.unwrap_or(if rng.gen_bool(0.5) {
        Family::Layered
    } else {
        Family::Unlayered
    });
    let density = rng.gen_range(0.15..0.55);

    let mut b = GraphBuilder::new(schema(k, config.ordered_dims));
    for v in 0..n {
        let mut features = vec![FeatureValue::Category(rng.gen_range(0..k as u32))];
        for _ in 0..config.ordered_dims {
            features.push(if rng.gen_bool(config.missing_rate) {
                FeatureValue::Missing
            } else {
                FeatureValue::number(rng.gen_range(0..4) as f64).unwrap()
            });
        }
        b.add_vertex(&format!("v{v}"), features).unwrap();
    }

    let mut layer = vec![0usize; n];
    match family {
        Family::Layered => {
            let layers = rng.gen_range(2..=5.min(n));
            for (v, l) in layer.iter_mut().enumerate() {
                // the first `layers` vertices pin every layer nonempty
                *l = if v < layers { v } else { rng.gen_range(0..layers) };
            }
            for u in 0..n {
                for v in 0..n {
                    if layer[v] == layer[u] + 1 && rng.gen_bool(density) {
                        b.add_edge(u, v).unwrap();
                    }
                }
            }
        }
        Family::Unlayered => {
            for u in 0..n {
                for v in 0..n {
                    if rng.gen_bool(density * 0.6) {
                        b.add_edge(u, v).unwrap();
                    }
                }
            }
        }
    }
    let graph = b.build();

    let starts: Vec<usize> = match family {
        Family::Layered => (0..n).filter(|&v| layer[v] == 0).collect(),
        Family::Unlayered => (0..n).collect(),
    };
    let source = random_subset(&mut rng, &starts, 3, n);

    // Plant a target: usually the endpoint set of a random colour walk, so
    // that an exact program exists; sometimes a perturbed or arbitrary set.
    let all: Vec<usize> = (0..n).collect();
    let steps = rng.gen_range(1..=3);
    let mut end = source.clone();
    for _ in 0..steps {
        let succ = graph.out_neighbors(&end);
        let Some(&v) = succ.to_vec().choose(&mut rng) else {
            break;
        };
        let c = graph.color_of(v).unwrap();
        end = graph.color_image(&end, c);
    }
    let roll: f64 = rng.gen();
    let target = if end.is_empty() || roll < 0.15 {
        random_subset(&mut rng, &all, 4, n)
    } else if roll < 0.35 {
        let mut t = end;
        t.insert(*all.choose(&mut rng).unwrap());
        t
    } else {
        end
    };

    Instance {
        seed,
        family,
        density,
        graph,
        source,
        target,
    }
}

/// A large graph of exactly `edges` distinct edges over `vertices`
/// vertices and `k` colours, for timing the verifier.
pub fn scaling_graph(seed: u64, vertices: usize, edges: usize, k: usize) -> DirectedGraph {
    assert!(edges <= vertices * vertices, "too many edges requested");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(schema(k.clamp(1, PALETTE.len()), 0));
    for v in 0..vertices {
        let c = rng.gen_range(0..k as u32);
        b.add_vertex(&format!("v{v}"), vec![FeatureValue::Category(c)]).unwrap();
    }
    let mut placed = 0;
    while placed < edges {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if b.add_edge(u, v).unwrap() {
            placed += 1;
        }
    }
    b.build()
}
