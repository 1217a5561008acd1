//! Simple colour programs: simulation, the cover predicates and the miner.

pub mod cover;
pub mod vibe;

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Color, DirectedGraph, VertexSet};
use crate::walk::{self, Classification, EndpointTrace};

pub use cover::{enumerate_pseudo_bases, minimal_covers};
pub use vibe::{mine_exact_scp, mine_feasible_scp, mine_scp, ScpMiner};

/// A sequence of colours; the empty program is ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorProgram(Vec<Color>);

impl ColorProgram {
    pub fn new(colors: Vec<Color>) -> Self {
        Self(colors)
    }

    pub fn epsilon() -> Self {
        Self(Vec::new())
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Program reading `names` in the colour dimension of `g`.
    pub fn parse<S: AsRef<str>>(g: &DirectedGraph, names: &[S]) -> Result<Self> {
        names
            .iter()
            .map(|n| g.color_by_name(n.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Every colour id must belong to the colour domain of `g`.
    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        g.require_colors()?;
        match self.0.iter().find(|c| c.0 as usize >= g.color_count()) {
            Some(c) => Err(Error::UnknownColor(format!("#{}", c.0))),
            None => Ok(()),
        }
    }

    pub fn names<'g>(&self, g: &'g DirectedGraph) -> Vec<&'g str> {
        self.0
            .iter()
            .map(|&c| g.color_name(c).unwrap_or("?"))
            .collect()
    }

    pub fn display<'a>(&'a self, g: &'a DirectedGraph) -> impl fmt::Display + 'a {
        DisplayProgram { p: self, g }
    }

    pub(crate) fn prepend(&self, c: Color) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(c);
        v.extend_from_slice(&self.0);
        Self(v)
    }
}

struct DisplayProgram<'a> {
    p: &'a ColorProgram,
    g: &'a DirectedGraph,
}

impl fmt::Display for DisplayProgram<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&self.p.names(self.g).join("·"))
    }
}

pub fn simulate_scp(g: &DirectedGraph, source: &VertexSet, p: &ColorProgram) -> EndpointTrace {
    walk::simulate(g, source, p.colors())
}

pub fn classify_scp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    p: &ColorProgram,
) -> Classification {
    walk::classify(g, source, target, p.colors())
}

/// `C_c(N_o(A)) ⊇ B`.
pub fn covers(g: &DirectedGraph, a: &VertexSet, b: &VertexSet, c: Color) -> bool {
    b.is_subset(&g.color_image(a, c))
}

/// `∅ ≠ C_c(N_o(A)) ⊆ B`.
pub fn injects(g: &DirectedGraph, a: &VertexSet, b: &VertexSet, c: Color) -> bool {
    let img = g.color_image(a, c);
    !img.is_empty() && img.is_subset(b)
}

/// `C_c(N_o(A)) ∖ B ≠ ∅`.
pub fn outspans(g: &DirectedGraph, a: &VertexSet, b: &VertexSet, c: Color) -> bool {
    !g.color_image(a, c).is_subset(b)
}

/// Covers without outspanning: the image is exactly `B`.
pub fn spans(g: &DirectedGraph, a: &VertexSet, b: &VertexSet, c: Color) -> bool {
    g.color_image(a, c) == *b
}
