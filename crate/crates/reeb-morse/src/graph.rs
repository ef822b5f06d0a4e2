//! Input model: finite labeled multigraphs with exact rational heights,
//! hypothesis validation, and synthesis of good height functions.

use crate::rational::{format_rational, Rational};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// Descriptor of a connected closed (m-1)-manifold prescribed over an edge.
///
/// `Sphere` is legal in every dimension. `Surface` only for m = 3, where
/// regular levels are closed surfaces; non-orientable ones are restricted
/// to Klein-bottle connected sums, i.e. an even crosscap count >= 2.
/// `Surgery` only for m = 4: an integral framed-link description of a
/// closed orientable 3-manifold by its (symmetric) linking matrix; the
/// empty 0x0 matrix denotes the 3-sphere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PreimageLabel {
    Sphere,
    Surface {
        orientable: bool,
        genus: u32,
        crosscaps: u32,
    },
    Surgery {
        matrix: Vec<Vec<i64>>,
    },
}

impl PreimageLabel {
    pub fn surface(genus: u32) -> Self {
        PreimageLabel::Surface {
            orientable: true,
            genus,
            crosscaps: 0,
        }
    }

    pub fn klein_sum(crosscaps: u32) -> Self {
        PreimageLabel::Surface {
            orientable: false,
            genus: 0,
            crosscaps,
        }
    }

    pub fn surgery(matrix: Vec<Vec<i64>>) -> Self {
        PreimageLabel::Surgery { matrix }
    }

    /// Check the label against the ambient dimension. Returns a human
    /// readable problem description on failure.
    pub fn legality(&self, m: u32) -> std::result::Result<(), String> {
        match self {
            PreimageLabel::Sphere => Ok(()),
            PreimageLabel::Surface {
                orientable,
                genus,
                crosscaps,
            } => {
                if m != 3 {
                    return Err(format!("surface label requires m = 3, got m = {}", m));
                }
                if *orientable {
                    if *crosscaps != 0 {
                        return Err("orientable surface with nonzero crosscaps".into());
                    }
                    Ok(())
                } else {
                    if *genus != 0 {
                        return Err("non-orientable surface must use crosscaps, not genus".into());
                    }
                    if *crosscaps < 2 || *crosscaps % 2 != 0 {
                        return Err(format!(
                            "non-orientable label needs an even crosscap count >= 2 \
                             (Klein-bottle sums), got {}",
                            crosscaps
                        ));
                    }
                    Ok(())
                }
            }
            PreimageLabel::Surgery { matrix } => {
                if m != 4 {
                    return Err(format!("surgery label requires m = 4, got m = {}", m));
                }
                let n = matrix.len();
                if matrix.iter().any(|row| row.len() != n) {
                    return Err("surgery linking matrix must be square".into());
                }
                for i in 0..n {
                    for j in 0..n {
                        if matrix[i][j] != matrix[j][i] {
                            return Err("surgery linking matrix must be symmetric".into());
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Does the label denote the standard sphere S^{m-1}? Genus-zero
    /// orientable surfaces and empty surgery descriptions count.
    pub fn is_sphere(&self, m: u32) -> bool {
        match self {
            PreimageLabel::Sphere => true,
            PreimageLabel::Surface {
                orientable: true,
                genus: 0,
                crosscaps: 0,
            } => m == 3,
            PreimageLabel::Surgery { matrix } => m == 4 && matrix.is_empty(),
            _ => false,
        }
    }

    /// Euler characteristic of the labeled manifold when it is a surface.
    pub fn surface_chi(&self) -> Option<i64> {
        match self {
            PreimageLabel::Sphere => Some(2),
            PreimageLabel::Surface {
                orientable: true,
                genus,
                ..
            } => Some(2 - 2 * *genus as i64),
            PreimageLabel::Surface { crosscaps, .. } => Some(2 - *crosscaps as i64),
            PreimageLabel::Surgery { .. } => None,
        }
    }

    pub fn orientable(&self) -> bool {
        match self {
            PreimageLabel::Sphere => true,
            PreimageLabel::Surface { orientable, .. } => *orientable,
            PreimageLabel::Surgery { .. } => true,
        }
    }
}

impl fmt::Display for PreimageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreimageLabel::Sphere => write!(f, "sphere"),
            PreimageLabel::Surface {
                orientable: true,
                genus,
                ..
            } => write!(f, "surface(g={})", genus),
            PreimageLabel::Surface { crosscaps, .. } => write!(f, "surface(crosscaps={})", crosscaps),
            PreimageLabel::Surgery { matrix } => {
                write!(f, "surgery({}x{})", matrix.len(), matrix.len())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: String,
    pub height: Rational,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    /// Endpoint vertex indices; loops (equal endpoints) are representable
    /// so validation can report them, but they are never feasible.
    pub ends: (usize, usize),
    pub label: PreimageLabel,
}

/// The input graph `K` with heights `g` and edge labels, dimension `m > 1`.
/// Parallel edges are distinct objects; degree counts multiplicity.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub dimension: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(dimension: u32, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Malformed(format!(
                "dimension must be an integer > 1, got {}",
                dimension
            )));
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(&v.id) {
                return Err(Error::Malformed(format!("duplicate vertex id `{}`", v.id)));
            }
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(&e.id) {
                return Err(Error::Malformed(format!("duplicate edge id `{}`", e.id)));
            }
            if e.ends.0 >= vertices.len() || e.ends.1 >= vertices.len() {
                return Err(Error::Malformed(format!(
                    "edge `{}` references a vertex out of range",
                    e.id
                )));
            }
        }
        Ok(LabeledGraph {
            dimension,
            vertices,
            edges,
        })
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Neighbor list with multiplicity, indexed by vertex.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.ends.0].push(e.ends.1);
            adj[e.ends.1].push(e.ends.0);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn skeleton(&self) -> GraphSkeleton {
        GraphSkeleton {
            vertex_count: self.vertices.len(),
            edges: self.edges.iter().map(|e| e.ends).collect(),
        }
    }

    /// First Betti number of the graph (edges - vertices + components).
    pub fn cycle_rank(&self) -> usize {
        // Only meaningful for connected graphs, which validation enforces.
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }
}

/// Structure-only multigraph used by height synthesis.
#[derive(Clone, Debug)]
pub struct GraphSkeleton {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphSkeleton {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.0 == v) as usize + (e.1 == v) as usize)
            .sum()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One failed hypothesis: a stable rule id, the offending vertex/edge ids,
/// and a message. Rule ids starting with `structure/` indicate malformed
/// input rather than infeasibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub subjects: Vec<String>,
    pub message: String,
}

impl Violation {
    fn new(rule: &str, subjects: Vec<String>, message: impl Into<String>) -> Self {
        Violation {
            rule: rule.to_string(),
            subjects,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub violations: Vec<Violation>,
}

impl HypothesisReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible() {
            return write!(f, "feasible");
        }
        let msgs: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("[{}] {}", v.rule, v.message))
            .collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Report every edge whose endpoint heights coincide and every loop edge.
/// Loops preclude good functions entirely.
pub fn validate_good_function(graph: &LabeledGraph) -> HypothesisReport {
    let mut violations = Vec::new();
    for e in &graph.edges {
        if e.ends.0 == e.ends.1 {
            violations.push(Violation::new(
                "loop-edge",
                vec![e.id.clone()],
                format!("edge `{}` is a loop; no good function exists", e.id),
            ));
            continue;
        }
        let (a, b) = e.ends;
        if graph.vertices[a].height == graph.vertices[b].height {
            violations.push(Violation::new(
                "good-function",
                vec![e.id.clone()],
                format!(
                    "edge `{}` has equal endpoint heights {}",
                    e.id,
                    format_rational(&graph.vertices[a].height)
                ),
            ));
        }
    }
    HypothesisReport { violations }
}

/// Vertices all of whose neighbors are strictly higher (local minima) or
/// strictly lower (local maxima). Invariant under monotone reparametrization
/// of heights since only comparisons are used.
pub fn local_extrema(graph: &LabeledGraph) -> Vec<usize> {
    let adj = graph.adjacency();
    let mut out = Vec::new();
    for v in 0..graph.vertices.len() {
        if adj[v].is_empty() {
            continue;
        }
        let h = &graph.vertices[v].height;
        let all_above = adj[v].iter().all(|&w| graph.vertices[w].height > *h);
        let all_below = adj[v].iter().all(|&w| graph.vertices[w].height < *h);
        if all_above || all_below {
            out.push(v);
        }
    }
    out
}

pub fn is_local_minimum(graph: &LabeledGraph, v: usize) -> bool {
    let adj = graph.adjacency();
    !adj[v].is_empty()
        && adj[v]
            .iter()
            .all(|&w| graph.vertices[w].height > graph.vertices[v].height)
}

/// Run every realization hypothesis in order and collect all violations.
pub fn validate_hypotheses(graph: &LabeledGraph) -> HypothesisReport {
    let mut violations = Vec::new();

    if graph.edges.is_empty() {
        violations.push(Violation::new(
            "min-edges",
            vec![],
            "graph must have at least one edge",
        ));
    }
    if !graph.is_connected() {
        violations.push(Violation::new(
            "connectivity",
            vec![],
            "graph must be connected",
        ));
    }

    let good = validate_good_function(graph);
    let has_loop = good.has_rule("loop-edge");
    let good_ok = good.feasible();
    violations.extend(good.violations);

    // Extremum conditions only make sense once heights form a good function.
    if good_ok && !has_loop {
        for v in local_extrema(graph) {
            let deg = graph.degree(v);
            if deg != 1 {
                violations.push(Violation::new(
                    "extremum-degree",
                    vec![graph.vertices[v].id.clone()],
                    format!(
                        "local extremum `{}` has degree {}, must be 1",
                        graph.vertices[v].id, deg
                    ),
                ));
            }
            for e in &graph.edges {
                if (e.ends.0 == v || e.ends.1 == v) && !e.label.is_sphere(graph.dimension) {
                    violations.push(Violation::new(
                        "extremum-label",
                        vec![e.id.clone(), graph.vertices[v].id.clone()],
                        format!(
                            "edge `{}` at extremum `{}` carries label {}, must be the sphere",
                            e.id, graph.vertices[v].id, e.label
                        ),
                    ));
                }
            }
        }
    }

    for e in &graph.edges {
        if let Err(msg) = e.label.legality(graph.dimension) {
            violations.push(Violation::new(
                "label-legal",
                vec![e.id.clone()],
                format!("edge `{}`: {}", e.id, msg),
            ));
        }
    }

    HypothesisReport { violations }
}

/// Outcome of good-function synthesis.
#[derive(Clone, Debug)]
pub enum Synthesis {
    /// Integer height per vertex; adjacent heights distinct, every local
    /// extremum at a degree-1 vertex.
    Heights(Vec<i64>),
    Infeasible { reason: String },
}

/// Find integer heights making the skeleton a good function whose local
/// extrema all have degree 1, or report infeasibility.
///
/// Search over vertex orderings, placed bottom-up: a vertex may be placed
/// next iff it has degree <= 1, or it has both a neighbor already placed
/// (below) and a neighbor not yet placed (above). Memoizing on the placed
/// set makes this a subset DP; determinism comes from trying candidates in
/// index order.
pub fn synthesize_good_function(skeleton: &GraphSkeleton) -> Result<Synthesis> {
    let n = skeleton.vertex_count;
    if n < 2 || skeleton.edges.is_empty() {
        return Err(Error::Precondition(
            "synthesis needs a connected loopless multigraph with >= 1 edge".into(),
        ));
    }
    if n > 64 {
        return Err(Error::Precondition(
            "synthesis supports at most 64 vertices".into(),
        ));
    }
    if skeleton.edges.iter().any(|&(a, b)| a == b) {
        return Ok(Synthesis::Infeasible {
            reason: "graph has a loop edge; no good function exists".into(),
        });
    }
    if !skeleton.is_connected() {
        return Err(Error::Precondition("synthesis needs a connected graph".into()));
    }

    let neighbor_mask: Vec<u64> = {
        let adj = skeleton.neighbors();
        (0..n)
            .map(|v| adj[v].iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect()
    };
    let degree: Vec<usize> = (0..n).map(|v| skeleton.degree(v)).collect();
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };

    let mut dead = std::collections::HashSet::new();
    let mut order = Vec::with_capacity(n);
    if place(0, full, &neighbor_mask, &degree, &mut dead, &mut order) {
        let mut heights = vec![0i64; n];
        for (rank, &v) in order.iter().enumerate() {
            heights[v] = rank as i64;
        }
        Ok(Synthesis::Heights(heights))
    } else {
        Ok(Synthesis::Infeasible {
            reason: format!(
                "no ordering of the {} vertices puts every local extremum at a degree-1 vertex",
                n
            ),
        })
    }
}

fn place(
    placed: u64,
    full: u64,
    neighbor_mask: &[u64],
    degree: &[usize],
    dead: &mut std::collections::HashSet<u64>,
    order: &mut Vec<usize>,
) -> bool {
    if placed == full {
        return true;
    }
    if dead.contains(&placed) {
        return false;
    }
    for v in 0..neighbor_mask.len() {
        let bit = 1u64 << v;
        if placed & bit != 0 {
            continue;
        }
        let below = neighbor_mask[v] & placed;
        let above = neighbor_mask[v] & !placed & full & !bit;
        let ok = degree[v] <= 1 || (below != 0 && above != 0);
        if !ok {
            continue;
        }
        order.push(v);
        if place(placed | bit, full, neighbor_mask, degree, dead, order) {
            return true;
        }
        order.pop();
    }
    dead.insert(placed);
    false
}

/// Build a labeled graph from a skeleton plus synthesized heights, with
/// every edge labeled by the sphere. Convenience for pipelines and tests.
pub fn graph_with_heights(
    dimension: u32,
    skeleton: &GraphSkeleton,
    heights: &[i64],
) -> Result<LabeledGraph> {
    let vertices = heights
        .iter()
        .enumerate()
        .map(|(i, &h)| Vertex {
            id: format!("v{}", i),
            height: Rational::from_integer(h.into()),
        })
        .collect();
    let edges = skeleton
        .edges
        .iter()
        .enumerate()
        .map(|(i, &ends)| Edge {
            id: format!("e{}", i),
            ends,
            label: PreimageLabel::Sphere,
        })
        .collect();
    LabeledGraph::new(dimension, vertices, edges)
}

pub fn rational_is_zero(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational_int;

    pub(crate) fn graph_from(
        dimension: u32,
        heights: &[i64],
        edges: &[(usize, usize)],
    ) -> LabeledGraph {
        let vertices = heights
            .iter()
            .enumerate()
            .map(|(i, &h)| Vertex {
                id: format!("v{}", i),
                height: rational_int(h),
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &ends)| Edge {
                id: format!("e{}", i),
                ends,
                label: PreimageLabel::Sphere,
            })
            .collect();
        LabeledGraph::new(dimension, vertices, edges).unwrap()
    }

    #[test]
    fn good_function_single_edge() {
        let g = graph_from(3, &[0, 1], &[(0, 1)]);
        assert!(validate_good_function(&g).feasible());

        let g = graph_from(3, &[1, 1], &[(0, 1)]);
        let rep = validate_good_function(&g);
        assert!(rep.has_rule("good-function"));

        let g = graph_from(3, &[0, 1], &[(0, 0)]);
        let rep = validate_good_function(&g);
        assert!(rep.has_rule("loop-edge"));
    }

    #[test]
    fn extrema_on_paths_stars_cycles() {
        let path = graph_from(3, &[0, 1, 2], &[(0, 1), (1, 2)]);
        assert_eq!(local_extrema(&path), vec![0, 2]);

        // star: center at 1, leaves at 0 and 2
        let star = graph_from(3, &[1, 0, 2], &[(0, 1), (0, 2)]);
        assert_eq!(local_extrema(&star), vec![1, 2]);

        let triangle = graph_from(2, &[0, 1, 2], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(local_extrema(&triangle), vec![0, 2]);
    }

    #[test]
    fn extrema_invariant_under_monotone_maps() {
        // h -> h^3 + 2 preserves order on integers.
        let edges = [(0, 1), (1, 2), (1, 3), (3, 4)];
        let a = graph_from(3, &[0, 3, 1, 5, 2], &edges);
        let b = graph_from(3, &[2, 29, 3, 127, 10], &edges);
        assert_eq!(local_extrema(&a), local_extrema(&b));
    }

    #[test]
    fn hypotheses_examples() {
        let triangle = graph_from(2, &[0, 1, 2], &[(0, 1), (1, 2), (2, 0)]);
        let rep = validate_hypotheses(&triangle);
        assert!(!rep.feasible());
        assert!(rep.has_rule("extremum-degree"));

        let single = graph_from(3, &[0, 1], &[(0, 1)]);
        assert!(validate_hypotheses(&single).feasible());

        let mut path = graph_from(3, &[0, 1, 2], &[(0, 1), (1, 2)]);
        path.edges[0].label = PreimageLabel::surface(1);
        let rep = validate_hypotheses(&path);
        assert!(rep.has_rule("extremum-label"));
    }

    #[test]
    fn label_legality() {
        assert!(PreimageLabel::surface(2).legality(3).is_ok());
        assert!(PreimageLabel::surface(2).legality(2).is_err());
        assert!(PreimageLabel::klein_sum(2).legality(3).is_ok());
        assert!(PreimageLabel::klein_sum(1).legality(3).is_err());
        assert!(PreimageLabel::klein_sum(3).legality(3).is_err());
        assert!(PreimageLabel::surgery(vec![vec![0, 1], vec![1, 0]]).legality(4).is_ok());
        assert!(PreimageLabel::surgery(vec![vec![0, 1], vec![2, 0]]).legality(4).is_err());
        assert!(PreimageLabel::surgery(vec![]).legality(4).is_ok());
        assert!(PreimageLabel::surgery(vec![]).is_sphere(4));
        assert!(PreimageLabel::surface(0).is_sphere(3));
    }

    #[test]
    fn synthesis_examples() {
        // Path on 3 vertices is feasible.
        let path = GraphSkeleton {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2)],
        };
        match synthesize_good_function(&path).unwrap() {
            Synthesis::Heights(h) => {
                let g = graph_from(3, &h, &[(0, 1), (1, 2)]);
                assert!(validate_hypotheses(&g).feasible());
            }
            Synthesis::Infeasible { .. } => panic!("path must be feasible"),
        }

        // 4-cycle: every vertex has degree 2, the global minimum is always
        // a local extremum, so no assignment works.
        let cycle = GraphSkeleton {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        };
        assert!(matches!(
            synthesize_good_function(&cycle).unwrap(),
            Synthesis::Infeasible { .. }
        ));

        // Double edge with a pendant below and above (torus Reeb shape).
        let torus = GraphSkeleton {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (1, 2), (2, 3)],
        };
        match synthesize_good_function(&torus).unwrap() {
            Synthesis::Heights(h) => {
                let g = graph_from(2, &h, &[(0, 1), (1, 2), (1, 2), (2, 3)]);
                assert!(validate_hypotheses(&g).feasible());
            }
            Synthesis::Infeasible { .. } => panic!("torus shape must be feasible"),
        }
    }
}
