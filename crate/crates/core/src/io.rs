//! JSON graph documents.
//!
//! ```json
//! {
//!   "directed": true,
//!   "n": 3,
//!   "edges": [{"src": 1, "dst": 0, "weight": 1.0}],
//!   "opinions": [1.0, 0.0, 0.0],
//!   "node_weights": [1.0, 1.0, 1.0],
//!   "fixed": [0]
//! }
//! ```
//!
//! `node_weights` and `fixed` are optional. Writing always produces the
//! normalized form: merged, sorted edges and optional fields omitted when
//! absent.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub directed: bool,
    pub n: usize,
    pub edges: Vec<EdgeDoc>,
    pub opinions: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<Vec<usize>>,
}

impl GraphDoc {
    pub fn into_graph(self) -> Result<Graph, GraphError> {
        let edges = self.edges.iter().map(|e| Edge::new(e.src, e.dst, e.weight));
        let mut g = Graph::new(self.directed, self.n, edges, self.opinions)?;
        if let Some(w) = self.node_weights {
            g = g.with_node_weights(w)?;
        }
        if let Some(f) = self.fixed {
            g = g.with_fixed(f)?;
        }
        Ok(g)
    }
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        Self {
            directed: g.is_directed(),
            n: g.n(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    src: e.src,
                    dst: e.dst,
                    weight: e.weight,
                })
                .collect(),
            opinions: g.opinions().iter().copied().collect(),
            node_weights: g.node_weights().map(|w| w.iter().copied().collect()),
            fixed: g.fixed_nodes().map(|f| f.iter().copied().collect()),
        }
    }
}

pub fn read_graph(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| GraphError::Document(e.to_string()))?;
    doc.into_graph()
}

pub fn write_graph(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDoc::from(g)).expect("graph documents always serialize")
}
