use std::path::Path;

use super::load_csv;
use crate::error::{invalid_arg, Error, Result};
use crate::matrix::Matrix;

/// Undirected weighted graph with continuous vertex attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    attributes: Matrix,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl AttributedGraph {
    /// A graph with one vertex per attribute row and no edges.
    pub fn new(attributes: Matrix) -> Self {
        let n = attributes.nrows();
        Self {
            attributes,
            neighbors: vec![Vec::new(); n],
        }
    }

    /// Adds the undirected edge `{u, v}`. A missing weight counts as 1.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: Option<f64>) -> Result<()> {
        let n = self.num_vertices();
        if u >= n || v >= n {
            return invalid_arg(format!("edge ({u}, {v}) references a vertex outside 0..{n}"));
        }
        let w = weight.unwrap_or(1.0);
        if !w.is_finite() {
            return Err(Error::InvalidData(format!("edge ({u}, {v}) has non-finite weight")));
        }
        self.neighbors[u].push((v, w));
        if u != v {
            self.neighbors[v].push((u, w));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.attributes.nrows()
    }

    pub fn attribute_dim(&self) -> usize {
        self.attributes.ncols()
    }

    pub fn attributes(&self) -> &Matrix {
        &self.attributes
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }
}

/// Per-vertex WL features `[a^0(v), ..., a^h(v)]` and their mean over the
/// graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WlEmbedding {
    pub vertices: Matrix,
    pub graph: Vec<f64>,
}

/// Continuous Weisfeiler-Lehman embedding with `h` propagation rounds:
///
/// `a^{h+1}(v) = (a^h(v) + (1/deg v) * sum_{u ~ v} w(v,u) a^h(u)) / 2`
///
/// A vertex without neighbours uses its own attribute in place of the
/// neighbour average.
pub fn wl_embed(graph: &AttributedGraph, h: usize) -> WlEmbedding {
    let n = graph.num_vertices();
    let m = graph.attribute_dim();
    let width = m * (h + 1);
    let mut vertices = Matrix::zeros(n, width);
    for v in 0..n {
        vertices.row_mut(v)[..m].copy_from_slice(graph.attributes.row(v));
    }
    let mut current = graph.attributes.clone();
    for round in 1..=h {
        let mut next = Matrix::zeros(n, m);
        for v in 0..n {
            let own = current.row(v);
            let mut avg = vec![0.0; m];
            let nbrs = graph.neighbors(v);
            if nbrs.is_empty() {
                avg.copy_from_slice(own);
            } else {
                for &(u, w) in nbrs {
                    for (a, x) in avg.iter_mut().zip(current.row(u)) {
                        *a += w * x;
                    }
                }
                let deg = nbrs.len() as f64;
                avg.iter_mut().for_each(|a| *a /= deg);
            }
            for ((o, a), x) in next.row_mut(v).iter_mut().zip(&avg).zip(own) {
                *o = 0.5 * (x + a);
            }
        }
        for v in 0..n {
            vertices.row_mut(v)[round * m..(round + 1) * m].copy_from_slice(next.row(v));
        }
        current = next;
    }
    let mut mean = vec![0.0; width];
    for row in vertices.rows_iter() {
        for (s, x) in mean.iter_mut().zip(row) {
            *s += x;
        }
    }
    if n > 0 {
        mean.iter_mut().for_each(|s| *s /= n as f64);
    }
    WlEmbedding { vertices, graph: mean }
}

/// Loads a graph from a vertex-attribute CSV (header row, one vertex per
/// row) and an edge list with lines `u v [weight]`, separated by commas or
/// whitespace. Lines starting with `#` are ignored.
pub fn load_graph(attributes: impl AsRef<Path>, edges: impl AsRef<Path>) -> Result<AttributedGraph> {
    let attrs = load_csv(attributes, None)?;
    let mut graph = AttributedGraph::new(attrs.points);
    let text = std::fs::read_to_string(edges)?;
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        let parse_err = |column: usize, message: String| Error::Parse {
            row: line_no + 1,
            column,
            message,
        };
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_err(0, format!("expected 'u v [weight]', found '{line}'")));
        }
        let u: usize = fields[0].parse().map_err(|_| parse_err(1, format!("bad vertex '{}'", fields[0])))?;
        let v: usize = fields[1].parse().map_err(|_| parse_err(2, format!("bad vertex '{}'", fields[1])))?;
        let w = match fields.get(2) {
            Some(f) => Some(f.parse::<f64>().map_err(|_| parse_err(3, format!("bad weight '{f}'")))?),
            None => None,
        };
        graph.add_edge(u, v, w)?;
    }
    Ok(graph)
}
