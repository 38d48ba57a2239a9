//! Undirected multigraphs and the combinatorics every other module leans on.

mod components;
mod cycles;
pub mod families;
mod space;
mod subset;

use std::fmt;
use std::str::FromStr;

pub use components::{component_count, component_sizes, odd_vertices, pair_count, UnionFind};
pub use cycles::{even_decomposition, Cycle, CycleInventory};
pub(crate) use space::submasks;
pub use space::SubsetSpace;
pub use subset::EdgeSubset;

use crate::error::{Error, Result};

/// An immutable undirected multigraph on vertices `0..n`.
///
/// Parallel edges are allowed, self-loops are not. Edge indices follow the
/// order in which edges were supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let mut incidence = vec![Vec::new(); n];
        for (index, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { index, vertex, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { index, vertex: u });
            }
            incidence[u].push(index);
            incidence[v].push(index);
        }
        Ok(Graph { n, edges, incidence })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge indices incident to `v`, in increasing order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// The endpoint of edge `e` that is not `v`.
    pub fn opposite(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Endpoints of `e` as a vertex bitmask. Requires `n <= 64`.
    pub fn endpoint_mask(&self, e: usize) -> u64 {
        let (u, v) = self.edges[e];
        (1u64 << u) | (1u64 << v)
    }

    pub fn empty_subset(&self) -> EdgeSubset {
        EdgeSubset::empty(self.edge_count())
    }

    pub fn full_subset(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    /// Parse the text format: a header line `n m`, then `m` lines `u v`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line `n m`".into(),
        })?;
        let (n, m) = parse_pair(header_line, header)?;
        if n == 0 {
            return Err(Error::Parse {
                line: header_line,
                message: "graph must have at least one vertex".into(),
            });
        }

        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            let (u, v) = parse_pair(line, body)?;
            if edges.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than the {m} edges declared in the header"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    message: format!("self-loop at vertex {u}"),
                });
            }
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("endpoint out of range for {n} vertices"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize)> {
    let mut it = body.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("missing {what}"),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line,
                message: format!("{what} is not a nonnegative integer"),
            })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            message: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_triangle_and_multigraph() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3.incident(0), &[0, 2]);
        let pair = Graph::new(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(pair.edge_count(), 2);
        assert_eq!(pair.edge(1), (0, 1));
    }

    #[test]
    fn rejects_self_loops_and_bad_endpoints() {
        assert!(matches!(
            Graph::new(2, [(0, 0)]),
            Err(Error::SelfLoop { index: 0, vertex: 0 })
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1), (1, 2)]),
            Err(Error::VertexOutOfRange {
                index: 1,
                vertex: 2,
                n: 2
            })
        ));
        assert!(matches!(Graph::new(0, []), Err(Error::NoVertices)));
    }

    #[test]
    fn parses_text_format() {
        let text = "# triangle\n3 3\n0 1\n\n1 2\n# closing edge\n0 2\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g, Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Graph::parse("2 1\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("self-loop"));
        assert!(matches!(Graph::parse("2 2\n0 1\n").unwrap_err(), Error::Parse { .. }));
        assert!(matches!(
            Graph::parse("3 1\n0 x\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Graph::parse("2 1\n0 1\n1 0\n").unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
    }
}
