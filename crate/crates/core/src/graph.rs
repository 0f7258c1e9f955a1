//! Ising graphs: the dual of a mesh, or any finite multigraph.
//!
//! Links are unordered: the Ising weight `e^{y σ_a σ_b}` is symmetric in the
//! two endpoints. Parallel links keep distinct ids, and cycles are built over
//! link ids rather than vertex pairs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{edge_records, EdgeRecord, EmbeddedMesh, GeometryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("link {link} references node {node} but the graph has {nodes} nodes")]
    NodeOutOfRange {
        link: usize,
        node: usize,
        nodes: usize,
    },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no nodes")]
    Empty,
    #[error("graph has {0} links; at most 128 are supported for subgraph masks")]
    TooManyLinks(usize),
    #[error("malformed graph document at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One link between two nodes. Self-loops are allowed in general graphs but
/// never produced by [`build_dual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
}

/// A connected multigraph; link ids are positions in `links`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingGraph {
    node_count: usize,
    links: Vec<Link>,
    /// Mesh edge `(A, B)` dual to each link, when built from a mesh.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mesh_edges: Option<Vec<(usize, usize)>>,
}

impl IsingGraph {
    pub fn new(node_count: usize, links: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let links: Vec<Link> = links.into_iter().map(|(a, b)| Link { a, b }).collect();
        for (i, l) in links.iter().enumerate() {
            for node in [l.a, l.b] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        link: i,
                        node,
                        nodes: node_count,
                    });
                }
            }
        }
        let g = Self {
            node_count,
            links,
            mesh_edges: None,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn mesh_edge(&self, link: usize) -> Option<(usize, usize)> {
        self.mesh_edges.as_ref().map(|m| m[link])
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for l in &self.links {
            deg[l.a] += 1;
            deg[l.b] += 1;
        }
        deg
    }

    /// Dimension `L − N + 1` of the binary cycle space.
    pub fn cycle_space_dimension(&self) -> usize {
        self.links.len() + 1 - self.node_count
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, l) in self.links.iter().enumerate() {
            adj[l.a].push((l.b, i));
            if l.a != l.b {
                adj[l.b].push((l.a, i));
            }
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(n) = queue.pop_front() {
            for &(m, _) in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    count += 1;
                    queue.push_back(m);
                }
            }
        }
        count == self.node_count
    }

    /// Fundamental cycles of a BFS spanning tree, as link bitmasks.
    pub fn cycle_masks(&self) -> Result<Vec<u128>, GraphError> {
        if self.links.len() > 128 {
            return Err(GraphError::TooManyLinks(self.links.len()));
        }
        let adj = self.adjacency();
        // parent[n] = (parent node, link to parent)
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.node_count];
        let mut depth = vec![0usize; self.node_count];
        let mut in_tree = vec![false; self.links.len()];
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(n) = queue.pop_front() {
            for &(m, link) in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    parent[m] = Some((n, link));
                    depth[m] = depth[n] + 1;
                    in_tree[link] = true;
                    queue.push_back(m);
                }
            }
        }
        let mut basis = Vec::with_capacity(self.cycle_space_dimension());
        for (i, l) in self.links.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            let mut mask = 1u128 << i;
            let (mut u, mut v) = (l.a, l.b);
            while u != v {
                if depth[u] < depth[v] {
                    std::mem::swap(&mut u, &mut v);
                }
                let (p, link) = parent[u].expect("non-root node has a parent");
                mask ^= 1u128 << link;
                u = p;
            }
            basis.push(mask);
        }
        Ok(basis)
    }

    /// Text export: a `nodes N` line followed by one `link <id> <a> <b>` line
    /// per link.
    pub fn to_text(&self) -> String {
        let mut s = format!("nodes {}\n", self.node_count);
        for (i, l) in self.links.iter().enumerate() {
            let _ = writeln!(s, "link {i} {} {}", l.a, l.b);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut nodes = None;
        let mut links = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| GraphError::Parse {
                line: i + 1,
                reason: reason.to_owned(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("bad integer"));
            match fields.as_slice() {
                ["nodes", n] => nodes = Some(num(n)?),
                ["link", id, a, b] => {
                    if num(id)? != links.len() {
                        return Err(err("link ids must be consecutive from 0"));
                    }
                    links.push((num(a)?, num(b)?));
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        let nodes = nodes.ok_or(GraphError::Parse {
            line: 0,
            reason: "missing `nodes` line".into(),
        })?;
        Self::new(nodes, links)
    }
}

/// Dual graph of a mesh: one node per face, one link per edge (in
/// [`crate::geometry::MeshTopology`] order), with the geometric record of
/// each edge.
pub fn build_dual(mesh: &EmbeddedMesh) -> Result<(IsingGraph, Vec<EdgeRecord>), GraphError> {
    mesh.check()?;
    let records = edge_records(mesh)?;
    let links = records.iter().map(|r| r.face_pair).collect();
    let mut graph = IsingGraph::new(mesh.face_count(), links)?;
    graph.mesh_edges = Some(records.iter().map(|r| r.vertex_pair).collect());
    Ok((graph, records))
}

/// Basis of the binary cycle space, each element a sorted list of link ids.
pub fn cycle_space_basis(graph: &IsingGraph) -> Result<Vec<Vec<usize>>, GraphError> {
    Ok(graph.cycle_masks()?.into_iter().map(mask_to_links).collect())
}

/// Every even subgraph (all `2^{L−N+1}` cycle-space elements), each as a
/// sorted link list. Intended for small graphs.
pub fn even_subgraphs(graph: &IsingGraph) -> Result<Vec<Vec<usize>>, GraphError> {
    let basis = graph.cycle_masks()?;
    let mut out = Vec::with_capacity(1 << basis.len());
    for combo in 0u64..(1u64 << basis.len()) {
        let mask = basis
            .iter()
            .enumerate()
            .filter(|(k, _)| combo >> k & 1 == 1)
            .fold(0u128, |m, (_, b)| m ^ b);
        out.push(mask_to_links(mask));
    }
    out.sort();
    Ok(out)
}

pub(crate) fn mask_to_links(mut mask: u128) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        v.push(i);
        mask &= mask - 1;
    }
    v
}

/// `true` when every node has even degree in the link subset.
pub fn is_even_subgraph(graph: &IsingGraph, links: &[usize]) -> bool {
    let mut deg = vec![0usize; graph.node_count()];
    for &i in links {
        let l = graph.links()[i];
        deg[l.a] += 1;
        deg[l.b] += 1;
    }
    deg.iter().all(|d| d % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> IsingGraph {
        IsingGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    fn cube() -> IsingGraph {
        // Bit-labelled cube: nodes 0..8, links between labels differing in one bit.
        let mut links = Vec::new();
        for n in 0..8usize {
            for bit in 0..3 {
                let m = n ^ (1 << bit);
                if n < m {
                    links.push((n, m));
                }
            }
        }
        IsingGraph::new(8, links).unwrap()
    }

    #[test]
    fn theta_graph_cycle_space() {
        let g = theta();
        let basis = cycle_space_basis(&g).unwrap();
        assert_eq!(basis.len(), 2);
        let evens = even_subgraphs(&g).unwrap();
        let expected = vec![vec![], vec![0, 1], vec![0, 2], vec![1, 2]];
        assert_eq!(evens, expected);
    }

    #[test]
    fn cube_graph_cycle_space_dimension() {
        let g = cube();
        assert_eq!(g.cycle_space_dimension(), 5);
        assert_eq!(cycle_space_basis(&g).unwrap().len(), 5);
        let evens = even_subgraphs(&g).unwrap();
        assert_eq!(evens.len(), 32);
        assert!(evens.iter().all(|s| is_even_subgraph(&g, s)));
    }

    #[test]
    fn handshake() {
        let g = cube();
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.link_count());
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        assert_eq!(
            IsingGraph::new(3, vec![(0, 1)]).unwrap_err(),
            GraphError::Disconnected
        );
    }

    #[test]
    fn out_of_range_node_is_rejected() {
        assert!(matches!(
            IsingGraph::new(2, vec![(0, 2)]),
            Err(GraphError::NodeOutOfRange { node: 2, .. })
        ));
    }

    #[test]
    fn self_loop_is_its_own_cycle() {
        let g = IsingGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(cycle_space_basis(&g).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn text_export_round_trip() {
        let g = cube();
        let back = IsingGraph::from_text(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert!(IsingGraph::from_text("nodes 2\nlink 1 0 1\n").is_err());
    }
}
