//! Flag complexes, their full subcomplexes, and the invariants computed on
//! them: clique counts, rational homology, connectivity, simple
//! connectivity and canonical forms.

pub mod canon;
pub mod homology;
pub mod pi1;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

pub use canon::{canonical_form, canonical_form_coloured, Canon, Certificate};
pub use homology::{betti_numbers, BettiVector, ChainComplex};
pub use pi1::{pi1_trivial, Pi1Verdict, DEFAULT_PI1_BUDGET};

/// Largest clique (simplex vertex count) a [`Simplex`] can hold.
pub const MAX_SIMPLEX_VERTICES: usize = 15;

/// A simplex as its sorted vertex list. Within one dimension the derived
/// ordering is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    verts: [u8; MAX_SIMPLEX_VERTICES],
    len: u8,
}

impl Simplex {
    pub fn from_sorted(vs: &[usize]) -> Self {
        debug_assert!(vs.windows(2).all(|w| w[0] < w[1]));
        let mut verts = [0u8; MAX_SIMPLEX_VERTICES];
        for (i, &v) in vs.iter().enumerate() {
            verts[i] = v as u8;
        }
        Simplex {
            verts,
            len: vs.len() as u8,
        }
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.verts[..self.len as usize].iter().map(|&v| v as usize)
    }

    /// The face opposite the `i`-th vertex.
    pub fn face(&self, i: usize) -> Simplex {
        let mut verts = [0u8; MAX_SIMPLEX_VERTICES];
        let mut k = 0;
        for j in 0..self.len as usize {
            if j != i {
                verts[k] = self.verts[j];
                k += 1;
            }
        }
        Simplex {
            verts,
            len: self.len - 1,
        }
    }
}

impl std::fmt::Debug for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.vertices()).finish()
    }
}

/// The clique complex of a simple graph on at most 256 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagComplex {
    adj: Vec<VertexSet>,
}

impl FlagComplex {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::TooManyVertices(vertex_count));
        }
        let mut adj = vec![VertexSet::EMPTY; vertex_count];
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(FlagComplex { adj })
    }

    /// Build from symmetric adjacency rows.
    pub fn from_adjacency(adj: Vec<VertexSet>) -> Result<Self> {
        if adj.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(adj.len()));
        }
        for (u, row) in adj.iter().enumerate() {
            for v in row.iter() {
                if v >= adj.len() || v == u || !adj[v].contains(u) {
                    return Err(Error::InvalidEdge(u, v));
                }
            }
        }
        Ok(FlagComplex { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.adj.len())
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            for v in self.adj[u].above(u).iter() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn induced(&self, vertices: VertexSet) -> InducedSubcomplex<'_> {
        InducedSubcomplex {
            parent: self,
            vertices: vertices.and(&self.all_vertices()),
        }
    }

    pub fn whole(&self) -> InducedSubcomplex<'_> {
        self.induced(self.all_vertices())
    }

    /// All simplices of dimension at most `max_dim`, lexicographically
    /// ordered within each dimension.
    pub fn cliques_by_dimension(&self, max_dim: usize) -> Result<CliqueTable> {
        self.whole().cliques_by_dimension(max_dim)
    }
}

/// A full subcomplex: simplices are the cliques of the parent graph whose
/// vertices are all selected.
#[derive(Clone, Copy, Debug)]
pub struct InducedSubcomplex<'a> {
    parent: &'a FlagComplex,
    vertices: VertexSet,
}

impl<'a> InducedSubcomplex<'a> {
    pub fn parent(&self) -> &'a FlagComplex {
        self.parent
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> VertexSet {
        self.parent.adj[v].and(&self.vertices)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| self.neighbours(v).above(v).len())
            .sum()
    }

    pub fn cliques_by_dimension(&self, max_dim: usize) -> Result<CliqueTable> {
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];
        let mut stack = Vec::with_capacity(MAX_SIMPLEX_VERTICES);
        let mut overflow = false;
        for v in self.vertices.iter() {
            stack.push(v);
            self.extend_cliques(
                self.neighbours(v).above(v),
                &mut stack,
                max_dim,
                &mut by_dim,
                &mut overflow,
            );
            stack.pop();
        }
        if overflow {
            return Err(Error::CliqueTooLarge(MAX_SIMPLEX_VERTICES));
        }
        while by_dim.len() > 1 && by_dim.last().is_some_and(|l| l.is_empty()) {
            by_dim.pop();
        }
        if by_dim.len() == 1 && by_dim[0].is_empty() {
            by_dim.clear();
        }
        Ok(CliqueTable { by_dim })
    }

    fn extend_cliques(
        &self,
        cand: VertexSet,
        stack: &mut Vec<usize>,
        max_dim: usize,
        out: &mut [Vec<Simplex>],
        overflow: &mut bool,
    ) {
        let d = stack.len() - 1;
        if stack.len() > MAX_SIMPLEX_VERTICES {
            *overflow = true;
            return;
        }
        out[d].push(Simplex::from_sorted(stack));
        if d == max_dim {
            return;
        }
        for w in cand.iter() {
            stack.push(w);
            let next = cand.and(&self.parent.adj[w]).above(w);
            self.extend_cliques(next, stack, max_dim, out, overflow);
            stack.pop();
        }
    }

    /// Number of simplices per dimension, without materialising them.
    pub fn f_vector(&self) -> Vec<u64> {
        fn count(c: &InducedSubcomplex, cand: VertexSet, depth: usize, out: &mut Vec<u64>) {
            if out.len() <= depth {
                out.resize(depth + 1, 0);
            }
            out[depth] += 1;
            for w in cand.iter() {
                count(c, cand.and(&c.parent.adj[w]).above(w), depth + 1, out);
            }
        }
        let mut out = Vec::new();
        for v in self.vertices.iter() {
            count(self, self.neighbours(v).above(v), 0, &mut out);
        }
        out
    }

    /// Alternating simplex count.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Non-empty with a single connected component.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.first() else {
            return false;
        };
        let mut seen = VertexSet::EMPTY;
        seen.insert(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.or(&self.neighbours(v));
            }
            frontier = next.and_not(&seen);
            seen = seen.or(&frontier);
        }
        seen == self.vertices
    }

    /// Number of connected components, via union-find over induced edges.
    pub fn component_count(&self) -> usize {
        let n = self.parent.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = self.vertices.len();
        for u in self.vertices.iter() {
            for v in self.neighbours(u).above(u).iter() {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a] = b;
                    comps -= 1;
                }
            }
        }
        comps
    }

    /// The subgraph relabelled onto `0..k` in increasing vertex order.
    pub fn relabelled(&self) -> (FlagComplex, Vec<usize>) {
        let verts: Vec<usize> = self.vertices.iter().collect();
        let mut pos = vec![usize::MAX; self.parent.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| VertexSet::from_iter(self.neighbours(v).iter().map(|w| pos[w])))
            .collect();
        (FlagComplex { adj }, verts)
    }
}

/// Simplices grouped by dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueTable {
    by_dim: Vec<Vec<Simplex>>,
}

impl CliqueTable {
    /// Highest dimension present, `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn counts(&self) -> Vec<u64> {
        self.by_dim.iter().map(|l| l.len() as u64).collect()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, |l| l.len())
    }

    pub fn dim(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], |l| l.as_slice())
    }

    pub fn iter_dim(&self, dim: usize) -> impl Iterator<Item = &Simplex> {
        self.dim(dim).iter()
    }
}

/// Connected-component verdict used in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    Empty,
    Connected,
    Disconnected,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> FlagComplex {
        // K_{2,2,2}: vertices 2i and 2i+1 are opposite.
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        FlagComplex::new(6, &edges).unwrap()
    }

    #[test]
    fn octahedron_cliques() {
        let t = octahedron().cliques_by_dimension(3).unwrap();
        assert_eq!(t.counts(), vec![6, 12, 8]);
        assert_eq!(t.count(3), 0);
    }

    #[test]
    fn empty_graph_cliques() {
        let c = FlagComplex::new(3, &[]).unwrap();
        let t = c.cliques_by_dimension(1).unwrap();
        assert_eq!(t.count(0), 3);
        assert_eq!(t.count(1), 0);
    }

    #[test]
    fn clique_order_is_lexicographic_and_deterministic() {
        let c = FlagComplex::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let t = c.cliques_by_dimension(2).unwrap();
        let edges: Vec<Vec<usize>> = t.dim(1).iter().map(|s| s.vertices().collect()).collect();
        assert_eq!(edges, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3]]);
        assert!(t.dim(1).windows(2).all(|w| w[0] < w[1]));
        assert_eq!(t, c.cliques_by_dimension(2).unwrap());
    }

    #[test]
    fn f_vector_matches_enumeration() {
        let c = octahedron();
        assert_eq!(c.whole().f_vector(), vec![6, 12, 8]);
        assert_eq!(c.whole().euler_characteristic(), 2);
    }

    #[test]
    fn connectivity() {
        let c = FlagComplex::new(3, &[(0, 1)]).unwrap();
        assert!(!c.induced(VertexSet::EMPTY).is_connected());
        assert!(c.induced(VertexSet::from_iter([0, 1])).is_connected());
        assert!(!c.induced(VertexSet::from_iter([0, 2])).is_connected());
        assert_eq!(c.whole().component_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FlagComplex::new(300, &[]).is_err());
        assert!(FlagComplex::new(3, &[(0, 3)]).is_err());
        assert!(FlagComplex::new(3, &[(1, 1)]).is_err());
    }

    #[test]
    fn face_removal() {
        let s = Simplex::from_sorted(&[1, 4, 7]);
        assert_eq!(s.face(1).vertices().collect::<Vec<_>>(), vec![1, 7]);
        assert_eq!(s.dim(), 2);
    }
}
