//! The dual Gosset polytopes `Q` of the right-angled polytopes `P³ … P⁸`.
//!
//! Vertices of `Q` are the facets of `Pⁿ`, simplex facets of `Q` are the
//! real vertices of `Pⁿ` and orthoplex facets the ideal ones. Everything is
//! exact: adjacency is decided by integer (or dyadic) scalar products.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::complex::FlagComplex;
use crate::error::{Error, Result};
use crate::octonion::{gosset240_vertices, Octonion};
use crate::vset::VertexSet;

pub const SCHEMA_VERSION: u32 = 1;
pub const CONSTRUCTION_VERSION: u32 = 1;

/// Published counts per dimension: facets, ideal vertices, finite vertices
/// of `Pⁿ`, and the vertex degree of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub n: usize,
    pub facets: usize,
    pub ideal: usize,
    pub finite: usize,
    pub degree: usize,
}

pub const EXPECTED: [Expected; 6] = [
    Expected {
        n: 3,
        facets: 6,
        ideal: 3,
        finite: 2,
        degree: 3,
    },
    Expected {
        n: 4,
        facets: 10,
        ideal: 5,
        finite: 5,
        degree: 6,
    },
    Expected {
        n: 5,
        facets: 16,
        ideal: 10,
        finite: 16,
        degree: 10,
    },
    Expected {
        n: 6,
        facets: 27,
        ideal: 27,
        finite: 72,
        degree: 16,
    },
    Expected {
        n: 7,
        facets: 56,
        ideal: 126,
        finite: 576,
        degree: 27,
    },
    Expected {
        n: 8,
        facets: 240,
        ideal: 2160,
        finite: 17280,
        degree: 56,
    },
];

pub fn expected(n: usize) -> Result<Expected> {
    EXPECTED
        .iter()
        .copied()
        .find(|e| e.n == n)
        .ok_or(Error::DimensionOutOfRange(n))
}

/// Schläfli-style name of the Gosset polytope dual to `Pⁿ`.
pub fn gosset_name(n: usize) -> &'static str {
    match n {
        3 => "-1_21 (triangular prism)",
        4 => "0_21 (rectified 4-simplex)",
        5 => "1_21 (5-demicube)",
        6 => "2_21",
        7 => "3_21",
        8 => "4_21",
        _ => "?",
    }
}

#[derive(Clone, Debug)]
pub struct GossetPolytope {
    pub n: usize,
    /// Vertex coordinates, to be divided by `denominator`.
    pub coordinates: Vec<Vec<i64>>,
    pub denominator: i64,
    adjacency: Vec<VertexSet>,
    /// Real vertices of `Pⁿ`: the `n`-cliques, sorted.
    pub simplex_facets: Vec<Vec<usize>>,
    /// Ideal vertices of `Pⁿ`: each as its `n-1` opposite pairs, sorted.
    pub orthoplex_facets: Vec<Vec<(usize, usize)>>,
    /// Simplex counts of the nerve by dimension (`0..n`).
    pub nerve_counts: Vec<u64>,
    /// For `n = 7`, the index of each vertex among the 240 of `4_21`.
    pub embedding: Option<Vec<usize>>,
}

impl GossetPolytope {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adjacency
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adjacency.iter().enumerate() {
            out.extend(a.above(u).iter().map(|v| (u, v)));
        }
        out
    }

    /// The nerve `\dot Q`: the flag complex on the 1-skeleton.
    pub fn nerve(&self) -> FlagComplex {
        FlagComplex::from_adjacency(self.adjacency.clone()).expect("validated at build")
    }

    /// `f_0 … f_n` of `Pⁿ`: `f_i` counts the `(n-1-i)`-simplices of the
    /// nerve, `f_n = 1`.
    pub fn face_vector(&self) -> Vec<u64> {
        let mut f: Vec<u64> = (0..self.n)
            .map(|i| self.nerve_counts.get(self.n - 1 - i).copied().unwrap_or(0))
            .collect();
        f.push(1);
        f
    }

    /// `χ(P) = Σ (-1)^i f_i / 2^{n-i}`.
    pub fn euler_characteristic(&self) -> Rational64 {
        self.face_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                Rational64::new(sign * f as i64, 1i64 << (self.n - i))
            })
            .sum()
    }

    /// Check every structural invariant and the published counts.
    pub fn validate(&self) -> Result<()> {
        let e = expected(self.n)?;
        let fail = |m: String| Err(Error::Validation(m));
        if self.vertex_count() != e.facets {
            return fail(format!(
                "{} vertices, expected {}",
                self.vertex_count(),
                e.facets
            ));
        }
        if self.degree() != Some(e.degree) {
            return fail(format!("not regular of degree {}", e.degree));
        }
        for (u, a) in self.adjacency.iter().enumerate() {
            if a.contains(u) || a.iter().any(|v| !self.adjacency[v].contains(u)) {
                return fail(format!("adjacency not symmetric/irreflexive at {u}"));
            }
        }
        if self.simplex_facets.len() != e.finite {
            return fail(format!(
                "{} simplex facets, expected {}",
                self.simplex_facets.len(),
                e.finite
            ));
        }
        if self.orthoplex_facets.len() != e.ideal {
            return fail(format!(
                "{} orthoplex facets, expected {}",
                self.orthoplex_facets.len(),
                e.ideal
            ));
        }
        if self.nerve_counts.len() != self.n {
            return fail("nerve has a clique larger than a simplex facet".into());
        }
        for s in &self.simplex_facets {
            if s.len() != self.n || !is_clique(&self.adjacency, s) {
                return fail(format!("simplex facet {s:?} is not an {}-clique", self.n));
            }
        }
        for f in &self.orthoplex_facets {
            let verts: Vec<usize> = f.iter().flat_map(|&(a, b)| [a, b]).collect();
            let pairs = orthoplex_pairs(&self.adjacency, &verts, self.n)?;
            if &pairs != f {
                return fail(format!("orthoplex facet {f:?} has inconsistent pairing"));
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> PolytopeDocument {
        PolytopeDocument {
            schema_version: SCHEMA_VERSION,
            construction_version: CONSTRUCTION_VERSION,
            n: self.n,
            coordinates: self.coordinates.clone(),
            denominator: self.denominator,
            edges: self.edges(),
            simplex_facets: self.simplex_facets.clone(),
            orthoplex_facets: self.orthoplex_facets.clone(),
            nerve_counts: self.nerve_counts.clone(),
            embedding: self.embedding.clone(),
        }
    }

    /// Rebuild from a document, revalidating every count.
    pub fn from_document(doc: PolytopeDocument) -> Result<Self> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: doc.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        if doc.construction_version != CONSTRUCTION_VERSION {
            return Err(Error::SchemaVersion {
                found: doc.construction_version,
                expected: CONSTRUCTION_VERSION,
            });
        }
        let nv = doc.coordinates.len();
        let mut adjacency = vec![VertexSet::EMPTY; nv];
        for &(u, v) in &doc.edges {
            if u >= nv || v >= nv || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        let p = GossetPolytope {
            n: doc.n,
            coordinates: doc.coordinates,
            denominator: doc.denominator,
            adjacency,
            simplex_facets: doc.simplex_facets,
            orthoplex_facets: doc.orthoplex_facets,
            nerve_counts: doc.nerve_counts,
            embedding: doc.embedding,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(s)?)
    }
}

/// Serialised form of a [`GossetPolytope`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub schema_version: u32,
    pub construction_version: u32,
    pub n: usize,
    pub coordinates: Vec<Vec<i64>>,
    pub denominator: i64,
    pub edges: Vec<(usize, usize)>,
    pub simplex_facets: Vec<Vec<usize>>,
    pub orthoplex_facets: Vec<Vec<(usize, usize)>>,
    pub nerve_counts: Vec<u64>,
    #[serde(default)]
    pub embedding: Option<Vec<usize>>,
}

fn is_clique(adj: &[VertexSet], vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| adj[u].contains(v)))
}

/// The opposite pairs of a `K_{(n-1)×2}` vertex set, or an error if the set
/// does not induce one.
fn orthoplex_pairs(adj: &[VertexSet], verts: &[usize], n: usize) -> Result<Vec<(usize, usize)>> {
    let set = VertexSet::from_iter(verts.iter().copied());
    if set.len() != 2 * (n - 1) || verts.len() != set.len() {
        return Err(Error::Validation(format!(
            "orthoplex candidate has {} vertices, expected {}",
            verts.len(),
            2 * (n - 1)
        )));
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for u in set.iter() {
        let non = set.and_not(&adj[u]);
        // `non` holds u itself and its unique opposite
        if non.len() != 2 {
            return Err(Error::Validation(format!(
                "vertex {u} has {} non-neighbours in orthoplex candidate {verts:?}",
                non.len() - 1
            )));
        }
        let w = non.iter().find(|&w| w != u).unwrap();
        if u < w {
            pairs.push((u, w));
        }
    }
    Ok(pairs)
}

fn adjacency_from<F: Fn(usize, usize) -> bool>(nv: usize, adjacent: F) -> Vec<VertexSet> {
    let mut adj = vec![VertexSet::EMPTY; nv];
    for u in 0..nv {
        for v in u + 1..nv {
            if adjacent(u, v) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }
    adj
}

fn hamming(a: &[i64], b: &[i64]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn lorentzian(a: &[i64], b: &[i64]) -> i64 {
    let k = a.len() - 1;
    a[..k].iter().zip(&b[..k]).map(|(x, y)| x * y).sum::<i64>() - a[k] * b[k]
}

/// Vertex coordinates of the `n = 6` polytope `2_21`.
pub fn vertices_221() -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(27);
    for i in 0..6 {
        let mut v = vec![0; 7];
        v[i] = -1;
        out.push(v);
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let mut v = vec![0; 7];
            v[i] = 1;
            v[j] = 1;
            v[6] = 1;
            out.push(v);
        }
    }
    for i in 0..6 {
        let mut v = vec![1; 7];
        v[i] = 0;
        v[6] = 2;
        out.push(v);
    }
    out
}

fn octonion_coordinates(vs: &[Octonion]) -> Vec<Vec<i64>> {
    vs.iter()
        .map(|o| o.doubled().expect("vertices lie in ½Z⁸").to_vec())
        .collect()
}

/// Twice the scalar product of two vertices of `4_21`.
fn doubled_dot(a: &Octonion, b: &Octonion) -> i64 {
    let d = a.dot(b) * 2;
    assert!(d.is_integer());
    d.to_integer()
}

/// Build the dual Gosset polytope of `Pⁿ` and validate it.
pub fn build(n: usize) -> Result<GossetPolytope> {
    expected(n)?;
    let (coordinates, denominator, adjacency, ideal, embedding) = match n {
        3 => {
            // a_i = (e_i, 0), b_i = (e_i, 1)
            let coords: Vec<Vec<i64>> = (0..6)
                .map(|k| {
                    let mut v = vec![0; 4];
                    v[k % 3] = 1;
                    v[3] = (k / 3) as i64;
                    v
                })
                .collect();
            let adj = adjacency_from(6, |u, v| u / 3 == v / 3 || u % 3 == v % 3);
            let squares: Vec<Vec<usize>> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| vec![i, j, i + 3, j + 3])
                .collect();
            (coords, 1, adj, squares, None)
        }
        4 => {
            let mut coords = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    let mut v = vec![0; 5];
                    v[i] = 1;
                    v[j] = 1;
                    coords.push(v);
                }
            }
            let adj = adjacency_from(10, |u, v| hamming(&coords[u], &coords[v]) == 2);
            let ideal = (0..5)
                .map(|i| (0..10).filter(|&v| coords[v][i] == 0).collect())
                .collect();
            (coords, 1, adj, ideal, None)
        }
        5 => {
            let coords: Vec<Vec<i64>> = (0u32..32)
                .filter(|m| m.count_ones() % 2 == 1)
                .map(|m| {
                    (0..5)
                        .map(|b| if m >> b & 1 == 1 { -1 } else { 1 })
                        .collect()
                })
                .collect();
            let adj = adjacency_from(16, |u, v| hamming(&coords[u], &coords[v]) == 2);
            let mut ideal = Vec::new();
            for i in 0..5 {
                for s in [1, -1] {
                    ideal.push((0..16).filter(|&v| coords[v][i] == s).collect());
                }
            }
            (coords, 1, adj, ideal, None)
        }
        6 => {
            let coords = vertices_221();
            let adj = adjacency_from(27, |u, v| lorentzian(&coords[u], &coords[v]) == 0);
            let ideal = (0..27)
                .map(|v| {
                    let non = VertexSet::full(27).and_not(&adj[v]);
                    non.iter().filter(|&w| w != v).collect()
                })
                .collect();
            (coords, 1, adj, ideal, None)
        }
        7 | 8 => {
            let all = gosset240_vertices();
            let (verts, embedding): (Vec<Octonion>, Option<Vec<usize>>) = if n == 8 {
                (all.clone(), None)
            } else {
                let idx: Vec<usize> = (0..all.len())
                    .filter(|&i| doubled_dot(&all[i], &Octonion::ONE) == 1)
                    .collect();
                (idx.iter().map(|&i| all[i]).collect(), Some(idx))
            };
            let nv = verts.len();
            let dots: Vec<Vec<i64>> = verts
                .iter()
                .map(|a| verts.iter().map(|b| doubled_dot(a, b)).collect())
                .collect();
            let adj = adjacency_from(nv, |u, v| dots[u][v] == 1);
            let ideal = seeded_orthoplexes(&adj, &dots, n)?;
            (octonion_coordinates(&verts), 2, adj, ideal, embedding)
        }
        _ => unreachable!(),
    };

    let mut orthoplex_facets = ideal
        .iter()
        .map(|f| orthoplex_pairs(&adjacency, f, n))
        .collect::<Result<Vec<_>>>()?;
    orthoplex_facets.sort();

    let complex = FlagComplex::from_adjacency(adjacency.clone())?;
    let cliques = complex.whole().cliques_by_dimension(n)?;
    let nerve_counts = cliques.counts();
    let simplex_facets = cliques
        .iter_dim(n - 1)
        .map(|s| s.vertices().collect())
        .collect();

    let p = GossetPolytope {
        n,
        coordinates,
        denominator,
        adjacency,
        simplex_facets,
        orthoplex_facets,
        nerve_counts,
        embedding,
    };
    p.validate()?;
    Ok(p)
}

/// Orthoplex facets through zero-product pairs: the facet through `(u, w)`
/// is `{u, w} ∪ (N(u) ∩ N(w))`. Every zero-product pair must end up in
/// exactly one facet.
fn seeded_orthoplexes(adj: &[VertexSet], dots: &[Vec<i64>], n: usize) -> Result<Vec<Vec<usize>>> {
    let nv = adj.len();
    let mut covered = vec![VertexSet::EMPTY; nv];
    let mut zero_pairs = 0usize;
    let mut facets = Vec::new();
    for u in 0..nv {
        for w in u + 1..nv {
            if dots[u][w] != 0 {
                continue;
            }
            zero_pairs += 1;
            if covered[u].contains(w) {
                continue;
            }
            let mut set = adj[u].and(&adj[w]);
            set.insert(u);
            set.insert(w);
            let verts: Vec<usize> = set.iter().collect();
            let pairs = orthoplex_pairs(adj, &verts, n)?;
            for &(a, b) in &pairs {
                if dots[a][b] != 0 {
                    return Err(Error::Validation(format!(
                        "opposite pair ({a}, {b}) has non-zero scalar product"
                    )));
                }
                if covered[a].contains(b) {
                    return Err(Error::Validation(format!(
                        "pair ({a}, {b}) lies in two orthoplex facets"
                    )));
                }
                covered[a].insert(b);
                covered[b].insert(a);
            }
            facets.push(verts);
        }
    }
    if facets.len() * (n - 1) != zero_pairs {
        return Err(Error::Validation(format!(
            "{zero_pairs} zero-product pairs do not split evenly into {} facets",
            facets.len()
        )));
    }
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polytopes_match_published_counts() {
        for n in 3..=7 {
            let p = build(n).unwrap();
            let e = expected(n).unwrap();
            assert_eq!(
                (
                    p.vertex_count(),
                    p.orthoplex_facets.len(),
                    p.simplex_facets.len()
                ),
                (e.facets, e.ideal, e.finite)
            );
        }
    }

    #[test]
    fn face_vectors_and_euler() {
        let p4 = build(4).unwrap();
        assert_eq!(p4.nerve_counts, vec![10, 30, 30, 5]);
        assert_eq!(p4.face_vector()[0], 5);
        assert_eq!(p4.euler_characteristic(), Rational64::new(1, 16));
        let p3 = build(3).unwrap();
        assert_eq!(p3.face_vector()[0], 2);
        assert_eq!(p3.face_vector()[2], 6);
        assert_eq!(p3.euler_characteristic(), Rational64::from_integer(0));
        assert_eq!(
            build(6).unwrap().euler_characteristic(),
            Rational64::new(-1, 8)
        );
    }

    #[test]
    fn non_neighbours_of_221() {
        let p = build(6).unwrap();
        for v in 0..27 {
            assert_eq!(27 - 1 - p.adjacency()[v].len(), 10);
        }
    }

    #[test]
    fn vertex_figure_incidences() {
        let p7 = build(7).unwrap();
        assert_eq!(17280 * 8 / 240, p7.simplex_facets.len());
        assert_eq!(2160 * 14 / 240, p7.orthoplex_facets.len());
    }

    #[test]
    fn json_round_trip_revalidates() {
        let p = build(5).unwrap();
        let s = p.to_json().unwrap();
        let q = GossetPolytope::from_json(&s).unwrap();
        assert_eq!(q.edges(), p.edges());
        let mut doc = p.to_document();
        doc.simplex_facets.pop();
        assert!(GossetPolytope::from_document(doc).is_err());
        let mut doc = p.to_document();
        doc.schema_version = 99;
        assert!(matches!(
            GossetPolytope::from_document(doc),
            Err(Error::SchemaVersion { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(build(9), Err(Error::DimensionOutOfRange(9))));
        assert!(build(2).is_err());
    }
}
