//! Maximum number of pairwise disjoint facets of `Pⁿ`, i.e. the independence
//! number of the Gosset 1-skeleton.
//!
//! Exact branch and bound (maximum clique in the complement with greedy
//! colouring bounds). Two accelerations, both exact:
//! - on a vertex-transitive graph some maximum independent set contains
//!   vertex 0;
//! - when the vertices are vectors whose doubled Gram entries lie in
//!   `{2, 1, 0, -1, -2}` with adjacency exactly at `1`, the matrix `A + 4I`
//!   is the Hadamard polynomial `G∘(G+J)∘(G+2J)/6` of a Gram matrix, hence
//!   positive semidefinite (Schur). For a `k`-regular graph on `N` vertices
//!   the ratio bound then gives `α ≤ 4N/(k+4)`, and the search stops as
//!   soon as it is met.

use serde::{Deserialize, Serialize};

use crate::complex::canonical_form_coloured;
use crate::gosset::GossetPolytope;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpperBound {
    /// The search space was exhausted.
    Exhaustive,
    /// The ratio bound `4N/(k+4)` was attained.
    Ratio { vertices: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Independence {
    pub size: usize,
    pub witness: Vec<usize>,
    pub upper_bound: UpperBound,
    pub vertex_transitive: bool,
}

fn is_vertex_transitive(adj: &[VertexSet]) -> bool {
    let n = adj.len();
    let canon = canonical_form_coloured(adj, &vec![0; n]);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in &canon.generators {
        for (v, &w) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// `⌊4N/(k+4)⌋` when the Gram hypotheses of the module docs hold.
fn ratio_bound(q: &GossetPolytope) -> Option<(usize, usize)> {
    let k = q.degree()?;
    let x = &q.coordinates;
    let nv = x.len();
    // doubled Gram entry: 2⟨x_i, x_j⟩ / |x_i|²
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(p, r)| p * r).sum::<i64>();
    let norm = dot(&x[0], &x[0]);
    if x.iter().any(|v| dot(v, v) != norm) {
        return None;
    }
    for i in 0..nv {
        for j in i + 1..nv {
            let twice = 2 * dot(&x[i], &x[j]);
            if twice % norm != 0 {
                return None;
            }
            let g = twice / norm;
            if !(-2..=2).contains(&g) || (g == 1) != q.is_adjacent(i, j) {
                return None;
            }
        }
    }
    Some((4 * nv / (k + 4), k))
}

struct Search<'a> {
    comp: &'a [VertexSet],
    best: Vec<usize>,
    target: usize,
}

impl Search<'_> {
    /// Greedy colouring of the candidate set in `comp`; vertices in colour
    /// order with the running colour count.
    fn colour_sort(&self, cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.len());
        let mut bound = Vec::with_capacity(cand.len());
        let mut left = *cand;
        let mut k = 0;
        while !left.is_empty() {
            k += 1;
            let mut q = left;
            while let Some(v) = q.first() {
                order.push(v);
                bound.push(k);
                left.remove(v);
                q = q.and_not(&self.comp[v]);
                q.remove(v);
            }
        }
        (order, bound)
    }

    /// Returns `true` once the target is reached.
    fn expand(&mut self, mut cand: VertexSet, current: &mut Vec<usize>) -> bool {
        let (order, bound) = self.colour_sort(&cand);
        for i in (0..order.len()).rev() {
            if current.len() + bound[i] <= self.best.len() {
                return false;
            }
            let v = order[i];
            current.push(v);
            let next = cand.and(&self.comp[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                    if self.best.len() >= self.target {
                        return true;
                    }
                }
            } else if self.expand(next, current) {
                return true;
            }
            current.pop();
            cand.remove(v);
        }
        false
    }
}

pub fn max_disjoint_facets(q: &GossetPolytope) -> Independence {
    let adj = q.adjacency();
    let nv = adj.len();
    let all = VertexSet::full(nv);
    let comp: Vec<VertexSet> = (0..nv)
        .map(|v| {
            let mut s = all.and_not(&adj[v]);
            s.remove(v);
            s
        })
        .collect();

    let ratio = ratio_bound(q);
    let transitive = is_vertex_transitive(adj);

    // greedy incumbent in index order
    let mut greedy = Vec::new();
    let mut free = all;
    while let Some(v) = free.first() {
        greedy.push(v);
        free = free.and(&comp[v]);
    }

    let target = ratio.map_or(usize::MAX, |r| r.0);
    let mut search = Search {
        comp: &comp,
        best: greedy,
        target,
    };
    if search.best.len() < target {
        let mut current = Vec::new();
        let cand = if transitive {
            current.push(0);
            comp[0]
        } else {
            all
        };
        if search.best.len() < current.len() + cand.len() {
            search.expand(cand, &mut current);
        }
    }
    let mut witness = search.best;
    witness.sort_unstable();
    let upper_bound = match ratio {
        Some((b, k)) if witness.len() == b => UpperBound::Ratio {
            vertices: nv,
            degree: k,
        },
        _ => UpperBound::Exhaustive,
    };
    Independence {
        size: witness.len(),
        witness,
        upper_bound,
        vertex_transitive: transitive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gosset::build;

    fn brute_force(q: &GossetPolytope) -> usize {
        let nv = q.vertex_count();
        (0u32..1 << nv)
            .filter(|&m| {
                (0..nv).all(|u| {
                    m >> u & 1 == 0 || (u + 1..nv).all(|w| m >> w & 1 == 0 || !q.is_adjacent(u, w))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn small_cases_match_brute_force() {
        for n in [3, 4, 5] {
            let q = build(n).unwrap();
            let ind = max_disjoint_facets(&q);
            assert_eq!(ind.size, brute_force(&q), "n={n}");
            assert_eq!(ind.size, 2);
        }
    }

    #[test]
    fn witnesses_are_independent() {
        for n in [6, 7] {
            let q = build(n).unwrap();
            let ind = max_disjoint_facets(&q);
            for (i, &u) in ind.witness.iter().enumerate() {
                for &w in &ind.witness[i + 1..] {
                    assert!(!q.is_adjacent(u, w));
                }
            }
            assert!(ind.vertex_transitive);
        }
    }
}
