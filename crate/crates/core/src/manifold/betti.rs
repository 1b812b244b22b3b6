//! Betti numbers of `M` as a sum over colour subsets:
//! `b_k(M) = Σ_ω b̃_{k-1}(K_ω)`, with `K_∅` contributing 1 to `b_0`.

use serde::{Deserialize, Serialize};

use super::Colouring;
use crate::complex::homology::{reduced_betti_verified, Workspace};
use crate::complex::{canonical_form_coloured, BettiVector, ChainComplex};
use crate::error::Result;
use crate::gosset::GossetPolytope;
use crate::par::Execution;
use crate::vset::{VertexSet, MAX_VERTICES};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumStrategy {
    /// Every `ω ∈ Z₂^c`.
    #[default]
    Full,
    /// One `ω` per orbit of the colour permutations induced by
    /// colour-preserving automorphisms of the nerve, weighted by orbit size.
    ColourSymmetry,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BettiOptions {
    pub strategy: SumStrategy,
    pub execution: Execution,
}

/// Colour permutations induced by automorphisms of the Gosset graph that
/// map colour classes onto colour classes.
#[derive(Clone, Debug)]
pub struct ColourSymmetry {
    /// Permutations of `0..c` (colour `k + 1` ↦ colour `g[k] + 1`).
    pub generators: Vec<Vec<usize>>,
    /// Order of the colour-preserving automorphism group of the graph.
    pub automorphisms: u128,
}

/// Automorphisms of the graph with one extra vertex per colour, joined to
/// the facets of that colour, restricted to the colour vertices.
pub fn colour_symmetry(q: &GossetPolytope, col: &Colouring) -> ColourSymmetry {
    let nv = q.vertex_count();
    let c = col.colour_count();
    assert!(nv + c <= MAX_VERTICES, "augmented graph too large");
    let mut adj: Vec<VertexSet> = q.adjacency().to_vec();
    adj.extend(std::iter::repeat(VertexSet::EMPTY).take(c));
    for v in 0..nv {
        let k = nv + col.colour(v) as usize - 1;
        adj[v].insert(k);
        adj[k].insert(v);
    }
    let colours: Vec<u32> = (0..nv + c).map(|v| u32::from(v >= nv)).collect();
    let canon = canonical_form_coloured(&adj, &colours);
    let mut generators: Vec<Vec<usize>> = canon
        .generators
        .iter()
        .map(|g| (0..c).map(|k| g[nv + k] - nv).collect::<Vec<_>>())
        .filter(|g| g.iter().enumerate().any(|(i, &j)| i != j))
        .collect();
    generators.sort();
    generators.dedup();
    ColourSymmetry {
        generators,
        automorphisms: canon.group_order(),
    }
}

fn permute_mask(mask: u32, g: &[usize]) -> u32 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let k = m.trailing_zeros() as usize;
        out |= 1 << g[k];
        m &= m - 1;
    }
    out
}

/// Orbits of `Z₂^c` (as bitmasks) under colour permutations: the least mask
/// of each orbit with the orbit size, in increasing mask order.
pub fn subset_orbits(c: usize, generators: &[Vec<usize>]) -> Vec<(u32, u64)> {
    let total = 1usize << c;
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start as u32);
        let mut size = 0u64;
        while let Some(m) = stack.pop() {
            size += 1;
            for g in generators {
                let img = permute_mask(m, g) as usize;
                if !seen[img] {
                    seen[img] = true;
                    stack.push(img as u32);
                }
            }
        }
        out.push((start as u32, size));
    }
    out
}

/// Rational Betti numbers `b_0..b_n` of `Mⁿ`.
pub fn betti_of_manifold(
    q: &GossetPolytope,
    col: &Colouring,
    opts: &BettiOptions,
) -> Result<BettiVector> {
    col.validate(q)?;
    let nerve = q.nerve();
    let table = nerve.whole().cliques_by_dimension(q.n - 1)?;
    let cc = ChainComplex::from_cliques(&table);
    let masks: Vec<Vec<u32>> = (0..cc.counts().len())
        .map(|d| {
            table
                .iter_dim(d)
                .map(|s| col.mask_of(s.vertices()))
                .collect()
        })
        .collect();

    let c = col.colour_count();
    let work: Vec<(u32, u64)> = match opts.strategy {
        SumStrategy::Full => (1u32..1 << c).map(|m| (m, 1)).collect(),
        SumStrategy::ColourSymmetry => {
            let sym = colour_symmetry(q, col);
            subset_orbits(c, &sym.generators)
                .into_iter()
                .filter(|&(m, _)| m != 0)
                .collect()
        }
    };

    let per_subset = opts.execution.map_init(
        &work,
        || Workspace::new(&cc),
        |ws, &(omega, weight)| {
            let sel: Vec<Vec<u32>> = masks
                .iter()
                .map(|md| {
                    md.iter()
                        .enumerate()
                        .filter(|&(_, &m)| m & !omega == 0)
                        .map(|(i, _)| i as u32)
                        .collect()
                })
                .collect();
            (reduced_betti_verified(&cc, Some(&sel), ws), weight)
        },
    );

    let mut values = vec![0u64; q.n + 1];
    values[0] = 1;
    for (b, weight) in per_subset {
        for (j, x) in b.into_iter().enumerate() {
            values[j + 1] += x * weight;
        }
    }
    Ok(BettiVector {
        reduced: false,
        minus_one: 0,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gosset::build;
    use crate::manifold::builtin_colouring;

    #[test]
    fn orbits_partition_the_cube() {
        let cyc = vec![vec![1, 2, 0]];
        let orbits = subset_orbits(3, &cyc);
        assert_eq!(orbits, vec![(0, 1), (1, 3), (3, 3), (7, 1)]);
        assert_eq!(subset_orbits(4, &[]).len(), 16);
    }

    #[test]
    fn prism_manifold() {
        let q = build(3).unwrap();
        let col = builtin_colouring(&q).unwrap();
        let b = betti_of_manifold(&q, &col, &BettiOptions::default()).unwrap();
        assert_eq!(b.values, vec![1, 3, 2, 0]);
    }

    #[test]
    fn symmetry_matches_full_sum() {
        for n in [3, 4, 5, 6] {
            let q = build(n).unwrap();
            let col = builtin_colouring(&q).unwrap();
            let full = betti_of_manifold(&q, &col, &BettiOptions::default()).unwrap();
            let opts = BettiOptions {
                strategy: SumStrategy::ColourSymmetry,
                execution: Execution::Sequential,
            };
            let reduced = betti_of_manifold(&q, &col, &opts).unwrap();
            assert_eq!(full, reduced, "n={n}");
        }
    }
}
