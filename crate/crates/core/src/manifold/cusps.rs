//! Cusps of `M`: above an ideal vertex whose cube link carries `c′` colours
//! sit `2^{c−c′}` toric cusps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Colouring;
use crate::gosset::GossetPolytope;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealVertexCusps {
    /// Index into [`GossetPolytope::orthoplex_facets`].
    pub ideal_vertex: usize,
    /// Colours of each opposite facet pair of the cube link.
    pub pair_colours: Vec<(u32, u32)>,
    pub c_prime: usize,
    pub cusps: u64,
    /// Circle-length multiplier per pair: 2 if both facets share a colour, else 4.
    pub multipliers: Vec<u8>,
}

/// Ideal vertices grouped by `c′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspType {
    pub c_prime: usize,
    pub ideal_vertices: usize,
    pub cusps_each: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspCensus {
    pub vertices: Vec<IdealVertexCusps>,
    pub total: u64,
}

impl CuspCensus {
    pub fn types(&self) -> Vec<CuspType> {
        let mut by: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
        for v in &self.vertices {
            let e = by.entry(v.c_prime).or_insert((0, v.cusps));
            e.0 += 1;
        }
        by.into_iter()
            .map(|(c_prime, (ideal_vertices, cusps_each))| CuspType {
                c_prime,
                ideal_vertices,
                cusps_each,
            })
            .collect()
    }
}

pub fn cusp_census(q: &GossetPolytope, col: &Colouring) -> CuspCensus {
    let c = col.colour_count();
    let vertices: Vec<IdealVertexCusps> = q
        .orthoplex_facets
        .iter()
        .enumerate()
        .map(|(i, pairs)| {
            let pair_colours: Vec<(u32, u32)> = pairs
                .iter()
                .map(|&(u, w)| (col.colour(u), col.colour(w)))
                .collect();
            let mask = col.mask_of(pairs.iter().flat_map(|&(u, w)| [u, w]));
            let c_prime = mask.count_ones() as usize;
            IdealVertexCusps {
                ideal_vertex: i,
                multipliers: pair_colours
                    .iter()
                    .map(|(a, b)| if a == b { 2 } else { 4 })
                    .collect(),
                pair_colours,
                c_prime,
                cusps: 1 << (c - c_prime),
            }
        })
        .collect();
    let total = vertices.iter().map(|v| v.cusps).sum();
    CuspCensus { vertices, total }
}
