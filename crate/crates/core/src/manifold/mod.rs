//! Colourings of `Pⁿ` and invariants of the manifolds `Mⁿ` they define.

mod betti;
mod cusps;
mod independence;
mod volume;

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gosset::{vertices_221, GossetPolytope};
use crate::octonion::{gosset240_vertices, hextets, quartets};

pub use betti::{
    betti_of_manifold, colour_symmetry, subset_orbits, BettiOptions, ColourSymmetry, SumStrategy,
};
pub use cusps::{cusp_census, CuspCensus, CuspType, IdealVertexCusps};
pub use independence::{max_disjoint_facets, Independence, UpperBound};
pub use volume::{catalan, dirichlet_beta4, volume, zeta3, Volume};

/// Invariants of `Mⁿ` as published, used to select reconstructed colourings
/// and as test oracles.
#[derive(Clone, Copy, Debug)]
pub struct Published {
    pub n: usize,
    pub euler: i64,
    /// `b_0, .., b_{n-1}`.
    pub betti: &'static [u64],
    pub cusps: u64,
    /// `(c′, number of ideal vertices)` where a breakdown is known.
    pub cusp_types: &'static [(usize, usize)],
}

pub const PUBLISHED: [Published; 6] = [
    Published {
        n: 3,
        euler: 0,
        betti: &[1, 3, 2],
        cusps: 3,
        cusp_types: &[(3, 3)],
    },
    Published {
        n: 4,
        euler: 2,
        betti: &[1, 5, 10, 4],
        cusps: 5,
        cusp_types: &[],
    },
    Published {
        n: 5,
        euler: 0,
        betti: &[1, 24, 120, 136, 39],
        cusps: 40,
        cusp_types: &[(4, 2), (8, 8)],
    },
    Published {
        n: 6,
        euler: -64,
        betti: &[1, 18, 183, 411, 207, 26],
        cusps: 27,
        cusp_types: &[(9, 27)],
    },
    Published {
        n: 7,
        euler: 0,
        betti: &[1, 182, 6321, 41300, 55139, 24010, 4031],
        cusps: 4032,
        cusp_types: &[(6, 14), (12, 112)],
    },
    Published {
        n: 8,
        euler: 278528,
        betti: &[1, 365, 33670, 583290, 1783226, 1346030, 456595, 65279],
        cusps: 65280,
        cusp_types: &[(7, 240), (14, 1920)],
    },
];

pub fn published(n: usize) -> Result<&'static Published> {
    PUBLISHED
        .iter()
        .find(|p| p.n == n)
        .ok_or(Error::DimensionOutOfRange(n))
}

/// A proper, surjective assignment of colours `1..=c` to the facets of `Pⁿ`
/// (the vertices of the Gosset polytope).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colouring {
    colours: Vec<u32>,
    c: usize,
}

impl Colouring {
    /// Checks surjectivity onto `1..=max`; properness needs a polytope, see
    /// [`validate`](Self::validate).
    pub fn new(colours: Vec<u32>) -> Result<Self> {
        let c = colours.iter().copied().max().unwrap_or(0) as usize;
        if colours.contains(&0) {
            return Err(Error::InvalidColouring("colours start at 1".into()));
        }
        if c > 31 {
            return Err(Error::InvalidColouring(format!("{c} colours (at most 31)")));
        }
        let mut used = vec![false; c + 1];
        for &k in &colours {
            used[k as usize] = true;
        }
        if let Some(k) = (1..=c).find(|&k| !used[k]) {
            return Err(Error::InvalidColouring(format!("colour {k} is unused")));
        }
        Ok(Colouring { colours, c })
    }

    /// Colour classes given as lists of facets; class `i` gets colour `i + 1`.
    pub fn from_classes(facets: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut colours = vec![0u32; facets];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= facets || colours[v] != 0 {
                    return Err(Error::InvalidColouring(format!(
                        "facet {v} missing or coloured twice"
                    )));
                }
                colours[v] = i as u32 + 1;
            }
        }
        if let Some(v) = colours.iter().position(|&k| k == 0) {
            return Err(Error::InvalidColouring(format!("facet {v} uncoloured")));
        }
        Colouring::new(colours)
    }

    pub fn colour_count(&self) -> usize {
        self.c
    }

    pub fn facet_count(&self) -> usize {
        self.colours.len()
    }

    /// Colour of facet `v`, in `1..=c`.
    pub fn colour(&self, v: usize) -> u32 {
        self.colours[v]
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    /// Facets of each colour; entry `k` holds colour `k + 1`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.c];
        for (v, &k) in self.colours.iter().enumerate() {
            out[k as usize - 1].push(v);
        }
        out
    }

    /// Bit `k - 1` set for colour `k`.
    pub fn mask_of(&self, facets: impl IntoIterator<Item = usize>) -> u32 {
        facets
            .into_iter()
            .fold(0, |m, v| m | 1 << (self.colours[v] - 1))
    }

    /// Adjacent facets must get distinct colours.
    pub fn validate(&self, q: &GossetPolytope) -> Result<()> {
        if self.colours.len() != q.vertex_count() {
            return Err(Error::InvalidColouring(format!(
                "{} facets coloured, polytope has {}",
                self.colours.len(),
                q.vertex_count()
            )));
        }
        for (u, v) in q.edges() {
            if self.colours[u] == self.colours[v] {
                return Err(Error::ImproperColouring(u, v, self.colours[u] as usize));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let map: BTreeMap<usize, u32> = self.colours.iter().copied().enumerate().collect();
        Ok(serde_json::to_string_pretty(&map)?)
    }

    /// Reads a JSON object `{"facet": colour, ..}` covering `0..len`.
    pub fn from_json(s: &str) -> Result<Self> {
        let map: BTreeMap<usize, u32> = serde_json::from_str(s)?;
        let colours: Vec<u32> = map.values().copied().collect();
        if map.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(Error::InvalidColouring(
                "facet indices must be 0..n without gaps".into(),
            ));
        }
        Colouring::new(colours)
    }
}

/// Largest colour-class size; also a lower bound for the independence number.
pub fn largest_class(col: &Colouring) -> usize {
    col.classes().iter().map(Vec::len).max().unwrap_or(0)
}

/// The colourings used for `M³, .., M⁸`.
///
/// For `n = 4, 5` the pair colouring is reconstructed: the lexicographically
/// least perfect matching of the non-adjacency graph whose manifold
/// reproduces the published Betti numbers and cusp census.
pub fn builtin_colouring(q: &GossetPolytope) -> Result<Colouring> {
    let col = match q.n {
        3 => {
            // vertices a_0..a_2, b_0..b_2; a_i and b_{i+1} span opposite faces
            let colours = (0..6)
                .map(|v| {
                    if v < 3 {
                        v as u32 + 1
                    } else {
                        ((v - 3 + 2) % 3) as u32 + 1
                    }
                })
                .collect();
            Colouring::new(colours)?
        }
        4 | 5 => select_pair_colouring(q)?.0,
        6 => triplet_colouring(q)?,
        7 => {
            let idx = q
                .embedding
                .as_ref()
                .ok_or_else(|| Error::Validation("3_21 lacks its embedding".into()))?;
            let all = gosset240_vertices();
            let classes: Vec<Vec<usize>> = quartets()
                .iter()
                .map(|quartet| {
                    (0..idx.len())
                        .filter(|&v| quartet.contains(&all[idx[v]]))
                        .collect()
                })
                .collect();
            Colouring::from_classes(q.vertex_count(), &classes)?
        }
        8 => {
            let all = gosset240_vertices();
            let classes: Vec<Vec<usize>> = hextets()
                .iter()
                .map(|h| (0..all.len()).filter(|&v| h.contains(&all[v])).collect())
                .collect();
            Colouring::from_classes(q.vertex_count(), &classes)?
        }
        n => return Err(Error::DimensionOutOfRange(n)),
    };
    col.validate(q)?;
    Ok(col)
}

/// The nine `2_21` triplets in listed order: three explicit vertices and
/// their five cyclic shifts in the first six coordinates (colours 1..6),
/// then three further triplets (colours 7..9).
pub fn triplets_221() -> Vec<[[i64; 7]; 3]> {
    let shift = |x: &[i64; 7], k: usize| -> [i64; 7] {
        let mut y = *x;
        for i in 0..6 {
            y[(i + k) % 6] = x[i];
        }
        y
    };
    let base: [[i64; 7]; 3] = [
        [-1, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 1],
        [1, 0, 1, 1, 1, 1, 2],
    ];
    let mut out: Vec<[[i64; 7]; 3]> = (0..6)
        .map(|k| [shift(&base[0], k), shift(&base[1], k), shift(&base[2], k)])
        .collect();
    out.extend([
        [
            [1, 0, 1, 0, 0, 0, 1],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 0, 1, 0, 1, 1],
        ],
        [
            [0, 1, 0, 1, 0, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [1, 0, 0, 0, 1, 0, 1],
        ],
        [
            [0, 0, 1, 0, 1, 0, 1],
            [1, 0, 0, 1, 0, 0, 1],
            [0, 1, 0, 0, 0, 1, 1],
        ],
    ]);
    out
}

/// Index of a `2_21` vertex given by coordinates.
pub fn index_221(x: &[i64]) -> Result<usize> {
    vertices_221()
        .iter()
        .position(|v| v.as_slice() == x)
        .ok_or_else(|| Error::Validation(format!("{x:?} is not a vertex of 2_21")))
}

fn triplet_colouring(q: &GossetPolytope) -> Result<Colouring> {
    let classes = triplets_221()
        .iter()
        .map(|t| t.iter().map(|x| index_221(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Colouring::from_classes(q.vertex_count(), &classes)
}

/// All partitions of the facets into non-adjacent pairs, each as a colouring
/// numbering pairs by their smallest facet. Sorted lexicographically.
pub fn enumerate_pair_colourings(q: &GossetPolytope) -> Vec<Colouring> {
    let nv = q.vertex_count();
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; nv];
    fn rec(q: &GossetPolytope, partner: &mut Vec<usize>, out: &mut Vec<Colouring>) {
        let nv = partner.len();
        let Some(u) = (0..nv).find(|&v| partner[v] == usize::MAX) else {
            let mut colours = vec![0u32; nv];
            let mut next = 0;
            for v in 0..nv {
                if colours[v] == 0 {
                    next += 1;
                    colours[v] = next;
                    colours[partner[v]] = next;
                }
            }
            out.push(Colouring::new(colours).expect("pairs cover all colours"));
            return;
        };
        for w in u + 1..nv {
            if partner[w] == usize::MAX && !q.is_adjacent(u, w) {
                partner[u] = w;
                partner[w] = u;
                rec(q, partner, out);
                partner[u] = usize::MAX;
                partner[w] = usize::MAX;
            }
        }
    }
    if nv % 2 == 0 {
        rec(q, &mut partner, &mut out);
    }
    out.sort();
    out
}

/// Whether `col` yields the published Betti numbers, χ and cusp census.
pub fn reproduces_published(q: &GossetPolytope, col: &Colouring) -> Result<bool> {
    let p = published(q.n)?;
    let betti = betti_of_manifold(q, col, &BettiOptions::default())?;
    let census = cusp_census(q, col);
    let (_, chi_m) = euler_characteristics(q, col);
    let types_ok = p.cusp_types.is_empty()
        || census
            .types()
            .iter()
            .map(|t| (t.c_prime, t.ideal_vertices))
            .eq(p.cusp_types.iter().copied());
    Ok(betti.values[..p.betti.len()] == *p.betti
        && betti.values[p.betti.len()..].iter().all(|&b| b == 0)
        && census.total == p.cusps
        && chi_m == p.euler
        && types_ok)
}

/// Lexicographically least pair colouring reproducing the published data,
/// with the number of candidates examined.
pub fn select_pair_colouring(q: &GossetPolytope) -> Result<(Colouring, usize)> {
    let candidates = enumerate_pair_colourings(q);
    for (i, col) in candidates.iter().enumerate() {
        if reproduces_published(q, col)? {
            return Ok((col.clone(), i + 1));
        }
    }
    Err(Error::NoMatchingColouring(q.n))
}

/// `(χ(P), χ(M))` with `χ(M) = 2^c χ(P)`.
pub fn euler_characteristics(q: &GossetPolytope, col: &Colouring) -> (Rational64, i64) {
    let chi_p = q.euler_characteristic();
    let chi_m = chi_p * Rational64::from_integer(1i64 << col.colour_count());
    assert!(chi_m.is_integer(), "2^c χ(P) is an integer");
    (chi_p, chi_m.to_integer())
}

/// Every invariant of one manifold.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldReport {
    pub n: usize,
    pub colours: usize,
    pub chi_polytope: String,
    pub chi_manifold: i64,
    /// `b_0, .., b_n`.
    pub betti: Vec<u64>,
    pub cusp_types: Vec<CuspType>,
    pub total_cusps: u64,
    pub volume: Volume,
}

impl ManifoldReport {
    pub fn build(q: &GossetPolytope, col: &Colouring, opts: &BettiOptions) -> Result<Self> {
        col.validate(q)?;
        let (chi_p, chi_m) = euler_characteristics(q, col);
        let betti = betti_of_manifold(q, col, opts)?;
        let census = cusp_census(q, col);
        Ok(ManifoldReport {
            n: q.n,
            colours: col.colour_count(),
            chi_polytope: chi_p.to_string(),
            chi_manifold: chi_m,
            betti: betti.values,
            cusp_types: census.types(),
            total_cusps: census.total,
            volume: volume(q.n, col.colour_count(), chi_p),
        })
    }

    /// Columns: `n, euler, b_1..b_7, cusps, volume`.
    pub const CSV_HEADER: &'static str = "n,euler,b1,b2,b3,b4,b5,b6,b7,cusps,volume";

    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.n.to_string(), self.chi_manifold.to_string()];
        cols.extend((1..=7).map(|k| self.betti.get(k).copied().unwrap_or(0).to_string()));
        cols.push(self.total_cusps.to_string());
        cols.push(format!("{:.6e}", self.volume.value));
        cols.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gosset::build;

    #[test]
    fn petersen_has_six_matchings() {
        let q = build(4).unwrap();
        let all = enumerate_pair_colourings(&q);
        assert_eq!(all.len(), 6);
        for c in &all {
            c.validate(&q).unwrap();
            assert_eq!(c.colour_count(), 5);
        }
    }

    #[test]
    fn clebsch_non_adjacency() {
        let q = build(5).unwrap();
        for v in 0..16 {
            let non = (0..16).filter(|&w| w != v && !q.is_adjacent(v, w)).count();
            assert_eq!(non, 5);
        }
        for c in enumerate_pair_colourings(&q) {
            assert_eq!(c.colour_count(), 8);
        }
    }

    #[test]
    fn class_structure() {
        for (n, size, count) in [(3, 2, 3), (6, 3, 9), (7, 4, 14), (8, 16, 15)] {
            let q = build(n).unwrap();
            let col = builtin_colouring(&q).unwrap();
            let classes = col.classes();
            assert_eq!(classes.len(), count, "n={n}");
            assert!(classes.iter().all(|c| c.len() == size), "n={n}");
        }
    }

    #[test]
    fn colour_one_of_221() {
        let q = build(6).unwrap();
        let col = builtin_colouring(&q).unwrap();
        let verts = vertices_221();
        let class: Vec<&Vec<i64>> = col.classes()[0].iter().map(|&v| &verts[v]).collect();
        assert!(class.contains(&&vec![-1, 0, 0, 0, 0, 0, 0]));
        assert!(class.contains(&&vec![1, 1, 0, 0, 0, 0, 1]));
        assert!(class.contains(&&vec![1, 0, 1, 1, 1, 1, 2]));
    }

    #[test]
    fn improper_colouring_names_the_edge() {
        let q = build(4).unwrap();
        // facets {0,1} and {0,2} of 0_21 are adjacent
        let bad = Colouring::new(vec![1, 1, 2, 2, 3, 3, 4, 4, 5, 5]).unwrap();
        assert!(matches!(
            bad.validate(&q),
            Err(Error::ImproperColouring(0, 1, 1))
        ));
    }

    #[test]
    fn json_round_trip() {
        let q = build(6).unwrap();
        let col = builtin_colouring(&q).unwrap();
        let back = Colouring::from_json(&col.to_json().unwrap()).unwrap();
        assert_eq!(col, back);
        assert!(Colouring::from_json(r#"{"0": 1, "2": 1}"#).is_err());
        assert!(Colouring::new(vec![1, 3]).is_err());
    }

    #[test]
    fn small_euler_characteristics() {
        for (n, chi_p, chi_m) in [(4, (1, 16), 2), (6, (-1, 8), -64), (8, (17, 2), 278528)] {
            let q = build(n).unwrap();
            let col = builtin_colouring(&q).unwrap();
            let (p, m) = euler_characteristics(&q, &col);
            assert_eq!(p, Rational64::new(chi_p.0, chi_p.1));
            assert_eq!(m, chi_m);
        }
    }
}
