//! Rational homology of flag complexes.
//!
//! Ranks of the boundary maps are computed by sparse column reduction with
//! clearing (columns already known to reduce to zero are skipped, working
//! from the top dimension down). Arithmetic is done modulo two word-sized
//! primes; if the two disagree the ranks are recomputed over `Q` exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CliqueTable, InducedSubcomplex};

pub const PRIME_A: u32 = 2_147_483_647;
pub const PRIME_B: u32 = 2_147_483_629;

/// Betti numbers `b_0..b_d`; with `reduced` set, `minus_one` holds
/// `b̃_{-1}` (1 exactly for the empty complex).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiVector {
    pub reduced: bool,
    pub minus_one: u64,
    pub values: Vec<u64>,
}

impl BettiVector {
    pub fn get(&self, k: isize) -> u64 {
        match k {
            -1 => self.minus_one,
            k if k < -1 => 0,
            k => self.values.get(k as usize).copied().unwrap_or(0),
        }
    }

    /// Alternating sum, including `-b̃_{-1}` in the reduced convention.
    pub fn alternating_sum(&self) -> i64 {
        let s: i64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        s - self.minus_one as i64
    }

    pub fn is_acyclic(&self) -> bool {
        self.minus_one == 0 && self.values.iter().all(|&b| b == 0)
    }

    /// Drop trailing zeros.
    pub fn trimmed(mut self) -> Self {
        while self.values.last() == Some(&0) {
            self.values.pop();
        }
        self
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if self.minus_one > 0 {
            write!(f, "b-1={}; ", self.minus_one)?;
        }
        for (i, b) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Simplices with boundary incidences. `faces[d]` lists, for each
/// `d`-simplex, the indices of its `d+1` facets in dimension `d-1`; the
/// `i`-th entry is the face opposite the `i`-th vertex.
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    counts: Vec<usize>,
    faces: Vec<Vec<u32>>,
}

impl ChainComplex {
    pub fn from_cliques(table: &CliqueTable) -> Self {
        let top = match table.top_dim() {
            Some(t) => t,
            None => return ChainComplex::default(),
        };
        let counts: Vec<usize> = (0..=top).map(|d| table.count(d)).collect();
        let mut faces = vec![Vec::new()];
        for d in 1..=top {
            let lower = table.dim(d - 1);
            let mut f = Vec::with_capacity((d + 1) * table.count(d));
            for s in table.iter_dim(d) {
                for i in 0..=d {
                    let face = s.face(i);
                    let idx = lower
                        .binary_search(&face)
                        .expect("flag complexes are closed under faces");
                    f.push(idx as u32);
                }
            }
            faces.push(f);
        }
        ChainComplex { counts, faces }
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    #[inline]
    pub fn faces_of(&self, d: usize, i: u32) -> &[u32] {
        let i = i as usize;
        &self.faces[d][(d + 1) * i..(d + 1) * (i + 1)]
    }

    /// Reduced Betti numbers of the whole complex.
    pub fn reduced_betti(&self) -> Vec<u64> {
        let mut ws = Workspace::new(self);
        reduced_betti_verified(self, None, &mut ws)
    }
}

/// Scratch buffers reused across many subcomplex computations.
pub struct Workspace {
    local: Vec<Vec<u32>>,
}

impl Workspace {
    pub fn new(cc: &ChainComplex) -> Self {
        Workspace {
            local: cc.counts.iter().map(|&n| vec![0u32; n]).collect(),
        }
    }
}

pub(crate) trait Field {
    type E: Clone;
    fn from_sign(&self, negative: bool) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `a - f·b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone, Copy)]
pub(crate) struct ModP(pub u32);

impl ModP {
    #[inline]
    fn reduce(&self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }
}

impl Field for ModP {
    type E = u32;
    fn from_sign(&self, negative: bool) -> u32 {
        if negative {
            self.0 - 1
        } else {
            1
        }
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn sub_mul(&self, a: &u32, f: &u32, b: &u32) -> u32 {
        let fb = self.reduce(*f as u64 * *b as u64);
        if *a >= fb {
            a - fb
        } else {
            a + (self.0 - fb)
        }
    }
    #[inline]
    fn neg_mul(&self, f: &u32, b: &u32) -> u32 {
        let fb = self.reduce(*f as u64 * *b as u64);
        if fb == 0 {
            0
        } else {
            self.0 - fb
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 * *b as u64)
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = *a as u64;
        let mut e = self.0 as u64 - 2;
        let p = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result as u32
    }
}

pub(crate) struct Rationals;

impl Field for Rationals {
    type E = BigRational;
    fn from_sign(&self, negative: bool) -> BigRational {
        if negative {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn neg_mul(&self, f: &BigRational, b: &BigRational) -> BigRational {
        -(f * b)
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

const NONE: u32 = u32::MAX;

/// Ranks of `∂_d` for `d = 1..=top` (index 0 unused) of the subcomplex
/// given by `sel` (sorted simplex indices per dimension) or the whole
/// complex.
pub(crate) fn boundary_ranks<F: Field>(
    cc: &ChainComplex,
    sel: Option<&[Vec<u32>]>,
    field: &F,
    ws: &mut Workspace,
) -> Vec<usize> {
    let count = |d: usize| -> usize {
        match sel {
            Some(s) => s.get(d).map_or(0, |v| v.len()),
            None => cc.counts.get(d).copied().unwrap_or(0),
        }
    };
    let global = |d: usize, i: usize| -> u32 {
        match sel {
            Some(s) => s[d][i],
            None => i as u32,
        }
    };
    let mut top = 0;
    for d in 0..cc.counts.len() {
        if count(d) > 0 {
            top = d;
        }
    }
    let mut ranks = vec![0usize; top + 2];
    if top == 0 {
        return ranks;
    }

    let mut cleared: Vec<bool> = vec![false; count(top)];
    let mut col: Vec<(u32, F::E)> = Vec::new();
    let mut tmp: Vec<(u32, F::E)> = Vec::new();
    for d in (1..=top).rev() {
        let nrows = count(d - 1);
        if sel.is_some() {
            for i in 0..nrows {
                ws.local[d - 1][global(d - 1, i) as usize] = i as u32;
            }
        }
        let mut pivot_of_row = vec![NONE; nrows];
        let mut next_cleared = vec![false; nrows];
        let mut piv_rows: Vec<u32> = Vec::new();
        let mut piv_vals: Vec<F::E> = Vec::new();
        let mut piv_start: Vec<usize> = vec![0];
        let mut rank = 0;

        for ci in 0..count(d) {
            if cleared[ci] {
                continue;
            }
            col.clear();
            for (i, &f) in cc.faces_of(d, global(d, ci)).iter().enumerate() {
                let row = if sel.is_some() {
                    ws.local[d - 1][f as usize]
                } else {
                    f
                };
                col.push((row, field.from_sign(i % 2 == 1)));
            }
            col.sort_unstable_by_key(|e| e.0);

            while let Some((low, lv)) = col.last() {
                let pc = pivot_of_row[*low as usize];
                if pc == NONE {
                    break;
                }
                let factor = lv.clone();
                let (s, e) = (piv_start[pc as usize], piv_start[pc as usize + 1]);
                let prow = &piv_rows[s..e];
                let pval = &piv_vals[s..e];
                tmp.clear();
                let (mut a, mut b) = (0, 0);
                while a < col.len() || b < prow.len() {
                    if b == prow.len() || (a < col.len() && col[a].0 < prow[b]) {
                        tmp.push(col[a].clone());
                        a += 1;
                    } else if a == col.len() || prow[b] < col[a].0 {
                        tmp.push((prow[b], field.neg_mul(&factor, &pval[b])));
                        b += 1;
                    } else {
                        let v = field.sub_mul(&col[a].1, &factor, &pval[b]);
                        if !field.is_zero(&v) {
                            tmp.push((col[a].0, v));
                        }
                        a += 1;
                        b += 1;
                    }
                }
                std::mem::swap(&mut col, &mut tmp);
            }

            if let Some((low, lv)) = col.last() {
                let low = *low;
                let inv = field.inv(lv);
                for (r, v) in col.iter() {
                    piv_rows.push(*r);
                    piv_vals.push(field.mul(v, &inv));
                }
                piv_start.push(piv_rows.len());
                pivot_of_row[low as usize] = rank as u32;
                next_cleared[low as usize] = true;
                rank += 1;
            }
        }
        ranks[d] = rank;
        cleared = next_cleared;
    }
    ranks
}

fn betti_from_ranks(counts: &[usize], ranks: &[usize]) -> Vec<u64> {
    (0..counts.len())
        .map(|d| {
            let r_in = if d == 0 {
                usize::from(counts[0] > 0)
            } else {
                ranks[d]
            };
            let r_out = ranks.get(d + 1).copied().unwrap_or(0);
            (counts[d] - r_in - r_out) as u64
        })
        .collect()
}

/// Reduced Betti numbers `b̃_0..b̃_top` (empty for the empty complex),
/// two-prime verified with exact fallback.
pub(crate) fn reduced_betti_verified(
    cc: &ChainComplex,
    sel: Option<&[Vec<u32>]>,
    ws: &mut Workspace,
) -> Vec<u64> {
    let counts: Vec<usize> = match sel {
        Some(s) => {
            let mut c: Vec<usize> = s.iter().map(|v| v.len()).collect();
            while c.last() == Some(&0) {
                c.pop();
            }
            c
        }
        None => cc.counts.clone(),
    };
    if counts.is_empty() {
        return Vec::new();
    }
    let ra = boundary_ranks(cc, sel, &ModP(PRIME_A), ws);
    let rb = boundary_ranks(cc, sel, &ModP(PRIME_B), ws);
    let ranks = if ra == rb {
        ra
    } else {
        boundary_ranks(cc, sel, &Rationals, ws)
    };
    betti_from_ranks(&counts, &ranks)
}

/// Rational Betti numbers of a full subcomplex.
pub fn betti_numbers(c: &InducedSubcomplex, reduced: bool) -> BettiVector {
    if c.is_empty() {
        return BettiVector {
            reduced,
            minus_one: u64::from(reduced),
            values: Vec::new(),
        };
    }
    let top = c.vertices().len() - 1;
    let table = c
        .cliques_by_dimension(top.min(super::MAX_SIMPLEX_VERTICES - 1))
        .expect("clique size bounded by the simplex width");
    let cc = ChainComplex::from_cliques(&table);
    let mut values = cc.reduced_betti();
    if !reduced {
        values[0] += 1;
    }
    BettiVector {
        reduced,
        minus_one: 0,
        values,
    }
}

/// Rank of a dense integer matrix over `Q` by plain Gaussian elimination.
/// Used as an independent check on small inputs.
pub fn dense_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..nrows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..ncols {
                    let v = &m[rank][k] * &f;
                    m[r][k] = &m[r][k] - v;
                }
            }
        }
        rank += 1;
    }
    debug_assert!(m
        .iter()
        .skip(rank)
        .all(|r| r.iter().all(|x| !x.is_positive() && !x.is_negative())));
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FlagComplex;
    use crate::vset::VertexSet;
    use proptest::prelude::*;

    fn cross_polytope(k: usize) -> FlagComplex {
        let mut edges = Vec::new();
        for u in 0..2 * k {
            for v in (u + 1)..2 * k {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        FlagComplex::new(2 * k, &edges).unwrap()
    }

    /// Independent oracle: dense boundary matrices over Q, no clearing.
    fn naive_betti(c: &FlagComplex) -> Vec<u64> {
        let t = c.cliques_by_dimension(c.vertex_count()).unwrap();
        let Some(top) = t.top_dim() else {
            return vec![];
        };
        let mut ranks = vec![0usize; top + 2];
        for d in 1..=top {
            let rows = t.dim(d - 1);
            let mut m = vec![vec![0i64; t.count(d)]; rows.len()];
            for (j, s) in t.iter_dim(d).enumerate() {
                for i in 0..=d {
                    let r = rows.iter().position(|x| *x == s.face(i)).unwrap();
                    m[r][j] = if i % 2 == 0 { 1 } else { -1 };
                }
            }
            ranks[d] = dense_rank(&m);
        }
        (0..=top)
            .map(|d| {
                let rin = if d == 0 { 1 } else { ranks[d] };
                (t.count(d) - rin - ranks[d + 1]) as u64
            })
            .collect()
    }

    #[test]
    fn orthoplex_boundary_is_a_three_sphere() {
        let c = cross_polytope(4);
        let b = betti_numbers(&c.whole(), false).trimmed();
        assert_eq!(b.values, vec![1, 0, 0, 1]);
    }

    #[test]
    fn single_vertex_reduced_is_zero() {
        let c = FlagComplex::new(1, &[]).unwrap();
        let b = betti_numbers(&c.whole(), true);
        assert!(b.is_acyclic());
    }

    #[test]
    fn empty_complex_reduced_minus_one() {
        let c = FlagComplex::new(4, &[(0, 1)]).unwrap();
        let b = betti_numbers(&c.induced(VertexSet::EMPTY), true);
        assert_eq!(b.get(-1), 1);
        assert_eq!(b.alternating_sum(), -1);
        let u = betti_numbers(&c.induced(VertexSet::EMPTY), false);
        assert!(u.is_acyclic());
    }

    #[test]
    fn circle_and_wedge() {
        let cyc: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let c = FlagComplex::new(8, &cyc).unwrap();
        assert_eq!(betti_numbers(&c.whole(), false).values, vec![1, 1]);
        // two triangles' boundaries glued at vertex 0: 0-1-2-3-0 and 0-4-5-6-0
        let e = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (0, 4),
            (4, 5),
            (5, 6),
            (6, 0),
        ];
        let w = FlagComplex::new(7, &e).unwrap();
        assert_eq!(betti_numbers(&w.whole(), true).values, vec![0, 2]);
    }

    #[test]
    fn exact_field_agrees_with_primes() {
        let c = cross_polytope(3);
        let t = c.cliques_by_dimension(5).unwrap();
        let cc = ChainComplex::from_cliques(&t);
        let mut ws = Workspace::new(&cc);
        let a = boundary_ranks(&cc, None, &ModP(PRIME_A), &mut ws);
        let q = boundary_ranks(&cc, None, &Rationals, &mut ws);
        assert_eq!(a, q);
    }

    #[test]
    fn primes_are_prime() {
        for p in [PRIME_A, PRIME_B] {
            let p = p as u64;
            let mut d = 2u64;
            while d * d <= p {
                assert_ne!(p % d, 0);
                d += 1;
            }
        }
    }

    #[test]
    fn selection_matches_induced() {
        let c = cross_polytope(4);
        let t = c.cliques_by_dimension(7).unwrap();
        let cc = ChainComplex::from_cliques(&t);
        let keep = VertexSet::from_iter([0, 1, 2, 4, 5, 7]);
        let sel: Vec<Vec<u32>> = (0..=t.top_dim().unwrap())
            .map(|d| {
                t.iter_dim(d)
                    .enumerate()
                    .filter(|(_, s)| s.vertices().all(|v| keep.contains(v)))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let mut ws = Workspace::new(&cc);
        let got = reduced_betti_verified(&cc, Some(&sel), &mut ws);
        let want = betti_numbers(&c.induced(keep), true).values;
        assert_eq!(got[..want.len()], want[..]);
    }

    fn arb_graph() -> impl Strategy<Value = FlagComplex> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in (u + 1)..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                FlagComplex::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_dense_oracle(c in arb_graph()) {
            let fast = betti_numbers(&c.whole(), true).values;
            let slow = naive_betti(&c);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn euler_consistency(c in arb_graph()) {
            let b = betti_numbers(&c.whole(), false);
            prop_assert_eq!(b.alternating_sum(), c.whole().euler_characteristic());
        }
    }
}
