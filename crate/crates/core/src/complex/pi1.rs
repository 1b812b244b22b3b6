//! Simple-connectivity certification for flag complexes.
//!
//! The edge-path group is presented with one generator per edge outside a
//! BFS spanning tree and one relator per triangle. Tietze moves then
//! eliminate any generator that occurs exactly once in some relator. This
//! is a semi-decision procedure: a trivial presentation proves `π₁ = 1`,
//! a positive first Betti number proves the opposite, and anything else
//! is reported as unknown.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{betti_numbers, InducedSubcomplex};
use crate::error::{Error, Result};

pub const DEFAULT_PI1_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pi1Verdict {
    SimplyConnected,
    NotSimplyConnected { h1_rank: u64 },
    Unknown { generators: usize, relators: usize },
}

impl Pi1Verdict {
    pub fn is_simply_connected(&self) -> bool {
        matches!(self, Pi1Verdict::SimplyConnected)
    }
}

/// A letter is `±(g + 1)`.
type Word = Vec<i32>;

fn reduce(w: &mut Word) {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // cyclic
    let (mut a, mut b) = (0, out.len());
    while b - a >= 2 && out[a] == -out[b - 1] {
        a += 1;
        b -= 1;
    }
    out.truncate(b);
    out.drain(..a);
    *w = out;
}

fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

/// A finitely presented group undergoing Tietze simplification.
struct Presentation {
    live: Vec<bool>,
    relators: Vec<Word>,
    occurs: Vec<Vec<u32>>,
}

enum Outcome {
    Trivial,
    Stuck,
    OutOfBudget,
}

impl Presentation {
    fn new(generators: usize, relators: Vec<Word>) -> Self {
        let mut p = Presentation {
            live: vec![true; generators],
            relators: Vec::with_capacity(relators.len()),
            occurs: vec![Vec::new(); generators],
        };
        for mut r in relators {
            reduce(&mut r);
            p.push_relator(r);
        }
        p
    }

    fn push_relator(&mut self, r: Word) {
        let id = self.relators.len() as u32;
        for &x in &r {
            let g = x.unsigned_abs() as usize - 1;
            if self.occurs[g].last() != Some(&id) {
                self.occurs[g].push(id);
            }
        }
        self.relators.push(r);
    }

    fn live_generators(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    fn live_relators(&self) -> usize {
        self.relators.iter().filter(|r| !r.is_empty()).count()
    }

    /// A generator occurring exactly once in `r`, if any.
    fn single_occurrence(r: &[i32]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &x) in r.iter().enumerate() {
            let n = r.iter().filter(|&&y| y.abs() == x.abs()).count();
            if n == 1 {
                best = Some(i);
                break;
            }
        }
        best
    }

    fn simplify(&mut self, budget: u64) -> Outcome {
        let mut steps = 0u64;
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
            .relators
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| Reverse((r.len(), i as u32)))
            .collect();

        while let Some(Reverse((len, id))) = heap.pop() {
            let r = &self.relators[id as usize];
            if r.len() != len || r.is_empty() {
                continue;
            }
            let Some(pos) = Self::single_occurrence(r) else {
                continue;
            };
            // r = A x^e B  ~  x^e (B A)  ⇒  x = (B A)^{-e}
            let e = r[pos].signum();
            let g = r[pos].unsigned_abs() as usize - 1;
            let mut ba: Word = r[pos + 1..].to_vec();
            ba.extend_from_slice(&r[..pos]);
            let value = if e > 0 { inverse(&ba) } else { ba };
            let value_inv = inverse(&value);
            self.relators[id as usize].clear();
            self.live[g] = false;
            steps += 1;

            let users = std::mem::take(&mut self.occurs[g]);
            for rid in users {
                let old = &self.relators[rid as usize];
                if !old.iter().any(|&y| y.unsigned_abs() as usize - 1 == g) {
                    continue;
                }
                let mut new: Word = Vec::with_capacity(old.len() + value.len());
                for &y in old {
                    if y == g as i32 + 1 {
                        new.extend_from_slice(&value);
                    } else if y == -(g as i32 + 1) {
                        new.extend_from_slice(&value_inv);
                    } else {
                        new.push(y);
                    }
                }
                steps += new.len() as u64;
                reduce(&mut new);
                for &y in &new {
                    let h = y.unsigned_abs() as usize - 1;
                    if self.occurs[h].last() != Some(&rid) {
                        self.occurs[h].push(rid);
                    }
                }
                if !new.is_empty() {
                    heap.push(Reverse((new.len(), rid)));
                }
                self.relators[rid as usize] = new;
            }
            if steps > budget {
                return if self.live_generators() == 0 {
                    Outcome::Trivial
                } else {
                    Outcome::OutOfBudget
                };
            }
        }
        if self.live_generators() == 0 {
            Outcome::Trivial
        } else {
            Outcome::Stuck
        }
    }
}

/// Edge-path presentation of `π₁(C)` relative to a BFS tree.
fn edge_path_presentation(c: &InducedSubcomplex) -> Result<(usize, Vec<Word>)> {
    let (g, _) = c.relabelled();
    let n = g.vertex_count();
    let mut in_tree = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for v in g.neighbours(u).iter() {
            if !seen[v] {
                seen[v] = true;
                in_tree[u].push(v);
                in_tree[v].push(u);
                queue.push_back(v);
            }
        }
    }
    let mut id = std::collections::HashMap::new();
    for (u, v) in g.edges() {
        if !in_tree[u].contains(&v) {
            let k = id.len() as i32 + 1;
            id.insert((u, v), k);
        }
    }
    let letter = |a: usize, b: usize| -> Option<i32> {
        if a < b {
            id.get(&(a, b)).copied()
        } else {
            id.get(&(b, a)).map(|k| -k)
        }
    };
    let triangles = g.whole().cliques_by_dimension(2)?;
    let relators = triangles
        .iter_dim(2)
        .map(|t| {
            let v: Vec<usize> = t.vertices().collect();
            [letter(v[0], v[1]), letter(v[1], v[2]), letter(v[2], v[0])]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();
    Ok((id.len(), relators))
}

/// Decide (within `budget` rewriting steps) whether `C` is simply connected.
pub fn pi1_trivial(c: &InducedSubcomplex, budget: u64) -> Result<Pi1Verdict> {
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let (gens, relators) = edge_path_presentation(c)?;
    let mut p = Presentation::new(gens, relators);
    match p.simplify(budget) {
        Outcome::Trivial => return Ok(Pi1Verdict::SimplyConnected),
        Outcome::Stuck | Outcome::OutOfBudget => {}
    }
    let b1 = betti_numbers(c, true).get(1);
    if b1 > 0 {
        Ok(Pi1Verdict::NotSimplyConnected { h1_rank: b1 })
    } else {
        Ok(Pi1Verdict::Unknown {
            generators: p.live_generators(),
            relators: p.live_relators(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FlagComplex;
    use crate::vset::VertexSet;

    fn orthoplex(k: usize) -> FlagComplex {
        let mut e = Vec::new();
        for u in 0..2 * k {
            for v in u + 1..2 * k {
                if u / 2 != v / 2 {
                    e.push((u, v));
                }
            }
        }
        FlagComplex::new(2 * k, &e).unwrap()
    }

    #[test]
    fn three_sphere_is_simply_connected() {
        let c = orthoplex(4);
        assert_eq!(
            pi1_trivial(&c.whole(), DEFAULT_PI1_BUDGET).unwrap(),
            Pi1Verdict::SimplyConnected
        );
    }

    #[test]
    fn octahedron_is_simply_connected() {
        let c = orthoplex(3);
        assert!(pi1_trivial(&c.whole(), 100).unwrap().is_simply_connected());
    }

    #[test]
    fn circle_is_not() {
        let e: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let c = FlagComplex::new(8, &e).unwrap();
        assert_eq!(
            pi1_trivial(&c.whole(), DEFAULT_PI1_BUDGET).unwrap(),
            Pi1Verdict::NotSimplyConnected { h1_rank: 1 }
        );
    }

    #[test]
    fn disconnected_rejected() {
        let c = FlagComplex::new(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            pi1_trivial(&c.whole(), 10),
            Err(Error::Disconnected)
        ));
        assert!(pi1_trivial(&c.induced(VertexSet::EMPTY), 10).is_err());
    }

    #[test]
    fn cone_and_tree() {
        // cone over a 6-cycle
        let mut e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.extend((0..6).map(|i| (i, 6)));
        let c = FlagComplex::new(7, &e).unwrap();
        assert!(pi1_trivial(&c.whole(), 1000).unwrap().is_simply_connected());
        let t = FlagComplex::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert!(pi1_trivial(&t.whole(), 0).unwrap().is_simply_connected());
    }

    #[test]
    fn tietze_reduction() {
        let mut w = vec![1, 2, -2, 3, -1];
        reduce(&mut w);
        assert_eq!(w, vec![3]);
        // <a,b | ab, b> is trivial
        let mut p = Presentation::new(2, vec![vec![1, 2], vec![2]]);
        assert!(matches!(p.simplify(100), Outcome::Trivial));
        // <a | a^2> is not freed
        let mut q = Presentation::new(1, vec![vec![1, 1]]);
        assert!(matches!(q.simplify(100), Outcome::Stuck));
    }

    #[test]
    fn torsion_is_not_eliminated() {
        let mut q = Presentation::new(1, vec![vec![1, 1, 1]]);
        assert!(matches!(q.simplify(1000), Outcome::Stuck));
        assert_eq!(q.live_generators(), 1);
    }
}
