//! Canonical labelling of vertex-coloured graphs.
//!
//! Individualisation–refinement search: equitable partition refinement,
//! branching on the first non-singleton cell, pruning by refinement traces
//! and by automorphisms discovered at leaves. The certificate is the graph
//! relabelled by the lexicographically greatest leaf, so two graphs get
//! equal certificates exactly when they are isomorphic. Since a flag
//! complex is determined by its 1-skeleton, this decides isomorphism of
//! the complexes as well.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::InducedSubcomplex;
use crate::vset::VertexSet;

/// Canonical relabelling of a coloured graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    colours: Vec<u32>,
    rows: Vec<VertexSet>,
}

impl Certificate {
    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    /// Stable 64-bit digest (FNV-1a over the certificate contents).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(self.rows.len() as u64);
        for &c in &self.colours {
            eat(c as u64);
        }
        for r in &self.rows {
            for v in r.iter() {
                eat(v as u64);
            }
            eat(u64::MAX);
        }
        h
    }
}

/// Result of a canonical labelling search.
#[derive(Clone, Debug)]
pub struct Canon {
    pub certificate: Certificate,
    /// `labelling[i]` is the vertex placed at canonical position `i`.
    pub labelling: Vec<usize>,
    /// Generators of the colour-preserving automorphism group.
    pub generators: Vec<Vec<usize>>,
    /// Base (first-path individualisations) for `generators`.
    base: Vec<usize>,
}

impl Canon {
    /// Group order from the stabiliser chain along the first path.
    pub fn group_order(&self) -> u128 {
        let n = self.labelling.len();
        let mut order: u128 = 1;
        for d in 0..self.base.len() {
            let fix = &self.base[..d];
            let gens: Vec<&Vec<usize>> = self
                .generators
                .iter()
                .filter(|g| fix.iter().all(|&p| g[p] == p))
                .collect();
            let orbits = Orbits::new(n, gens.iter().map(|g| g.as_slice()));
            let root = orbits.find(self.base[d]);
            order *= (0..n).filter(|&v| orbits.find(v) == root).count() as u128;
        }
        order
    }
}

/// Certificate of the 1-skeleton of an induced subcomplex.
pub fn canonical_form(c: &InducedSubcomplex) -> Certificate {
    let (g, _) = c.relabelled();
    canonical_form_coloured(g.adjacency(), &vec![0; g.vertex_count()]).certificate
}

/// Canonical labelling of the graph `adj` whose vertices carry `colours`.
/// Automorphisms must preserve colours; colour values are part of the
/// certificate.
pub fn canonical_form_coloured(adj: &[VertexSet], colours: &[u32]) -> Canon {
    let n = adj.len();
    assert_eq!(colours.len(), n);
    let mut sorted: Vec<u32> = colours.to_vec();
    sorted.sort_unstable();
    let mut search = Search {
        adj,
        n,
        colours: sorted,
        first: None,
        best: None,
        gens: Vec::new(),
    };
    if n == 0 {
        return Canon {
            certificate: Certificate {
                colours: Vec::new(),
                rows: Vec::new(),
            },
            labelling: Vec::new(),
            generators: Vec::new(),
            base: Vec::new(),
        };
    }
    let mut root = Partition::from_colours(colours);
    let mut queue: VecDeque<usize> = root.cell_starts().collect();
    let t = root.refine(adj, &mut queue);
    let mut path = Vec::new();
    let mut traces = vec![t];
    search.node(root, &mut path, &mut traces, true);
    let best = search.best.expect("search reaches a leaf");
    let first = search.first.expect("search reaches a leaf");
    Canon {
        certificate: best.cert,
        labelling: best.lab.iter().map(|&v| v as usize).collect(),
        generators: search
            .gens
            .iter()
            .map(|g| g.iter().map(|&v| v as usize).collect())
            .collect(),
        base: first.path.iter().map(|&v| v as usize).collect(),
    }
}

/// Ordered partition: `lab` lists vertices cell by cell, a cell is named by
/// its start index, `end[start]` is its end and `cell[v]` the start of the
/// cell holding `v`.
#[derive(Clone)]
struct Partition {
    lab: Vec<u16>,
    end: Vec<u32>,
    cell: Vec<u32>,
    cells: usize,
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(27)
}

impl Partition {
    fn from_colours(colours: &[u32]) -> Self {
        let n = colours.len();
        let mut lab: Vec<u16> = (0..n as u16).collect();
        lab.sort_by_key(|&v| (colours[v as usize], v));
        let mut end = vec![0u32; n];
        let mut cell = vec![0u32; n];
        let mut s = 0;
        let mut cells = 0;
        while s < n {
            let c = colours[lab[s] as usize];
            let mut e = s;
            while e < n && colours[lab[e] as usize] == c {
                e += 1;
            }
            end[s] = e as u32;
            for &v in &lab[s..e] {
                cell[v as usize] = s as u32;
            }
            cells += 1;
            s = e;
        }
        Partition {
            lab,
            end,
            cell,
            cells,
        }
    }

    fn n(&self) -> usize {
        self.lab.len()
    }

    fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            if s >= self.n() {
                return None;
            }
            let r = s;
            s = self.end[s] as usize;
            Some(r)
        })
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    fn target_cell(&self) -> Option<usize> {
        self.cell_starts().find(|&s| self.end[s] as usize - s > 1)
    }

    /// Refine to the coarsest equitable refinement; returns a trace hash
    /// that is invariant under isomorphism.
    fn refine(&mut self, adj: &[VertexSet], queue: &mut VecDeque<usize>) -> u64 {
        let n = self.n();
        let mut queued = vec![false; n];
        for &s in queue.iter() {
            queued[s] = true;
        }
        let mut trace: u64 = 0;
        let mut counts: Vec<(u32, u16)> = Vec::with_capacity(n);
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if self.is_discrete() {
                queue.clear();
                break;
            }
            let we = self.end[w] as usize;
            let splitter = VertexSet::from_iter(self.lab[w..we].iter().map(|&v| v as usize));
            let mut hit = VertexSet::EMPTY;
            for v in splitter.iter() {
                hit = hit.or(&adj[v]);
            }
            // cells meeting N(W)
            let mut starts: Vec<usize> = hit
                .iter()
                .map(|v| self.cell[v] as usize)
                .filter(|&s| self.end[s] as usize - s > 1)
                .collect();
            starts.sort_unstable();
            starts.dedup();
            for s in starts {
                let e = self.end[s] as usize;
                counts.clear();
                for &v in &self.lab[s..e] {
                    counts.push((adj[v as usize].intersection_len(&splitter) as u32, v));
                }
                let c0 = counts[0].0;
                if counts.iter().all(|c| c.0 == c0) {
                    continue;
                }
                counts.sort_unstable();
                let was_queued = queued[s];
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut i = 0;
                while i < counts.len() {
                    let mut j = i;
                    while j < counts.len() && counts[j].0 == counts[i].0 {
                        j += 1;
                    }
                    frags.push((s + i, s + j));
                    trace = mix(
                        trace,
                        ((s as u64) << 32) | ((counts[i].0 as u64) << 16) | (j - i) as u64,
                    );
                    i = j;
                }
                for (k, &(_, v)) in counts.iter().enumerate() {
                    self.lab[s + k] = v;
                }
                for &(fs, fe) in &frags {
                    self.end[fs] = fe as u32;
                    for &v in &self.lab[fs..fe] {
                        self.cell[v as usize] = fs as u32;
                    }
                }
                self.cells += frags.len() - 1;
                if was_queued {
                    for &(fs, _) in &frags[1..] {
                        queued[fs] = true;
                        queue.push_back(fs);
                    }
                } else {
                    let largest = frags
                        .iter()
                        .enumerate()
                        .max_by_key(|(k, f)| (f.1 - f.0, std::cmp::Reverse(*k)))
                        .map(|(k, _)| k)
                        .unwrap();
                    for (k, &(fs, _)) in frags.iter().enumerate() {
                        if k != largest {
                            queued[fs] = true;
                            queue.push_back(fs);
                        }
                    }
                }
            }
        }
        mix(trace, self.cells as u64)
    }

    fn individualize(&mut self, v: u16, adj: &[VertexSet]) -> u64 {
        let s = self.cell[v as usize] as usize;
        let e = self.end[s] as usize;
        let pos = s + self.lab[s..e].iter().position(|&x| x == v).unwrap();
        self.lab.swap(s, pos);
        self.end[s] = (s + 1) as u32;
        self.end[s + 1] = e as u32;
        for &x in &self.lab[s + 1..e] {
            self.cell[x as usize] = (s + 1) as u32;
        }
        self.cells += 1;
        let mut q = VecDeque::from([s]);
        mix(self.refine(adj, &mut q), s as u64)
    }
}

struct Leaf {
    path: Vec<u16>,
    traces: Vec<u64>,
    cert: Certificate,
    lab: Vec<u16>,
}

struct Search<'a> {
    adj: &'a [VertexSet],
    n: usize,
    colours: Vec<u32>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u16>>,
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new<'g>(n: usize, gens: impl Iterator<Item = &'g [usize]>) -> Self {
        let mut o = Orbits {
            parent: (0..n).collect(),
        };
        for g in gens {
            for (v, &w) in g.iter().enumerate() {
                o.union(v, w);
            }
        }
        o
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Lexicographic comparison of `a` against the same-length prefix of `b`.
fn compare_traces(a: &[u64], b: &[u64]) -> Ordering {
    for (i, x) in a.iter().enumerate() {
        match b.get(i) {
            Some(y) => match x.cmp(y) {
                Ordering::Equal => {}
                o => return o,
            },
            None => return Ordering::Greater,
        }
    }
    Ordering::Equal
}

fn common_prefix(a: &[u16], b: &[u16]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'a> Search<'a> {
    fn certificate(&self, lab: &[u16]) -> Certificate {
        let mut inv = vec![0usize; self.n];
        for (i, &v) in lab.iter().enumerate() {
            inv[v as usize] = i;
        }
        let rows = lab
            .iter()
            .map(|&v| VertexSet::from_iter(self.adj[v as usize].iter().map(|u| inv[u])))
            .collect();
        Certificate {
            colours: self.colours.clone(),
            rows,
        }
    }

    fn stabiliser_orbits(&self, path: &[u16]) -> Orbits {
        let mut o = Orbits {
            parent: (0..self.n).collect(),
        };
        for g in &self.gens {
            if path.iter().all(|&p| g[p as usize] == p) {
                for (v, &w) in g.iter().enumerate() {
                    o.union(v, w as usize);
                }
            }
        }
        o
    }

    /// Returns `Some(k)` to abandon the search back to the node at depth `k`.
    fn node(
        &mut self,
        part: Partition,
        path: &mut Vec<u16>,
        traces: &mut Vec<u64>,
        eq_first: bool,
    ) -> Option<usize> {
        if part.is_discrete() {
            return self.leaf(&part, path, traces, eq_first);
        }
        let depth = path.len();
        let s = part.target_cell().expect("non-discrete partition");
        let e = part.end[s] as usize;
        let mut candidates: Vec<u16> = part.lab[s..e].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u16> = Vec::new();
        let mut orbits: Option<(usize, Orbits)> = None;
        for w in candidates {
            if !explored.is_empty() {
                if orbits.as_ref().map_or(true, |(k, _)| *k != self.gens.len()) {
                    orbits = Some((self.gens.len(), self.stabiliser_orbits(path)));
                }
                let o = &orbits.as_ref().unwrap().1;
                let rw = o.find(w as usize);
                if explored.iter().any(|&x| o.find(x as usize) == rw) {
                    continue;
                }
            }
            explored.push(w);
            let mut child = part.clone();
            let t = child.individualize(w, self.adj);
            path.push(w);
            traces.push(t);
            let child_first = eq_first
                && self
                    .first
                    .as_ref()
                    .map_or(true, |f| f.traces.get(traces.len() - 1) == Some(&t));
            let worse = self
                .best
                .as_ref()
                .is_some_and(|b| compare_traces(traces, &b.traces) == Ordering::Less);
            let jump = if worse && !child_first {
                None
            } else {
                self.node(child, path, traces, child_first)
            };
            path.pop();
            traces.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Some(k);
                }
            }
        }
        None
    }

    fn leaf(
        &mut self,
        part: &Partition,
        path: &[u16],
        traces: &[u64],
        eq_first: bool,
    ) -> Option<usize> {
        let cert = self.certificate(&part.lab);
        let make = |cert: Certificate| Leaf {
            path: path.to_vec(),
            traces: traces.to_vec(),
            cert,
            lab: part.lab.clone(),
        };
        let Some(first) = &self.first else {
            self.first = Some(make(cert.clone()));
            self.best = Some(make(cert));
            return None;
        };
        if eq_first && cert == first.cert {
            let g = self.automorphism(&part.lab, &first.lab);
            let k = common_prefix(path, &first.path);
            self.gens.push(g);
            return Some(k);
        }
        let best = self.best.as_ref().unwrap();
        let order = compare_traces(traces, &best.traces).then_with(|| cert.cmp(&best.cert));
        match order {
            Ordering::Greater => {
                self.best = Some(make(cert));
                None
            }
            Ordering::Equal => {
                let g = self.automorphism(&part.lab, &best.lab);
                let k = common_prefix(path, &best.path);
                self.gens.push(g);
                Some(k)
            }
            Ordering::Less => None,
        }
    }

    /// The automorphism taking leaf `from` to leaf `to`.
    fn automorphism(&self, from: &[u16], to: &[u16]) -> Vec<u16> {
        let mut g = vec![0u16; self.n];
        for (i, &v) in from.iter().enumerate() {
            g[v as usize] = to[i];
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FlagComplex;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> FlagComplex {
        FlagComplex::new(n, edges).unwrap()
    }

    fn permuted(g: &FlagComplex, perm: &[usize]) -> FlagComplex {
        let e: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        graph(g.vertex_count(), &e)
    }

    fn petersen() -> FlagComplex {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        graph(10, &e)
    }

    fn cube() -> FlagComplex {
        let mut e = Vec::new();
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    e.push((u, v));
                }
            }
        }
        graph(8, &e)
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> FlagComplex {
        use rand::Rng;
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    e.push((u, v));
                }
            }
        }
        graph(n, &e)
    }

    #[test]
    fn group_orders() {
        let p = petersen();
        let c = canonical_form_coloured(p.adjacency(), &[0; 10]);
        assert_eq!(c.group_order(), 120);
        let q = cube();
        let c = canonical_form_coloured(q.adjacency(), &[0; 8]);
        assert_eq!(c.group_order(), 48);
        for g in &c.generators {
            for (u, v) in q.edges() {
                assert!(q.is_edge(g[u], g[v]));
            }
        }
        let cyc: Vec<_> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        let c = canonical_form_coloured(graph(7, &cyc).adjacency(), &[0; 7]);
        assert_eq!(c.group_order(), 14);
    }

    #[test]
    fn colours_restrict_the_group() {
        let q = cube();
        let colours = [1, 0, 0, 0, 0, 0, 0, 0];
        let c = canonical_form_coloured(q.adjacency(), &colours);
        assert_eq!(c.group_order(), 6);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let cyc6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let two_triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
        let a = canonical_form(&graph(6, &cyc6).whole());
        let b = canonical_form(&graph(6, &two_triangles).whole());
        assert_ne!(a, b);
        let c = canonical_form(&cube().whole());
        let mut e = cube().edges();
        e.retain(|&(u, v)| !(u == 0 && v == 1));
        e.push((0, 7));
        let d = canonical_form(&graph(8, &e).whole());
        assert_ne!(c, d);
    }

    #[test]
    fn invariant_under_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = [
            petersen(),
            cube(),
            random_graph(&mut rng, 12, 0.3),
            random_graph(&mut rng, 20, 0.5),
        ];
        for g in &samples {
            let reference = canonical_form(&g.whole());
            let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
            for _ in 0..1000 {
                perm.shuffle(&mut rng);
                let h = permuted(g, &perm);
                assert_eq!(canonical_form(&h.whole()), reference);
            }
        }
    }

    #[test]
    fn labelling_realises_certificate() {
        let g = petersen();
        let c = canonical_form_coloured(g.adjacency(), &[0; 10]);
        let lab = &c.labelling;
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(g.is_edge(lab[i], lab[j]), c.certificate.rows[i].contains(j));
            }
        }
    }
}
