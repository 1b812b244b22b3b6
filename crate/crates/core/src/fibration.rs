//! States, the `Z₂^c` action on them, ascending and descending links, and
//! legality of orbits.
//!
//! A state marks every facet `I` or `O`. Acting by `v ∈ Z₂^c` flips every
//! facet whose colour is in the support of `v`. The ascending (descending)
//! link of a state is the full subcomplex of the nerve on its `O` (`I`)
//! facets. An orbit is legal when all its links are connected and 1-legal
//! when all are simply connected.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{
    betti_numbers, canonical_form, canonical_form_coloured, pi1_trivial, Certificate, FlagComplex,
    InducedSubcomplex, Pi1Verdict, DEFAULT_PI1_BUDGET,
};
use crate::error::{Error, Result};
use crate::gosset::GossetPolytope;
use crate::manifold::{euler_characteristics, index_221, triplets_221, Colouring};
use crate::octonion::p8_state_seed;
use crate::par::Execution;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "I")]
    In,
    #[serde(rename = "O")]
    Out,
}

/// Status of every facet, stored as the set of `O` facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    len: usize,
    out: VertexSet,
}

impl State {
    pub fn from_statuses(statuses: &[Status]) -> Self {
        State {
            len: statuses.len(),
            out: VertexSet::from_iter(
                statuses
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s == Status::Out)
                    .map(|(i, _)| i),
            ),
        }
    }

    pub fn from_out_set(len: usize, out: VertexSet) -> Self {
        State { len, out }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn status(&self, v: usize) -> Status {
        if self.out.contains(v) {
            Status::Out
        } else {
            Status::In
        }
    }

    pub fn statuses(&self) -> Vec<Status> {
        (0..self.len).map(|v| self.status(v)).collect()
    }

    pub fn out_set(&self) -> VertexSet {
        self.out
    }

    pub fn in_set(&self) -> VertexSet {
        VertexSet::full(self.len).and_not(&self.out)
    }

    pub fn complement(&self) -> Self {
        State {
            len: self.len,
            out: self.in_set(),
        }
    }

    /// `(I count, O count)` in each colour class.
    pub fn class_split(&self, col: &Colouring) -> Vec<(usize, usize)> {
        col.classes()
            .iter()
            .map(|c| {
                let o = c.iter().filter(|&&v| self.out.contains(v)).count();
                (c.len() - o, o)
            })
            .collect()
    }

    /// Every colour class split exactly in half.
    pub fn is_balanced(&self, col: &Colouring) -> bool {
        self.class_split(col).iter().all(|&(i, o)| i == o)
    }

    pub fn to_json(&self) -> Result<String> {
        let map: BTreeMap<usize, Status> = self.statuses().into_iter().enumerate().collect();
        Ok(serde_json::to_string_pretty(&map)?)
    }

    /// Reads `{"facet": "I" | "O", ..}` covering `0..len`.
    pub fn from_json(s: &str) -> Result<Self> {
        let map: BTreeMap<usize, Status> = serde_json::from_str(s)?;
        if map.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(Error::InvalidState(
                "facet indices must be 0..n without gaps".into(),
            ));
        }
        let statuses: Vec<Status> = map.into_values().collect();
        Ok(State::from_statuses(&statuses))
    }
}

/// Facets whose colour lies in the support of `v` (bit `k - 1` ↔ colour `k`).
pub fn flip_set(v: u32, col: &Colouring) -> VertexSet {
    VertexSet::from_iter((0..col.facet_count()).filter(|&f| v >> (col.colour(f) - 1) & 1 == 1))
}

/// `v(s)`: flip the status of every facet coloured by a colour in `v`.
pub fn act_on_state(v: u32, s: &State, col: &Colouring) -> State {
    let flip = flip_set(v, col);
    State {
        len: s.len,
        out: s.out.and_not(&flip).or(&flip.and_not(&s.out)),
    }
}

/// The initial state of each built-in orbit.
pub fn builtin_state(q: &GossetPolytope, col: &Colouring) -> Result<State> {
    let class_size = match q.n {
        3..=5 => 2,
        6 => 3,
        7 => 4,
        8 => 16,
        n => return Err(Error::DimensionOutOfRange(n)),
    };
    let classes = col.classes();
    if classes.iter().any(|c| c.len() != class_size) {
        return Err(Error::InvalidState(format!(
            "built-in states need colour classes of size {class_size}"
        )));
    }
    let nv = q.vertex_count();
    let state = match q.n {
        3..=5 => State::from_out_set(nv, VertexSet::from_iter(classes.iter().map(|c| c[0]))),
        6 => {
            let firsts = triplets_221()
                .iter()
                .map(|t| index_221(&t[0]))
                .collect::<Result<Vec<_>>>()?;
            let out = VertexSet::from_iter(firsts);
            if classes
                .iter()
                .any(|c| c.iter().filter(|&&v| out.contains(v)).count() != 1)
            {
                return Err(Error::InvalidState(
                    "colouring is not the listed triplet colouring".into(),
                ));
            }
            State::from_out_set(nv, out)
        }
        7 => {
            let seed = p8_state_seed();
            let idx = q
                .embedding
                .as_ref()
                .ok_or_else(|| Error::Validation("3_21 lacks its embedding".into()))?;
            let statuses: Vec<Status> = idx.iter().map(|&i| seed[i]).collect();
            State::from_statuses(&statuses)
        }
        _ => State::from_statuses(&p8_state_seed()),
    };
    Ok(state)
}

pub fn ascending_link<'a>(nerve: &'a FlagComplex, s: &State) -> InducedSubcomplex<'a> {
    nerve.induced(s.out_set())
}

pub fn descending_link<'a>(nerve: &'a FlagComplex, s: &State) -> InducedSubcomplex<'a> {
    nerve.induced(s.in_set())
}

/// The `2^c` states of the orbit are pairwise distinct.
pub fn orbit_is_free(s: &State, col: &Colouring) -> bool {
    let c = col.colour_count();
    let distinct: BTreeSet<VertexSet> = (0u32..1 << c)
        .map(|v| act_on_state(v, s, col).out_set())
        .collect();
    distinct.len() == 1 << c
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    pub pi1_budget: u64,
    pub execution: Execution,
    /// Also count states up to status-preserving graph isomorphism.
    pub state_classes: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            pi1_budget: DEFAULT_PI1_BUDGET,
            execution: Execution::Parallel,
            state_classes: false,
        }
    }
}

/// One isomorphism class of links met along the orbit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkClass {
    /// Hex digest of the canonical form.
    pub certificate: String,
    pub vertices: usize,
    /// A state `v` whose ascending link lies in the class.
    pub representative: u32,
    pub ascending: u64,
    pub descending: u64,
    pub euler: i64,
    /// Reduced Betti numbers `b̃_0, ..`.
    pub reduced_betti: Vec<u64>,
    pub connected: bool,
    /// `None` for disconnected links.
    pub pi1: Option<Pi1Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    OneLegal,
    Legal,
    Illegal {
        witness: u32,
    },
    /// Every link is connected, none is known to be non-simply-connected,
    /// and some `π₁` checks were inconclusive.
    Undetermined {
        classes: Vec<usize>,
    },
}

impl Verdict {
    pub fn is_legal(&self) -> bool {
        matches!(
            self,
            Verdict::Legal | Verdict::OneLegal | Verdict::Undetermined { .. }
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EulerCheck {
    pub expected: i64,
    pub ascending: i64,
    pub descending: i64,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.ascending == self.expected && self.descending == self.expected
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateLinks {
    pub v: u32,
    pub ascending: usize,
    pub descending: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitReport {
    pub n: usize,
    pub colours: usize,
    pub orbit_size: u64,
    pub orbit_free: bool,
    pub balanced: bool,
    pub classes: Vec<LinkClass>,
    pub states: Vec<StateLinks>,
    /// Number of states contributing each value of `1 − χ(lk↑(v))`.
    pub contributions: BTreeMap<i64, u64>,
    pub euler: EulerCheck,
    pub state_classes: Option<usize>,
    pub verdict: Verdict,
}

struct LinkData {
    certificate: Certificate,
    euler: i64,
}

/// Every link of the orbit of `s0`, deduplicated up to isomorphism.
///
/// `lk↓(v) = lk↑(v + 1…1)`, so the `2^c` ascending links already cover
/// every descending link.
pub fn check_orbit(
    q: &GossetPolytope,
    col: &Colouring,
    s0: &State,
    opts: &OrbitOptions,
) -> Result<OrbitReport> {
    col.validate(q)?;
    if s0.len() != q.vertex_count() {
        return Err(Error::InvalidState(format!(
            "state has {} facets, polytope has {}",
            s0.len(),
            q.vertex_count()
        )));
    }
    let nerve = q.nerve();
    let c = col.colour_count();
    let all_ones: u32 = (1u32 << c) - 1;
    let vs: Vec<u32> = (0..=all_ones).collect();

    let mut class_of_v = vec![0usize; vs.len()];
    let mut index: HashMap<Certificate, usize> = HashMap::new();
    let mut reps: Vec<u32> = Vec::new();
    let mut euler_of_class: Vec<i64> = Vec::new();
    let mut asc_sum = 0i64;
    for chunk in vs.chunks(1024) {
        let data = opts.execution.map(chunk, |&v| {
            let link = ascending_link(&nerve, &act_on_state(v, s0, col));
            LinkData {
                certificate: canonical_form(&link),
                euler: link.euler_characteristic(),
            }
        });
        for (&v, d) in chunk.iter().zip(data) {
            asc_sum += 1 - d.euler;
            let next = reps.len();
            let k = *index.entry(d.certificate).or_insert(next);
            if k == next {
                reps.push(v);
                euler_of_class.push(d.euler);
            }
            class_of_v[v as usize] = k;
        }
    }
    let desc_sum: i64 = vs
        .iter()
        .map(|&v| 1 - euler_of_class[class_of_v[(v ^ all_ones) as usize]])
        .sum();

    let mut asc_count = vec![0u64; reps.len()];
    let mut desc_count = vec![0u64; reps.len()];
    let mut contributions = BTreeMap::new();
    for &v in &vs {
        let a = class_of_v[v as usize];
        asc_count[a] += 1;
        desc_count[class_of_v[(v ^ all_ones) as usize]] += 1;
        *contributions.entry(1 - euler_of_class[a]).or_insert(0) += 1;
    }

    let analysed = opts.execution.map(&reps, |&v| -> Result<_> {
        let link = ascending_link(&nerve, &act_on_state(v, s0, col));
        let betti = betti_numbers(&link, true);
        let connected = link.is_connected();
        let pi1 = if connected {
            Some(pi1_trivial(&link, opts.pi1_budget)?)
        } else {
            None
        };
        Ok((
            canonical_form(&link).fingerprint(),
            link.vertices().len(),
            betti,
            connected,
            pi1,
        ))
    });
    let mut classes = Vec::with_capacity(reps.len());
    for (k, r) in analysed.into_iter().enumerate() {
        let (fp, vertices, betti, connected, pi1) = r?;
        let mut reduced_betti = betti.values.clone();
        if betti.minus_one > 0 {
            reduced_betti.clear();
        }
        classes.push(LinkClass {
            certificate: format!("{fp:016x}"),
            vertices,
            representative: reps[k],
            ascending: asc_count[k],
            descending: desc_count[k],
            euler: euler_of_class[k],
            reduced_betti,
            connected,
            pi1,
        });
    }

    let verdict = verdict_of(&classes);
    let state_classes = if opts.state_classes {
        Some(count_state_classes(q, col, s0, opts.execution))
    } else {
        None
    };
    let (_, chi_m) = euler_characteristics(q, col);
    Ok(OrbitReport {
        n: q.n,
        colours: c,
        orbit_size: 1 << c,
        orbit_free: orbit_is_free(s0, col),
        balanced: s0.is_balanced(col),
        states: vs
            .iter()
            .map(|&v| StateLinks {
                v,
                ascending: class_of_v[v as usize],
                descending: class_of_v[(v ^ all_ones) as usize],
            })
            .collect(),
        classes,
        contributions,
        euler: EulerCheck {
            expected: chi_m,
            ascending: asc_sum,
            descending: desc_sum,
        },
        state_classes,
        verdict,
    })
}

fn verdict_of(classes: &[LinkClass]) -> Verdict {
    if let Some(bad) = classes.iter().find(|k| !k.connected) {
        return Verdict::Illegal {
            witness: bad.representative,
        };
    }
    let mut unknown = Vec::new();
    let mut all_simple = true;
    for (i, k) in classes.iter().enumerate() {
        match &k.pi1 {
            Some(Pi1Verdict::SimplyConnected) => {}
            Some(Pi1Verdict::NotSimplyConnected { .. }) => return Verdict::Legal,
            _ => {
                all_simple = false;
                unknown.push(i);
            }
        }
    }
    if all_simple {
        Verdict::OneLegal
    } else {
        Verdict::Undetermined { classes: unknown }
    }
}

/// Number of states in the orbit up to isomorphisms of the nerve that
/// preserve status.
pub fn count_state_classes(
    q: &GossetPolytope,
    col: &Colouring,
    s0: &State,
    execution: Execution,
) -> usize {
    let adj = q.adjacency();
    let vs: Vec<u32> = (0u32..1 << col.colour_count()).collect();
    let certs = execution.map(&vs, |&v| {
        let s = act_on_state(v, s0, col);
        let colours: Vec<u32> = (0..s.len()).map(|f| u32::from(s.out.contains(f))).collect();
        canonical_form_coloured(adj, &colours).certificate
    });
    certs.into_iter().collect::<BTreeSet<_>>().len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateMap {
    /// Same-coloured facets always share status: `f_*` is trivial.
    Trivial,
    /// Some colour class carries both statuses: `f_*` has image `2Z`.
    Image2Z,
}

/// The dichotomy for a coloured polytope (or cube) with a state, given as
/// parallel slices over its facets.
pub fn state_map_triviality(colours: &[u32], statuses: &[Status]) -> StateMap {
    let mut seen: HashMap<u32, Status> = HashMap::new();
    for (&k, &s) in colours.iter().zip(statuses) {
        if *seen.entry(k).or_insert(s) != s {
            return StateMap::Image2Z;
        }
    }
    StateMap::Trivial
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CuspVerdict {
    NullHomotopic,
    NonTrivialImage2Z,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspRestriction {
    pub verdicts: Vec<CuspVerdict>,
    pub null_homotopic: usize,
}

/// The restriction of the diagonal map to the cusp above each ideal vertex,
/// decided on its coloured cube link with the restricted state.
pub fn cusp_restriction_analysis(
    q: &GossetPolytope,
    col: &Colouring,
    s: &State,
) -> CuspRestriction {
    let verdicts: Vec<CuspVerdict> = q
        .orthoplex_facets
        .iter()
        .map(|pairs| {
            let facets: Vec<usize> = pairs.iter().flat_map(|&(u, w)| [u, w]).collect();
            let colours: Vec<u32> = facets.iter().map(|&f| col.colour(f)).collect();
            let statuses: Vec<Status> = facets.iter().map(|&f| s.status(f)).collect();
            match state_map_triviality(&colours, &statuses) {
                StateMap::Trivial => CuspVerdict::NullHomotopic,
                StateMap::Image2Z => CuspVerdict::NonTrivialImage2Z,
            }
        })
        .collect();
    let null_homotopic = verdicts
        .iter()
        .filter(|&&v| v == CuspVerdict::NullHomotopic)
        .count();
    CuspRestriction {
        verdicts,
        null_homotopic,
    }
}

/// `count` uniformly random states on `facets` facets, reproducible from `seed`.
pub fn random_states(facets: usize, count: usize, seed: u64) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let out = VertexSet::from_iter((0..facets).filter(|_| rng.gen::<bool>()));
            State::from_out_set(facets, out)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub examined: usize,
    pub legal: usize,
    pub one_legal: usize,
    pub undetermined: usize,
    /// Seeds (indices into the random sequence) of the legal orbits found.
    pub legal_indices: Vec<usize>,
}

/// Check the orbits of `count` random states. Records coverage only: a
/// search finding no 1-legal orbit proves nothing about the rest.
pub fn random_orbit_search(
    q: &GossetPolytope,
    col: &Colouring,
    count: usize,
    seed: u64,
    opts: &OrbitOptions,
) -> Result<SearchReport> {
    let mut report = SearchReport {
        examined: 0,
        legal: 0,
        one_legal: 0,
        undetermined: 0,
        legal_indices: Vec::new(),
    };
    for (i, s) in random_states(q.vertex_count(), count, seed)
        .iter()
        .enumerate()
    {
        let r = check_orbit(q, col, s, opts)?;
        report.examined += 1;
        match r.verdict {
            Verdict::OneLegal => report.one_legal += 1,
            Verdict::Undetermined { .. } => report.undetermined += 1,
            _ => {}
        }
        if r.verdict.is_legal() {
            report.legal += 1;
            report.legal_indices.push(i);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gosset::build;
    use crate::manifold::builtin_colouring;
    use proptest::prelude::*;

    fn setup(n: usize) -> (GossetPolytope, Colouring, State) {
        let q = build(n).unwrap();
        let col = builtin_colouring(&q).unwrap();
        let s = builtin_state(&q, &col).unwrap();
        (q, col, s)
    }

    #[test]
    fn action_basics() {
        let (_, col, s) = setup(5);
        assert_eq!(act_on_state(0, &s, &col), s);
        assert_eq!(act_on_state(0xff, &s, &col), s.complement());
        assert!(orbit_is_free(&s, &col));
        assert!(s.is_balanced(&col));
    }

    #[test]
    fn links_partition_the_facets() {
        let (q, _, s) = setup(6);
        let nerve = q.nerve();
        let a = *ascending_link(&nerve, &s).vertices();
        let d = *descending_link(&nerve, &s).vertices();
        assert!(a.and(&d).is_empty());
        assert_eq!(a.or(&d), VertexSet::full(27));
        assert_eq!(
            *ascending_link(&nerve, &s).vertices(),
            *descending_link(&nerve, &s.complement()).vertices()
        );
        let all_out = State::from_out_set(27, VertexSet::full(27));
        assert!(descending_link(&nerve, &all_out).is_empty());
    }

    #[test]
    fn builtin_state_shapes() {
        let (_, col, s) = setup(6);
        for class in col.classes() {
            let o = class
                .iter()
                .filter(|&&v| s.status(v) == Status::Out)
                .count();
            assert_eq!(o, 1);
        }
        // The two quartets inside span{1, e1, e2, e4} are closed under the
        // quaternion units, so they are entirely O; the other twelve split.
        let (_, col, s) = setup(7);
        let split = s.class_split(&col);
        assert_eq!(split.iter().filter(|&&p| p == (2, 2)).count(), 12);
        assert_eq!(&split[..2], &[(0, 4), (0, 4)]);
        assert!(!s.is_balanced(&col));
        let (_, col, s) = setup(3);
        assert!(s.class_split(&col).iter().all(|&p| p == (1, 1)));
        assert_eq!(
            state_map_triviality(col.colours(), &s.statuses()),
            StateMap::Image2Z
        );
    }

    #[test]
    fn dichotomy() {
        let distinct = [1, 2, 3, 4];
        for bits in 0..16u32 {
            let st: Vec<Status> = (0..4)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        Status::Out
                    } else {
                        Status::In
                    }
                })
                .collect();
            assert_eq!(state_map_triviality(&distinct, &st), StateMap::Trivial);
        }
        let cube = [1, 1, 2, 3];
        let same = [Status::In, Status::In, Status::Out, Status::In];
        let split = [Status::In, Status::Out, Status::Out, Status::In];
        assert_eq!(state_map_triviality(&cube, &same), StateMap::Trivial);
        assert_eq!(state_map_triviality(&cube, &split), StateMap::Image2Z);
    }

    #[test]
    fn prism_orbit() {
        let (q, col, s) = setup(3);
        let opts = OrbitOptions {
            state_classes: true,
            ..Default::default()
        };
        let r = check_orbit(&q, &col, &s, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::OneLegal);
        assert_eq!(r.state_classes, Some(2));
        assert!(r.euler.holds());
    }

    #[test]
    fn json_round_trip() {
        let (_, _, s) = setup(4);
        assert_eq!(State::from_json(&s.to_json().unwrap()).unwrap(), s);
        assert!(State::from_json(r#"{"0": "I", "1": "X"}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn action_is_a_free_involutive_group_action(
            bits in proptest::collection::vec(any::<bool>(), 27),
            v in 0u32..512,
            w in 0u32..512,
        ) {
            let (_, col, _) = setup(6);
            let s = State::from_statuses(
                &bits.iter().map(|&b| if b { Status::Out } else { Status::In }).collect::<Vec<_>>(),
            );
            prop_assert_eq!(act_on_state(v, &act_on_state(v, &s, &col), &col), s);
            prop_assert_eq!(
                act_on_state(v, &act_on_state(w, &s, &col), &col),
                act_on_state(v ^ w, &s, &col)
            );
            prop_assert_eq!(act_on_state(v, &s, &col) == s, v == 0);
            // the multiset {I, O} per class is orbit-invariant
            let norm = |p: Vec<(usize, usize)>| -> Vec<(usize, usize)> {
                p.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
            };
            prop_assert_eq!(norm(s.class_split(&col)), norm(act_on_state(v, &s, &col).class_split(&col)));
        }
    }
}
