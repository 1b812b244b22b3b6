//! Exact octonion arithmetic and the octonionic description of `4_21`.
//!
//! Coefficients are dyadic rationals `num / 2^exp` over the basis
//! `1, e1, .., e7`. Vertices of `4_21` live in `½Z⁸`, products of two of
//! them in `¼Z⁸`; the dyadic form keeps everything exact and hashable.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::fibration::Status;

/// The Fano plane with lines `{n, n+1, n+3}` (indices mod 7, written 1..7).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoPlane {
    /// Cyclically ordered lines; `e_a e_b = e_c` for `(a, b, c)` in order.
    pub lines: [[u8; 3]; 7],
}

/// Reduce an index into 1..=7.
#[inline]
pub fn wrap(i: i64) -> u8 {
    let r = i.rem_euclid(7);
    if r == 0 {
        7
    } else {
        r as u8
    }
}

impl FanoPlane {
    pub fn new() -> Self {
        let mut lines = [[0u8; 3]; 7];
        for (k, line) in lines.iter_mut().enumerate() {
            let n = k as i64 + 1;
            *line = [wrap(n), wrap(n + 1), wrap(n + 3)];
        }
        FanoPlane { lines }
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: u8, b: u8) -> Option<[u8; 3]> {
        if a == b {
            return None;
        }
        self.lines
            .iter()
            .copied()
            .find(|l| l.contains(&a) && l.contains(&b))
    }

    pub fn collinear(&self, a: u8, b: u8, c: u8) -> bool {
        if a == b || b == c || a == c {
            return true;
        }
        self.line_through(a, b).is_some_and(|l| l.contains(&c))
    }

    /// `e_a e_b = sign · e_c` for distinct imaginary indices.
    pub fn product(&self, a: u8, b: u8) -> (i8, u8) {
        let l = self.line_through(a, b).expect("distinct indices");
        for r in 0..3 {
            let (x, y, z) = (l[r], l[(r + 1) % 3], l[(r + 2) % 3]);
            if x == a && y == b {
                return (1, z);
            }
            if x == b && y == a {
                return (-1, z);
            }
        }
        unreachable!()
    }
}

impl Default for FanoPlane {
    fn default() -> Self {
        Self::new()
    }
}

/// Full 8×8 basis multiplication table: `e_i e_j = sign · e_k`, index 0 is 1.
fn basis_table() -> &'static [[(i8, u8); 8]; 8] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[[(i8, u8); 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let fano = FanoPlane::new();
        let mut t = [[(0i8, 0u8); 8]; 8];
        for i in 0..8u8 {
            for j in 0..8u8 {
                t[i as usize][j as usize] = match (i, j) {
                    (0, _) => (1, j),
                    (_, 0) => (1, i),
                    _ if i == j => (-1, 0),
                    _ => fano.product(i, j),
                };
            }
        }
        t
    })
}

/// An octonion with dyadic rational coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Octonion {
    num: [i64; 8],
    exp: u32,
}

impl Octonion {
    pub const ZERO: Octonion = Octonion {
        num: [0; 8],
        exp: 0,
    };
    pub const ONE: Octonion = Octonion {
        num: [1, 0, 0, 0, 0, 0, 0, 0],
        exp: 0,
    };

    /// `num / 2^exp`, normalised.
    pub fn new(num: [i64; 8], exp: u32) -> Self {
        let mut o = Octonion { num, exp };
        o.normalize();
        o
    }

    /// Build from doubled integer coefficients (`x = doubled / 2`).
    pub fn from_doubled(doubled: [i64; 8]) -> Self {
        Self::new(doubled, 1)
    }

    /// The basis element `e_i` (`i = 0` is the real unit).
    pub fn unit(i: usize) -> Self {
        let mut num = [0; 8];
        num[i] = 1;
        Octonion { num, exp: 0 }
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|&c| c == 0) {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num.iter().all(|c| c % 2 == 0) {
            for c in &mut self.num {
                *c /= 2;
            }
            self.exp -= 1;
        }
    }

    pub fn coeff(&self, i: usize) -> Ratio<i64> {
        Ratio::new(self.num[i], 1i64 << self.exp)
    }

    /// Coefficients doubled, if all of them lie in `½Z`.
    pub fn doubled(&self) -> Option<[i64; 8]> {
        match self.exp {
            0 => Some(self.num.map(|c| 2 * c)),
            1 => Some(self.num),
            _ => None,
        }
    }

    /// Sum of squared coefficients.
    pub fn norm(&self) -> Ratio<i64> {
        let s: i64 = self.num.iter().map(|c| c * c).sum();
        Ratio::new(s, 1i64 << (2 * self.exp))
    }

    /// Euclidean scalar product in `R⁸`.
    pub fn dot(&self, other: &Self) -> Ratio<i64> {
        let s: i64 = (0..8).map(|i| self.num[i] * other.num[i]).sum();
        Ratio::new(s, 1i64 << (self.exp + other.exp))
    }

    /// Bilinear octonion product.
    pub fn multiply(&self, other: &Self) -> Self {
        let t = basis_table();
        let mut num = [0i64; 8];
        for i in 0..8 {
            if self.num[i] == 0 {
                continue;
            }
            for j in 0..8 {
                if other.num[j] == 0 {
                    continue;
                }
                let (s, k) = t[i][j];
                num[k as usize] += s as i64 * self.num[i] * other.num[j];
            }
        }
        Self::new(num, self.exp + other.exp)
    }

    pub fn conjugate(&self) -> Self {
        let mut num = self.num.map(|c| -c);
        num[0] = self.num[0];
        Octonion { num, exp: self.exp }
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Self) -> Self {
        let e = self.exp.max(rhs.exp);
        let mut num = [0i64; 8];
        for (i, c) in num.iter_mut().enumerate() {
            *c = (self.num[i] << (e - self.exp)) + (rhs.num[i] << (e - rhs.exp));
        }
        Self::new(num, e)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Self {
        Octonion {
            num: self.num.map(|c| -c),
            exp: self.exp,
        }
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["1", "e1", "e2", "e3", "e4", "e5", "e6", "e7"];
        let mut first = true;
        if self.exp > 0 {
            write!(f, "(1/{})(", 1u64 << self.exp)?;
        }
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{}", names[i])?;
            } else {
                write!(f, "{sign}{mag}{}", names[i])?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if self.exp > 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitSetKind {
    /// `{±1, ±e1, .., ±e7}`.
    S,
    /// `{±1, ±e1, ±e2, ±e4}`.
    UnitQuaternionSet,
    Hextet,
    Quartet,
    Octet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSet {
    pub kind: UnitSetKind,
    pub elements: Vec<Octonion>,
}

impl UnitSet {
    pub fn contains(&self, x: &Octonion) -> bool {
        self.elements.contains(x)
    }
}

/// The sixteen units `±1, ±e_i`.
pub fn unit_set_s() -> UnitSet {
    let mut elements = Vec::with_capacity(16);
    for i in 0..8 {
        elements.push(Octonion::unit(i));
        elements.push(-Octonion::unit(i));
    }
    UnitSet {
        kind: UnitSetKind::S,
        elements,
    }
}

/// The quaternion units `±1, ±e1, ±e2, ±e4`.
pub fn unit_quaternions() -> UnitSet {
    let mut elements = Vec::with_capacity(8);
    for i in [0, 1, 2, 4] {
        elements.push(Octonion::unit(i));
        elements.push(-Octonion::unit(i));
    }
    UnitSet {
        kind: UnitSetKind::UnitQuaternionSet,
        elements,
    }
}

/// Index quadruple of the `(n, first kind)` family: `1, e_n, e_{n+1}, e_{n+3}`.
fn real_line_support(n: i64) -> [usize; 4] {
    [
        0,
        wrap(n) as usize,
        wrap(n + 1) as usize,
        wrap(n + 3) as usize,
    ]
}

/// Index quadruple of the `(n, second kind)` family: the complement of the line.
fn coline_support(n: i64) -> [usize; 4] {
    [
        wrap(n + 2) as usize,
        wrap(n + 4) as usize,
        wrap(n + 5) as usize,
        wrap(n + 6) as usize,
    ]
}

/// The 16 vertices `½(±x_a ±x_b ±x_c ±x_d)` on a support, tagged by the
/// parity of their minus signs. Sign patterns run in binary order.
fn half_family(support: [usize; 4]) -> Vec<(Octonion, bool)> {
    (0..16u32)
        .map(|mask| {
            let mut d = [0i64; 8];
            for (bit, &idx) in support.iter().enumerate() {
                d[idx] = if mask >> bit & 1 == 1 { -1 } else { 1 };
            }
            (Octonion::from_doubled(d), mask.count_ones() % 2 == 1)
        })
        .collect()
}

/// The 240 vertices of `4_21`: the 16 units `±1, ±e_i`, then for each
/// `n = 1..7` the 16 elements `½(±1 ±e_n ±e_{n+1} ±e_{n+3})` followed by the
/// 16 elements `½(±e_{n+2} ±e_{n+4} ±e_{n+5} ±e_{n+6})`.
pub fn gosset240_vertices() -> Vec<Octonion> {
    let mut v = unit_set_s().elements;
    for n in 1..=7 {
        v.extend(half_family(real_line_support(n)).into_iter().map(|p| p.0));
        v.extend(half_family(coline_support(n)).into_iter().map(|p| p.0));
    }
    v
}

/// The 15 hextets in canonical order: the hextet of 1, then for `n = 1..7`
/// the even-parity and odd-parity hextets.
pub fn hextets() -> Vec<UnitSet> {
    let mut out = vec![UnitSet {
        kind: UnitSetKind::Hextet,
        elements: unit_set_s().elements,
    }];
    for n in 1..=7 {
        for odd in [false, true] {
            let elements = half_family(real_line_support(n))
                .into_iter()
                .chain(half_family(coline_support(n)))
                .filter(|&(_, parity)| parity == odd)
                .map(|p| p.0)
                .collect();
            out.push(UnitSet {
                kind: UnitSetKind::Hextet,
                elements,
            });
        }
    }
    out
}

/// The 14 quartets partitioning the 56 vertices `½(1 ±e_n ±e_{n+1} ±e_{n+3})`,
/// ordered like the hextets they sit in.
pub fn quartets() -> Vec<UnitSet> {
    let mut out = Vec::with_capacity(14);
    for n in 1..=7 {
        for odd in [false, true] {
            let elements = half_family(real_line_support(n))
                .into_iter()
                .filter(|&(o, parity)| parity == odd && o.coeff(0) > Ratio::from_integer(0))
                .map(|p| p.0)
                .collect();
            out.push(UnitSet {
                kind: UnitSetKind::Quartet,
                elements,
            });
        }
    }
    out
}

/// Base element of each hextet for the quaternionic state, in hextet order:
/// `1`, then `½(1+e_n+e_{n+1}+e_{n+3})` and `½(-1+e_n+e_{n+1}+e_{n+3})`.
pub fn state_base_elements() -> Vec<Octonion> {
    let mut out = vec![Octonion::ONE];
    for n in 1..=7 {
        for real in [1, -1] {
            let mut d = [0i64; 8];
            for (k, idx) in real_line_support(n).into_iter().enumerate() {
                d[idx] = if k == 0 { real } else { 1 };
            }
            out.push(Octonion::from_doubled(d));
        }
    }
    out
}

/// Status of each vertex of [`gosset240_vertices`]: the left multiples of
/// each hextet's base element by the quaternion units are `O`, the rest `I`.
pub fn p8_state_seed() -> Vec<Status> {
    let verts = gosset240_vertices();
    let q = unit_quaternions();
    let mut out = vec![Status::In; verts.len()];
    for base in state_base_elements() {
        for u in &q.elements {
            let p = u.multiply(&base);
            let idx = verts
                .iter()
                .position(|v| *v == p)
                .expect("left multiples of a vertex by units are vertices");
            out[idx] = Status::Out;
        }
    }
    out
}
