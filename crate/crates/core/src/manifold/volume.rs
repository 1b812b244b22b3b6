//! Volumes. Even `n = 2m`: Gauss–Bonnet, `Vol(P) = (−2π)^m/(n−1)!! · χ(P)`.
//! Odd `n`: `Vol(P³) = L(2)` (Catalan), `Vol(P⁵) = 7ζ(3)/8`, `Vol(P⁷) = 8L(4)`.

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Volume {
    /// Closed form, e.g. `8π²/3`.
    pub label: String,
    pub value: f64,
}

/// Catalan's constant `L(2) = β(2)`, via
/// `G = π/8 · ln(2+√3) + 3/8 · Σ 1/((2k+1)² C(2k,k))`.
pub fn catalan() -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0f64; // C(2k, k)
    for k in 0..40 {
        let kf = k as f64;
        sum += 1.0 / ((2.0 * kf + 1.0).powi(2) * binom);
        binom *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0) / ((kf + 1.0) * (kf + 1.0));
    }
    PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * sum
}

/// Apéry: `ζ(3) = 5/2 · Σ_{k≥1} (−1)^{k+1} / (k³ C(2k,k))`.
pub fn zeta3() -> f64 {
    let mut sum = 0.0;
    let mut binom = 2.0f64; // C(2k, k) at k = 1
    for k in 1..40 {
        let kf = k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign / (kf.powi(3) * binom);
        binom *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0) / ((kf + 1.0) * (kf + 1.0));
    }
    2.5 * sum
}

/// `L(4) = β(4) = Σ (−1)^k/(2k+1)⁴`, summed in pairs from the tail; the
/// truncation error is below the first omitted term, `< 10⁻¹⁶`.
pub fn dirichlet_beta4() -> f64 {
    let terms = 20_000u64;
    (0..terms)
        .rev()
        .map(|k| {
            let t = 1.0 / ((2 * k + 1) as f64).powi(4);
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

fn superscript(k: usize) -> &'static str {
    ["", "", "²", "³", "⁴"][k]
}

fn double_factorial(k: i64) -> i64 {
    (1..=k).rev().step_by(2).product()
}

/// `Vol(Mⁿ) = 2^c · Vol(Pⁿ)`.
pub fn volume(n: usize, colours: usize, chi_p: Rational64) -> Volume {
    let copies = 1i64 << colours;
    if n % 2 == 0 {
        let m = n / 2;
        let coeff = Rational64::from_integer((-2i64).pow(m as u32))
            / Rational64::from_integer(double_factorial(n as i64 - 1))
            * chi_p
            * Rational64::from_integer(copies);
        let pi = format!("π{}", superscript(m));
        let label = match (*coeff.numer(), *coeff.denom()) {
            (0, _) => "0".to_string(),
            (1, 1) => pi,
            (a, 1) => format!("{a}{pi}"),
            (a, b) => format!("{a}{pi}/{b}"),
        };
        let value = *coeff.numer() as f64 / *coeff.denom() as f64 * PI.powi(m as i32);
        return Volume { label, value };
    }
    let (mult, den, name, constant) = match n {
        3 => (1, 1, "L(2)", catalan()),
        5 => (7, 8, "ζ(3)", zeta3()),
        7 => (8, 1, "L(4)", dirichlet_beta4()),
        _ => panic!("no closed form for n = {n}"),
    };
    let coeff = Rational64::new(mult * copies, den);
    let label = if coeff.is_integer() {
        format!("{}{name}", coeff.to_integer())
    } else {
        format!("{}{name}/{}", coeff.numer(), coeff.denom())
    };
    Volume {
        label,
        value: *coeff.numer() as f64 / *coeff.denom() as f64 * constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        ((a - b) / b).abs() < 1e-13
    }

    #[test]
    fn constants() {
        assert!(close(catalan(), 0.915_965_594_177_219_015));
        assert!(close(zeta3(), 1.202_056_903_159_594_285));
        assert!(close(dirichlet_beta4(), 0.988_944_551_741_105_336));
    }

    #[test]
    fn slow_series_agree() {
        // direct alternating sums, averaged over consecutive partial sums
        let partial = |terms: u64| -> f64 {
            (0..terms)
                .map(|k| (if k % 2 == 0 { 1.0 } else { -1.0 }) / ((2 * k + 1) as f64).powi(2))
                .sum()
        };
        let g = 0.5 * (partial(200_000) + partial(200_001));
        assert!((g - catalan()).abs() < 1e-10);
        let z: f64 = (1..200_000u64).map(|k| 1.0 / (k as f64).powi(3)).sum();
        assert!((z - zeta3()).abs() < 1e-10);
    }

    #[test]
    fn manifold_volumes() {
        let v4 = volume(4, 5, Rational64::new(1, 16));
        assert_eq!(v4.label, "8π²/3");
        assert!((v4.value - 26.3).abs() < 0.05);
        let v6 = volume(6, 9, Rational64::new(-1, 8));
        assert_eq!(v6.label, "512π³/15");
        let v8 = volume(8, 15, Rational64::new(17, 2));
        assert_eq!(v8.label, "4456448π⁴/105");
        assert!((v8.value / 4.13e6 - 1.0).abs() < 0.005);
        assert_eq!(volume(3, 3, 0.into()).label, "8L(2)");
        let v5 = volume(5, 8, 0.into());
        assert_eq!(v5.label, "224ζ(3)");
        assert!((v5.value - 269.0).abs() < 0.5);
        let v7 = volume(7, 14, 0.into());
        assert_eq!(v7.label, "131072L(4)");
        assert!((v7.value / 1.30e5 - 1.0).abs() < 0.005);
    }
}
