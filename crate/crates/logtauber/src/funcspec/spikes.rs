//! Procedural piece source for the square-spike family: the function that is
//! `1` on `[n², n²+1)` for every integer `n ≥ 2` and `0` elsewhere.
//!
//! Materializing its pieces is hopeless at large horizons (`e^64` holds
//! ~2.5·10¹³ spikes), so this module provides the three things the analysis
//! needs directly: O(1) point evaluation, on-demand breakpoint enumeration,
//! and closed forms for the spike measure and the weighted integral
//! `∫ s(x)/x dx = Σ log(1 + n⁻²)`, whose tails are summed by an
//! Euler–Maclaurin expansion.
//!
//! Beyond `x ≈ 2⁵²` the unit intervals fall below `f64` resolution; point
//! evaluation there follows a deterministic rule consistent with the
//! enumerated breakpoints, while counting (and hence every measure and
//! integral) stays accurate to ±1 spike.

/// Index of the spike containing `x`, if any: the `n ≥ 2` with
/// `x ∈ [n², n²+1)` under the crate's f64 spike geometry.
fn spike_index(x: f64) -> Option<f64> {
    if x < 4.0 {
        return None;
    }
    let mut n = x.sqrt().floor();
    if n * n > x {
        n -= 1.0;
    } else if (n + 1.0) * (n + 1.0) <= x {
        n += 1.0;
    }
    if n >= 2.0 && x - n * n < 1.0 {
        Some(n)
    } else {
        None
    }
}

pub fn eval(x: f64) -> f64 {
    if spike_index(x).is_some() {
        1.0
    } else {
        0.0
    }
}

/// `(left limit, right value)` at a breakpoint produced by
/// [`breakpoints_within`]; elsewhere both sides agree with [`eval`].
pub fn one_sided(x: f64) -> (f64, f64) {
    match spike_index(x) {
        Some(n) if x == n * n => (0.0, 1.0),
        Some(_) => (1.0, 1.0),
        None => {
            // spike end n²+1: the left neighborhood lies inside the spike
            let n = (x - 1.0).sqrt().round();
            if n >= 2.0 && n * n + 1.0 == x {
                (1.0, 0.0)
            } else {
                (0.0, 0.0)
            }
        }
    }
}

/// Spike starts and ends strictly inside `(lo, hi)`, ascending from `lo`,
/// at most `cap` of them. Ends collapsed onto starts by rounding are skipped.
pub fn breakpoints_within(lo: f64, hi: f64, cap: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if hi <= 4.0 || cap == 0 {
        return out;
    }
    let mut n = lo.max(0.0).sqrt().floor().max(2.0);
    loop {
        // past 2^53 consecutive spike indices are no longer representable
        if n >= 9.0e15 {
            return out;
        }
        let start = n * n;
        if start >= hi {
            return out;
        }
        for bp in [start, start + 1.0] {
            if bp > lo && bp < hi && out.last() != Some(&bp) {
                out.push(bp);
                if out.len() >= cap {
                    return out;
                }
            }
        }
        n += 1.0;
    }
}

/// Largest `n ≥ 2` whose spike lies entirely below `y`, i.e. `n² + 1 ≤ y`
/// (0 when there is none).
fn last_full_spike(y: f64) -> f64 {
    if y < 5.0 {
        return 0.0;
    }
    let mut n = (y - 1.0).sqrt().floor();
    // sqrt is correctly rounded, so at most a step or two of fixup
    for _ in 0..4 {
        if (n + 1.0) * (n + 1.0) + 1.0 <= y {
            n += 1.0;
        } else {
            break;
        }
    }
    for _ in 0..4 {
        if n >= 2.0 && n * n + 1.0 > y {
            n -= 1.0;
        } else {
            break;
        }
    }
    n.max(0.0)
}

/// Lebesgue measure of the spike set intersected with `(1, y)`.
fn spike_mass_below(y: f64) -> f64 {
    let n = last_full_spike(y);
    let full = if n >= 2.0 { n - 1.0 } else { 0.0 };
    let partial = match spike_index(y) {
        Some(m) => y - m * m,
        None => 0.0,
    };
    full + partial
}

/// Lebesgue measure of the spike set intersected with `(a, b)`.
pub fn spike_measure(a: f64, b: f64) -> f64 {
    (spike_mass_below(b) - spike_mass_below(a.max(1.0))).max(0.0)
}

/// Exact exceptional-set measure `|{x ∈ (a,b) : |s(x) − ℓ| > ε}|` given the
/// distances of `ℓ` to the two values the function takes.
pub fn level_measure(dist_to_one: f64, dist_to_zero: f64, eps: f64, a: f64, b: f64) -> f64 {
    let spikes = spike_measure(a, b);
    let gaps = (b - a - spikes).max(0.0);
    let mut m = 0.0;
    if dist_to_one > eps {
        m += spikes;
    }
    if dist_to_zero > eps {
        m += gaps;
    }
    m
}

// ---- weighted integral Σ log(1 + n⁻²) ----

/// Below this the tail is summed directly; above, by Euler–Maclaurin.
const EM_CUTOFF: f64 = 256.0;

fn g(x: f64) -> f64 {
    (1.0 / (x * x)).ln_1p()
}

/// `Σ_{n≥M} log(1 + n⁻²)` for `M ≥ EM_CUTOFF`, truncation error `< 1e-18`.
fn tail_em(m: f64) -> f64 {
    // ∫_M^∞ log(1+x⁻²) dx = 2 atan(1/M) − M log(1+M⁻²)
    let integral = 2.0 * (1.0 / m).atan() - m * g(m);
    let d1 = -2.0 / (m * m * m + m);
    let cube = m * m * m + m;
    let d3 = (12.0 * m * cube - 4.0 * (3.0 * m * m + 1.0).powi(2)) / (cube * cube * cube);
    integral + 0.5 * g(m) - d1 / 12.0 + d3 / 720.0
}

/// `Σ_{n≥M} log(1 + n⁻²)` for any `M ≥ 2`.
fn tail(m: f64) -> f64 {
    if m >= EM_CUTOFF {
        return tail_em(m);
    }
    let mut s = 0.0;
    let mut n = m;
    while n < EM_CUTOFF {
        s += g(n);
        n += 1.0;
    }
    s + tail_em(EM_CUTOFF)
}

/// `∫₁ʸ s(x)/x dx` in closed form.
fn weighted_mass_below(y: f64) -> f64 {
    if y <= 4.0 {
        return 0.0;
    }
    let n = last_full_spike(y);
    let full = if n >= 2.0 { tail(2.0) - tail(n + 1.0) } else { 0.0 };
    let partial = match spike_index(y) {
        Some(m) => y.ln() - 2.0 * m.ln(),
        None => 0.0,
    };
    full + partial
}

/// `∫ₐᵇ s(x)/x dx`, accurate to well below any practical tolerance.
pub fn weighted_integral(a: f64, b: f64) -> f64 {
    (weighted_mass_below(b) - weighted_mass_below(a.max(1.0))).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_evaluation_matches_interval_membership() {
        assert_eq!(eval(9.5), 1.0); // 9.5 ∈ [3², 3²+1)
        assert_eq!(eval(10.0), 0.0);
        assert_eq!(eval(4.0), 1.0);
        assert_eq!(eval(4.999999), 1.0);
        assert_eq!(eval(5.0), 0.0);
        assert_eq!(eval(3.9999), 0.0);
        assert_eq!(eval(1.0), 0.0);
        assert_eq!(eval(2.0), 0.0);
    }

    #[test]
    fn one_sided_values_at_breakpoints() {
        assert_eq!(one_sided(9.0), (0.0, 1.0));
        assert_eq!(one_sided(10.0), (1.0, 0.0));
        assert_eq!(one_sided(9.5), (1.0, 1.0));
        assert_eq!(one_sided(11.0), (0.0, 0.0));
    }

    #[test]
    fn breakpoints_enumerate_spike_edges() {
        let bps = breakpoints_within(1.0, 30.0, 100);
        assert_eq!(bps, vec![4.0, 5.0, 9.0, 10.0, 16.0, 17.0, 25.0, 26.0]);
        let capped = breakpoints_within(1.0, 1e6, 5);
        assert_eq!(capped.len(), 5);
    }

    #[test]
    fn spike_counting_matches_direct_enumeration() {
        for &b in &[100.0f64, 999.0, 1000.0, 10_000.0, 54.6, 123456.7] {
            let mut direct = 0.0;
            let mut n = 2.0;
            while n * n < b {
                direct += (b.min(n * n + 1.0) - n * n).max(0.0);
                n += 1.0;
            }
            let fast = spike_mass_below(b);
            assert!(
                (fast - direct).abs() < 1e-9,
                "mass mismatch at b = {b}: fast {fast}, direct {direct}"
            );
        }
    }

    #[test]
    fn exceptional_measure_examples() {
        // heights: |1-0| = 1 > 0.5, |0-0| = 0 <= 0.5 → spikes only
        assert_eq!(level_measure(1.0, 0.0, 0.5, 1.0, 100.0), 8.0);
        assert_eq!(level_measure(1.0, 0.0, 0.5, 1.0, 1000.0), 30.0);
        assert_eq!(level_measure(1.0, 0.0, 0.5, 1.0, 10_000.0), 98.0);
    }

    #[test]
    fn tail_formula_matches_direct_summation() {
        let mut direct = 0.0;
        let mut n = 2.0;
        while n <= 100_000.0 {
            direct += g(n);
            n += 1.0;
        }
        let fast = tail(2.0) - tail(100_001.0);
        assert!(
            (fast - direct).abs() < 1e-13,
            "tail mismatch: fast {fast}, direct {direct}"
        );
    }

    #[test]
    fn weighted_integral_matches_direct_summation() {
        let b = 16f64.exp();
        let mut direct = 0.0;
        let mut n = 2.0;
        while n * n < b {
            let hi = b.min(n * n + 1.0);
            direct += hi.ln() - 2.0 * n.ln();
            n += 1.0;
        }
        let fast = weighted_integral(1.0, b);
        assert!(
            (fast - direct).abs() < 1e-12,
            "integral mismatch: fast {fast}, direct {direct}"
        );
    }

    #[test]
    fn weighted_integral_is_additive() {
        let (a, b, c) = (10.0, 1e6, 1e12);
        let whole = weighted_integral(a, c);
        let split = weighted_integral(a, b) + weighted_integral(b, c);
        assert!((whole - split).abs() < 1e-12);
    }
}
