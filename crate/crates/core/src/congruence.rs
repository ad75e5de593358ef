//! Exact integer arithmetic for linear congruences.
//!
//! All intermediate products are carried in 128-bit integers, so every
//! modulus representable as a `u64` is handled without overflow.

use serde::{Deserialize, Serialize};

/// Greatest common divisor. `gcd(a, 0) = a`; `gcd(0, 0)` is `0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Result of the extended Euclidean algorithm: `s * a + t * b = gcd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bezout {
    pub gcd: i128,
    pub s: i128,
    pub t: i128,
}

/// Extended Euclid on signed inputs. The returned gcd is nonnegative.
pub fn ext_gcd(a: i128, b: i128) -> Bezout {
    ext_gcd_counted(a, b).0
}

/// Like [`ext_gcd`], also reporting the number of division steps taken.
pub fn ext_gcd_counted(a: i128, b: i128) -> (Bezout, u32) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    let mut steps = 0u32;
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
        steps += 1;
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    (
        Bezout {
            gcd: old_r,
            s: old_s,
            t: old_t,
        },
        steps,
    )
}

/// Number of division steps Euclid's algorithm needs on `(a, b)`.
pub fn euclid_steps(a: u64, b: u64) -> u32 {
    ext_gcd_counted(a as i128, b as i128).1
}

/// Solution set `{ base + k * period }` of a solvable congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSolution {
    /// Least nonnegative solution, `0 <= base < period`.
    pub base: u64,
    /// `n / gcd(a, n)`.
    pub period: u64,
}

impl CongruenceSolution {
    pub fn contains(&self, x: i128) -> bool {
        (x - self.base as i128).rem_euclid(self.period as i128) == 0
    }

    /// Smallest solution `>= lower`.
    pub fn smallest_at_least(&self, lower: i128) -> i128 {
        let base = self.base as i128;
        let period = self.period as i128;
        base + period * div_ceil(lower - base, period)
    }

    /// Largest solution `<= upper`.
    pub fn largest_at_most(&self, upper: i128) -> i128 {
        let base = self.base as i128;
        let period = self.period as i128;
        base + period * div_floor(upper - base, period)
    }
}

/// Solves `a * x = b (mod n)`. `b` may be negative; it is reduced first.
///
/// Returns `None` when `gcd(a, n)` does not divide `b`.
pub fn solve_congruence(a: u64, b: i128, n: u64) -> Option<CongruenceSolution> {
    assert!(n >= 1, "modulus must be positive");
    let a = a % n;
    let b = b.rem_euclid(n as i128) as u128;
    let g = gcd(a, n);
    // gcd(0, n) = n: every x solves 0 = 0 (mod n).
    if !b.is_multiple_of(g as u128) {
        return None;
    }
    let period = n / g;
    if period == 1 {
        return Some(CongruenceSolution { base: 0, period });
    }
    let a_red = (a / g) as i128;
    let b_red = b / g as u128;
    let inv = ext_gcd(a_red, period as i128).s.rem_euclid(period as i128) as u128;
    let base = (b_red % period as u128) * inv % period as u128;
    Some(CongruenceSolution {
        base: base as u64,
        period,
    })
}

/// Smallest integer `x >= lower` with `a * x = b (mod n)`.
pub fn smallest_solution_at_least(a: u64, b: i128, n: u64, lower: i128) -> Option<i128> {
    solve_congruence(a, b, n).map(|sol| sol.smallest_at_least(lower))
}

pub fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}
