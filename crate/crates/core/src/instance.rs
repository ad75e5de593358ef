//! Two-stripe instances and their cylinder decomposition.
//!
//! The cheap stripe `a1` splits the `n` cities into `g1 = gcd(n, a1)` cycles
//! of length `r = n / g1`. Laid out as columns (column `j` is the cycle
//! through `j * a2`), every vertex gets a coordinate `(row, col)` with label
//! `row * a1 + col * a2 (mod n)`: vertical moves are `±a1`, horizontal moves
//! are `±a2`.

use serde::{Deserialize, Serialize};

use crate::congruence::{gcd, solve_congruence};
use crate::error::{Error, Result};

/// Exclusive upper bound on the number of cities.
pub const MAX_N: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoStripeInstance {
    n: u64,
    a1: u64,
    a2: u64,
    cost1: u64,
    cost2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub g1: u64,
    pub g2: u64,
    /// Rows, `n / g1`.
    pub r: u64,
    /// Columns, `g1`.
    pub c: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CylinderCoord {
    pub row: u64,
    pub col: u64,
}

impl CylinderCoord {
    pub const fn new(row: u64, col: u64) -> Self {
        Self { row, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Triviality {
    /// `g2 > 1`: the graph is disconnected.
    Infeasible,
    /// `g1 = 1`: the cheap stripe alone is a Hamiltonian cycle.
    SingleStripe,
    /// Both stripes cost the same; every tour has cost `n * cost1`.
    EqualCosts,
    NonTrivial,
}

impl TwoStripeInstance {
    /// Builds an instance from two `(stripe, cost)` pairs.
    ///
    /// Stripes are relabeled so that `cost1 <= cost2`; on a cost tie the
    /// shorter stripe becomes `a1`.
    pub fn new(n: u64, s1: u64, c1: u64, s2: u64, c2: u64) -> Result<Self> {
        if !(4..MAX_N).contains(&n) {
            return Err(Error::CityCountOutOfRange(n));
        }
        for stripe in [s1, s2] {
            if stripe == 0 || stripe > n / 2 {
                return Err(Error::StripeOutOfRange { n, stripe });
            }
        }
        if s1 == s2 {
            return Err(Error::EqualStripes(s1));
        }
        let swap = c2 < c1 || (c1 == c2 && s2 < s1);
        let (a1, cost1, a2, cost2) = if swap {
            (s2, c2, s1, c1)
        } else {
            (s1, c1, s2, c2)
        };
        Ok(Self {
            n,
            a1,
            a2,
            cost1,
            cost2,
        })
    }

    /// Unit-cost instance: `a1` costs 0, `a2` costs 1.
    pub fn unit(n: u64, a1: u64, a2: u64) -> Result<Self> {
        Self::new(n, a1, 0, a2, 1)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a1(&self) -> u64 {
        self.a1
    }

    pub fn a2(&self) -> u64 {
        self.a2
    }

    pub fn cost1(&self) -> u64 {
        self.cost1
    }

    pub fn cost2(&self) -> u64 {
        self.cost2
    }

    /// Same stripes with both costs multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            cost1: self.cost1 * factor,
            cost2: self.cost2 * factor,
            ..*self
        }
    }

    pub fn decompose(&self) -> Decomposition {
        let g1 = gcd(self.n, self.a1);
        let g2 = gcd(g1, self.a2);
        Decomposition {
            g1,
            g2,
            r: self.n / g1,
            c: g1,
        }
    }

    pub fn classify(&self) -> Triviality {
        let d = self.decompose();
        if d.g2 > 1 {
            Triviality::Infeasible
        } else if d.g1 == 1 {
            Triviality::SingleStripe
        } else if self.cost1 == self.cost2 {
            Triviality::EqualCosts
        } else {
            Triviality::NonTrivial
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.decompose().g2 == 1
    }

    /// `(row * a1 + col * a2) mod n`.
    pub fn label_of(&self, coord: CylinderCoord) -> u64 {
        let n = self.n as u128;
        ((coord.row as u128 * self.a1 as u128 + coord.col as u128 * self.a2 as u128) % n) as u64
    }

    /// Checked variant of [`label_of`](Self::label_of).
    pub fn try_label_of(&self, coord: CylinderCoord) -> Result<u64> {
        let d = self.decompose();
        if coord.row >= d.r || coord.col >= d.c {
            return Err(Error::CoordOutOfRange {
                row: coord.row,
                col: coord.col,
                r: d.r,
                c: d.c,
            });
        }
        Ok(self.label_of(coord))
    }

    /// Inverse of [`label_of`](Self::label_of); requires `g2 = 1`.
    pub fn coord_of(&self, label: u64) -> Result<CylinderCoord> {
        let d = self.decompose();
        if d.g2 != 1 {
            return Err(Error::Infeasible { g2: d.g2 });
        }
        if label >= self.n {
            return Err(Error::LabelOutOfRange { n: self.n, label });
        }
        // Column: label = col * a2 (mod g1), unique since gcd(a2, g1) = 1.
        let col = solve_congruence(self.a2, label as i128, d.g1)
            .expect("gcd(a2, g1) = 1")
            .base;
        let rest = label as i128 - (col as u128 * self.a2 as u128 % self.n as u128) as i128;
        let row = solve_congruence(self.a1, rest, self.n)
            .expect("rest is a multiple of g1")
            .base;
        Ok(CylinderCoord { row, col })
    }

    /// Row `x` of the vertex `-a2`, which sits in the last column: the
    /// unique `x` in `[0, r)` with `x * a1 = -g1 * a2 (mod n)`.
    pub fn row_of_minus_a2(&self) -> Result<u64> {
        let d = self.decompose();
        if d.g2 != 1 {
            return Err(Error::Infeasible { g2: d.g2 });
        }
        if d.g1 == 1 {
            return Err(Error::SingleColumn);
        }
        let rhs = -((d.g1 as u128 * self.a2 as u128 % self.n as u128) as i128);
        let sol = solve_congruence(self.a1, rhs, self.n).expect("g1 divides g1 * a2");
        debug_assert_eq!(sol.period, d.r);
        Ok(sol.base)
    }
}
