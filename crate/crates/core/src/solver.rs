//! Optimal tour cost in `O(log^2 n)` arithmetic.
//!
//! With `x` the row of `-a2` on the cylinder, the optimum uses `h*` expensive
//! edges where, for `m*` the least integer `m >= -c/2` with
//! `x = ±(c + 2m) (mod r)`:
//!
//! - `h* = c` if `m* <= 0`,
//! - `h* = c + 2m*` if `0 < 2m* < c - 2`,
//! - `h* = 2c - 2` otherwise, including when `m*` does not exist.

use serde::{Deserialize, Serialize};

use crate::congruence::{smallest_solution_at_least, solve_congruence};
use crate::error::Result;
use crate::instance::{Decomposition, Triviality, TwoStripeInstance};
use crate::materialize::{gg_tour_params, GgParams};

/// Which congruence produced `m*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `x = c + 2m (mod r)`.
    Plus,
    /// `x = -(c + 2m) (mod r)`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MStarResult {
    /// `m*`, possibly negative.
    pub value: Option<i64>,
    pub branch: Option<Branch>,
}

impl MStarResult {
    const ABSENT: Self = Self {
        value: None,
        branch: None,
    };
}

/// Least integer `m >= ceil(-c/2)` with `x = ±(c + 2m) (mod r)`.
pub fn compute_m_star(x: u64, r: u64, c: u64) -> MStarResult {
    let lower = -((c / 2) as i128);
    let (x, c) = (x as i128, c as i128);
    let plus = smallest_solution_at_least(2, x - c, r, lower);
    let minus = smallest_solution_at_least(2, -x - c, r, lower);
    let pick = match (plus, minus) {
        (None, None) => return MStarResult::ABSENT,
        (Some(p), None) => (p, Branch::Plus),
        (None, Some(q)) => (q, Branch::Minus),
        (Some(p), Some(q)) if p <= q => (p, Branch::Plus),
        (_, Some(q)) => (q, Branch::Minus),
    };
    MStarResult {
        value: Some(pick.0 as i64),
        branch: Some(pick.1),
    }
}

/// How to build an optimal tour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TourDescriptor {
    Infeasible,
    /// `g1 = 1`: follow `a1` around the circle.
    AllCheapCycle,
    /// Both stripes cost the same; carries the tour the general case picks.
    EqualCostAny {
        inner: Box<TourDescriptor>,
    },
    /// GG path to the row of `-a2`, closed by one `+a2` edge.
    GgPlusWrap {
        params: GgParams,
        m_eff: u64,
    },
    UpperBoundSerpentine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub triviality: Triviality,
    pub decomposition: Decomposition,
    /// Row of `-a2`; only for instances with `g1 > 1`.
    pub x: Option<u64>,
    pub m_star: Option<MStarResult>,
    /// Expensive edges in an optimal tour; `None` when infeasible.
    pub h_star: Option<u64>,
    pub total_cost: Option<u128>,
    pub descriptor: TourDescriptor,
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        self.triviality != Triviality::Infeasible
    }
}

/// `h*` from `m*` on an `r x c` cylinder with `c >= 2`.
fn h_from_m_star(c: u64, m_star: Option<i64>) -> u64 {
    match m_star {
        Some(m) if m <= 0 => c,
        Some(m) if (2 * m as i128) < c as i128 - 2 => c + 2 * m as u64,
        _ => 2 * c - 2,
    }
}

fn cost_of(inst: &TwoStripeInstance, h: u64) -> u128 {
    (inst.n() - h) as u128 * inst.cost1() as u128 + h as u128 * inst.cost2() as u128
}

struct Core {
    x: u64,
    m_star: MStarResult,
    h: u64,
}

fn general_case(inst: &TwoStripeInstance, d: &Decomposition) -> Core {
    let x = inst
        .row_of_minus_a2()
        .expect("feasible instance with g1 > 1 has a row for -a2");
    let m_star = compute_m_star(x, d.r, d.c);
    Core {
        x,
        m_star,
        h: h_from_m_star(d.c, m_star.value),
    }
}

fn general_descriptor(core: &Core, d: &Decomposition) -> Result<TourDescriptor> {
    match core.m_star.value {
        Some(m) if (2 * m as i128) < d.c as i128 - 2 => {
            let m_eff = m.max(0) as u64;
            let params = gg_tour_params(core.x, d.r, d.c, m_eff)?;
            Ok(TourDescriptor::GgPlusWrap { params, m_eff })
        }
        _ => Ok(TourDescriptor::UpperBoundSerpentine),
    }
}

/// Solves an instance exactly, including a tour descriptor.
pub fn solve(inst: &TwoStripeInstance) -> SolveResult {
    let d = inst.decompose();
    let triviality = inst.classify();
    let mut out = SolveResult {
        triviality,
        decomposition: d,
        x: None,
        m_star: None,
        h_star: None,
        total_cost: None,
        descriptor: TourDescriptor::Infeasible,
    };
    match triviality {
        Triviality::Infeasible => {}
        Triviality::SingleStripe => {
            out.h_star = Some(0);
            out.total_cost = Some(cost_of(inst, 0));
            out.descriptor = TourDescriptor::AllCheapCycle;
        }
        Triviality::EqualCosts | Triviality::NonTrivial => {
            let core = general_case(inst, &d);
            let descriptor = general_descriptor(&core, &d)
                .expect("GG parameters exist for the minimal extra-pair count");
            out.x = Some(core.x);
            out.m_star = Some(core.m_star);
            out.h_star = Some(core.h);
            out.total_cost = Some(cost_of(inst, core.h));
            out.descriptor = if triviality == Triviality::EqualCosts {
                TourDescriptor::EqualCostAny {
                    inner: Box::new(descriptor),
                }
            } else {
                descriptor
            };
        }
    }
    out
}

/// `(h*, total cost)` without building a tour descriptor, or `None` when
/// the instance is infeasible.
pub fn solve_cost(inst: &TwoStripeInstance) -> Option<(u64, u128)> {
    let d = inst.decompose();
    if d.g2 != 1 {
        return None;
    }
    let h = if d.g1 == 1 {
        0
    } else {
        general_case(inst, &d).h
    };
    Some((h, cost_of(inst, h)))
}

/// Is there a tour of cost at most `budget`?
pub fn decide(inst: &TwoStripeInstance, budget: u128) -> bool {
    solve_cost(inst).is_some_and(|(_, cost)| cost <= budget)
}

/// Independent `h*` from the column-sweep congruence
/// `(2y - g1) a1 + g1 a2 = 0 (mod n)` over `y` in `[0, r)`.
///
/// `None` unless the instance is feasible with `g1 > 1`.
pub fn solve_via_gg_formula(inst: &TwoStripeInstance) -> Option<u64> {
    let d = inst.decompose();
    if d.g2 != 1 || d.g1 == 1 {
        return None;
    }
    let (n, a1, a2, g1) = (inst.n(), inst.a1() as i128, inst.a2() as i128, d.g1 as i128);
    let two_a1 = (2 * inst.a1() as u128 % n as u128) as u64;
    let Some(sol) = solve_congruence(two_a1, g1 * a1 - g1 * a2, n) else {
        return Some(2 * d.c - 2);
    };
    let y1 = sol.base as i128;
    let y2 = sol.largest_at_most(d.r as i128 - 1);
    if y1 <= g1 {
        return Some(d.c);
    }
    let m = (y1 - g1).min(d.r as i128 - y2);
    Some((d.c as i128 + 2 * m).min(2 * d.c as i128 - 2) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggpath::min_extra_pairs;
    use crate::oracle::held_karp;
    use proptest::prelude::*;

    fn unit(n: u64, a1: u64, a2: u64) -> TwoStripeInstance {
        TwoStripeInstance::unit(n, a1, a2).unwrap()
    }

    /// Least `m` in a window satisfying either congruence, by enumeration.
    fn brute_m_star(x: u64, r: u64, c: u64) -> Option<(i64, Branch)> {
        let lower = -((c / 2) as i64);
        (lower..lower + 2 * r as i64).find_map(|m| {
            let t = c as i64 + 2 * m;
            if t.rem_euclid(r as i64) == x as i64 {
                Some((m, Branch::Plus))
            } else if (-t).rem_euclid(r as i64) == x as i64 {
                Some((m, Branch::Minus))
            } else {
                None
            }
        })
    }

    #[test]
    fn m_star_examples() {
        let m = compute_m_star(3, 4, 3);
        assert_eq!((m.value, m.branch), (Some(-1), Some(Branch::Minus)));
        assert_eq!(brute_m_star(3, 4, 3), Some((-1, Branch::Minus)));

        assert_eq!(compute_m_star(0, 4, 3), MStarResult::ABSENT);
        assert_eq!(brute_m_star(0, 4, 3), None);

        let m = compute_m_star(7, 9, 5);
        assert_eq!((m.value, m.branch), (Some(1), Some(Branch::Plus)));
        assert_eq!(brute_m_star(7, 9, 5), Some((1, Branch::Plus)));
    }

    #[test]
    fn m_star_matches_enumeration() {
        for r in 2..=60 {
            for c in 2..=40 {
                for x in 0..r {
                    let got = compute_m_star(x, r, c);
                    let want = brute_m_star(x, r, c);
                    assert_eq!(got.value.zip(got.branch), want, "x={x} r={r} c={c}");
                }
            }
        }
    }

    #[test]
    fn solve_examples_against_held_karp() {
        for (n, a1, a2, h) in [(12, 3, 1, 3), (12, 3, 2, 4), (12, 3, 4, 4), (6, 2, 3, 2)] {
            let inst = unit(n, a1, a2);
            let res = solve(&inst);
            assert_eq!(res.h_star, Some(h), "n={n} a1={a1} a2={a2}");
            assert_eq!(res.total_cost, Some(h as u128));
            assert_eq!(held_karp(&inst).unwrap().map(|t| t.cost), Some(h as u128));
        }
    }

    #[test]
    fn middle_case_instance() {
        let inst = unit(45, 5, 2);
        let res = solve(&inst);
        assert_eq!(res.x, Some(7));
        assert_eq!(res.m_star.unwrap().value, Some(1));
        assert_eq!(res.h_star, Some(7));
        assert_eq!(res.total_cost, Some(7));
        assert!(matches!(
            res.descriptor,
            TourDescriptor::GgPlusWrap { m_eff: 1, .. }
        ));
        assert_eq!(solve_via_gg_formula(&inst), Some(7));
    }

    #[test]
    fn trivial_cases() {
        let inf = unit(12, 3, 6);
        let res = solve(&inf);
        assert!(!res.is_feasible());
        assert_eq!((res.h_star, res.total_cost), (None, None));
        assert_eq!(res.descriptor, TourDescriptor::Infeasible);

        let single = TwoStripeInstance::new(7, 2, 5, 3, 9).unwrap();
        let res = solve(&single);
        assert_eq!(res.triviality, Triviality::SingleStripe);
        assert_eq!(res.total_cost, Some(35));
        assert_eq!(res.descriptor, TourDescriptor::AllCheapCycle);

        let eq = TwoStripeInstance::new(12, 3, 4, 2, 4).unwrap();
        let res = solve(&eq);
        assert_eq!(res.triviality, Triviality::EqualCosts);
        assert_eq!(res.total_cost, Some(48));
        assert!(matches!(
            res.descriptor,
            TourDescriptor::EqualCostAny { .. }
        ));
    }

    #[test]
    fn decide_examples() {
        assert!(decide(&unit(12, 3, 1), 3));
        assert!(!decide(&unit(12, 3, 2), 3));
        for budget in [0, 1, 100, u128::MAX] {
            assert!(!decide(&unit(12, 3, 6), budget));
        }
    }

    #[test]
    fn gg_formula_examples() {
        assert_eq!(solve_via_gg_formula(&unit(12, 3, 2)), Some(4));
        assert_eq!(solve_via_gg_formula(&unit(12, 3, 1)), Some(3));
        assert_eq!(solve_via_gg_formula(&unit(12, 3, 6)), None);
        assert_eq!(solve_via_gg_formula(&unit(7, 2, 3)), None);
    }

    #[test]
    fn huge_costs_do_not_overflow() {
        let inst = TwoStripeInstance::new((1 << 62) - 1, 3, u64::MAX - 1, 7, u64::MAX).unwrap();
        let (h, cost) = solve_cost(&inst).unwrap();
        let n = (1u128 << 62) - 1;
        assert_eq!(
            cost,
            (n - h as u128) * (u64::MAX - 1) as u128 + h as u128 * u64::MAX as u128
        );
    }

    fn feasible_instance() -> impl Strategy<Value = TwoStripeInstance> {
        (4u64..5000, any::<u64>(), any::<u64>()).prop_filter_map(
            "needs a feasible instance",
            |(n, s, t)| {
                let a1 = 1 + s % (n / 2);
                let a2 = 1 + t % (n / 2);
                TwoStripeInstance::unit(n, a1, a2)
                    .ok()
                    .filter(|i| i.is_feasible())
            },
        )
    }

    proptest! {
        #[test]
        fn m_star_invariants(r in 2u64..1_000_000, c in 2u64..1_000_000, x_seed: u64) {
            let x = x_seed % r;
            let res = compute_m_star(x, r, c);
            if let (Some(m), Some(b)) = (res.value, res.branch) {
                prop_assert!(m >= -((c / 2) as i64));
                let t = c as i128 + 2 * m as i128;
                let hit = match b {
                    Branch::Plus => t.rem_euclid(r as i128),
                    Branch::Minus => (-t).rem_euclid(r as i128),
                };
                prop_assert_eq!(hit, x as i128);
                // One step lower satisfies neither congruence.
                if m > -((c / 2) as i64) {
                    let t = t - 2;
                    prop_assert!(t.rem_euclid(r as i128) != x as i128);
                    prop_assert!((-t).rem_euclid(r as i128) != x as i128);
                }
            } else {
                prop_assert!(res.branch.is_none());
                prop_assert!(r % 2 == 0 && x % 2 != c % 2);
            }
        }

        #[test]
        fn h_star_matches_min_extra_pairs(inst in feasible_instance()) {
            let res = solve(&inst);
            let d = res.decomposition;
            if d.g1 > 1 {
                let h = res.h_star.unwrap();
                let expect = match min_extra_pairs(res.x.unwrap(), d.r, d.c) {
                    Some(mu) => (d.c + 2 * mu).min(2 * d.c - 2),
                    None => 2 * d.c - 2,
                };
                prop_assert_eq!(h, expect);
                prop_assert!(d.c <= h && h <= 2 * d.c - 2);
                prop_assert_eq!(solve_via_gg_formula(&inst), Some(h));
                prop_assert_eq!(solve_cost(&inst), Some((h, h as u128)));
            }
        }

        #[test]
        fn scaling_covariance(inst in feasible_instance(), k in 1u64..1_000_000) {
            let a = solve(&inst);
            let b = solve(&inst.scaled(k));
            prop_assert_eq!(a.h_star, b.h_star);
            prop_assert_eq!(&a.descriptor, &b.descriptor);
            prop_assert_eq!(a.total_cost.map(|t| t * k as u128), b.total_cost);
        }
    }
}
