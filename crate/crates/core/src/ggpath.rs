//! Reachable end rows of GG paths.
//!
//! `A(r, c, m)` is the set of rows of the last column where a GG path on the
//! `r x c` cylinder can end when it spends `m` extra horizontal pairs between
//! the first two columns. It equals `{ (c + 2m - 2i) mod r : 0 <= i <= c + 2m }`,
//! i.e. the residues of integers `t` with `|t| <= c + 2m` and `t = c (mod 2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materialize::{column_one_endings, GgParams, GgPathLayout};

/// Smallest `|t|` over integers `t = x (mod r)` with `t = c (mod 2)`.
///
/// `None` when no such `t` exists (even `r` and `x`, `c` of different parity).
pub fn min_reach_span(x: u64, r: u64, c: u64) -> Option<u64> {
    debug_assert!(r >= 1 && x < r);
    let same_parity = x % 2 == c % 2;
    if r.is_multiple_of(2) {
        same_parity.then(|| x.min(r - x))
    } else {
        // Unique residue mod 2r with the right parity.
        let u = if same_parity { x } else { x + r };
        Some(u.min(2 * r - u))
    }
}

/// `x` in `A(r, c, m)`, in constant time.
pub fn a_set_contains(x: u64, r: u64, c: u64, m: u64) -> bool {
    match min_reach_span(x, r, c) {
        Some(t) => t as u128 <= c as u128 + 2 * m as u128,
        None => false,
    }
}

/// Least `m >= 0` with `x` in `A(r, c, m)`, or `None` if there is none.
pub fn min_extra_pairs(x: u64, r: u64, c: u64) -> Option<u64> {
    min_reach_span(x, r, c).map(|t| t.saturating_sub(c) / 2)
}

/// Largest number of extra horizontal pairs a GG path can use.
pub fn max_extra_pairs(r: u64) -> u64 {
    (r - 1) / 2
}

/// Enumerates `A(r, c, m)` directly from its defining formula.
pub fn a_set_enumerate(r: u64, c: u64, m: u64) -> Vec<u64> {
    let span = c as u128 + 2 * m as u128;
    // The residues repeat with period r in i.
    let last = span.min(r as u128);
    let mut rows: Vec<u64> = (0..=last)
        .map(|i| (span as i128 - 2 * i as i128).rem_euclid(r as i128) as u64)
        .collect();
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// One GG path of the constructive family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GgPathRecord {
    pub params: GgParams,
    pub end_row: u64,
    pub horizontal_edges: u64,
}

/// Column-1 variants for `m` extra pairs with repeated end rows removed.
pub fn second_column_variants(r: u64, m: u64) -> Vec<(crate::Direction, u64)> {
    let mut out: Vec<(crate::Direction, u64)> = Vec::new();
    for (dir, e) in column_one_endings(r, m) {
        if !out.iter().any(|&(_, seen)| seen == e) {
            out.push((dir, e));
        }
    }
    out
}

const ENUMERATION_CELL_LIMIT: u64 = 100_000;

/// Lists the GG paths of the constructive family for every `m <= max_m`,
/// one per distinct `(m, end row)`.
pub fn enumerate_gg_paths(r: u64, c: u64, max_m: u64) -> Result<Vec<GgPathRecord>> {
    if r < 2 || c < 2 {
        return Err(Error::InvalidGgParams(format!("grid {r}x{c}")));
    }
    if r.saturating_mul(c) > ENUMERATION_CELL_LIMIT {
        return Err(Error::TooLarge {
            what: "cylinder cells",
            value: r.saturating_mul(c),
            limit: ENUMERATION_CELL_LIMIT,
        });
    }
    if max_m > max_extra_pairs(r) {
        return Err(Error::TooLarge {
            what: "extra pairs",
            value: max_m,
            limit: max_extra_pairs(r),
        });
    }
    let mut out = Vec::new();
    for m in 0..=max_m {
        let mut seen = vec![false; r as usize];
        for (first_col_dir, e) in second_column_variants(r, m) {
            for k in 0..=c - 2 {
                let params = GgParams {
                    m,
                    first_col_dir,
                    second_col_end: e,
                    k,
                };
                let layout = GgPathLayout::new(r, c, &params)?;
                let end = layout.cell(layout.len() - 1);
                debug_assert_eq!(end.col, c - 1);
                if !std::mem::replace(&mut seen[end.row as usize], true) {
                    out.push(GgPathRecord {
                        params,
                        end_row: end.row,
                        horizontal_edges: (c - 1) + 2 * m,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CylinderCoord;
    use crate::materialize::emit_gg_path;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_set(r: u64, c: u64, m: u64) -> BTreeSet<u64> {
        let span = (c + 2 * m) as i64;
        (0..=span)
            .map(|i| (span - 2 * i).rem_euclid(r as i64) as u64)
            .collect()
    }

    #[test]
    fn membership_examples() {
        for r in 3..=20 {
            for x in 0..r {
                let expect = x == 0 || x == 2 % r || x == r - 2;
                assert_eq!(a_set_contains(x, r, 2, 0), expect, "x={x} r={r}");
            }
        }
        for m in 0..10 {
            assert!(!a_set_contains(0, 4, 3, m));
        }
        assert_eq!(a_set_enumerate(12, 3, 0), vec![1, 3, 9, 11]);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(a_set_enumerate(15, 2, 1), vec![0, 2, 4, 11, 13]);
        let s = a_set_enumerate(9, 5, 1);
        assert!(s.contains(&7) && s.contains(&2));
        assert_eq!(a_set_enumerate(2, 3, 0), vec![1]);
    }

    #[test]
    fn min_extra_pairs_examples() {
        assert_eq!(min_extra_pairs(7, 9, 5), Some(1));
        assert_eq!(min_extra_pairs(3, 4, 3), Some(0));
        assert_eq!(min_extra_pairs(0, 4, 3), None);
        // Row 0 of a 5x3 cylinder needs one extra pair.
        assert_eq!(min_extra_pairs(0, 5, 3), Some(1));
    }

    #[test]
    fn membership_matches_formula_on_grid() {
        for r in 2..=40 {
            for c in 2..=25 {
                for m in 0..=r {
                    let brute = brute_set(r, c, m);
                    let fast: BTreeSet<u64> =
                        (0..r).filter(|&x| a_set_contains(x, r, c, m)).collect();
                    assert_eq!(fast, brute, "r={r} c={c} m={m}");
                    assert_eq!(
                        a_set_enumerate(r, c, m),
                        brute.iter().copied().collect::<Vec<_>>()
                    );
                }
                for x in 0..r {
                    let least = (0..=r).find(|&m| brute_set(r, c, m).contains(&x));
                    assert_eq!(min_extra_pairs(x, r, c), least, "x={x} r={r} c={c}");
                    if let Some(m) = least {
                        assert!(m <= max_extra_pairs(r));
                    }
                }
            }
        }
    }

    fn grid() -> impl Iterator<Item = (u64, u64, u64)> {
        (2..=25u64)
            .flat_map(|r| (2..=12u64).flat_map(move |c| (0..=(r - 1) / 2).map(move |m| (r, c, m))))
    }

    #[test]
    fn monotone_shift_column_and_row_growth() {
        for (r, c, m) in grid() {
            for x in 0..r {
                if !a_set_contains(x, r, c, m) {
                    continue;
                }
                assert!(a_set_contains(x, r, c, m + 1));
                assert!(a_set_contains((x + 2) % r, r, c, m + 1));
                assert!(a_set_contains((x + r - 2 % r) % r, r, c, m + 1));
                assert!(a_set_contains((x + 1) % r, r, c + 1, m));
                assert!(a_set_contains((x + r - 1) % r, r, c + 1, m));
                assert!(a_set_contains(x, r + 2, c, m + 1));
                assert!(a_set_contains(x + 2, r + 2, c, m + 1));
            }
        }
    }

    #[test]
    fn set_stops_growing_once_span_reaches_r_minus_one() {
        for (r, c, _) in grid() {
            let m_sat = (r - 1).saturating_sub(c).div_ceil(2);
            let full = a_set_enumerate(r, c, m_sat);
            for m in m_sat..=m_sat + r {
                assert_eq!(a_set_enumerate(r, c, m), full, "r={r} c={c} m={m}");
            }
        }
    }

    #[test]
    fn odd_cylinders_can_grow_one_step_past_c_plus_2m_below_r() {
        // c + 2m = r - 2 leaves row 0 (for odd c) unreachable.
        assert_eq!(a_set_enumerate(5, 3, 0), vec![1, 2, 3, 4]);
        assert_eq!(a_set_enumerate(5, 3, 1), vec![0, 1, 2, 3, 4]);
        assert_eq!(a_set_enumerate(7, 5, 0), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(a_set_enumerate(7, 5, 1), (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn new_rows_are_plus_minus_span_and_parity_holds() {
        for (r, c, m) in grid() {
            let span = (c + 2 * m) as i64;
            let plus = span.rem_euclid(r as i64) as u64;
            let minus = (-span).rem_euclid(r as i64) as u64;
            for x in 0..r {
                if !a_set_contains(x, r, c, m) {
                    continue;
                }
                if m > 0 && !a_set_contains(x, r, c, m - 1) {
                    assert!(x == plus || x == minus, "r={r} c={c} m={m} x={x}");
                }
                if r % 2 == 0 {
                    assert_eq!(x % 2, c % 2);
                }
            }
        }
    }

    #[test]
    fn enumerate_gg_paths_examples() {
        let recs = enumerate_gg_paths(8, 2, 1).unwrap();
        let rows = |m: u64| -> BTreeSet<u64> {
            recs.iter()
                .filter(|p| p.params.m == m)
                .map(|p| p.end_row)
                .collect()
        };
        assert_eq!(rows(0), BTreeSet::from([0, 2, 6]));
        assert_eq!(rows(1), BTreeSet::from([4]));

        let recs = enumerate_gg_paths(3, 2, 0).unwrap();
        let ends: BTreeSet<u64> = recs.iter().map(|p| p.end_row).collect();
        assert_eq!(ends, BTreeSet::from([0, 1, 2]));

        assert!(enumerate_gg_paths(5, 2, 3).is_err());
        assert!(enumerate_gg_paths(1000, 1000, 0).is_err());
    }

    /// Walks every enumerated path cell by cell and compares the reachable
    /// end rows with the formula.
    fn constructive_agreement(r: u64, c: u64) {
        let max_m = max_extra_pairs(r);
        let recs = enumerate_gg_paths(r, c, max_m).unwrap();
        let mut reach = BTreeSet::new();
        for m in 0..=max_m {
            for rec in recs.iter().filter(|p| p.params.m == m) {
                let cells: Vec<CylinderCoord> = emit_gg_path(r, c, &rec.params).unwrap().collect();
                let distinct: BTreeSet<_> = cells.iter().map(|p| (p.row, p.col)).collect();
                assert_eq!(distinct.len() as u64, r * c);
                let horizontal = cells.windows(2).filter(|w| w[0].col != w[1].col).count() as u64;
                assert_eq!(horizontal, rec.horizontal_edges);
                let last = cells.last().unwrap();
                assert_eq!((last.row, last.col), (rec.end_row, c - 1));
                reach.insert(last.row);
            }
            let formula: BTreeSet<u64> = a_set_enumerate(r, c, m).into_iter().collect();
            assert_eq!(reach, formula, "r={r} c={c} m={m}");
        }
    }

    #[test]
    fn constructive_agreement_on_grid() {
        constructive_agreement(15, 4);
        for r in 2..=25 {
            for c in 2..=12 {
                constructive_agreement(r, c);
            }
        }
    }

    proptest! {
        #[test]
        fn constant_time_membership_for_huge_parameters(
            r in 2u64..(1 << 40), c in 2u64..(1 << 40), m in 0u64..(1 << 40), x_seed: u64
        ) {
            let x = x_seed % r;
            let t = min_reach_span(x, r, c);
            let inside = a_set_contains(x, r, c, m);
            match t {
                None => prop_assert!(!inside && r % 2 == 0),
                Some(t) => {
                    prop_assert!(t <= r);
                    prop_assert_eq!((t + c) % 2, 0);
                    prop_assert!(t % r == x || r - t % r == x || (t % r == 0 && x == 0));
                    prop_assert_eq!(inside, t <= c + 2 * m);
                }
            }
        }

        #[test]
        fn min_extra_pairs_is_least(r in 2u64..300, c in 2u64..300, x_seed: u64) {
            let x = x_seed % r;
            if let Some(m) = min_extra_pairs(x, r, c) {
                prop_assert!(a_set_contains(x, r, c, m));
                prop_assert!(m == 0 || !a_set_contains(x, r, c, m - 1));
                prop_assert!(m <= max_extra_pairs(r));
            } else {
                prop_assert!(!a_set_contains(x, r, c, r));
            }
        }
    }
}
