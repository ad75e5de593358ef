//! Brute-force ground truth.
//!
//! Nothing here uses the closed-form theory: [`held_karp`] is the textbook
//! bitmask dynamic program over the two-stripe graph and the cylinder search
//! enumerates Hamiltonian paths cell by cell. Both exist to check the fast
//! solver.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ggpath::{a_set_contains, max_extra_pairs, min_extra_pairs};
use crate::instance::{CylinderCoord, TwoStripeInstance};

pub const HELD_KARP_MAX_N: u64 = 18;

/// An optimal Hamiltonian cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTour {
    pub cost: u128,
    /// Starts at 0, implicitly closed.
    pub tour: Vec<u64>,
}

/// Minimum-cost Hamiltonian cycle using only the two stripes, or `None` if
/// there is none.
pub fn held_karp(inst: &TwoStripeInstance) -> Result<Option<ExactTour>> {
    let n = inst.n();
    if n > HELD_KARP_MAX_N {
        return Err(Error::TooLarge {
            what: "Held-Karp city count",
            value: n,
            limit: HELD_KARP_MAX_N,
        });
    }
    let n = n as usize;
    let edges: Vec<Vec<(usize, u128)>> = (0..n)
        .map(|v| {
            let mut out: Vec<(usize, u128)> = Vec::with_capacity(4);
            for (a, w) in [(inst.a1(), inst.cost1()), (inst.a2(), inst.cost2())] {
                let a = a as usize;
                for u in [(v + a) % n, (v + n - a) % n] {
                    if !out.iter().any(|&(x, _)| x == u) {
                        out.push((u, w as u128));
                    }
                }
            }
            out
        })
        .collect();

    // dp[mask * n + v]: cheapest path from 0 through `mask` (bits are
    // vertices 1..n) ending at v.
    const INF: u128 = u128::MAX;
    let full = (1usize << (n - 1)) - 1;
    let bit = |v: usize| 1usize << (v - 1);
    let mut dp = vec![INF; (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    for &(u, w) in &edges[0] {
        dp[bit(u) * n + u] = w;
        parent[bit(u) * n + u] = 0;
    }
    for mask in 1..=full {
        for v in 1..n {
            if mask & bit(v) == 0 {
                continue;
            }
            let here = dp[mask * n + v];
            if here == INF {
                continue;
            }
            for &(u, w) in &edges[v] {
                if u == 0 || mask & bit(u) != 0 {
                    continue;
                }
                let next = (mask | bit(u)) * n + u;
                let cand = here.saturating_add(w);
                if cand < dp[next] {
                    dp[next] = cand;
                    parent[next] = v as u8;
                }
            }
        }
    }
    let mut best: Option<(u128, usize)> = None;
    for &(v, w) in &edges[0] {
        let here = dp[full * n + v];
        if here == INF {
            continue;
        }
        let total = here.saturating_add(w);
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, v));
        }
    }
    let Some((cost, last)) = best else {
        return Ok(None);
    };
    let mut tour = Vec::with_capacity(n);
    let (mut mask, mut v) = (full, last);
    while v != 0 {
        tour.push(v as u64);
        let p = parent[mask * n + v] as usize;
        mask &= !bit(v);
        v = p;
    }
    tour.push(0);
    tour.reverse();
    Ok(Some(ExactTour { cost, tour }))
}

/// Largest grid the exhaustive cylinder search accepts.
pub const CYLINDER_CELL_LIMIT: u64 = 64;
/// Largest grid [`cylinder_reachability`] accepts.
pub const REACHABILITY_CELL_LIMIT: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Connectivity, degree and last-column pruning. Off gives a plain
    /// visited-set backtracking search.
    pub prune: bool,
    /// Cap on horizontal edges.
    pub budget: Option<u64>,
    /// Only paths ending at this row of the last column.
    pub target_row: Option<u64>,
    /// Abort after this many search nodes.
    pub node_limit: Option<u64>,
}

/// A complete Hamiltonian path from `(0, 0)` ending in the last column.
#[derive(Debug)]
pub struct Leaf<'a> {
    pub end_row: u64,
    pub horizontal: u64,
    /// Crossings of the cut between columns `j` and `j + 1`.
    pub cuts: &'a [u64],
    /// Cell indices `col * r + row` in path order.
    pub path: &'a [u8],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// `false` if the node limit or the visitor stopped the search early.
    pub complete: bool,
}

struct Search<'v, F> {
    r: usize,
    c: usize,
    cells: usize,
    nbr: Vec<u64>,
    last_col: u64,
    opts: SearchOptions,
    visited: u64,
    cuts: Vec<u64>,
    h: u64,
    path: Vec<u8>,
    nodes: u64,
    stopped: bool,
    visit: &'v mut F,
}

impl<F> Search<'_, F>
where
    F: FnMut(&Leaf) -> ControlFlow<()>,
{
    fn col(&self, i: usize) -> usize {
        i / self.r
    }

    fn dead_end(&self, cur: usize) -> bool {
        let unvisited = !self.visited & ((1u64 << self.cells) - 1);
        if unvisited & self.last_col == 0 {
            return true;
        }
        if let Some(t) = self.opts.target_row {
            if unvisited & (1 << ((self.c - 1) * self.r + t as usize)) == 0 {
                return true;
            }
        }
        // Unvisited cells must hang together off the current cell.
        let mut reached = self.nbr[cur] & unvisited;
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.nbr[i];
            }
            next &= unvisited & !reached;
            reached |= next;
            frontier = next;
        }
        if reached != unvisited {
            return true;
        }
        // A cell with one usable neighbor can only be the endpoint.
        let usable = unvisited | (1 << cur);
        let mut ends = 0;
        let mut u = unvisited;
        while u != 0 {
            let i = u.trailing_zeros() as usize;
            u &= u - 1;
            if (self.nbr[i] & usable).count_ones() <= 1 {
                ends += 1;
                let ok_col = self.col(i) == self.c - 1;
                let ok_row = self
                    .opts
                    .target_row
                    .is_none_or(|t| i % self.r == t as usize);
                if ends > 1 || !ok_col || !ok_row {
                    return true;
                }
            }
        }
        false
    }

    fn dfs(&mut self, cur: usize, count: usize) {
        self.nodes += 1;
        if self.opts.node_limit.is_some_and(|lim| self.nodes > lim) {
            self.stopped = true;
            return;
        }
        let col = self.col(cur);
        if count == self.cells {
            let row = (cur % self.r) as u64;
            if col == self.c - 1 && self.opts.target_row.is_none_or(|t| t == row) {
                let leaf = Leaf {
                    end_row: row,
                    horizontal: self.h,
                    cuts: &self.cuts,
                    path: &self.path,
                };
                if (self.visit)(&leaf).is_break() {
                    self.stopped = true;
                }
            }
            return;
        }
        if let Some(b) = self.opts.budget {
            if self.h + (self.c - 1 - col) as u64 > b {
                return;
            }
        }
        if self.opts.prune && self.dead_end(cur) {
            return;
        }
        let mut moves = self.nbr[cur] & !self.visited;
        while moves != 0 && !self.stopped {
            let next = moves.trailing_zeros() as usize;
            moves &= moves - 1;
            let next_col = self.col(next);
            let horizontal = next_col != col;
            if horizontal {
                self.h += 1;
                self.cuts[col.min(next_col)] += 1;
            }
            self.visited |= 1 << next;
            self.path.push(next as u8);
            self.dfs(next, count + 1);
            self.path.pop();
            self.visited &= !(1 << next);
            if horizontal {
                self.h -= 1;
                self.cuts[col.min(next_col)] -= 1;
            }
        }
    }
}

/// Enumerates Hamiltonian paths of the `r x c` cylinder that start at
/// `(0, 0)` and end in column `c - 1`, calling `visit` on each.
pub fn search_cylinder<F>(r: u64, c: u64, opts: SearchOptions, mut visit: F) -> Result<SearchStats>
where
    F: FnMut(&Leaf) -> ControlFlow<()>,
{
    if r < 2 || c < 2 {
        return Err(Error::InvalidGgParams(format!("grid {r}x{c}")));
    }
    if r * c > CYLINDER_CELL_LIMIT {
        return Err(Error::TooLarge {
            what: "cylinder cells",
            value: r * c,
            limit: CYLINDER_CELL_LIMIT,
        });
    }
    let (r, c) = (r as usize, c as usize);
    let cells = r * c;
    let idx = |row: usize, col: usize| col * r + row;
    let nbr = (0..cells)
        .map(|i| {
            let (row, col) = (i % r, i / r);
            let mut m = 1u64 << idx((row + 1) % r, col) | 1u64 << idx((row + r - 1) % r, col);
            if col > 0 {
                m |= 1 << idx(row, col - 1);
            }
            if col + 1 < c {
                m |= 1 << idx(row, col + 1);
            }
            m
        })
        .collect();
    let last_col = (0..r).fold(0u64, |m, row| m | 1 << idx(row, c - 1));
    let mut search = Search {
        r,
        c,
        cells,
        nbr,
        last_col,
        opts,
        visited: 1,
        cuts: vec![0; c - 1],
        h: 0,
        path: vec![0],
        nodes: 0,
        stopped: false,
        visit: &mut visit,
    };
    search.dfs(0, 1);
    Ok(SearchStats {
        nodes: search.nodes,
        complete: !search.stopped,
    })
}

/// Minimum horizontal edges over Hamiltonian paths from `(0, 0)` to each row
/// of the last column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderReachability {
    pub r: u64,
    pub c: u64,
    /// Indexed by end row; `None` if no path (within the budget) ends there.
    pub min_horizontal: Vec<Option<u64>>,
    /// `first_cut_rows[m]`: end rows of paths crossing the first cut
    /// `2m + 1` times and every other cut once.
    pub first_cut_rows: Vec<BTreeSet<u64>>,
}

fn reachability(r: u64, c: u64, opts: SearchOptions) -> Result<CylinderReachability> {
    let mut min_horizontal = vec![None::<u64>; r as usize];
    let mut first_cut_rows = vec![BTreeSet::new(); r as usize];
    search_cylinder(r, c, opts, |leaf| {
        let slot = &mut min_horizontal[leaf.end_row as usize];
        if slot.is_none_or(|h| leaf.horizontal < h) {
            *slot = Some(leaf.horizontal);
        }
        if leaf.cuts[0] % 2 == 1 && leaf.cuts[1..].iter().all(|&k| k == 1) {
            first_cut_rows[(leaf.cuts[0] / 2) as usize].insert(leaf.end_row);
        }
        ControlFlow::Continue(())
    })?;
    while first_cut_rows.last().is_some_and(BTreeSet::is_empty) {
        first_cut_rows.pop();
    }
    Ok(CylinderReachability {
        r,
        c,
        min_horizontal,
        first_cut_rows,
    })
}

fn check_reachability_size(r: u64, c: u64) -> Result<()> {
    if r.saturating_mul(c) > REACHABILITY_CELL_LIMIT {
        return Err(Error::TooLarge {
            what: "cylinder cells",
            value: r.saturating_mul(c),
            limit: REACHABILITY_CELL_LIMIT,
        });
    }
    Ok(())
}

/// Exhaustive search with pruning. With a budget, only paths using at most
/// that many horizontal edges count.
pub fn cylinder_reachability(r: u64, c: u64, budget: Option<u64>) -> Result<CylinderReachability> {
    check_reachability_size(r, c)?;
    reachability(
        r,
        c,
        SearchOptions {
            prune: true,
            budget,
            ..SearchOptions::default()
        },
    )
}

/// Same as [`cylinder_reachability`] with plain backtracking only.
pub fn cylinder_reachability_plain(r: u64, c: u64) -> Result<CylinderReachability> {
    check_reachability_size(r, c)?;
    reachability(r, c, SearchOptions::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PathSearch {
    Found {
        path: Vec<CylinderCoord>,
    },
    /// The search finished without finding a path.
    Exhausted,
    /// Node limit reached first.
    Aborted,
}

/// Looks for one Hamiltonian path from `(0, 0)` to `(target_row, c - 1)`
/// using at most `budget` horizontal edges.
pub fn find_cylinder_path(
    r: u64,
    c: u64,
    target_row: u64,
    budget: u64,
    node_limit: u64,
) -> Result<(PathSearch, SearchStats)> {
    let mut found = None;
    let opts = SearchOptions {
        prune: true,
        budget: Some(budget),
        target_row: Some(target_row),
        node_limit: Some(node_limit),
    };
    let stats = search_cylinder(r, c, opts, |leaf| {
        let path = leaf
            .path
            .iter()
            .map(|&i| CylinderCoord::new(i as u64 % r, i as u64 / r))
            .collect();
        found = Some(path);
        ControlFlow::Break(())
    })?;
    let outcome = match found {
        Some(path) => PathSearch::Found { path },
        None if stats.complete => PathSearch::Exhausted,
        None => PathSearch::Aborted,
    };
    Ok((outcome, stats))
}

/// One row of a [`verify_reachability_grid`] report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachRecord {
    pub r: u64,
    pub c: u64,
    pub row: u64,
    /// `(c - 1) + 2 * min_extra_pairs(row)`.
    pub expected: Option<u64>,
    /// Exhaustive minimum.
    pub actual: Option<u64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachReport {
    pub records: Vec<ReachRecord>,
    /// `(r, c, m, row)`: a path crossing the first cut `2m + 1` times and
    /// every other cut once ended outside `A(r, c, m)`.
    pub first_cut_violations: Vec<(u64, u64, u64, u64)>,
}

impl ReachReport {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|rec| !rec.ok).count() + self.first_cut_violations.len()
    }
}

/// Compares exhaustive reachability of one cylinder with the closed form.
pub fn check_cylinder(r: u64, c: u64) -> Result<ReachReport> {
    let reach = cylinder_reachability(r, c, None)?;
    let records = (0..r)
        .map(|row| {
            let expected = min_extra_pairs(row, r, c).map(|m| (c - 1) + 2 * m);
            let actual = reach.min_horizontal[row as usize];
            ReachRecord {
                r,
                c,
                row,
                expected,
                actual,
                ok: expected == actual,
            }
        })
        .collect();
    let mut first_cut_violations = Vec::new();
    for (m, rows) in reach.first_cut_rows.iter().enumerate() {
        for &row in rows {
            let m = m as u64;
            if m > max_extra_pairs(r) || !a_set_contains(row, r, c, m) {
                first_cut_violations.push((r, c, m, row));
            }
        }
    }
    Ok(ReachReport {
        records,
        first_cut_violations,
    })
}

/// Grids swept by [`verify_reachability_grid`].
pub fn sweep_grids(r_max: u64, c_max: u64, cell_cap: u64) -> Vec<(u64, u64)> {
    let cap = cell_cap.min(REACHABILITY_CELL_LIMIT);
    (2..=r_max)
        .flat_map(|r| (2..=c_max).map(move |c| (r, c)))
        .filter(|&(r, c)| r * c <= cap)
        .collect()
}

/// Runs [`check_cylinder`] over every grid with `2 <= r <= r_max`,
/// `2 <= c <= c_max` and `r * c <= cell_cap`.
pub fn verify_reachability_grid(r_max: u64, c_max: u64, cell_cap: u64) -> Result<ReachReport> {
    let mut report = ReachReport {
        records: Vec::new(),
        first_cut_violations: Vec::new(),
    };
    for (r, c) in sweep_grids(r_max, c_max, cell_cap) {
        let part = check_cylinder(r, c)?;
        report.records.extend(part.records);
        report
            .first_cut_violations
            .extend(part.first_cut_violations);
    }
    Ok(report)
}
