//! Explicit tours.
//!
//! Every tour family is described by a layout that maps a position along the
//! walk to a cylinder cell in `O(1)`, so tours stream with constant state and
//! can be emitted for any `n` that fits in time.
//!
//! Rows grow downward. `Up` means the row index decreases, so from row 0 an
//! `Up` move wraps to row `r - 1`.

use serde::{Deserialize, Serialize};

use crate::congruence::{smallest_solution_at_least, solve_congruence};
use crate::error::{Error, Result};
use crate::ggpath::a_set_contains;
use crate::instance::{CylinderCoord, TwoStripeInstance};
use crate::solver::{SolveResult, TourDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Row index increases (`+a1`).
    Down,
    /// Row index decreases (`-a1`).
    Up,
}

impl Direction {
    fn sign(self) -> i128 {
        match self {
            Direction::Down => 1,
            Direction::Up => -1,
        }
    }
}

/// Parameters of one GG path from `(0, 0)` to the last column.
///
/// The path uses `2m + 1` horizontal edges between columns 0 and 1 and one
/// between every later pair. Of the columns `2..c`, the first `k` are swept
/// `Up` first (each moves the end row by `+1`), the rest `Down` first (`-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GgParams {
    pub m: u64,
    pub first_col_dir: Direction,
    /// Row where the path leaves column 1.
    pub second_col_end: u64,
    pub k: u64,
}

impl GgParams {
    /// End row in column `c - 1`: `e + 2k - (c - 2) (mod r)`.
    pub fn end_row(&self, r: u64, c: u64) -> u64 {
        let v = self.second_col_end as i128 + 2 * self.k as i128 - (c as i128 - 2);
        v.rem_euclid(r as i128) as u64
    }

    pub fn validate(&self, r: u64, c: u64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGgParams(msg));
        if r < 2 || c < 2 {
            return bad(format!("grid {r}x{c} needs r >= 2 and c >= 2"));
        }
        if (2 * self.m as u128 + 1) > r as u128 {
            return bad(format!(
                "2m + 1 = {} exceeds r = {r}",
                2 * self.m as u128 + 1
            ));
        }
        if self.k > c - 2 {
            return bad(format!("k = {} exceeds c - 2 = {}", self.k, c - 2));
        }
        let allowed = column_one_endings(r, self.m)
            .into_iter()
            .any(|(dir, e)| dir == self.first_col_dir && e == self.second_col_end);
        if !allowed {
            return bad(format!(
                "column 1 cannot end at row {} when starting {:?} with m = {}",
                self.second_col_end, self.first_col_dir, self.m
            ));
        }
        Ok(())
    }
}

/// Every `(first column direction, column 1 end row)` a GG path with `m`
/// extra pairs can take, in preference order. May repeat end rows.
///
/// With `m >= 1` column 1 must keep the direction of column 0. With `m = 0`
/// it may also sweep back and leave from row 0.
pub fn column_one_endings(r: u64, m: u64) -> Vec<(Direction, u64)> {
    let r = r as i128;
    let wrap = |v: i128| v.rem_euclid(r) as u64;
    if m == 0 {
        vec![
            (Direction::Down, 0),
            (Direction::Up, 0),
            (Direction::Up, wrap(2)),
            (Direction::Down, wrap(-2)),
        ]
    } else {
        let t = 2 * m as i128 + 2;
        vec![(Direction::Up, wrap(t)), (Direction::Down, wrap(-t))]
    }
}

/// Finds GG path parameters reaching row `x` of the last column with exactly
/// `m` extra horizontal pairs. `m` should be the least `m` with
/// `x` in `A(r, c, m)`.
pub fn gg_tour_params(x: u64, r: u64, c: u64, m: u64) -> Result<GgParams> {
    if r < 2 || c < 2 || x >= r || (2 * m as u128 + 1) > r as u128 {
        return Err(Error::InvalidGgParams(format!(
            "x = {x}, r = {r}, c = {c}, m = {m}"
        )));
    }
    if !a_set_contains(x, r, c, m) {
        return Err(Error::RowNotReachable { x, r, c, m });
    }
    for (first_col_dir, e) in column_one_endings(r, m) {
        // 2k = x - e + (c - 2) (mod r)
        let rhs = x as i128 - e as i128 + c as i128 - 2;
        if let Some(k) = smallest_solution_at_least(2, rhs, r, 0) {
            if k <= c as i128 - 2 {
                return Ok(GgParams {
                    m,
                    first_col_dir,
                    second_col_end: e,
                    k: k as u64,
                });
            }
        }
    }
    Err(Error::RowNotReachable { x, r, c, m })
}

/// Constant-size description of a GG path; [`cell`](Self::cell) is `O(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GgPathLayout {
    r: u64,
    c: u64,
    m: u64,
    dir: Direction,
    /// Vertical edges in column 0 before the alternating block.
    lead: u64,
    /// Column 1 remainder continues in `dir` (else it reverses; m = 0 only).
    col1_continues: bool,
    e: u64,
    k: u64,
}

impl GgPathLayout {
    pub fn new(r: u64, c: u64, params: &GgParams) -> Result<Self> {
        params.validate(r, c)?;
        let lead = r - 2 * params.m - 1;
        let sigma = params.first_col_dir.sign();
        let continue_end = (sigma * (lead as i128 - 1)).rem_euclid(r as i128) as u64;
        Ok(Self {
            r,
            c,
            m: params.m,
            dir: params.first_col_dir,
            lead,
            col1_continues: params.second_col_end == continue_end,
            e: params.second_col_end,
            k: params.k,
        })
    }

    pub fn len(&self) -> u64 {
        self.r * self.c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn row(&self, offset: i128) -> u64 {
        (self.dir.sign() * offset).rem_euclid(self.r as i128) as u64
    }

    /// Row where the walk leaves column `j >= 1`.
    fn column_end(&self, j: u64) -> u64 {
        let later = j - 1;
        let ups = later.min(self.k) as i128;
        let downs = later as i128 - ups;
        (self.e as i128 + ups - downs).rem_euclid(self.r as i128) as u64
    }

    pub fn cell(&self, idx: u64) -> CylinderCoord {
        debug_assert!(idx < self.len());
        let (r, s, m) = (self.r, self.lead, self.m);
        if idx <= s {
            return CylinderCoord::new(self.row(idx as i128), 0);
        }
        if idx <= s + 4 * m + 1 {
            let j = idx - (s + 1);
            if j == 0 {
                return CylinderCoord::new(self.row(s as i128), 1);
            }
            let i = j.div_ceil(2);
            let first = j % 2 == 1;
            let col = if (i % 2 == 1) == first { 1 } else { 0 };
            return CylinderCoord::new(self.row((s + i) as i128), col);
        }
        if idx < 2 * r {
            let t = (idx - (s + 4 * m + 2)) as i128;
            let row = if self.col1_continues {
                self.row(t)
            } else {
                self.row(r as i128 - 2 - t)
            };
            return CylinderCoord::new(row, 1);
        }
        let q = idx - 2 * r;
        let col = 2 + q / r;
        let t = (q % r) as i128;
        let start = self.column_end(col - 1) as i128;
        let row = if col - 2 < self.k {
            start - t
        } else {
            start + t
        };
        CylinderCoord::new(row.rem_euclid(r as i128) as u64, col)
    }

    pub fn end_row(&self) -> u64 {
        self.column_end(self.c - 1)
    }
}

/// Serpentine Hamiltonian cycle with `2(c - 1)` horizontal edges.
///
/// Column 0 runs down from `(0, 0)`; columns `1..c` snake over rows
/// `1..r`; row 0 of columns `c-1, ..., 1` is the way back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpperBoundLayout {
    r: u64,
    c: u64,
}

impl UpperBoundLayout {
    pub fn new(r: u64, c: u64) -> Result<Self> {
        if r < 2 || c < 2 {
            return Err(Error::InvalidGgParams(format!(
                "serpentine needs r >= 2 and c >= 2, got {r}x{c}"
            )));
        }
        Ok(Self { r, c })
    }

    pub fn len(&self) -> u64 {
        self.r * self.c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell(&self, idx: u64) -> CylinderCoord {
        let (r, c) = (self.r, self.c);
        if idx < r {
            return CylinderCoord::new(idx, 0);
        }
        let q = idx - r;
        let snake = (c - 1) * (r - 1);
        if q < snake {
            let col = 1 + q / (r - 1);
            let t = q % (r - 1);
            let row = if col % 2 == 1 { r - 1 - t } else { 1 + t };
            return CylinderCoord::new(row, col);
        }
        CylinderCoord::new(0, c - 1 - (q - snake))
    }
}

/// Column-by-column sweep: the first `y` columns go `Up`, the rest `Down`,
/// each entered where the previous one ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnSweepLayout {
    r: u64,
    c: u64,
    y: u64,
}

impl ColumnSweepLayout {
    pub fn len(&self) -> u64 {
        self.r * self.c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell(&self, idx: u64) -> CylinderCoord {
        let col = idx / self.r;
        let t = (idx % self.r) as i128;
        let ups = col.min(self.y) as i128;
        let start = ups - (col as i128 - ups);
        let row = if col < self.y { start - t } else { start + t };
        CylinderCoord::new(row.rem_euclid(self.r as i128) as u64, col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Gg(GgPathLayout),
    UpperBound(UpperBoundLayout),
    ColumnSweep(ColumnSweepLayout),
}

impl Layout {
    pub fn len(&self) -> u64 {
        match self {
            Layout::Gg(l) => l.len(),
            Layout::UpperBound(l) => l.len(),
            Layout::ColumnSweep(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell(&self, idx: u64) -> CylinderCoord {
        match self {
            Layout::Gg(l) => l.cell(idx),
            Layout::UpperBound(l) => l.cell(idx),
            Layout::ColumnSweep(l) => l.cell(idx),
        }
    }
}

/// Streaming walk over cylinder cells.
#[derive(Debug, Clone)]
pub struct CylinderWalk {
    layout: Layout,
    next: u64,
}

impl CylinderWalk {
    pub fn new(layout: Layout) -> Self {
        Self { layout, next: 0 }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }
}

impl Iterator for CylinderWalk {
    type Item = CylinderCoord;

    fn next(&mut self) -> Option<CylinderCoord> {
        if self.next >= self.layout.len() {
            return None;
        }
        let cell = self.layout.cell(self.next);
        self.next += 1;
        Some(cell)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.layout.len() - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for CylinderWalk {}

/// Hamiltonian path on the `r x c` cylinder from `(0, 0)` to
/// `(params.end_row(r, c), c - 1)` with `(c - 1) + 2m` horizontal edges.
pub fn emit_gg_path(r: u64, c: u64, params: &GgParams) -> Result<CylinderWalk> {
    Ok(CylinderWalk::new(Layout::Gg(GgPathLayout::new(
        r, c, params,
    )?)))
}

/// Serpentine Hamiltonian cycle (closed implicitly) on the `r x c` cylinder.
pub fn emit_upper_bound_tour(r: u64, c: u64) -> Result<CylinderWalk> {
    Ok(CylinderWalk::new(Layout::UpperBound(
        UpperBoundLayout::new(r, c)?,
    )))
}

/// A Hamiltonian cycle as a list of vertex labels, closed implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TourSequence {
    pub labels: Vec<u64>,
}

impl TourSequence {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone)]
enum Source {
    /// `i * a1` for `i` in `0..n`.
    Cheap,
    Cylinder(Layout),
}

/// Streams the labels of a tour in `O(1)` memory.
#[derive(Debug, Clone)]
pub struct TourStream {
    inst: TwoStripeInstance,
    source: Source,
    next: u64,
}

impl Iterator for TourStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let n = self.inst.n();
        if self.next >= n {
            return None;
        }
        let label = match &self.source {
            Source::Cheap => (self.next as u128 * self.inst.a1() as u128 % n as u128) as u64,
            Source::Cylinder(layout) => self.inst.label_of(layout.cell(self.next)),
        };
        self.next += 1;
        Some(label)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.inst.n() - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for TourStream {}

/// Streams the tour described by `descriptor`.
pub fn emit_tour_stream(
    inst: &TwoStripeInstance,
    descriptor: &TourDescriptor,
) -> Result<TourStream> {
    let d = inst.decompose();
    let source = match descriptor {
        TourDescriptor::Infeasible => return Err(Error::Infeasible { g2: d.g2 }),
        TourDescriptor::AllCheapCycle => Source::Cheap,
        TourDescriptor::EqualCostAny { inner } => return emit_tour_stream(inst, inner),
        TourDescriptor::GgPlusWrap { params, .. } => {
            Source::Cylinder(Layout::Gg(GgPathLayout::new(d.r, d.c, params)?))
        }
        TourDescriptor::UpperBoundSerpentine => {
            Source::Cylinder(Layout::UpperBound(UpperBoundLayout::new(d.r, d.c)?))
        }
    };
    Ok(TourStream {
        inst: *inst,
        source,
        next: 0,
    })
}

/// Materializes the optimal tour found by the solver.
pub fn emit_tour(inst: &TwoStripeInstance, result: &SolveResult) -> Result<TourSequence> {
    Ok(TourSequence {
        labels: emit_tour_stream(inst, &result.descriptor)?.collect(),
    })
}

/// Tour of cost `g1`: the first `y` columns are swept with `-a1` steps, the
/// others with `+a1`, joined by `+a2` edges, closed by one more `+a2`.
///
/// Needs `0 <= y <= g1` and `(2y - g1) * a1 + g1 * a2 = 0 (mod n)`.
pub fn emit_lower_bound_tour_y(inst: &TwoStripeInstance, y: u64) -> Result<TourSequence> {
    let d = inst.decompose();
    if d.g2 != 1 {
        return Err(Error::Infeasible { g2: d.g2 });
    }
    let n = inst.n() as i128;
    let lhs = (2 * y as i128 - d.g1 as i128) * inst.a1() as i128 + d.g1 as i128 * inst.a2() as i128;
    if y > d.g1 || lhs.rem_euclid(n) != 0 {
        return Err(Error::InvalidLowerBoundColumnCount { y });
    }
    let layout = ColumnSweepLayout { r: d.r, c: d.c, y };
    let stream = TourStream {
        inst: *inst,
        source: Source::Cylinder(Layout::ColumnSweep(layout)),
        next: 0,
    };
    Ok(TourSequence {
        labels: stream.collect(),
    })
}

/// Values of `y` in `[0, g1]` admitting [`emit_lower_bound_tour_y`].
pub fn lower_bound_columns(inst: &TwoStripeInstance) -> Vec<u64> {
    let d = inst.decompose();
    let n = inst.n();
    // 2 a1 y = g1 a1 - g1 a2 (mod n)
    let rhs = d.g1 as i128 * inst.a1() as i128 - d.g1 as i128 * inst.a2() as i128;
    let Some(sol) = solve_congruence((2 * inst.a1() as u128 % n as u128) as u64, rhs, n) else {
        return Vec::new();
    };
    (sol.base..=d.g1).step_by(sol.period as usize).collect()
}

/// Outcome of [`validate_tour`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TourCheck {
    pub hamiltonian: bool,
    pub length: u64,
    pub count_a1: u64,
    pub count_a2: u64,
    /// `+a2` steps, taken in the order the labels are listed.
    pub plus_a2: u64,
    pub minus_a2: u64,
    /// Steps that are neither stripe (including wrap from last to first).
    pub invalid_steps: u64,
    pub cost: u128,
}

impl TourCheck {
    /// `plus_a2 - minus_a2`.
    pub fn net_a2(&self) -> i128 {
        self.plus_a2 as i128 - self.minus_a2 as i128
    }
}

/// Checks that `labels`, closed into a cycle, is a Hamiltonian cycle of
/// the two-stripe graph and counts its stripe usage.
pub fn validate_tour<I>(inst: &TwoStripeInstance, labels: I) -> TourCheck
where
    I: IntoIterator<Item = u64>,
{
    let n = inst.n();
    let (a1, a2) = (inst.a1(), inst.a2());
    let mut seen = vec![0u64; n.div_ceil(64) as usize];
    let mut check = TourCheck {
        hamiltonian: true,
        length: 0,
        count_a1: 0,
        count_a2: 0,
        plus_a2: 0,
        minus_a2: 0,
        invalid_steps: 0,
        cost: 0,
    };
    let step = |check: &mut TourCheck, from: u64, to: u64| {
        let diff = ((to as i128 - from as i128).rem_euclid(n as i128)) as u64;
        if diff == a1 || diff == n - a1 {
            check.count_a1 += 1;
        } else if diff == a2 {
            check.count_a2 += 1;
            check.plus_a2 += 1;
        } else if diff == n - a2 {
            check.count_a2 += 1;
            check.minus_a2 += 1;
        } else {
            check.invalid_steps += 1;
        }
    };
    let mut first = None;
    let mut prev = None;
    for label in labels {
        check.length += 1;
        if label >= n {
            check.hamiltonian = false;
            check.invalid_steps += 1;
            prev = None;
            continue;
        }
        let (word, bit) = ((label / 64) as usize, label % 64);
        if seen[word] & (1 << bit) != 0 {
            check.hamiltonian = false;
        }
        seen[word] |= 1 << bit;
        if let Some(p) = prev {
            step(&mut check, p, label);
        }
        first.get_or_insert(label);
        prev = Some(label);
    }
    if let (Some(f), Some(p)) = (first, prev) {
        if check.length > 1 {
            step(&mut check, p, f);
        }
    }
    check.cost = check.count_a1 as u128 * inst.cost1() as u128
        + check.count_a2 as u128 * inst.cost2() as u128;
    if check.length != n || check.invalid_steps > 0 {
        check.hamiltonian = false;
    }
    check
}
