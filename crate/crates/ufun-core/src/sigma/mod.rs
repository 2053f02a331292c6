//! The sequence `σ = e(1), e(2), ...` and the function `e` it defines.
//!
//! `e` is fixed once and for all by three rules:
//!
//! - powers of two square: `e(2^k) = 2^(2k)` for all `k >= 1`;
//! - everything else is laid out in rounds. Round `r` first places one
//!   cycle of each length `1..=r` at consecutive non-power positions (a
//!   *cycle block*), then assigns the values `1..=n` in order to the
//!   following non-power positions, where `n` is the last position the
//!   cycle block assigned (a *fill block*);
//! - power-of-two positions are skipped throughout, both as assignment
//!   positions and inside cycles.
//!
//! Two independent evaluation routes are provided. [`SigmaTable`]
//! materializes a prefix slot by slot in `u64` arithmetic; [`Sigma::eval`]
//! falls back to an analytic evaluator that locates an index inside the
//! round structure by iterating the round-boundary recurrence in big-integer
//! arithmetic. The two must (and are tested to) agree wherever both apply.

mod analytic;
mod codec;
mod generate;
pub mod nat;

pub use codec::CodecError;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::numeral::{Numeral, NumeralError};
use analytic::{Analytic, Zone};

/// Default cap on materialized slots (8 bytes each).
pub const DEFAULT_SLOT_BUDGET: u64 = 1 << 27;
/// Default cap on analytic round iterations.
pub const DEFAULT_ROUND_BUDGET: u64 = 1_000_000;

/// One structural phase of the sequence layout.
///
/// Records carry the full planned extent of a phase even when the table has
/// materialized only part of it; the log is append-only and sorted by start
/// position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhaseRecord {
    /// One cycle of each length `1..=round`, at consecutive non-power
    /// positions (possibly with power skips inside). `end` is the last
    /// assigned position, which also becomes the fill bound of the round.
    CycleBlock { round: u64, start: u64, end: u64 },
    /// Values `1..=fill_max` assigned in order to consecutive non-power
    /// positions.
    FillBlock {
        round: u64,
        start: u64,
        end: u64,
        fill_max: u64,
    },
    /// A power-of-two position skipped by the layout.
    PowerSkip { round: u64, position: u64 },
}

impl PhaseRecord {
    pub fn start(&self) -> u64 {
        match *self {
            PhaseRecord::CycleBlock { start, .. } | PhaseRecord::FillBlock { start, .. } => start,
            PhaseRecord::PowerSkip { position, .. } => position,
        }
    }

    pub fn end(&self) -> u64 {
        match *self {
            PhaseRecord::CycleBlock { end, .. } | PhaseRecord::FillBlock { end, .. } => end,
            PhaseRecord::PowerSkip { position, .. } => position,
        }
    }

    pub fn round(&self) -> u64 {
        match *self {
            PhaseRecord::CycleBlock { round, .. }
            | PhaseRecord::FillBlock { round, .. }
            | PhaseRecord::PowerSkip { round, .. } => round,
        }
    }

    pub fn is_block(&self) -> bool {
        !matches!(self, PhaseRecord::PowerSkip { .. })
    }
}

/// A cycle of the sequence: `length` consecutive non-power positions whose
/// images rotate among themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDescriptor {
    length: u64,
    /// Members in ascending position order.
    members: Vec<Numeral>,
}

impl CycleDescriptor {
    pub fn new(members: Vec<Numeral>) -> Self {
        debug_assert!(!members.is_empty());
        CycleDescriptor {
            length: members.len() as u64,
            members,
        }
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    /// Members in ascending order; the first is the smallest.
    pub fn members(&self) -> &[Numeral] {
        &self.members
    }

    pub fn smallest(&self) -> &Numeral {
        &self.members[0]
    }

    /// Members in image order starting from the smallest: with ascending
    /// positions `p_1 < ... < p_k`, the edges are `e(p_1) = p_k` and
    /// `e(p_t) = p_(t-1)`, so the orbit of `p_1` is `p_1, p_k, p_(k-1), ...,
    /// p_2` before closing.
    pub fn successor_order(&self) -> Vec<Numeral> {
        let mut order = Vec::with_capacity(self.members.len());
        order.push(self.members[0].clone());
        for m in self.members.iter().skip(1).rev() {
            order.push(m.clone());
        }
        order
    }

    /// The member the cycle maps onto the given member, i.e. the in-cycle
    /// predecessor under `e`.
    pub fn predecessor_of(&self, member: &Numeral) -> Option<&Numeral> {
        let k = self.members.len();
        let idx = self.members.iter().position(|m| m == member)?;
        // e(p_1) = p_k, e(p_t) = p_(t-1): predecessor of p_k is p_1,
        // predecessor of p_(t-1) is p_t.
        Some(if idx == k - 1 {
            &self.members[0]
        } else {
            &self.members[idx + 1]
        })
    }
}

/// Where an index sits in the power / cycle / tree partition of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionTag {
    /// `n = 2^k` with `k >= 1`.
    P { exponent: Numeral },
    /// `n` lies on a cycle.
    C { cycle: CycleDescriptor },
    /// `n` hangs in a tree: iterating `e` exactly `depth` times first
    /// reaches `anchor`, which is a power or a cycle member.
    T { anchor: Numeral, depth: u64 },
}

/// Failures of sequence generation and evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaError {
    /// Materializing the requested prefix would exceed the slot budget.
    SlotBudget { requested: u64, budget: u64 },
    /// The analytic evaluator would need more rounds than budgeted.
    RoundBudget { budget: u64 },
    /// An iteration chase (partition tagging) exceeded its cap.
    IterationBudget { budget: u64 },
    /// An analytic-only entry point was handed a power of two.
    PowerIndex,
    Magnitude(NumeralError),
    Codec(CodecError),
}

impl fmt::Display for SigmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaError::SlotBudget { requested, budget } => write!(
                f,
                "prefix of {requested} slots exceeds the configured budget of {budget}"
            ),
            SigmaError::RoundBudget { budget } => {
                write!(f, "analytic evaluation exceeded the round budget of {budget}")
            }
            SigmaError::IterationBudget { budget } => {
                write!(f, "iteration exceeded the budget of {budget} steps")
            }
            SigmaError::PowerIndex => {
                write!(f, "analytic evaluation is defined on non-power indices only")
            }
            SigmaError::Magnitude(e) => write!(f, "{e}"),
            SigmaError::Codec(e) => write!(f, "{e}"),
        }
    }
}

impl From<NumeralError> for SigmaError {
    fn from(e: NumeralError) -> Self {
        SigmaError::Magnitude(e)
    }
}

impl From<CodecError> for SigmaError {
    fn from(e: CodecError) -> Self {
        SigmaError::Codec(e)
    }
}

/// Materialized prefix of the sequence.
///
/// Slot `i-1` stores `e(i)` for non-power `i`; power positions store the
/// sentinel 0 and are answered by the squaring rule instead. Values at
/// non-power positions are provably below `2i`, so `u64` slots suffice for
/// any prefix that fits in memory. Extension is append-only: a value or
/// phase record, once produced, never changes.
pub struct SigmaTable {
    values: Vec<u64>,
    phases: Vec<PhaseRecord>,
    slot_budget: u64,
}

impl SigmaTable {
    pub fn new() -> Self {
        Self::with_budget(DEFAULT_SLOT_BUDGET)
    }

    pub fn with_budget(slot_budget: u64) -> Self {
        SigmaTable {
            values: Vec::new(),
            phases: Vec::new(),
            slot_budget,
        }
    }

    /// Materialized length: `e(i)` is available for all `1 <= i <= len()`.
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The phase log, covering at least the materialized prefix (the last
    /// block record may extend beyond it).
    pub fn phases(&self) -> &[PhaseRecord] {
        &self.phases
    }

    /// `e(i)` for a materialized index.
    pub fn get(&self, i: u64) -> Option<Numeral> {
        if i == 0 || i > self.len() {
            return None;
        }
        if nat::is_power_of_two(i) {
            let k = i.trailing_zeros() as u64;
            return Some(Numeral::pow2(Numeral::from_u64(2 * k)));
        }
        Some(Numeral::from_u64(self.values[(i - 1) as usize]))
    }

    /// `e(i)` as a `u64` when representable; power positions with images
    /// beyond `u64` yield `None` even when materialized.
    pub fn get_u64(&self, i: u64) -> Option<u64> {
        if i == 0 || i > self.len() {
            return None;
        }
        if nat::is_power_of_two(i) {
            let k = i.trailing_zeros() as u64;
            return if 2 * k <= 63 { Some(1u64 << (2 * k)) } else { None };
        }
        Some(self.values[(i - 1) as usize])
    }

    /// Raw slot content (sentinel 0 at power positions).
    pub fn slot(&self, i: u64) -> Option<u64> {
        if i == 0 || i > self.len() {
            None
        } else {
            Some(self.values[(i - 1) as usize])
        }
    }

    pub fn slots(&self) -> &[u64] {
        &self.values
    }

    /// The block record containing position `i`, if any block covering it
    /// has been planned.
    pub fn block_at(&self, i: u64) -> Option<&PhaseRecord> {
        let idx = self.phases.partition_point(|p| p.start() <= i);
        self.phases[..idx]
            .iter()
            .rev()
            .find(|p| p.is_block())
            .filter(|p| p.end() >= i)
    }

    /// Serializes the materialized table to the cache byte format.
    pub fn to_bytes(&self) -> Vec<u8> {
        codec::encode(self)
    }

    /// Restores a table from cache bytes, replanning the phase log.
    pub fn from_bytes(bytes: &[u8], slot_budget: u64) -> Result<Self, SigmaError> {
        codec::decode(bytes, slot_budget)
    }
}

impl Default for SigmaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// The function `e`: a materialized table plus the analytic fallback.
///
/// All reads of an already-materialized prefix are `&self`; extension and
/// analytic memoization take `&mut self` (single writer).
pub struct Sigma {
    table: SigmaTable,
    analytic: Analytic,
}

impl Sigma {
    pub fn new() -> Self {
        Self::with_budgets(DEFAULT_SLOT_BUDGET, DEFAULT_ROUND_BUDGET)
    }

    pub fn with_budgets(slot_budget: u64, round_budget: u64) -> Self {
        Sigma {
            table: SigmaTable::with_budget(slot_budget),
            analytic: Analytic::new(round_budget),
        }
    }

    pub fn from_table(table: SigmaTable) -> Self {
        Sigma {
            table,
            analytic: Analytic::new(DEFAULT_ROUND_BUDGET),
        }
    }

    pub fn table(&self) -> &SigmaTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut SigmaTable {
        &mut self.table
    }

    pub fn round_budget(&self) -> u64 {
        self.analytic.round_budget()
    }

    /// Materializes the prefix through index `l`.
    pub fn extend_to(&mut self, l: u64) -> Result<(), SigmaError> {
        self.table.extend_to(l)
    }

    /// `e(n)` for any `n >= 1`: powers of two square symbolically at any
    /// magnitude, materialized indices read the table, and everything else
    /// goes through the analytic evaluator.
    pub fn eval(&mut self, n: &Numeral) -> Result<Numeral, SigmaError> {
        if n.as_pow2_exponent().is_some() {
            return Ok(n.square()?);
        }
        let m = n
            .to_biguint()
            .expect("non-power numerals are always plain");
        if let Some(i) = small(&m) {
            if i <= self.table.len() {
                return Ok(self
                    .table
                    .get(i)
                    .expect("index within materialized prefix"));
            }
        }
        let value = self.analytic.eval(&m)?;
        Ok(Numeral::from_biguint(value))
    }

    /// `e(n)` for non-power `n`, computed purely from the round-boundary
    /// recurrence without consulting the materialized table.
    pub fn eval_analytic(&mut self, n: &Numeral) -> Result<Numeral, SigmaError> {
        if n.as_pow2_exponent().is_some() {
            return Err(SigmaError::PowerIndex);
        }
        let m = n
            .to_biguint()
            .expect("non-power numerals are always plain");
        let value = self.analytic.eval(&m)?;
        Ok(Numeral::from_biguint(value))
    }

    /// The `i`-th cycle of length `k`, in ascending order of smallest
    /// member. Cycles of length `k` appear once per round from round `k`
    /// on, so the `i`-th lives in round `k + i - 1`.
    pub fn kth_cycle(&mut self, k: u64, i: u64) -> Result<CycleDescriptor, SigmaError> {
        assert!(k >= 1 && i >= 1);
        let members = self.analytic.cycle_members(k, i)?;
        Ok(CycleDescriptor::new(
            members.into_iter().map(Numeral::from_biguint).collect(),
        ))
    }

    /// Classifies `n` as power / cycle member / tree vertex; tree vertices
    /// carry the anchor their iterated images first hit and its depth.
    pub fn partition_tag(&mut self, n: &Numeral) -> Result<PartitionTag, SigmaError> {
        if let Some(exponent) = n.as_pow2_exponent() {
            return Ok(PartitionTag::P { exponent });
        }
        if let Some(cycle) = self.cycle_of(n)? {
            return Ok(PartitionTag::C { cycle });
        }
        let budget = self.analytic.round_budget();
        let mut current = n.clone();
        for depth in 1..=budget {
            current = self.eval(&current)?;
            if current.as_pow2_exponent().is_some() || self.cycle_of(&current)?.is_some() {
                return Ok(PartitionTag::T {
                    anchor: current,
                    depth,
                });
            }
        }
        Err(SigmaError::IterationBudget { budget })
    }

    /// The cycle containing non-power `n`, if `n` sits in a cycle block.
    pub fn cycle_of(&mut self, n: &Numeral) -> Result<Option<CycleDescriptor>, SigmaError> {
        if n.as_pow2_exponent().is_some() {
            return Ok(None);
        }
        let m = n
            .to_biguint()
            .expect("non-power numerals are always plain");
        match self.analytic.locate(&m)? {
            Zone::Cycle => {
                let members = self.analytic.cycle_members_at(&m)?;
                Ok(Some(CycleDescriptor::new(
                    members.into_iter().map(Numeral::from_biguint).collect(),
                )))
            }
            Zone::Fill => Ok(None),
        }
    }

    /// The `i`-th index `x` (ascending) with `e(x) = v`, restricted to the
    /// tree part of the graph: fill-block positions only. This excludes
    /// `v`'s in-cycle predecessor and, for `v = 2^(2k)`, the power `2^k`,
    /// which is exactly the `x > v + 1` enumeration used by the coding.
    pub fn beta(&mut self, v: &Numeral, i: u64) -> Result<Numeral, SigmaError> {
        assert!(i >= 1);
        let budget = self.analytic.round_budget();
        // Rounds reach positions ~2^r, so a fill block containing value v
        // exists within the round budget only if v has ~budget bits.
        let magnitude = match v {
            Numeral::Plain(m) => m.clone(),
            Numeral::Pow2(e) => match e.to_u64() {
                Some(k) if k <= budget => BigUint::from(1u8) << k,
                _ => return Err(SigmaError::RoundBudget { budget }),
            },
        };
        let x = self.analytic.beta(&magnitude, i)?;
        debug_assert!(x > &magnitude + 1u8);
        Ok(Numeral::from_biguint(x))
    }

    /// Scan-based counterpart of [`Sigma::beta`] over the materialized
    /// prefix: the `i`-th fill position with value `v`, or `None` if the
    /// prefix holds fewer than `i` of them.
    pub fn beta_scan(&self, v: u64, i: u64) -> Option<u64> {
        assert!(i >= 1);
        let mut seen = 0;
        for rec in self.table.phases() {
            if let PhaseRecord::FillBlock {
                start,
                end,
                fill_max,
                ..
            } = *rec
            {
                if fill_max < v {
                    continue;
                }
                let x = nat::mth_nonpower(start, v);
                if x > end || x > self.table.len() {
                    return None;
                }
                debug_assert_eq!(self.table.get_u64(x), Some(v));
                seen += 1;
                if seen == i {
                    return Some(x);
                }
            }
        }
        None
    }

    /// `|{ i <= l : e(i) = v }|` over the materialized prefix, extending it
    /// if needed.
    pub fn image_occurrences(&mut self, v: &Numeral, l: u64) -> Result<u64, SigmaError> {
        self.extend_to(l)?;
        let mut count = 0u64;
        if let Some(v64) = v.to_u64() {
            for i in 1..=l {
                if !nat::is_power_of_two(i) && self.table.slot(i) == Some(v64) {
                    count += 1;
                }
            }
        }
        // Power positions map to 2^(2k); compare without materializing.
        let mut p = 2u64;
        while p <= l {
            let k = p.trailing_zeros() as u64;
            let image = Numeral::pow2(Numeral::from_u64(2 * k));
            if image == *v {
                count += 1;
            }
            match p.checked_mul(2) {
                Some(next) => p = next,
                None => break,
            }
        }
        Ok(count)
    }

    /// Round layout boundaries (cycle start, cycle end, fill start, fill
    /// end) for the given round, from the analytic recurrence.
    pub fn round_boundaries(
        &mut self,
        round: u64,
    ) -> Result<(BigUint, BigUint, BigUint, BigUint), SigmaError> {
        self.analytic.boundaries(round)
    }
}

impl Default for Sigma {
    fn default() -> Self {
        Self::new()
    }
}

fn small(m: &BigUint) -> Option<u64> {
    let digits = m.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
