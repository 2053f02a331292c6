//! Streaming generation of the sequence prefix.
//!
//! Generation is split into *planning* (computing phase records with their
//! full extents, append-only) and *writing* (materializing slot values up
//! to a requested length). Plans are a pure function of the construction,
//! so a table restored from cache can replan its phase log and resume
//! writing mid-phase with identical results.

use alloc::vec::Vec;

use super::nat::{is_power_of_two, mth_nonpower, next_nonpower, pow_count};
use super::{PhaseRecord, SigmaError, SigmaTable};

/// Positions a cycle block for round `round` starting at non-power `start`:
/// returns the block end (= the last assigned position, the round's fill
/// bound).
fn cycle_block_end(round: u64, start: u64) -> u64 {
    let total = round * (round + 1) / 2;
    mth_nonpower(start, total)
}

/// Appends power-skip records for every power of two in `(from, to)`.
fn push_gap_skips(phases: &mut Vec<PhaseRecord>, round: u64, from: u64, to: u64) {
    let mut p = next_power_after(from);
    while p < to {
        phases.push(PhaseRecord::PowerSkip { round, position: p });
        p = match p.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
}

/// Appends power-skip records for every power of two in `[from, to]`.
fn push_interior_skips(phases: &mut Vec<PhaseRecord>, round: u64, from: u64, to: u64) {
    let mut p = next_power_after(from.saturating_sub(1));
    while p <= to {
        phases.push(PhaseRecord::PowerSkip { round, position: p });
        p = match p.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
}

fn next_power_after(x: u64) -> u64 {
    let mut p = 2u64;
    while p <= x {
        match p.checked_mul(2) {
            Some(next) => p = next,
            None => return u64::MAX,
        }
    }
    p
}

/// Plans the next phase after the current log and appends its records
/// (leading gap skips, the block, interior skips).
pub(super) fn plan_next_phase(phases: &mut Vec<PhaseRecord>) {
    let last_block = phases.iter().rev().find(|p| p.is_block()).cloned();
    match last_block {
        None => {
            // Round 1 opens the sequence with its cycle block at position 1.
            let end = cycle_block_end(1, 1);
            phases.push(PhaseRecord::CycleBlock {
                round: 1,
                start: 1,
                end,
            });
            push_interior_skips(phases, 1, 2, end);
        }
        Some(PhaseRecord::CycleBlock { round, end, .. }) => {
            let start = next_nonpower(end);
            let fill_end = mth_nonpower(start, end);
            push_gap_skips(phases, round, end, start);
            phases.push(PhaseRecord::FillBlock {
                round,
                start,
                end: fill_end,
                fill_max: end,
            });
            push_interior_skips(phases, round, start + 1, fill_end);
        }
        Some(PhaseRecord::FillBlock { round, end, .. }) => {
            let next_round = round + 1;
            let start = next_nonpower(end);
            let block_end = cycle_block_end(next_round, start);
            push_gap_skips(phases, next_round, end, start);
            phases.push(PhaseRecord::CycleBlock {
                round: next_round,
                start,
                end: block_end,
            });
            push_interior_skips(phases, next_round, start + 1, block_end);
        }
        Some(PhaseRecord::PowerSkip { .. }) => unreachable!("filtered to blocks"),
    }
}

/// Enumerates the cycles of a round's cycle block: calls `f(positions)` for
/// each cycle, positions ascending.
pub(super) fn for_each_cycle_in_block<F: FnMut(&[u64])>(round: u64, start: u64, mut f: F) {
    let mut cursor = start;
    let mut positions = Vec::with_capacity(round as usize);
    for len in 1..=round {
        positions.clear();
        positions.push(cursor);
        for _ in 1..len {
            let next = next_nonpower(*positions.last().expect("nonempty"));
            positions.push(next);
        }
        f(&positions);
        cursor = next_nonpower(*positions.last().expect("nonempty"));
    }
}

impl SigmaTable {
    /// Materializes the prefix through index `l`. Idempotent; previously
    /// produced values are never changed.
    pub fn extend_to(&mut self, l: u64) -> Result<(), SigmaError> {
        if l > self.slot_budget {
            return Err(SigmaError::SlotBudget {
                requested: l,
                budget: self.slot_budget,
            });
        }
        let old_len = self.len();
        if l <= old_len {
            return Ok(());
        }
        while self.planned_end() < l {
            plan_next_phase(&mut self.phases);
        }
        self.values.resize(l as usize, 0);
        // Replay every block overlapping (old_len, l] and write the slots
        // in that range. The log stays small (a handful of records per
        // round, rounds grow the positions exponentially), so a scan is fine.
        for idx in 0..self.phases.len() {
            let rec = self.phases[idx].clone();
            if rec.start() > l {
                break;
            }
            if rec.end() <= old_len {
                continue;
            }
            match rec {
                PhaseRecord::CycleBlock { round, start, .. } => {
                    write_cycle_block(&mut self.values, round, start, old_len, l);
                }
                PhaseRecord::FillBlock {
                    start,
                    end,
                    fill_max,
                    ..
                } => {
                    write_fill_block(&mut self.values, start, end, fill_max, old_len, l);
                }
                PhaseRecord::PowerSkip { .. } => {}
            }
        }
        Ok(())
    }

    /// End of the last planned block, or 0 when nothing is planned yet.
    fn planned_end(&self) -> u64 {
        self.phases
            .iter()
            .rev()
            .find(|p| p.is_block())
            .map_or(0, |p| p.end())
    }

    /// Rebuilds the phase log for a table restored from raw slots.
    pub(super) fn replan(values: Vec<u64>, slot_budget: u64) -> Self {
        let len = values.len() as u64;
        let mut phases = Vec::new();
        while phases
            .iter()
            .rev()
            .find(|p: &&PhaseRecord| p.is_block())
            .map_or(0, |p| p.end())
            < len
        {
            plan_next_phase(&mut phases);
        }
        SigmaTable {
            values,
            phases,
            slot_budget,
        }
    }
}

fn write_slot(values: &mut [u64], pos: u64, val: u64, lo: u64, hi: u64) {
    if pos > lo && pos <= hi {
        values[(pos - 1) as usize] = val;
    }
}

/// Writes the edges of every cycle in a round's block for positions in
/// `(lo, hi]`. With ascending positions `p_1..p_k` the edges are
/// `e(p_1) = p_k` and `e(p_t) = p_(t-1)` for `t >= 2`.
fn write_cycle_block(values: &mut [u64], round: u64, start: u64, lo: u64, hi: u64) {
    for_each_cycle_in_block(round, start, |positions| {
        let k = positions.len();
        write_slot(values, positions[0], positions[k - 1], lo, hi);
        for t in 1..k {
            write_slot(values, positions[t], positions[t - 1], lo, hi);
        }
    });
}

/// Writes fill values for positions in `(lo, hi]`. The value at a fill
/// position is its non-power ordinal within the block.
fn write_fill_block(values: &mut [u64], start: u64, end: u64, fill_max: u64, lo: u64, hi: u64) {
    let mut pos = (lo + 1).max(start);
    let stop = hi.min(end);
    while pos <= stop && is_power_of_two(pos) {
        pos += 1;
    }
    if pos > stop {
        return;
    }
    // Ordinal of `pos` inside the block, counting non-powers only.
    let mut value = (pos - start + 1) - pow_count(start, pos);
    while pos <= stop {
        debug_assert!(value <= fill_max);
        values[(pos - 1) as usize] = value;
        value += 1;
        pos = next_nonpower(pos);
    }
}
