//! Analytic evaluation of the sequence without materializing it.
//!
//! Rounds roughly double the covered positions, so locating an index `n`
//! inside the round structure costs O(log n) rounds of big-integer
//! arithmetic. Each round is summarized by four boundaries:
//!
//! - `cycle_start ..= cycle_end`: the cycle block (one cycle of each length
//!   `1..=round` over consecutive non-power positions);
//! - `fill_start ..= fill_end`: the fill block (values `1..=cycle_end` over
//!   consecutive non-power positions).
//!
//! The gaps between consecutive boundaries contain only powers of two.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::nat::{isqrt, mth_nonpower_big, next_nonpower_big, pow_count_big};
use super::SigmaError;

#[derive(Clone, Debug)]
struct Layout {
    cycle_start: BigUint,
    cycle_end: BigUint,
    fill_start: BigUint,
    fill_end: BigUint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Zone {
    Cycle,
    Fill,
}

pub(super) struct Analytic {
    layouts: Vec<Layout>,
    round_budget: u64,
}

impl Analytic {
    pub fn new(round_budget: u64) -> Self {
        Analytic {
            layouts: Vec::new(),
            round_budget: round_budget.max(1),
        }
    }

    pub fn round_budget(&self) -> u64 {
        self.round_budget
    }

    /// Ensures layouts are memoized through `round` (1-based).
    fn ensure_round(&mut self, round: u64) -> Result<(), SigmaError> {
        if round > self.round_budget {
            return Err(SigmaError::RoundBudget {
                budget: self.round_budget,
            });
        }
        while (self.layouts.len() as u64) < round {
            let next = self.layouts.len() as u64 + 1;
            let cycle_start = match self.layouts.last() {
                None => BigUint::one(),
                Some(prev) => next_nonpower_big(&prev.fill_end),
            };
            let total = BigUint::from(next * (next + 1) / 2);
            let cycle_end = mth_nonpower_big(&cycle_start, &total);
            let fill_start = next_nonpower_big(&cycle_end);
            let fill_end = mth_nonpower_big(&fill_start, &cycle_end);
            self.layouts.push(Layout {
                cycle_start,
                cycle_end,
                fill_start,
                fill_end,
            });
        }
        Ok(())
    }

    pub fn boundaries(
        &mut self,
        round: u64,
    ) -> Result<(BigUint, BigUint, BigUint, BigUint), SigmaError> {
        assert!(round >= 1);
        self.ensure_round(round)?;
        let l = &self.layouts[(round - 1) as usize];
        Ok((
            l.cycle_start.clone(),
            l.cycle_end.clone(),
            l.fill_start.clone(),
            l.fill_end.clone(),
        ))
    }

    /// The round whose span contains non-power `n`, plus which zone it is in.
    fn locate_round(&mut self, n: &BigUint) -> Result<(u64, Zone), SigmaError> {
        while self
            .layouts
            .last()
            .map_or(true, |l| l.fill_end < *n)
        {
            let next = self.layouts.len() as u64 + 1;
            self.ensure_round(next)?;
        }
        let idx = self
            .layouts
            .partition_point(|l| l.cycle_start <= *n)
            .checked_sub(1)
            .expect("round 1 starts at position 1");
        let layout = &self.layouts[idx];
        let zone = if *n <= layout.cycle_end {
            Zone::Cycle
        } else {
            debug_assert!(*n >= layout.fill_start, "gaps hold powers only");
            Zone::Fill
        };
        Ok((idx as u64 + 1, zone))
    }

    pub fn locate(&mut self, n: &BigUint) -> Result<Zone, SigmaError> {
        Ok(self.locate_round(n)?.1)
    }

    /// `e(n)` for non-power `n >= 1`.
    pub fn eval(&mut self, n: &BigUint) -> Result<BigUint, SigmaError> {
        let (round, zone) = self.locate_round(n)?;
        let layout = &self.layouts[(round - 1) as usize];
        match zone {
            Zone::Fill => {
                // Value = non-power ordinal inside the fill block.
                let skips = pow_count_big(&layout.fill_start, n);
                Ok(n - &layout.fill_start + 1u8 - BigUint::from(skips))
            }
            Zone::Cycle => {
                let cycle_start = layout.cycle_start.clone();
                let (first, len, offset) = self.cycle_coordinates(&cycle_start, n);
                // e(p_1) = p_k; e(p_t) = p_(t-1) for t >= 2.
                if offset == 1 {
                    Ok(mth_nonpower_big(&first, &BigUint::from(len)))
                } else {
                    Ok(mth_nonpower_big(&first, &BigUint::from(offset - 1)))
                }
            }
        }
    }

    /// For non-power `n` inside a cycle block starting at `cycle_start`:
    /// returns (first position of n's cycle, cycle length, 1-based offset of
    /// n within the cycle).
    fn cycle_coordinates(&self, cycle_start: &BigUint, n: &BigUint) -> (BigUint, u64, u64) {
        let skips = pow_count_big(cycle_start, n);
        let ord_big = n - cycle_start + 1u8 - BigUint::from(skips);
        let digits = ord_big.to_u64_digits();
        assert!(digits.len() == 1, "cycle-block ordinal exceeds u64");
        let ord = digits[0];
        // Cycles of length 1, 2, ..., r tile the block; the j-cycle covers
        // ordinals (T_(j-1), T_j] with T_j = j(j+1)/2.
        let mut len = (isqrt(8 * ord + 1) - 1) / 2;
        while len * (len + 1) / 2 < ord {
            len += 1;
        }
        while len > 1 && (len - 1) * len / 2 >= ord {
            len -= 1;
        }
        let before = (len - 1) * len / 2;
        let offset = ord - before;
        let first = mth_nonpower_big(cycle_start, &BigUint::from(before + 1));
        (first, len, offset)
    }

    /// Ascending member positions of the cycle containing non-power `n`;
    /// `n` must sit in a cycle zone.
    pub fn cycle_members_at(&mut self, n: &BigUint) -> Result<Vec<BigUint>, SigmaError> {
        let (round, zone) = self.locate_round(n)?;
        debug_assert_eq!(zone, Zone::Cycle);
        let cycle_start = self.layouts[(round - 1) as usize].cycle_start.clone();
        let (first, len, _) = self.cycle_coordinates(&cycle_start, n);
        Ok(members_from(&first, len))
    }

    /// Ascending member positions of the `i`-th cycle of length `k`.
    /// Round `r` carries one `k`-cycle for every `r >= k`, so the `i`-th is
    /// in round `k + i - 1`.
    pub fn cycle_members(&mut self, k: u64, i: u64) -> Result<Vec<BigUint>, SigmaError> {
        let round = k + i - 1;
        self.ensure_round(round)?;
        let cycle_start = &self.layouts[(round - 1) as usize].cycle_start;
        let before = (k - 1) * k / 2;
        let first = mth_nonpower_big(cycle_start, &BigUint::from(before + 1));
        Ok(members_from(&first, k))
    }

    /// The `i`-th fill position with value `v`, ascending. Every round with
    /// `cycle_end >= v` contributes exactly one.
    pub fn beta(&mut self, v: &BigUint, i: u64) -> Result<BigUint, SigmaError> {
        // cycle_end grows strictly with the round, so binary search the
        // first qualifying round, extending the memo as needed.
        while self
            .layouts
            .last()
            .map_or(true, |l| l.cycle_end < *v)
        {
            let next = self.layouts.len() as u64 + 1;
            self.ensure_round(next)?;
        }
        let first_round = self.layouts.partition_point(|l| l.cycle_end < *v) as u64 + 1;
        let round = first_round + i - 1;
        self.ensure_round(round)?;
        let layout = &self.layouts[(round - 1) as usize];
        debug_assert!(layout.cycle_end >= *v);
        Ok(mth_nonpower_big(&layout.fill_start, v))
    }
}

fn members_from(first: &BigUint, len: u64) -> Vec<BigUint> {
    let mut members = Vec::with_capacity(len as usize);
    let mut current = first.clone();
    for _ in 0..len {
        members.push(current.clone());
        current = next_nonpower_big(&current);
    }
    members
}
