//! Cache byte format for a materialized prefix.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic   4 bytes  "SIG1"
//! version 1 byte   0x01
//! length  u64      number of slots
//! slots   u64 * L  slot i-1 holds e(i); power positions hold 0
//! check   u64      FNV-1a 64 over every preceding byte
//! ```
//!
//! Non-power values are below `2i` by construction, so they fit `u64` for
//! any length below `2^62`. Power positions are recomputed from the squaring
//! rule on load, and the phase log is replanned (it is a pure function of
//! the length), so a loaded table is indistinguishable from a freshly
//! generated one.

use alloc::vec::Vec;
use core::fmt;

use super::{SigmaError, SigmaTable};

pub(super) const MAGIC: &[u8; 4] = b"SIG1";
pub(super) const VERSION: u8 = 1;

/// Cache decoding failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodecError {
    BadMagic,
    BadVersion(u8),
    Truncated,
    TrailingBytes,
    ChecksumMismatch,
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::BadMagic => write!(f, "cache file has the wrong magic"),
            CodecError::BadVersion(v) => write!(f, "unsupported cache format version {v}"),
            CodecError::Truncated => write!(f, "cache file is truncated"),
            CodecError::TrailingBytes => write!(f, "cache file has trailing bytes"),
            CodecError::ChecksumMismatch => write!(f, "cache file checksum mismatch"),
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub(super) fn encode(table: &SigmaTable) -> Vec<u8> {
    let slots = table.slots();
    let mut out = Vec::with_capacity(4 + 1 + 8 + slots.len() * 8 + 8);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(slots.len() as u64).to_le_bytes());
    for &v in slots {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let check = fnv1a64(&out);
    out.extend_from_slice(&check.to_le_bytes());
    out
}

pub(super) fn decode(bytes: &[u8], slot_budget: u64) -> Result<SigmaTable, SigmaError> {
    const HEADER: usize = 4 + 1 + 8;
    if bytes.len() < HEADER + 8 {
        return Err(CodecError::Truncated.into());
    }
    if &bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic.into());
    }
    if bytes[4] != VERSION {
        return Err(CodecError::BadVersion(bytes[4]).into());
    }
    let len = u64::from_le_bytes(bytes[5..13].try_into().expect("sized slice"));
    if len > slot_budget {
        return Err(SigmaError::SlotBudget {
            requested: len,
            budget: slot_budget,
        });
    }
    let body_end = HEADER
        .checked_add((len as usize).checked_mul(8).ok_or(CodecError::Truncated)?)
        .ok_or(CodecError::Truncated)?;
    match bytes.len().checked_sub(body_end) {
        None | Some(0..=7) => return Err(CodecError::Truncated.into()),
        Some(8) => {}
        Some(_) => return Err(CodecError::TrailingBytes.into()),
    }
    let stored = u64::from_le_bytes(bytes[body_end..body_end + 8].try_into().expect("sized"));
    if fnv1a64(&bytes[..body_end]) != stored {
        return Err(CodecError::ChecksumMismatch.into());
    }
    let mut values = Vec::with_capacity(len as usize);
    for chunk in bytes[HEADER..body_end].chunks_exact(8) {
        values.push(u64::from_le_bytes(chunk.try_into().expect("sized")));
    }
    Ok(SigmaTable::replan(values, slot_budget))
}
