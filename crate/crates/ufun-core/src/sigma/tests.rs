use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::numeral::Numeral;

/// The first 56 values under the canonical layout. Positions 31 and 33 hold
/// 9 and 10: the fill block at 23..=45 spans 23 positions, one of which
/// (32) is a power, leaving exactly 22 slots for the values 1..=22.
pub(crate) const GOLDEN_56: [u64; 56] = [
    1, 4, 1, 16, 5, 7, 6, 64, 1, 2, 3, 4, 5, 6, 7, 256, // 1..=16
    17, 19, 18, 22, 20, 21, // 17..=22
    1, 2, 3, 4, 5, 6, 7, 8, 9, // 23..=31
    1024, // 32
    10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, // 33..=45
    46, 48, 47, 51, 49, 50, 55, 52, 53, 54, // 46..=55
    1, // 56
];

fn n(x: u64) -> Numeral {
    Numeral::from_u64(x)
}

#[test]
fn golden_prefix_56() {
    let mut table = SigmaTable::new();
    table.extend_to(56).unwrap();
    for (idx, &want) in GOLDEN_56.iter().enumerate() {
        let i = idx as u64 + 1;
        assert_eq!(table.get_u64(i), Some(want), "position {i}");
    }
}

#[test]
fn extend_examples() {
    let mut table = SigmaTable::new();
    table.extend_to(7).unwrap();
    let prefix: Vec<u64> = (1..=7).map(|i| table.get_u64(i).unwrap()).collect();
    assert_eq!(prefix, vec![1, 4, 1, 16, 5, 7, 6]);

    table.extend_to(22).unwrap();
    assert_eq!(table.get_u64(20), Some(22));
    assert_eq!(table.get_u64(21), Some(20));
    assert_eq!(table.get_u64(22), Some(21));

    table.extend_to(56).unwrap();
    assert_eq!(table.get_u64(46), Some(46));
    assert_eq!(table.get_u64(47), Some(48));
    assert_eq!(table.get_u64(56), Some(1));
}

#[test]
fn extension_is_append_only() {
    // Growing in ragged steps must equal growing in one shot.
    let mut stepped = SigmaTable::new();
    for l in [1u64, 2, 3, 7, 8, 20, 21, 55, 56, 111, 112, 300, 1000] {
        stepped.extend_to(l).unwrap();
        assert_eq!(stepped.len(), l);
    }
    let mut direct = SigmaTable::new();
    direct.extend_to(1000).unwrap();
    assert_eq!(stepped.slots(), direct.slots());
    assert_eq!(stepped.phases(), direct.phases());
}

#[test]
fn extend_is_idempotent() {
    let mut table = SigmaTable::new();
    table.extend_to(100).unwrap();
    let snapshot = table.slots().to_vec();
    table.extend_to(40).unwrap();
    assert_eq!(table.len(), 100);
    assert_eq!(table.slots(), &snapshot[..]);
}

#[test]
fn slot_budget_is_enforced() {
    let mut table = SigmaTable::with_budget(100);
    assert!(matches!(
        table.extend_to(101),
        Err(SigmaError::SlotBudget { requested: 101, budget: 100 })
    ));
    table.extend_to(100).unwrap();
}

#[test]
fn round_boundaries_match_hand_layout() {
    let mut sigma = Sigma::new();
    // (cycle_start, cycle_end, fill_start, fill_end) per round.
    let expected: [(u64, u64, u64, u64); 8] = [
        (1, 1, 3, 3),
        (5, 7, 9, 15),
        (17, 22, 23, 45),
        (46, 55, 56, 111),
        (112, 126, 127, 253),
        (254, 275, 276, 551),
        (552, 579, 580, 1159),
        (1160, 1195, 1196, 2391),
    ];
    for (round0, &(cs, ce, fs, fe)) in expected.iter().enumerate() {
        let round = round0 as u64 + 1;
        let (a, b, c, d) = sigma.round_boundaries(round).unwrap();
        assert_eq!(
            (a, b, c, d),
            (cs.into(), ce.into(), fs.into(), fe.into()),
            "round {round}"
        );
    }
}

#[test]
fn eval_examples() {
    let mut sigma = Sigma::new();
    sigma.extend_to(56).unwrap();
    assert_eq!(sigma.eval(&n(8)).unwrap(), n(64));
    assert_eq!(sigma.eval(&n(31)).unwrap(), n(9));
    assert_eq!(sigma.eval(&n(33)).unwrap(), n(10));
    assert_eq!(sigma.eval(&n(56)).unwrap(), n(1));
    assert_eq!(sigma.eval(&n(45)).unwrap(), n(22));
    // Symbolic power rule at a scale no table reaches.
    let giant = Numeral::pow2(n(1_000_000_000));
    assert_eq!(
        sigma.eval(&giant).unwrap(),
        Numeral::pow2(n(2_000_000_000))
    );
}

#[test]
fn analytic_agrees_with_table() {
    let mut sigma = Sigma::new();
    sigma.extend_to(3000).unwrap();
    for i in 1..=3000u64 {
        if nat::is_power_of_two(i) {
            continue;
        }
        let table_value = sigma.table().get(i).unwrap();
        let analytic = sigma.eval_analytic(&n(i)).unwrap();
        assert_eq!(analytic, table_value, "index {i}");
    }
}

#[test]
fn analytic_rejects_powers() {
    let mut sigma = Sigma::new();
    assert!(matches!(
        sigma.eval_analytic(&n(16)),
        Err(SigmaError::PowerIndex)
    ));
}

#[test]
fn analytic_far_beyond_any_table() {
    let mut sigma = Sigma::new();
    // Fill value of a position deep in the sequence: locate analytically,
    // then confirm by the fill-block identity e(x) = ordinal.
    let x = Numeral::from_u64(10_000_000_000_000);
    let value = sigma.eval(&x).unwrap();
    // The image must be strictly below the index (tree descent).
    assert!(value < x);
    // And feeding a symbolic power through keeps exactness.
    let p = Numeral::pow2(n(999_983));
    let img = sigma.eval(&p).unwrap();
    assert_eq!(img.as_pow2_exponent().unwrap(), n(1_999_966));
}

#[test]
fn power_rule_symbolic_sweep() {
    let mut sigma = Sigma::new();
    for k in 1..=128u64 {
        let input = Numeral::pow2(n(k));
        let expect = Numeral::pow2(n(2 * k));
        assert_eq!(sigma.eval(&input).unwrap(), expect, "k={k}");
    }
}

#[test]
fn kth_cycle_anchors() {
    let mut sigma = Sigma::new();
    let loops: Vec<u64> = (1..=4)
        .map(|i| sigma.kth_cycle(1, i).unwrap().smallest().to_u64().unwrap())
        .collect();
    assert_eq!(loops, vec![1, 5, 17, 46]);

    let two: Vec<u64> = (1..=3)
        .map(|i| sigma.kth_cycle(2, i).unwrap().smallest().to_u64().unwrap())
        .collect();
    assert_eq!(two, vec![6, 18, 47]);

    let third_three = sigma.kth_cycle(3, 2).unwrap();
    let members: Vec<u64> = third_three
        .members()
        .iter()
        .map(|m| m.to_u64().unwrap())
        .collect();
    assert_eq!(members, vec![49, 50, 51]);

    let four = sigma.kth_cycle(4, 1).unwrap();
    let members: Vec<u64> = four.members().iter().map(|m| m.to_u64().unwrap()).collect();
    assert_eq!(members, vec![52, 53, 54, 55]);
}

#[test]
fn cycle_successor_order_follows_images() {
    let mut sigma = Sigma::new();
    sigma.extend_to(60).unwrap();
    let c = sigma.kth_cycle(3, 1).unwrap();
    let order: Vec<u64> = c
        .successor_order()
        .iter()
        .map(|m| m.to_u64().unwrap())
        .collect();
    assert_eq!(order, vec![20, 22, 21]);
    // Walking e around the cycle reproduces the successor order.
    let mut walk = vec![20u64];
    for _ in 0..2 {
        let next = sigma.eval(&n(*walk.last().unwrap())).unwrap();
        walk.push(next.to_u64().unwrap());
    }
    assert_eq!(walk, order);
    assert_eq!(c.predecessor_of(&n(20)).unwrap(), &n(21));
    assert_eq!(c.predecessor_of(&n(22)).unwrap(), &n(20));
}

#[test]
fn skipped_power_inside_a_cycle() {
    // Round 6 places its 2-cycle at 255 with 256 skipped from both domain
    // and image: e(255) = 257, e(257) = 255.
    let mut sigma = Sigma::new();
    sigma.extend_to(600).unwrap();
    assert_eq!(sigma.table().get_u64(255), Some(257));
    assert_eq!(sigma.table().get_u64(257), Some(255));
    assert_eq!(sigma.table().slot(256), Some(0));
    let c = sigma.kth_cycle(2, 5).unwrap();
    let members: Vec<u64> = c.members().iter().map(|m| m.to_u64().unwrap()).collect();
    assert_eq!(members, vec![255, 257]);
}

#[test]
fn partition_tags() {
    let mut sigma = Sigma::new();
    sigma.extend_to(100).unwrap();
    assert!(matches!(
        sigma.partition_tag(&n(16)).unwrap(),
        PartitionTag::P { exponent } if exponent == n(4)
    ));
    match sigma.partition_tag(&n(20)).unwrap() {
        PartitionTag::C { cycle } => {
            assert_eq!(cycle.smallest(), &n(20));
            assert_eq!(cycle.length(), 3);
        }
        other => panic!("expected cycle tag, got {other:?}"),
    }
    match sigma.partition_tag(&n(3)).unwrap() {
        PartitionTag::T { anchor, depth } => {
            assert_eq!(anchor, n(1));
            assert_eq!(depth, 1);
        }
        other => panic!("expected tree tag, got {other:?}"),
    }
}

#[test]
fn beta_examples() {
    let mut sigma = Sigma::new();
    let firsts: Vec<u64> = (1..=4)
        .map(|i| sigma.beta(&n(1), i).unwrap().to_u64().unwrap())
        .collect();
    assert_eq!(firsts, vec![3, 9, 23, 56]);
    assert_eq!(sigma.beta(&n(2), 1).unwrap(), n(10));
    assert_eq!(sigma.beta(&n(20), 1).unwrap(), n(43));
}

#[test]
fn beta_scan_agrees_with_analytic() {
    let mut sigma = Sigma::new();
    sigma.extend_to(20_000).unwrap();
    for v in 1..=40u64 {
        for i in 1..=5u64 {
            let analytic = sigma.beta(&n(v), i).unwrap().to_u64().unwrap();
            if let Some(scanned) = sigma.beta_scan(v, i) {
                assert_eq!(scanned, analytic, "v={v} i={i}");
            }
        }
    }
}

#[test]
fn beta_skips_in_cycle_predecessors() {
    // 257 maps to 255 but sits in a cycle; the first tree preimage of 255
    // is a fill position further out.
    let mut sigma = Sigma::new();
    let b = sigma.beta(&n(255), 1).unwrap().to_u64().unwrap();
    assert_ne!(b, 257);
    sigma.extend_to(b).unwrap();
    assert_eq!(sigma.table().get_u64(b), Some(255));
    assert!(sigma.cycle_of(&n(b)).unwrap().is_none());
    assert_eq!(b, 531);
}

#[test]
fn beta_on_symbolic_target() {
    let mut sigma = Sigma::new();
    // v = 2^16: first tree preimage must satisfy e(x) = v.
    let v = Numeral::pow2(n(16));
    let x = sigma.beta(&v, 1).unwrap();
    assert_eq!(sigma.eval(&x).unwrap(), v);
    // A tower too tall for the round budget is refused, not mangled.
    let huge = Numeral::pow2(Numeral::pow2(n(40)));
    assert!(matches!(
        sigma.beta(&huge, 1),
        Err(SigmaError::RoundBudget { .. })
    ));
}

#[test]
fn image_occurrence_counts() {
    let mut sigma = Sigma::new();
    assert_eq!(sigma.image_occurrences(&n(6), 16).unwrap(), 2); // positions 7, 14
    assert_eq!(sigma.image_occurrences(&n(46), 56).unwrap(), 1); // position 46
    // Value 1 appears at the loop position 1 and at fills 3, 9, 23, 56.
    assert_eq!(sigma.image_occurrences(&n(1), 56).unwrap(), 5);
    // Power images count too: e(2) = 4 and the fills at 12, 26.
    assert_eq!(sigma.image_occurrences(&n(4), 26).unwrap(), 3);
}

#[test]
fn cache_roundtrip() {
    let mut table = SigmaTable::new();
    table.extend_to(5000).unwrap();
    let bytes = table.to_bytes();
    let loaded = SigmaTable::from_bytes(&bytes, DEFAULT_SLOT_BUDGET).unwrap();
    assert_eq!(loaded.len(), table.len());
    assert_eq!(loaded.slots(), table.slots());
    assert_eq!(loaded.phases(), table.phases());
}

#[test]
fn cache_load_then_extend_matches_direct() {
    let mut table = SigmaTable::new();
    table.extend_to(777).unwrap();
    let bytes = table.to_bytes();
    let mut loaded = SigmaTable::from_bytes(&bytes, DEFAULT_SLOT_BUDGET).unwrap();
    loaded.extend_to(2000).unwrap();
    let mut direct = SigmaTable::new();
    direct.extend_to(2000).unwrap();
    assert_eq!(loaded.slots(), direct.slots());
    assert_eq!(loaded.phases(), direct.phases());
}

#[test]
fn cache_rejects_corruption() {
    let mut table = SigmaTable::new();
    table.extend_to(100).unwrap();
    let bytes = table.to_bytes();

    let truncated = &bytes[..bytes.len() - 3];
    assert!(matches!(
        SigmaTable::from_bytes(truncated, DEFAULT_SLOT_BUDGET),
        Err(SigmaError::Codec(CodecError::Truncated))
    ));

    let mut flipped = bytes.clone();
    let mid = flipped.len() / 2;
    flipped[mid] ^= 0xff;
    assert!(matches!(
        SigmaTable::from_bytes(&flipped, DEFAULT_SLOT_BUDGET),
        Err(SigmaError::Codec(CodecError::ChecksumMismatch))
    ));

    let mut wrong_magic = bytes.clone();
    wrong_magic[0] = b'X';
    assert!(matches!(
        SigmaTable::from_bytes(&wrong_magic, DEFAULT_SLOT_BUDGET),
        Err(SigmaError::Codec(CodecError::BadMagic))
    ));

    let mut wrong_version = bytes;
    wrong_version[4] = 9;
    assert!(matches!(
        SigmaTable::from_bytes(&wrong_version, DEFAULT_SLOT_BUDGET),
        Err(SigmaError::Codec(CodecError::BadVersion(9)))
    ));
}

#[test]
fn descent_and_partition_over_prefix() {
    let mut table = SigmaTable::new();
    let l = 50_000u64;
    table.extend_to(l).unwrap();
    for i in 1..=l {
        if nat::is_power_of_two(i) {
            assert_eq!(table.slot(i), Some(0));
            continue;
        }
        let block = table.block_at(i).expect("covered");
        match block {
            PhaseRecord::FillBlock { .. } => {
                assert!(table.get_u64(i).unwrap() < i, "descent at {i}");
            }
            PhaseRecord::CycleBlock { .. } => {}
            PhaseRecord::PowerSkip { .. } => panic!("skip record cannot contain {i}"),
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn analytic_matches_table_on_random_indices(i in 1u64..200_000) {
            prop_assume!(!nat::is_power_of_two(i));
            let mut sigma = Sigma::new();
            sigma.extend_to(200_000).unwrap();
            let t = sigma.table().get(i).unwrap();
            let a = sigma.eval_analytic(&Numeral::from_u64(i)).unwrap();
            prop_assert_eq!(t, a);
        }

        #[test]
        fn beta_inverts_eval(v in 1u64..500, i in 1u64..6) {
            let mut sigma = Sigma::new();
            let x = sigma.beta(&Numeral::from_u64(v), i).unwrap();
            let back = sigma.eval(&x).unwrap();
            prop_assert_eq!(back, Numeral::from_u64(v));
        }
    }
}
