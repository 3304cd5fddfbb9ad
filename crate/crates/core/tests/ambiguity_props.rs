use loopkit::ambiguity::{indistinguishable_family, verify_counterexample};
use loopkit::emp::{contiguous_blocks, CoveringEmps, Emp};
use loopkit::exactalg::{int, rat};
use loopkit::loopnet::LoopNetwork;
use loopkit::Error;

#[test]
fn family_composes_multiplicatively() {
    let emp = Emp::from_pattern("MEEEMM").unwrap();
    for seed in 0..5 {
        let net = LoopNetwork::random(6, seed, 1).unwrap();
        let (l1, l2) = (rat(3, 2), int(-4));
        let twice = indistinguishable_family(
            &indistinguishable_family(&net, &emp, &l1).unwrap(),
            &emp,
            &l2,
        )
        .unwrap();
        let once = indistinguishable_family(&net, &emp, &(&l1 * &l2)).unwrap();
        assert_eq!(twice, once);
        // loop product moves along 1 - P' = λ (1 - P)
        let expected = net.loop_product().one_minus().unwrap().scale(&(&l1 * &l2));
        assert_eq!(once.loop_product().one_minus().unwrap(), expected);
    }
}

#[test]
fn every_two_sided_contiguous_pattern_is_certified() {
    for n in 4..=6 {
        for emp in CoveringEmps::new(n).unwrap() {
            let Some((excited, measured)) = contiguous_blocks(&emp) else {
                continue;
            };
            if excited.len() < 2 || measured.len() < 2 {
                continue;
            }
            let last_excited = *excited.last().unwrap();
            let last_measured = *measured.last().unwrap();
            for seed in 0..3 {
                let net = LoopNetwork::random(n, 100 * n as u64 + seed, 1).unwrap();
                let alt = indistinguishable_family(&net, &emp, &int(2)).unwrap();
                let report = verify_counterexample(&net, &alt, &emp).unwrap();
                assert!(report.certified(), "{emp}");
                let mut expected = vec![(last_excited, measured[0]), (last_measured, excited[0])];
                expected.sort();
                assert_eq!(report.differing_edges, expected, "{emp}");
            }
        }
    }
}

#[test]
fn one_sided_blocks_still_give_a_witness() {
    // a single excited node: the family exists, though the edges it moves
    // are the two edges touching that node
    let net = LoopNetwork::random(4, 8, 1).unwrap();
    let emp = Emp::from_pattern("MEMM").unwrap();
    let alt = indistinguishable_family(&net, &emp, &int(3)).unwrap();
    let report = verify_counterexample(&net, &alt, &emp).unwrap();
    assert!(report.certified());
    assert_eq!(report.differing_edges, vec![(1, 2), (2, 3)]);
}

#[test]
fn other_shapes_are_rejected() {
    let net = LoopNetwork::random(4, 1, 1).unwrap();
    for pattern in ["MEME", "BEMM", "EEM-"] {
        let emp = Emp::from_pattern(pattern).unwrap();
        assert!(
            matches!(
                indistinguishable_family(&net, &emp, &int(2)),
                Err(Error::Domain(_))
            ),
            "{pattern}"
        );
    }
    let emp = Emp::from_pattern("EEMM").unwrap();
    for lambda in [int(0), int(1)] {
        assert!(indistinguishable_family(&net, &emp, &lambda).is_err());
    }
}
