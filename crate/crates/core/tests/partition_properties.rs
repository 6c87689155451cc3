use bm_poisson::partitions::{
    adapted_partition, enumerate_outer_pair_inner_singleton, enumerate_pair, enumerate_pair_inner_singleton,
    epsilon_of_partition, partition_of_epsilon, EpsilonSequence, Partition,
};
use proptest::prelude::*;

/// Random admissible sign sequence: a Motzkin-like walk that returns to zero,
/// starts with `+`, ends with `-` and only places `0` at positive height.
fn admissible(max_half: usize) -> impl Strategy<Value = EpsilonSequence> {
    proptest::collection::vec(0u8..3, 0..3 * max_half).prop_map(|choices| {
        let mut e = vec![1i8];
        let mut h = 1i32;
        for c in choices {
            match c {
                0 => {
                    e.push(1);
                    h += 1;
                }
                1 if h > 1 => {
                    e.push(-1);
                    h -= 1;
                }
                _ => e.push(0),
            }
        }
        while h > 0 {
            e.push(-1);
            h -= 1;
        }
        EpsilonSequence::new(e).unwrap()
    })
}

proptest! {
    #[test]
    fn epsilon_round_trip(e in admissible(6)) {
        prop_assert!(e.is_admissible());
        let pi = partition_of_epsilon(&e).unwrap();
        prop_assert!(pi.is_noncrossing());
        prop_assert!(pi.outer_singleton().is_none());
        prop_assert_eq!(epsilon_of_partition(&pi).unwrap(), e);
    }

    #[test]
    fn text_round_trip(e in admissible(6)) {
        let pi = partition_of_epsilon(&e).unwrap();
        let back: Partition = pi.to_string().parse().unwrap();
        prop_assert_eq!(&back, &pi);
        let json = serde_json::to_string(&pi).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), pi);
        prop_assert_eq!(e.to_string().parse::<EpsilonSequence>().unwrap(), e);
    }

    #[test]
    fn reduce_keeps_pairs(e in admissible(6)) {
        let pi = partition_of_epsilon(&e).unwrap();
        let r = pi.reduce();
        prop_assert_eq!(r.num_blocks(), pi.num_blocks() - pi.num_singletons());
        prop_assert_eq!(r.p(), pi.p() - pi.num_singletons());
        prop_assert!(r.is_pair_partition() && r.is_noncrossing());
        prop_assert_eq!(r.reduce(), r);
    }

    #[test]
    fn nesting_forest_is_consistent(e in admissible(6)) {
        let pi = partition_of_epsilon(&e).unwrap();
        let nest = pi.structure().unwrap();
        for j in 0..pi.num_blocks() {
            match nest.parent(j) {
                Some(i) => {
                    prop_assert!(pi.is_inside(i, j));
                    // no block sits strictly between a block and its parent
                    for k in 0..pi.num_blocks() {
                        prop_assert!(!(pi.is_inside(i, k) && pi.is_inside(k, j)));
                    }
                    prop_assert!(nest.children(i).contains(&j));
                }
                None => {
                    prop_assert!((0..pi.num_blocks()).all(|i| !pi.is_inside(i, j)));
                    prop_assert_eq!(pi.block(j).len(), 2);
                }
            }
        }
        let total: usize = nest.roots().map(|r| nest.subtree_size(r)).sum();
        prop_assert_eq!(total, pi.num_blocks());
    }

    #[test]
    fn adapted_partition_groups_labels(seq in proptest::collection::vec(0u8..4, 1..10)) {
        let (pi, labels) = adapted_partition(&seq);
        prop_assert_eq!(pi.p(), seq.len());
        prop_assert_eq!(labels.len(), pi.num_blocks());
        for (b, l) in pi.blocks().iter().zip(&labels) {
            prop_assert!(b.iter().all(|&x| seq[x - 1] == *l));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), labels.len());
    }
}

#[test]
fn riordan_and_catalan_counts() {
    let riordan = [0usize, 1, 1, 3, 6, 15, 36, 91, 232, 603, 1585, 4213];
    for (i, want) in riordan.iter().enumerate() {
        assert_eq!(enumerate_pair_inner_singleton(i + 1).len(), *want, "p={}", i + 1);
    }
    let catalan = [1usize, 2, 5, 14, 42, 132];
    for (i, want) in catalan.iter().enumerate() {
        assert_eq!(enumerate_pair(2 * i + 2).unwrap().len(), *want);
    }
}

#[test]
fn outer_pair_classes_follow_the_recursion() {
    // a_p(1) counts these partitions and follows a_p = a_{p-1} + a_{p-2}
    let counts: Vec<usize> = (1..=14).map(|p| enumerate_outer_pair_inner_singleton(p).len()).collect();
    for w in counts.windows(3) {
        assert_eq!(w[2], w[1] + w[0]);
    }
    for p in 1..=10 {
        let all = enumerate_pair_inner_singleton(p);
        for pi in enumerate_outer_pair_inner_singleton(p) {
            assert!(all.contains(&pi));
        }
    }
}

#[test]
fn enumeration_is_sorted_and_unique() {
    for p in 1..=10 {
        let v = enumerate_pair_inner_singleton(p);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
