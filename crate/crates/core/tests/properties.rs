use std::collections::BTreeMap;

use proptest::prelude::*;

use sciai_core::analytics::{field_grouping, smooth3, top_five_percent, FieldGroup};
use sciai_core::scoring::{
    combine_capability, pairwise_sum, percentile_rank, CapabilitySupport, Normalization, SparseVector,
};
use sciai_core::Counts;

fn docs() -> impl Strategy<Value = Vec<Vec<u8>>> {
    proptest::collection::vec(proptest::collection::vec(0u8..12, 0..8), 0..60)
}

fn weights() -> impl Strategy<Value = Vec<(u8, f64)>> {
    proptest::collection::vec((0u8..20, 0.0f64..10.0), 0..15)
}

proptest! {
    #[test]
    fn sharded_counts_equal_sequential(d in docs(), shards in 1usize..9, unique in any::<bool>()) {
        let mut seq = Counts::new();
        for doc in &d {
            seq.add_doc(doc, unique);
        }
        let par = Counts::from_docs(&d, shards, unique, |x: &Vec<u8>| x.clone());
        prop_assert_eq!(par, seq);
    }

    #[test]
    fn merge_is_commutative(a in docs(), b in docs()) {
        let ca = Counts::from_docs(&a, 1, false, |x: &Vec<u8>| x.clone());
        let cb = Counts::from_docs(&b, 1, false, |x: &Vec<u8>| x.clone());
        prop_assert_eq!(ca.clone().merged(cb.clone()), cb.merged(ca));
    }

    #[test]
    fn normalized_vectors_sum_to_one(w in weights()) {
        let v = SparseVector::from_weights(w, Normalization::Raw).normalized();
        if !v.is_empty() {
            prop_assert!((v.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn union_capability_stays_a_distribution(a in weights(), b in weights()) {
        let pa = SparseVector::from_weights(a, Normalization::Raw).normalized();
        let pb = SparseVector::from_weights(b, Normalization::Raw).normalized();
        let c = combine_capability(&pa, Some(&pb), CapabilitySupport::Union);
        if !(pa.is_empty() && pb.is_empty()) {
            prop_assert!((c.sum() - 1.0).abs() < 1e-12);
        }
        let i = combine_capability(&pa, Some(&pb), CapabilitySupport::Intersection);
        prop_assert!(i.sum() <= 1.0 + 1e-12);
    }

    #[test]
    fn pairwise_sum_close_to_naive(xs in proptest::collection::vec(-1e6f64..1e6, 0..300)) {
        let naive: f64 = xs.iter().sum();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-12 * scale);
    }

    #[test]
    fn percentiles_are_monotone_and_bounded(v in proptest::collection::vec(proptest::option::of(0u8..10), 2..30)) {
        let scores: BTreeMap<usize, Option<f64>> = v.iter().enumerate().map(|(i, x)| (i, x.map(f64::from))).collect();
        match percentile_rank(&scores) {
            Ok(p) => {
                prop_assert_eq!(p.len(), v.iter().flatten().count());
                for (i, pi) in &p {
                    prop_assert!((0.0..=100.0).contains(pi));
                    for (j, pj) in &p {
                        if scores[i] < scores[j] {
                            prop_assert!(pi < pj);
                        }
                        if scores[i] == scores[j] {
                            prop_assert_eq!(pi, pj);
                        }
                    }
                }
            }
            Err(_) => prop_assert!(v.iter().flatten().count() < 2),
        }
    }

    #[test]
    fn smoothing_keeps_nulls_and_stays_in_range(v in proptest::collection::vec(proptest::option::of(0.0f64..1.0), 0..25)) {
        let s = smooth3(&v);
        prop_assert_eq!(s.len(), v.len());
        for i in 0..v.len() {
            prop_assert_eq!(s[i].is_none(), v[i].is_none());
            if let Some(x) = s[i] {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(v.len() - 1);
                let nb: Vec<f64> = v[lo..=hi].iter().flatten().copied().collect();
                let (mn, mx) = nb.iter().fold((f64::MAX, f64::MIN), |(a, b), y| (a.min(*y), b.max(*y)));
                prop_assert!(x >= mn - 1e-15 && x <= mx + 1e-15);
            }
        }
    }

    #[test]
    fn grouping_sizes_and_order(pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..40), q in 0.0f64..=0.5) {
        let direct: BTreeMap<String, Option<f64>> = pts.iter().enumerate().map(|(i, p)| (format!("f{i:02}"), Some(p.0))).collect();
        let potential: BTreeMap<String, Option<f64>> = pts.iter().enumerate().map(|(i, p)| (format!("f{i:02}"), Some(p.1))).collect();
        let Ok(g) = field_grouping(&direct, &potential, 2019, q) else {
            return Ok(());
        };
        let n = pts.len();
        let k = ((q * n as f64 + 1e-9).floor() as usize).min(n / 2);
        let hd: Vec<f64> = g.rows.iter().filter(|r| r.group == FieldGroup::HigherDirect).map(|r| r.residual).collect();
        let hp: Vec<f64> = g.rows.iter().filter(|r| r.group == FieldGroup::HigherPotential).map(|r| r.residual).collect();
        prop_assert_eq!(hd.len(), k);
        prop_assert_eq!(hp.len(), k);
        let others_max = g.rows.iter().filter(|r| r.group == FieldGroup::Others).map(|r| r.residual).fold(f64::MIN, f64::max);
        let others_min = g.rows.iter().filter(|r| r.group == FieldGroup::Others).map(|r| r.residual).fold(f64::MAX, f64::min);
        for r in &hd {
            prop_assert!(*r >= others_max);
        }
        for r in &hp {
            prop_assert!(*r <= others_min);
        }
    }

    #[test]
    fn five_percent_rule(n in 0usize..5000) {
        let k = top_five_percent(n);
        prop_assert_eq!(k, n.div_ceil(20));
        prop_assert!(k * 20 >= n && (n == 0 || (k - 1) * 20 < n));
    }
}
