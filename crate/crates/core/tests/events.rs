use cubic_percolation::events::{
    centre_cluster_reaches_surface_twice, lower_event, upper_event, verify_lower_witness,
    verify_upper_witness, Witness,
};
use cubic_percolation::lattice::{sample_block, sample_rect};
use cubic_percolation::oracle::{lower_event_oracle, upper_event_oracle};
use cubic_percolation::symmetry::CubeSymmetry;
use cubic_percolation::{BlockGeometry, Kind, RectGeometry};
use proptest::prelude::*;

#[test]
fn lower_detector_matches_oracle_both_kinds() {
    for kind in [Kind::Bond, Kind::Site] {
        let g = BlockGeometry::new(8, kind).unwrap();
        let ps: &[f64] = match kind {
            Kind::Bond => &[0.2, 0.2488, 0.3, 0.4],
            Kind::Site => &[0.3, 0.3116, 0.4, 0.5],
        };
        for &p in ps {
            let mut positives = 0;
            for seed in 0..400 {
                let s = sample_block(&g, p, 10_000 + seed).unwrap();
                let fast = lower_event(&s, &g).unwrap();
                let slow = lower_event_oracle(&s, &g).unwrap();
                assert_eq!(fast.holds, slow, "{kind} p={p} seed={seed}");
                positives += fast.holds as usize;
            }
            eprintln!("{kind} p={p}: {positives}/400 blocks open");
        }
    }
}

#[test]
fn upper_detector_matches_oracle_both_kinds() {
    for kind in [Kind::Bond, Kind::Site] {
        let r = RectGeometry::new(4, kind).unwrap();
        for p in [0.15, 0.2488, 0.35, 0.6] {
            for seed in 0..400 {
                let s = sample_rect(&r, p, seed).unwrap();
                let fast = upper_event(&s, &r).unwrap();
                assert_eq!(
                    fast.holds,
                    upper_event_oracle(&s, &r).unwrap(),
                    "{kind} p={p} seed={seed}"
                );
                if let Some(Witness::Upper(w)) = &fast.witness {
                    assert!(verify_upper_witness(&s, &r, w));
                }
            }
        }
    }
}

#[test]
fn site_kind_witnesses_verify() {
    let g = BlockGeometry::new(12, Kind::Site).unwrap();
    for seed in 0..100 {
        let s = sample_block(&g, 0.45, seed).unwrap();
        let res = lower_event(&s, &g).unwrap();
        if let Some(Witness::Lower(w)) = &res.witness {
            assert!(verify_lower_witness(&s, &g, w));
            assert!(centre_cluster_reaches_surface_twice(&s, &g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_invariant_under_cube_symmetries(seed in any::<u64>(), p in 0.15f64..0.45, sym in 0usize..48) {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        let s = sample_block(&g, p, seed).unwrap();
        let g_sym = CubeSymmetry::all()[sym];
        let t = s.transformed(&g_sym).unwrap();
        prop_assert_eq!(lower_event(&s, &g).unwrap().holds, lower_event(&t, &g).unwrap().holds);

        let r = RectGeometry::new(4, Kind::Bond).unwrap();
        let rs = sample_rect(&r, p, seed).unwrap();
        if g_sym.preserves_dims(r.grid().dims()) {
            let rt = rs.transformed(&g_sym).unwrap();
            prop_assert_eq!(upper_event(&rs, &r).unwrap().holds, upper_event(&rt, &r).unwrap().holds);
        }
    }

    #[test]
    fn events_monotone_under_coupling(seed in any::<u64>(), p1 in 0.0f64..1.0, dp in 0.0f64..0.3) {
        let p2 = (p1 + dp).min(1.0);
        for kind in [Kind::Bond, Kind::Site] {
            let g = BlockGeometry::new(8, kind).unwrap();
            let a = sample_block(&g, p1, seed).unwrap();
            let b = sample_block(&g, p2, seed).unwrap();
            prop_assert!(a.is_subset_of(&b));
            if lower_event(&a, &g).unwrap().holds {
                prop_assert!(lower_event(&b, &g).unwrap().holds);
            }
        }
    }
}
