use proptest::prelude::*;

use xi_core::chambers::count_chambers;
use xi_core::completion::completed_signed_contour;
use xi_core::contour::{attained_classes, Sampling};
use xi_core::spectrum::{analyze, DEFAULT_RANK_TOL};
use xi_core::zeroset::{fiber_move, topology_signature, ExpSum, SignatureOptions};
use xi_core::Spectrum;

const PENTA: [[f64; 5]; 2] = [[0., 1., 0., 4., 1.], [0., 0., 1., 1., 4.]];

fn transformed(m: [[f64; 2]; 2], shift: [f64; 2]) -> Spectrum {
    let rows: Vec<Vec<f64>> = (0..2)
        .map(|i| {
            (0..5)
                .map(|j| m[i][0] * PENTA[0][j] + m[i][1] * PENTA[1][j] + shift[i])
                .collect()
        })
        .collect();
    Spectrum::from_rows(&rows).unwrap()
}

fn counts(spec: &Spectrum) -> Vec<(String, usize, usize)> {
    let (_, b) = analyze(spec, DEFAULT_RANK_TOL).unwrap();
    attained_classes(&b)
        .unwrap()
        .iter()
        .map(|s| {
            let c = completed_signed_contour(spec, &b, s, &Sampling::default().with_window(16.0))
                .unwrap();
            let cc = count_chambers(&c, 8.0).unwrap();
            (s.to_string(), cc.count, cc.bounded)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn chamber_counts_ignore_affine_changes_of_exponents(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
        sx in -3.0f64..3.0, sy in -3.0f64..3.0,
    ) {
        let det: f64 = a * d - b * c;
        prop_assume!(det.abs() > 0.2);
        let expected = counts(&transformed([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]));
        prop_assert_eq!(counts(&transformed([[a, b], [c, d]], [sx, sy])), expected);
    }

    #[test]
    fn signature_ignores_fiber_moves(s0 in -1.5f64..1.5, s1 in -1.5f64..1.5, s2 in -1.5f64..1.5) {
        let inf = Spectrum::from_rows(&[vec![0., 1., 0., 2., 0.], vec![0., 0., 1., 0., 2.]]).unwrap();
        let c = vec![3.25, 1.0, -4.0, 1.0, 1.0];
        let moved = fiber_move(&inf, &c, &[s0, s1, s2]);
        let opts = SignatureOptions { check_refinement: false, ..SignatureOptions::default() };
        let base = topology_signature(&ExpSum::new(inf.clone(), c).unwrap(), &opts).unwrap();
        let other = topology_signature(&ExpSum::new(inf, moved).unwrap(), &opts).unwrap();
        prop_assert_eq!(base.signature, other.signature);
    }
}
