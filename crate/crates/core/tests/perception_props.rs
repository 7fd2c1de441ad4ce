use proptest::prelude::*;
use yui_core::perception::*;

proptest! {
    #[test]
    fn mirrored_ears_swap_channels(az in -180.0..180.0f64, d in 0.1..20.0f64) {
        let ears = EarPair::default();
        let (l, r) = ear_gains(&SoundSource::new(az, d).unwrap(), 0.0, &ears);
        let (ml, mr) = ear_gains(&SoundSource::new(-az, d).unwrap(), 0.0, &ears);
        prop_assert!((l - mr).abs() <= 1e-12 && (r - ml).abs() <= 1e-12);
        prop_assert!(l > 0.0 && l <= 1.0 && r > 0.0 && r <= 1.0);
    }

    #[test]
    fn gains_fall_with_distance(az in -180.0..180.0f64, d in 0.05..50.0f64, k in 1.001..4.0f64) {
        let ears = EarPair::default();
        let (l1, r1) = ear_gains(&SoundSource::new(az, d).unwrap(), 0.0, &ears);
        let (l2, r2) = ear_gains(&SoundSource::new(az, d * k).unwrap(), 0.0, &ears);
        prop_assert!(l2 < l1 && r2 < r1);
    }

    #[test]
    fn head_turn_is_relative(az in -180.0..180.0f64, yaw in -83.0..83.0f64) {
        let ears = EarPair::default();
        let turned = ear_gains(&SoundSource::new(az, 1.0).unwrap(), yaw, &ears);
        let relative = ear_gains(&SoundSource::new(az - yaw, 1.0).unwrap(), 0.0, &ears);
        prop_assert!((turned.0 - relative.0).abs() <= 1e-12);
        prop_assert!((turned.1 - relative.1).abs() <= 1e-12);
    }

    #[test]
    fn render_is_length_exact(ms in 1u64..400, cycle_ms in 1u64..40, rate in prop::sample::select(vec![16_000u32, 44_100, 48_000])) {
        let dur = ms * 1_000_000;
        let w = Waveform::tone(300.0, 0.5, dur, rate);
        let s = SoundSource::new(45.0, 1.0).unwrap();
        let frames: Vec<_> = render_stereo(&w, &s, 0.0, &EarPair::default(), dur, cycle_ms * 1_000_000, 0)
            .unwrap()
            .collect();
        let total: usize = frames.iter().map(StereoFrame::len).sum();
        prop_assert_eq!(total, w.samples.len());
        for (i, f) in frames.iter().enumerate() {
            prop_assert_eq!(f.sample_rate, rate);
            prop_assert_eq!(f.left.len(), f.right.len());
            prop_assert_eq!(f.sequence, i as u64);
            if i + 1 < frames.len() {
                prop_assert_eq!(f.len(), frames[0].len());
            }
        }
    }

    #[test]
    fn disparity_falls_with_depth(
        x in -0.2..0.2f64,
        y in -0.2..0.2f64,
        z1 in 0.3..10.0f64,
        dz in 0.01..5.0f64,
    ) {
        let g = EyeGeometry::default();
        let near = project_stereo(Point3::new(x, y, z1), &g).unwrap().disparity();
        let far = project_stereo(Point3::new(x, y, z1 + dz), &g).unwrap().disparity();
        prop_assert!(near > far && far > 0.0);
        prop_assert!((near - g.focal_length * g.baseline_m / z1).abs() <= 1e-9);
    }
}
