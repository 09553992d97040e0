use plane_breaker_core::graphstate::{
    AxisTarget, GraphState, ViewCommand, ZoomDirection, MAX_SPAN, MIN_SPAN,
};
use plane_breaker_testkit::random_command;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_invariants(s: &GraphState) {
    for a in [s.axes().x, s.axes().y, s.axes().z] {
        assert!((MIN_SPAN..=MAX_SPAN).contains(&a.span()), "{a:?}");
        assert!(a.min().is_finite() && a.max().is_finite() && a.min() < a.max());
    }
    // Derived domain and limits construct without panicking.
    let _ = (s.domain(), s.z_limits());
}

#[test]
fn long_random_walk_keeps_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut s = GraphState::default();
    for _ in 0..20_000 {
        s = s.apply_command(random_command(&mut rng)).unwrap();
        check_invariants(&s);
    }
}

#[test]
fn far_away_tiny_spans_stay_resolvable() {
    let mut s = GraphState::default();
    for _ in 0..100 {
        s = s.zoom(ZoomDirection::Out, AxisTarget::InputDomain);
    }
    for _ in 0..2_000 {
        s = s.pan(100, -100);
    }
    for _ in 0..200 {
        s = s.zoom(ZoomDirection::In, AxisTarget::InputDomain);
        check_invariants(&s);
    }
}

fn arb_command() -> impl Strategy<Value = ViewCommand> {
    any::<u64>().prop_map(|seed| random_command(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn reset_absorbs_history(cmds in prop::collection::vec(arb_command(), 0..64)) {
        let start = GraphState::default();
        let end = cmds.iter().fold(start.clone(), |s, &c| s.apply_command(c).unwrap());
        let reset = end.reset();
        prop_assert_eq!(reset.axes(), start.axes());
    }

    #[test]
    fn pan_commutes_with_transpose(a in -100i32..=100, b in -100i32..=100, cmds in prop::collection::vec(arb_command(), 0..16)) {
        let s = cmds.iter().fold(GraphState::default(), |s, &c| s.apply_command(c).unwrap());
        prop_assert_eq!(s.transposed().pan(a, b), s.pan(b, a).transposed());
    }

    #[test]
    fn zoom_in_out_is_identity(cmds in prop::collection::vec(arb_command(), 0..16), z in any::<bool>()) {
        let s = cmds.iter().fold(GraphState::default(), |s, &c| s.apply_command(c).unwrap());
        let target = if z { AxisTarget::ZAxis } else { AxisTarget::InputDomain };
        let t = s.zoom(ZoomDirection::In, target).zoom(ZoomDirection::Out, target);
        for (a, b) in [(s.axes().x, t.axes().x), (s.axes().y, t.axes().y), (s.axes().z, t.axes().z)] {
            // Clamped spans cannot be undone; skip those.
            if a.span() / 1.25 >= MIN_SPAN {
                prop_assert!((a.span() - b.span()).abs() <= 1e-12 * a.span());
            }
            prop_assert_eq!(a.center(), b.center());
        }
    }

    #[test]
    fn out_of_range_steps_rejected(dx in 101i32..10_000, neg in any::<bool>()) {
        let dx = if neg { -dx } else { dx };
        let s = GraphState::default();
        let horizontal = ViewCommand::Pan { dx_steps: dx, dy_steps: 0 };
        let vertical = ViewCommand::Pan { dx_steps: 0, dy_steps: dx };
        prop_assert!(s.apply_command(horizontal).is_err());
        prop_assert!(s.apply_command(vertical).is_err());
    }
}
