use nyquist_core::synth::ChangeEvent;
use nyquist_core::{Component, SignalSpec, TimePoint, TimeSeries};
use nyquist_monitor::{format_spec, format_trace, parse_spec, parse_trace};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, -1e-6f64..1e-6, Just(0.0)]
}

fn component() -> impl Strategy<Value = Component> {
    (0.0f64..1e4, 0.0f64..1e3, -10.0f64..10.0).prop_map(|(f, a, p)| Component::new(f, a, p))
}

fn spec() -> impl Strategy<Value = SignalSpec> {
    (
        proptest::collection::vec(component(), 0..5),
        finite(),
        finite(),
        0.0f64..10.0,
        any::<u64>(),
        proptest::collection::vec((0.0f64..1e5, proptest::collection::vec(component(), 0..3)), 0..3),
    )
        .prop_map(|(components, offset, trend, noise, seed, mut changes)| {
            changes.sort_by(|a, b| a.0.total_cmp(&b.0));
            SignalSpec {
                components,
                offset,
                trend,
                noise_amplitude: noise,
                seed,
                change_events: changes
                    .into_iter()
                    .map(|(time, components)| ChangeEvent { time, components })
                    .collect(),
            }
        })
}

proptest! {
    #[test]
    fn spec_text_round_trips(s in spec()) {
        prop_assert_eq!(parse_spec(&format_spec(&s), "s").unwrap(), s);
    }

    #[test]
    fn trace_text_round_trips(start in -1e6f64..1e6,
                              gaps in proptest::collection::vec(1e-3f64..1e3, 1..50),
                              values in proptest::collection::vec(finite(), 50)) {
        let mut t = start;
        let mut points = Vec::new();
        for (g, v) in gaps.iter().zip(&values) {
            points.push(TimePoint::new(t, *v));
            t += g;
        }
        let ts = TimeSeries::new("cpu", "%", points).unwrap();
        let back = parse_trace(&format_trace(&ts, "host"), "t").unwrap();
        prop_assert_eq!(back.series, ts);
        prop_assert_eq!(back.device_id, "host");
    }
}
