//! parse → serialize → parse is the identity on valid configurations.

use proptest::prelude::*;
use qat_cli::config::{
    AuditBlock, EvalBlock, Geometry, GridBlock, Layout, OutputBlock, PotentialKind, RoundtripBlock, ScalesBlock,
    SegmentBlock, SlingBlock, StateBlock, UncertaintyBlock,
};
use qat_cli::{Format, RunConfig};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, Just(0.0), Just(1.0 / 3.0), Just(-2.5e-8)]
}

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-3f64..1e3, Just(1.0), Just(0.1)]
}

fn state() -> impl Strategy<Value = StateBlock> {
    prop_oneof![
        (0i64..10, proptest::option::of((finite(), finite())), proptest::option::of(-2.0f64..2.0)).prop_map(
            |(n, a, r)| StateBlock {
                family: Geometry::Hermite,
                indices: vec![n],
                a: a.map(|(x, y)| [x, y]),
                r,
                chirality: None,
            }
        ),
        (proptest::collection::vec(0i64..6, 1..4)).prop_map(|idx| StateBlock {
            family: Geometry::Cartesian,
            indices: idx,
            ..StateBlock::default()
        }),
        (0i64..5, 0i64..5, any::<bool>()).prop_map(|(n, l, plus)| StateBlock {
            family: Geometry::Polar,
            indices: vec![n, l],
            chirality: Some(if plus {
                qat_core::states_nd::Chirality::Plus
            } else {
                qat_core::states_nd::Chirality::Minus
            }),
            ..StateBlock::default()
        }),
        (1i64..5, 0i64..5).prop_map(|(n, l)| StateBlock {
            family: Geometry::Spherical,
            indices: vec![n, l, -l],
            ..StateBlock::default()
        }),
    ]
}

fn grid() -> impl Strategy<Value = GridBlock> {
    proptest::collection::vec((finite(), positive(), prop_oneof![Just(0usize), 2usize..4096]), 1..4).prop_map(|axes| {
        GridBlock {
            lo: axes.iter().map(|a| a.0).collect(),
            hi: axes.iter().map(|a| a.0 + a.1).collect(),
            points: axes.iter().map(|a| a.2).collect(),
        }
    })
}

fn schedule() -> impl Strategy<Value = Vec<SegmentBlock>> {
    proptest::collection::vec((positive(), proptest::option::of(positive()), proptest::option::of(finite())), 0..4).prop_map(
        |segs| {
            let mut t = 0.0;
            segs.into_iter()
                .map(|(len, omega, imprint)| {
                    let seg = SegmentBlock {
                        start: t,
                        end: t + len,
                        potential: if omega.is_some() { PotentialKind::Harmonic } else { PotentialKind::Free },
                        omega,
                        center: omega.map(|_| 0.25),
                        imprint,
                    };
                    t += len;
                    seg
                })
                .collect()
        },
    )
}

fn config() -> impl Strategy<Value = RunConfig> {
    (
        (positive(), positive(), positive()),
        proptest::option::of(state()),
        proptest::option::of(grid()),
        proptest::option::of((proptest::collection::vec(finite(), 0..5), any::<bool>(), any::<bool>())),
        proptest::option::of((1usize..12, positive(), positive())),
        proptest::option::of(schedule()),
        any::<bool>(),
        proptest::option::of(proptest::collection::vec(-1.5f64..1.5, 1..4)),
    )
        .prop_map(|((mass, hbar, omega), state, grid, eval, audit, schedule, with_output, primes)| RunConfig {
            scales: ScalesBlock { mass, hbar, omega: 1.0f64.min(omega) },
            state,
            grid,
            output: with_output.then(|| OutputBlock {
                path: Some("runs/out.csv".into()),
                format: Some(Format::Csv),
            }),
            eval: eval.map(|(times, include_phase, wide)| EvalBlock {
                times,
                include_phase,
                layout: if wide { Layout::Wide } else { Layout::Long },
            }),
            audit: audit.map(|(max_n, l, c)| AuditBlock {
                max_n,
                ladder_tolerance: l,
                commutator_tolerance: c,
                ..AuditBlock::default()
            }),
            sling: Some(SlingBlock {
                t1: schedule.is_none().then_some(2.0),
                ..SlingBlock::default()
            }),
            uncertainty: Some(UncertaintyBlock::default()),
            qat_roundtrip: primes.map(|prime_times| RoundtripBlock {
                prime_times,
                ..RoundtripBlock::default()
            }),
            schedule,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_serialize_parse_is_identity(cfg in config()) {
        prop_assert!(cfg.validate().is_ok(), "{:?}", cfg.validate());
        let text = cfg.to_toml();
        let once = RunConfig::from_toml(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&once, &cfg);
        let twice = RunConfig::from_toml(&once.to_toml()).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(once.to_toml(), text);
    }
}

#[test]
fn empty_document_is_the_default_config() {
    let cfg = RunConfig::from_toml("").unwrap();
    assert_eq!(cfg, RunConfig::default());
    assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
}

#[test]
fn shipped_configs_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let cfg = RunConfig::from_toml(&text).unwrap();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
