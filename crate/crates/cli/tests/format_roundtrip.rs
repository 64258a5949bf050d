use proptest::prelude::*;
use tedsc::generators::{gen_random, RandomParams};
use tedsc::{Schedule, TemporalWalk, Variant};
use tedsc_cli::format::{parse_instance, parse_schedule, write_instance, write_instance_json, write_schedule};

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Unconstrained), Just(Variant::Length), Just(Variant::Lifespan)]
}

fn walk() -> impl Strategy<Value = TemporalWalk> {
    (1u64..100, prop::collection::vec(0usize..4, 1..8)).prop_map(|(start, path)| {
        let steps: Vec<_> = path.iter().enumerate().map(|(i, &v)| (v, start + i as u64)).collect();
        TemporalWalk::from_steps(&steps).unwrap()
    })
}

proptest! {
    #[test]
    fn instances_round_trip(seed in any::<u64>(), n in 2usize..6, d in 1usize..8, k in 0usize..5, h in 0u64..9, v in variant()) {
        let p = RandomParams {
            n,
            m: n,
            demands: d,
            lambda: 50,
            k,
            h: v.is_constrained().then_some(h),
            variant: v,
            seed,
        };
        let inst = gen_random(&p).unwrap();
        let text = write_instance(&inst);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed, &inst);
        prop_assert_eq!(write_instance(&parsed), text);
        prop_assert_eq!(parse_instance(&write_instance_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn schedules_round_trip(walks in prop::collection::vec(walk(), 0..5)) {
        let sched = Schedule::new(walks);
        let text = write_schedule(&sched);
        let parsed = parse_schedule(&text).unwrap();
        prop_assert_eq!(write_schedule(&parsed), text);
        prop_assert_eq!(parsed, sched);
    }
}
