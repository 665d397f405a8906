use atoric::exactmath::num::{rat, Rat};
use atoric::flip::Bounds;
use atoric::wedge::{validate, Side, WedgeParams};
use atoric_workbench::session::{Move, Session};
use num_traits::Signed;
use proptest::prelude::*;

fn seeds() -> Vec<(WedgeParams, Option<Bounds>)> {
    let b = |l1, l2| Some(Bounds { l1, l2 });
    vec![
        (WedgeParams::new(2, 1, 1, 1, 3, rat(3, 2)), None),
        (WedgeParams::new(2, 1, 1, 1, 3, rat(3, 2)), b(rat(5, 2), rat(1, 1))),
        (WedgeParams::new(1, 0, 5, 3, 1, rat(1, 10)), b(rat(5, 2), rat(9, 10))),
        (WedgeParams::new(1, 0, 5, 3, 1, rat(1, 10)), None),
        (WedgeParams::new(3, 1, 2, 1, 2, rat(1, 1)), b(rat(4, 1), rat(4, 1))),
        (WedgeParams::new(5, 2, 3, 1, 1, rat(2, 3)), None),
    ]
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (1i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn moves() -> impl Strategy<Value = Move> {
    prop_oneof![
        Just(Move::Mutate { side: Side::Left }),
        Just(Move::Mutate { side: Side::Right }),
        small_rat().prop_map(|a_minus| Move::Antiflip { a_minus }),
        small_rat().prop_map(|a_plus| Move::Flip { a_plus }),
        Just(Move::Undo),
        Just(Move::Redo),
    ]
}

fn still_valid(w: &WedgeParams) -> bool {
    validate(w.p1.clone(), w.q1.clone(), w.p2.clone(), w.q2.clone(), w.c.clone(), w.a.clone()).as_ref() == Ok(w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_move_sequences(seed in 0usize..6, ops in prop::collection::vec(moves(), 0..24)) {
        let (wedge, bounds) = seeds()[seed].clone();
        let mut s = Session::new("p");
        s.apply(Move::Create { wedge, bounds }).unwrap();
        for mv in ops {
            let before = s.clone();
            match s.apply(mv.clone()) {
                Ok(_) => prop_assert_eq!(s.log.last(), Some(&mv)),
                Err(_) => prop_assert_eq!(&s, &before, "a rejected move changed the session"),
            }
            prop_assert!(s.cursor < s.history.len());
            let replayed = Session::replay("p", &s.log).unwrap();
            prop_assert_eq!(&replayed, &s);
        }
        for e in &s.history {
            prop_assert!(still_valid(&e.wedge), "{:?} fails validation", e.wedge);
            if let Some(b) = &e.bounds {
                prop_assert!(b.l1.is_positive() && b.l2.is_positive());
            }
        }
    }

    #[test]
    fn undo_then_redo_is_identity(seed in 0usize..6, ops in prop::collection::vec(moves(), 1..16)) {
        let (wedge, bounds) = seeds()[seed].clone();
        let mut s = Session::new("p");
        s.apply(Move::Create { wedge, bounds }).unwrap();
        for mv in ops {
            let _ = s.apply(mv);
        }
        let here = s.current().cloned();
        if s.apply(Move::Undo).is_ok() {
            s.apply(Move::Redo).unwrap();
        }
        prop_assert_eq!(s.current().cloned(), here);
    }
}
