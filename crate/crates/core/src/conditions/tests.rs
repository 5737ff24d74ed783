use super::transport::{transport, Transported};
use super::*;
use crate::lattice::{AmbientLattice, CoordSign, LatticePoint, MonomialSubring};

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::from_slice(c)
}

fn b() -> SearchBound {
    SearchBound::default()
}

fn s23() -> MonomialSubring {
    MonomialSubring::new(
        AmbientLattice::natural(1),
        vec![pt(&[2]), pt(&[3])],
        vec![],
    )
    .unwrap()
}

fn ex16() -> MonomialSubring {
    let amb = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
    MonomialSubring::new(amb, vec![pt(&[1, 1]), pt(&[0, 1])], vec![]).unwrap()
}

fn ex18() -> MonomialSubring {
    MonomialSubring::new(
        AmbientLattice::natural(2),
        vec![pt(&[2, 0]), pt(&[0, 2]), pt(&[1, 1])],
        vec![],
    )
    .unwrap()
}

fn ex19() -> MonomialSubring {
    let amb = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
    MonomialSubring::new(amb, vec![pt(&[1, 0]), pt(&[0, 1])], vec![]).unwrap()
}

fn full_plane() -> MonomialSubring {
    MonomialSubring::new(
        AmbientLattice::natural(2),
        vec![pt(&[1, 0]), pt(&[0, 1])],
        vec![],
    )
    .unwrap()
}

fn axis() -> MonomialSubring {
    MonomialSubring::new(AmbientLattice::natural(2), vec![pt(&[1, 0])], vec![]).unwrap()
}

fn assert_replays(id: ConditionId, sub: &MonomialSubring, v: &Verdict) {
    match v {
        Verdict::Fails { witness } => {
            assert!(
                replay(id, sub, witness, b()).unwrap(),
                "witness for {} does not replay: {}",
                id,
                witness
            );
        }
        _ => panic!("expected Fails for {}", id),
    }
}

#[test]
fn id_strings_round_trip() {
    for id in catalog() {
        let s = id.to_string();
        assert_eq!(s.parse::<ConditionId>().unwrap(), id, "{}", s);
    }
    assert!("P9_9_i".parse::<ConditionId>().is_err());
    assert!("D2_1_pth4".parse::<ConditionId>().is_err());
    let (id, note) = resolve("P1_1_i").unwrap();
    assert_eq!(id, ConditionId::P11iv);
    assert!(note.is_some());
}

#[test]
fn ex15_divisibility_conditions() {
    let s = s23();
    let v = eval(ConditionId::P11iv, &s, b()).unwrap();
    let w = v.witness().expect("P1_1_iv fails on <2,3>");
    assert_eq!(w.get_point("u"), Some(&pt(&[2])));
    assert_eq!(w.get_point("v"), Some(&pt(&[3])));
    assert_replays(ConditionId::P11iv, &s, &v);

    let v = eval(ConditionId::P11iii, &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("a"), Some(&pt(&[2])));
    assert_eq!(w.get_point("b"), Some(&pt(&[1])));

    assert!(eval(ConditionId::P13ii, &s, b()).unwrap().is_holds());
}

#[test]
fn ex16_association_conditions() {
    let s = ex16();
    let v = eval(ConditionId::P13ii, &s, b()).unwrap();
    assert_replays(ConditionId::P13ii, &s, &v);
    assert!(eval(ConditionId::P12iii, &s, b()).unwrap().is_holds());
    // A* = k(x)* strictly exceeds R* = k
    assert!(units_equal(&s, b()).is_fails());
}

#[test]
fn ex19_irreducibility_condition() {
    let s = ex19();
    let v = eval(ConditionId::P13iv, &s, b()).unwrap();
    let w = v.witness().expect("R cap Irr A subset Irr R fails");
    assert_eq!(w.get_point("a"), Some(&pt(&[1, 1])));
    assert_replays(ConditionId::P13iv, &s, &v);
}

#[test]
fn laurent_line_rpr_condition() {
    let amb = AmbientLattice::new(vec![CoordSign::Int], None).unwrap();
    let s = MonomialSubring::new(amb, vec![pt(&[1])], vec![]).unwrap();
    let v = eval(ConditionId::P12iii, &s, b()).unwrap();
    let w = v.witness().expect("rpr transfer fails for N in the unit line");
    assert_eq!(w.get_point("a"), Some(&pt(&[1])));
    assert_eq!(w.get_point("b"), Some(&pt(&[1])));
    // Irr A is empty, so the irreducibility transfer holds vacuously
    assert!(eval(ConditionId::P13iv, &s, b()).unwrap().is_holds());
}

#[test]
fn bfc_and_sqfc_examples() {
    let s = ex18();
    let v = eval(ConditionId::Bfc(BfcCarrier::Full), &s, b()).unwrap();
    assert_replays(ConditionId::Bfc(BfcCarrier::Full), &s, &v);

    let v = eval(ConditionId::P45(2), &s, b()).unwrap();
    assert_replays(ConditionId::P45(2), &s, &v);

    assert!(eval(ConditionId::Bfc(BfcCarrier::Full), &full_plane(), b())
        .unwrap()
        .is_holds());
    assert!(eval(ConditionId::Bfc(BfcCarrier::SelfRing), &axis(), b())
        .unwrap()
        .is_holds());

    let s = s23();
    let v = eval(ConditionId::Sqfc, &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("x"), Some(&pt(&[1])));
    assert_eq!(w.get_point("y"), Some(&pt(&[0])));

    let v = eval(ConditionId::RootClosed, &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("v"), Some(&pt(&[1])));
    assert_eq!(w.get_int("k"), Some(2));

    assert!(eval(ConditionId::Sqfc, &axis(), b()).unwrap().is_holds());
    assert!(eval(ConditionId::RootClosed, &axis(), b()).unwrap().is_holds());
}

#[test]
fn setincl_examples() {
    // R = k[x^2] inside k[x, y]: x^2 is square-free in R but not in A
    let s = MonomialSubring::new(AmbientLattice::natural(2), vec![pt(&[2, 0])], vec![]).unwrap();
    let v = eval(ConditionId::SetIncl(RSet::Sqf, ASet::Sqf), &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("v"), Some(&pt(&[2, 0])));

    // Ex 1.9: x is irreducible in R but a unit of A
    let s = ex19();
    let v = eval(ConditionId::SetIncl(RSet::Irr, ASet::Irr), &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("v"), Some(&pt(&[1, 0])));

    // R = A: all nine inclusions hold
    let s = full_plane();
    for (r, a) in SETINCL_NODES {
        assert!(
            eval(ConditionId::SetIncl(r, a), &s, b()).unwrap().is_holds(),
            "{:?} {:?}",
            r,
            a
        );
    }
    assert!(matches!(
        eval(ConditionId::SetIncl(RSet::Sqf, ASet::Irr), &s, b()),
        Err(ConditionError::UnsupportedPair)
    ));
}

#[test]
fn p4_hypothesis_gating() {
    // Ex 1.6 fails R* = A*, so section-4 conditions report the violation
    let s = ex16();
    let v = eval(ConditionId::P41ii, &s, b()).unwrap();
    assert!(matches!(v, Verdict::HypothesisViolated { .. }));

    // on a pure-natural ambient the hypotheses hold
    let s = ex18();
    let v = eval(ConditionId::P41ii, &s, b()).unwrap();
    assert_replays(ConditionId::P41ii, &s, &v);
}

#[test]
fn p45_and_p46_examples() {
    let s = s23();
    for variant in 1..=6 {
        let v = eval(ConditionId::P45(variant), &s, b()).unwrap();
        assert_replays(ConditionId::P45(variant), &s, &v);
    }
    for variant in 1..=5 {
        let v = eval(ConditionId::P46(variant), &s, b()).unwrap();
        assert_replays(ConditionId::P46(variant), &s, &v);
    }
    // P4_6 (i) on <2,3>: witness (1,1) since 1+1=2 and 2*1+1=3 lie in S
    let v = eval(ConditionId::P46(1), &s, b()).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.get_point("a"), Some(&pt(&[1])));
    assert_eq!(w.get_point("b"), Some(&pt(&[1])));

    for variant in 1..=6 {
        assert!(eval(ConditionId::P45(variant), &axis(), b())
            .unwrap()
            .is_holds());
    }
}

#[test]
fn p41_chain_example() {
    // on the axis subring all chain conditions hold
    let s = axis();
    assert!(eval(ConditionId::P41ii, &s, b()).unwrap().is_holds());
    assert!(eval(ConditionId::P41iii, &s, b()).unwrap().is_holds());
    // Ex 1.8: (1,0)^2 (0,2)... a^2 b failures propagate into the chain form
    let s = ex18();
    let v = eval(ConditionId::P41ii, &s, b()).unwrap();
    assert_replays(ConditionId::P41ii, &s, &v);
    let v = eval(ConditionId::P41iii, &s, b()).unwrap();
    assert_replays(ConditionId::P41iii, &s, &v);
}

#[test]
fn transports_on_s23() {
    let s = s23();
    let family = [
        ConditionId::P11iii,
        ConditionId::P11iv,
        ConditionId::P22iii,
        ConditionId::P22iv(2),
    ];
    for from in family {
        let v = eval(from, &s, b()).unwrap();
        let w = v.witness().expect("all fail on <2,3>");
        for to in family {
            match transport(from, to, &s, w, b()).unwrap() {
                Transported::Witness(tw) => {
                    assert!(
                        replay(to, &s, &tw, b()).unwrap(),
                        "{} -> {}: {} does not replay",
                        from,
                        to,
                        tw
                    );
                }
                Transported::Unresolved(r) => panic!("{} -> {}: unresolved: {}", from, to, r),
            }
        }
    }
}

#[test]
fn transports_p45_p46_on_s23() {
    let s = s23();
    for from in 1..=6u8 {
        let v = eval(ConditionId::P45(from), &s, b()).unwrap();
        let w = v.witness().unwrap();
        for to in 1..=6u8 {
            match transport(ConditionId::P45(from), ConditionId::P45(to), &s, w, b()).unwrap() {
                Transported::Witness(tw) => assert!(
                    replay(ConditionId::P45(to), &s, &tw, b()).unwrap(),
                    "P4_5 {} -> {}: {}",
                    from,
                    to,
                    tw
                ),
                Transported::Unresolved(r) => {
                    panic!("P4_5 {} -> {} unresolved: {}", from, to, r)
                }
            }
        }
    }
    for from in 1..=5u8 {
        let v = eval(ConditionId::P46(from), &s, b()).unwrap();
        let w = v.witness().unwrap();
        for to in 1..=5u8 {
            match transport(ConditionId::P46(from), ConditionId::P46(to), &s, w, b()).unwrap() {
                Transported::Witness(tw) => assert!(
                    replay(ConditionId::P46(to), &s, &tw, b()).unwrap(),
                    "P4_6 {} -> {}: {}",
                    from,
                    to,
                    tw
                ),
                Transported::Unresolved(r) => {
                    panic!("P4_6 {} -> {} unresolved: {}", from, to, r)
                }
            }
        }
    }
}

#[test]
fn transport_thm34_both_directions() {
    // k[x^2]: Sqf R not contained in Sqf A, and the square-factorial form
    let s = MonomialSubring::new(AmbientLattice::natural(2), vec![pt(&[2, 0])], vec![]).unwrap();
    let incl = ConditionId::SetIncl(RSet::Sqf, ASet::Sqf);
    let v = eval(incl, &s, b()).unwrap();
    let w = v.witness().unwrap();
    match transport(incl, ConditionId::Sqfc, &s, w, b()).unwrap() {
        Transported::Witness(tw) => {
            assert!(replay(ConditionId::Sqfc, &s, &tw, b()).unwrap(), "{}", tw)
        }
        Transported::Unresolved(r) => panic!("unresolved: {}", r),
    }
    let v = eval(ConditionId::Sqfc, &s, b()).unwrap();
    let w = v.witness().unwrap();
    match transport(ConditionId::Sqfc, incl, &s, w, b()).unwrap() {
        Transported::Witness(tw) => {
            assert!(replay(incl, &s, &tw, b()).unwrap(), "{}", tw)
        }
        Transported::Unresolved(_) => {} // allowed when the product square-decomposes
    }
}

#[test]
fn p46_sparse_and_dense_strategies_agree() {
    // force both strategies on rings of very different density
    let sparse_ray = MonomialSubring::new(
        AmbientLattice::new(vec![CoordSign::Nat, CoordSign::Int, CoordSign::Nat], None)
            .unwrap(),
        vec![pt(&[3, -4, 1]), pt(&[1, 4, 3]), pt(&[4, 0, 4])],
        vec![],
    )
    .unwrap();
    for sub in [s23(), ex16(), ex18(), ex19(), axis(), sparse_ray] {
        let dense = eval_p46_family_with(&sub, b(), false).unwrap();
        let sparse = eval_p46_family_with(&sub, b(), true).unwrap();
        assert_eq!(dense, sparse, "strategies disagree on {:?}", sub);
        for (id, v) in dense {
            if let Verdict::Fails { witness } = &v {
                assert!(replay(id, &sub, witness, b()).unwrap(), "{} {}", id, witness);
            }
        }
    }
}

#[test]
fn hypothesis_report_fields() {
    let s = ex18();
    let h = hypothesis_report(&s, b());
    assert!(h.units_equal.is_holds());
    assert!(h.fraction_closed.is_holds());
    assert!(h.ufd_ambient);

    let h = hypothesis_report(&s23(), b());
    assert!(h.units_equal.is_holds());
    assert!(h.fraction_closed.is_fails());
}

#[test]
fn pth_power_hypothesis() {
    // 2*ambient lies in <2,3>, so the p=2 lattice hypothesis holds
    assert!(pth_powers_in_ring(&s23(), 2, b()).is_holds());
    // but x*y has odd coordinates: 2*(1,1) = (2,2) is in Ex 1.8's ring
    assert!(pth_powers_in_ring(&ex18(), 2, b()).is_holds());
    assert!(pth_powers_in_ring(&ex18(), 3, b()).is_fails());
}
