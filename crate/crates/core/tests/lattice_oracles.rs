//! Brute-force oracle agreement for the lattice engine: membership by
//! coefficient enumeration, atoms by decomposition search, square-freeness by
//! square splitting, plus the semigroup closure and unit-coherence laws.

use factoriality::lattice::{
    AmbientLattice, CoordSign, InstanceSpec, LatticePoint, MonomialSubring,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::from_slice(c)
}

/// Membership by blunt coefficient enumeration: natural coefficients up to
/// `amax` on all generators, with the single allowed unit generator solved
/// exactly. Independent of the engine's reduction and graded search.
struct MemberOracle<'a> {
    sub: &'a MonomialSubring,
    amax: i64,
}

impl<'a> MemberOracle<'a> {
    fn member(&self, v: &LatticePoint) -> bool {
        if !self.sub.ambient().is_valid(v) {
            return false;
        }
        let gens = self.sub.gens();
        let mut coeffs = vec![0i64; gens.len()];
        self.search(v, gens, &mut coeffs, 0)
    }

    fn search(
        &self,
        v: &LatticePoint,
        gens: &[LatticePoint],
        coeffs: &mut Vec<i64>,
        i: usize,
    ) -> bool {
        if i == gens.len() {
            let mut rest = v.clone();
            for (c, g) in coeffs.iter().zip(gens) {
                rest = rest.sub(&g.scale(*c));
            }
            return match self.sub.unit_gens() {
                [] => rest.is_zero(),
                [u] => {
                    // rest must be an exact integer multiple of u
                    let Some(j) = (0..u.dim()).find(|&j| u.0[j] != 0) else {
                        return rest.is_zero();
                    };
                    if rest.0[j] % u.0[j] != 0 {
                        return false;
                    }
                    let b = rest.0[j] / u.0[j];
                    rest == u.scale(b)
                }
                _ => panic!("oracle supports at most one unit generator"),
            };
        }
        for c in 0..=self.amax {
            coeffs[i] = c;
            if self.search(v, gens, coeffs, i + 1) {
                return true;
            }
        }
        coeffs[i] = 0;
        false
    }

    fn is_unit(&self, v: &LatticePoint) -> bool {
        self.member(v) && self.member(&v.neg())
    }
}

fn oracle_instances() -> Vec<MonomialSubring> {
    let mut out = vec![
        // numerical semigroup <2,3>
        MonomialSubring::new(AmbientLattice::natural(1), vec![pt(&[2]), pt(&[3])], vec![])
            .unwrap(),
        // k[x^2, y^2, xy]
        MonomialSubring::new(
            AmbientLattice::natural(2),
            vec![pt(&[2, 0]), pt(&[0, 2]), pt(&[1, 1])],
            vec![],
        )
        .unwrap(),
        // k[xy, y] in k(x)[y]
        MonomialSubring::new(
            AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap(),
            vec![pt(&[1, 1]), pt(&[0, 1])],
            vec![],
        )
        .unwrap(),
        // k[x, y] in k(x)[y]: a zero-grade generator
        MonomialSubring::new(
            AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap(),
            vec![pt(&[1, 0]), pt(&[0, 1])],
            vec![],
        )
        .unwrap(),
        // N on the all-unit line
        MonomialSubring::new(
            AmbientLattice::new(vec![CoordSign::Int], None).unwrap(),
            vec![pt(&[1])],
            vec![],
        )
        .unwrap(),
        // a unit generator alongside ordinary generators
        MonomialSubring::new(
            AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap(),
            vec![pt(&[1, 2]), pt(&[-1, 1])],
            vec![pt(&[3, 0])],
        )
        .unwrap(),
    ];
    // seeded random family, n <= 2, coordinates <= 6
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    while out.len() < 40 {
        let n = rng.gen_range(1..=2usize);
        let ints = if n == 2 { rng.gen_range(0..=1usize) } else { 0 };
        let mut signs = vec![CoordSign::Nat; n];
        for s in signs.iter_mut().take(ints) {
            *s = CoordSign::Int;
        }
        let ambient = AmbientLattice::new(signs.clone(), None).unwrap();
        let gen_count = rng.gen_range(1..=3usize);
        let mut gens = Vec::new();
        for _ in 0..gen_count {
            let g = LatticePoint(
                signs
                    .iter()
                    .map(|s| match s {
                        CoordSign::Nat => rng.gen_range(0..=6),
                        CoordSign::Int => rng.gen_range(-6..=6),
                    })
                    .collect(),
            );
            if ambient.lambda(&g) > 0 {
                gens.push(g);
            }
        }
        if gens.is_empty() {
            continue;
        }
        let mut unit_gens = Vec::new();
        if ints > 0 && rng.gen_bool(0.4) {
            let mut u = LatticePoint::zeros(n);
            u.0[0] = rng.gen_range(1..=3);
            unit_gens.push(u);
        }
        if let Ok(sub) = MonomialSubring::new(ambient, gens, unit_gens) {
            out.push(sub);
        }
    }
    out
}

#[test]
fn member_matches_coefficient_enumeration_exhaustively() {
    for (k, sub) in oracle_instances().iter().enumerate() {
        let oracle = MemberOracle { sub, amax: 14 };
        for v in sub.ambient().ambient_box(6) {
            assert_eq!(
                sub.member(&v),
                oracle.member(&v),
                "instance {} disagrees at {} ({:?})",
                k,
                v,
                InstanceSpec::of(sub)
            );
        }
    }
}

#[test]
fn atoms_match_decomposition_oracle() {
    for (k, sub) in oracle_instances().iter().enumerate() {
        let oracle = MemberOracle { sub, amax: 14 };
        let members = sub.member_box(6);
        for v in members.iter() {
            if sub.is_unit(v) {
                continue;
            }
            match sub.non_atom_decomposition(v).unwrap() {
                Some((x, y)) => {
                    // the engine's splitting must validate against the oracle
                    assert!(oracle.member(&x), "instance {k}: part {x} of {v}");
                    assert!(oracle.member(&y), "instance {k}: part {y} of {v}");
                    assert!(!oracle.is_unit(&x), "instance {k}: unit part {x}");
                    assert!(!oracle.is_unit(&y), "instance {k}: unit part {y}");
                    assert_eq!(v.clone(), x.add(&y), "instance {k}: parts of {v}");
                }
                None => {
                    // no splitting may exist in the oracle's window either
                    let window = sub.member_box(12);
                    for x in window.iter() {
                        if sub.is_unit(x) {
                            continue;
                        }
                        let y = v.sub(x);
                        assert!(
                            !oracle.member(&y) || oracle.is_unit(&y),
                            "instance {k}: atom {v} splits as {x} + {y}"
                        );
                    }
                }
            }
        }
        // atoms_up_to agrees with the per-element test on canonical points
        let atoms = sub.atoms_up_to(8).unwrap();
        for a in &atoms {
            assert!(sub.is_atom(a).unwrap());
        }
    }
}

#[test]
fn squarefree_matches_split_oracle() {
    for (k, sub) in oracle_instances().iter().enumerate() {
        let oracle = MemberOracle { sub, amax: 14 };
        let members = sub.member_box(6);
        for v in members.iter() {
            match sub.sqf_decomposition_opt(v).unwrap() {
                Some((u, w)) => {
                    assert!(oracle.member(&u), "instance {k}: {u}");
                    assert!(!oracle.is_unit(&u), "instance {k}: unit square {u}");
                    assert!(oracle.member(&w), "instance {k}: {w}");
                    assert_eq!(v.clone(), u.scale(2).add(&w), "instance {k}");
                }
                None => {
                    let window = sub.member_box(12);
                    for u in window.iter() {
                        if sub.is_unit(u) {
                            continue;
                        }
                        assert!(
                            !oracle.member(&v.sub(&u.scale(2))),
                            "instance {k}: square-free {v} splits with square {u}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn semigroup_closure_and_unit_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for sub in oracle_instances() {
        let members = sub.member_box(6);
        if members.is_empty() {
            continue;
        }
        for _ in 0..60 {
            let u = &members[rng.gen_range(0..members.len())];
            let v = &members[rng.gen_range(0..members.len())];
            assert!(sub.member(&u.add(v)), "closure fails at {} + {}", u, v);
        }
        for u in members.iter().filter(|u| sub.is_unit(u)) {
            for v in members.iter().take(40) {
                assert!(sub.member(&v.add(u)));
                assert!(sub.member(&v.sub(u)));
            }
        }
    }
}

#[test]
fn membership_cache_is_a_pure_memo_across_threads() {
    let sub = std::sync::Arc::new(
        MonomialSubring::new(
            AmbientLattice::natural(2),
            vec![pt(&[2, 0]), pt(&[0, 2]), pt(&[1, 1])],
            vec![],
        )
        .unwrap(),
    );
    let expected: Vec<bool> = sub
        .ambient()
        .ambient_box(8)
        .iter()
        .map(|v| sub.member(v))
        .collect();
    let mut handles = Vec::new();
    for t in 0..4 {
        let sub = sub.clone();
        let expected = expected.clone();
        handles.push(std::thread::spawn(move || {
            let boxpts = sub.ambient().ambient_box(8);
            for (i, v) in boxpts.iter().enumerate().skip(t).step_by(4) {
                assert_eq!(sub.member(v), expected[i]);
            }
        }));
    }
    for h in handles {
        h.join().unwrap();
    }
}
