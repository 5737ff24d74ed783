//! The pinned fixture corpus: the worked examples and strictness
//! separations, each with its expected verdicts.

use crate::conditions::{self, ConditionId};
use crate::jacobian::PolyMap;
use crate::lattice::{AmbientLattice, CoordSign, LatticePoint, MonomialSubring};
use crate::verdict::{SearchBound, Verdict};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureRow {
    pub name: String,
    pub checks: Vec<FixtureCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureTable {
    pub rows: Vec<FixtureRow>,
}

impl FixtureTable {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.checks.iter().all(|c| c.pass))
    }

    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .flat_map(|r| r.checks.iter().map(|c| r.name.len() + c.label.len() + 1))
            .max()
            .unwrap_or(20)
            .max(20);
        let mut out = String::new();
        for row in &self.rows {
            for c in &row.checks {
                let head = format!("{} {}", row.name, c.label);
                out.push_str(&format!(
                    "{:<w$}  {}  {}\n",
                    head,
                    if c.pass { "pass" } else { "FAIL" },
                    c.detail,
                    w = width
                ));
            }
        }
        out
    }
}

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::from_slice(c)
}

fn check(label: &str, pass: bool, detail: String) -> FixtureCheck {
    FixtureCheck {
        label: label.to_string(),
        pass,
        detail,
    }
}

fn check_verdict(
    label: &str,
    v: &Verdict,
    expect_fails: bool,
    expect_witness: Option<&[(&str, LatticePoint)]>,
) -> FixtureCheck {
    let mut pass = v.is_fails() == expect_fails && !matches!(v, Verdict::HypothesisViolated { .. });
    if let (Some(expected), Some(w)) = (expect_witness, v.witness()) {
        for (label, point) in expected {
            if w.get_point(label) != Some(point) {
                pass = false;
            }
        }
    } else if expect_witness.is_some() && v.witness().is_none() {
        pass = false;
    }
    check(label, pass, format!("{}", v))
}

/// k[x^2, x^3] inside k[x].
pub fn instance_ex15() -> MonomialSubring {
    MonomialSubring::new(AmbientLattice::natural(1), vec![pt(&[2]), pt(&[3])], vec![]).unwrap()
}

/// k[xy, y] inside k(x)[y].
pub fn instance_ex16() -> MonomialSubring {
    let amb = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
    MonomialSubring::new(amb, vec![pt(&[1, 1]), pt(&[0, 1])], vec![]).unwrap()
}

/// Monomial model of a non-field inside a field: N on the all-unit line.
pub fn instance_ex17() -> MonomialSubring {
    let amb = AmbientLattice::new(vec![CoordSign::Int], None).unwrap();
    MonomialSubring::new(amb, vec![pt(&[1])], vec![]).unwrap()
}

/// k[x^2, y^2, xy] inside k[x, y].
pub fn instance_ex18() -> MonomialSubring {
    MonomialSubring::new(
        AmbientLattice::natural(2),
        vec![pt(&[2, 0]), pt(&[0, 2]), pt(&[1, 1])],
        vec![],
    )
    .unwrap()
}

/// k[x, y] inside k(x)[y].
pub fn instance_ex19() -> MonomialSubring {
    let amb = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
    MonomialSubring::new(amb, vec![pt(&[1, 0]), pt(&[0, 1])], vec![]).unwrap()
}

pub fn run_fixtures(bound: SearchBound) -> FixtureTable {
    let mut rows = Vec::new();

    // ---- divisibility fails, association holds -------------------------
    {
        let s = instance_ex15();
        let iv = conditions::eval(ConditionId::P11iv, &s, bound).unwrap();
        let ii = conditions::eval(ConditionId::P13ii, &s, bound).unwrap();
        rows.push(FixtureRow {
            name: "ex15".to_string(),
            checks: vec![
                check_verdict(
                    "P1_1_iv fails (2,3)",
                    &iv,
                    true,
                    Some(&[("u", pt(&[2])), ("v", pt(&[3]))]),
                ),
                check_verdict("P1_3_ii holds", &ii, false, None),
            ],
        });

        // strictness separations inside the same ring
        let two = pt(&[2]);
        let atom = s.is_atom(&two).unwrap();
        let prime = s.prime_bounded(&two, bound).unwrap();
        let sqf = s.squarefree(&two).unwrap();
        let gpr = s.gpr_bounded(&two, bound).unwrap();
        rows.push(FixtureRow {
            name: "ex15-strictness".to_string(),
            checks: vec![
                check(
                    "x^2 irreducible, not prime",
                    atom && prime.is_fails(),
                    format!("atom={}, prime {}", atom, prime),
                ),
                check(
                    "x^2 square-free, not gpr",
                    sqf && gpr.is_fails(),
                    format!("sqf={}, gpr {}", sqf, gpr),
                ),
            ],
        });
    }

    // ---- association fails, relative primeness holds --------------------
    {
        let s = instance_ex16();
        let ii = conditions::eval(ConditionId::P13ii, &s, bound).unwrap();
        let iii = conditions::eval(ConditionId::P12iii, &s, bound).unwrap();
        rows.push(FixtureRow {
            name: "ex16".to_string(),
            checks: vec![
                check_verdict("P1_3_ii fails", &ii, true, None),
                check_verdict("P1_2_iii holds", &iii, false, None),
            ],
        });
    }

    // ---- ambient a field: rpr transfer fails, Irr A empty ---------------
    {
        let s = instance_ex17();
        let iii = conditions::eval(ConditionId::P12iii, &s, bound).unwrap();
        let iv = conditions::eval(ConditionId::P13iv, &s, bound).unwrap();
        let irr_a_empty = s
            .ambient_box(bound.coord)
            .iter()
            .all(|p| !s.ambient().is_irr(p));
        rows.push(FixtureRow {
            name: "ex17".to_string(),
            checks: vec![
                check_verdict(
                    "P1_2_iii fails (1,1)",
                    &iii,
                    true,
                    Some(&[("a", pt(&[1])), ("b", pt(&[1]))]),
                ),
                check("Irr A empty", irr_a_empty, "no ambient atoms".to_string()),
                check_verdict("P1_3_iv holds vacuously", &iv, false, None),
            ],
        });
    }

    // ---- strong closure without unique factorization --------------------
    {
        let s = instance_ex18();
        let iv = conditions::eval(ConditionId::P11iv, &s, bound).unwrap();
        let units = conditions::units_equal(&s, bound);
        let count = s.atom_factorization_count(&pt(&[2, 2])).unwrap();
        rows.push(FixtureRow {
            name: "ex18".to_string(),
            checks: vec![
                check_verdict("P1_1_iv holds", &iv, false, None),
                check_verdict("units equal", &units, false, None),
                check(
                    "x^2 y^2 factors two ways",
                    count == 2,
                    format!("{} atom factorizations of (2,2)", count),
                ),
            ],
        });
    }

    // ---- unique factorization without irreducibility transfer -----------
    {
        let s = instance_ex19();
        let iv = conditions::eval(ConditionId::P13iv, &s, bound).unwrap();
        rows.push(FixtureRow {
            name: "ex19".to_string(),
            checks: vec![check_verdict(
                "R cap Irr A in Irr R fails (1,1)",
                &iv,
                true,
                Some(&[("a", pt(&[1, 1]))]),
            )],
        });
    }

    // ---- bridge examples -------------------------------------------------
    {
        let m = PolyMap::parse(&["x", "y"], &["x", "x*y"]).unwrap();
        let rep = m.bridge_check(bound).unwrap();
        let sub = MonomialSubring::new(
            AmbientLattice::natural(2),
            vec![pt(&[1, 0]), pt(&[1, 1])],
            vec![],
        )
        .unwrap();
        let stated = pt(&[2, 1]);
        let stated_ok =
            sub.squarefree(&stated).unwrap() && !sub.ambient().is_sqf(&stated);
        rows.push(FixtureRow {
            name: "bridge(x,xy)".to_string(),
            checks: vec![
                check(
                    "consistent, gcd nonconstant",
                    rep.consistent && !rep.minor.verdict,
                    format!(
                        "gcd={}, fragment {}",
                        rep.minor.gcd.to_text(&["x", "y"]),
                        rep.fragment
                    ),
                ),
                check(
                    "witness (2,1)",
                    stated_ok
                        && rep.fragment.witness().and_then(|w| w.get_point("v"))
                            == Some(&stated),
                    format!("{}", rep.fragment),
                ),
            ],
        });

        let m = PolyMap::parse(&["x", "y"], &["x^2", "y^2"]).unwrap();
        let rep = m.bridge_check(bound).unwrap();
        let sub = MonomialSubring::new(
            AmbientLattice::natural(2),
            vec![pt(&[2, 0]), pt(&[0, 2])],
            vec![],
        )
        .unwrap();
        let stated = pt(&[2, 0]);
        let stated_ok =
            sub.squarefree(&stated).unwrap() && !sub.ambient().is_sqf(&stated);
        rows.push(FixtureRow {
            name: "bridge(x2,y2)".to_string(),
            checks: vec![
                check(
                    "consistent, gcd nonconstant",
                    rep.consistent && !rep.minor.verdict,
                    format!(
                        "gcd={}, fragment {}",
                        rep.minor.gcd.to_text(&["x", "y"]),
                        rep.fragment
                    ),
                ),
                check(
                    "stated witness (2,0) replays",
                    stated_ok && rep.fragment.is_fails(),
                    "x^2 is square-free in R but not in A".to_string(),
                ),
            ],
        });
    }

    FixtureTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_corpus_passes() {
        let table = run_fixtures(SearchBound::default());
        assert!(table.all_pass(), "\n{}", table.to_text());
        assert_eq!(table.rows.len(), 8);
    }
}
