//! The monomial skeleton of the ambient ring and its subrings.
//!
//! An `AmbientLattice` models the monomials of A = k[x_nat][x_int^{+-1}]:
//! natural coordinates carry a positive grading weight, integer coordinates
//! are unit directions with weight zero, and a monomial is an ambient unit
//! exactly when its grade is zero. A single-term element of a Z^n-graded
//! domain only factors into single-term elements, so divisibility, units,
//! irreducibility and square-freeness of monomials are faithfully decided
//! on exponent vectors alone; that is the fragment this module works in.

mod hnf;
mod subring;

pub use subring::MonomialSubring;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("grading must have one weight per coordinate")]
    BadGradingLength,
    #[error("grading weight for coordinate {0} must be positive on natural coordinates and zero on integer coordinates")]
    BadGradingWeight(usize),
    #[error("point {0} has a negative entry in a natural coordinate")]
    SignViolation(LatticePoint),
    #[error("point has dimension {found}, ambient has {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("unit generator {0} must be supported on integer coordinates only")]
    UnitGenNotUnit(LatticePoint),
    #[error("zero-grade generators span more than one direction modulo the unit lattice")]
    ZeroLayerRank,
    #[error("zero-grade generator line meets the unit lattice; unsupported")]
    ZeroLayerMeetsUnits,
    #[error("point {0} is not a member of the subring")]
    NotInSubring(LatticePoint),
    #[error("point {0} is a unit of the subring")]
    UnitArgument(LatticePoint),
    #[error("invalid search bound (need B >= 1, K >= 2)")]
    BadBound,
    #[error("grade bound must be at least 1")]
    BadGradeBound,
}

/// Per-coordinate sign of the ambient lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordSign {
    Nat,
    Int,
}

/// Integer exponent vector of one monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LatticePoint(pub SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn new(coords: impl Into<SmallVec<[i64; 4]>>) -> LatticePoint {
        LatticePoint(coords.into())
    }

    pub fn from_slice(coords: &[i64]) -> LatticePoint {
        LatticePoint(SmallVec::from_slice(coords))
    }

    pub fn zeros(n: usize) -> LatticePoint {
        LatticePoint(SmallVec::from_elem(0, n))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|&a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|&a| k * a).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Ok(LatticePoint::new(v))
    }
}

/// Ambient monomial lattice: dimension, coordinate signs and the grading
/// functional. The grading is positive exactly on natural coordinates, so a
/// valid monomial is an ambient unit iff its grade is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientLattice {
    signs: Vec<CoordSign>,
    grading: Vec<i64>,
}

impl AmbientLattice {
    pub fn new(
        signs: Vec<CoordSign>,
        grading: Option<Vec<i64>>,
    ) -> Result<AmbientLattice, LatticeError> {
        let grading = match grading {
            Some(g) => {
                if g.len() != signs.len() {
                    return Err(LatticeError::BadGradingLength);
                }
                for (i, (&w, &s)) in g.iter().zip(&signs).enumerate() {
                    let ok = match s {
                        CoordSign::Nat => w > 0,
                        CoordSign::Int => w == 0,
                    };
                    if !ok {
                        return Err(LatticeError::BadGradingWeight(i));
                    }
                }
                g
            }
            None => signs
                .iter()
                .map(|s| match s {
                    CoordSign::Nat => 1,
                    CoordSign::Int => 0,
                })
                .collect(),
        };
        Ok(AmbientLattice { signs, grading })
    }

    /// All-natural ambient of dimension `n` with the all-ones grading.
    pub fn natural(n: usize) -> AmbientLattice {
        AmbientLattice::new(vec![CoordSign::Nat; n], None).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[CoordSign] {
        &self.signs
    }

    pub fn grading(&self) -> &[i64] {
        &self.grading
    }

    pub fn check_dim(&self, p: &LatticePoint) -> Result<(), LatticeError> {
        if p.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch {
                found: p.dim(),
                expected: self.dim(),
            });
        }
        Ok(())
    }

    pub fn lambda(&self, p: &LatticePoint) -> i64 {
        self.grading
            .iter()
            .zip(&p.0)
            .map(|(w, c)| w * c)
            .sum()
    }

    /// Valid exponent of an ambient monomial: natural coordinates >= 0.
    pub fn is_valid(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim()
            && self
                .signs
                .iter()
                .zip(&p.0)
                .all(|(s, &c)| !matches!(s, CoordSign::Nat) || c >= 0)
    }

    /// Ambient unit: a valid monomial of grade zero.
    pub fn is_unit(&self, p: &LatticePoint) -> bool {
        self.is_valid(p) && self.lambda(p) == 0
    }

    pub fn nat_sum(&self, p: &LatticePoint) -> i64 {
        self.signs
            .iter()
            .zip(&p.0)
            .filter(|(s, _)| matches!(s, CoordSign::Nat))
            .map(|(_, &c)| c)
            .sum()
    }

    /// Irreducible ambient monomial: valid, with natural part a single
    /// variable (total natural degree 1). Integer directions are units and
    /// do not affect irreducibility.
    pub fn is_irr(&self, p: &LatticePoint) -> bool {
        self.is_valid(p) && self.nat_sum(p) == 1
    }

    /// Square-free ambient monomial: every natural exponent is 0 or 1.
    pub fn is_sqf(&self, p: &LatticePoint) -> bool {
        self.is_valid(p)
            && self
                .signs
                .iter()
                .zip(&p.0)
                .all(|(s, &c)| !matches!(s, CoordSign::Nat) || c <= 1)
    }

    /// Prime ambient monomial; the monomial ambient is a UFD, so this
    /// coincides with irreducibility.
    pub fn is_prime(&self, p: &LatticePoint) -> bool {
        self.is_irr(p)
    }

    /// Generator of a radical principal ideal of the ambient; in a UFD these
    /// are exactly the square-free elements.
    pub fn is_gpr(&self, p: &LatticePoint) -> bool {
        self.is_sqf(p)
    }

    /// Relative primeness of ambient monomials: no common non-unit divisor,
    /// i.e. the componentwise minimum over natural coordinates is zero.
    pub fn rpr(&self, u: &LatticePoint, v: &LatticePoint) -> Result<bool, LatticeError> {
        if !self.is_valid(u) {
            return Err(LatticeError::SignViolation(u.clone()));
        }
        if !self.is_valid(v) {
            return Err(LatticeError::SignViolation(v.clone()));
        }
        Ok(self
            .signs
            .iter()
            .zip(u.0.iter().zip(&v.0))
            .all(|(s, (&a, &b))| !matches!(s, CoordSign::Nat) || a.min(b) <= 0))
    }

    /// Nat coordinates of `u` dominated by `v` (used as a cheap divisor
    /// pre-filter).
    pub(crate) fn nat_le(&self, u: &LatticePoint, v: &LatticePoint) -> bool {
        self.signs
            .iter()
            .zip(u.0.iter().zip(&v.0))
            .all(|(s, (&a, &b))| !matches!(s, CoordSign::Nat) || a <= b)
    }

    pub(crate) fn nat_eq(&self, u: &LatticePoint, v: &LatticePoint) -> bool {
        self.signs
            .iter()
            .zip(u.0.iter().zip(&v.0))
            .all(|(s, (&a, &b))| !matches!(s, CoordSign::Nat) || a == b)
    }

    /// All valid ambient points with |v_i| <= B, sorted by (grade, lex).
    pub fn ambient_box(&self, coord_bound: i64) -> Vec<LatticePoint> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut cur = LatticePoint::zeros(n);
        self.box_rec(0, coord_bound, &mut cur, &mut out);
        out.sort_by_key(|p| (self.lambda(p), p.clone()));
        out
    }

    fn box_rec(
        &self,
        i: usize,
        b: i64,
        cur: &mut LatticePoint,
        out: &mut Vec<LatticePoint>,
    ) {
        if i == self.dim() {
            out.push(cur.clone());
            return;
        }
        let lo = match self.signs[i] {
            CoordSign::Nat => 0,
            CoordSign::Int => -b,
        };
        for c in lo..=b {
            cur.0[i] = c;
            self.box_rec(i + 1, b, cur, out);
        }
        cur.0[i] = 0;
    }
}

/// JSON schema for an instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub dim: usize,
    pub signs: Vec<CoordSign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub ambient: AmbientSpec,
    pub gens: Vec<Vec<i64>>,
    #[serde(default)]
    pub unit_gens: Vec<Vec<i64>>,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<MonomialSubring, LatticeError> {
        if self.ambient.signs.len() != self.ambient.dim {
            return Err(LatticeError::BadGradingLength);
        }
        let ambient = AmbientLattice::new(
            self.ambient.signs.clone(),
            self.ambient.grading.clone(),
        )?;
        MonomialSubring::new(
            ambient,
            self.gens.iter().map(|g| LatticePoint::new(g.clone())).collect(),
            self.unit_gens
                .iter()
                .map(|g| LatticePoint::new(g.clone()))
                .collect(),
        )
    }

    pub fn of(sub: &MonomialSubring) -> InstanceSpec {
        InstanceSpec {
            ambient: AmbientSpec {
                dim: sub.ambient().dim(),
                signs: sub.ambient().signs().to_vec(),
                grading: Some(sub.ambient().grading().to_vec()),
            },
            gens: sub.gens().iter().map(|g| g.0.to_vec()).collect(),
            unit_gens: sub.unit_gens().iter().map(|g| g.0.to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_validation() {
        assert!(AmbientLattice::new(vec![CoordSign::Nat], Some(vec![0])).is_err());
        assert!(AmbientLattice::new(vec![CoordSign::Int], Some(vec![1])).is_err());
        let a = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
        assert_eq!(a.grading(), &[0, 1]);
    }

    #[test]
    fn ambient_classification() {
        let a = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
        assert!(a.is_unit(&LatticePoint::from_slice(&[-3, 0])));
        assert!(!a.is_unit(&LatticePoint::from_slice(&[0, 1])));
        assert!(a.is_irr(&LatticePoint::from_slice(&[5, 1])));
        assert!(a.is_sqf(&LatticePoint::from_slice(&[-2, 1])));
        assert!(!a.is_sqf(&LatticePoint::from_slice(&[0, 2])));
        assert!(!a.is_valid(&LatticePoint::from_slice(&[0, -1])));
    }

    #[test]
    fn rpr_on_disjoint_supports() {
        let a = AmbientLattice::natural(2);
        assert!(a
            .rpr(
                &LatticePoint::from_slice(&[1, 0]),
                &LatticePoint::from_slice(&[0, 1])
            )
            .unwrap());
        assert!(!a
            .rpr(
                &LatticePoint::from_slice(&[1, 1]),
                &LatticePoint::from_slice(&[1, 0])
            )
            .unwrap());
        // all-unit ambient: always relatively prime
        let line = AmbientLattice::new(vec![CoordSign::Int], None).unwrap();
        assert!(line
            .rpr(
                &LatticePoint::from_slice(&[4]),
                &LatticePoint::from_slice(&[4])
            )
            .unwrap());
    }

    #[test]
    fn box_enumeration_counts_and_order() {
        let a = AmbientLattice::new(vec![CoordSign::Int, CoordSign::Nat], None).unwrap();
        let pts = a.ambient_box(1);
        assert_eq!(pts.len(), 6);
        // grade-0 slice first, ascending lex inside a slice
        assert_eq!(pts[0], LatticePoint::from_slice(&[-1, 0]));
        assert_eq!(pts[1], LatticePoint::from_slice(&[0, 0]));
        assert_eq!(pts[2], LatticePoint::from_slice(&[1, 0]));
        assert_eq!(pts[3], LatticePoint::from_slice(&[-1, 1]));

        let n1 = AmbientLattice::natural(1);
        let pts: Vec<i64> = n1.ambient_box(3).iter().map(|p| p.0[0]).collect();
        assert_eq!(pts, vec![0, 1, 2, 3]);
    }
}
