//! Bounded verdicts: the outcome of checking a universally quantified
//! condition over a finite search window.
//!
//! `Holds` never claims a proof for the infinite ring, only that no
//! counterexample was found within the recorded bound. `Fails` always carries
//! a concrete witness that replays through the defining formula.

use crate::lattice::LatticePoint;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Search window: `coord` bounds every coordinate (|v_i| <= B), `power`
/// caps tested exponents (k <= K).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBound {
    #[serde(rename = "B")]
    pub coord: i64,
    #[serde(rename = "K")]
    pub power: u32,
}

impl SearchBound {
    pub fn new(coord: i64, power: u32) -> Option<SearchBound> {
        if coord >= 1 && power >= 2 {
            Some(SearchBound { coord, power })
        } else {
            None
        }
    }
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound {
            coord: 12,
            power: 6,
        }
    }
}

impl fmt::Display for SearchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B={}, K={}", self.coord, self.power)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Int(i64),
    Point(LatticePoint),
    Points(Vec<LatticePoint>),
    Ints(Vec<i64>),
    /// Binary digit rows, one per quantified exponent.
    Digits(Vec<Vec<u8>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPart {
    pub label: String,
    pub value: WitnessValue,
}

/// Labeled tuple of lattice points and exponents that violates a condition.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Witness(pub Vec<WitnessPart>);

impl Witness {
    pub fn new() -> Witness {
        Witness(Vec::new())
    }

    pub fn point(mut self, label: &str, p: LatticePoint) -> Witness {
        self.0.push(WitnessPart {
            label: label.to_string(),
            value: WitnessValue::Point(p),
        });
        self
    }

    pub fn int(mut self, label: &str, k: i64) -> Witness {
        self.0.push(WitnessPart {
            label: label.to_string(),
            value: WitnessValue::Int(k),
        });
        self
    }

    pub fn points(mut self, label: &str, ps: Vec<LatticePoint>) -> Witness {
        self.0.push(WitnessPart {
            label: label.to_string(),
            value: WitnessValue::Points(ps),
        });
        self
    }

    pub fn ints(mut self, label: &str, ks: Vec<i64>) -> Witness {
        self.0.push(WitnessPart {
            label: label.to_string(),
            value: WitnessValue::Ints(ks),
        });
        self
    }

    pub fn digits(mut self, label: &str, d: Vec<Vec<u8>>) -> Witness {
        self.0.push(WitnessPart {
            label: label.to_string(),
            value: WitnessValue::Digits(d),
        });
        self
    }

    pub fn get_point(&self, label: &str) -> Option<&LatticePoint> {
        self.0.iter().find_map(|p| {
            if p.label == label {
                match &p.value {
                    WitnessValue::Point(pt) => Some(pt),
                    _ => None,
                }
            } else {
                None
            }
        })
    }

    pub fn get_int(&self, label: &str) -> Option<i64> {
        self.0.iter().find_map(|p| {
            if p.label == label {
                match &p.value {
                    WitnessValue::Int(k) => Some(*k),
                    _ => None,
                }
            } else {
                None
            }
        })
    }

    pub fn get_points(&self, label: &str) -> Option<&[LatticePoint]> {
        self.0.iter().find_map(|p| {
            if p.label == label {
                match &p.value {
                    WitnessValue::Points(ps) => Some(ps.as_slice()),
                    _ => None,
                }
            } else {
                None
            }
        })
    }

    pub fn get_ints(&self, label: &str) -> Option<&[i64]> {
        self.0.iter().find_map(|p| {
            if p.label == label {
                match &p.value {
                    WitnessValue::Ints(ks) => Some(ks.as_slice()),
                    _ => None,
                }
            } else {
                None
            }
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}=", part.label)?;
            match &part.value {
                WitnessValue::Int(k) => write!(f, "{}", k)?,
                WitnessValue::Point(p) => write!(f, "{}", p)?,
                WitnessValue::Points(ps) => {
                    write!(f, "[")?;
                    for (j, p) in ps.iter().enumerate() {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", p)?;
                    }
                    write!(f, "]")?;
                }
                WitnessValue::Ints(ks) => write!(f, "{:?}", ks)?,
                WitnessValue::Digits(d) => write!(f, "{:?}", d)?,
            }
        }
        Ok(())
    }
}

/// Outcome of one bounded condition check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Holds { bound: SearchBound },
    Fails { witness: Witness },
    HypothesisViolated { reason: String },
}

impl Verdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { bound } => write!(f, "holds ({})", bound),
            Verdict::Fails { witness } => write!(f, "fails [{}]", witness),
            Verdict::HypothesisViolated { reason } => {
                write!(f, "hypothesis violated: {}", reason)
            }
        }
    }
}
