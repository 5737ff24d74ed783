//! Sparse multivariate polynomials over the rationals.
//!
//! Coefficients are exact (`BigRational`), terms are kept in a `BTreeMap`
//! ordered by graded lexicographic order with x1 > x2 > ... > xn, so every
//! polynomial has a single canonical form.

mod det;
mod gcd;
mod parser;

pub use det::det_fraction_free;
pub use parser::parse_poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type Coeff = BigRational;

/// Errors raised by polynomial operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },
    #[error("derivative index {index} out of range for {nvars} variables")]
    BadVarIndex { index: usize, nvars: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("operation requires a nonzero polynomial")]
    ZeroInput,
    #[error("matrix is not square")]
    NonSquareMatrix,
}

/// Exponent vector of one monomial. The `Ord` impl is graded lex with
/// x1 > x2 > ... > xn, so the maximal key of a term map is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zeros(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Coeff>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(BigRational::one(), nvars)
    }

    pub fn constant(c: Coeff, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Exponent::zeros(nvars), c);
        }
        p
    }

    pub fn from_int(c: i64, nvars: usize) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)), nvars)
    }

    /// The monomial x_index.
    pub fn var(index: usize, nvars: usize) -> Self {
        assert!(index < nvars);
        let mut e = Exponent::zeros(nvars);
        e.0[index] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Exponent(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.leading_exponent().unwrap().is_constant())
    }

    /// Nonzero constant polynomials are exactly the units of Q[x1..xn].
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Coeff)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    pub fn leading_exponent(&self) -> Option<&Exponent> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, e: &Exponent) -> Coeff {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    fn add_term(&mut self, e: Exponent, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_coeff(&self, c: &Coeff) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self).expect("same variable count");
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Result<MultiPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVarIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[var] = k - 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(k)));
        }
        Ok(out)
    }

    /// Exact division: `Ok(Some(q))` with `self = q * g`, `Ok(None)` when no
    /// such polynomial quotient exists. Recurses on a main variable, dividing
    /// coefficient polynomials exactly at every step.
    pub fn divide_exact(&self, g: &MultiPoly) -> Result<Option<MultiPoly>, PolyError> {
        self.check_vars(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(MultiPoly::zero(self.nvars)));
        }
        if let Some(c) = g.constant_value() {
            return Ok(Some(self.mul_coeff(&c.recip())));
        }
        let main = g.first_present_var().expect("nonconstant");
        if self.degree_in(main) < g.degree_in(main) {
            return Ok(None);
        }
        let mut rem = self.as_univariate(main);
        let gu = g.as_univariate(main);
        let (gdeg, glc) = gu.iter().next_back().map(|(d, c)| (*d, c.clone())).unwrap();
        let mut quot: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        while let Some((rdeg, rlc)) = rem.iter().next_back().map(|(d, c)| (*d, c.clone())) {
            if rdeg < gdeg {
                return Ok(None);
            }
            let qc = match rlc.divide_exact(&glc)? {
                Some(q) => q,
                None => return Ok(None),
            };
            let shift = rdeg - gdeg;
            for (d, c) in &gu {
                let prod = c.mul(&qc)?;
                univ_sub(&mut rem, d + shift, &prod)?;
            }
            quot.insert(shift, qc);
        }
        Ok(Some(from_univariate(self.nvars, main, &quot)))
    }

    /// True when no square of a nonconstant polynomial divides `self`;
    /// characteristic-zero test via the gcd with all partial derivatives.
    pub fn squarefree_in_a(&self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let mut g = self.clone();
        for v in 0..self.nvars {
            let d = self.derivative(v)?;
            if d.is_zero() {
                continue;
            }
            g = gcd::gcd_multi(&g, &d)?;
            if g.is_constant() {
                return Ok(true);
            }
        }
        Ok(g.is_constant())
    }

    /// Smallest variable index with positive degree, if any.
    pub fn first_present_var(&self) -> Option<usize> {
        (0..self.nvars).find(|&v| self.terms.keys().any(|e| e.0[v] > 0))
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    /// View as univariate in `var`; coefficients keep `nvars` slots with the
    /// main variable zeroed out.
    fn as_univariate(&self, var: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.0[var];
            let mut e2 = e.clone();
            e2.0[var] = 0;
            out.entry(d)
                .or_insert_with(|| MultiPoly::zero(self.nvars))
                .add_term(e2, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::VarMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[v];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Canonical normalization used for gcd outputs: integer coefficients of
    /// content one, positive leading coefficient in graded lex.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c * BigRational::from_integer(den_lcm.clone());
            num_gcd = num_integer::gcd(num_gcd, scaled.to_integer());
        }
        let mut scale = BigRational::new(den_lcm, num_gcd);
        if self.leading_coeff().unwrap() * &scale < BigRational::zero() {
            scale = -scale;
        }
        self.mul_coeff(&scale)
    }

    /// Render in the canonical text grammar (descending graded lex).
    pub fn to_text(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.is_constant() {
                factors.push(rational_to_text(&abs));
            }
            for (v, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(vars[v].to_string()),
                    _ => factors.push(format!("{}^{}", vars[v], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn rational_to_text(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn univ_sub(
    map: &mut BTreeMap<u32, MultiPoly>,
    deg: u32,
    p: &MultiPoly,
) -> Result<(), PolyError> {
    if p.is_zero() {
        return Ok(());
    }
    let cur = map.remove(&deg).unwrap_or_else(|| MultiPoly::zero(p.nvars));
    let next = cur.sub(p)?;
    if !next.is_zero() {
        map.insert(deg, next);
    }
    Ok(())
}

fn from_univariate(nvars: usize, var: usize, map: &BTreeMap<u32, MultiPoly>) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    for (d, p) in map {
        for (e, c) in &p.terms {
            let mut e2 = e.clone();
            e2.0[var] += d;
            out.add_term(e2, c.clone());
        }
    }
    out
}

pub use gcd::gcd_multi;

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_text(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, vars: &[&str]) -> MultiPoly {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn parse_examples_from_grammar() {
        let f = p("x^2*y + 3/2", &["x", "y"]);
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coeff(&Exponent(vec![2, 1])), BigRational::one());
        assert_eq!(
            f.coeff(&Exponent(vec![0, 0])),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );

        assert!(p("x^2 - x^2", &["x", "y"]).is_zero());

        let sq = p("(x+y)^2", &["x", "y"]);
        let expect = MultiPoly::from_terms(
            2,
            vec![
                (vec![2, 0], BigRational::one()),
                (vec![1, 1], BigRational::from_integer(BigInt::from(2))),
                (vec![0, 2], BigRational::one()),
            ],
        );
        assert_eq!(sq, expect);
    }

    #[test]
    fn arith_identities() {
        let x = p("x", &["x", "y"]);
        let negx = p("-x", &["x", "y"]);
        assert!(x.add(&negx).unwrap().is_zero());

        let lhs = p("x+y", &["x", "y"]).mul(&p("x-y", &["x", "y"])).unwrap();
        assert_eq!(lhs, p("x^2 - y^2", &["x", "y"]));

        assert_eq!(p("x+1", &["x"]).pow(0), MultiPoly::one(1));
    }

    #[test]
    fn divide_exact_cases() {
        let f = p("x^2 - y^2", &["x", "y"]);
        let g = p("x + y", &["x", "y"]);
        let q = f.divide_exact(&g).unwrap().unwrap();
        assert_eq!(q, p("x - y", &["x", "y"]));

        let q = p("x^3", &["x"]).divide_exact(&p("x^2", &["x"])).unwrap();
        assert_eq!(q.unwrap(), p("x", &["x"]));

        assert!(p("x+1", &["x", "y"])
            .divide_exact(&p("y", &["x", "y"]))
            .unwrap()
            .is_none());

        assert_eq!(
            p("x", &["x"]).divide_exact(&MultiPoly::zero(1)),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn derivative_cases() {
        assert_eq!(
            p("x^2*y", &["x", "y"]).derivative(0).unwrap(),
            p("2*x*y", &["x", "y"])
        );
        assert!(p("y^3", &["x", "y"]).derivative(0).unwrap().is_zero());
        assert_eq!(
            p("x^2+y^2", &["x", "y"]).derivative(1).unwrap(),
            p("2*y", &["x", "y"])
        );
        assert!(p("x", &["x"]).derivative(3).is_err());
    }

    #[test]
    fn squarefree_cases() {
        assert!(!p("x^2*y + x^2", &["x", "y"]).squarefree_in_a().unwrap());
        assert!(p("x+1", &["x", "y"]).squarefree_in_a().unwrap());
        assert!(p("5", &["x", "y"]).squarefree_in_a().unwrap());
        assert_eq!(
            MultiPoly::zero(2).squarefree_in_a(),
            Err(PolyError::ZeroInput)
        );
    }

    #[test]
    fn normalization_strips_content_and_sign() {
        let f = p("-4*x - 6", &["x"]);
        assert_eq!(f.normalized(), p("2*x + 3", &["x"]));
        let g = p("1/2*x^2 - 1/3", &["x"]);
        assert_eq!(g.normalized(), p("3*x^2 - 2", &["x"]));
    }

    #[test]
    fn text_round_trip_is_fixed_point() {
        let vars = ["x", "y", "z"];
        let f = p("2*x^2*y - 7/3*z + y - 5", &vars);
        let text = f.to_text(&vars);
        let g = p(&text, &vars);
        assert_eq!(f, g);
        assert_eq!(g.to_text(&vars), text);
    }
}
