//! Multivariate gcd by recursive primitive pseudo-remainder sequences.
//!
//! A main variable is picked, contents with respect to it are split off and
//! handled recursively, and the primitive parts run through a PRS where every
//! remainder is reduced to its primitive part. Results are normalized to
//! primitive integer coefficients with a positive leading coefficient.

use super::{MultiPoly, PolyError};
use std::collections::BTreeMap;

/// Normalized gcd; `gcd(f, 0)` is the normalization of `f`.
pub fn gcd_multi(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    f.check_vars(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::GcdOfZeros);
    }
    Ok(gcd_inner(f, g).normalized())
}

fn gcd_inner(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one(f.nvars());
    }
    let main = f
        .first_present_var()
        .unwrap()
        .min(g.first_present_var().unwrap());

    let fu = f.as_univariate(main);
    let gu = g.as_univariate(main);
    if f.degree_in(main) == 0 {
        // main occurs only in g: gcd(f, cont_main(g))
        return gcd_inner(f, &content(&gu));
    }
    if g.degree_in(main) == 0 {
        return gcd_inner(&content(&fu), g);
    }

    let cf = content(&fu);
    let cg = content(&gu);
    let d = gcd_inner(&cf, &cg);
    let mut a = exact_div(f, &cf);
    let mut b = exact_div(g, &cg);
    if a.degree_in(main) < b.degree_in(main) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, main);
        if r.is_zero() {
            break;
        }
        if r.degree_in(main) == 0 {
            // the primitive parts are coprime in the main variable
            b = MultiPoly::one(f.nvars());
            break;
        }
        a = b;
        b = primitive_part(&r, main);
    }
    d.mul(&primitive_part(&b, main)).expect("same nvars")
}

/// Content with respect to the main variable: gcd of the coefficient
/// polynomials (normalized, so unit factors are stripped).
fn content(univ: &BTreeMap<u32, MultiPoly>) -> MultiPoly {
    let mut it = univ.values();
    let first = it.next().expect("nonzero polynomial").clone();
    let mut acc = first.normalized();
    for c in it {
        if acc.is_unit() {
            break;
        }
        acc = gcd_inner(&acc, c).normalized();
    }
    acc
}

fn primitive_part(p: &MultiPoly, main: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let u = p.as_univariate(main);
    exact_div(p, &content(&u))
}

fn exact_div(p: &MultiPoly, d: &MultiPoly) -> MultiPoly {
    p.divide_exact(d)
        .expect("nonzero divisor")
        .expect("content divides exactly")
}

/// Pseudo-remainder of `a` by `b` in the main variable: repeatedly scales by
/// the leading coefficient of `b` so every elimination step stays integral.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, main: usize) -> MultiPoly {
    let bu = b.as_univariate(main);
    let (bdeg, blc) = bu
        .iter()
        .next_back()
        .map(|(d, c)| (*d, c.clone()))
        .expect("b nonzero");
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let ru = r.as_univariate(main);
        let (rdeg, rlc) = ru.iter().next_back().map(|(d, c)| (*d, c.clone())).unwrap();
        if rdeg < bdeg {
            return r;
        }
        // r := blc * r - rlc * x^(rdeg-bdeg) * b
        let shifted = shift_mul(b, &rlc, main, rdeg - bdeg);
        r = r.mul(&blc).expect("same nvars").sub(&shifted).expect("same nvars");
    }
}

fn shift_mul(b: &MultiPoly, c: &MultiPoly, main: usize, shift: u32) -> MultiPoly {
    let mut shifted = MultiPoly::zero(b.nvars());
    for (e, k) in b.terms() {
        let mut e2 = e.clone();
        e2.0[main] += shift;
        shifted.add_term(e2, k.clone());
    }
    shifted.mul(c).expect("same nvars")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(text: &str, vars: &[&str]) -> MultiPoly {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let vars = ["x", "y"];
        let g = gcd_multi(&p("x^2 - y^2", &vars), &p("(x+y)^2", &vars)).unwrap();
        assert_eq!(g, p("x + y", &vars));

        let g = gcd_multi(&p("2*x", &vars), &p("2*y", &vars)).unwrap();
        assert_eq!(g, MultiPoly::one(2));

        let f = p("6*x^2*y - 3*y", &vars);
        assert_eq!(gcd_multi(&f, &f).unwrap(), f.normalized());

        let g = gcd_multi(&f, &MultiPoly::zero(2)).unwrap();
        assert_eq!(g, f.normalized());

        assert_eq!(
            gcd_multi(&MultiPoly::zero(2), &MultiPoly::zero(2)),
            Err(PolyError::GcdOfZeros)
        );
    }

    #[test]
    fn gcd_divides_both() {
        let vars = ["x", "y", "z"];
        let h = p("x*z + y", &vars);
        let f = p("x + y^2", &vars).mul(&h).unwrap();
        let g = p("y - 2*z", &vars).mul(&h).unwrap();
        let d = gcd_multi(&f, &g).unwrap();
        assert!(f.divide_exact(&d).unwrap().is_some());
        assert!(g.divide_exact(&d).unwrap().is_some());
        assert_eq!(d, h.normalized());
    }
}
