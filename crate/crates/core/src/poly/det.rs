//! Exact determinants of polynomial matrices by fraction-free elimination.

use super::{MultiPoly, PolyError};

/// Bareiss one-step fraction-free elimination with row pivoting. Every
/// division is exact; entries stay polynomial throughout.
pub fn det_fraction_free(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    if n == 0 {
        return Err(PolyError::NonSquareMatrix);
    }
    let nvars = m[0][0].nvars();
    for row in m {
        if row.len() != n {
            return Err(PolyError::NonSquareMatrix);
        }
        for e in row {
            e.check_vars(&m[0][0])?;
        }
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }

    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(MultiPoly::zero(nvars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k]
                    .mul(&a[i][j])?
                    .sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = num
                    .divide_exact(&prev)?
                    .expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(text: &str) -> MultiPoly {
        parse_poly(text, &["x", "y"]).unwrap()
    }

    #[test]
    fn small_determinants() {
        let d = det_fraction_free(&[vec![p("1"), p("0")], vec![p("y"), p("x")]]).unwrap();
        assert_eq!(d, p("x"));

        let d = det_fraction_free(&[vec![p("1"), p("1")], vec![p("1"), p("-1")]]).unwrap();
        assert_eq!(d, p("-2"));

        let d = det_fraction_free(&[vec![p("x")]]).unwrap();
        assert_eq!(d, p("x"));
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let d = det_fraction_free(&[
            vec![p("0"), p("1"), p("x")],
            vec![p("1"), p("0"), p("y")],
            vec![p("x"), p("y"), p("0")],
        ])
        .unwrap();
        // cofactor expansion: 2xy
        assert_eq!(d, p("2*x*y"));
    }

    #[test]
    fn singular_matrix() {
        let d = det_fraction_free(&[vec![p("x"), p("x")], vec![p("x"), p("x")]]).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn rejects_non_square() {
        assert!(det_fraction_free(&[vec![p("x"), p("y")]]).is_err());
    }
}
