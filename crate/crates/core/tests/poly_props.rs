//! Property tests for the exact polynomial layer: ring laws, division,
//! gcd, square-freeness against a factored oracle, and determinants against
//! cofactor expansion.

use factoriality::poly::{det_fraction_free, gcd_multi, parse_poly, MultiPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn coeff(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arb_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, nvars),
            -5i64..=5,
            1i64..=3,
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        MultiPoly::from_terms(
            nvars,
            terms
                .into_iter()
                .map(|(e, n, d)| (e, coeff(n, d)))
                .collect::<Vec<_>>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(
        f in arb_poly(3, 3, 4),
        g in arb_poly(3, 3, 4),
        h in arb_poly(3, 3, 4),
    ) {
        let assoc_l = f.add(&g).unwrap().add(&h).unwrap();
        let assoc_r = f.add(&g.add(&h).unwrap()).unwrap();
        prop_assert_eq!(assoc_l, assoc_r);

        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());

        let distr_l = f.mul(&g.add(&h).unwrap()).unwrap();
        let distr_r = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(distr_l, distr_r);

        let mul_assoc_l = f.mul(&g).unwrap().mul(&h).unwrap();
        let mul_assoc_r = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(mul_assoc_l, mul_assoc_r);
    }

    #[test]
    fn exact_division_inverts_multiplication(
        f in arb_poly(3, 3, 4),
        g in arb_poly(3, 3, 4),
    ) {
        prop_assume!(!g.is_zero());
        let prod = f.mul(&g).unwrap();
        let q = prod.divide_exact(&g).unwrap().expect("product divides");
        prop_assert_eq!(q, f);
    }

    #[test]
    fn gcd_divides_and_scales(
        f in arb_poly(2, 3, 3),
        g in arb_poly(2, 3, 3),
        h in arb_poly(2, 2, 2),
    ) {
        prop_assume!(!f.is_zero() || !g.is_zero());
        let d = gcd_multi(&f, &g).unwrap();
        if !f.is_zero() {
            prop_assert!(f.divide_exact(&d).unwrap().is_some());
        }
        if !g.is_zero() {
            prop_assert!(g.divide_exact(&d).unwrap().is_some());
        }
        if !h.is_zero() {
            let fh = f.mul(&h).unwrap();
            let gh = g.mul(&h).unwrap();
            let big = gcd_multi(&fh, &gh).unwrap();
            let expect = d.mul(&h).unwrap().normalized();
            prop_assert_eq!(big, expect);
        }
    }

    #[test]
    fn squares_are_never_squarefree(
        f in arb_poly(2, 2, 3),
        g in arb_poly(2, 2, 3),
    ) {
        prop_assume!(!f.is_constant() && !f.is_zero());
        prop_assume!(!g.is_zero());
        let prod = f.mul(&f).unwrap().mul(&g).unwrap();
        prop_assert!(!prod.squarefree_in_a().unwrap());
    }

    #[test]
    fn determinant_matches_cofactor_expansion(
        entries in prop::collection::vec(arb_poly(2, 2, 2), 16),
        n in 1usize..=4,
    ) {
        let m: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| entries[i * 4 + j].clone()).collect())
            .collect();
        let fast = det_fraction_free(&m).unwrap();
        prop_assert_eq!(fast, cofactor_det(&m));
    }
}

/// Independent determinant oracle by first-row cofactor expansion.
fn cofactor_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    let nv = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(nv);
    for j in 0..n {
        let minor: Vec<Vec<MultiPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&cofactor_det(&minor)).unwrap();
        acc = if j % 2 == 0 {
            acc.add(&term).unwrap()
        } else {
            acc.sub(&term).unwrap()
        };
    }
    acc
}

/// Square-freeness against an explicitly factored construction: products of
/// distinct irreducible factors of degree at most two are square-free exactly
/// when no exponent exceeds one.
#[test]
fn squarefree_matches_factored_oracle_on_200_cases() {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let pool = [
        "x", "x + 1", "x - 1", "x + 2", "x - 3", "x^2 + 1", "x^2 + 2", "x^2 + x + 1",
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let mut f = parse_poly("1", &["x"]).unwrap();
        let scale = rng.gen_range(1..=4);
        f = f.mul_coeff(&coeff(scale, 1));
        let mut expect = true;
        let mut used = false;
        for p in pool {
            if rng.gen_bool(0.4) {
                used = true;
                let e = rng.gen_range(1..=3u32);
                if e > 1 {
                    expect = false;
                }
                f = f.mul(&parse_poly(p, &["x"]).unwrap().pow(e)).unwrap();
            }
        }
        if !used {
            expect = true; // a nonzero constant
        }
        assert_eq!(
            f.squarefree_in_a().unwrap(),
            expect,
            "case {}: {}",
            case,
            f
        );
    }
}
