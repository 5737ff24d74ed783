//! The gcd-of-Jacobian-minors criterion for R = k[f_1..f_r] inside
//! Q[x_1..x_n], with a consistency bridge to the monomial catalog.

use crate::conditions::{self, ConditionId, RSet};
use crate::lattice::{AmbientLattice, LatticeError, LatticePoint, MonomialSubring};
use crate::poly::{det_fraction_free, gcd_multi, MultiPoly, PolyError};
use crate::verdict::{SearchBound, Verdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const RANK_SEED: u64 = 0x0fac_70a1;
const RANK_AGREEMENT: usize = 3;
const RANK_MAX_EVALS: usize = 24;

#[derive(Debug, Error)]
pub enum JacobianError {
    #[error("a polynomial map needs between 1 and n polynomials, got {r} in {n} variables")]
    BadArity { r: usize, n: usize },
    #[error("polynomial {0} is zero")]
    ZeroPoly(usize),
    #[error("polynomials are algebraically dependent (Jacobian rank {rank} < {r})")]
    Dependent { rank: usize, r: usize },
    #[error("all minors vanish, contradicting the rank certificate")]
    RankContradiction,
    #[error("polynomial {0} is not a single monomial")]
    NonMonomial(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Condition(#[from] conditions::ConditionError),
}

/// An algebraically independent family f_1, ..., f_r in Q[x_1..x_n].
#[derive(Clone, Debug)]
pub struct PolyMap {
    names: Vec<String>,
    fs: Vec<MultiPoly>,
}

/// A symbolically nonzero r x r minor certifying full Jacobian rank.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub cols: Vec<usize>,
    pub minor: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct MinorReport {
    /// (column index tuple, minor), in lexicographic tuple order.
    pub minors: Vec<(Vec<usize>, MultiPoly)>,
    pub gcd: MultiPoly,
    /// gcd is a nonzero constant.
    pub verdict: bool,
}

#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub minor: MinorReport,
    pub fragment: Verdict,
    pub consistent: bool,
}

impl PolyMap {
    pub fn new(names: Vec<String>, fs: Vec<MultiPoly>) -> Result<PolyMap, JacobianError> {
        let n = names.len();
        let r = fs.len();
        if r == 0 || r > n {
            return Err(JacobianError::BadArity { r, n });
        }
        for (i, f) in fs.iter().enumerate() {
            if f.is_zero() {
                return Err(JacobianError::ZeroPoly(i));
            }
            assert_eq!(f.nvars(), n, "polynomial arity mismatch");
        }
        Ok(PolyMap { names, fs })
    }

    pub fn parse(vars: &[&str], texts: &[&str]) -> Result<PolyMap, JacobianError> {
        let fs = texts
            .iter()
            .map(|t| crate::poly::parse_poly(t, vars))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(vars.iter().map(|s| s.to_string()).collect(), fs)
    }

    pub fn r(&self) -> usize {
        self.fs.len()
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.fs
    }

    /// Entry (i, j) is the partial derivative of f_i by x_j.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.fs
            .iter()
            .map(|f| {
                (0..self.n())
                    .map(|j| f.derivative(j).expect("index in range"))
                    .collect()
            })
            .collect()
    }

    /// Rank of the Jacobian over the rational function field: seeded random
    /// evaluations repeated until the last few agree, then certified by a
    /// symbolically nonzero minor whenever full rank is claimed.
    pub fn independence_rank(&self) -> (usize, Option<RankCertificate>) {
        let jac = self.jacobian_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(RANK_SEED);
        let mut best: usize = 0;
        let mut best_cols: Vec<usize> = Vec::new();
        let mut run = 0usize;
        let mut evals = 0usize;
        while evals < RANK_MAX_EVALS {
            let point: Vec<BigRational> = (0..self.n())
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-1000..=1000i64))))
                .collect();
            let numeric: Vec<Vec<BigRational>> = jac
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| e.eval(&point).expect("dimension matches"))
                        .collect()
                })
                .collect();
            let (rank, cols) = rational_rank(numeric);
            evals += 1;
            if rank > best {
                best = rank;
                best_cols = cols;
                run = 1;
            } else if rank == best {
                run += 1;
            }
            if run >= RANK_AGREEMENT {
                break;
            }
        }
        if best == self.r() {
            let sub: Vec<Vec<MultiPoly>> = jac
                .iter()
                .map(|row| best_cols.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let minor = det_fraction_free(&sub).expect("square submatrix");
            // a nonzero numeric specialization certifies the symbolic minor
            debug_assert!(!minor.is_zero());
            if !minor.is_zero() {
                return (
                    best,
                    Some(RankCertificate {
                        cols: best_cols,
                        minor,
                    }),
                );
            }
        }
        (best, None)
    }

    /// All C(n, r) maximal minors, their normalized gcd, and the verdict
    /// "gcd is a nonzero constant". Zero minors are skipped in the fold.
    pub fn minor_report(&self) -> Result<MinorReport, JacobianError> {
        let (rank, cert) = self.independence_rank();
        if rank < self.r() || cert.is_none() {
            return Err(JacobianError::Dependent { rank, r: self.r() });
        }
        let jac = self.jacobian_matrix();
        let mut minors = Vec::new();
        for cols in combinations(self.n(), self.r()) {
            let sub: Vec<Vec<MultiPoly>> = jac
                .iter()
                .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let det = det_fraction_free(&sub)?;
            minors.push((cols, det));
        }
        let mut gcd: Option<MultiPoly> = None;
        for (_, m) in minors.iter().filter(|(_, m)| !m.is_zero()) {
            gcd = Some(match gcd {
                None => m.normalized(),
                Some(g) => {
                    if g.is_unit() {
                        g
                    } else {
                        gcd_multi(&g, m)?
                    }
                }
            });
        }
        let gcd = gcd.ok_or(JacobianError::RankContradiction)?;
        let verdict = gcd.is_unit();
        Ok(MinorReport {
            minors,
            gcd,
            verdict,
        })
    }

    /// For a map of single monomials, build the exponent semigroup and check
    /// the sound direction of the square-freeness equivalence: a monomial
    /// witness of Sqf R escaping Sqf A forces a nonconstant minor gcd.
    pub fn bridge_check(&self, bound: SearchBound) -> Result<BridgeReport, JacobianError> {
        for (i, f) in self.fs.iter().enumerate() {
            if f.num_terms() != 1 {
                return Err(JacobianError::NonMonomial(i));
            }
        }
        let minor = self.minor_report()?;
        let gens: Vec<LatticePoint> = self
            .fs
            .iter()
            .map(|f| {
                let e = f.leading_exponent().expect("nonzero");
                LatticePoint(e.0.iter().map(|&c| c as i64).collect())
            })
            .collect();
        let sub = MonomialSubring::new(AmbientLattice::natural(self.n()), gens, vec![])?;
        let fragment = conditions::eval(
            ConditionId::SetIncl(RSet::Sqf, crate::conditions::ASet::Sqf),
            &sub,
            bound,
        )?;
        let consistent = match &fragment {
            Verdict::Fails { .. } => !minor.verdict,
            _ => true,
        };
        Ok(BridgeReport {
            minor,
            fragment,
            consistent,
        })
    }
}

/// Exact rank of a rational matrix; returns the pivot columns of one maximal
/// nonsingular submatrix.
fn rational_rank(mut m: Vec<Vec<BigRational>>) -> (usize, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (0, vec![]);
    }
    let cols = m[0].len();
    let mut pivot_cols = Vec::new();
    let mut pr = 0usize;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(nz) = (pr..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(pr, nz);
        let inv = m[pr][c].clone();
        for i in pr + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &inv;
            for j in c..cols {
                let delta = &factor * &m[pr][j];
                m[i][j] = &m[i][j] - delta;
            }
        }
        pivot_cols.push(c);
        pr += 1;
    }
    (pr, pivot_cols)
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can still move
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 <= n - (r - i) {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn pm(vars: &[&str], texts: &[&str]) -> PolyMap {
        PolyMap::parse(vars, texts).unwrap()
    }

    #[test]
    fn jacobian_matrix_examples() {
        let m = pm(&["x", "y"], &["x+y", "x-y"]);
        let j = m.jacobian_matrix();
        let one = MultiPoly::one(2);
        assert_eq!(j[0][0], one);
        assert_eq!(j[0][1], one);
        assert_eq!(j[1][0], one);
        assert_eq!(j[1][1], one.neg());

        let m = pm(&["x", "y"], &["x", "x*y"]);
        let j = m.jacobian_matrix();
        assert_eq!(j[1][0], parse_poly("y", &["x", "y"]).unwrap());
        assert_eq!(j[1][1], parse_poly("x", &["x", "y"]).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(pm(&["x", "y"], &["x+y", "x-y"]).independence_rank().0, 2);
        let dependent = pm(&["x", "y"], &["x+y", "(x+y)^2"]);
        let (rank, cert) = dependent.independence_rank();
        assert_eq!(rank, 1);
        assert!(cert.is_none() || rank == dependent.r());
        assert_eq!(pm(&["x", "y"], &["x"]).independence_rank().0, 1);
    }

    #[test]
    fn rank_matches_symbolic_minor_scan() {
        // brute-force oracle: largest t with a symbolically nonzero t x t minor
        let cases: Vec<(Vec<&str>, Vec<&str>)> = vec![
            (vec!["x", "y"], vec!["x+y", "x-y"]),
            (vec!["x", "y"], vec!["x+y", "(x+y)^2"]),
            (vec!["x", "y", "z"], vec!["x*y", "y*z", "x*z"]),
            (vec!["x", "y", "z"], vec!["x+y+z", "x*y+y*z+x*z"]),
            (vec!["x", "y", "z"], vec!["x", "y", "x*y"]),
        ];
        for (vars, texts) in cases {
            let m = pm(&vars, &texts);
            let jac = m.jacobian_matrix();
            let mut oracle = 0;
            for t in (1..=m.r()).rev() {
                let mut found = false;
                for rows in combinations(m.r(), t) {
                    for cols in combinations(m.n(), t) {
                        let sub: Vec<Vec<MultiPoly>> = rows
                            .iter()
                            .map(|&i| cols.iter().map(|&c| jac[i][c].clone()).collect())
                            .collect();
                        if !det_fraction_free(&sub).unwrap().is_zero() {
                            found = true;
                            break;
                        }
                    }
                    if found {
                        break;
                    }
                }
                if found {
                    oracle = t;
                    break;
                }
            }
            assert_eq!(m.independence_rank().0, oracle, "{:?}", texts);
        }
    }

    #[test]
    fn minor_report_examples() {
        let rep = pm(&["x", "y"], &["x+y", "x-y"]).minor_report().unwrap();
        assert!(rep.verdict);
        assert!(rep.gcd.is_unit());
        assert_eq!(rep.minors.len(), 1);

        let rep = pm(&["x", "y"], &["x", "x*y"]).minor_report().unwrap();
        assert!(!rep.verdict);
        assert_eq!(rep.gcd, parse_poly("x", &["x", "y"]).unwrap());

        let rep = pm(&["x", "y"], &["x^2+y^2"]).minor_report().unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.minors.len(), 2);

        assert!(matches!(
            pm(&["x", "y"], &["x+y", "(x+y)^2"]).minor_report(),
            Err(JacobianError::Dependent { .. })
        ));
    }

    #[test]
    fn bridge_examples() {
        let b = SearchBound::default();
        let rep = pm(&["x", "y"], &["x", "x*y"]).bridge_check(b).unwrap();
        assert!(rep.consistent);
        assert!(!rep.minor.verdict);
        let w = rep.fragment.witness().expect("fragment witness exists");
        assert_eq!(
            w.get_point("v"),
            Some(&LatticePoint::from_slice(&[2, 1]))
        );

        let rep = pm(&["x", "y"], &["x^2", "y^2"]).bridge_check(b).unwrap();
        assert!(rep.consistent);
        assert!(!rep.minor.verdict);
        assert!(rep.fragment.is_fails());

        let rep = pm(&["x", "y"], &["x", "y"]).bridge_check(b).unwrap();
        assert!(rep.consistent);
        assert!(rep.minor.verdict);
        assert!(rep.fragment.is_holds());

        assert!(matches!(
            pm(&["x", "y"], &["x+y", "x*y"]).bridge_check(b),
            Err(JacobianError::NonMonomial(0))
        ));
    }

    #[test]
    fn combinations_enumerate_lex() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
