//! Hermite-style row echelon form of an integer lattice basis, used to
//! canonicalize points modulo the unit sublattice.

use super::LatticePoint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

#[derive(Clone, Debug, Default)]
pub(crate) struct Hnf {
    n: usize,
    rows: Vec<LatticePoint>,
    pivots: Vec<usize>,
}

impl Hnf {
    pub fn new(n: usize, gens: &[LatticePoint]) -> Hnf {
        let mut pool: Vec<LatticePoint> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let mut rows: Vec<LatticePoint> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for c in 0..n {
            loop {
                let nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].0[c] != 0).collect();
                match nz.len() {
                    0 => break,
                    1 => {
                        let mut r = pool.swap_remove(nz[0]);
                        if r.0[c] < 0 {
                            r = r.neg();
                        }
                        rows.push(r);
                        pivots.push(c);
                        break;
                    }
                    _ => {
                        // euclidean step: reduce every other row by the one
                        // with the smallest pivot entry
                        let &imin = nz
                            .iter()
                            .min_by_key(|&&i| pool[i].0[c].unsigned_abs())
                            .unwrap();
                        let base = pool[imin].clone();
                        for &i in &nz {
                            if i == imin {
                                continue;
                            }
                            let q = pool[i].0[c] / base.0[c];
                            if q != 0 {
                                pool[i] = pool[i].sub(&base.scale(q));
                            }
                        }
                        pool.retain(|r| !r.is_zero());
                    }
                }
            }
        }
        // canonical form: entries above each pivot reduced into [0, pivot)
        for i in 0..rows.len() {
            for j in 0..i {
                let c = pivots[i];
                let q = Integer::div_floor(&rows[j].0[c], &rows[i].0[c]);
                if q != 0 {
                    rows[j] = rows[j].sub(&rows[i].scale(q));
                }
            }
        }
        Hnf { n, rows, pivots }
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &LatticePoint) -> LatticePoint {
        let mut w = v.clone();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = Integer::div_floor(&w.0[c], &row.0[c]);
            if q != 0 {
                w = w.sub(&row.scale(q));
            }
        }
        w
    }

    pub fn contains(&self, v: &LatticePoint) -> bool {
        self.reduce(v).is_zero()
    }

    /// Residual of `v` after rational elimination by the rows; zero iff `v`
    /// lies in the rational span of the lattice.
    pub fn rational_residual(&self, v: &LatticePoint) -> Vec<Rational64> {
        let mut r: Vec<Rational64> = v.0.iter().map(|&c| Rational64::from_integer(c)).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if !r[c].is_zero() {
                let q = r[c] / Rational64::from_integer(row.0[c]);
                for (ri, &wi) in r.iter_mut().zip(&row.0) {
                    *ri -= q * Rational64::from_integer(wi);
                }
            }
        }
        debug_assert_eq!(r.len(), self.n);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::from_slice(c)
    }

    #[test]
    fn reduces_to_canonical_residue() {
        let h = Hnf::new(2, &[p(&[2, 0])]);
        assert_eq!(h.reduce(&p(&[5, 3])), p(&[1, 3]));
        assert_eq!(h.reduce(&p(&[-1, 0])), p(&[1, 0]));
        assert!(h.contains(&p(&[-4, 0])));
        assert!(!h.contains(&p(&[1, 0])));
    }

    #[test]
    fn gcd_combination() {
        let h = Hnf::new(1, &[p(&[6]), p(&[10])]);
        assert!(h.contains(&p(&[2])));
        assert!(!h.contains(&p(&[3])));
    }

    #[test]
    fn rational_span() {
        let h = Hnf::new(2, &[p(&[2, 2])]);
        let r = h.rational_residual(&p(&[1, 1]));
        assert!(r.iter().all(|x| x.is_zero()));
        let r = h.rational_residual(&p(&[1, 0]));
        assert!(r.iter().any(|x| !x.is_zero()));
    }
}
