//! Integer row lattices and the Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, positive and in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k)
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = a.len();
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

fn row_op(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    // row[target] -= q * row[source]
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

fn col_op(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the remaining block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { u, d, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &q);
                row_op(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &q);
                col_op(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold in a row whose entries the pivot misses.
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&d[i][j] % &d[t][t]).is_zero())
            });
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut d, t, i, &minus_one);
                    row_op(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithDecomposition { u, d, v }
}

/// A sublattice of `Z^cols` kept as rows in Hermite-like echelon form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowLattice {
    cols: usize,
    /// `rows[k]` has its leading nonzero entry, positive, at `pivots[k]`.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl RowLattice {
    pub fn new(cols: usize) -> Self {
        RowLattice {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Adds a generator, keeping the echelon form.
    pub fn insert(&mut self, row: Vec<BigInt>) {
        debug_assert_eq!(row.len(), self.cols);
        let mut row = row;
        let mut k = 0;
        loop {
            let Some(lead) = row.iter().position(|x| !x.is_zero()) else {
                return;
            };
            while k < self.pivots.len() && self.pivots[k] < lead {
                k += 1;
            }
            if k == self.pivots.len() || self.pivots[k] > lead {
                if row[lead].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                self.rows.insert(k, row);
                self.pivots.insert(k, lead);
                self.reduce_above(k);
                return;
            }
            // Same pivot column: replace the pair by (gcd row, zeroed row).
            let a = self.rows[k][lead].clone();
            let b = row[lead].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (a_g, b_g) = (&a / &g, &b / &g);
            let old = std::mem::take(&mut self.rows[k]);
            let new_pivot: Vec<BigInt> = old.iter().zip(&row).map(|(p, r)| &x * p + &y * r).collect();
            let remainder: Vec<BigInt> = old.iter().zip(&row).map(|(p, r)| &a_g * r - &b_g * p).collect();
            let mut new_pivot = new_pivot;
            if new_pivot[lead].is_negative() {
                new_pivot.iter_mut().for_each(|x| *x = -x.clone());
            }
            self.rows[k] = new_pivot;
            self.reduce_above(k);
            row = remainder;
            k += 1;
        }
    }

    /// Reduces the entries above pivot `k` (and row `k` itself against later pivots).
    fn reduce_above(&mut self, k: usize) {
        for j in k + 1..self.rows.len() {
            let c = self.pivots[j];
            let q = self.rows[k][c].div_floor(&self.rows[j][c]);
            if !q.is_zero() {
                let src = self.rows[j].clone();
                for (t, s) in self.rows[k].iter_mut().zip(&src) {
                    *t -= &q * s;
                }
            }
        }
        let c = self.pivots[k];
        for i in 0..k {
            let q = self.rows[i][c].div_floor(&self.rows[k][c]);
            if !q.is_zero() {
                let src = self.rows[k].clone();
                for (t, s) in self.rows[i].iter_mut().zip(&src) {
                    *t -= &q * s;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_big(m: &[Vec<i64>]) -> IntMatrix {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(mat_mul(&mat_mul(&s.u, a), &s.v), s.d);
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        for i in 0..s.d.len() {
            for j in 0..s.d[i].len() {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(diag.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn known_forms() {
        let a = to_big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check(&a);
        let d = smith_normal_form(&a).diagonal();
        assert_eq!(d, [2, 6, 12].map(BigInt::from));
        assert_eq!(determinant(&to_big(&[vec![2, 1], vec![1, 1]])), BigInt::one());
    }

    fn lattice_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
        let mut l = RowLattice::new(cols);
        for r in to_big(rows) {
            l.insert(r);
        }
        if l.rank() == 0 {
            return Vec::new();
        }
        smith_normal_form(&l.basis().to_vec()).diagonal()
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..10, 25)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            check(&to_big(&m));
        }

        #[test]
        fn incremental_matches_batch(rows in 1usize..8, cols in 1usize..4, seed in prop::collection::vec(-12i64..13, 32)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let batch = smith_normal_form(&to_big(&m)).diagonal();
            prop_assert_eq!(lattice_diagonal(&m, cols), batch);
        }
    }
}
