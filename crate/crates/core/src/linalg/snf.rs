use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u * m * v = s` with `u`, `v` unimodular and `s` diagonal,
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries of `s`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

struct Reduction {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Reduction {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_dst -= q * row_src
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src_row = m[src].clone();
            for (x, s) in m[dst].iter_mut().zip(&src_row) {
                *x -= q * s;
            }
        }
    }

    /// col_dst -= q * col_src
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[src].clone();
                row[dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn from_rows(rows: usize, cols: usize, data: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::new(rows, cols, data.into_iter().flatten().collect())
}

/// Smith normal form by row/column reduction, always pivoting on an entry
/// of minimal absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reduction {
        a: to_rows(m),
        u: to_rows(&IntMatrix::identity(rows)),
        v: to_rows(&IntMatrix::identity(cols)),
    };

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if r.a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| r.a[i][j].abs() < r.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if r.a[i][t].is_zero() {
                    continue;
                }
                let q = &r.a[i][t] / &r.a[t][t];
                r.row_axpy(i, t, &q);
                if !r.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if r.a[t][j].is_zero() {
                    continue;
                }
                let q = &r.a[t][j] / &r.a[t][t];
                r.col_axpy(j, t, &q);
                if !r.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; move it in.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !r.a[i][t].is_zero() && r.a[i][t].abs() < r.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !r.a[t][j].is_zero() && r.a[t][j].abs() < r.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                r.swap_rows(t, best.0);
                r.swap_cols(t, best.1);
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&r.a[i][j] % &r.a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    r.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if r.a[t][t].is_negative() {
            r.negate_row(t);
        }
    }

    SmithForm {
        u: from_rows(rows, rows, r.u),
        s: from_rows(rows, cols, r.a),
        v: from_rows(cols, cols, r.v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.s);
        assert!(snf.u.det().abs().is_one());
        assert!(snf.v.det().abs().is_one());
        snf
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        let snf = check(&m);
        assert_eq!(snf.s, IntMatrix::from_rows(2, &[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn identity_is_fixed() {
        let snf = check(&IntMatrix::identity(3));
        assert_eq!(snf.s, IntMatrix::identity(3));
    }

    #[test]
    fn zero_one_by_one() {
        let snf = check(&IntMatrix::from_rows(1, &[vec![0]]));
        assert_eq!(snf.s, IntMatrix::from_rows(1, &[vec![0]]));
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn rectangular_and_empty() {
        let m = IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12]]);
        let snf = check(&m);
        assert_eq!(snf.elementary_divisors(), vec![BigInt::from(2), BigInt::from(6)]);
        let empty = IntMatrix::zeros(0, 2);
        let snf = smith_normal_form(&empty);
        assert_eq!(snf.s.rows(), 0);
        assert_eq!(snf.v, IntMatrix::identity(2));
    }
}
