//! Small exact integer linear algebra on dense row-major matrices.

use num_rational::Ratio;

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j]).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub fn column(a: &Matrix, j: usize) -> Vec<i64> {
    a.iter().map(|row| row[j]).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &Matrix) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

pub fn is_unimodular(a: &Matrix) -> bool {
    a.iter().all(|r| r.len() == a.len()) && determinant(a).abs() == 1
}

/// Exact solution of `a x = b` over the rationals, `None` if singular.
pub fn solve_rational(a: &Matrix, b: &[i64]) -> Option<Vec<Ratio<i128>>> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter()
                .map(|&x| Ratio::from_integer(x as i128))
                .chain(std::iter::once(Ratio::from_integer(bi as i128)))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| m[i][col] != Ratio::from_integer(0))?;
        m.swap(piv, col);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != col && m[i][col] != Ratio::from_integer(0) {
                let f = m[i][col];
                for j in col..=n {
                    let t = m[col][j];
                    m[i][j] -= f * t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

/// Inverse of a unimodular matrix, `None` otherwise.
pub fn unimodular_inverse(a: &Matrix) -> Option<Matrix> {
    if !is_unimodular(a) {
        return None;
    }
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
        let x = solve_rational(a, &e)?;
        cols.push(
            x.into_iter()
                .map(|q| q.is_integer().then(|| q.to_integer() as i64))
                .collect::<Option<Vec<i64>>>()?,
        );
    }
    Some(transpose(&cols))
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}
