//! Matrices of polynomials in t and linear solvers over scalar fields and F_q.

use crate::error::{Error, Result};
use crate::scalar::{Fq, Scalar, ThetaPoly};
use crate::tate::TPoly;

/// Square or rectangular matrix of polynomials in t.
pub type PolyMatrix<S> = Vec<Vec<TPoly<S>>>;

pub fn identity<S: Scalar>(fq: &Fq, n: usize) -> PolyMatrix<S> {
    (0..n).map(|i| (0..n).map(|j| if i == j { TPoly::one(fq) } else { TPoly::zero(fq) }).collect()).collect()
}

pub fn transpose<S: Scalar>(m: &PolyMatrix<S>) -> PolyMatrix<S> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<S: Scalar>(a: &PolyMatrix<S>, b: &PolyMatrix<S>) -> PolyMatrix<S> {
    let fq = a[0][0].field().clone();
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = TPoly::zero(&fq);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_empty() && !b[k][j].is_empty() {
                            acc = acc.add(&x.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_twist<S: Scalar>(m: &PolyMatrix<S>, i: u32) -> PolyMatrix<S> {
    m.iter().map(|row| row.iter().map(|x| x.twist(i)).collect()).collect()
}

pub fn mat_map<S: Scalar, T: Scalar>(m: &PolyMatrix<S>, f: impl Fn(&S) -> T + Copy) -> PolyMatrix<T> {
    m.iter().map(|row| row.iter().map(|x| x.map(f)).collect()).collect()
}

fn minor<S: Scalar>(m: &PolyMatrix<S>, skip_r: usize, skip_c: usize) -> PolyMatrix<S> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != skip_c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Determinant by cofactor expansion (intended for small ranks).
pub fn det<S: Scalar>(m: &PolyMatrix<S>) -> TPoly<S> {
    let n = m.len();
    let fq = m[0][0].field().clone();
    match n {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = TPoly::zero(&fq);
            for j in 0..n {
                if m[0][j].is_empty() {
                    continue;
                }
                let term = m[0][j].mul(&det(&minor(m, 0, j)));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Adjugate: adj(m) m = m adj(m) = det(m) I.
pub fn adjugate<S: Scalar>(m: &PolyMatrix<S>) -> PolyMatrix<S> {
    let n = m.len();
    let fq = m[0][0].field().clone();
    if n == 1 {
        return vec![vec![TPoly::one(&fq)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = det(&minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        c.neg()
                    }
                })
                .collect()
        })
        .collect()
}

/// Matrix over a field (scalars only, no t).
pub type ScalarMatrix<F> = Vec<Vec<F>>;

pub fn smat_identity<F: Scalar>(fq: &Fq, n: usize) -> ScalarMatrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one(fq) } else { F::zero(fq) }).collect()).collect()
}
pub fn smat_mul<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> ScalarMatrix<F> {
    let fq = a[0][0].fq().clone();
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = F::zero(&fq);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&x.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
pub fn smat_add<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> ScalarMatrix<F> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}
pub fn smat_sub<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> ScalarMatrix<F> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}
pub fn smat_twist<F: Scalar>(a: &ScalarMatrix<F>, i: u32) -> ScalarMatrix<F> {
    a.iter().map(|r| r.iter().map(|x| x.twist(i)).collect()).collect()
}
pub fn smat_vec<F: Scalar>(a: &ScalarMatrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            let mut acc = F::zero(v[0].fq());
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
        .collect()
}
pub fn smat_is_zero<F: Scalar>(a: &ScalarMatrix<F>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Determinant by elimination over a field.
pub fn smat_det<F: Scalar>(a: &ScalarMatrix<F>) -> Result<F> {
    let n = a.len();
    let fq = a[0][0].fq().clone();
    let mut m = a.clone();
    let mut d = F::one(&fq);
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].valuation().unwrap_or(i64::MAX));
        let Some(p) = piv else { return Ok(F::zero(&fq)) };
        if p != col {
            m.swap(p, col);
            d = d.neg();
        }
        let pv = m[col][col].clone();
        d = d.mul(&pv);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].try_div(&pv)?;
            for c in col..n {
                let v = m[col][c].mul(&f);
                m[r][c] = m[r][c].sub(&v);
            }
        }
    }
    Ok(d)
}

/// Solve a x = b over a field. Pivots are chosen of largest norm. Returns
/// `None` when the system is inconsistent; free variables are set to zero.
pub fn solve<F: Scalar>(a: &ScalarMatrix<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    let rows = a.len();
    if rows == 0 {
        return Ok(Some(vec![]));
    }
    let cols = a[0].len();
    let fq = b[0].fq().clone();
    let mut m: Vec<Vec<F>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].valuation().unwrap_or(i64::MAX));
        let Some(p) = piv else { continue };
        m.swap(p, r);
        let inv = F::one(&fq).try_div(&m[r][c])?;
        for k in c..=cols {
            m[r][k] = m[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in c..=cols {
                if m[r][k].is_zero() {
                    continue;
                }
                let v = m[r][k].mul(&f);
                m[i][k] = m[i][k].sub(&v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![F::zero(&fq); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Ok(Some(x))
}

/// Solve a x = b over F_q; rows are dense coefficient vectors.
pub fn solve_fq(fq: &Fq, a: &[Vec<u8>], b: &[u8]) -> Option<Vec<u8>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u8>> = a.iter().zip(b).map(|(r, &x)| r.iter().copied().chain(std::iter::once(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(p, r);
        let inv = fq.inv(m[r][c]).ok()?;
        let row_r: Vec<u8> = m[r].iter().map(|&x| fq.mul(x, inv)).collect();
        m[r] = row_r;
        for i in 0..rows {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let f = fq.neg(m[i][c]);
            let mr = fq.mul_row(f);
            let (src, dst) = if i < r {
                let (lo, hi) = m.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = m.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for k in c..=cols {
                if src[k] != 0 {
                    dst[k] = fq.add(dst[k], mr[src[k] as usize]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![0u8; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}

/// Write p = c (t - θ)^d with c free of t, or fail.
pub fn split_theta_power(p: &TPoly<ThetaPoly>, d: usize) -> Result<ThetaPoly> {
    let fq = p.field();
    let th = ThetaPoly::theta(fq);
    let mut cur = p.clone();
    for _ in 0..d {
        let (q, r) = cur.div_linear(&th);
        if !r.is_zero() {
            return Err(Error::InvalidMotive(format!("determinant is not divisible by (t - theta)^{d}")));
        }
        cur = q;
    }
    if cur.degree() != Some(0) {
        return Err(Error::InvalidMotive("determinant is not a unit times a power of (t - theta)".into()));
    }
    Ok(cur.coeff(0))
}
