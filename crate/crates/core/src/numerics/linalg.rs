//! Dense eigenvalues (balancing, Hessenberg reduction, Francis QR) and a
//! least-squares slope, generic over the scalar.

use super::complex::Complex;
use super::real::Real;
use crate::error::{Error, Result};

fn sign<T: Real>(a: &T, b: &T) -> T {
    if b.is_sign_negative() {
        -a.abs()
    } else {
        a.abs()
    }
}

// All routines below use 1-based square arrays of size (n+1)².

fn balance<T: Real>(a: &mut [Vec<T>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let prec = a[i][i].prec();
            let mut r = T::zero(prec);
            let mut c = T::zero(prec);
            for j in 1..=n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if !c.is_zero() && !r.is_zero() {
                let mut g = r.clone() / RADIX;
                let mut f = T::one(prec);
                let s = c.clone() + r.clone();
                while c < g {
                    f = f * RADIX;
                    c = c * sqrdx;
                }
                g = r.clone() * RADIX;
                while c > g {
                    f = f / RADIX;
                    c = c / sqrdx;
                }
                if (c + r) / f.clone() < s * 0.95 {
                    done = false;
                    let g = f.recip();
                    for j in 1..=n {
                        a[i][j] = a[i][j].clone() * g.clone();
                    }
                    for j in 1..=n {
                        a[j][i] = a[j][i].clone() * f.clone();
                    }
                }
            }
        }
    }
}

fn reduce_to_hessenberg<T: Real>(a: &mut [Vec<T>], n: usize) {
    for m in 2..n {
        let prec = a[m][m].prec();
        let mut x = T::zero(prec);
        let mut i = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1].clone();
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let tmp = a[i][j].clone();
                a[i][j] = a[m][j].clone();
                a[m][j] = tmp;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(i, m);
            }
        }
        if !x.is_zero() {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1].clone();
                if !y.is_zero() {
                    y = y / x.clone();
                    a[i][m - 1] = y.clone();
                    for j in m..=n {
                        let t = a[i][j].clone() - y.clone() * a[m][j].clone();
                        a[i][j] = t;
                    }
                    for j in 1..=n {
                        let t = a[j][m].clone() + y.clone() * a[j][i].clone();
                        a[j][m] = t;
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i > j + 1 {
                a[i][j] = T::zero(a[i][j].prec());
            }
        }
    }
}

fn hessenberg_qr<T: Real>(a: &mut [Vec<T>], n: usize, max_its: usize) -> Result<Vec<Complex<T>>> {
    let prec = a[1][1].prec();
    let zero = || T::zero(prec);
    let mut wr = vec![zero(); n + 1];
    let mut wi = vec![zero(); n + 1];

    let mut anorm = zero();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }

    let mut nn = n;
    let mut t = zero();
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s.is_zero() {
                    s = anorm.clone();
                }
                if a[l][l - 1].abs() + s.clone() == s {
                    a[l][l - 1] = zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn].clone();
            if l == nn {
                wr[nn] = x + t.clone();
                wi[nn] = zero();
                nn -= 1;
            } else {
                let mut y = a[nn - 1][nn - 1].clone();
                let mut w = a[nn][nn - 1].clone() * a[nn - 1][nn].clone();
                if l == nn - 1 {
                    let p = (y.clone() - x.clone()) * 0.5;
                    let q = p.sqr() + w.clone();
                    let mut z = q.abs().sqrt();
                    x = x + t.clone();
                    if !q.is_sign_negative() {
                        z = p.clone() + sign(&z, &p);
                        wr[nn - 1] = x.clone() + z.clone();
                        wr[nn] = x.clone() + z.clone();
                        if !z.is_zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = zero();
                        wi[nn] = zero();
                    } else {
                        wr[nn - 1] = x.clone() + p.clone();
                        wr[nn] = x + p;
                        wi[nn - 1] = -z.clone();
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == max_its {
                        return Err(Error::NoConvergence {
                            what: "Hessenberg QR".into(),
                            best: String::new(),
                            est_error: f64::NAN,
                        });
                    }
                    if its % 10 == 0 && its > 0 {
                        t = t + x.clone();
                        for i in 1..=nn {
                            a[i][i] = a[i][i].clone() - x.clone();
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = s.clone() * 0.75;
                        y = x.clone();
                        w = s.sqr() * -0.4375;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let (mut p, mut q, mut r);
                    loop {
                        let z = a[m][m].clone();
                        r = x.clone() - z.clone();
                        let s = y.clone() - z.clone();
                        p = (r.clone() * s.clone() - w.clone()) / a[m + 1][m].clone()
                            + a[m][m + 1].clone();
                        q = a[m + 1][m + 1].clone() - z.clone() - r.clone() - s;
                        r = a[m + 2][m + 1].clone();
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s.clone();
                        q = q / s.clone();
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v.clone() == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = zero();
                        if i != m + 2 {
                            a[i][i - 3] = zero();
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1].clone();
                            q = a[k + 1][k - 1].clone();
                            r = zero();
                            if k != nn - 1 {
                                r = a[k + 2][k - 1].clone();
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if !x.is_zero() {
                                p = p / x.clone();
                                q = q / x.clone();
                                r = r / x.clone();
                            }
                        }
                        let s = sign(&(p.sqr() + q.sqr() + r.sqr()).sqrt(), &p);
                        if !s.is_zero() {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1].clone();
                                }
                            } else {
                                a[k][k - 1] = -(s.clone() * x.clone());
                            }
                            p = p + s.clone();
                            x = p.clone() / s.clone();
                            y = q.clone() / s.clone();
                            let z = r.clone() / s.clone();
                            q = q / p.clone();
                            r = r / p.clone();
                            for j in k..=nn {
                                p = a[k][j].clone() + q.clone() * a[k + 1][j].clone();
                                if k != nn - 1 {
                                    p = p + r.clone() * a[k + 2][j].clone();
                                    a[k + 2][j] = a[k + 2][j].clone() - p.clone() * z.clone();
                                }
                                a[k + 1][j] = a[k + 1][j].clone() - p.clone() * y.clone();
                                a[k][j] = a[k][j].clone() - p.clone() * x.clone();
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x.clone() * a[i][k].clone() + y.clone() * a[i][k + 1].clone();
                                if k != nn - 1 {
                                    p = p + z.clone() * a[i][k + 2].clone();
                                    a[i][k + 2] = a[i][k + 2].clone() - p.clone() * r.clone();
                                }
                                a[i][k + 1] = a[i][k + 1].clone() - p.clone() * q.clone();
                                a[i][k] = a[i][k].clone() - p.clone();
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n)
        .map(|i| Complex::new(wr[i].clone(), wi[i].clone()))
        .collect())
}

/// All eigenvalues of a square matrix given row by row.
pub fn eigenvalues<T: Real>(rows: &[Vec<T>]) -> Result<Vec<Complex<T>>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(
            "eigenvalues need a non-empty square matrix".into(),
        ));
    }
    let prec = rows[0][0].prec();
    if n == 1 {
        return Ok(vec![Complex::from_real(rows[0][0].clone())]);
    }
    let mut a = vec![vec![T::zero(prec); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = rows[i][j].clone();
        }
    }
    balance(&mut a, n);
    reduce_to_hessenberg(&mut a, n);
    hessenberg_qr(&mut a, n, 30 * n.max(4))
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "slope fit needs at least two paired points".into(),
        ));
    }
    let prec = xs[0].prec();
    let n = xs.len() as f64;
    let mx = xs.iter().fold(T::zero(prec), |a, x| a + x.clone()) / n;
    let my = ys.iter().fold(T::zero(prec), |a, y| a + y.clone()) / n;
    let mut sxy = T::zero(prec);
    let mut sxx = T::zero(prec);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x.clone() - mx.clone();
        sxy = sxy + dx.clone() * (y.clone() - my.clone());
        sxx = sxx + dx.sqr();
    }
    Ok(sxy / sxx)
}
