//! Spectrum of `U_M(γ)`, the action `p(y) ↦ (cy+d)^M p((ay+b)/(cy+d))` of a
//! unimodular 2×2 matrix on polynomials of degree at most `M`.
//!
//! With eigenvalues `μ, μ^{-1}` of `γ` the spectrum is `{μ^k : |k| ≤ M, k ≡ M (mod 2)}`
//! and `r_k(y) = (α₀y+β₀)^{(M+k)/2}(α₁y+β₁)^{(M-k)/2}` are eigenpolynomials, where
//! `(α_i, β_i)` are left eigenvectors of `γ`.

use crate::error::{Error, Result};
use crate::numerics::linalg::eigenvalues;
use crate::numerics::{Complex, Real};

/// Agreement required between predicted and computed eigenvalues.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Agreement required in `U_M r_k = μ^k r_k`, relative to the largest coefficient.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// One eigenpolynomial in the monomial basis `1, y, …, y^M`.
#[derive(Clone, Debug)]
pub struct EigenPoly<T> {
    pub k: i64,
    pub eigenvalue: Complex<T>,
    pub coeffs: Vec<Complex<T>>,
    /// `max |U r - μ^k r| / max |r|`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct USpectrum<T> {
    pub m: usize,
    /// `U_M` row by row; column `j` holds the coefficients of `(ay+b)^j (cy+d)^{M-j}`.
    pub matrix: Vec<Vec<T>>,
    /// The eigenvalue of `γ` with modulus at least one.
    pub mu: Complex<T>,
    /// Computed eigenvalues, paired index by index with `predicted`.
    pub computed: Vec<Complex<T>>,
    pub predicted: Vec<Complex<T>>,
    pub eigenpolys: Vec<EigenPoly<T>>,
    /// Largest relative distance between paired eigenvalues.
    pub max_mismatch: f64,
    pub max_residual: f64,
}

impl<T> USpectrum<T> {
    pub fn matches(&self) -> bool {
        self.max_mismatch <= SPECTRUM_TOL && self.max_residual <= RESIDUAL_TOL
    }
}

fn poly_mul<T: Real>(p: &[Complex<T>], q: &[Complex<T>], prec: u32) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(prec); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    out
}

fn poly_pow<T: Real>(lin: &[Complex<T>], e: usize, prec: u32) -> Vec<Complex<T>> {
    let mut acc = vec![Complex::one(prec)];
    for _ in 0..e {
        acc = poly_mul(&acc, lin, prec);
    }
    acc
}

fn c_of<T: Real>(x: &T) -> Complex<T> {
    Complex::from_real(x.clone())
}

/// The matrix of `U_M(γ)` in the monomial basis.
pub fn u_matrix<T: Real>(g: &[[T; 2]; 2], m: usize, prec: u32) -> Vec<Vec<T>> {
    let [[a, b], [c, d]] = g;
    let num = [c_of(b), c_of(a)];
    let den = [c_of(d), c_of(c)];
    let mut rows = vec![vec![T::zero(prec); m + 1]; m + 1];
    for j in 0..=m {
        let col = poly_mul(&poly_pow(&num, j, prec), &poly_pow(&den, m - j, prec), prec);
        for (i, v) in col.into_iter().enumerate() {
            rows[i][j] = v.re;
        }
    }
    rows
}

fn left_eigvec<T: Real>(g: &[[T; 2]; 2], nu: &Complex<T>) -> (Complex<T>, Complex<T>) {
    let [[a, b], [c, d]] = g;
    let v1 = (c_of(c), nu.clone() - c_of(a));
    let v2 = (nu.clone() - c_of(d), c_of(b));
    let n1 = v1.0.abs().max_of(&v1.1.abs());
    let n2 = v2.0.abs().max_of(&v2.1.abs());
    if n1 >= n2 {
        v1
    } else {
        v2
    }
}

fn max_abs<T: Real>(v: &[Complex<T>]) -> T {
    let prec = v[0].prec();
    v.iter().fold(T::zero(prec), |m, x| m.max_of(&x.abs()))
}

/// Builds `U_M(γ)` for real unimodular `γ` and checks its spectrum and eigenpolynomials.
pub fn u_spectrum<T: Real>(g: &[[T; 2]; 2], m: usize, prec: u32) -> Result<USpectrum<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let g: [[T; 2]; 2] = [
        [g[0][0].with_prec(prec), g[0][1].with_prec(prec)],
        [g[1][0].with_prec(prec), g[1][1].with_prec(prec)],
    ];
    let [[a, b], [c, d]] = &g;
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    let scale = a
        .abs()
        .max_of(&b.abs())
        .max_of(&c.abs())
        .max_of(&d.abs())
        .max_of(&T::one(prec));
    let tiny = scale.sqr() * 1e-20;
    if (det.clone() - 1.0).abs() > tiny {
        return Err(Error::InvalidArgument(format!(
            "γ must have determinant 1, got {det}"
        )));
    }
    let tr = a.clone() + d.clone();
    let disc = tr.sqr() - 4.0;
    if disc.abs() < tiny {
        return Err(Error::DegenerateEigenvalues(format!(
            "trace {tr} gives μ = ±1; the spectrum lemma needs μ ≠ μ^-1"
        )));
    }
    let root = c_of(&disc).sqrt();
    let half = T::from_f64(0.5, prec);
    let mu_plus = (c_of(&tr) + root.clone()).scale(&half);
    let mu_minus = (c_of(&tr) - root).scale(&half);
    let (mu, mu_inv) = if mu_plus.abs() >= mu_minus.abs() {
        (mu_plus, mu_minus)
    } else {
        (mu_minus, mu_plus)
    };

    let matrix = u_matrix(&g, m, prec);
    let mut computed = eigenvalues(&matrix)?;

    let ks: Vec<i64> = (0..=m as i64).map(|j| 2 * j - m as i64).collect();
    let predicted: Vec<Complex<T>> = ks
        .iter()
        .map(|&k| {
            if k >= 0 {
                mu.powi(k as i32)
            } else {
                mu_inv.powi((-k) as i32)
            }
        })
        .collect();

    // Greedy nearest pairing; both lists are small.
    let mut paired = Vec::with_capacity(predicted.len());
    let mut max_mismatch = 0.0f64;
    for p in &predicted {
        let (idx, dist) = computed
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c.clone() - p.clone()).abs().to_f64()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty spectrum");
        let rel = dist / p.abs().to_f64().max(1e-300);
        max_mismatch = max_mismatch.max(rel);
        paired.push(computed.swap_remove(idx));
    }

    let (a0, b0) = left_eigvec(&g, &mu);
    let (a1, b1) = left_eigvec(&g, &mu_inv);
    let mut eigenpolys = Vec::with_capacity(ks.len());
    let mut max_residual = 0.0f64;
    for (j, (&k, ev)) in ks.iter().zip(&predicted).enumerate() {
        let coeffs = poly_mul(
            &poly_pow(&[b0.clone(), a0.clone()], j, prec),
            &poly_pow(&[b1.clone(), a1.clone()], m - j, prec),
            prec,
        );
        let mut worst = T::zero(prec);
        for (i, row) in matrix.iter().enumerate() {
            let mut ur = Complex::zero(prec);
            for (u, r) in row.iter().zip(&coeffs) {
                ur = ur + r.scale(u);
            }
            worst = worst.max_of(&(ur - ev.clone() * coeffs[i].clone()).abs());
        }
        let residual = (worst / max_abs(&coeffs)).to_f64();
        max_residual = max_residual.max(residual);
        eigenpolys.push(EigenPoly {
            k,
            eigenvalue: ev.clone(),
            coeffs,
            residual,
        });
    }

    Ok(USpectrum {
        m,
        matrix,
        mu,
        computed: paired,
        predicted,
        eigenpolys,
        max_mismatch,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    fn mat(v: [[f64; 2]; 2], prec: u32) -> [[BigReal; 2]; 2] {
        v.map(|r| r.map(|x| BigReal::from_f64(x, prec)))
    }

    #[test]
    fn fibonacci_matrix_m1() {
        let s = u_spectrum(&mat([[0.0, 1.0], [-1.0, 3.0]], 128), 1, 128).unwrap();
        assert!(s.matches());
        let mut ev: Vec<f64> = s.computed.iter().map(|c| c.re.to_f64()).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 0.381966011250105).abs() < 1e-14);
        assert!((ev[1] - 2.618033988749895).abs() < 1e-14);
    }

    #[test]
    fn diagonal_m2() {
        let s = u_spectrum(&mat([[2.0, 0.0], [0.0, 0.5]], 128), 2, 128).unwrap();
        assert!(s.matches());
        let mut ev: Vec<f64> = s.computed.iter().map(|c| c.re.to_f64()).collect();
        ev.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip([0.25, 1.0, 4.0]) {
            assert!((x - y).abs() < 1e-20);
        }
    }

    #[test]
    fn m1_is_transposed_reversal() {
        let u = u_matrix(&[[2.0, 3.0], [5.0, 7.0]], 1, 53);
        assert_eq!(u, vec![vec![7.0, 3.0], vec![5.0, 2.0]]);
    }

    #[test]
    fn elliptic_element() {
        // trace 1: μ = e^{iπ/3}
        let s = u_spectrum(&mat([[1.0, -1.0], [1.0, 0.0]], 128), 3, 128).unwrap();
        assert!(s.matches(), "{} {}", s.max_mismatch, s.max_residual);
    }

    #[test]
    fn degenerate_and_bad_input() {
        assert!(matches!(
            u_spectrum(&mat([[1.0, 1.0], [0.0, 1.0]], 128), 2, 128),
            Err(Error::DegenerateEigenvalues(_))
        ));
        assert!(u_spectrum(&mat([[2.0, 0.0], [0.0, 1.0]], 128), 2, 128).is_err());
        assert!(u_spectrum(&mat([[2.0, 0.0], [0.0, 0.5]], 128), 0, 128).is_err());
    }
}
