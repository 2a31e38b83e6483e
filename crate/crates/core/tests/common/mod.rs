//! Test-only oracles, independent of the library's nalgebra-backed solvers.
#![allow(dead_code)]

use qutrit_dsd::linalg::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cyclic Jacobi on a real symmetric matrix (row-major, n x n).
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Ascending eigenvalues of a Hermitian matrix via the real embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is the original one doubled.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let big = 2 * n;
    let mut a = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i * big + j] = z.re;
            a[(i + n) * big + (j + n)] = z.re;
            a[i * big + (j + n)] = -z.im;
            a[(i + n) * big + j] = z.im;
        }
    }
    jacobi_symmetric(a, big).into_iter().step_by(2).collect()
}

/// Sum of singular values, as `sum sqrt(eig(M^dagger M))`.
pub fn oracle_trace_norm(m: &ComplexMatrix) -> f64 {
    let gram = &m.adjoint() * m;
    oracle_eigenvalues(&gram).iter().map(|&l| l.max(0.0).sqrt()).sum()
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-ish unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Naive triple-loop product.
pub fn oracle_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum()
    })
}
