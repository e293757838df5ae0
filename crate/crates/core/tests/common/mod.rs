#![allow(dead_code)]

use krylov_qc_core::C64;
use ndarray::{Array1, Array2};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut StdRng, n: usize) -> Array1<C64> {
    Array1::from_shape_fn(n, |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_real_vector(rng: &mut StdRng, n: usize) -> Array1<C64> {
    Array1::from_shape_fn(n, |_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
}

/// Unitary from modified Gram-Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut StdRng, n: usize) -> Array2<C64> {
    let mut cols: Vec<Array1<C64>> = Vec::new();
    while cols.len() < n {
        let mut v = random_vector(rng, n);
        for _ in 0..2 {
            for c in &cols {
                let h: C64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v = &v - &c.mapv(|z| z * h);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.mapv(|z| z / norm));
    }
    Array2::from_shape_fn((n, n), |(i, j)| cols[j][i])
}

/// Real orthogonal matrix (random rotation).
pub fn random_orthogonal(rng: &mut StdRng, n: usize) -> Array2<C64> {
    let mut cols: Vec<Array1<C64>> = Vec::new();
    while cols.len() < n {
        let mut v = random_real_vector(rng, n);
        for _ in 0..2 {
            for c in &cols {
                let h: C64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v = &v - &c.mapv(|z| z * h);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.mapv(|z| z / norm));
    }
    Array2::from_shape_fn((n, n), |(i, j)| cols[j][i])
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
