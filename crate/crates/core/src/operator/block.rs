//! Small dense `dim × dim` blocks stored row-major.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::Scalar;

pub(crate) fn zero<T: Scalar>(dim: usize) -> Vec<T> {
    vec![T::zero(); dim * dim]
}

pub(crate) fn identity<T: Scalar>(dim: usize) -> Vec<T> {
    scaled_identity(dim, T::one())
}

pub(crate) fn scaled_identity<T: Scalar>(dim: usize, c: T) -> Vec<T> {
    let mut b = zero(dim);
    for i in 0..dim {
        b[i * dim + i] = c.clone();
    }
    b
}

pub(crate) fn is_zero<T: Scalar>(b: &[T]) -> bool {
    b.iter().all(|x| x.is_zero())
}

pub(crate) fn add_into<T: Scalar>(acc: &mut [T], b: &[T]) {
    for (a, x) in acc.iter_mut().zip(b) {
        *a = a.clone() + x.clone();
    }
}

/// `acc += a·b`.
pub(crate) fn mul_add_into<T: Scalar>(acc: &mut [T], a: &[T], b: &[T], dim: usize) {
    for i in 0..dim {
        for k in 0..dim {
            let aik = &a[i * dim + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..dim {
                let v = aik.clone() * b[k * dim + j].clone();
                acc[i * dim + j] = acc[i * dim + j].clone() + v;
            }
        }
    }
}

pub(crate) fn mul<T: Scalar>(a: &[T], b: &[T], dim: usize) -> Vec<T> {
    let mut acc = zero(dim);
    mul_add_into(&mut acc, a, b, dim);
    acc
}

/// Conjugate transpose.
pub(crate) fn adjoint<T: Scalar>(b: &[T], dim: usize) -> Vec<T> {
    let mut out = zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = b[i * dim + j].conj();
        }
    }
    out
}

pub(crate) fn trace<T: Scalar>(b: &[T], dim: usize) -> T {
    (0..dim).fold(T::zero(), |acc, i| acc + b[i * dim + i].clone())
}

pub(crate) fn to_c64<T: Scalar>(b: &[T]) -> Vec<Complex64> {
    b.iter().map(Scalar::to_c64).collect()
}

/// Spectral norm (largest singular value).
pub(crate) fn spectral_norm<T: Scalar>(b: &[T], dim: usize) -> f64 {
    if dim == 1 {
        return b[0].modulus();
    }
    let m = DMatrix::from_row_slice(dim, dim, &to_c64(b));
    m.singular_values().max()
}
