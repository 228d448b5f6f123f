//! Sparse block kernels `K(u, v)` over the vertices of a finite action.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::action::FiniteAction;
use crate::error::{Error, Result};
use crate::scalar::{FieldScalar, Scalar};

use super::block;

/// Stored blocks beyond which products and moments refuse to run.
pub const MAX_STORED_ENTRIES: usize = 50_000_000;

/// `K(u, v)` as `dim × dim` blocks, nonzero only for `u`, `v` in a common
/// orbit of the carrier action.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernel<T: Scalar> {
    carrier: Arc<FiniteAction>,
    dim: usize,
    /// `rows[u]`: `(v, K(u, v))` sorted by `v`, zero blocks omitted.
    rows: Vec<Vec<(u32, Vec<T>)>>,
}

impl<T: Scalar> BlockKernel<T> {
    pub fn zero(carrier: Arc<FiniteAction>, dim: usize) -> Self {
        let rows = vec![Vec::new(); carrier.n()];
        BlockKernel { carrier, dim, rows }
    }

    pub fn identity(carrier: Arc<FiniteAction>, dim: usize) -> Self {
        Self::scalar(carrier, dim, T::one())
    }

    /// `c·Id`.
    pub fn scalar(carrier: Arc<FiniteAction>, dim: usize, c: T) -> Self {
        let b = block::scaled_identity(dim, c);
        if block::is_zero(&b) {
            return Self::zero(carrier, dim);
        }
        let rows = (0..carrier.n() as u32).map(|v| vec![(v, b.clone())]).collect();
        BlockKernel { carrier, dim, rows }
    }

    /// Sums the given blocks per position. Fails if a block has the wrong
    /// size or joins vertices in different orbits.
    pub fn from_entries(
        carrier: Arc<FiniteAction>,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, Vec<T>)>,
    ) -> Result<Self> {
        let n = carrier.n();
        let orbit = carrier.orbit_ids();
        let mut rows: Vec<BTreeMap<u32, Vec<T>>> = vec![BTreeMap::new(); n];
        for (u, v, b) in entries {
            if u >= n || v >= n {
                return Err(Error::input(format!("kernel entry ({u}, {v}) outside 0..{n}")));
            }
            if b.len() != dim * dim {
                return Err(Error::input(format!("block of {} entries, expected {}", b.len(), dim * dim)));
            }
            if orbit[u] != orbit[v] {
                return Err(Error::input(format!("kernel entry ({u}, {v}) joins different orbits")));
            }
            match rows[u].get_mut(&(v as u32)) {
                Some(acc) => block::add_into(acc, &b),
                None => {
                    rows[u].insert(v as u32, b);
                }
            }
        }
        Ok(Self::from_row_maps(carrier, dim, rows))
    }

    fn from_row_maps(carrier: Arc<FiniteAction>, dim: usize, rows: Vec<BTreeMap<u32, Vec<T>>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, b)| !block::is_zero(b)).collect())
            .collect();
        BlockKernel { carrier, dim, rows }
    }

    pub fn carrier(&self) -> &Arc<FiniteAction> {
        &self.carrier
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&[T]> {
        let row = &self.rows[u];
        row.binary_search_by_key(&(v as u32), |(c, _)| *c)
            .ok()
            .map(|i| row[i].1.as_slice())
    }

    pub fn row(&self, u: usize) -> &[(u32, Vec<T>)] {
        &self.rows[u]
    }

    /// Nonzero blocks.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `w_K`: the most nonzero blocks in any row or column.
    pub fn width(&self) -> usize {
        let mut cols = vec![0usize; self.n()];
        for row in &self.rows {
            for (v, _) in row {
                cols[*v as usize] += 1;
            }
        }
        let r = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        r.max(cols.into_iter().max().unwrap_or(0))
    }

    /// `s_K`: the largest spectral norm of a block.
    pub fn sup_norm(&self) -> f64 {
        self.rows
            .par_iter()
            .flat_map_iter(|r| r.iter().map(|(_, b)| block::spectral_norm(b, self.dim)))
            .reduce(|| 0.0, f64::max)
    }

    /// The Schur-type bound `w_K·s_K` on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.width() as f64 * self.sup_norm()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.carrier, &other.carrier) && self.carrier != other.carrier {
            return Err(Error::input("kernels live on different actions"));
        }
        if self.dim != other.dim {
            return Err(Error::input(format!("block sizes {} and {} differ", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let rows = self
            .rows
            .par_iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut m: BTreeMap<u32, Vec<T>> = a.iter().cloned().collect();
                for (v, x) in b {
                    match m.get_mut(v) {
                        Some(acc) => block::add_into(acc, x),
                        None => {
                            m.insert(*v, x.clone());
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Self::from_row_maps(self.carrier.clone(), self.dim, rows))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, c: T) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(v, b)| (*v, b.iter().map(|x| c.clone() * x.clone()).collect()))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        Self::from_row_maps(self.carrier.clone(), self.dim, rows)
    }

    /// `(KL)(u, v) = Σ_z K(u, z) L(z, v)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let estimate: usize = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(z, _)| other.rows[*z as usize].len()).sum::<usize>())
            .sum();
        if estimate.saturating_mul(self.dim * self.dim) > MAX_STORED_ENTRIES {
            return Err(Error::Guard(format!(
                "product would hold up to {estimate} blocks of size {}",
                self.dim
            )));
        }
        let dim = self.dim;
        let rows = self
            .rows
            .par_iter()
            .map(|r| {
                let mut m: BTreeMap<u32, Vec<T>> = BTreeMap::new();
                for (z, a) in r {
                    for (v, b) in &other.rows[*z as usize] {
                        let acc = m.entry(*v).or_insert_with(|| block::zero(dim));
                        block::mul_add_into(acc, a, b, dim);
                    }
                }
                m
            })
            .collect();
        Ok(Self::from_row_maps(self.carrier.clone(), dim, rows))
    }

    /// `K*(u, v) = K(v, u)*`.
    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<BTreeMap<u32, Vec<T>>> = vec![BTreeMap::new(); self.n()];
        for (u, r) in self.rows.iter().enumerate() {
            for (v, b) in r {
                rows[*v as usize].insert(u as u32, block::adjoint(b, self.dim));
            }
        }
        Self::from_row_maps(self.carrier.clone(), self.dim, rows)
    }

    /// `Tr_*(K) = Σ_v Tr K(v, v) / (dim·n)`.
    pub fn normalized_trace(&self) -> T::Field {
        let total = (0..self.n())
            .filter_map(|v| self.get(v, v).map(|b| block::trace(b, self.dim)))
            .fold(T::zero(), |a, x| a + x);
        total.into_field() / T::Field::from_count(self.dim * self.n().max(1))
    }

    /// `Tr_*(K*K)`, computed as the normalized squared Frobenius norm.
    pub fn hs_norm_sq(&self) -> T::Field {
        let total = self
            .rows
            .iter()
            .flatten()
            .flat_map(|(_, b)| b.iter())
            .fold(T::zero(), |a, x| a + x.conj() * x.clone());
        total.into_field() / T::Field::from_count(self.dim * self.n().max(1))
    }

    /// `‖K‖ = sqrt(Tr_*(K*K))`.
    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().real_part().max(0.0).sqrt()
    }

    /// `[Tr_*(K), …, Tr_*(K^{i_max})]`. On hitting the size guard, returns a
    /// guard error naming the last power computed.
    pub fn moments(&self, i_max: usize) -> Result<Vec<T::Field>> {
        let mut out = Vec::with_capacity(i_max);
        let mut power = self.clone();
        for i in 1..=i_max {
            if i > 1 {
                power = power.mul(self).map_err(|e| match e {
                    Error::Guard(msg) => Error::Guard(format!("moments stopped after power {}: {msg}", i - 1)),
                    other => other,
                })?;
            }
            out.push(power.normalized_trace());
        }
        Ok(out)
    }

    /// Dense `(n·dim) × (n·dim)` complex matrix.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(self.n() * d, self.n() * d);
        for (u, r) in self.rows.iter().enumerate() {
            for (v, b) in r {
                for i in 0..d {
                    for j in 0..d {
                        m[(u * d + i, *v as usize * d + j)] = b[i * d + j].to_c64();
                    }
                }
            }
        }
        m
    }

    fn apply_c64(&self, rows: &[Vec<(u32, Vec<Complex64>)>], x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        rows.par_iter()
            .flat_map_iter(|r| {
                let mut y = vec![Complex64::new(0.0, 0.0); d];
                for (v, b) in r {
                    let xv = &x[*v as usize * d..(*v as usize + 1) * d];
                    for i in 0..d {
                        for j in 0..d {
                            y[i] += b[i * d + j] * xv[j];
                        }
                    }
                }
                y
            })
            .collect()
    }

    /// Spectral norm by power iteration on `K*K`, stopping once the estimate
    /// changes by less than `tol` relative. The estimate never exceeds the
    /// true norm.
    pub fn op_norm(&self, tol: f64, max_iter: usize) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::input("tolerance must be positive"));
        }
        let len = self.n() * self.dim;
        if len == 0 || self.nnz() == 0 {
            return Ok(0.0);
        }
        let fwd: Vec<Vec<(u32, Vec<Complex64>)>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(v, b)| (*v, block::to_c64(b))).collect())
            .collect();
        let bwd: Vec<Vec<(u32, Vec<Complex64>)>> = self
            .adjoint()
            .rows
            .iter()
            .map(|r| r.iter().map(|(v, b)| (*v, block::to_c64(b))).collect())
            .collect();
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // all-ones start, slightly tilted so it is not orthogonal to the top
        // singular vector by symmetry
        let mut x: Vec<Complex64> = (0..len)
            .map(|k| Complex64::new(1.0 + 1e-3 * ((k as f64) * 0.618_033_988_7).fract(), 0.0))
            .collect();
        let nx = norm(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let mut estimate = 0.0f64;
        for _ in 0..max_iter {
            let y = self.apply_c64(&fwd, &x);
            let sigma = norm(&y);
            if sigma == 0.0 {
                return Ok(estimate);
            }
            let z = self.apply_c64(&bwd, &y);
            let nz = norm(&z);
            let done = (sigma - estimate).abs() <= tol * sigma;
            estimate = estimate.max(sigma);
            if done || nz == 0.0 {
                return Ok(estimate);
            }
            x = z.into_iter().map(|c| c / nz).collect();
        }
        Err(Error::Numerical {
            msg: format!("power iteration did not settle in {max_iter} steps"),
            partial: estimate,
        })
    }
}
