//! Spectra of gram kernels `AA*`, Fuglede–Kadison determinants, and exact
//! integer certificates that `det(AA*) ≥ 1` at finite level.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

use crate::action::FiniteAction;
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, integer_rank, rank_mod_p, RANK_PRIME};
use crate::operator::{BlockKernel, FiniteTypeOperatorSpec};
use crate::scalar::{bigint_ln, rational_to_f64, FieldScalar, Rational, Scalar};

/// Largest `n·d_block` handled by the dense eigensolver and the exact
/// certificate.
pub const DENSE_LIMIT: usize = 2000;

/// `AA*`, checked to be Hermitian.
pub fn gram<T: Scalar>(a: &BlockKernel<T>) -> Result<BlockKernel<T>> {
    let g = a.mul(&a.adjoint())?;
    let tol = 1e-12 * g.sup_norm().max(1.0);
    for u in 0..g.n() {
        for (v, b) in g.row(u) {
            let t = g.get(*v as usize, u).ok_or_else(|| Error::Numerical {
                msg: "gram kernel is not Hermitian".into(),
                partial: 0.0,
            })?;
            let d = g.dim();
            for i in 0..d {
                for j in 0..d {
                    if !b[i * d + j].near(&t[j * d + i].conj(), tol) {
                        return Err(Error::Numerical {
                            msg: "gram kernel is not Hermitian".into(),
                            partial: 0.0,
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Eigenvalues of a positive kernel and the quantities derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub n: usize,
    pub d_block: usize,
    /// Ascending.
    pub eigs: Vec<f64>,
    pub zero_tol: f64,
    /// Eigenvalues counted as nonzero.
    pub rank: usize,
    /// `(1/(d·n)) Σ_{λ nonzero} ln λ`.
    pub log_det: f64,
    pub det: f64,
    /// Product of the nonzero eigenvalues, exactly, for integer kernels.
    pub exact_product: Option<BigInt>,
}

impl SpectralReport {
    /// `F(λ) = #{eigenvalues ≤ λ} / (d·n)`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        let count = self.eigs.partition_point(|&e| e <= lambda);
        count as f64 / self.eigs.len().max(1) as f64
    }

    /// `∫ λ dF(λ)`, equal to the normalized trace.
    pub fn first_moment(&self) -> f64 {
        self.eigs.iter().sum::<f64>() / self.eigs.len().max(1) as f64
    }

    pub fn max_eig(&self) -> f64 {
        self.eigs.last().copied().unwrap_or(0.0)
    }

    pub fn default_zero_tol(&self) -> f64 {
        1e-8 * self.max_eig().max(1.0)
    }
}

/// All eigenvalues of a Hermitian positive kernel. `tol` is the
/// eigensolver's convergence tolerance.
pub fn spectrum<T: Scalar>(g: &BlockKernel<T>, tol: f64) -> Result<SpectralReport> {
    let size = g.n() * g.dim();
    if size > DENSE_LIMIT {
        return Err(Error::Guard(format!(
            "dense spectrum limited to {DENSE_LIMIT} rows, kernel has {size}"
        )));
    }
    let dense = g.to_dense();
    let mut eigs: Vec<f64> = if dense.iter().all(|z| z.im == 0.0) {
        let real = dense.map(|z| z.re);
        SymmetricEigen::try_new(real, tol, 0)
            .ok_or_else(|| Error::Numerical {
                msg: "eigensolver did not converge".into(),
                partial: 0.0,
            })?
            .eigenvalues
            .iter()
            .copied()
            .collect()
    } else {
        SymmetricEigen::try_new(dense, tol, 0)
            .ok_or_else(|| Error::Numerical {
                msg: "eigensolver did not converge".into(),
                partial: 0.0,
            })?
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    eigs.sort_by(f64::total_cmp);
    let scale = eigs.last().map_or(0.0, |e| e.abs()).max(1.0);
    if let Some(&lo) = eigs.first() {
        if lo < -1e-9 * scale {
            return Err(Error::input(format!("kernel is not positive: eigenvalue {lo}")));
        }
    }
    let mut report = SpectralReport {
        n: g.n(),
        d_block: g.dim(),
        eigs,
        zero_tol: 0.0,
        rank: 0,
        log_det: 0.0,
        det: 1.0,
        exact_product: None,
    };
    report.zero_tol = report.default_zero_tol();
    Ok(report)
}

/// Fills in the determinant fields. Eigenvalues at most `zero_tol` (default
/// `10⁻⁸·max(1, λ_max)`) form the kernel, unless `exact_rank` is given, in
/// which case the smallest `len − rank` eigenvalues do.
pub fn fk_determinant(
    mut report: SpectralReport,
    zero_tol: Option<f64>,
    exact_rank: Option<usize>,
) -> Result<SpectralReport> {
    let tol = zero_tol.unwrap_or_else(|| report.default_zero_tol());
    if let Some(&lo) = report.eigs.first() {
        if lo < -tol {
            return Err(Error::input(format!("negative eigenvalue {lo} beyond tolerance")));
        }
    }
    let len = report.eigs.len();
    let rank = match exact_rank {
        Some(r) if r > len => return Err(Error::input("rank exceeds the matrix size")),
        Some(r) => r,
        None => report.eigs.iter().filter(|&&e| e > tol).count(),
    };
    let kept = &report.eigs[len - rank..];
    if kept.iter().any(|&e| e <= 0.0) {
        return Err(Error::Numerical {
            msg: "exact rank counts an eigenvalue the solver found nonpositive".into(),
            partial: 0.0,
        });
    }
    report.zero_tol = tol;
    report.rank = rank;
    report.log_det = kept.iter().map(|e| e.ln()).sum::<f64>() / len.max(1) as f64;
    report.det = report.log_det.exp();
    Ok(report)
}

/// Exact `(rank, product of nonzero eigenvalues)` of a symmetric integer
/// matrix. With `J` a maximal independent column set and `C = M[:, J]`,
/// `M = C·M_JJ⁻¹·Cᵀ`, so the product is `det(CᵀC) / det(M_JJ)`.
pub fn pseudo_determinant(m: &[Vec<BigInt>]) -> Result<(usize, BigInt)> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::input("matrix is not square"));
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::input("matrix is not symmetric"));
            }
        }
    }
    let (rank, cols) = integer_rank(m);
    if rank == 0 {
        return Ok((0, BigInt::one()));
    }
    let mjj: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect();
    let ctc: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|&a| {
            cols.iter()
                .map(|&b| (0..n).map(|k| &m[k][a] * &m[k][b]).sum())
                .collect()
        })
        .collect();
    let num = bareiss_det(&ctc);
    let den = bareiss_det(&mjj);
    if den.is_zero() || !(&num % &den).is_zero() {
        return Err(Error::Numerical {
            msg: "pseudo-determinant division is not exact".into(),
            partial: 0.0,
        });
    }
    Ok((rank, (num / den).abs()))
}

fn integer_matrix(k: &BlockKernel<i64>) -> Vec<Vec<BigInt>> {
    let d = k.dim();
    let size = k.n() * d;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for u in 0..k.n() {
        for (v, b) in k.row(u) {
            for i in 0..d {
                for j in 0..d {
                    m[u * d + i][*v as usize * d + j] = BigInt::from(b[i * d + j]);
                }
            }
        }
    }
    m
}

/// Exact rank and product of the nonzero eigenvalues of `AA*` for an
/// integer kernel `A`. The product is a positive integer, so the finite
/// determinant `det(AA*)` is at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerCertificate {
    pub rank: usize,
    pub product: BigInt,
}

pub fn exact_integer_certificate(a: &BlockKernel<i64>) -> Result<IntegerCertificate> {
    let size = a.n() * a.dim();
    if size > DENSE_LIMIT {
        return Err(Error::Guard(format!(
            "exact certificate limited to {DENSE_LIMIT} rows, kernel has {size}"
        )));
    }
    let g = a.mul(&a.adjoint())?;
    let (rank, product) = pseudo_determinant(&integer_matrix(&g))?;
    Ok(IntegerCertificate { rank, product })
}

/// Rank of an integer kernel over `Z/p` for a 61-bit prime; equals the
/// rational rank unless `p` divides all maximal nonzero minors.
pub fn modular_rank(a: &BlockKernel<i64>) -> usize {
    rank_mod_p(&integer_matrix(a), RANK_PRIME)
}

/// Settings for [`det_conjecture_check`].
#[derive(Debug, Clone)]
pub struct DetOptions {
    /// Moments `Tr_*((AA*)^m)` computed for `m = 1..=moments`.
    pub moments: usize,
    /// Largest `n·d_block` for which the exact certificate is computed.
    pub certificate_limit: usize,
    /// Allowed spread of each moment between the two largest sizes,
    /// relative to `max(1, |moment|)`.
    pub moment_tol: f64,
    pub eig_tol: f64,
}

impl Default for DetOptions {
    fn default() -> Self {
        DetOptions {
            moments: 4,
            certificate_limit: 200,
            moment_tol: 1e-9,
            eig_tol: 1e-12,
        }
    }
}

/// One size of a determinant check.
#[derive(Debug, Clone, PartialEq)]
pub struct DetRow {
    pub n: usize,
    pub d_block: usize,
    pub rank: usize,
    pub log_det: f64,
    pub det: f64,
    pub certificate: Option<BigInt>,
    /// Largest eigenvalue of `AA*`, i.e. its operator norm.
    pub op_norm: f64,
    pub schur_bound: f64,
    pub moments: Vec<Rational>,
    pub spectrum: SpectralReport,
}

impl DetRow {
    /// `|det^{d·n} − product| / product`, when a certificate exists.
    pub fn certificate_gap(&self) -> Option<f64> {
        let p = self.certificate.as_ref()?;
        let ln_p = bigint_ln(p);
        let ln_f = self.log_det * (self.n * self.d_block) as f64;
        Some((ln_f - ln_p).exp_m1().abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetReport {
    pub rows: Vec<DetRow>,
    /// `(Σ_entries ‖B‖)²`, a size-independent bound on `‖AA*‖`.
    pub uniform_bound: f64,
    pub uniformly_bounded: bool,
    /// Per moment, `max − min` over the two largest sizes.
    pub moment_spread: Vec<f64>,
    pub moments_settled: bool,
    pub certificates_ok: bool,
}

/// Instantiates an integer spec on the action built for each size and
/// checks the hypotheses of the determinant limit argument: exact
/// certificates at least 1, a uniform norm bound, and settling moments.
pub fn det_conjecture_check(
    spec: &FiniteTypeOperatorSpec<i64>,
    build: impl Fn(usize) -> Result<FiniteAction>,
    sizes: &[usize],
    opts: &DetOptions,
) -> Result<DetReport> {
    let bound: f64 = spec
        .entries()
        .iter()
        .map(|e| {
            let d = spec.dim();
            let m = DMatrix::from_row_slice(d, d, &e.block.iter().map(|x| Complex64::new(*x as f64, 0.0)).collect::<Vec<_>>());
            m.singular_values().max()
        })
        .sum::<f64>()
        .powi(2);
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let action = Arc::new(build(size)?);
        let a = spec.instantiate(&action)?;
        let g = gram(&a)?;
        let cert = if action.n() * spec.dim() <= opts.certificate_limit {
            Some(exact_integer_certificate(&a)?)
        } else {
            None
        };
        let rank = match &cert {
            Some(c) => c.rank,
            None => modular_rank(&g),
        };
        let spec_report = fk_determinant(spectrum(&g, opts.eig_tol)?, None, Some(rank))?;
        let moments = g.moments(opts.moments)?;
        let certificate = cert.map(|c| c.product);
        rows.push(DetRow {
            n: action.n(),
            d_block: spec.dim(),
            rank,
            log_det: spec_report.log_det,
            det: spec_report.det,
            certificate: certificate.clone(),
            op_norm: spec_report.max_eig(),
            schur_bound: g.norm_bound(),
            moments,
            spectrum: SpectralReport {
                exact_product: certificate,
                ..spec_report
            },
        });
    }
    let uniformly_bounded = rows.iter().all(|r| r.op_norm <= bound * (1.0 + 1e-9) + 1e-9);
    let moment_spread: Vec<f64> = (0..opts.moments)
        .map(|m| {
            let tail = &rows[rows.len().saturating_sub(2)..];
            let vals: Vec<f64> = tail.iter().map(|r| rational_to_f64(&r.moments[m])).collect();
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            if vals.is_empty() { 0.0 } else { hi - lo }
        })
        .collect();
    let moments_settled = moment_spread.iter().enumerate().all(|(m, s)| {
        let scale = rows
            .last()
            .map_or(1.0, |r| rational_to_f64(&r.moments[m]).abs().max(1.0));
        *s <= opts.moment_tol * scale
    });
    let certificates_ok = rows
        .iter()
        .all(|r| r.certificate.as_ref().is_none_or(|c| *c >= BigInt::one()));
    Ok(DetReport {
        rows,
        uniform_bound: bound,
        uniformly_bounded,
        moment_spread,
        moments_settled,
        certificates_ok,
    })
}

/// Normalized trace as a float, for any scalar.
pub fn trace_f64<T: Scalar>(k: &BlockKernel<T>) -> f64 {
    k.normalized_trace().real_part()
}
