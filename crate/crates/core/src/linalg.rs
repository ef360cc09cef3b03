//! Dense symmetric eigendecomposition via LAPACK: the divide-and-conquer
//! routine (dsyevd) for full spectra and the ranged MRRR routine (dsyevr)
//! for the positive part alone. These are the heavy primitives in this crate.
//!
//! Matrices are passed to LAPACK in column-major order. Every caller supplies
//! a symmetric matrix, so the row-major ndarray buffer can be handed over
//! as-is; only the lower triangle is read.

use std::ffi::c_char;

use ndarray::{Array1, Array2, ShapeBuilder};

use crate::error::{Error, Result};

/// Eigendecomposition of a symmetric matrix. `values` ascending;
/// `vectors.column(k)` is the unit eigenvector for `values[k]`.
pub struct Eigh {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

fn dsyevd(m: &Array2<f64>, want_vectors: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {rows}x{cols}"
        )));
    }
    if rows == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let n = rows as i32;
    let jobz = if want_vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;

    let mut a = m
        .as_slice()
        .map(<[f64]>::to_vec)
        .unwrap_or_else(|| m.iter().copied().collect());
    let mut w = vec![0.0f64; rows];
    let mut info: i32 = 0;

    // Workspace query, then the real call.
    let mut work_len = [0.0f64];
    let mut iwork_len = [0i32];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work_len.as_mut_ptr(),
            &-1,
            iwork_len.as_mut_ptr(),
            &-1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevd (workspace query)",
            info,
        });
    }
    let lwork = work_len[0] as i32;
    let liwork = iwork_len[0];
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevd",
            info,
        });
    }
    Ok((w, a))
}

/// Full eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &Array2<f64>) -> Result<Eigh> {
    let n = m.nrows();
    let (w, a) = dsyevd(m, true)?;
    // LAPACK wrote eigenvectors as columns of a column-major buffer.
    let vectors = Array2::from_shape_vec((n, n).f(), a).expect("dsyevd buffer has n*n elements");
    Ok(Eigh {
        values: Array1::from_vec(w),
        vectors,
    })
}

/// Eigenvalues only, ascending. Roughly twice as fast as [`eigh`].
pub fn eigvalsh(m: &Array2<f64>) -> Result<Array1<f64>> {
    let (w, _) = dsyevd(m, false)?;
    Ok(Array1::from_vec(w))
}

/// Eigenpairs with strictly positive eigenvalues, ascending, via the ranged
/// MRRR routine (dsyevr with an eigenvalue interval). When few eigenvalues
/// are positive this skips most of the back-transformation work that
/// dominates a full decomposition, which is what makes it worth having: the
/// solver's iterates spend most of their time with a near-converged, low-rank
/// positive side. `vectors` has one column per returned eigenvalue and may be
/// empty.
pub fn eigh_positive(m: &Array2<f64>) -> Result<Eigh> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {rows}x{cols}"
        )));
    }
    if rows == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let n = rows as i32;
    let jobz = b'V' as c_char;
    let range = b'V' as c_char;
    let uplo = b'L' as c_char;

    let mut a = m
        .as_slice()
        .map(<[f64]>::to_vec)
        .unwrap_or_else(|| m.iter().copied().collect());
    // The interval is half-open (vl, vu], so vl = 0 selects strictly positive
    // eigenvalues. Every eigenvalue is bounded by the infinity norm, so that
    // plus a bit of slack is a safe finite upper end.
    let vl = 0.0f64;
    let vu = m
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
        + 1.0;
    let il = 0i32;
    let iu = 0i32;
    // Zero requests the routine's default tolerance.
    let abstol = 0.0f64;
    let mut found: i32 = 0;
    let mut w = vec![0.0f64; rows];
    // The number of eigenpairs is not known before the call, so the vector
    // buffer has to be sized for the worst case.
    let mut z = vec![0.0f64; rows * rows];
    let mut isuppz = vec![0i32; 2 * rows];
    let mut info: i32 = 0;

    let mut work_len = [0.0f64];
    let mut iwork_len = [0i32];
    unsafe {
        lapack_sys::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &n,
            isuppz.as_mut_ptr(),
            work_len.as_mut_ptr(),
            &-1,
            iwork_len.as_mut_ptr(),
            &-1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevr (workspace query)",
            info,
        });
    }
    let lwork = work_len[0] as i32;
    let liwork = iwork_len[0];
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        lapack_sys::dsyevr_(
            &jobz,
            &range,
            &uplo,
            &n,
            a.as_mut_ptr(),
            &n,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &n,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevr",
            info,
        });
    }
    let k = found as usize;
    w.truncate(k);
    z.truncate(rows * k);
    let vectors = Array2::from_shape_vec((rows, k).f(), z).expect("dsyevr buffer has n*k elements");
    Ok(Eigh {
        values: Array1::from_vec(w),
        vectors,
    })
}

/// Spectral norm (largest eigenvalue magnitude) of a symmetric matrix.
pub fn spectral_norm(m: &Array2<f64>) -> Result<f64> {
    let w = eigvalsh(m)?;
    Ok(w[0].abs().max(w[w.len() - 1].abs()))
}

/// Largest eigenvalue and its unit eigenvector.
pub fn leading_eigenpair(m: &Array2<f64>) -> Result<(f64, Array1<f64>)> {
    let eig = eigh(m)?;
    let k = eig.values.len() - 1;
    Ok((eig.values[k], eig.vectors.column(k).to_owned()))
}
