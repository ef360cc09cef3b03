//! C ABI over the lsmcd core: instance generation, the SDP solver, the dual
//! certificate, closed-form moments, regime classification, and the exact
//! MLE, exposed through opaque handles and integer status codes.
//!
//! Conventions (mirrored in include/lsmcd.h):
//! - Every fallible function returns an `LsmcdStatus`; outputs go through
//!   pointers. `LSMCD_OK` is 0.
//! - Handles returned by `*_generate`/`*_solve`/... own their data and must
//!   be released with the matching `*_free`. Freeing NULL is a no-op.
//! - Matrix buffers are row-major, length n*n, caller-allocated.
//! - On any error the thread-local message retrieved by
//!   `lsmcd_last_error_message` describes the failure.
//! - Panics never unwind across the boundary; they convert to
//!   `LSMCD_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lsmcd::certificate::certify;
use lsmcd::error::Error;
use lsmcd::mle::brute_force_mle;
use lsmcd::model::{generate, validate_adjacency, LabelVector, LsmInstance, ModelParams};
use lsmcd::moments::{closed_form, GaussianMoments};
use lsmcd::regimes::{classify, Constants, Verdict};
use lsmcd::solver::{solve, SdpSolution, SolverConfig};

use ndarray::Array2;

/// Status codes. Kept in sync with include/lsmcd.h by hand; the values are
/// part of the ABI and must never be reordered.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LsmcdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidInput = 3,
    DimensionMismatch = 4,
    ResourceLimit = 5,
    Numerical = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> LsmcdStatus {
    match err {
        Error::InvalidParameter(_) => LsmcdStatus::InvalidParameter,
        Error::InvalidInput(_) | Error::Parse { .. } | Error::NoClosedForm(_) => {
            LsmcdStatus::InvalidInput
        }
        Error::DimensionMismatch(_) => LsmcdStatus::DimensionMismatch,
        Error::ResourceLimit { .. } => LsmcdStatus::ResourceLimit,
        Error::Lapack { .. } | Error::KernelRange { .. } => LsmcdStatus::Numerical,
        Error::Io(_) | Error::Json(_) => LsmcdStatus::Io,
    }
}

fn fail(err: Error) -> LsmcdStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Run `f` with panics converted to a status code, storing any error text.
fn guarded<F: FnOnce() -> LsmcdStatus>(f: F) -> LsmcdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            set_error(format!("internal panic: {msg}"));
            LsmcdStatus::Panic
        }
    }
}

macro_rules! require_nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(format!("{} is NULL", stringify!($ptr)));
            return LsmcdStatus::NullPointer;
        }
    };
}

/// Copy the most recent error message on this thread into `buf` (NUL
/// terminated, truncated to `len` bytes including the terminator). Returns
/// the full message length in bytes, excluding the terminator. `buf` may be
/// NULL to query the length.
#[no_mangle]
pub extern "C" fn lsmcd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // Safety: caller guarantees buf has space for len bytes.
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Static version string, NUL terminated, never freed by the caller.
#[no_mangle]
pub extern "C" fn lsmcd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Instances

pub struct LsmcdInstance {
    inner: LsmInstance,
}

/// Generate a synthetic instance. On success `*out` owns the instance;
/// release with `lsmcd_instance_free`.
#[no_mangle]
pub extern "C" fn lsmcd_instance_generate(
    n: usize,
    d: usize,
    mu_norm: c_double,
    sigma: c_double,
    seed: u64,
    out: *mut *mut LsmcdInstance,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(out);
        let params = match ModelParams::new(n, d, mu_norm, sigma) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match generate(&params, seed) {
            Ok(inner) => {
                let handle = Box::new(LsmcdInstance { inner });
                unsafe { *out = Box::into_raw(handle) };
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release an instance handle. NULL is accepted and ignored.
#[no_mangle]
pub extern "C" fn lsmcd_instance_free(instance: *mut LsmcdInstance) {
    if !instance.is_null() {
        drop(unsafe { Box::from_raw(instance) });
    }
}

#[no_mangle]
pub extern "C" fn lsmcd_instance_n(instance: *const LsmcdInstance, out: *mut usize) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(instance);
        require_nonnull!(out);
        unsafe { *out = (*instance).inner.n() };
        LsmcdStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn lsmcd_instance_edge_count(
    instance: *const LsmcdInstance,
    out: *mut usize,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(instance);
        require_nonnull!(out);
        unsafe { *out = (*instance).inner.edge_count() };
        LsmcdStatus::Ok
    })
}

/// Copy the 0/1 adjacency into a caller buffer of length `len` (row-major,
/// needs n*n bytes).
#[no_mangle]
pub extern "C" fn lsmcd_instance_adjacency(
    instance: *const LsmcdInstance,
    buf: *mut u8,
    len: usize,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(instance);
        require_nonnull!(buf);
        let a = &unsafe { &*instance }.inner.adjacency;
        let needed = a.nrows() * a.ncols();
        if len < needed {
            set_error(format!("adjacency needs {needed} bytes, buffer has {len}"));
            return LsmcdStatus::BufferTooSmall;
        }
        for (k, &v) in a.iter().enumerate() {
            unsafe { *buf.add(k) = v };
        }
        LsmcdStatus::Ok
    })
}

/// Copy the planted +-1 labels into a caller buffer of length `len` (needs n
/// entries).
#[no_mangle]
pub extern "C" fn lsmcd_instance_labels(
    instance: *const LsmcdInstance,
    buf: *mut i8,
    len: usize,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(instance);
        require_nonnull!(buf);
        let labels = unsafe { &*instance }.inner.labels.as_slice();
        if len < labels.len() {
            set_error(format!(
                "labels need {} entries, buffer has {len}",
                labels.len()
            ));
            return LsmcdStatus::BufferTooSmall;
        }
        for (k, &v) in labels.iter().enumerate() {
            unsafe { *buf.add(k) = v };
        }
        LsmcdStatus::Ok
    })
}

fn adjacency_from_raw(adjacency: *const u8, n: usize) -> Result<Array2<u8>, Error> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "adjacency needs at least 2 nodes, got {n}"
        )));
    }
    let slice = unsafe { std::slice::from_raw_parts(adjacency, n * n) };
    let a = Array2::from_shape_vec((n, n), slice.to_vec())
        .expect("slice length is exactly n*n by construction");
    validate_adjacency(&a)?;
    Ok(a)
}

// ---------------------------------------------------------------------------
// Solver

pub struct LsmcdSolution {
    inner: SdpSolution,
}

/// Solve the SDP relaxation for a row-major 0/1 adjacency of order n. Pass
/// max_iters = 0 or tol <= 0 to take the documented defaults. On success
/// `*out` owns the solution; release with `lsmcd_solution_free`.
#[no_mangle]
pub extern "C" fn lsmcd_solve(
    adjacency: *const u8,
    n: usize,
    max_iters: usize,
    tol: c_double,
    out: *mut *mut LsmcdSolution,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(adjacency);
        require_nonnull!(out);
        let a = match adjacency_from_raw(adjacency, n) {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        let mut config = SolverConfig::default();
        if max_iters > 0 {
            config.max_iters = max_iters;
        }
        if tol > 0.0 {
            config.feas_tol = tol;
        }
        match solve(&a, &config) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(LsmcdSolution { inner })) };
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a solution handle. NULL is accepted and ignored.
#[no_mangle]
pub extern "C" fn lsmcd_solution_free(solution: *mut LsmcdSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Scalar summary of a solve. `converged` and `exact_flag` are 0/1.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct LsmcdSolveSummary {
    pub objective: c_double,
    pub iterations: usize,
    pub primal_residual: c_double,
    pub dual_residual: c_double,
    pub converged: c_int,
    pub exact_flag: c_int,
}

#[no_mangle]
pub extern "C" fn lsmcd_solution_summary(
    solution: *const LsmcdSolution,
    out: *mut LsmcdSolveSummary,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(solution);
        require_nonnull!(out);
        let s = &unsafe { &*solution }.inner;
        unsafe {
            *out = LsmcdSolveSummary {
                objective: s.objective,
                iterations: s.iterations,
                primal_residual: s.primal_residual,
                dual_residual: s.dual_residual,
                converged: s.converged.into(),
                exact_flag: s.exact_flag.into(),
            };
        }
        LsmcdStatus::Ok
    })
}

/// Copy the rounded +-1 labels into a caller buffer (needs n entries).
#[no_mangle]
pub extern "C" fn lsmcd_solution_labels(
    solution: *const LsmcdSolution,
    buf: *mut i8,
    len: usize,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(solution);
        require_nonnull!(buf);
        let labels = unsafe { &*solution }.inner.rounded_labels.as_slice();
        if len < labels.len() {
            set_error(format!(
                "labels need {} entries, buffer has {len}",
                labels.len()
            ));
            return LsmcdStatus::BufferTooSmall;
        }
        for (k, &v) in labels.iter().enumerate() {
            unsafe { *buf.add(k) = v };
        }
        LsmcdStatus::Ok
    })
}

/// Copy the solution matrix Y into a caller buffer of length `len` doubles
/// (row-major, needs n*n).
#[no_mangle]
pub extern "C" fn lsmcd_solution_matrix(
    solution: *const LsmcdSolution,
    buf: *mut c_double,
    len: usize,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(solution);
        require_nonnull!(buf);
        let y = &unsafe { &*solution }.inner.y;
        let needed = y.nrows() * y.ncols();
        if len < needed {
            set_error(format!("matrix needs {needed} doubles, buffer has {len}"));
            return LsmcdStatus::BufferTooSmall;
        }
        for (k, &v) in y.iter().enumerate() {
            unsafe { *buf.add(k) = v };
        }
        LsmcdStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Certificate

/// Scalar summary of the dual certificate. Flags are 0/1.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct LsmcdCertificateSummary {
    pub lambda_min: c_double,
    pub lambda_2: c_double,
    pub psd: c_int,
    pub unique: c_int,
    pub gap_identity_ok: c_int,
}

/// Certify a labeled graph: adjacency row-major 0/1 of order n, labels +-1 of
/// length n (must be balanced). Pass eig_tol <= 0 for the default 1e-8 * n.
#[no_mangle]
pub extern "C" fn lsmcd_certify(
    adjacency: *const u8,
    labels: *const i8,
    n: usize,
    eig_tol: c_double,
    out: *mut LsmcdCertificateSummary,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(adjacency);
        require_nonnull!(labels);
        require_nonnull!(out);
        let a = match adjacency_from_raw(adjacency, n) {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        let signs = unsafe { std::slice::from_raw_parts(labels, n) }.to_vec();
        let y = match LabelVector::signs(signs) {
            Ok(y) => y,
            Err(e) => return fail(e),
        };
        let tol = (eig_tol > 0.0).then_some(eig_tol);
        match certify(&a, &y, tol) {
            Ok(report) => {
                unsafe {
                    *out = LsmcdCertificateSummary {
                        lambda_min: report.lambda_min,
                        lambda_2: report.lambda_2,
                        psd: report.psd.into(),
                        unique: report.unique.into(),
                        gap_identity_ok: report.gap_identity_ok.into(),
                    };
                }
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Moments and regimes

/// The seven closed-form moments. Field order matches include/lsmcd.h.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct LsmcdMoments {
    pub p: c_double,
    pub p_prime: c_double,
    pub q: c_double,
    pub q_prime: c_double,
    pub r: c_double,
    pub s0: c_double,
    pub s1: c_double,
}

impl From<GaussianMoments> for LsmcdMoments {
    fn from(m: GaussianMoments) -> Self {
        LsmcdMoments {
            p: m.p,
            p_prime: m.p_prime,
            q: m.q,
            q_prime: m.q_prime,
            r: m.r,
            s0: m.s0,
            s1: m.s1,
        }
    }
}

#[no_mangle]
pub extern "C" fn lsmcd_moments_closed_form(
    d: usize,
    mu_norm: c_double,
    sigma: c_double,
    out: *mut LsmcdMoments,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(out);
        match closed_form(d, mu_norm, sigma) {
            Ok(m) => {
                unsafe { *out = m.into() };
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Verdict codes for `lsmcd_classify`. Matches the header.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum LsmcdVerdict {
    Holds = 0,
    Fails = 1,
    NotApplicable = 2,
    PreconditionViolated = 3,
}

impl From<Verdict> for LsmcdVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => LsmcdVerdict::Holds,
            Verdict::Fails => LsmcdVerdict::Fails,
            Verdict::NotApplicable => LsmcdVerdict::NotApplicable,
            Verdict::PreconditionViolated => LsmcdVerdict::PreconditionViolated,
        }
    }
}

/// Regime classification summary: one verdict per theorem plus the shared
/// p(1+q) <= 1 precondition flag (0/1).
#[repr(C)]
#[derive(Clone, Copy)]
pub struct LsmcdRegimeSummary {
    pub impossible: LsmcdVerdict,
    pub mle_recoverable: LsmcdVerdict,
    pub sdp_recoverable: LsmcdVerdict,
    pub precondition_ok: c_int,
}

/// Classify a parameter point with the default theorem constants.
#[no_mangle]
pub extern "C" fn lsmcd_classify(
    n: usize,
    d: usize,
    mu_norm: c_double,
    sigma: c_double,
    out: *mut LsmcdRegimeSummary,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(out);
        let moments = match closed_form(d, mu_norm, sigma) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        match classify(n, &moments, &Constants::default()) {
            Ok(report) => {
                unsafe {
                    *out = LsmcdRegimeSummary {
                        impossible: report.impossible.verdict.into(),
                        mle_recoverable: report.mle_recoverable.verdict.into(),
                        sdp_recoverable: report.sdp_recoverable.verdict.into(),
                        precondition_ok: report.precondition_ok.into(),
                    };
                }
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Exact MLE

/// Exhaustive MLE on a small graph (n <= 24). `balanced_only` restricts to
/// balanced labelings. `labels` receives the lexicographically first optimum
/// (needs n entries); `objective` and `num_optima` are scalar outputs.
#[no_mangle]
pub extern "C" fn lsmcd_mle(
    adjacency: *const u8,
    n: usize,
    balanced_only: c_int,
    labels: *mut i8,
    objective: *mut i64,
    num_optima: *mut u64,
) -> LsmcdStatus {
    guarded(|| {
        require_nonnull!(adjacency);
        require_nonnull!(labels);
        require_nonnull!(objective);
        require_nonnull!(num_optima);
        let a = match adjacency_from_raw(adjacency, n) {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        match brute_force_mle(&a, balanced_only != 0) {
            Ok(result) => {
                let best = result.best_labels.as_slice();
                for (k, &v) in best.iter().enumerate() {
                    unsafe { *labels.add(k) = v };
                }
                unsafe {
                    *objective = result.best_objective;
                    *num_optima = result.num_optima;
                }
                LsmcdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn generate_handle(n: usize, mu: f64, sigma: f64, seed: u64) -> *mut LsmcdInstance {
        let mut out: *mut LsmcdInstance = ptr::null_mut();
        let status = lsmcd_instance_generate(n, 2, mu, sigma, seed, &mut out);
        assert_eq!(status, LsmcdStatus::Ok);
        assert!(!out.is_null());
        out
    }

    fn last_error() -> String {
        let needed = lsmcd_last_error_message(ptr::null_mut(), 0);
        let mut buf = vec![0u8; needed + 1];
        lsmcd_last_error_message(buf.as_mut_ptr().cast(), buf.len());
        String::from_utf8_lossy(&buf[..needed]).into_owned()
    }

    #[test]
    fn version_is_static_nul_terminated() {
        let p = lsmcd_version();
        assert!(!p.is_null());
        let s = unsafe { std::ffi::CStr::from_ptr(p) };
        assert_eq!(s.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn generate_solve_certify_round_trip() {
        let inst = generate_handle(16, 3.0, 0.01, 7);
        let mut n = 0usize;
        assert_eq!(lsmcd_instance_n(inst, &mut n), LsmcdStatus::Ok);
        assert_eq!(n, 16);

        let mut adj = vec![0u8; n * n];
        assert_eq!(
            lsmcd_instance_adjacency(inst, adj.as_mut_ptr(), adj.len()),
            LsmcdStatus::Ok
        );
        let mut truth = vec![0i8; n];
        assert_eq!(
            lsmcd_instance_labels(inst, truth.as_mut_ptr(), truth.len()),
            LsmcdStatus::Ok
        );
        assert!(truth.iter().all(|&v| v == 1 || v == -1));

        // Adjacency is symmetric with zero diagonal.
        for i in 0..n {
            assert_eq!(adj[i * n + i], 0);
            for j in 0..n {
                assert_eq!(adj[i * n + j], adj[j * n + i]);
            }
        }

        let mut cert = LsmcdCertificateSummary {
            lambda_min: 0.0,
            lambda_2: 0.0,
            psd: 0,
            unique: 0,
            gap_identity_ok: 0,
        };
        assert_eq!(
            lsmcd_certify(adj.as_ptr(), truth.as_ptr(), n, 0.0, &mut cert),
            LsmcdStatus::Ok
        );
        assert_eq!(cert.gap_identity_ok, 1);

        let mut sol: *mut LsmcdSolution = ptr::null_mut();
        assert_eq!(
            lsmcd_solve(adj.as_ptr(), n, 0, 0.0, &mut sol),
            LsmcdStatus::Ok
        );
        let mut summary = LsmcdSolveSummary {
            objective: 0.0,
            iterations: 0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            converged: 0,
            exact_flag: 0,
        };
        assert_eq!(lsmcd_solution_summary(sol, &mut summary), LsmcdStatus::Ok);
        assert_eq!(summary.converged, 1);

        // At mu=3, sigma=0.01 the instance is in the trivially recoverable
        // regime; the solve is exact and matches the planted labels up to a
        // global flip.
        if cert.unique == 1 {
            assert_eq!(summary.exact_flag, 1);
            let mut est = vec![0i8; n];
            assert_eq!(
                lsmcd_solution_labels(sol, est.as_mut_ptr(), est.len()),
                LsmcdStatus::Ok
            );
            let agree = est.iter().zip(&truth).filter(|(a, b)| a == b).count();
            assert!(agree == n || agree == 0, "agree = {agree}");
        }

        let mut y = vec![0.0f64; n * n];
        assert_eq!(
            lsmcd_solution_matrix(sol, y.as_mut_ptr(), y.len()),
            LsmcdStatus::Ok
        );
        for i in 0..n {
            assert!((y[i * n + i] - 1.0).abs() < 1e-3);
        }

        lsmcd_solution_free(sol);
        lsmcd_instance_free(inst);
    }

    #[test]
    fn null_and_size_errors() {
        assert_eq!(
            lsmcd_instance_generate(16, 2, 1.0, 0.1, 0, ptr::null_mut()),
            LsmcdStatus::NullPointer
        );
        let mut out: *mut LsmcdInstance = ptr::null_mut();
        assert_eq!(
            lsmcd_instance_generate(7, 2, 1.0, 0.1, 0, &mut out),
            LsmcdStatus::InvalidParameter
        );
        assert!(last_error().contains("even"));

        let inst = generate_handle(8, 1.0, 0.3, 1);
        let mut small = vec![0u8; 3];
        assert_eq!(
            lsmcd_instance_adjacency(inst, small.as_mut_ptr(), small.len()),
            LsmcdStatus::BufferTooSmall
        );
        assert!(last_error().contains("64"));
        lsmcd_instance_free(inst);

        // Freeing NULL is a no-op.
        lsmcd_instance_free(ptr::null_mut());
        lsmcd_solution_free(ptr::null_mut());
    }

    #[test]
    fn invalid_adjacency_is_rejected() {
        // Asymmetric matrix.
        let adj = vec![0u8, 1, 0, 0];
        let mut sol: *mut LsmcdSolution = ptr::null_mut();
        assert_eq!(
            lsmcd_solve(adj.as_ptr(), 2, 0, 0.0, &mut sol),
            LsmcdStatus::InvalidInput
        );
        assert!(sol.is_null());
    }

    #[test]
    fn moments_and_classify() {
        let mut m = LsmcdMoments {
            p: 0.0,
            p_prime: 0.0,
            q: 0.0,
            q_prime: 0.0,
            r: 0.0,
            s0: 0.0,
            s1: 0.0,
        };
        assert_eq!(
            lsmcd_moments_closed_form(2, 1.0, 0.3, &mut m),
            LsmcdStatus::Ok
        );
        assert!((m.p - 0.735_294_117_647_058_9).abs() < 1e-15);
        assert!((m.q - 0.052_803_570_334_300_51).abs() < 1e-15);

        assert_eq!(
            lsmcd_moments_closed_form(0, 1.0, 0.3, &mut m),
            LsmcdStatus::InvalidParameter
        );

        let mut r = LsmcdRegimeSummary {
            impossible: LsmcdVerdict::Holds,
            mle_recoverable: LsmcdVerdict::Holds,
            sdp_recoverable: LsmcdVerdict::Holds,
            precondition_ok: 0,
        };
        assert_eq!(lsmcd_classify(300, 2, 1.0, 0.3, &mut r), LsmcdStatus::Ok);
        assert!(r.impossible == LsmcdVerdict::Fails);
        assert_eq!(r.precondition_ok, 1);
    }

    #[test]
    fn mle_matches_known_fixture() {
        // Perfect four-node graph: edges (0,1) and (2,3).
        let mut adj = vec![0u8; 16];
        for (i, j) in [(0usize, 1usize), (2, 3)] {
            adj[i * 4 + j] = 1;
            adj[j * 4 + i] = 1;
        }
        let mut labels = vec![0i8; 4];
        let mut objective = 0i64;
        let mut num_optima = 0u64;
        assert_eq!(
            lsmcd_mle(
                adj.as_ptr(),
                4,
                0,
                labels.as_mut_ptr(),
                &mut objective,
                &mut num_optima
            ),
            LsmcdStatus::Ok
        );
        assert_eq!(objective, 12);
        assert_eq!(num_optima, 1);
        assert_eq!(labels, vec![1, 1, -1, -1]);

        // Resource cap: n = 25 is rejected.
        let big = vec![0u8; 25 * 25];
        let mut l = vec![0i8; 25];
        assert_eq!(
            lsmcd_mle(
                big.as_ptr(),
                25,
                0,
                l.as_mut_ptr(),
                &mut objective,
                &mut num_optima
            ),
            LsmcdStatus::ResourceLimit
        );
    }
}
