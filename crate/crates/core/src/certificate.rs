//! Dual certificate for exact recovery.
//!
//! With signed degrees d_i = sum_j A_ij y*_i y*_j and D = diag(d), the
//! matrix S = 2D - 2A + 11^T always has y* in its kernel. If S is PSD the
//! planted Y* = y* y*^T is an optimal solution of the relaxation, and if in
//! addition the second-smallest eigenvalue of S is strictly positive, Y* is
//! the unique optimum. This module decides recovery without running the
//! solver, verifies the zero-duality-gap trace identity, and reports four
//! concentration margins that are sufficient (not necessary) for uniqueness
//! on synthetic instances where the latent positions are known.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{validate_adjacency, Kernel, LabelVector};
use crate::moments::GaussianMoments;

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    /// Signed degrees d_i.
    pub degrees: Vec<i64>,
    /// Smallest and second-smallest eigenvalues of S (with multiplicity).
    pub lambda_min: f64,
    pub lambda_2: f64,
    /// lambda_min >= -eig_tol.
    pub psd: bool,
    /// psd and lambda_2 > eig_tol: the planted labels are the unique
    /// optimum of the relaxation.
    pub unique: bool,
    /// The integer identity tr((2A - 11^T + I) y* y*^T) = tr(2D + I),
    /// checked exactly along two independent routes.
    pub gap_identity_ok: bool,
    /// Tolerance used for the flags; defaults to 1e-8 * n since the norm of
    /// S grows with n.
    pub eig_tol: f64,
    /// Filled by the caller when latent positions are available; see
    /// [`concentration_margins`].
    pub margins: Option<ConcentrationMargins>,
}

/// The four concentration margins sufficient for exact recovery, each of the
/// form np(1-q)/8 minus (or plus, for the first) a deviation term. All four
/// strictly positive implies the certificate is unique.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConcentrationMargins {
    /// np(1-q)/8, the budget each deviation is measured against.
    pub threshold: f64,
    /// threshold + min_i (d_i - E[d_i | X]).
    pub degree_margin: f64,
    /// threshold - lambda_max(A - E[A | X]).
    pub adjacency_margin: f64,
    /// threshold - || E[D | X] - E[D] ||.
    pub expected_degree_margin: f64,
    /// threshold - || E[A | X] - E[A] ||.
    pub expected_adjacency_margin: f64,
    pub all_positive: bool,
}

/// Result of checking the closed-form second eigenvalue of the expectation
/// matrix 2 E[D] - 2 E[A] + 11^T against a dense eigensolve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpectedLambda2 {
    /// n p (1 - q), the closed-form value (valid when p(1+q) <= 1).
    pub claimed: f64,
    /// Second-smallest eigenvalue of the explicitly constructed matrix.
    pub numeric: f64,
    /// |claimed - numeric| <= 1e-8 n.
    pub agrees: bool,
    /// p(1+q) <= 1. When violated the closed form does not apply (the
    /// all-ones direction drops below the bulk) and `agrees` is expected to
    /// be false except at the boundary.
    pub precondition_ok: bool,
}

fn check_labels(a: &Array2<u8>, y_star: &LabelVector) -> Result<()> {
    validate_adjacency(a)?;
    if y_star.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "adjacency is {}x{} but labels have length {}",
            a.nrows(),
            a.ncols(),
            y_star.len()
        )));
    }
    if !y_star.is_balanced() {
        return Err(Error::InvalidInput(
            "certificate requires balanced labels".into(),
        ));
    }
    Ok(())
}

/// Signed degrees d_i = sum_j A_ij y*_i y*_j: within-class degree minus
/// cross-class degree.
pub fn signed_degrees(a: &Array2<u8>, y_star: &LabelVector) -> Result<Vec<i64>> {
    check_labels(a, y_star)?;
    let n = a.nrows();
    let signs = y_star.as_slice();
    let mut degrees = vec![0i64; n];
    for i in 0..n {
        let mut d = 0i64;
        for j in 0..n {
            if a[[i, j]] == 1 {
                d += (signs[i] * signs[j]) as i64;
            }
        }
        degrees[i] = d;
    }
    Ok(degrees)
}

/// The diagonal degree matrix D = diag(d_1, ..., d_n).
pub fn degree_matrix(a: &Array2<u8>, y_star: &LabelVector) -> Result<Array2<f64>> {
    let degrees = signed_degrees(a, y_star)?;
    Ok(Array2::from_diag(&Array1::from_iter(
        degrees.iter().map(|&d| d as f64),
    )))
}

/// Build and analyze the certificate matrix S = 2D - 2A + 11^T.
pub fn certify(
    a: &Array2<u8>,
    y_star: &LabelVector,
    eig_tol: Option<f64>,
) -> Result<CertificateReport> {
    let degrees = signed_degrees(a, y_star)?;
    let n = a.nrows();
    let eig_tol = eig_tol.unwrap_or(1e-8 * n as f64);
    if !(eig_tol > 0.0) || !eig_tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "eig_tol must be positive and finite, got {eig_tol}"
        )));
    }

    let mut s = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            s[[i, j]] = if i == j {
                2.0 * degrees[i] as f64 + 1.0
            } else {
                1.0 - 2.0 * a[[i, j]] as f64
            };
        }
    }
    let eigs = linalg::eigvalsh(&s)?;
    let lambda_min = eigs[0];
    let lambda_2 = eigs[1];
    let psd = lambda_min >= -eig_tol;
    let unique = psd && lambda_2 > eig_tol;

    // Zero-duality-gap identity, exact in integer arithmetic: the primal
    // value y*^T (2A - 11^T + I) y* against the dual value tr(2D + I).
    let signs = y_star.as_slice();
    let mut quad = 0i64; // y*^T A y*
    for i in 0..n {
        for j in 0..n {
            if a[[i, j]] == 1 {
                quad += (signs[i] * signs[j]) as i64;
            }
        }
    }
    let imbalance: i64 = signs.iter().map(|&s| s as i64).sum();
    let primal = 2 * quad - imbalance * imbalance + n as i64;
    let dual: i64 = 2 * degrees.iter().sum::<i64>() + n as i64;
    let gap_identity_ok = primal == dual;

    Ok(CertificateReport {
        degrees,
        lambda_min,
        lambda_2,
        psd,
        unique,
        gap_identity_ok,
        eig_tol,
        margins: None,
    })
}

/// The four concentration margins, computable only when the latent positions
/// are known (synthetic instances). Returns Ok(None) when `latents` is
/// absent, since real data carries no latent coordinates.
///
/// E[A | X]_ij = f(x_i, x_j) off the diagonal; the unconditional
/// expectations use the closed forms E[A] = p(1+q)/2 11^T + p(1-q)/2 y*y*^T
/// - pI and E[D] = (np(1-q)/2 - p) I.
pub fn concentration_margins(
    a: &Array2<u8>,
    latents: Option<&Array2<f64>>,
    kernel: &Kernel,
    y_star: &LabelVector,
    moments: &GaussianMoments,
) -> Result<Option<ConcentrationMargins>> {
    let Some(x) = latents else {
        return Ok(None);
    };
    let degrees = signed_degrees(a, y_star)?;
    let n = a.nrows();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "latents have {} rows but adjacency is {n}x{n}",
            x.nrows()
        )));
    }
    let signs = y_star.as_slice();
    let p = moments.p;
    let q = moments.q;
    let nf = n as f64;
    let threshold = nf * p * (1.0 - q) / 8.0;

    // Conditional edge probabilities f_ij.
    let mut f = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let fij = kernel.eval(
                x.row(i).as_slice().expect("latent rows are contiguous"),
                x.row(j).as_slice().expect("latent rows are contiguous"),
            );
            f[[i, j]] = fij;
            f[[j, i]] = fij;
        }
    }

    // Margin 1: realized signed degrees against their conditional means.
    let mut min_degree_dev = f64::INFINITY;
    let mut cond_degree = vec![0.0; n];
    for i in 0..n {
        let mut e = 0.0;
        for j in 0..n {
            if j != i {
                e += f[[i, j]] * (signs[i] * signs[j]) as f64;
            }
        }
        cond_degree[i] = e;
        min_degree_dev = min_degree_dev.min(degrees[i] as f64 - e);
    }
    let degree_margin = threshold + min_degree_dev;

    // Margin 2: largest eigenvalue of A - E[A | X].
    let mut dev = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dev[[i, j]] = a[[i, j]] as f64 - f[[i, j]];
            }
        }
    }
    let eigs = linalg::eigvalsh(&dev)?;
    let adjacency_margin = threshold - eigs[eigs.len() - 1];

    // Margin 3: both matrices are diagonal, so the spectral norm of the
    // difference is the largest absolute entry.
    let expected_diag = nf * p * (1.0 - q) / 2.0 - p;
    let drift = cond_degree
        .iter()
        .map(|&e| (e - expected_diag).abs())
        .fold(0.0, f64::max);
    let expected_degree_margin = threshold - drift;

    // Margin 4: spectral norm of E[A | X] - E[A].
    let mut dev = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let expected =
                    0.5 * p * (1.0 + q) + 0.5 * p * (1.0 - q) * (signs[i] * signs[j]) as f64;
                dev[[i, j]] = f[[i, j]] - expected;
            }
        }
    }
    let expected_adjacency_margin = threshold - linalg::spectral_norm(&dev)?;

    let all_positive = degree_margin > 0.0
        && adjacency_margin > 0.0
        && expected_degree_margin > 0.0
        && expected_adjacency_margin > 0.0;
    Ok(Some(ConcentrationMargins {
        threshold,
        degree_margin,
        adjacency_margin,
        expected_degree_margin,
        expected_adjacency_margin,
        all_positive,
    }))
}

/// Closed form for the second-smallest eigenvalue of the expectation matrix
/// 2 E[D] - 2 E[A] + 11^T, which equals n p (1 - q) whenever p(1+q) <= 1.
/// The matrix n p(1-q) I + (1 - p(1+q)) 11^T - p(1-q) y*y*^T is built
/// explicitly (canonical balanced labels) and its spectrum checked
/// numerically as a self-test of the closed forms.
pub fn expected_matrix_lambda2(n: usize, moments: &GaussianMoments) -> Result<ExpectedLambda2> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "n must be even and at least 2, got {n}"
        )));
    }
    let p = moments.p;
    let q = moments.q;
    let nf = n as f64;
    let claimed = nf * p * (1.0 - q);
    let precondition_ok = p * (1.0 + q) <= 1.0;

    let ones_coeff = 1.0 - p * (1.0 + q);
    let planted_coeff = p * (1.0 - q);
    let mut m = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        let yi = if i < n / 2 { 1.0 } else { -1.0 };
        for j in 0..n {
            let yj = if j < n / 2 { 1.0 } else { -1.0 };
            m[[i, j]] = ones_coeff - planted_coeff * yi * yj;
        }
        m[[i, i]] += claimed;
    }
    let eigs = linalg::eigvalsh(&m)?;
    let numeric = eigs[1];
    Ok(ExpectedLambda2 {
        claimed,
        numeric,
        agrees: (claimed - numeric).abs() <= 1e-8 * nf,
        precondition_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate, ModelParams};
    use crate::moments::closed_form;
    use approx::assert_abs_diff_eq;

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Array2<u8> {
        let mut a = Array2::<u8>::zeros((n, n));
        for &(i, j) in edges {
            a[[i, j]] = 1;
            a[[j, i]] = 1;
        }
        a
    }

    fn half_labels(n: usize) -> LabelVector {
        LabelVector::signs((0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect()).unwrap()
    }

    #[test]
    fn perfect_four_certificate() {
        let a = adjacency(4, &[(0, 1), (2, 3)]);
        let y = half_labels(4);
        let report = certify(&a, &y, None).unwrap();
        assert_eq!(report.degrees, vec![1, 1, 1, 1]);
        assert_abs_diff_eq!(report.lambda_min, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.lambda_2, 4.0, epsilon = 1e-12);
        assert!(report.psd);
        assert!(report.unique);
        assert!(report.gap_identity_ok);
        assert!(report.margins.is_none());
    }

    #[test]
    fn empty_graph_certificate() {
        let a = adjacency(6, &[]);
        let y = half_labels(6);
        let report = certify(&a, &y, None).unwrap();
        assert_eq!(report.degrees, vec![0; 6]);
        // S = 11^T: spectrum {0 x 5, 6}; optimal but not uniquely so.
        assert_abs_diff_eq!(report.lambda_min, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.lambda_2, 0.0, epsilon = 1e-12);
        assert!(report.psd);
        assert!(!report.unique);
        assert!(report.gap_identity_ok);
    }

    #[test]
    fn complete_graph_certificate() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .collect();
        let a = adjacency(4, &edges);
        let y = half_labels(4);
        let report = certify(&a, &y, None).unwrap();
        // Each node: 1 within-edge, 2 cross-edges.
        assert_eq!(report.degrees, vec![-1, -1, -1, -1]);
        // S = -11^T: spectrum {-4, 0, 0, 0}.
        assert_abs_diff_eq!(report.lambda_min, -4.0, epsilon = 1e-12);
        assert!(!report.psd);
        assert!(!report.unique);
        assert!(report.gap_identity_ok);
    }

    #[test]
    fn planted_labels_always_in_kernel() {
        let params = ModelParams::new(40, 2, 1.0, 0.2).unwrap();
        let instance = generate(&params, 7).unwrap();
        let degrees = signed_degrees(&instance.adjacency, &instance.labels).unwrap();
        let signs = instance.labels.as_slice();
        let n = 40;
        // (S y*)_i = 2 d_i y*_i - 2 (A y*)_i + sum(y*) = 0 exactly.
        for i in 0..n {
            let mut ay = 0i64;
            for j in 0..n {
                if instance.adjacency[[i, j]] == 1 {
                    ay += signs[j] as i64;
                }
            }
            let sy = 2 * degrees[i] * signs[i] as i64 - 2 * ay;
            assert_eq!(sy, 0);
        }
    }

    #[test]
    fn gap_identity_on_generated_instances() {
        for seed in [1u64, 2, 3, 4, 5] {
            let params = ModelParams::new(20, 2, 0.8, 0.3).unwrap();
            let instance = generate(&params, seed).unwrap();
            let report = certify(&instance.adjacency, &instance.labels, None).unwrap();
            assert!(report.gap_identity_ok);
        }
    }

    #[test]
    fn rejects_unbalanced_or_mismatched_labels() {
        let a = adjacency(4, &[(0, 1)]);
        let unbalanced = LabelVector::signs(vec![1, 1, 1, -1]).unwrap();
        assert!(certify(&a, &unbalanced, None).is_err());
        let short = LabelVector::signs(vec![1, -1]).unwrap();
        assert!(certify(&a, &short, None).is_err());
        assert!(certify(&a, &half_labels(4), Some(0.0)).is_err());
    }

    #[test]
    fn margins_none_without_latents() {
        let a = adjacency(4, &[(0, 1), (2, 3)]);
        let m = closed_form(2, 1.0, 0.3).unwrap();
        let out = concentration_margins(
            &a,
            None,
            &Kernel::SquaredExponential,
            &half_labels(4),
            &m,
        )
        .unwrap();
        assert!(out.is_none());
    }

    #[test]
    fn margins_approach_threshold_for_tiny_sigma() {
        // Nearly deterministic latents: every deviation term vanishes and
        // all four margins sit at the threshold np(1-q)/8.
        let params = ModelParams::new(20, 2, 3.0, 1e-6).unwrap();
        let instance = generate(&params, 11).unwrap();
        let m = closed_form(2, 3.0, 1e-6).unwrap();
        let margins = concentration_margins(
            &instance.adjacency,
            Some(&instance.latents),
            &params.kernel,
            &instance.labels,
            &m,
        )
        .unwrap()
        .unwrap();
        let t = margins.threshold;
        assert_abs_diff_eq!(t, 20.0 * m.p * (1.0 - m.q) / 8.0, epsilon = 1e-15);
        assert!(t > 0.0);
        for v in [
            margins.degree_margin,
            margins.adjacency_margin,
            margins.expected_degree_margin,
            margins.expected_adjacency_margin,
        ] {
            assert_abs_diff_eq!(v, t, epsilon = 1e-3);
        }
        assert!(margins.all_positive);
    }

    #[test]
    fn positive_margins_imply_unique_certificate() {
        // Well-separated regime; checks the sufficiency direction on a
        // concrete instance.
        let params = ModelParams::new(100, 2, 1.0, 0.1).unwrap();
        let instance = generate(&params, 23).unwrap();
        let m = closed_form(2, 1.0, 0.1).unwrap();
        let margins = concentration_margins(
            &instance.adjacency,
            Some(&instance.latents),
            &params.kernel,
            &instance.labels,
            &m,
        )
        .unwrap()
        .unwrap();
        if margins.all_positive {
            let report = certify(&instance.adjacency, &instance.labels, None).unwrap();
            assert!(report.unique, "margins positive but certificate not unique");
        } else {
            // The margins are sufficient, not necessary; this instance just
            // doesn't exercise the implication. Keep the test honest.
            eprintln!("margins not all positive on this draw: {margins:?}");
        }
    }

    #[test]
    fn expected_lambda2_fixtures() {
        // q = 1: the closed form collapses to zero.
        let mut m = closed_form(2, 0.0, 0.3).unwrap();
        assert_eq!(m.q, 1.0);
        let out = expected_matrix_lambda2(50, &m).unwrap();
        assert_eq!(out.claimed, 0.0);
        assert!(out.agrees, "numeric {} vs 0", out.numeric);

        // n=100, p=0.5, q=0.2 -> 40.
        m.p = 0.5;
        m.q = 0.2;
        let out = expected_matrix_lambda2(100, &m).unwrap();
        assert_abs_diff_eq!(out.claimed, 40.0, epsilon = 1e-12);
        assert!(out.precondition_ok);
        assert!(out.agrees, "numeric {} vs claimed 40", out.numeric);

        // Boundary p(1+q) = 1: the all-ones eigenvalue ties the bulk.
        m.p = 0.8;
        m.q = 0.25;
        let out = expected_matrix_lambda2(60, &m).unwrap();
        assert!(out.precondition_ok);
        assert!(out.agrees);

        // Strict violation: the all-ones direction drops below the bulk and
        // the closed form no longer matches.
        m.p = 0.9;
        m.q = 0.5;
        let out = expected_matrix_lambda2(40, &m).unwrap();
        assert!(!out.precondition_ok);
        assert!(!out.agrees);
        // Numeric lambda_2 is then n(1 - 2pq).
        assert_abs_diff_eq!(out.numeric, 40.0 * (1.0 - 0.9), epsilon = 1e-8);
    }

    #[test]
    fn expected_lambda2_grid_agrees() {
        let mut m = closed_form(2, 1.0, 0.3).unwrap();
        for n in [10usize, 50, 200] {
            for (p, q) in [(0.3, 0.1), (0.5, 0.2), (0.6, 0.5), (0.2, 0.9)] {
                m.p = p;
                m.q = q;
                assert!(p * (1.0 + q) <= 1.0);
                let out = expected_matrix_lambda2(n, &m).unwrap();
                assert!(out.agrees, "disagrees at n={n}, p={p}, q={q}");
            }
        }
    }

    #[test]
    fn expected_lambda2_rejects_odd_n() {
        let m = closed_form(2, 1.0, 0.3).unwrap();
        assert!(expected_matrix_lambda2(7, &m).is_err());
    }

    #[test]
    fn degree_matrix_is_diagonal() {
        let a = adjacency(4, &[(0, 1), (2, 3), (0, 2)]);
        let y = half_labels(4);
        let d = degree_matrix(&a, &y).unwrap();
        let degrees = signed_degrees(&a, &y).unwrap();
        assert_eq!(degrees, vec![0, 1, 0, 1]);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { degrees[i] as f64 } else { 0.0 };
                assert_eq!(d[[i, j]], expect);
            }
        }
    }

    #[test]
    fn margins_reference_instance() {
        // Deterministic regression point; values recorded from the first
        // run of this pipeline and held fixed since.
        let params = ModelParams::new(300, 2, 1.0, 0.1).unwrap();
        let instance = generate(&params, 42).unwrap();
        let m = closed_form(2, 1.0, 0.1).unwrap();
        let margins = concentration_margins(
            &instance.adjacency,
            Some(&instance.latents),
            &params.kernel,
            &instance.labels,
            &m,
        )
        .unwrap()
        .unwrap();
        // Threshold is closed-form: 300 * p * (1-q) / 8.
        assert_abs_diff_eq!(
            margins.threshold,
            300.0 * m.p * (1.0 - m.q) / 8.0,
            epsilon = 1e-12
        );
        // Frozen values from the first run of this pipeline; any drift means
        // the generator, kernel, or margin arithmetic changed behavior.
        assert_abs_diff_eq!(margins.degree_margin, 26.41589984285814, epsilon = 1e-9);
        assert_abs_diff_eq!(margins.adjacency_margin, 28.77341594328474, epsilon = 1e-9);
        assert_abs_diff_eq!(
            margins.expected_degree_margin,
            10.996309007822248,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            margins.expected_adjacency_margin,
            31.222108826892306,
            epsilon = 1e-9
        );
        assert!(margins.all_positive);
    }
}
