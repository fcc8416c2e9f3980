//! Small numeric helpers: empirical quantiles, two-sample Kolmogorov–Smirnov
//! distance, symmetric eigenvalues via Jacobi rotations, and the standard
//! normal CDF.

/// Upper empirical quantile by the conservative order-statistic convention:
/// the `⌈(1−alpha)·B⌉`-th smallest of `values` (1-indexed), no interpolation.
pub fn upper_quantile(values: &[f64], alpha: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of empty sample");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha outside (0,1)");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
    let b = sorted.len();
    let rank = ((1.0 - alpha) * b as f64).ceil() as usize;
    sorted[rank.clamp(1, b) - 1]
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_t |F1(t) − F2(t)|`.
pub fn two_sample_ks(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("non-NaN samples"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("non-NaN samples"));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < n && j < m {
        let t = a[i].min(b[j]);
        while i < n && a[i] <= t {
            i += 1;
        }
        while j < m && b[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    sup.max(1e-300)
}

/// Asymptotic two-sample KS critical value at level `alpha`:
/// `c(α)·√((n+m)/(n·m))` with `c(α) = √(−ln(α/2)/2)`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Eigenvalues of a symmetric matrix (row-major, `dim × dim`) by the cyclic
/// Jacobi method, returned in ascending order. Plenty for the small
/// boundary-covariance matrices this crate certifies.
pub fn symmetric_eigenvalues(matrix: &[f64], dim: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), dim * dim);
    let mut a = matrix.to_vec();
    if dim == 0 {
        return Vec::new();
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&a, dim)) {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..dim {
                    let aip = a[i * dim + p];
                    let aiq = a[i * dim + q];
                    a[i * dim + p] = c * aip - s * aiq;
                    a[i * dim + q] = s * aip + c * aiq;
                }
                for i in 0..dim {
                    let api = a[p * dim + i];
                    let aqi = a[q * dim + i];
                    a[p * dim + i] = c * api - s * aqi;
                    a[q * dim + i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}

fn frobenius(a: &[f64], dim: usize) -> f64 {
    a.iter().take(dim * dim).map(|x| x * x).sum::<f64>().sqrt()
}

/// Standard normal CDF via `erfc`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Complementary error function, rational approximation with |error| < 1.2e-7
/// uniformly. Accurate enough for every CDF comparison in this crate (exact
/// reference values in tests are frozen from high-precision evaluations).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let tau = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587
                                        + t * (-0.82215223 + t * 0.17087277)))))))))
        .exp();
    if x >= 0.0 {
        tau
    } else {
        2.0 - tau
    }
}
