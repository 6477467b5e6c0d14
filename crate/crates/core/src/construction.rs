//! Gaussian-approximation density evolution for the BPSK/AWGN channel.
//!
//! Under the all-zero codeword every LLR is modelled as `N(m, 2m)`. The
//! channel LLR mean is `2/σ²`; a variable-type combination doubles the mean
//! and a check-type combination maps `m` to `φ⁻¹(1 − (1 − φ(m))²)`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use crate::channel::ebn0_to_sigma2;
use crate::polar::PolarCode;
use crate::{Error, Result};

/// Threshold used in place of `log((1 − pe)/pe)` once `pe` drops below
/// [`PE_FLOOR`]. It is larger than any LLR a realistic block produces.
pub const TAU_CAP: f64 = 1400.0;

/// Smallest error probability a profile stores.
pub const PE_FLOOR: f64 = 1e-300;

/// Largest `n` accepted by [`ga_code`].
pub const MAX_N: u32 = 24;

/// Per-bit reliability figures for one code length and noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityProfile {
    /// `E[L(u_i)]` under the all-zero codeword.
    pub means: Vec<f64>,
    /// `P_e(u_i) = Q(sqrt(mean / 2))`, floored at [`PE_FLOOR`].
    pub pe: Vec<f64>,
    /// Splitting thresholds `log((1 − pe)/pe)`, capped at [`TAU_CAP`].
    pub tau: Vec<f64>,
    /// Noise variance the means were computed for, when known.
    pub design_sigma2: Option<f64>,
}

impl ReliabilityProfile {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Copy of the profile with every threshold replaced by `tau`.
    pub fn with_uniform_tau(&self, tau: f64) -> Self {
        Self {
            tau: vec![tau; self.len()],
            ..self.clone()
        }
    }

    /// Copy of the profile with every threshold multiplied by `factor`.
    pub fn with_scaled_tau(&self, factor: f64) -> Self {
        Self {
            tau: self.tau.iter().map(|t| t * factor).collect(),
            ..self.clone()
        }
    }
}

/// `Q(x) = P(Z > x)` for a standard normal `Z`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Inverse of [`q_function`] by bisection to `1e-12`.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            name: "probability",
            value: p,
            domain: "(0, 1)",
        });
    }
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if q_function(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const GL_POINTS: usize = 16;
const GL_PANELS: usize = 32;

/// 16-point Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64); GL_POINTS] {
    static RULE: OnceLock<[(f64, f64); GL_POINTS]> = OnceLock::new();
    RULE.get_or_init(|| {
        let m = GL_POINTS;
        let mut rule = [(0.0, 0.0); GL_POINTS];
        for (k, slot) in rule.iter_mut().enumerate() {
            let mut x = (PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=m {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// `∫_0^W sech(u/2) exp(−u²/(4x)) du` with `W` covering both factors' mass.
fn sech_gauss_integral(x: f64) -> f64 {
    let width = (12.0 * (2.0 * x).sqrt()).min(80.0);
    let panel = width / GL_PANELS as f64;
    let rule = gauss_legendre();
    let mut total = 0.0;
    for p in 0..GL_PANELS {
        let mid = (p as f64 + 0.5) * panel;
        let half = 0.5 * panel;
        for &(node, weight) in rule {
            let u = mid + half * node;
            total += weight * half * (-u * u / (4.0 * x)).exp() / (0.5 * u).cosh();
        }
    }
    total
}

/// `ln φ(x)` for `x ≥ 0`.
///
/// Uses `φ(x) = e^{−x/4} (4πx)^{−1/2} ∫ sech(u/2) e^{−u²/(4x)} du`, which
/// follows from completing the square in `E[2/(1 + e^U)]`, `U ~ N(x, 2x)`.
pub(crate) fn ln_phi(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let integral = 2.0 * sech_gauss_integral(x);
    -0.25 * x - 0.5 * (4.0 * PI * x).ln() + integral.ln()
}

fn check_nonneg(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[0, inf)",
        })
    }
}

/// `φ(x) = 1 − E[tanh(U/2)]` for `U ~ N(x, 2x)`, `φ(0) = 1`.
pub fn phi(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(ln_phi(x).exp())
}

/// Inverse of [`phi`] by bisection on `x` to `1e-10` (relative above 1).
pub fn phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::Domain {
            name: "y",
            value: y,
            domain: "(0, 1]",
        });
    }
    Ok(phi_inv_ln(y.ln()))
}

/// Solves `ln φ(x) = target` for `target ≤ 0`.
pub(crate) fn phi_inv_ln(target: f64) -> f64 {
    if target >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 5000.0;
    while ln_phi(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean of the check-type combination of two messages with means `a, b ≥ 0`:
/// `φ⁻¹(1 − (1 − φ(a))(1 − φ(b)))`, evaluated in the log domain.
pub fn check_node_mean(a: f64, b: f64) -> f64 {
    let (la, lb) = (ln_phi(a), ln_phi(b));
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    // 1 − (1 − pa)(1 − pb) = p_hi (1 + p_lo/p_hi − p_lo)
    let target = hi + ((lo - hi).exp() - lo.exp()).ln_1p();
    phi_inv_ln(target)
}

/// `φ` extended to negative arguments through `φ(x) + φ(−x) = 2`.
pub fn phi_extended(x: f64) -> f64 {
    if x >= 0.0 {
        ln_phi(x).exp()
    } else {
        2.0 - ln_phi(-x).exp()
    }
}

/// Inverse of [`phi_extended`] on `(0, 2)`.
pub fn phi_inv_extended(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 2.0) {
        return Err(Error::Domain {
            name: "y",
            value: y,
            domain: "(0, 2)",
        });
    }
    if y <= 1.0 {
        phi_inv(y)
    } else {
        Ok(-phi_inv(2.0 - y)?)
    }
}

/// Check-type mean update for signed means.
pub fn check_node_mean_extended(a: f64, b: f64) -> Result<f64> {
    phi_inv_extended(1.0 - (1.0 - phi_extended(a)) * (1.0 - phi_extended(b)))
}

/// `E[L(u_i)]` for `i = 1..2^n` (returned 0-based) on a channel with noise
/// variance `sigma2`.
pub fn ga_means(n: u32, sigma2: f64) -> Result<Vec<f64>> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain {
            name: "sigma2",
            value: sigma2,
            domain: "(0, inf)",
        });
    }
    let mut means = vec![2.0 / sigma2];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * means.len());
        for &m in &means {
            next.push(check_node_mean(m, m));
            next.push(2.0 * m);
        }
        means = next;
    }
    Ok(means)
}

/// Fills error probabilities and thresholds for the given means.
pub fn build_profile(means: &[f64]) -> Result<ReliabilityProfile> {
    let mut pe = Vec::with_capacity(means.len());
    let mut tau = Vec::with_capacity(means.len());
    for &m in means {
        check_nonneg(m)?;
        let p = q_function((m / 2.0).sqrt());
        if p < PE_FLOOR {
            pe.push(PE_FLOOR);
            tau.push(TAU_CAP);
        } else {
            pe.push(p);
            tau.push((-p).ln_1p() - p.ln());
        }
    }
    Ok(ReliabilityProfile {
        means: means.to_vec(),
        pe,
        tau,
        design_sigma2: None,
    })
}

/// GA means plus the derived profile for a channel with variance `sigma2`.
pub fn reliability_profile(n: u32, sigma2: f64) -> Result<ReliabilityProfile> {
    let mut profile = build_profile(&ga_means(n, sigma2)?)?;
    profile.design_sigma2 = Some(sigma2);
    Ok(profile)
}

/// GA construction of an `(2^n, k)` code at the given design `Eb/N0`.
/// `rate_for_sigma` is the rate used to turn `Eb/N0` into `σ²`.
/// Returns the code and the profile it was built from.
pub fn ga_code(
    n: u32,
    k: usize,
    design_ebn0_db: f64,
    rate_for_sigma: f64,
) -> Result<(PolarCode, ReliabilityProfile)> {
    if n > MAX_N {
        return Err(Error::Domain {
            name: "n",
            value: f64::from(n),
            domain: "0..=24",
        });
    }
    let len = 1usize << n;
    if k == 0 || k > len {
        return Err(Error::DimensionOutOfRange { k, n: len });
    }
    let sigma2 = ebn0_to_sigma2(design_ebn0_db, rate_for_sigma)?;
    let profile = reliability_profile(n, sigma2)?;
    let code = PolarCode::new(select_frozen_set(&profile.means, k)?)?;
    Ok((code, profile))
}

/// Freezes all but the `k` positions with the largest means. On equal
/// means the smaller index is frozen first.
pub fn select_frozen_set(means: &[f64], k: usize) -> Result<Vec<bool>> {
    if k > means.len() {
        return Err(Error::DimensionOutOfRange {
            k,
            n: means.len(),
        });
    }
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(b.cmp(&a)));
    let mut mask = vec![true; means.len()];
    for &i in &order[..k] {
        mask[i] = false;
    }
    Ok(mask)
}

fn check_pe(pe: f64) -> Result<()> {
    if pe > 0.0 && pe < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "pe",
            value: pe,
            domain: "(0, 0.5)",
        })
    }
}

/// Probability that a bit with error probability `pe` is decided wrongly
/// without splitting: `Q(t + log(1/pe − 1)/(2t))`, `t = Q⁻¹(pe)`.
pub fn predicted_no_split_error(pe: f64) -> Result<f64> {
    check_pe(pe)?;
    let t = q_inv(pe)?;
    Ok(q_function(t + (1.0 / pe - 1.0).ln() / (2.0 * t)))
}

/// Probability that a bit is decided correctly without splitting:
/// `Q((log(1 − pe) − log pe − μ)/σ)` with `μ = 2t²`, `σ = sqrt(2μ)`.
pub fn predicted_no_split_correct(pe: f64) -> Result<f64> {
    check_pe(pe)?;
    let t = q_inv(pe)?;
    let mu = 2.0 * t * t;
    let sigma = (2.0 * mu).sqrt();
    Ok(q_function(((-pe).ln_1p() - pe.ln() - mu) / sigma))
}
