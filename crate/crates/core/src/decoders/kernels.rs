//! Scalar LLR arithmetic shared by all decoders. Natural logarithms.

/// `a ⊞ b = log((1 + e^{a+b}) / (e^a + e^b))`.
///
/// Evaluated as `sign(a) sign(b) min(|a|,|b|)` plus a bounded correction, so
/// the magnitude never exceeds `min(|a|, |b|)`.
pub fn boxplus(a: f64, b: f64) -> f64 {
    let (ma, mb) = (a.abs(), b.abs());
    let min = ma.min(mb);
    let mag = if min.is_infinite() {
        f64::INFINITY
    } else {
        let corr = (-(ma + mb)).exp().ln_1p() - (-(ma - mb).abs()).exp().ln_1p();
        (min + corr).clamp(0.0, min)
    };
    let sign = a.signum() * b.signum();
    sign * mag
}

/// `log(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Log-domain path metric step: `log P(û_1^i | y)` from `log P(û_1^{i−1} | y)`
/// and the LLR of `u_i`, for decision `bit`.
pub fn path_metric_update(log_metric: f64, llr: f64, bit: u8) -> f64 {
    let s = if bit == 0 { 1.0 } else { -1.0 };
    log_metric - softplus(-s * llr)
}

/// One level of the LLR recursion. With `partial_sums = None` returns the
/// check-type (odd index) LLRs `a_k ⊞ b_k`; with the left sibling's bits it
/// returns the variable-type (even index) LLRs `(1 − 2β_k) a_k + b_k`.
/// `a` and `b` are the two halves of `parent`.
pub fn llr_recurse(parent: &[f64], partial_sums: Option<&[u8]>) -> Vec<f64> {
    let mut child = vec![0.0; parent.len() / 2];
    match partial_sums {
        None => check_llrs(parent, &mut child),
        Some(bits) => variable_llrs(parent, bits, &mut child),
    }
    child
}

pub(crate) fn check_llrs(parent: &[f64], child: &mut [f64]) {
    let (a, b) = parent.split_at(child.len());
    for ((c, &x), &y) in child.iter_mut().zip(a).zip(b) {
        *c = boxplus(x, y);
    }
}

pub(crate) fn variable_llrs(parent: &[f64], left: &[u8], child: &mut [f64]) {
    let (a, b) = parent.split_at(child.len());
    for (((c, &x), &y), &bit) in child.iter_mut().zip(a).zip(b).zip(left) {
        *c = if bit == 0 { y + x } else { y - x };
    }
}

/// `Σ (1 − 2c_i) L_i`; maximised by the ML codeword.
pub fn correlation(codeword: &[u8], llrs: &[f64]) -> f64 {
    codeword
        .iter()
        .zip(llrs)
        .map(|(&c, &l)| if c == 0 { l } else { -l })
        .sum()
}

/// Hard decision: 1 iff the LLR is negative.
pub(crate) fn hard(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
