//! Exact binomial (Clopper–Pearson) confidence intervals.

use statrs::function::beta::beta_reg;

/// Two-sided Clopper–Pearson interval for `hits` successes in `trials`
/// Bernoulli trials at the given confidence level.
///
/// The lower bound solves `P[Bin(n, p) >= k] = alpha/2` and the upper bound
/// `P[Bin(n, p) <= k] = alpha/2`, i.e. quantiles of `Beta(k, n - k + 1)` and
/// `Beta(k + 1, n - k)`. The ends are pinned to 0 and 1 when `k = 0` or
/// `k = n`, where the other end has a closed form.
pub fn clopper_pearson(hits: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials);
    let half = 0.5 * (1.0 - confidence);
    let (k, n) = (hits as f64, trials as f64);
    let low = match hits {
        0 => 0.0,
        h if h == trials => (half.ln() / n).exp(),
        _ => beta_quantile(k, n - k + 1.0, half),
    };
    let high = match hits {
        h if h == trials => 1.0,
        0 => -(half.ln() / n).exp_m1(),
        // Upper tail of Beta(k + 1, n - k) is the lower tail of its mirror.
        _ => 1.0 - beta_quantile(n - k, k + 1.0, half),
    };
    let p = k / n;
    (low.min(p), high.max(p))
}

/// `x` with `I_x(a, b) = q`, by bisection. The regularized incomplete beta
/// function is monotone in `x`, and bisection on it keeps full relative
/// precision even for quantiles close to 0.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
