/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)` below `x`
/// (Sturm sequence via the LDLᵀ pivots).
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let piv = if q == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / piv;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues, ascending, by bisection on the Sturm count.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    let k = k.min(n);
    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut out = Vec::with_capacity(k);
    let mut left = lo;
    for idx in 0..k {
        // smallest x with count_below(x) > idx
        let (mut a, mut b) = (left, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if count_below(diag, off, mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 4.0 * f64::EPSILON * scale {
                break;
            }
        }
        let ev = 0.5 * (a + b);
        out.push(ev);
        left = a;
    }
    out
}
