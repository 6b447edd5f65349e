//! Shared numerical building blocks: stable log-sum-exp and sech, deterministic
//! pairwise summation, periodic trapezoid quadrature with grid doubling,
//! golden-section maximization, adaptive Simpson, and log-log regression.

/// log(sum_i exp(x_i)), stable under large positive or negative arguments.
///
/// `-inf` entries are allowed and behave as exp(-inf) = 0. Returns `-inf`
/// when every entry is `-inf` or the slice is empty.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    for &x in xs {
        if x != m {
            sum += (x - m).exp();
        }
    }
    // count of entries equal to the max (usually one)
    let ties = xs.iter().filter(|&&x| x == m).count() as f64;
    m + (sum + (ties - 1.0)).ln_1p()
}

/// sech(u) = 2 e^{-|u|} / (1 + e^{-2|u|}); never overflows.
pub fn sech(u: f64) -> f64 {
    let a = (-u.abs()).exp();
    2.0 * a / (1.0 + a * a)
}

/// Fixed-order pairwise summation. Deterministic regardless of thread count
/// (callers hand over a fully materialized slice) and more accurate than a
/// naive left-to-right sum for long vectors.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Integral over [0, 2pi) of a periodic function by the n-point trapezoid rule
/// (equal to the midpoint/rectangle rule for periodic integrands).
pub fn periodic_trapezoid(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = std::f64::consts::TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
    pairwise_sum(&vals) * h
}

/// Periodic trapezoid rule with grid doubling until the relative change drops
/// below `rel_tol`, starting from `n0` points and capping at `n_cap`.
/// Previously computed samples are reused on each doubling.
pub fn periodic_trapezoid_converged(
    f: impl Fn(f64) -> f64,
    n0: usize,
    rel_tol: f64,
    n_cap: usize,
) -> f64 {
    let mut n = n0.max(2);
    let h = std::f64::consts::TAU / n as f64;
    let mut vals: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
    let mut integral = pairwise_sum(&vals) * h;
    while n < n_cap {
        // interleave midpoints of the current grid
        let h2 = std::f64::consts::TAU / (2 * n) as f64;
        let mids: Vec<f64> = (0..n).map(|j| f((2 * j + 1) as f64 * h2)).collect();
        let mut merged = Vec::with_capacity(2 * n);
        for j in 0..n {
            merged.push(vals[j]);
            merged.push(mids[j]);
        }
        n *= 2;
        vals = merged;
        let next = pairwise_sum(&vals) * h2;
        let scale = next.abs().max(integral.abs()).max(f64::MIN_POSITIVE);
        let done = (next - integral).abs() <= rel_tol * scale;
        integral = next;
        if done {
            break;
        }
    }
    integral
}

/// Golden-section search for the maximum of `f` on [a, b].
///
/// Iterates until the bracket collapses to floating-point resolution (or
/// `max_iter`), so even razor-thin peaks inside the bracket are located to
/// the last representable angle. Returns (argmax, max).
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, max_iter: usize) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (a, b);
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if x1 >= x2 {
            break; // bracket exhausted in double precision
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fb, fm, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_recurse(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
            + simpson_recurse(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Least-squares line fit y = slope * x + intercept.
/// Returns (slope, intercept, rms residual).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "linear fit needs at least two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - slope * x - intercept;
        ss += r * r;
    }
    (slope, intercept, (ss / n).sqrt())
}

/// Geometric radius grid from `r_min` up to (and including a point at or just
/// below) `r_max`, with `points_per_decade` samples per decade.
pub fn radius_grid(r_min: f64, r_max: f64, points_per_decade: usize) -> Vec<f64> {
    assert!(r_min > 0.0 && r_max > r_min);
    let factor = 10f64.powf(1.0 / points_per_decade.max(1) as f64);
    let mut radii = Vec::new();
    let mut r = r_min;
    while r < r_max * (1.0 - 1e-12) {
        radii.push(r);
        r *= factor;
    }
    radii.push(r_max);
    radii
}

/// Indices of the top decade (r >= max_radius / 10) of a radius grid.
pub fn top_decade(radii: &[f64]) -> std::ops::Range<usize> {
    let r_top = radii.last().copied().unwrap_or(1.0);
    let start = radii.partition_point(|&r| r < r_top / 10.0);
    start..radii.len()
}
