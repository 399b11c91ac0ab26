//! Brute-force numerical oracles for the pa-fbl test suites.
//!
//! Everything here is deliberately slow and simple: adaptive Simpson
//! quadrature, trapezoid sums of integral representations, plain series,
//! grid scans and bisection. Nothing in this crate may call into `pa-fbl`.

use std::f64::consts::PI;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
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
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // Pre-split so that narrow features are not stepped over.
    let pieces = 64;
    let h = (b - a) / f64::from(pieces);
    let mut total = 0.0;
    for i in 0..pieces {
        let lo = a + h * f64::from(i);
        let hi = if i + 1 == pieces { b } else { lo + h };
        let fa = f(lo);
        let fb = f(hi);
        let fm = f(0.5 * (lo + hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += recurse(&f, lo, hi, fa, fm, fb, whole, tol / f64::from(pieces), 48);
    }
    total
}

/// Two-pass quadrature: a coarse estimate fixes a tolerance relative to the
/// magnitude of the integral, which keeps deep tails accurate.
pub fn relative_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let coarse = adaptive_simpson(&f, a, b, 1e-8);
    let tol = (coarse.abs() * rel).max(1e-300);
    adaptive_simpson(&f, a, b, tol)
}

/// Trapezoid rule over one period of a smooth periodic integrand; converges
/// geometrically in `n`.
pub fn periodic_mean<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(h * k as f64)).sum::<f64>() / n as f64
}

/// J₀(x) = (1/π)∫₀^π cos(x sin θ) dθ.
pub fn bessel_j0_integral(x: f64) -> f64 {
    let n = 64 + 2 * x.abs().ceil() as usize;
    periodic_mean(|t| (x * t.sin()).cos(), n)
}

/// e^{−x} I₀(x) = (1/π)∫₀^π e^{x(cos θ − 1)} dθ.
pub fn bessel_i0_scaled_integral(x: f64) -> f64 {
    // even integrand: trapezoid on [0, π] with endpoint weights ½
    let n = 32 + (12.0 * x.abs().sqrt()).ceil() as usize;
    let h = PI / n as f64;
    let f = |t: f64| (x * (t.cos() - 1.0)).exp();
    let inner: f64 = (1..n).map(|k| f(h * k as f64)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) / n as f64
}

/// Plain f64 power series of J₀ with a fixed number of terms.
pub fn bessel_j0_series(x: f64, terms: u32) -> f64 {
    let q = -0.25 * x * x;
    let mut t = 1.0;
    let mut s = 1.0;
    for m in 1..terms {
        t *= q / f64::from(m * m);
        s += t;
    }
    s
}

/// Plain f64 power series of I₀.
pub fn bessel_i0_series(x: f64, terms: u32) -> f64 {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut s = 1.0;
    for m in 1..terms {
        t *= q / f64::from(m * m);
        s += t;
    }
    s
}

fn rician_density(s: f64, x: f64) -> f64 {
    // x e^{-(x²+s²)/2} I₀(sx) = x e^{-(x-s)²/2} · e^{-sx} I₀(sx)
    x * (-0.5 * (x - s) * (x - s)).exp() * bessel_i0_scaled_integral(s * x)
}

/// Q₁(s, ρ) = ∫_ρ^∞ x e^{−(x²+s²)/2} I₀(sx) dx by quadrature.
pub fn marcum_q1_quadrature(s: f64, rho: f64) -> f64 {
    let top = rho.max(s) + 40.0;
    if rho < s {
        relative_simpson(|x| rician_density(s, x), rho, s, 1e-12)
            + relative_simpson(|x| rician_density(s, x), s, top, 1e-12)
    } else {
        relative_simpson(|x| rician_density(s, x), rho, top, 1e-12)
    }
}

/// 1 − Q₁(s, ρ) = ∫₀^ρ x e^{−(x²+s²)/2} I₀(sx) dx by quadrature.
pub fn marcum_cdf_quadrature(s: f64, rho: f64) -> f64 {
    relative_simpson(|x| rician_density(s, x), 0.0, rho, 1e-12)
}

/// Q(x) = ∫ₓ^∞ φ(t) dt by quadrature.
pub fn gaussian_tail_quadrature(x: f64) -> f64 {
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
    relative_simpson(phi, x, x.max(0.0) + 40.0, 1e-13)
}

/// Newton-form fixed-point iteration w ← (w² + y e^{−w}) / (1 + w).
pub fn lambert_w_fixed_point(y: f64) -> f64 {
    let mut w = if y > 1.0 { y.ln() } else { 0.5 };
    for _ in 0..500 {
        w = (w * w + y * (-w).exp()) / (1.0 + w);
    }
    w
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Uniform-grid argmax of `f` on `[lo, hi]` with `n` points.
pub fn grid_argmax<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("NaN in sample"));
    let n = samples.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Number of strict local maxima of a sampled curve (plateaus count once).
pub fn count_local_maxima(values: &[f64]) -> usize {
    let mut count = 0;
    let mut rising = true;
    for w in values.windows(2) {
        if w[1] > w[0] {
            rising = true;
        } else if w[1] < w[0] {
            if rising {
                count += 1;
            }
            rising = false;
        }
    }
    if rising && values.len() > 1 {
        count += 1;
    }
    count
}

/// Principal square root of a symmetric 2×2 matrix by Denman–Beavers iteration.
pub fn sqrtm_2x2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    fn inv(a: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
    }
    let mut y = m;
    let mut z = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..100 {
        let yi = inv(y);
        let zi = inv(z);
        let mut ny = [[0.0; 2]; 2];
        let mut nz = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                ny[i][j] = 0.5 * (y[i][j] + zi[i][j]);
                nz[i][j] = 0.5 * (z[i][j] + yi[i][j]);
            }
        }
        y = ny;
        z = nz;
    }
    y
}

/// Conditional variance of the second coordinate given the first for a
/// zero-mean pair whose covariance is S·Sᵀ.
pub fn conditional_variance_from_factor(s: [[f64; 2]; 2]) -> f64 {
    let c00 = s[0][0] * s[0][0] + s[0][1] * s[0][1];
    let c01 = s[0][0] * s[1][0] + s[0][1] * s[1][1];
    let c11 = s[1][0] * s[1][0] + s[1][1] * s[1][1];
    c11 - c01 * c01 / c00
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_gaussian() {
        let v = adaptive_simpson(|x| (-x * x).exp(), -10.0, 10.0, 1e-14);
        assert!((v - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn integral_representations_agree_with_series() {
        for &x in &[0.3, 1.0, 4.0, 9.0] {
            assert!((bessel_j0_integral(x) - bessel_j0_series(x, 80)).abs() < 1e-13);
            let i0e = bessel_i0_series(x, 120) * (-x).exp();
            assert!((bessel_i0_scaled_integral(x) - i0e).abs() < 1e-14);
        }
    }

    #[test]
    fn sqrtm_squares_back() {
        let m = [[1.0, 0.8], [0.8, 1.0]];
        let r = sqrtm_2x2(m);
        let sq00 = r[0][0] * r[0][0] + r[0][1] * r[1][0];
        let sq01 = r[0][0] * r[0][1] + r[0][1] * r[1][1];
        assert!((sq00 - 1.0).abs() < 1e-14 && (sq01 - 0.8).abs() < 1e-14);
    }

    #[test]
    fn local_maxima_counter() {
        assert_eq!(count_local_maxima(&[0.0, 1.0, 2.0, 1.0, 0.0]), 1);
        assert_eq!(count_local_maxima(&[0.0, 1.0, 0.0, 1.0, 0.0]), 2);
        assert_eq!(count_local_maxima(&[3.0, 2.0, 1.0]), 1);
    }
}
