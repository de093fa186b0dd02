//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fixed-point binary precision of the erfcx oracle.
const BITS: u64 = 640;

fn one() -> BigInt {
    BigInt::one() << BITS
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS
}

fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << BITS) / b
}

/// Exact fixed-point image of a finite non-negative double.
fn from_f64(x: f64) -> BigInt {
    assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let (mant, e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    let shift = BITS as i64 + e;
    assert!(shift >= 0, "argument too small for the fixed-point oracle");
    BigInt::from(mant) << shift as u64
}

fn to_f64(a: &BigInt) -> f64 {
    // keep 60 significant bits, then scale
    let len = a.bits() as i64;
    let drop = (len - 60).max(0);
    let top = (a >> drop as u64).to_f64().unwrap();
    top * 2f64.powi((drop - BITS as i64) as i32)
}

fn atan_inv(k: u64) -> BigInt {
    // atan(1/k) = Σ (-1)^n / ((2n+1) k^(2n+1))
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = one() / &k;
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        n += 1;
    }
    sum
}

fn pi() -> BigInt {
    BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239)
}

fn sqrt(a: &BigInt) -> BigInt {
    (a << BITS).sqrt()
}

fn exp(x: &BigInt) -> BigInt {
    let mut term = one();
    let mut sum = one();
    let mut n = 1u64;
    while !term.is_zero() {
        term = mul(&term, x) / BigInt::from(n);
        sum += &term;
        n += 1;
    }
    sum
}

/// exp(x²)·erfc(x) from the Maclaurin series of erf (x ≤ 6) or the
/// asymptotic expansion (x > 6), in 640-bit fixed point.
pub fn erfcx_reference(x: f64) -> f64 {
    let xf = from_f64(x);
    let sqrt_pi = sqrt(&pi());
    if x <= 6.0 {
        // erf(x) = 2/√π Σ (-1)^n x^(2n+1) / (n! (2n+1))
        let x2 = mul(&xf, &xf);
        let mut power = xf.clone();
        let mut sum = BigInt::zero();
        let mut n = 0u64;
        loop {
            let term = &power / BigInt::from(2 * n + 1);
            if term.is_zero() {
                break;
            }
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            n += 1;
            power = mul(&power, &x2) / BigInt::from(n);
        }
        let erf = div(&(sum * 2), &sqrt_pi);
        to_f64(&mul(&exp(&x2), &(one() - erf)))
    } else {
        // 1/(x√π) Σ (-1)^n (2n-1)!! / (2x²)^n, summed to the smallest term
        let two_x2 = mul(&xf, &xf) * 2;
        let mut term = one();
        let mut sum = one();
        let mut n = 1u64;
        loop {
            let next = div(&(&term * BigInt::from(2 * n - 1)), &two_x2);
            if next.abs() >= term.abs() || next.is_zero() {
                break;
            }
            term = -next;
            sum += &term;
            n += 1;
        }
        to_f64(&div(&sum, &mul(&xf, &sqrt_pi)))
    }
}

/// Grid of 1000 points: zero plus log-spaced points up to 10⁶.
pub fn erfcx_test_points() -> Vec<f64> {
    let mut v = vec![0.0];
    let (lo, hi) = (-8.0f64, 6.0f64);
    for i in 0..999 {
        v.push(10f64.powf(lo + (hi - lo) * i as f64 / 998.0));
    }
    v
}

/// Lowest `count` eigenvalues of −½d²/du² + V on [−L, L] with hard walls,
/// from a dense five-point finite-difference matrix.
pub fn dense_levels(v: impl Fn(f64) -> f64, half_width: f64, step: f64, count: usize) -> Vec<f64> {
    let n = (2.0 * half_width / step).round() as usize - 1;
    let h2 = step * step;
    let mut m = DMatrix::<f64>::zeros(n, n);
    let c = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
    for i in 0..n {
        let u = -half_width + (i + 1) as f64 * step;
        for (k, ck) in c.iter().enumerate() {
            let j = i as isize + k as isize - 2;
            if j >= 0 && (j as usize) < n {
                m[(i, j as usize)] += -0.5 * ck / h2;
            }
        }
        m[(i, i)] += v(u);
    }
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(count);
    e
}

/// Fourth-order Richardson combination of dense levels at h and h/2.
pub fn dense_levels_extrapolated(
    v: impl Fn(f64) -> f64 + Copy,
    half_width: f64,
    step: f64,
    count: usize,
) -> Vec<f64> {
    let coarse = dense_levels(v, half_width, step, count);
    let fine = dense_levels(v, half_width, step / 2.0, count);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| f + (f - c) / 15.0)
        .collect()
}

/// Classical RK4 for i dψ/dτ = Hψ with real symmetric H.
pub fn rk4_evolve(h: &[[f64; 4]; 4], psi0: [Complex64; 4], times: &[f64], dt: f64) -> Vec<[Complex64; 4]> {
    let deriv = |psi: &[Complex64; 4]| {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                s += psi[j] * h[i][j];
            }
            out[i] = Complex64::new(0.0, -1.0) * s;
        }
        out
    };
    let axpy = |a: &[Complex64; 4], k: &[Complex64; 4], s: f64| {
        let mut out = *a;
        for i in 0..4 {
            out[i] += k[i] * s;
        }
        out
    };
    let mut psi = psi0;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target - 1e-15 {
            let step = dt.min(target - t);
            let k1 = deriv(&psi);
            let k2 = deriv(&axpy(&psi, &k1, step / 2.0));
            let k3 = deriv(&axpy(&psi, &k2, step / 2.0));
            let k4 = deriv(&axpy(&psi, &k3, step));
            for i in 0..4 {
                psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (step / 6.0);
            }
            t += step;
        }
        out.push(psi);
    }
    out
}

/// Soft-Coulomb double well with minima at ±a.
pub fn soft_double_well(a: f64) -> impl Fn(f64) -> f64 + Copy + Sync {
    move |u: f64| -1.0 / ((u - a).powi(2) + 1.0).sqrt() - 1.0 / ((u + a).powi(2) + 1.0).sqrt()
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
