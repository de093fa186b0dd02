//! Scaled complementary error function.
//!
//! `erfcx(x) = exp(x²)·erfc(x)` evaluated directly from W. J. Cody's
//! rational approximations (Math. Comp. 23, 1969), without ever forming
//! `exp(x²)` for moderate or large arguments. The three intervals are
//! `[0, 0.46875]`, `(0.46875, 4]` and `(4, ∞)`; the last is a rational
//! function of `1/x²` around the asymptotic series and stays finite for
//! every representable `x`.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("erfcx argument must be non-negative and finite, got {0}")]
pub struct DomainError(pub f64);

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;
const SMALL: f64 = 0.468_75;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_156,
    377.485_237_685_302_021,
    3_209.377_589_138_469_47,
    0.185_777_706_184_603_153,
];
const B: [f64; 4] = [
    23.601_290_952_344_120_9,
    244.024_637_934_444_173,
    1_282.616_526_077_372_28,
    2_844.236_833_439_170_62,
];
const C: [f64; 9] = [
    0.564_188_496_988_670_089,
    8.883_149_794_388_375_94,
    66.119_190_637_141_629_5,
    298.635_138_197_400_131,
    881.952_221_241_769_09,
    1_712.047_612_634_070_58,
    2_051.078_377_826_071_47,
    1_230.339_354_797_997_25,
    2.153_115_354_744_038_46e-8,
];
const D: [f64; 8] = [
    15.744_926_110_709_834_7,
    117.693_950_891_312_499,
    537.181_101_862_009_858,
    1_621.389_574_566_690_19,
    3_290.799_235_733_459_63,
    4_362.619_090_143_247_16,
    3_439.367_674_143_721_64,
    1_230.339_354_803_749_42,
];
const P: [f64; 6] = [
    0.305_326_634_961_232_344,
    0.360_344_899_949_804_439,
    0.125_781_726_111_229_246,
    0.016_083_785_148_742_276_6,
    6.587_491_615_298_378_03e-4,
    0.016_315_387_137_302_097_8,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_42,
    1.872_952_849_923_460_47,
    0.527_905_102_951_428_412,
    0.060_518_341_312_441_319_1,
    0.002_335_204_976_268_691_85,
];

/// erf on [0, 0.46875] divided by x, as a function of z = x².
fn erf_over_x(z: f64) -> f64 {
    let num = (((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3];
    let den = (((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3];
    num / den
}

fn mid_range(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

fn asymptotic(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + P[i]) * z;
        den = (den + Q[i]) * z;
    }
    let r = z * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

/// exp(x²)·erfc(x) for x ≥ 0.
pub fn erfcx(x: f64) -> Result<f64, DomainError> {
    if !(x >= 0.0) || x.is_nan() {
        return Err(DomainError(x));
    }
    Ok(erfcx_unchecked(x))
}

/// [`erfcx`] without the domain check; callers guarantee `x >= 0`.
#[inline]
pub fn erfcx_unchecked(x: f64) -> f64 {
    if x <= SMALL {
        let z = x * x;
        z.exp() * (1.0 - x * erf_over_x(z))
    } else if x <= 4.0 {
        mid_range(x)
    } else if x.is_infinite() {
        0.0
    } else {
        asymptotic(x)
    }
}
