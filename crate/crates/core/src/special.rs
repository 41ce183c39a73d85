//! Self-contained special functions: log-gamma, the regularized incomplete
//! gamma function and its inverse, and the standard normal cdf/quantile.
//!
//! Nothing here is novel; these are the classical double-precision recipes
//! (Lanczos, Lentz continued fractions, West's cdf polynomial, Wichura's
//! AS 241 quantile). They are kept in-crate so the pricing numerics do not
//! drag in a statistics dependency and so the accuracy budget is explicit:
//! absolute error below 1e-12 for the cdf pieces and 1e-10 for quantiles.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Regularized lower incomplete gamma function P(a, x) for a > 0, x >= 0.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series representation
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..500 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q(a, x), modified Lentz
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut f = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (-x + a * x.ln() - ln_gamma(a)).exp() * f;
        1.0 - q
    }
}

/// Inverse of P(a, .): smallest x with P(a, x) = p, found by bracketing
/// bisection to near machine precision. p must lie in [0, 1).
pub fn gamma_p_inv(a: f64, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!(
            "gamma quantile level must be in [0,1), got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let mut hi = a + 10.0 * a.sqrt() + 10.0;
    let mut grow = 0;
    while gamma_p(a, hi) < p {
        hi *= 2.0;
        grow += 1;
        if grow > 400 {
            return Err(Error::domain("gamma quantile bracket overflow".to_string()));
        }
    }
    let mut lo = 0.0_f64;
    // bisect to (near) machine precision so the quantile varies smoothly in
    // p; coarser stopping rules leave jitter that downstream adaptive
    // quadrature mistakes for structure. Cap well past the worst case.
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * (1.0 + mid) {
            return Ok(mid);
        }
        if gamma_p(a, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Standard normal cdf, double precision (West 2005).
pub fn normal_cdf(x: f64) -> f64 {
    let xabs = x.abs();
    let p = if xabs > 37.0 {
        0.0
    } else {
        let e = (-xabs * xabs / 2.0).exp();
        if xabs < 7.071_067_811_865_475 {
            let mut n = 3.52624965998911e-2 * xabs + 0.700383064443688;
            n = n * xabs + 6.37396220353165;
            n = n * xabs + 33.912866078383;
            n = n * xabs + 112.079291497871;
            n = n * xabs + 221.213596169931;
            n = n * xabs + 220.206867912376;
            let mut d = 8.83883476483184e-2 * xabs + 1.75566716318264;
            d = d * xabs + 16.064177579207;
            d = d * xabs + 86.7807322029461;
            d = d * xabs + 296.564248779674;
            d = d * xabs + 637.333633378831;
            d = d * xabs + 793.826512519948;
            d = d * xabs + 440.413735824752;
            e * n / d
        } else {
            // tail continued fraction Q(x) = phi(x)/(x + 1/(x + 2/(x + ...)))
            // evaluated bottom-up deep enough for full double precision
            let mut b = 0.0;
            for j in (1..=100u32).rev() {
                b = j as f64 / (xabs + b);
            }
            e / ((xabs + b) * 2.506_628_274_631_000_2)
        }
    };
    if x > 0.0 {
        1.0 - p
    } else {
        p
    }
}

/// Standard normal quantile, AS 241 (Wichura 1988), absolute error < 1e-9
/// over (0, 1); returns +-infinity at the endpoints.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "normal quantile level must be in [0,1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = (((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
            + 6.726_577_092_700_87e4)
            * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946_1e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5)
            * q;
        let den = ((((((5.226_495_278_852_545_4e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return Ok(num / den);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    Ok(if q < 0.0 { -x } else { x })
}
