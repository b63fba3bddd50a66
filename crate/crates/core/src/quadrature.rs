//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! The interval with the largest error estimate is bisected until the sum of
//! estimates meets the tolerance. Partial results are summed with
//! compensation in interval order, so a given integrand always yields the
//! same bits. Intervals whose estimate has reached the roundoff floor are
//! frozen rather than split, so the returned `error` can exceed the requested
//! tolerance when that tolerance is below what the arithmetic supports.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_828_790,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_INTERVALS: usize = 20_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T: Real, const N: usize> {
    pub value: [T; N],
    pub error: T,
    pub evaluations: usize,
}

/// Scalar view of [`Integral`].
#[derive(Debug, Clone, Copy)]
pub struct ScalarIntegral<T: Real> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Piece<T: Real, const N: usize> {
    a: T,
    b: T,
    value: [T; N],
    error: T,
    order: usize,
}

impl<T: Real, const N: usize> PartialEq for Piece<T, N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real, const N: usize> Eq for Piece<T, N> {}
impl<T: Real, const N: usize> PartialOrd for Piece<T, N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real, const N: usize> Ord for Piece<T, N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// One Gauss–Kronrod panel: (value, error estimate, roundoff floor).
///
/// The error estimate follows QUADPACK: |K − G| is sharpened by the
/// (200·err/resasc)^{3/2} law and floored at 50·ε·∫|f| where further
/// bisection cannot help.
fn gk21<T: Real, const N: usize, F: Fn(T) -> [T; N]>(f: &F, a: T, b: T) -> ([T; N], T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let abs_half = half.abs();
    let mut fv = [[T::zero(); N]; 21];
    fv[20] = f(center);
    for j in 0..10 {
        let dx = half * T::lit(XGK[j]);
        fv[2 * j] = f(center - dx);
        fv[2 * j + 1] = f(center + dx);
    }
    let mut kron = [T::zero(); N];
    let mut err = T::zero();
    let mut floor = T::zero();
    let fifty_eps = T::lit(50.0) * T::epsilon();
    for i in 0..N {
        let mut k = fv[20][i] * T::lit(WGK[10]);
        let mut g = T::zero();
        let mut resabs = fv[20][i].abs() * T::lit(WGK[10]);
        for j in 0..10 {
            let (f1, f2) = (fv[2 * j][i], fv[2 * j + 1][i]);
            k += T::lit(WGK[j]) * (f1 + f2);
            resabs += T::lit(WGK[j]) * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                g += T::lit(WG[j / 2]) * (f1 + f2);
            }
        }
        let mean = k * T::half();
        let mut resasc = T::lit(WGK[10]) * (fv[20][i] - mean).abs();
        for j in 0..10 {
            resasc +=
                T::lit(WGK[j]) * ((fv[2 * j][i] - mean).abs() + (fv[2 * j + 1][i] - mean).abs());
        }
        let mut e = ((k - g) * half).abs();
        let resasc = resasc * abs_half;
        let resabs = resabs * abs_half;
        if resasc != T::zero() && e != T::zero() {
            e = resasc * T::one().min((T::lit(200.0) * e / resasc).powf(T::lit(1.5)));
        }
        let fl = fifty_eps * resabs;
        if e < fl {
            e = fl;
        }
        kron[i] = k * half;
        err = err.max(e);
        floor = floor.max(fl);
    }
    (kron, err, floor)
}

/// Adaptive integration of a vector-valued integrand over [a, b].
///
/// The tolerance test is `error <= max(abs_tol, rel_tol * max_i |I_i|)`.
pub fn integrate_adaptive_vec<T, const N: usize, F>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<Integral<T, N>>
where
    T: Real,
    F: Fn(T) -> [T; N],
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral {
            value: [T::zero(); N],
            error: T::zero(),
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Piece<T, N>> = Vec::new();
    let (value, error, floor) = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut next_order = 1usize;
    let first = Piece {
        a,
        b,
        value,
        error,
        order: 0,
    };
    if error <= floor {
        done.push(first);
    } else {
        heap.push(first);
    }
    let mut total_err = error;
    while !heap.is_empty() {
        let mut total = [T::zero(); N];
        for p in heap.iter().chain(done.iter()) {
            for i in 0..N {
                total[i] += p.value[i];
            }
        }
        let scale = total.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let target = abs_tol.max(rel_tol * scale);
        if total_err <= target {
            break;
        }
        if heap.len() + done.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature on [{a}, {b}]: error {:e} after {MAX_INTERVALS} intervals",
                total_err.to_f64_lossy()
            )));
        }
        let worst = heap.pop().expect("loop guard ensures a piece");
        let mid = (worst.a + worst.b) * T::half();
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            done.push(worst);
            continue;
        }
        let (v1, e1, fl1) = gk21(&f, worst.a, mid);
        let (v2, e2, fl2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        total_err = total_err - worst.error + e1 + e2;
        for (lo, hi, value, error, floor) in
            [(worst.a, mid, v1, e1, fl1), (mid, worst.b, v2, e2, fl2)]
        {
            let piece = Piece {
                a: lo,
                b: hi,
                value,
                error,
                order: next_order,
            };
            next_order += 1;
            // Pieces whose estimate sits at the roundoff floor are final.
            if error <= floor {
                done.push(piece);
            } else {
                heap.push(piece);
            }
        }
    }
    let mut pieces: Vec<_> = heap.into_vec();
    pieces.extend(done);
    pieces.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut value = [T::zero(); N];
    for (i, v) in value.iter_mut().enumerate() {
        *v = pieces
            .iter()
            .map(|p| p.value[i])
            .collect::<CompensatedSum<T>>()
            .value();
    }
    let error = pieces
        .iter()
        .map(|p| p.error)
        .collect::<CompensatedSum<T>>()
        .value();
    Ok(Integral {
        value,
        error,
        evaluations,
    })
}

/// Adaptive integration of a scalar integrand over [a, b].
pub fn integrate_adaptive<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<ScalarIntegral<T>> {
    let r = integrate_adaptive_vec(|x| [f(x)], a, b, abs_tol, rel_tol)?;
    Ok(ScalarIntegral {
        value: r.value[0],
        error: r.error,
        evaluations: r.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_adaptive(|x: f64| 3.0 * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-14, 1e-14)
            .unwrap();
        assert!((r.value - 6.0).abs() < 1e-13);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let r = integrate_adaptive(|x: f64| (50.0 * x).cos(), 0.0, 3.0, 1e-14, 1e-14).unwrap();
        assert!((r.value - (150.0_f64).sin() / 50.0).abs() < 1e-13);
        let r = integrate_adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-13).unwrap();
        let exact = 2.0 * (1.0_f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn vector_integrand() {
        let r =
            integrate_adaptive_vec(|x: f64| [x.exp(), x.sin()], 0.0, 1.0, 1e-15, 1e-15).unwrap();
        assert!((r.value[0] - (1.0_f64.exp() - 1.0)).abs() < 1e-14);
        assert!((r.value[1] - (1.0 - 1.0_f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_adaptive(|x: f64| x.cos(), 0.0, 1.0, 1e-15, 1e-15)
            .unwrap()
            .value;
        let b = integrate_adaptive(|x: f64| x.cos(), 1.0, 0.0, 1e-15, 1e-15)
            .unwrap()
            .value;
        assert!((a + b).abs() < 1e-15);
    }
}
