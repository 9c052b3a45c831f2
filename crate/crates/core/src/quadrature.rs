//! Globally adaptive Gauss–Kronrod (7/15) integration.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error drops below the requested relative tolerance. Semi-infinite ranges
//! are mapped onto `[0, 1)` with `x = s u / (1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const MIN_REL_TOL: f64 = 1e-14;
pub const MAX_REL_TOL: f64 = 1e-2;
/// Maximum number of live subintervals.
pub const MAX_INTERVALS: usize = 1 << 20;
const ABS_FLOOR: f64 = 1e-300;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by position for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    error = error.max(4.0 * f64::EPSILON * abs_sum);
    Panel { a, b, value, error }
}

fn check_tolerance(rel_tol: f64) -> Result<()> {
    if (MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "rel_tol",
            value: rel_tol,
            range: "[1e-14, 1e-2]",
        })
    }
}

/// Integrates `f` over `[a, b]` to relative accuracy `rel_tol`.
///
/// Returns [`Error::Accuracy`] with the best estimate if the subdivision
/// budget runs out or an interval becomes too narrow to split.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    check_tolerance(rel_tol)?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain {
            name: "interval length",
            value: b - a,
            range: "(0, inf) with finite endpoints",
        });
    }
    let first = gauss_kronrod(&f, a, b);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Accuracy {
                estimate: value,
                error,
            });
        }
        if error <= (rel_tol * value.abs()).max(ABS_FLOOR) {
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy {
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Accuracy {
                estimate: value,
                error,
            });
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from scratch so the reported value carries no drift from the
    // running updates.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate = panels.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Integrates `f` over `[0, inf)` via `x = u / (1 - u)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_semi_infinite_scaled(f, 1.0, rel_tol)
}

/// Like [`integrate_semi_infinite`] but with `x = scale * u / (1 - u)`, which
/// places half of the mapped interval below `scale`. Pick `scale` near the
/// integrand's characteristic width.
pub fn integrate_semi_infinite_scaled<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    crate::error::check_positive("scale", scale)?;
    integrate_finite(
        |u| {
            let w = 1.0 - u;
            if w <= 0.0 {
                return 0.0;
            }
            let x = scale * u / w;
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * scale / (w * w)
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}
