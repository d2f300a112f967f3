//! Globally adaptive 10/21-point Gauss-Kronrod quadrature for complex-valued
//! integrands over a union of mapped segments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_822,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// A piece of the integration range together with the variable change used
/// on it. Every segment is integrated over a unit parameter `w` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// `t = a + (b - a) w`.
    Linear { a: f64, b: f64 },
    /// `t = a (b/a)^w`; requires `0 < a < b`. Suited to scale-free decay.
    Log { a: f64, b: f64 },
    /// `t = start / w`, covering `[start, ∞)`.
    Tail { start: f64 },
}

impl Segment {
    fn map(&self, w: f64) -> (f64, f64) {
        match *self {
            Segment::Linear { a, b } => (a + (b - a) * w, b - a),
            Segment::Log { a, b } => {
                let r = (b / a).ln();
                let t = a * (r * w).exp();
                (t, t * r)
            }
            Segment::Tail { start } => (start / w, start / (w * w)),
        }
    }

    fn to_t(&self, w: f64) -> f64 {
        match *self {
            Segment::Tail { .. } if w == 0.0 => f64::INFINITY,
            _ => self.map(w).0,
        }
    }
}

/// Splits `[lo, hi]` into linear, logarithmic and tail segments at the given
/// interior breakpoints. `hi = ∞` appends a tail.
pub fn partition(lo: f64, breaks: &[f64], hi: f64) -> Vec<Segment> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let mut segs = Vec::with_capacity(pts.len() + 2);
    let mut left = lo;
    for p in pts {
        segs.push(span(left, p));
        left = p;
    }
    if hi.is_finite() {
        segs.push(span(left, hi));
    } else {
        segs.push(Segment::Tail {
            start: if left > 0.0 { left } else { 1.0 },
        });
        if left <= 0.0 {
            segs.insert(segs.len() - 1, span(left, 1.0));
        }
    }
    segs
}

fn span(a: f64, b: f64) -> Segment {
    if a > 0.0 && b / a > 4.0 {
        Segment::Log { a, b }
    } else {
        Segment::Linear { a, b }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            max_intervals: 4000,
        }
    }

    pub fn with_limit(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    seg: usize,
    w0: f64,
    w1: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod<F>(f: &mut F, seg: &Segment, w0: f64, w1: f64) -> (Complex64, f64)
where
    F: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (w0 + w1);
    let half = 0.5 * (w1 - w0);
    let mut eval = |w: f64| {
        let (t, jac) = seg.map(w);
        let v = f(t) * jac;
        if v.is_finite() {
            v
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let mut fv = [Complex64::new(0.0, 0.0); 21];
    fv[10] = eval(center);
    for j in 0..10 {
        let x = half * XGK[j];
        fv[j] = eval(center - x);
        fv[20 - j] = eval(center + x);
    }
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut kron = fv[10] * WGK[10];
    let mut res_abs = fv[10].norm() * WGK[10];
    for j in 0..10 {
        let pair = fv[j] + fv[20 - j];
        kron += pair * WGK[j];
        res_abs += WGK[j] * (fv[j].norm() + fv[20 - j].norm());
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut res_asc = WGK[10] * (fv[10] - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[j] - mean).norm() + (fv[20 - j] - mean).norm());
    }
    let value = kron * half;
    let err = rescale_error(
        ((kron - gauss) * half).norm(),
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    (value, err)
}

/// Integrates `f` over the union of `segments`, bisecting the piece with the
/// largest error estimate until `error <= max(abs, rel * |value|)`.
pub fn integrate<F>(mut f: F, segments: &[Segment], tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    let mut heap = BinaryHeap::with_capacity(2 * segments.len() + 16);
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for (i, seg) in segments.iter().enumerate() {
        let (value, error) = kronrod(&mut f, seg, 0.0, 1.0);
        evaluations += 21;
        total += value;
        total_err += error;
        heap.push(Piece {
            seg: i,
            w0: 0.0,
            w1: 1.0,
            value,
            error,
        });
    }

    loop {
        if !total.is_finite() || total_err.is_nan() {
            let worst = heap.iter().find(|p| !p.value.is_finite()).or(heap.peek());
            return Err(failure(segments, worst, f64::INFINITY, tol.abs));
        }
        let target = tol.abs.max(tol.rel * total.norm());
        if total_err <= target {
            break;
        }
        let worst = match heap.peek() {
            Some(p) => *p,
            None => break,
        };
        let width = worst.w1 - worst.w0;
        if heap.len() >= tol.max_intervals
            || width <= 64.0 * f64::EPSILON * worst.w0.abs().max(worst.w1.abs())
        {
            return Err(failure(segments, Some(&worst), total_err, target));
        }
        heap.pop();
        let mid = 0.5 * (worst.w0 + worst.w1);
        let seg = &segments[worst.seg];
        let (v1, e1) = kronrod(&mut f, seg, worst.w0, mid);
        let (v2, e2) = kronrod(&mut f, seg, mid, worst.w1);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece {
            seg: worst.seg,
            w0: worst.w0,
            w1: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            seg: worst.seg,
            w0: mid,
            w1: worst.w1,
            value: v2,
            error: e2,
        });
    }

    // Resum to shed the drift of the running totals.
    let (value, error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| {
            (v + p.value, e + p.error)
        });
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

fn failure(segments: &[Segment], worst: Option<&Piece>, error: f64, tolerance: f64) -> Error {
    let (lo, hi) = worst
        .map(|p| {
            let s = &segments[p.seg];
            (s.to_t(p.w0), s.to_t(p.w1))
        })
        .unwrap_or((f64::NAN, f64::NAN));
    Error::Quadrature {
        error,
        tolerance,
        worst_lo: lo.min(hi),
        worst_hi: lo.max(hi),
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(mut f: F, segments: &[Segment], tol: Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate(|t| Complex64::new(f(t), 0.0), segments, tol)?;
    Ok((est.value.re, est.error))
}
