//! Adaptive Gauss–Kronrod quadrature in one and two dimensions.
//!
//! Each cell is integrated with the 15-point Kronrod rule and the embedded
//! 7-point Gauss rule (tensor products in 2-D); the difference of the two is
//! the cell's error estimate. The cell with the largest estimate is bisected
//! until the summed estimate meets the tolerance or the evaluation budget
//! runs out. In 2-D the cut goes across the direction whose embedded rule
//! disagrees more.
//!
//! Cells are processed in a fixed order and summed by creation index, so the
//! result is bit-reproducible for a given integrand and tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes `XGK[1]`, `XGK[3]`, `XGK[5]`, `XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on [-1, 1] with Kronrod and Gauss weights
/// (Gauss weight is zero for Kronrod-only nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// The 2-D domain is first cut into `grid × grid` cells; features much
    /// smaller than one initial cell may otherwise go unnoticed.
    pub grid: usize,
}

impl QuadOptions {
    pub fn absolute(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn check(&self) -> Result<()> {
        let ok = |t: f64| t.is_finite() && t >= 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) || (self.abs_tol == 0.0 && self.rel_tol == 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerance must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.grid == 0 {
            return Err(Error::InvalidInput("quadrature grid must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_evals: 1_000_000,
            grid: 1,
        }
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn unit() -> Self {
        Rect::new(0.0, 1.0, 0.0, 1.0)
    }

    fn grid(&self, n: usize) -> Vec<Rect> {
        let (dx, dy) = ((self.x1 - self.x0) / n as f64, (self.y1 - self.y0) / n as f64);
        let edge = |lo: f64, hi: f64, d: f64, i: usize| if i == n { hi } else { lo + d * i as f64 };
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(Rect::new(
                    edge(self.x0, self.x1, dx, i),
                    edge(self.x0, self.x1, dx, i + 1),
                    edge(self.y0, self.y1, dy, j),
                    edge(self.y0, self.y1, dy, j + 1),
                ));
            }
        }
        cells
    }

    /// Halves the rectangle across x when `along_x`, else across y.
    fn split(&self, along_x: bool) -> (Rect, Rect) {
        if along_x {
            let m = 0.5 * (self.x0 + self.x1);
            (Rect { x1: m, ..*self }, Rect { x0: m, ..*self })
        } else {
            let m = 0.5 * (self.y0 + self.y1);
            (Rect { y1: m, ..*self }, Rect { y0: m, ..*self })
        }
    }

    fn longer_side(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }
}

#[derive(Debug)]
struct Cell<R> {
    region: R,
    value: f64,
    error: f64,
    seq: usize,
    /// Split direction suggested by the cell rule.
    hint: bool,
}

impl<R> PartialEq for Cell<R> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<R> Eq for Cell<R> {}

impl<R> PartialOrd for Cell<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<R> Ord for Cell<R> {
    // Largest error first; older cells first among equal errors.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Value, error estimate and preferred split direction (`true` for x).
///
/// The direction is the one whose 7-point rule disagrees more with the
/// 15-point rule; ties go to the longer side.
fn gk_cell_2d<F: Fn(f64, f64) -> f64>(f: &F, r: &Rect) -> (f64, f64, bool) {
    let nodes = rule();
    let (cx, hx) = (0.5 * (r.x0 + r.x1), 0.5 * (r.x1 - r.x0));
    let (cy, hy) = (0.5 * (r.y0 + r.y1), 0.5 * (r.y1 - r.y0));
    let (mut kk, mut gg, mut gk, mut kg) = (0.0, 0.0, 0.0, 0.0);
    for &(xi, wki, wgi) in &nodes {
        let x = cx + hx * xi;
        let (mut kr, mut gr) = (0.0, 0.0);
        for &(yj, wkj, wgj) in &nodes {
            let v = f(x, cy + hy * yj);
            kr += wkj * v;
            gr += wgj * v;
        }
        kk += wki * kr;
        gg += wgi * gr;
        gk += wgi * kr;
        kg += wki * gr;
    }
    let area = hx * hy;
    let (ex, ey) = ((kk - gk).abs(), (kk - kg).abs());
    let along_x = if ex != ey {
        ex > ey
    } else {
        hx >= hy
    };
    (kk * area, ((kk - gg) * area).abs(), along_x)
}

fn gk_cell_1d<F: Fn(f64) -> f64>(f: &F, (a, b): (f64, f64)) -> (f64, f64, bool) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let (mut k, mut g) = (0.0, 0.0);
    for &(x, wk, wg) in &rule() {
        let v = f(c + h * x);
        k += wk * v;
        g += wg * v;
    }
    (k * h, ((k - g) * h).abs(), true)
}

/// Shared adaptive driver over any splittable region.
fn adaptive<R: Copy>(
    initial: Vec<R>,
    evals_per_cell: usize,
    opts: &QuadOptions,
    mut integrate: impl FnMut(&R) -> (f64, f64, bool),
    split: impl Fn(&R, bool) -> Option<(R, R)>,
) -> Result<QuadratureResult> {
    opts.check()?;
    let mut evaluations = 0;
    let mut seq = 0usize;
    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for region in initial {
        let (value, error, hint) = integrate(&region);
        evaluations += evals_per_cell;
        total += value;
        total_err += error;
        heap.push(Cell {
            region,
            value,
            error,
            seq,
            hint,
        });
        seq += 1;
    }

    let exhausted = loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::NonFinite(total));
        }
        if total_err <= opts.target(total) {
            break false;
        }
        if evaluations + 2 * evals_per_cell > opts.max_evals {
            break true;
        }
        let worst = heap.pop().expect("heap never empties");
        let Some((left, right)) = split(&worst.region, worst.hint) else {
            heap.push(worst);
            break true;
        };
        total -= worst.value;
        total_err -= worst.error;
        for region in [left, right] {
            let (v, e, hint) = integrate(&region);
            total += v;
            total_err += e;
            heap.push(Cell {
                region,
                value: v,
                error: e,
                seq,
                hint,
            });
            seq += 1;
        }
        evaluations += 2 * evals_per_cell;
    };

    let mut cells = heap.into_vec();
    cells.sort_by_key(|c| c.seq);
    let value: f64 = cells.iter().map(|c| c.value).sum();
    let error_estimate: f64 = cells.iter().map(|c| c.error).sum();
    if exhausted && error_estimate > opts.target(value) {
        return Err(Error::Accuracy {
            value,
            error: error_estimate,
            evaluations,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Integrates `f` over `domain` to absolute tolerance `tol`.
pub fn quad2d<F: Fn(f64, f64) -> f64>(f: F, domain: Rect, tol: f64) -> Result<QuadratureResult> {
    quad2d_with(f, domain, &QuadOptions::absolute(tol))
}

pub fn quad2d_with<F: Fn(f64, f64) -> f64>(
    f: F,
    domain: Rect,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    let min_side = 1e-13 * domain.longer_side();
    opts.check()?;
    adaptive(
        domain.grid(opts.grid),
        225,
        opts,
        |r| gk_cell_2d(&f, r),
        |r, along_x| {
            let side = if along_x { r.x1 - r.x0 } else { r.y1 - r.y0 };
            (side > min_side).then(|| r.split(along_x))
        },
    )
}

pub fn quad1d<F: Fn(f64) -> f64>(
    f: F,
    (a, b): (f64, f64),
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    let min_width = 1e-13 * (b - a).abs();
    adaptive(
        vec![(a, b)],
        15,
        opts,
        |&iv| gk_cell_1d(&f, iv),
        |&(lo, hi), _| {
            let m = 0.5 * (lo + hi);
            ((hi - lo).abs() > min_width).then_some(((lo, m), (m, hi)))
        },
    )
}

/// Non-adaptive composite rule on an `nx × ny` grid of cells.
pub fn quad2d_composite<F: Fn(f64, f64) -> f64>(
    f: F,
    domain: Rect,
    nx: usize,
    ny: usize,
) -> QuadratureResult {
    let (dx, dy) = (
        (domain.x1 - domain.x0) / nx as f64,
        (domain.y1 - domain.y0) / ny as f64,
    );
    let (mut value, mut error) = (0.0, 0.0);
    for i in 0..nx {
        for j in 0..ny {
            let x0 = domain.x0 + dx * i as f64;
            let y0 = domain.y0 + dy * j as f64;
            let (v, e, _) = gk_cell_2d(&f, &Rect::new(x0, x0 + dx, y0, y0 + dy));
            value += v;
            error += e;
        }
    }
    QuadratureResult {
        value,
        error_estimate: error,
        evaluations: 225 * nx * ny,
    }
}
