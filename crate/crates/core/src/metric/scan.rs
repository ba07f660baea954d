use super::jet::{log_metric_jet_fd, JetOptions};
use super::normal_form::intrinsic_vanishing_residual;
use super::{MetricSpec, DEFAULT_VANISH_TOL};
use crate::error::Result;
use crate::par::{self, Execution};
use num_complex::Complex64 as C64;
use std::f64::consts::TAU;

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

    fn contains(&self, z: C64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub vanish_tol: f64,
    /// Cells are quadrisected until their diagonal falls below this size.
    pub min_cell: f64,
    pub jet: JetOptions,
    pub exec: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { vanish_tol: DEFAULT_VANISH_TOL, min_cell: 1e-3, jet: JetOptions::default(), exec: Execution::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingPoint {
    pub z: C64,
    pub residual: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub points: Vec<VanishingPoint>,
    /// Every node of the scan grid had |residual| below the tolerance.
    pub identically_vanishing: bool,
    pub nodes_evaluated: usize,
}

fn residual_at(spec: &MetricSpec, p: C64, opts: &JetOptions) -> Result<(C64, f64)> {
    let local = spec.clone().with_base_point(p);
    let jet = log_metric_jet_fd(&local, 3, opts)?;
    let k = -2.0 * jet.lambda(1, 1).re / jet.h0();
    Ok((intrinsic_vanishing_residual(&jet), k))
}

fn winding(values: &[C64]) -> i64 {
    let mut total = 0.0;
    for i in 0..values.len() {
        let a = values[i];
        let b = values[(i + 1) % values.len()];
        let mut d = b.arg() - a.arg();
        while d > std::f64::consts::PI {
            d -= TAU;
        }
        while d < -std::f64::consts::PI {
            d += TAU;
        }
        total += d;
    }
    (total / TAU).round() as i64
}

struct Scanner<'a> {
    spec: &'a MetricSpec,
    opts: &'a ScanOptions,
}

impl Scanner<'_> {
    fn r(&self, p: C64) -> Result<C64> {
        Ok(residual_at(self.spec, p, &self.opts.jet)?.0)
    }

    fn boundary(&self, lo: C64, hi: C64) -> Result<Vec<C64>> {
        let pts = [
            C64::new(lo.re, lo.im),
            C64::new(0.5 * (lo.re + hi.re), lo.im),
            C64::new(hi.re, lo.im),
            C64::new(hi.re, 0.5 * (lo.im + hi.im)),
            C64::new(hi.re, hi.im),
            C64::new(0.5 * (lo.re + hi.re), hi.im),
            C64::new(lo.re, hi.im),
            C64::new(lo.re, 0.5 * (lo.im + hi.im)),
        ];
        pts.iter().map(|&p| self.r(p)).collect()
    }

    /// Quadrisects a cell with nonzero winding and returns the centre of the smallest cell found.
    fn refine(&self, lo: C64, hi: C64, depth: usize) -> Result<Option<C64>> {
        let diag = (hi - lo).norm();
        if diag < self.opts.min_cell || depth > 40 {
            return Ok(Some(0.5 * (lo + hi)));
        }
        let mid = 0.5 * (lo + hi);
        let quads = [
            (lo, mid),
            (C64::new(mid.re, lo.im), C64::new(hi.re, mid.im)),
            (C64::new(lo.re, mid.im), C64::new(mid.re, hi.im)),
            (mid, hi),
        ];
        for (a, b) in quads {
            let vals = self.boundary(a, b)?;
            if vals.iter().any(|v| v.norm() < self.opts.vanish_tol) {
                return Ok(Some(0.5 * (a + b)));
            }
            if winding(&vals) != 0 {
                return self.refine(a, b, depth + 1);
            }
        }
        Ok(None)
    }

    /// Two-dimensional Newton iteration with a finite-difference Jacobian.
    fn polish(&self, mut z: C64) -> Result<Option<VanishingPoint>> {
        let h = 1e-5;
        for _ in 0..50 {
            let (r, k) = residual_at(self.spec, z, &self.opts.jet)?;
            if r.norm() < 0.1 * self.opts.vanish_tol {
                return Ok(Some(VanishingPoint { z, residual: r.norm(), curvature: k }));
            }
            let rx = (self.r(z + h)? - self.r(z - h)?) / (2.0 * h);
            let ry = (self.r(z + C64::new(0.0, h))? - self.r(z - C64::new(0.0, h))?) / (2.0 * h);
            let det = rx.re * ry.im - ry.re * rx.im;
            if det.abs() < 1e-300 {
                break;
            }
            let dx = (r.re * ry.im - ry.re * r.im) / det;
            let dy = (rx.re * r.im - r.re * rx.im) / det;
            z -= C64::new(dx, dy);
            if !z.is_finite() {
                break;
            }
        }
        let (r, k) = residual_at(self.spec, z, &self.opts.jet)?;
        Ok((r.norm() < self.opts.vanish_tol).then_some(VanishingPoint { z, residual: r.norm(), curvature: k }))
    }
}

/// Locates zeros of the vanishing residual in `region` on a (2·resolution+1)² node grid:
/// nodes below tolerance, cells with nonzero winding (refined by quadrisection) and local
/// minima of |residual| seed a Newton polish.
pub fn scan_vanishing_points(spec: &MetricSpec, region: Rect, resolution: usize, opts: &ScanOptions) -> Result<ScanReport> {
    let m = 2 * resolution.max(1) + 1;
    let hx = (region.x1 - region.x0) / (m - 1) as f64;
    let hy = (region.y1 - region.y0) / (m - 1) as f64;
    let node = |i: usize, j: usize| C64::new(region.x0 + i as f64 * hx, region.y0 + j as f64 * hy);
    let values: Vec<Result<(C64, f64)>> =
        par::map_tasks(opts.exec, m * m, |idx| residual_at(spec, node(idx / m, idx % m), &opts.jet));
    let values: Vec<(C64, f64)> = values.into_iter().collect::<Result<_>>()?;
    let r = |i: usize, j: usize| values[i * m + j].0;

    if values.iter().all(|(v, _)| v.norm() < opts.vanish_tol) {
        let points = (0..m * m)
            .map(|idx| VanishingPoint { z: node(idx / m, idx % m), residual: values[idx].0.norm(), curvature: values[idx].1 })
            .collect();
        return Ok(ScanReport { points, identically_vanishing: true, nodes_evaluated: m * m });
    }

    let scanner = Scanner { spec, opts };
    let mut seeds = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let v = r(i, j).norm();
            let mut is_min = true;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1), (-1, 1), (1, -1)] {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a >= 0 && b >= 0 && (a as usize) < m && (b as usize) < m && r(a as usize, b as usize).norm() < v {
                    is_min = false;
                }
            }
            if v < opts.vanish_tol || is_min {
                seeds.push(node(i, j));
            }
        }
    }
    // cells are 2×2 blocks of nodes so that edge midpoints are already evaluated
    let mut cells = Vec::new();
    for ci in 0..resolution.max(1) {
        for cj in 0..resolution.max(1) {
            let (i, j) = (2 * ci, 2 * cj);
            let ring = [r(i, j), r(i + 1, j), r(i + 2, j), r(i + 2, j + 1), r(i + 2, j + 2), r(i + 1, j + 2), r(i, j + 2), r(i, j + 1)];
            if ring.iter().any(|v| v.norm() < opts.vanish_tol) {
                continue;
            }
            if winding(&ring) != 0 {
                cells.push((node(i, j), node(i + 2, j + 2)));
            }
        }
    }
    let refined: Vec<Result<Option<C64>>> =
        par::map_tasks(opts.exec, cells.len(), |c| scanner.refine(cells[c].0, cells[c].1, 0));
    for s in refined {
        if let Some(z) = s? {
            seeds.push(z);
        }
    }

    let polished: Vec<Result<Option<VanishingPoint>>> = par::map_tasks(opts.exec, seeds.len(), |s| scanner.polish(seeds[s]));
    let slack = 0.5 * hx.max(hy);
    let mut points: Vec<VanishingPoint> = Vec::new();
    for p in polished {
        if let Some(vp) = p? {
            if region.contains(vp.z, slack) && !points.iter().any(|q| (q.z - vp.z).norm() < 1e-6 * (1.0 + vp.z.norm())) {
                points.push(vp);
            }
        }
    }
    points.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    Ok(ScanReport { points, identically_vanishing: false, nodes_evaluated: m * m })
}
