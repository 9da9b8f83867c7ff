//! Sampled paths and paths of paths on uniform grids.
//!
//! A [`SampledPath`] stores N+1 samples on the grid tᵢ = i·L/N of [0, L]
//! together with a margin: the number of grid cells at each end over which
//! the samples are constant. Paths are translated so that they start at
//! t = 0. Composition requires equal steps and shares the junction sample,
//! so that per-cell quantities of a composite are exactly those of its
//! pieces.

use std::fmt;
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Tolerance for the margin invariant and mirror-exact constructions.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for endpoint matching and backtrack recognition.
pub const MATCH_TOL: f64 = 1e-9;

/// A sample value of a path.
pub trait PathPoint: Clone + fmt::Debug + Send + Sync {
    /// Max-norm distance; infinite when the points are not comparable.
    fn max_diff(&self, other: &Self) -> f64;
}

/// Sample values that can be linearly interpolated.
pub trait Interpolate: PathPoint {
    fn lerp(&self, other: &Self, s: f64) -> Self;
}

impl PathPoint for DVector<f64> {
    fn max_diff(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        if self.is_empty() {
            return 0.0;
        }
        (self - other).amax()
    }
}

impl Interpolate for DVector<f64> {
    fn lerp(&self, other: &Self, s: f64) -> Self {
        if s == 0.0 {
            return self.clone();
        }
        if s == 1.0 {
            return other.clone();
        }
        self * (1.0 - s) + other * s
    }
}

/// Point (x, g) of the trivial bundle ℝⁿ × G.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    pub x: DVector<f64>,
    pub g: GroupElement,
}

impl PathPoint for BundlePoint {
    fn max_diff(&self, other: &Self) -> f64 {
        self.x.max_diff(&other.x).max(self.g.max_diff(&other.g))
    }
}

#[derive(Clone, Debug)]
pub struct SampledPath<P> {
    length: f64,
    points: Vec<P>,
    margin: usize,
}

/// Grid-aligned window [T, T+2δ] over which a path retraces itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BacktrackWindow {
    /// Grid index of T.
    pub start: usize,
    /// δ in grid cells.
    pub half_width: usize,
}

impl BacktrackWindow {
    pub fn end(&self) -> usize {
        self.start + 2 * self.half_width
    }
}

fn constant_run<P: PathPoint>(points: &[P], tol: f64) -> usize {
    let first = &points[0];
    points.iter().skip(1).take_while(|p| p.max_diff(first) <= tol).count()
}

fn margin_holds<P: PathPoint>(points: &[P], margin: usize) -> bool {
    let n = points.len() - 1;
    if margin == 0 {
        return true;
    }
    if 2 * margin > n {
        return false;
    }
    let head = &points[..=margin];
    let tail = &points[n - margin..];
    head.iter().all(|p| p.max_diff(&head[0]) <= EXACT_TOL) && tail.iter().all(|p| p.max_diff(&tail[0]) <= EXACT_TOL)
}

fn largest_margin<P: PathPoint>(points: &[P], cap: usize) -> usize {
    (0..=cap.min((points.len() - 1) / 2)).rev().find(|&m| margin_holds(points, m)).unwrap_or(0)
}

impl<P: PathPoint> SampledPath<P> {
    /// Validates the grid and the margin. A single sample is a point path of
    /// length 0; otherwise the length must be positive.
    pub fn new(length: f64, points: Vec<P>, margin: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("a path needs at least one sample".into()));
        }
        if !length.is_finite() || length < 0.0 {
            return Err(Error::Grid(format!("invalid path length {length}")));
        }
        if points.len() == 1 && length != 0.0 {
            return Err(Error::Grid("a single-sample path has length 0".into()));
        }
        if points.len() > 1 && length == 0.0 {
            return Err(Error::Grid("a path with several samples needs positive length".into()));
        }
        if !margin_holds(&points, margin) {
            return Err(Error::Grid(format!("samples are not constant over a margin of {margin} cells")));
        }
        Ok(Self { length, points, margin })
    }

    /// Like [`SampledPath::new`] with the largest margin the samples admit.
    pub fn with_inferred_margin(length: f64, points: Vec<P>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("a path needs at least one sample".into()));
        }
        let m = largest_margin(&points, usize::MAX);
        Self::new(length, points, m)
    }

    /// Constant path of `cells` cells with the given step.
    pub fn constant(point: P, cells: usize, step: f64) -> Result<Self> {
        let margin = cells / 2;
        Self::new(cells as f64 * step, vec![point; cells + 1], margin)
    }

    pub fn point(point: P) -> Self {
        Self { length: 0.0, points: vec![point], margin: 0 }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn into_points(self) -> Vec<P> {
        self.points
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Number of grid cells N.
    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    /// Grid step; 0 for a point path.
    pub fn step(&self) -> f64 {
        if self.cells() == 0 {
            0.0
        } else {
            self.length / self.cells() as f64
        }
    }

    pub fn t(&self, i: usize) -> f64 {
        if self.cells() == 0 {
            0.0
        } else {
            i as f64 * self.length / self.cells() as f64
        }
    }

    pub fn start(&self) -> &P {
        &self.points[0]
    }

    pub fn end(&self) -> &P {
        &self.points[self.cells()]
    }

    pub fn is_constant(&self) -> bool {
        constant_run(&self.points, EXACT_TOL) == self.cells()
    }

    /// Sample-wise max distance; infinite when the sample counts differ.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.points.len() != other.points.len() {
            return f64::INFINITY;
        }
        self.points.iter().zip(&other.points).map(|(a, b)| a.max_diff(b)).fold(0.0, f64::max)
    }

    /// Applies `f` to every sample; the margin is kept when it still holds.
    pub fn map<Q: PathPoint>(&self, f: impl Fn(&P) -> Result<Q>) -> Result<SampledPath<Q>> {
        let points = self.points.iter().map(f).collect::<Result<Vec<_>>>()?;
        let margin = largest_margin(&points, self.margin);
        SampledPath::new(self.length, points, margin)
    }
}

fn same_step(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Composite "f then g": g's domain is translated to start where f ends and
/// the junction sample is stored once (f's copy is kept). A point path is a
/// two-sided identity.
pub fn compose_paths<P: PathPoint>(f: &SampledPath<P>, g: &SampledPath<P>) -> Result<SampledPath<P>> {
    let gap = f.end().max_diff(g.start());
    if gap > MATCH_TOL {
        return Err(Error::Composition { distance: gap });
    }
    if g.cells() == 0 {
        return Ok(f.clone());
    }
    if f.cells() == 0 {
        return Ok(g.clone());
    }
    if !same_step(f.step(), g.step()) {
        return Err(Error::Grid(format!("steps differ: {} vs {}", f.step(), g.step())));
    }
    let mut points = f.points.clone();
    points.extend_from_slice(&g.points[1..]);
    let cells = points.len() - 1;
    let margin = largest_margin(&points, f.margin.min(g.margin));
    SampledPath::new(f.step() * cells as f64, points, margin)
}

pub fn reverse_path<P: PathPoint>(d: &SampledPath<P>) -> SampledPath<P> {
    let mut points = d.points.clone();
    points.reverse();
    SampledPath { length: d.length, points, margin: d.margin }
}

/// Evaluates a path at parameter `t` by linear interpolation. Parameters
/// within 1e−9 cells of a grid point return that sample exactly.
pub fn sample_at<P: Interpolate>(p: &SampledPath<P>, t: f64) -> P {
    let n = p.cells();
    if n == 0 {
        return p.points[0].clone();
    }
    let u = (t / p.step()).clamp(0.0, n as f64);
    let r = u.round();
    if (u - r).abs() <= 1e-9 {
        return p.points[r as usize].clone();
    }
    let i = (u.floor() as usize).min(n - 1);
    p.points[i].lerp(&p.points[i + 1], u - i as f64)
}

/// Resamples p∘φ on a uniform grid of the same domain with φ.len()−1 cells.
pub fn reparametrize<P: Interpolate>(p: &SampledPath<P>, phi: &[f64]) -> Result<SampledPath<P>> {
    reparametrize_to(p, phi, p.length)
}

/// Resamples p∘φ on a uniform grid of [0, new_length]; `phi` holds the
/// parameter values in p's domain at the new grid points.
pub fn reparametrize_to<P: Interpolate>(p: &SampledPath<P>, phi: &[f64], new_length: f64) -> Result<SampledPath<P>> {
    if phi.len() < 2 {
        return Err(Error::Domain("a reparametrization needs at least two values".into()));
    }
    if phi.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("reparametrization is not strictly increasing".into()));
    }
    let tol = 1e-12 * p.length.max(1.0);
    if phi[0].abs() > tol || (phi[phi.len() - 1] - p.length).abs() > tol {
        return Err(Error::Domain("reparametrization does not fix the endpoints".into()));
    }
    let points: Vec<P> = phi.iter().map(|&t| sample_at(p, t)).collect();
    let margin = largest_margin(&points, usize::MAX);
    SampledPath::new(new_length, points, margin)
}

/// Inserts d·d⁻¹ at sample `at`: returns a·d·d⁻¹·b with p = a·b split at
/// `at`, together with the mirror-exact window. A point spur is treated as a
/// constant one-cell spur.
pub fn insert_backtrack<P: PathPoint>(
    p: &SampledPath<P>,
    at: usize,
    spur: &SampledPath<P>,
) -> Result<(SampledPath<P>, BacktrackWindow)> {
    if at > p.cells() {
        return Err(Error::Grid(format!("insertion index {at} beyond {} cells", p.cells())));
    }
    let gap = p.points[at].max_diff(spur.start());
    if gap > MATCH_TOL {
        return Err(Error::Composition { distance: gap });
    }
    let spur_points: Vec<P> = if spur.cells() == 0 {
        vec![p.points[at].clone(), p.points[at].clone()]
    } else {
        if p.cells() > 0 && !same_step(p.step(), spur.step()) {
            return Err(Error::Grid(format!("steps differ: {} vs {}", p.step(), spur.step())));
        }
        spur.points.clone()
    };
    let k = spur_points.len() - 1;
    let step = if p.cells() > 0 { p.step() } else { spur.step() };
    let step = if step == 0.0 { 1.0 } else { step };
    let mut points = p.points[..=at].to_vec();
    points.extend_from_slice(&spur_points[1..]);
    points.extend(spur_points[1..k].iter().rev().cloned());
    points.push(p.points[at].clone());
    points.extend_from_slice(&p.points[at + 1..]);
    let cells = points.len() - 1;
    let margin = largest_margin(&points, p.margin);
    let path = SampledPath::new(step * cells as f64, points, margin)?;
    Ok((path, BacktrackWindow { start: at, half_width: k }))
}

/// Largest mirror gap over a window, with the offset where it occurs.
pub fn mirror_gap<P: PathPoint>(points: &[P], w: BacktrackWindow) -> (usize, f64) {
    (0..=w.half_width)
        .map(|j| (j, points[w.start + j].max_diff(&points[w.end() - j])))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
}

/// Removes the samples on (T, T+2δ] of a mirror window.
pub fn erase_backtrack<P: PathPoint>(p: &SampledPath<P>, w: BacktrackWindow) -> Result<SampledPath<P>> {
    if w.end() > p.cells() {
        return Err(Error::Grid(format!("window end {} beyond {} cells", w.end(), p.cells())));
    }
    let (offset, gap) = mirror_gap(&p.points, w);
    if gap > MATCH_TOL {
        return Err(Error::NotABacktrack { offset, gap });
    }
    if w.half_width == 0 {
        return Ok(p.clone());
    }
    let mut points = p.points[..=w.start].to_vec();
    points.extend_from_slice(&p.points[w.end() + 1..]);
    let cells = points.len() - 1;
    let margin = largest_margin(&points, p.margin);
    SampledPath::new(p.step() * cells as f64, points, margin)
}

/// All maximal mirror windows. Apexes inside constant runs are skipped, so
/// constancy is never reported as backtracking.
pub fn detect_backtracks<P: PathPoint>(p: &SampledPath<P>) -> Vec<BacktrackWindow> {
    let pts = &p.points;
    let n = p.cells();
    let mut out = Vec::new();
    for c in 1..n {
        if pts[c - 1].max_diff(&pts[c]) <= MATCH_TOL {
            continue;
        }
        let mut r = 0;
        while r < c && c + r < n && pts[c - r - 1].max_diff(&pts[c + r + 1]) <= MATCH_TOL {
            r += 1;
        }
        if r > 0 {
            out.push(BacktrackWindow { start: c - r, half_width: r });
        }
    }
    out
}

/// Canonical representative of the identity class of a constant path
/// (2·margin cells, or a point path when the margin is 0); for other paths,
/// leading and trailing constant runs longer than the margin are trimmed.
pub fn canonicalize_identity<P: PathPoint>(p: &SampledPath<P>) -> SampledPath<P> {
    let m = p.margin;
    if p.is_constant() {
        if m == 0 || p.cells() == 0 {
            return SampledPath::point(p.points[0].clone());
        }
        return SampledPath {
            length: p.step() * (2 * m) as f64,
            points: vec![p.points[0].clone(); 2 * m + 1],
            margin: m,
        };
    }
    let lead = constant_run(&p.points, EXACT_TOL);
    let mut rev = p.points.clone();
    rev.reverse();
    let trail = constant_run(&rev, EXACT_TOL);
    let from = lead.saturating_sub(m);
    let to = p.cells() - trail.saturating_sub(m);
    let points = p.points[from..=to].to_vec();
    let cells = points.len() - 1;
    SampledPath { length: p.step() * cells as f64, points, margin: m }
}

/// Path of paths: rows Γ_s sampled at s_i = i·S/M, all on the same t-grid.
#[derive(Clone, Debug)]
pub struct SampledSurface<P> {
    s_length: f64,
    rows: Vec<SampledPath<P>>,
    margin_s: usize,
}

impl<P: PathPoint> SampledSurface<P> {
    pub fn new(s_length: f64, rows: Vec<SampledPath<P>>, margin_s: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Grid("a surface needs at least one row".into()));
        }
        let (n, len) = (rows[0].cells(), rows[0].length());
        if rows.iter().any(|r| r.cells() != n || !same_step(r.length(), len)) {
            return Err(Error::Grid("surface rows differ in grid".into()));
        }
        if rows.len() == 1 && s_length != 0.0 || rows.len() > 1 && s_length <= 0.0 {
            return Err(Error::Grid(format!("invalid s-length {s_length}")));
        }
        let m = rows.len() - 1;
        if margin_s > 0 {
            if 2 * margin_s > m {
                return Err(Error::Grid("s-margin exceeds half the rows".into()));
            }
            let flat = |range: &[SampledPath<P>]| range.iter().all(|r| r.max_diff(&range[0]) <= EXACT_TOL);
            if !flat(&rows[..=margin_s]) || !flat(&rows[m - margin_s..]) {
                return Err(Error::Grid(format!("rows are not constant over an s-margin of {margin_s}")));
            }
        }
        Ok(Self { s_length, rows, margin_s })
    }

    pub fn rows(&self) -> &[SampledPath<P>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SampledPath<P> {
        &self.rows[i]
    }

    pub fn at(&self, i: usize, j: usize) -> &P {
        &self.rows[i].points()[j]
    }

    pub fn s_length(&self) -> f64 {
        self.s_length
    }

    pub fn margin_s(&self) -> usize {
        self.margin_s
    }

    /// Number of s-cells M.
    pub fn s_cells(&self) -> usize {
        self.rows.len() - 1
    }

    /// Number of t-cells N.
    pub fn t_cells(&self) -> usize {
        self.rows[0].cells()
    }

    pub fn s_step(&self) -> f64 {
        if self.s_cells() == 0 {
            0.0
        } else {
            self.s_length / self.s_cells() as f64
        }
    }

    pub fn t_step(&self) -> f64 {
        self.rows[0].step()
    }

    pub fn source(&self) -> &SampledPath<P> {
        &self.rows[0]
    }

    pub fn target(&self) -> &SampledPath<P> {
        &self.rows[self.s_cells()]
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.rows.len() != other.rows.len() {
            return f64::INFINITY;
        }
        self.rows.iter().zip(&other.rows).map(|(a, b)| a.max_diff(b)).fold(0.0, f64::max)
    }

    /// Column j as a path in s.
    pub fn column(&self, j: usize) -> Result<SampledPath<P>> {
        let pts = self.rows.iter().map(|r| r.points()[j].clone()).collect();
        SampledPath::new(self.s_length, pts, 0)
    }

    pub fn map_rows<Q: PathPoint>(&self, f: impl Fn(&SampledPath<P>) -> Result<SampledPath<Q>>) -> Result<SampledSurface<Q>> {
        let rows = self.rows.iter().map(f).collect::<Result<Vec<_>>>()?;
        SampledSurface::new(self.s_length, rows, self.margin_s)
    }
}

/// Vertical composite "f then g" along s; the junction row is stored once.
pub fn vertical_compose<P: PathPoint>(f: &SampledSurface<P>, g: &SampledSurface<P>) -> Result<SampledSurface<P>> {
    let gap = f.target().max_diff(g.source());
    if gap > MATCH_TOL {
        return Err(Error::Composition { distance: gap });
    }
    if g.s_cells() == 0 {
        return Ok(f.clone());
    }
    if f.s_cells() == 0 {
        return Ok(g.clone());
    }
    if !same_step(f.s_step(), g.s_step()) || f.t_cells() != g.t_cells() {
        return Err(Error::Grid("surface grids differ".into()));
    }
    let mut rows = f.rows.clone();
    rows.extend_from_slice(&g.rows[1..]);
    let m = rows.len() - 1;
    SampledSurface::new(f.s_step() * m as f64, rows, 0)
}

fn header(n: usize, k: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=n).map(|i| format!("x{i}")));
    for r in 1..=k {
        for c in 1..=k {
            h.push(format!("g{r}{c}"));
        }
    }
    h
}

fn write_rows<W: Write>(out: W, head: Vec<String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&head)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_base_path_csv<W: Write>(p: &SampledPath<DVector<f64>>, out: W) -> Result<()> {
    let n = p.start().len();
    write_rows(
        out,
        header(n, 0),
        p.points().iter().enumerate().map(|(i, x)| std::iter::once(p.t(i)).chain(x.iter().copied()).collect()),
    )
}

/// Writes a bundle path of a matrix model; g entries are written row-major.
pub fn write_bundle_path_csv<W: Write>(p: &SampledPath<BundlePoint>, out: W) -> Result<()> {
    let n = p.start().x.len();
    let k = p.start().g.matrix().map(|m| m.nrows()).ok_or_else(|| Error::Domain("bundle CSV needs a matrix model".into()))?;
    let rows = p
        .points()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let m = q.g.matrix().expect("matrix payload");
            let mut row = vec![p.t(i)];
            row.extend(q.x.iter().copied());
            for r in 0..k {
                for c in 0..k {
                    row.push(m[(r, c)]);
                }
            }
            row
        })
        .collect::<Vec<_>>();
    write_rows(out, header(n, k), rows.into_iter())
}

fn read_table<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let head: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if head.first().map(String::as_str) != Some("t") {
        return Err(Error::Fixture("path CSV must start with a `t` column".into()));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Fixture(format!("bad number `{f}`"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Fixture("path CSV has no samples".into()));
    }
    let t0 = rows[0][0];
    let len = rows[rows.len() - 1][0] - t0;
    let n = rows.len() - 1;
    for (i, r) in rows.iter().enumerate() {
        let expect = t0 + if n == 0 { 0.0 } else { i as f64 * len / n as f64 };
        if (r[0] - expect).abs() > 1e-9 * len.abs().max(1.0) {
            return Err(Error::Grid(format!("sample {i} is off the uniform grid")));
        }
    }
    Ok((head, rows))
}

fn path_length(rows: &[Vec<f64>]) -> f64 {
    rows[rows.len() - 1][0] - rows[0][0]
}

/// Reads a base path; t is normalized to start at 0 and the margin inferred.
pub fn read_base_path_csv<R: Read>(input: R) -> Result<SampledPath<DVector<f64>>> {
    let (head, rows) = read_table(input)?;
    let n = head.len() - 1;
    let points = rows.iter().map(|r| DVector::from_column_slice(&r[1..=n])).collect();
    SampledPath::with_inferred_margin(path_length(&rows), points)
}

/// Reads a bundle path for a matrix model with `base_dim` coordinates.
pub fn read_bundle_path_csv<R: Read>(input: R, model: &GroupModel, base_dim: usize) -> Result<SampledPath<BundlePoint>> {
    let (head, rows) = read_table(input)?;
    let k = model.matrix_size().ok_or_else(|| Error::Domain("bundle CSV needs a matrix model".into()))?;
    if head.len() != 1 + base_dim + k * k {
        return Err(Error::Fixture(format!("expected {} columns, found {}", 1 + base_dim + k * k, head.len())));
    }
    let points = rows
        .iter()
        .map(|r| {
            let x = DVector::from_column_slice(&r[1..=base_dim]);
            let g = model.element_from_matrix(DMatrix::from_row_slice(k, k, &r[1 + base_dim..]))?;
            Ok(BundlePoint { x, g })
        })
        .collect::<Result<Vec<_>>>()?;
    SampledPath::with_inferred_margin(path_length(&rows), points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    fn arc(from: f64, to: f64, n: usize) -> SampledPath<DVector<f64>> {
        let pts = (0..=n).map(|i| from + (to - from) * i as f64 / n as f64).map(|a| v2(a.cos(), a.sin())).collect();
        SampledPath::new(to - from, pts, 0).unwrap()
    }

    fn segment(a: DVector<f64>, b: DVector<f64>, n: usize, length: f64) -> SampledPath<DVector<f64>> {
        let pts = (0..=n).map(|i| a.lerp(&b, i as f64 / n as f64)).collect();
        SampledPath::new(length, pts, 0).unwrap()
    }

    #[test]
    fn quarter_arcs_compose_to_half_circle() {
        let h = compose_paths(&arc(0.0, PI / 2.0, 50), &arc(PI / 2.0, PI, 50)).unwrap();
        let direct = arc(0.0, PI, 100);
        assert!(h.max_diff(&direct) < 1e-12);
        assert!((h.length() - PI).abs() < 1e-12);
    }

    #[test]
    fn constant_paths_compose_to_constant() {
        let x = v2(1.0, 2.0);
        let f = SampledPath::constant(x.clone(), 4, 0.1).unwrap();
        let g = SampledPath::constant(x, 6, 0.1).unwrap();
        let h = compose_paths(&f, &g).unwrap();
        assert!(h.is_constant());
        assert_eq!(h.cells(), 10);
        assert!((h.length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composition_errors() {
        let f = arc(0.0, 1.0, 10);
        let g = arc(0.0, 1.0, 10);
        assert!(matches!(compose_paths(&f, &g), Err(Error::Composition { .. })));
        let g = arc(1.0, 2.0, 20);
        assert!(matches!(compose_paths(&f, &g), Err(Error::Grid(_))));
    }

    #[test]
    fn identity_law_after_canonicalization() {
        let f = arc(0.0, 1.0, 10);
        let unit = SampledPath::constant(f.end().clone(), 6, f.step()).unwrap();
        let c = compose_paths(&f, &unit).unwrap();
        assert_eq!(canonicalize_identity(&c).points(), f.points());
        let c = compose_paths(&SampledPath::point(f.start().clone()), &f).unwrap();
        assert_eq!(c.points(), f.points());
    }

    #[test]
    fn reverse_segment_by_index() {
        let s = segment(v2(0.0, 0.0), v2(1.0, 0.0), 8, 1.0);
        let r = reverse_path(&s);
        for i in 0..=8 {
            assert_eq!(r.points()[i], s.points()[8 - i]);
        }
        assert_eq!(reverse_path(&r).points(), s.points());
    }

    #[test]
    fn margin_is_validated() {
        let pts = vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(1.0, 0.0)];
        assert!(SampledPath::new(1.0, pts.clone(), 1).is_err());
        let p = SampledPath::with_inferred_margin(1.0, pts).unwrap();
        assert_eq!(p.margin(), 0);
    }

    #[test]
    fn reparametrize_identity_and_affine() {
        let p = arc(0.0, 1.0, 40);
        let ident: Vec<f64> = (0..=40).map(|i| p.t(i)).collect();
        assert_eq!(reparametrize(&p, &ident).unwrap().points(), p.points());
        let doubled: Vec<f64> = (0..=80).map(|i| i as f64 / 80.0).collect();
        let q = reparametrize(&p, &doubled).unwrap();
        let err = q
            .points()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let a = i as f64 / 80.0;
                x.max_diff(&v2(a.cos(), a.sin()))
            })
            .fold(0.0, f64::max);
        let h = p.step();
        assert!(err < h * h, "{err}");
        let bad = vec![0.0, 0.6, 0.5, 1.0];
        assert!(matches!(reparametrize(&p, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn spur_round_trip_and_detection() {
        let circle = arc(0.0, 2.0 * PI, 200);
        let at = 60;
        let x = circle.points()[at].clone();
        let spur = segment(x.clone(), &x * 1.2, 20, 20.0 * circle.step());
        let (with, w) = insert_backtrack(&circle, at, &spur).unwrap();
        assert_eq!(detect_backtracks(&with), vec![w]);
        let back = erase_backtrack(&with, w).unwrap();
        assert_eq!(back.points(), circle.points());
        assert!((back.length() - circle.length()).abs() < 1e-12);
        assert!(detect_backtracks(&circle).is_empty());
    }

    #[test]
    fn empty_spur_adds_two_samples() {
        let p = arc(0.0, 1.0, 10);
        let (with, w) = insert_backtrack(&p, 4, &SampledPath::point(p.points()[4].clone())).unwrap();
        assert_eq!(with.cells(), 12);
        assert_eq!(erase_backtrack(&with, w).unwrap().points(), p.points());
    }

    #[test]
    fn palindrome_erases_to_point() {
        let d = segment(v2(0.0, 0.0), v2(1.0, 1.0), 10, 1.0);
        let p = compose_paths(&d, &reverse_path(&d)).unwrap();
        let e = erase_backtrack(&p, BacktrackWindow { start: 0, half_width: 10 }).unwrap();
        assert!(e.is_constant());
        assert_eq!(e.start(), d.start());
    }

    #[test]
    fn non_mirror_window_is_rejected() {
        let p = arc(0.0, 1.0, 10);
        let r = erase_backtrack(&p, BacktrackWindow { start: 2, half_width: 2 });
        assert!(matches!(r, Err(Error::NotABacktrack { .. })));
    }

    #[test]
    fn constant_path_has_no_backtracks_and_canonicalizes() {
        let c = SampledPath::constant(v2(1.0, 1.0), 10, 0.1).unwrap();
        assert!(detect_backtracks(&c).is_empty());
        let k = canonicalize_identity(&c);
        assert_eq!(k.cells(), 2 * c.margin());
        assert_eq!(canonicalize_identity(&k).points(), k.points());
    }

    #[test]
    fn long_tail_trimmed_to_margin() {
        let f = arc(0.0, 1.0, 10);
        let tail = SampledPath::constant(f.end().clone(), 8, f.step()).unwrap();
        let p = compose_paths(&f, &tail).unwrap();
        let c = canonicalize_identity(&p);
        assert_eq!(c.points(), f.points());
    }

    #[test]
    fn csv_round_trip() {
        let p = arc(0.0, 1.0, 16);
        let mut buf = Vec::new();
        write_base_path_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x1,x2\n"));
        let q = read_base_path_csv(buf.as_slice()).unwrap();
        assert_eq!(q.points(), p.points());

        let so2 = GroupModel::so(2).unwrap();
        let bp = p
            .map(|x| Ok(BundlePoint { x: x.clone(), g: so2.exp(&so2.algebra_from_slice(&[x[0]])?)? }))
            .unwrap();
        let mut buf = Vec::new();
        write_bundle_path_csv(&bp, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("t,x1,x2,g11,g12,g21,g22\n"));
        let q = read_bundle_path_csv(buf.as_slice(), &so2, 2).unwrap();
        assert_eq!(q.max_diff(&bp), 0.0);
    }
}
