//! Stability diagrams: `J` swept over an `(omega, gamma)` mesh, level curves
//! by marching squares, and the CSV/JSON file formats.

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::boundary::BoundaryCurve;
use crate::error::{Error, Result};
use crate::model::NonlinearityParams;
use crate::profile::{critical_points, find_a};
use crate::stability::eval_j;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Finite(f64),
    /// No standing wave at this point.
    Nonexistent,
    /// On the nonexistence curve; carries the sign of the blow-up.
    Divergent(f64),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Cell::Finite(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramGrid {
    pub params: NonlinearityParams,
    pub omega_axis: Vec<f64>,
    pub gamma_axis: Vec<f64>,
    /// `values[i][j]` is the cell at `(omega_axis[j], gamma_axis[i])`.
    pub values: Vec<Vec<Cell>>,
    /// Number of critical points of `F1` below the amplitude. Neighbouring
    /// cells with different counts sit on opposite sides of the
    /// nonexistence curve and are not contoured across.
    pub branch: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourSet {
    pub level: f64,
    pub paths: Vec<Vec<[f64; 2]>>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect()
}

/// Evaluate one mesh point.
pub fn eval_cell(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<(Cell, u8)> {
    match eval_j(params, omega, gamma) {
        Ok(v) => {
            let a = find_a(params, omega, gamma)?.a;
            let branch = critical_points(params, gamma).iter().filter(|&&s| s < a).count() as u8;
            let cell = if v.diverging { Cell::Divergent(v.j.signum()) } else { Cell::Finite(v.j) };
            Ok((cell, branch))
        }
        Err(Error::NotFound(_)) => Ok((Cell::Nonexistent, 0)),
        Err(e) => Err(e),
    }
}

/// Sweep `J` over an `nx` by `ny` mesh spanning the closed ranges, on
/// `jobs` worker threads (all available when `None`).
pub fn sweep_grid(
    params: &NonlinearityParams,
    omega_range: (f64, f64),
    gamma_range: (f64, f64),
    nx: usize,
    ny: usize,
    jobs: Option<usize>,
) -> Result<DiagramGrid> {
    let (w0, w1) = omega_range;
    let (g0, g1) = gamma_range;
    if nx < 2 || ny < 2 {
        return Err(Error::Domain(format!("mesh needs at least 2x2 points, got {nx}x{ny}")));
    }
    if !(w0 > 0.0 && w1 > w0 && w1.is_finite()) {
        return Err(Error::Domain(format!("omega range must satisfy 0 < lo < hi, got [{w0}, {w1}]")));
    }
    if !(g1 > g0 && g0.is_finite() && g1.is_finite()) {
        return Err(Error::Domain(format!("gamma range must satisfy lo < hi, got [{g0}, {g1}]")));
    }
    let omega_axis = linspace(w0, w1, nx);
    let gamma_axis = linspace(g0, g1, ny);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    let flat: Vec<(Cell, u8)> = pool.install(|| {
        (0..nx * ny)
            .into_par_iter()
            .map(|k| eval_cell(params, omega_axis[k % nx], gamma_axis[k / nx]))
            .collect::<Result<Vec<_>>>()
    })?;
    let values = flat.chunks(nx).map(|row| row.iter().map(|c| c.0).collect()).collect();
    let branch = flat.chunks(nx).map(|row| row.iter().map(|c| c.1).collect()).collect();
    Ok(DiagramGrid { params: *params, omega_axis, gamma_axis, values, branch })
}

/// Edge of the mesh: horizontal edges join `(i, j)`-`(i, j+1)`, vertical
/// edges join `(i, j)`-`(i+1, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

fn edge_point(grid: &DiagramGrid, edge: Edge, level: f64) -> [f64; 2] {
    let (a, b) = match edge {
        Edge::H(i, j) => ((i, j), (i, j + 1)),
        Edge::V(i, j) => ((i, j), (i + 1, j)),
    };
    let va = grid.values[a.0][a.1].value().unwrap_or(f64::NAN);
    let vb = grid.values[b.0][b.1].value().unwrap_or(f64::NAN);
    let t = ((level - va) / (vb - va)).clamp(0.0, 1.0);
    let pa = [grid.omega_axis[a.1], grid.gamma_axis[a.0]];
    let pb = [grid.omega_axis[b.1], grid.gamma_axis[b.0]];
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

/// Segments of one cell, as pairs of crossed edges. `center` resolves saddles.
fn cell_segments<C: FnMut() -> f64>(corners: [f64; 4], level: f64, edges: [Edge; 4], mut center: C) -> Vec<(Edge, Edge)> {
    let high: Vec<bool> = corners.iter().map(|&v| v >= level).collect();
    let crossed: Vec<usize> = (0..4).filter(|&k| high[k] != high[(k + 1) % 4]).collect();
    match crossed.len() {
        2 => vec![(edges[crossed[0]], edges[crossed[1]])],
        4 => {
            // Corner k sits between edges k-1 and k. Cut off the corners
            // whose state differs from the centre.
            let center_high = center() >= level;
            (0..4)
                .filter(|&k| high[k] != center_high)
                .map(|k| (edges[(k + 3) % 4], edges[k]))
                .collect()
        }
        _ => Vec::new(),
    }
}

fn join(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    let walk = |start: usize, from: Edge, used: &mut Vec<bool>| {
        let mut chain = vec![from];
        let mut seg = start;
        let mut at = from;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            at = next;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        chain
    };
    // Open chains start at edges touched by a single segment.
    let mut starts: Vec<(Edge, usize)> = incident
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(&e, segs)| (e, segs[0]))
        .collect();
    starts.sort_by_key(|&(_, s)| s);
    for (edge, seg) in starts {
        if !used[seg] {
            chains.push(walk(seg, edge, &mut used));
        }
    }
    for seg in 0..segments.len() {
        if !used[seg] {
            chains.push(walk(seg, segments[seg].0, &mut used));
        }
    }
    chains
}

/// Level curves of the interpolated `J` at each level. Cells with a
/// sentinel corner or corners on different sides of the nonexistence curve
/// are skipped.
pub fn extract_contours(grid: &DiagramGrid, levels: &[f64]) -> Vec<ContourSet> {
    let ny = grid.gamma_axis.len();
    let nx = grid.omega_axis.len();
    levels
        .iter()
        .map(|&level| {
            let mut segments = Vec::new();
            for i in 0..ny.saturating_sub(1) {
                for j in 0..nx.saturating_sub(1) {
                    let idx = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)];
                    let Some(corners) = idx
                        .iter()
                        .map(|&(a, b)| grid.values[a][b].value())
                        .collect::<Option<Vec<f64>>>()
                    else {
                        continue;
                    };
                    let branch = grid.branch[i][j];
                    if idx.iter().any(|&(a, b)| grid.branch[a][b] != branch) {
                        continue;
                    }
                    let corners = [corners[0], corners[1], corners[2], corners[3]];
                    let edges = [Edge::H(i, j), Edge::V(i, j + 1), Edge::H(i + 1, j), Edge::V(i, j)];
                    let center = || {
                        let omega = 0.5 * (grid.omega_axis[j] + grid.omega_axis[j + 1]);
                        let gamma = 0.5 * (grid.gamma_axis[i] + grid.gamma_axis[i + 1]);
                        match eval_cell(&grid.params, omega, gamma) {
                            Ok((Cell::Finite(v), b)) if b == branch => v,
                            _ => 0.25 * corners.iter().sum::<f64>(),
                        }
                    };
                    segments.extend(cell_segments(corners, level, edges, center));
                }
            }
            let paths = join(&segments)
                .into_iter()
                .map(|chain| chain.into_iter().map(|e| edge_point(grid, e, level)).collect())
                .collect();
            ContourSet { level, paths }
        })
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_cell(c: Cell) -> String {
    match c {
        Cell::Finite(v) => fmt_num(v),
        Cell::Nonexistent => "NaN".into(),
        Cell::Divergent(s) if s > 0.0 => "+Inf".into(),
        Cell::Divergent(_) => "-Inf".into(),
    }
}

/// Grid as CSV: header `gamma\omega,<omega_1>,...`, one row per `gamma`
/// ascending, `NaN` for nonexistent and `+Inf`/`-Inf` for divergent cells.
pub fn write_grid_csv<W: Write>(grid: &DiagramGrid, mut out: W) -> std::io::Result<()> {
    let header: Vec<String> = grid.omega_axis.iter().map(|&w| fmt_num(w)).collect();
    writeln!(out, "gamma\\omega,{}", header.join(","))?;
    for (i, row) in grid.values.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&c| fmt_cell(c)).collect();
        writeln!(out, "{},{}", fmt_num(grid.gamma_axis[i]), cells.join(","))?;
    }
    Ok(())
}

pub fn export_grid_csv(grid: &DiagramGrid, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_grid_csv(grid, &mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Read a grid written by [`export_grid_csv`]. The file carries no
/// parameters or branch data, so `params` is attached and every branch is 0.
pub fn import_grid_csv(path: &Path, params: &NonlinearityParams) -> Result<DiagramGrid> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |reason: String| Error::Parse { path: path.to_path_buf(), reason };
    let parse = |s: &str| -> Result<f64> { s.trim().parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}"))) };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let mut fields = header.split(',');
    if fields.next() != Some("gamma\\omega") {
        return Err(bad("missing gamma\\omega header".into()));
    }
    let omega_axis = fields.map(parse).collect::<Result<Vec<f64>>>()?;
    let mut gamma_axis = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        gamma_axis.push(parse(fields.next().unwrap_or(""))?);
        let row = fields
            .map(|f| match f.trim() {
                "NaN" => Ok(Cell::Nonexistent),
                "+Inf" => Ok(Cell::Divergent(1.0)),
                "-Inf" => Ok(Cell::Divergent(-1.0)),
                s => parse(s).map(Cell::Finite),
            })
            .collect::<Result<Vec<Cell>>>()?;
        if row.len() != omega_axis.len() {
            return Err(bad(format!("row {} has {} cells, expected {}", n + 2, row.len(), omega_axis.len())));
        }
        values.push(row);
    }
    let branch = vec![vec![0; omega_axis.len()]; gamma_axis.len()];
    Ok(DiagramGrid { params: *params, omega_axis, gamma_axis, values, branch })
}

fn params_json(params: &NonlinearityParams) -> serde_json::Value {
    json!({
        "p": params.p,
        "q": params.q,
        "r": params.r,
        "sign1": params.a1() as i32,
        "sign3": params.a3() as i32,
        "case": params.case().to_string(),
    })
}

/// Contours as a JSON array of `{"params", "level", "paths"}` objects.
pub fn contours_json(params: &NonlinearityParams, contours: &[ContourSet]) -> serde_json::Value {
    serde_json::Value::Array(
        contours
            .iter()
            .map(|c| json!({ "params": params_json(params), "level": c.level, "paths": c.paths }))
            .collect(),
    )
}

pub fn export_contours_json(params: &NonlinearityParams, contours: &[ContourSet], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&contours_json(params, contours))
        .map_err(|e| Error::Parse { path: path.to_path_buf(), reason: e.to_string() })?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn write_curve_csv<W: Write>(curve: &BoundaryCurve, mut out: W) -> std::io::Result<()> {
    writeln!(out, "a,omega_ne,gamma_ne")?;
    for s in &curve.samples {
        writeln!(out, "{},{},{}", fmt_num(s.a), fmt_num(s.omega_ne), fmt_num(s.gamma_ne))?;
    }
    Ok(())
}

pub fn export_curve_csv(curve: &BoundaryCurve, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_curve_csv(curve, &mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}
