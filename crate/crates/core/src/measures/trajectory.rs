use crate::error::{Error, Result};

/// Closed time interval `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start >= 0.0 && end > start) {
            return Err(Error::InvalidParameter(format!("invalid time window [{start}, {end}]")));
        }
        Ok(Self { start, end })
    }

    /// `points` equally spaced times including both endpoints exactly.
    pub fn grid(&self, points: usize) -> Result<Vec<f64>> {
        if points < 2 {
            return Err(Error::InvalidParameter(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(uniform_grid(self.start, self.end, points))
    }
}

pub(crate) fn uniform_grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|k| start + (end - start) * (k as f64 / last))
        .collect();
    grid[points - 1] = end;
    grid
}

/// Sampled scalar series over a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "trajectory needs >= 2 matching samples, got {} times and {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("trajectory times must strictly increase".into()));
        }
        if values.iter().chain(&times).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("trajectory contains non-finite samples".into()));
        }
        Ok(Self { times, values })
    }

    /// Plain samples of `f` on `grid`.
    pub fn sample(f: impl Fn(f64) -> f64, grid: &[f64]) -> Result<Self> {
        Self::new(grid.to_vec(), grid.iter().map(|&t| f(t)).collect())
    }

    /// Samples of `f` on `grid` plus every local extremum the grid brackets,
    /// located by golden-section search and inserted as an extra sample.
    ///
    /// Interior extrema are detected from sign changes of consecutive
    /// increments; the first and last cells are searched unconditionally.
    /// This makes the sum of positive increments exact for piecewise-monotone
    /// `f` even at kinks such as `|kappa| = 0`.
    pub fn sample_refined(f: impl Fn(f64) -> f64, grid: &[f64]) -> Result<Self> {
        let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
        let n = grid.len();
        if n < 2 {
            return Self::new(grid.to_vec(), values);
        }
        let mut extra: Vec<(f64, f64)> = Vec::new();
        for k in 1..n - 1 {
            let left = values[k] - values[k - 1];
            let right = values[k + 1] - values[k];
            let is_max = left >= 0.0 && right <= 0.0 && (left > 0.0 || right < 0.0);
            let is_min = left <= 0.0 && right >= 0.0 && (left < 0.0 || right > 0.0);
            if !(is_max || is_min) {
                continue;
            }
            let (t, v) = golden_extremum(&f, grid[k - 1], grid[k + 1], is_max);
            let better = if is_max { v > values[k] } else { v < values[k] };
            if better && t > grid[k - 1] && t < grid[k + 1] && t != grid[k] {
                extra.push((t, v));
            }
        }
        let mut edge_cells = vec![0];
        if n > 2 {
            edge_cells.push(n - 2);
        }
        for k in edge_cells {
            let (a, b) = (grid[k], grid[k + 1]);
            let (lo, hi) = (values[k].min(values[k + 1]), values[k].max(values[k + 1]));
            for maximize in [true, false] {
                let (t, v) = golden_extremum(&f, a, b, maximize);
                let beyond = if maximize { v > hi } else { v < lo };
                if beyond && t > a && t < b {
                    extra.push((t, v));
                }
            }
        }
        if extra.is_empty() {
            return Self::new(grid.to_vec(), values);
        }
        let mut samples: Vec<(f64, f64)> = grid.iter().copied().zip(values).chain(extra).collect();
        samples.sort_by(|x, y| x.0.total_cmp(&y.0));
        samples.dedup_by(|next, prev| next.0 <= prev.0);
        let (times, values) = samples.into_iter().unzip();
        Self::new(times, values)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cumulative positive increments up to each checkpoint. Every
    /// checkpoint must be one of the sample times.
    pub fn backflow_at(&self, checkpoints: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut cumulative = 0.0;
        let mut k = 0;
        for &c in checkpoints {
            while self.times[k] < c {
                if k + 1 >= self.len() {
                    break;
                }
                cumulative += (self.values[k + 1] - self.values[k]).max(0.0);
                k += 1;
            }
            if self.times[k] != c {
                return Err(Error::InvalidParameter(format!("checkpoint {c} is not a sample time")));
            }
            out.push(cumulative);
        }
        Ok(out)
    }
}

/// `sum_k max(0, v[k+1] - v[k])`.
pub fn blp_integral(traj: &Trajectory) -> f64 {
    traj.values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// Maximal runs of consecutive cells with positive increments.
pub fn backflow_intervals(traj: &Trajectory) -> Vec<(f64, f64)> {
    let flags: Vec<bool> = traj.values.windows(2).map(|w| w[1] > w[0]).collect();
    cells_to_intervals(&traj.times, &flags)
}

pub(crate) fn cells_to_intervals(times: &[f64], flags: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open: Option<f64> = None;
    for (k, &on) in flags.iter().enumerate() {
        match (on, open) {
            (true, None) => open = Some(times[k]),
            (false, Some(s)) => {
                out.push((s, times[k]));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        out.push((s, times[flags.len()]));
    }
    out
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the extremum of a unimodal `f` on `[a, b]`.
/// Returns the best evaluated point.
pub(crate) fn golden_extremum(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, maximize: bool) -> (f64, f64) {
    let score = |v: f64| if maximize { -v } else { v };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if score(f1) <= score(f2) { (x1, f1) } else { (x2, f2) };
    for _ in 0..160 {
        if b - a <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) + f64::MIN_POSITIVE {
            break;
        }
        if score(f1) <= score(f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if score(f1) < score(best.1) {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if score(f2) < score(best.1) {
                best = (x2, f2);
            }
        }
    }
    best
}
