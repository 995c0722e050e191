//! Coordinate charts: named axes with bounds and periodicity flags.

use crate::error::{Error, Result};
use crate::exterior::MAX_DIM;

/// One coordinate axis of a chart.
#[derive(Clone, Debug)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

/// A box-shaped coordinate chart. Axis k of the chart corresponds to the
/// 1-based form axis k+1; integration orientation is the axis order.
#[derive(Clone, Debug)]
pub struct Chart {
    name: String,
    axes: Vec<Axis>,
}

impl Chart {
    pub fn new(name: &str, axes: &[(&str, f64, f64, bool)]) -> Result<Self> {
        if axes.len() > MAX_DIM {
            return Err(Error::BadConfig(format!(
                "chart {name} needs at most {MAX_DIM} axes, got {}",
                axes.len()
            )));
        }
        let mut built = Vec::with_capacity(axes.len());
        for &(axis_name, lo, hi, periodic) in axes {
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::BadConfig(format!(
                    "axis {axis_name} of chart {name} has bad bounds [{lo}, {hi}]"
                )));
            }
            built.push(Axis {
                name: axis_name.to_string(),
                lo,
                hi,
                periodic,
            });
        }
        Ok(Chart {
            name: name.to_string(),
            axes: built,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn extent(&self, k: usize) -> f64 {
        self.axes[k].hi - self.axes[k].lo
    }

    pub fn center(&self) -> Vec<f64> {
        self.axes.iter().map(|a| 0.5 * (a.lo + a.hi)).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && self
                .axes
                .iter()
                .zip(x)
                .all(|(a, &v)| v >= a.lo && v <= a.hi)
    }

    /// Whether two charts describe the same coordinate box (axis names,
    /// bounds, and periodicity all agree).
    pub fn same_box(&self, other: &Chart) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| {
                a.name == b.name && a.lo == b.lo && a.hi == b.hi && a.periodic == b.periodic
            })
    }

    /// Product chart: axes of `self` followed by axes of `other`, renamed
    /// with `_1` / `_2` suffixes to stay unambiguous.
    pub fn product(&self, other: &Chart, name: &str) -> Result<Chart> {
        let mut axes: Vec<(String, f64, f64, bool)> = Vec::new();
        for a in &self.axes {
            axes.push((format!("{}_1", a.name), a.lo, a.hi, a.periodic));
        }
        for a in &other.axes {
            axes.push((format!("{}_2", a.name), a.lo, a.hi, a.periodic));
        }
        let borrowed: Vec<(&str, f64, f64, bool)> = axes
            .iter()
            .map(|(n, lo, hi, p)| (n.as_str(), *lo, *hi, *p))
            .collect();
        Chart::new(name, &borrowed)
    }

    /// Midpoint grid over the chart box with `cells[k]` cells on axis k.
    /// Nodes are visited in lexicographic order, so accumulation order is
    /// deterministic.
    pub fn midpoint_grid(&self, cells: &[usize]) -> Result<MidpointGrid> {
        if cells.len() != self.dim() || cells.iter().any(|&c| c == 0) {
            return Err(Error::BadConfig(format!(
                "grid {cells:?} does not fit chart {} of dimension {}",
                self.name,
                self.dim()
            )));
        }
        let h: Vec<f64> = self
            .axes
            .iter()
            .zip(cells)
            .map(|(a, &c)| (a.hi - a.lo) / c as f64)
            .collect();
        Ok(MidpointGrid {
            lo: self.axes.iter().map(|a| a.lo).collect(),
            h,
            cells: cells.to_vec(),
            idx: vec![0; cells.len()],
            done: false,
        })
    }
}

/// Lexicographic iterator over midpoint nodes of a uniform grid.
pub struct MidpointGrid {
    lo: Vec<f64>,
    h: Vec<f64>,
    cells: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl MidpointGrid {
    pub fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }

    pub fn num_nodes(&self) -> usize {
        self.cells.iter().product()
    }
}

impl Iterator for MidpointGrid {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.done {
            return None;
        }
        let node: Vec<f64> = self
            .idx
            .iter()
            .enumerate()
            .map(|(k, &i)| self.lo[k] + (i as f64 + 0.5) * self.h[k])
            .collect();
        // Odometer increment, last axis fastest.
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.cells[k] {
                break;
            }
            self.idx[k] = 0;
        }
        Some(node)
    }
}
