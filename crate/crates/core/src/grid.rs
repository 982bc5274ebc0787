//! Regular lattices over a chart box.

use crate::error::{Error, Result};
use crate::hypersurface::ChartBox;

/// A tensor-product lattice. Points are listed row-major, first variable
/// slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartGrid {
    axes: Vec<Vec<f64>>,
}

impl ChartGrid {
    /// `samples[i]` evenly spaced values on `[lo_i + margin_i, hi_i - margin_i]`.
    pub fn new(chart: &ChartBox, samples: &[usize], margins: &[f64]) -> Result<Self> {
        let n = chart.dim();
        if samples.len() != n || margins.len() != n {
            return Err(Error::InvalidGrid(format!(
                "expected {n} sample counts and margins, got {} and {}",
                samples.len(),
                margins.len()
            )));
        }
        let mut axes = Vec::with_capacity(n);
        for i in 0..n {
            let (lo, hi) = (chart.lo[i] + margins[i], chart.hi[i] - margins[i]);
            if !(margins[i] >= 0.0) || !(lo < hi) {
                return Err(Error::InvalidGrid(format!(
                    "margin {} leaves no room on axis {}",
                    margins[i], chart.names[i]
                )));
            }
            axes.push(linspace(lo, hi, samples[i])?);
        }
        Ok(ChartGrid { axes })
    }

    /// A lattice from explicit axis values (each strictly increasing).
    pub fn from_axes(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("no axes".into()));
        }
        for a in &axes {
            if a.is_empty() || a.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidGrid("axis values must be strictly increasing".into()));
            }
        }
        Ok(ChartGrid { axes })
    }

    /// A small square patch of `samples` points per axis and side `2 * half`
    /// centred at `center`; handy for finite-difference identities.
    pub fn patch(center: &[f64], half: f64, samples: usize) -> Result<Self> {
        let axes = center
            .iter()
            .map(|&c| linspace(c - half, c + half, samples))
            .collect::<Result<Vec<_>>>()?;
        Self::from_axes(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest spacing over all axes (0 for single-sample axes).
    pub fn max_spacing(&self) -> f64 {
        self.axes
            .iter()
            .flat_map(|a| a.windows(2).map(|w| w[1] - w[0]))
            .fold(0.0, f64::max)
    }

    /// Multi-index of a flat position.
    pub fn unravel(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            let len = self.axes[i].len();
            idx[i] = k % len;
            k /= len;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.len() + i)
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        self.unravel(k).iter().zip(&self.axes).map(|(&i, a)| a[i]).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 samples per axis, got {count}"
        )));
    }
    let h = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { hi } else { lo + i as f64 * h })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_order() {
        let g = ChartGrid::from_axes(vec![vec![0.0, 1.0], vec![10.0, 20.0, 30.0]]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(0), vec![0.0, 10.0]);
        assert_eq!(g.point(1), vec![0.0, 20.0]);
        assert_eq!(g.point(3), vec![1.0, 10.0]);
        for k in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(k)), k);
        }
        assert_eq!(g.max_spacing(), 10.0);
    }

    #[test]
    fn margins_and_endpoints() {
        let chart = ChartBox::new(vec!["u".into(), "v".into()], vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        let g = ChartGrid::new(&chart, &[5, 3], &[0.1, 0.5]).unwrap();
        assert_eq!(g.axes()[0][0], 0.1);
        assert_eq!(g.axes()[0][4], 0.9);
        assert_eq!(g.axes()[1], vec![-0.5, 0.0, 0.5]);
        assert!(ChartGrid::new(&chart, &[5, 3], &[0.6, 0.1]).is_err());
        assert!(ChartGrid::new(&chart, &[1, 3], &[0.1, 0.1]).is_err());
    }
}
