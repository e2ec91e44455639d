//! Rectangular grids over `R^k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `origin + idx ⊙ spacing` for `idx[a] in 0..=steps[a]`. Nodes are stored
/// lexicographically with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    steps: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, steps: Vec<usize>) -> Result<Self> {
        if origin.is_empty() {
            return Err(Error::InvalidGrid("no axes"));
        }
        if spacing.len() != origin.len() || steps.len() != origin.len() {
            return Err(Error::ShapeMismatch {
                what: "grid axes",
                expected: origin.len(),
                found: if spacing.len() != origin.len() {
                    spacing.len()
                } else {
                    steps.len()
                },
            });
        }
        if origin.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "grid origin" });
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidGrid("spacing must be positive and finite"));
        }
        if steps.iter().any(|&s| s < 2) {
            return Err(Error::InvalidGrid("each axis needs at least 2 steps"));
        }
        Ok(Self {
            origin,
            spacing,
            steps,
        })
    }

    /// Axis-aligned cube `[origin, origin + steps·h]^k`.
    pub fn uniform(k: usize, origin: f64, h: f64, steps: usize) -> Result<Self> {
        Self::new(vec![origin; k], vec![h; k], vec![steps; k])
    }

    /// Same extent with spacing `h` on every axis; step counts are rounded.
    pub fn with_spacing(&self, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid("spacing must be positive and finite"));
        }
        let steps = self
            .extent()
            .iter()
            .map(|e| libm::round(e / h) as usize)
            .collect();
        Self::new(self.origin.clone(), vec![h; self.dim()], steps)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn extent(&self) -> Vec<f64> {
        self.spacing
            .iter()
            .zip(&self.steps)
            .map(|(h, s)| h * *s as f64)
            .collect()
    }

    pub fn max_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(0.0, f64::max)
    }

    pub fn nodes_on_axis(&self, axis: usize) -> usize {
        self.steps[axis] + 1
    }

    pub fn node_count(&self) -> usize {
        self.steps.iter().map(|s| s + 1).product()
    }

    /// Linear-index stride of each axis.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * (self.steps[a + 1] + 1);
        }
        strides
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(self.strides())
            .map(|(i, s)| i * s)
            .sum()
    }

    pub fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            let n = self.steps[a] + 1;
            idx[a] = lin % n;
            lin /= n;
        }
        idx
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.spacing[axis]
    }

    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| self.coordinate(a, i))
            .collect()
    }

    /// Coordinates of every node in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.node_count()).map(move |l| self.node(&self.multi_index(l)))
    }
}
