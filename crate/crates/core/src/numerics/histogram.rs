use serde::Serialize;

use super::GridSpec;
use crate::{Error, Result};

/// Probability mass per screen bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedHistogram {
    edges: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedHistogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::HistogramEdges);
        }
        let weights = vec![0.0; edges.len() - 1];
        Ok(Self { edges, weights })
    }

    /// One bin per cell of `grid`.
    pub fn for_grid(grid: &GridSpec) -> Self {
        Self::new(grid.edges()).expect("grid edges are increasing")
    }

    pub fn from_weights(edges: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut h = Self::new(edges)?;
        if weights.len() != h.weights.len() || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidWeight);
        }
        h.weights = weights;
        Ok(h)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total() <= 0.0
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| w[1] - w[0])
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Add `w ≥ 0` to bin `i`.
    pub fn add(&mut self, i: usize, w: f64) {
        debug_assert!(w >= 0.0);
        self.weights[i] += w;
    }

    /// `self += scale · values`, values aligned with bins.
    pub fn accumulate(&mut self, values: &[f64], scale: f64) {
        debug_assert_eq!(values.len(), self.weights.len());
        for (w, v) in self.weights.iter_mut().zip(values) {
            *w += scale * v;
        }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.weights.iter_mut().for_each(|w| *w *= s);
        self
    }

    /// Elementwise sum; edges must match exactly.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.edges != other.edges {
            return Err(Error::HistogramMismatch);
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            edges: self.edges.clone(),
            weights,
        })
    }

    /// Largest per-bin absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}
