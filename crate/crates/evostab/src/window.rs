//! Windows of vector samples `u_0, ..., u_N`.
//!
//! A window is the finite-horizon stand-in for a compactly supported
//! sequence: slot `k` holds the vector `u_k` in `R^d`. Storage is a dense
//! `(N+1) x d` array (row = slot), which keeps scalar families cheap and
//! dense families cache-friendly.

use crate::error::Error;
use crate::num::Real;
use crate::Result;
use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceWindow<T> {
    values: Array2<T>,
}

impl<T: Real> SequenceWindow<T> {
    pub fn zeros(horizon: usize, dim: usize) -> Self {
        SequenceWindow { values: Array2::zeros((horizon + 1, dim)) }
    }

    pub fn from_array(values: Array2<T>) -> Self {
        SequenceWindow { values }
    }

    /// number of slots minus one (slots are `0 ..= horizon`)
    pub fn horizon(&self) -> usize {
        self.values.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    pub fn slot(&self, k: usize) -> ArrayView1<'_, T> {
        self.values.row(k)
    }

    pub fn set_slot(&mut self, k: usize, x: ArrayView1<T>) {
        self.values.row_mut(k).assign(&x);
    }

    pub fn scale_slot(&mut self, k: usize, c: T) {
        self.values.row_mut(k).mapv_inplace(|v| v * c);
    }

    pub fn as_array(&self) -> &Array2<T> {
        &self.values
    }

    pub fn slot_is_zero(&self, k: usize) -> bool {
        self.values.row(k).iter().all(|v| *v == T::zero())
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        self.values
            .rows()
            .into_iter()
            .position(|row| row.iter().any(|v| !v.is_finite()))
    }

    /// Spike window: zero everywhere except `u_n = x`.
    pub fn spike(horizon: usize, n: usize, x: ArrayView1<T>) -> Self {
        let mut w = SequenceWindow::zeros(horizon, x.len());
        w.set_slot(n, x);
        w
    }
}

/// JSON wire form for windows (`solve` input/output). Slots are rows.
#[derive(Debug, Serialize, Deserialize)]
pub struct WindowFile {
    pub dimension: usize,
    pub values: Vec<Vec<f64>>,
}

impl WindowFile {
    pub fn into_window(self) -> Result<SequenceWindow<f64>> {
        if self.dimension == 0 {
            return Err(Error::invalid("window dimension must be >= 1"));
        }
        if self.values.is_empty() {
            return Err(Error::invalid("window must have at least one slot"));
        }
        let mut a = Array2::zeros((self.values.len(), self.dimension));
        for (k, row) in self.values.iter().enumerate() {
            if row.len() != self.dimension {
                return Err(Error::DimensionMismatch { expected: self.dimension, found: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { context: "reading window file", index: k });
                }
                a[[k, j]] = *v;
            }
        }
        Ok(SequenceWindow::from_array(a))
    }

    pub fn from_window(w: &SequenceWindow<f64>) -> Self {
        WindowFile {
            dimension: w.dim(),
            values: w.as_array().rows().into_iter().map(|r| r.to_vec()).collect(),
        }
    }
}

/// Convenience: basis vector `e_i` in `R^d`.
pub fn basis_vector<T: Real>(dim: usize, i: usize) -> Array1<T> {
    let mut x = Array1::zeros(dim);
    x[i] = T::one();
    x
}
