use ndarray::{Array1, Array2, Zip};

use super::{InnerProductSpace, KrylovSpace};
use crate::{Error, Result, C64};

/// `C^d` with the standard Hermitian inner product and an optional dense
/// propagator.
#[derive(Debug, Clone)]
pub struct DenseSpace {
    dim: usize,
    propagator: Option<Array2<C64>>,
}

impl DenseSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            propagator: None,
        }
    }

    /// Panics if `u` is not square.
    pub fn with_propagator(u: Array2<C64>) -> Self {
        assert!(u.is_square(), "propagator must be square");
        Self {
            dim: u.nrows(),
            propagator: Some(u),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn propagator(&self) -> Option<&Array2<C64>> {
        self.propagator.as_ref()
    }
}

impl InnerProductSpace for DenseSpace {
    type Vector = Array1<C64>;

    fn inner(&self, u: &Array1<C64>, v: &Array1<C64>) -> C64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    }

    fn axpy(&self, alpha: C64, x: &Array1<C64>, y: &mut Array1<C64>) {
        Zip::from(y).and(x).for_each(|y, &x| *y += alpha * x);
    }

    fn scale(&self, alpha: C64, x: &mut Array1<C64>) {
        x.mapv_inplace(|v| v * alpha);
    }
}

impl KrylovSpace for DenseSpace {
    fn propagate(&self, v: &Array1<C64>) -> Result<Array1<C64>> {
        let u = self
            .propagator
            .as_ref()
            .ok_or_else(|| Error::PropagatorFailure("space has no propagator".into()))?;
        if v.len() != self.dim {
            return Err(Error::PropagatorFailure(format!(
                "vector of length {} in a space of dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(u.dot(v))
    }
}
