//! Cell-centered finite-volume grids on `[0, L]` and conservative
//! flux-form operators with no-flux boundaries.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const MIN_CELLS: usize = 8;

/// Line segment, or the radial coordinate of a radially symmetric problem
/// in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Geometry {
    Line,
    Radial { dim: u8 },
}

impl Geometry {
    /// Factor entering the diffusive CFL bound.
    pub fn effective_dim(self) -> f64 {
        match self {
            Geometry::Line => 1.0,
            Geometry::Radial { dim } => dim as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    geometry: Geometry,
    length: f64,
    dx: f64,
    centers: Vec<f64>,
    volumes: Vec<f64>,
    /// `m + 1` face weights, face `j` sits at `x = j·dx`.
    face_weights: Vec<f64>,
}

impl Grid {
    pub fn new(geometry: Geometry, length: f64, cells: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Param {
                name: "L",
                reason: format!("must be positive (got {length})"),
            });
        }
        if cells < MIN_CELLS {
            return Err(Error::Param {
                name: "m",
                reason: format!("need at least {MIN_CELLS} cells (got {cells})"),
            });
        }
        if let Geometry::Radial { dim } = geometry {
            if !(1..=3).contains(&dim) {
                return Err(Error::Param {
                    name: "dim",
                    reason: format!("must be 1, 2 or 3 (got {dim})"),
                });
            }
        }
        let dx = length / cells as f64;
        let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * dx).collect();
        let (volumes, face_weights) = match geometry {
            Geometry::Line => (vec![dx; cells], vec![1.0; cells + 1]),
            Geometry::Radial { dim } => {
                let e = dim as i32 - 1;
                // exact shell measure ∫ r^(d−1) dr over each cell
                let volumes = if dim == 1 {
                    vec![dx; cells]
                } else {
                    (0..cells)
                        .map(|i| {
                            let lo = i as f64 * dx;
                            let hi = (i + 1) as f64 * dx;
                            (hi.powi(e + 1) - lo.powi(e + 1)) / (e + 1) as f64
                        })
                        .collect()
                };
                let mut faces: Vec<f64> = (0..=cells).map(|j| (j as f64 * dx).powi(e)).collect();
                // symmetry axis
                faces[0] = 0.0;
                (volumes, faces)
            }
        };
        Ok(Grid {
            geometry,
            length,
            dx,
            centers,
            volumes,
            face_weights,
        })
    }

    pub fn line(length: f64, cells: usize) -> Result<Self> {
        Grid::new(Geometry::Line, length, cells)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.centers.len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn face_weights(&self) -> &[f64] {
        &self.face_weights
    }

    /// Position of face `j` (between cells `j−1` and `j`).
    pub fn face_position(&self, j: usize) -> f64 {
        j as f64 * self.dx
    }

    /// Discrete integral `Σ w_i f_i`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.volumes.iter().zip(values).map(|(w, f)| w * f).sum()
    }

    /// Flux-form Laplacian of cell values with zero flux through both ends:
    /// `(1/w_i)[a_{i+½}(u_{i+1}−u_i) − a_{i−½}(u_i−u_{i−1})]/dx`.
    pub(crate) fn flux_laplacian(&self, u: &[f64], out: &mut [f64]) {
        let m = self.cells();
        debug_assert_eq!(u.len(), m);
        debug_assert_eq!(out.len(), m);
        let inv_dx = 1.0 / self.dx;
        let mut left_flux = 0.0;
        for i in 0..m {
            let right_flux = if i + 1 < m {
                self.face_weights[i + 1] * (u[i + 1] - u[i]) * inv_dx
            } else {
                0.0
            };
            out[i] = (right_flux - left_flux) / self.volumes[i];
            left_flux = right_flux;
        }
    }

    /// Largest coefficient `(a_{i−½}+a_{i+½})/(w_i dx)` of the discrete
    /// Laplacian, i.e. the diagonal entry the CFL bound must control.
    pub fn max_diagonal(&self) -> f64 {
        let m = self.cells();
        (0..m)
            .map(|i| {
                let left = if i > 0 { self.face_weights[i] } else { 0.0 };
                let right = if i + 1 < m {
                    self.face_weights[i + 1]
                } else {
                    0.0
                };
                (left + right) / (self.volumes[i] * self.dx)
            })
            .fold(0.0, f64::max)
    }
}

/// Gradients `(f_{i+1} − f_i)/dx` at the `m+1` faces of a row of cells;
/// the two boundary faces carry zero.
pub fn face_gradients(values: &[f64], dx: f64) -> Vec<f64> {
    let m = values.len();
    let mut out = vec![0.0; m + 1];
    for j in 1..m {
        out[j] = (values[j] - values[j - 1]) / dx;
    }
    out
}

/// Cell-averaged values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::FieldLength {
                expected: grid.cells(),
                got: values.len(),
            });
        }
        if let Some(cell) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { cell });
        }
        Ok(Field { grid, values })
    }

    pub fn constant(grid: Arc<Grid>, value: f64) -> Result<Self> {
        let m = grid.cells();
        Field::new(grid, vec![value; m])
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.centers().iter().map(|&x| f(x)).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Discrete mass `Σ w_i f_i`.
    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn face_gradient(&self) -> Vec<f64> {
        face_gradients(&self.values, self.grid.dx())
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Conservative discretization of `ΔΣ(n)` for a density field.
    pub fn laplacian_sigma(&self, params: &ModelParams) -> Result<Field> {
        let sigma = sigma_values(&self.values, params)?;
        let mut out = vec![0.0; sigma.len()];
        self.grid.flux_laplacian(&sigma, &mut out);
        Ok(Field {
            grid: Arc::clone(&self.grid),
            values: out,
        })
    }
}

/// `Σ(n_i)` cellwise, refusing negative densities.
pub(crate) fn sigma_values(n: &[f64], params: &ModelParams) -> Result<Vec<f64>> {
    n.iter().map(|&v| params.sigma(v)).collect()
}
