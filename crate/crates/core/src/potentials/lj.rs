//! Lennard-Jones clusters in reduced units.
//!
//! Pair potential `v(r) = 1/r¹² − 2/r⁶` (minimum −1 at r = 1); the cluster
//! energy sums all N(N−1)/2 pairs exactly — no cutoff, the clusters in scope
//! are small. Configuration space is the 3N Cartesian coordinates, flattened
//! particle-major: `[x0, y0, z0, x1, y1, z1, ...]`.

use crate::num::{cast, Scalar};
use crate::pes::{PesError, PotentialSurface};
use crate::vector::StateVector;

const OVERLAP_GUARD: f64 = 1e-10;

/// An N-particle Lennard-Jones cluster surface.
#[derive(Clone, Copy, Debug)]
pub struct LJCluster {
    particle_count: usize,
}

impl LJCluster {
    pub fn new(particle_count: usize) -> Self {
        assert!(particle_count >= 2, "a cluster needs at least two particles");
        Self { particle_count }
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    fn particle<F: Scalar>(x: &StateVector<F>, i: usize) -> [F; 3] {
        let s = x.as_slice();
        [s[3 * i], s[3 * i + 1], s[3 * i + 2]]
    }
}

impl<F: Scalar> PotentialSurface<F> for LJCluster {
    fn dimension(&self) -> usize {
        3 * self.particle_count
    }

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError> {
        self.check_dimension(x)?;
        let guard: F = cast(OVERLAP_GUARD);
        let two: F = cast(2.0);
        let mut total = F::zero();
        for i in 0..self.particle_count {
            let pi = Self::particle(x, i);
            for j in (i + 1)..self.particle_count {
                let pj = Self::particle(x, j);
                let dx = pi[0] - pj[0];
                let dy = pi[1] - pj[1];
                let dz = pi[2] - pj[2];
                let r2 = dx * dx + dy * dy + dz * dz;
                let r = r2.sqrt();
                if r < guard {
                    return Err(PesError::OverlappingParticles {
                        i,
                        j,
                        distance: r.to_f64().unwrap_or(0.0),
                    });
                }
                let inv6 = F::one() / (r2 * r2 * r2);
                total += inv6 * inv6 - two * inv6;
            }
        }
        Ok(total)
    }

    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        self.check_dimension(x)?;
        let guard: F = cast(OVERLAP_GUARD);
        let twelve: F = cast(12.0);
        let mut grad = vec![F::zero(); x.dim()];
        for i in 0..self.particle_count {
            let pi = Self::particle(x, i);
            for j in (i + 1)..self.particle_count {
                let pj = Self::particle(x, j);
                let d = [pi[0] - pj[0], pi[1] - pj[1], pi[2] - pj[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let r = r2.sqrt();
                if r < guard {
                    return Err(PesError::OverlappingParticles {
                        i,
                        j,
                        distance: r.to_f64().unwrap_or(0.0),
                    });
                }
                // v'(r) = −12 r⁻¹³ + 12 r⁻⁷; chain rule through r gives
                // dV/d(r_i) = v'(r)/r · (r_i − r_j), elementwise.
                let inv2 = F::one() / r2;
                let inv6 = inv2 * inv2 * inv2;
                let scale = twelve * inv6 * inv2 * (F::one() - inv6);
                for a in 0..3 {
                    grad[3 * i + a] += scale * d[a];
                    grad[3 * j + a] -= scale * d[a];
                }
            }
        }
        Ok(StateVector::new(grad).expect("finite input yields finite gradient"))
    }
}

/// Ideal pentagonal bipyramid with unit bond lengths, centered at the origin:
/// a five-ring in the z = 0 plane plus two apex particles. The global LJ7
/// minimum has this geometry; relax with gradient descent to land on it.
pub fn pentagonal_bipyramid<F: Scalar>() -> StateVector<F> {
    let ring_radius = 1.0 / (2.0 * (std::f64::consts::PI / 5.0).sin());
    let apex_z = (1.0 - ring_radius * ring_radius).sqrt();
    let mut coords: Vec<F> = Vec::with_capacity(21);
    for k in 0..5 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
        coords.push(cast(ring_radius * th.cos()));
        coords.push(cast(ring_radius * th.sin()));
        coords.push(F::zero());
    }
    for z in [apex_z, -apex_z] {
        coords.push(F::zero());
        coords.push(F::zero());
        coords.push(cast(z));
    }
    StateVector::new(coords).expect("finite geometry")
}
