//! Lifshitz–Petrich free energy on a periodic square, discretized with a
//! Fourier pseudo-spectral method.
//!
//! ```text
//! E[φ] = (1/|Ω|) ∫ { ½ [(q1² + Δ)(q2² + Δ) φ]² − (ε/2) φ² − (α/3) φ³ + ¼ φ⁴ } dr
//! ```
//!
//! over Ω = [0, L)² with an N×N grid, N a power of two. The two length
//! scales q1, q2 stabilize dodecagonal quasicrystals; the order parameter φ
//! carries a zero-mean constraint (mass conservation), so gradients are
//! projected to zero mean and evaluations reject fields whose mean exceeds
//! 1e-10.
//!
//! The linear operator acts as the Fourier multiplier
//! `ℓ(k) = (q1² − k²)(q2² − k²)` on φ̂; nonlinear terms are evaluated
//! pointwise in real space and the integral is the grid average. Energies are
//! densities per unit area. No dealiasing filter is applied; the cubic and
//! quartic products can alias at marginal resolution, so production runs use
//! resolutions where the spectrum decays well below the Nyquist band.
//!
//! The reported gradient is ∂E/∂φ_j — the variational derivative times the
//! quadrature weight 1/N² — so it agrees with central finite differences of
//! the energy over individual grid values, like every other surface here.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftNum, FftPlanner};

use crate::num::{cast, Scalar};
use crate::pes::{PesError, PotentialSurface, Preconditioner};
use crate::vector::StateVector;

const MEAN_TOL: f64 = 1e-10;

/// The LP surface over an N×N periodic grid. Configuration space is the
/// flattened field, row-major: index (i, j) ↦ grid point (iL/N, jL/N).
#[derive(Clone)]
pub struct LpSurface<F: Scalar + FftNum> {
    grid_size: usize,
    domain_length: F,
    epsilon: F,
    alpha: F,
    q1: F,
    q2: F,
    fft_fwd: Arc<dyn Fft<F>>,
    fft_inv: Arc<dyn Fft<F>>,
    /// ℓ(k) per flattened mode.
    multiplier: Vec<F>,
}

impl<F: Scalar + FftNum> LpSurface<F> {
    pub fn new(
        grid_size: usize,
        domain_length: F,
        epsilon: F,
        alpha: F,
        q1: F,
        q2: F,
    ) -> Self {
        assert!(
            grid_size >= 4 && grid_size.is_power_of_two(),
            "grid size must be a power of two >= 4"
        );
        assert!(domain_length > F::zero(), "domain length must be > 0");
        assert!(q1 > F::zero() && q2 > F::zero(), "length scales must be > 0");
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(grid_size);
        let fft_inv = planner.plan_fft_inverse(grid_size);

        let n = grid_size;
        let two_pi: F = cast(2.0 * std::f64::consts::PI);
        let dk = two_pi / domain_length;
        let wavenumber = |m: usize| -> F {
            let signed = if m <= n / 2 {
                m as isize
            } else {
                m as isize - n as isize
            };
            dk * cast(signed as f64)
        };
        let q1sq = q1 * q1;
        let q2sq = q2 * q2;
        let mut multiplier = Vec::with_capacity(n * n);
        for i in 0..n {
            let kx = wavenumber(i);
            for j in 0..n {
                let ky = wavenumber(j);
                let k2 = kx * kx + ky * ky;
                multiplier.push((q1sq - k2) * (q2sq - k2));
            }
        }

        Self {
            grid_size,
            domain_length,
            epsilon,
            alpha,
            q1,
            q2,
            fft_fwd,
            fft_inv,
            multiplier,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn domain_length(&self) -> F {
        self.domain_length
    }

    pub fn epsilon(&self) -> F {
        self.epsilon
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn q1(&self) -> F {
        self.q1
    }

    pub fn q2(&self) -> F {
        self.q2
    }

    fn check_mean(&self, x: &StateVector<F>) -> Result<(), PesError> {
        let mean = x.mean();
        if mean.abs() > cast(MEAN_TOL) {
            return Err(PesError::NonZeroMean {
                mean: mean.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// In-place 2D FFT over the flattened row-major buffer.
    fn fft2(&self, buf: &mut [Complex<F>], inverse: bool) {
        let n = self.grid_size;
        let fft = if inverse { &self.fft_inv } else { &self.fft_fwd };
        let mut scratch = vec![Complex::new(F::zero(), F::zero()); fft.get_inplace_scratch_len()];
        // Rows (contiguous), then columns via transpose.
        fft.process_with_scratch(buf, &mut scratch);
        let mut t = vec![Complex::new(F::zero(), F::zero()); n * n];
        for i in 0..n {
            for j in 0..n {
                t[j * n + i] = buf[i * n + j];
            }
        }
        fft.process_with_scratch(&mut t, &mut scratch);
        for j in 0..n {
            for i in 0..n {
                buf[i * n + j] = t[j * n + i];
            }
        }
    }

    /// Unnormalized forward transform of a real field.
    fn to_spectral(&self, field: &[F]) -> Vec<Complex<F>> {
        let mut buf: Vec<Complex<F>> = field.iter().map(|&v| Complex::new(v, F::zero())).collect();
        self.fft2(&mut buf, false);
        buf
    }

    /// Power spectrum |φ̂_k|² with the normalized transform convention.
    pub fn power_spectrum(&self, field: &StateVector<F>) -> Vec<F> {
        let spec = self.to_spectral(field.as_slice());
        let norm = F::one() / cast::<F>((self.grid_size * self.grid_size) as f64);
        spec.iter().map(|c| c.norm_sqr() * norm * norm).collect()
    }

    /// Wavevector (kx, ky) of a flattened mode index.
    pub fn mode_wavevector(&self, idx: usize) -> (F, F) {
        let n = self.grid_size;
        let two_pi: F = cast(2.0 * std::f64::consts::PI);
        let dk = two_pi / self.domain_length;
        let signed = |m: usize| -> F {
            let s = if m <= n / 2 {
                m as isize
            } else {
                m as isize - n as isize
            };
            dk * cast(s as f64)
        };
        (signed(idx / n), signed(idx % n))
    }

    /// Angular histogram of spectral power restricted to the shell
    /// `kmin <= |k| <= kmax`, with `bins` uniform bins over [0, 2π).
    pub fn shell_angular_power(
        &self,
        field: &StateVector<F>,
        kmin: F,
        kmax: F,
        bins: usize,
    ) -> Vec<F> {
        let power = self.power_spectrum(field);
        let mut hist = vec![F::zero(); bins];
        let two_pi = 2.0 * std::f64::consts::PI;
        for (idx, &p) in power.iter().enumerate() {
            let (kx, ky) = self.mode_wavevector(idx);
            let k = (kx * kx + ky * ky).sqrt();
            if k < kmin || k > kmax {
                continue;
            }
            let angle = ky
                .to_f64()
                .unwrap()
                .atan2(kx.to_f64().unwrap())
                .rem_euclid(two_pi);
            let bin = ((angle / two_pi) * bins as f64) as usize % bins;
            hist[bin] += p;
        }
        hist
    }

    /// Smooth random zero-mean field: white noise low-passed to `|k| <= k_cut`,
    /// scaled to the requested RMS amplitude. Deterministic in the seed.
    pub fn random_zero_mean_field(&self, seed: u64, rms: F, k_cut: F) -> StateVector<F> {
        let n = self.grid_size;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut buf: Vec<Complex<F>> = (0..n * n)
            .map(|_| Complex::new(cast::<F>(rng.random::<f64>() * 2.0 - 1.0), F::zero()))
            .collect();
        self.fft2(&mut buf, false);
        for (idx, c) in buf.iter_mut().enumerate() {
            let (kx, ky) = self.mode_wavevector(idx);
            let k = (kx * kx + ky * ky).sqrt();
            if k > k_cut || idx == 0 {
                *c = Complex::new(F::zero(), F::zero());
            }
        }
        self.fft2(&mut buf, true);
        let scale = F::one() / cast::<F>((n * n) as f64);
        let field: Vec<F> = buf.iter().map(|c| c.re * scale).collect();
        let v = StateVector::new(field).expect("finite noise field");
        let v = v.project_zero_mean();
        let current = (v.norm_squared() / cast::<F>((n * n) as f64)).sqrt();
        if current == F::zero() {
            v
        } else {
            v.scaled(rms / current)
        }
    }

    /// Twelve-beam seed on the q1 shell: the dodecagonal motif used to start
    /// quasicrystal relaxations. Beam wavevectors snap to the nearest lattice
    /// modes, so the seed is an approximant; relaxation tightens it.
    pub fn twelve_beam_seed(&self, amplitude: F) -> StateVector<F> {
        let n = self.grid_size;
        let l = self.domain_length.to_f64().unwrap();
        let dk = 2.0 * std::f64::consts::PI / l;
        let q = self.q1.to_f64().unwrap();
        let beams: Vec<(f64, f64)> = (0..12)
            .map(|j| {
                let th = std::f64::consts::PI / 6.0 * j as f64;
                let kx = (q * th.cos() / dk).round() * dk;
                let ky = (q * th.sin() / dk).round() * dk;
                (kx, ky)
            })
            .collect();
        let mut field = Vec::with_capacity(n * n);
        for i in 0..n {
            let x = l * i as f64 / n as f64;
            for j in 0..n {
                let y = l * j as f64 / n as f64;
                let mut v = 0.0;
                for &(kx, ky) in &beams {
                    v += (kx * x + ky * y).cos();
                }
                field.push(cast::<F>(v));
            }
        }
        let v = StateVector::new(field).expect("finite seed");
        v.project_zero_mean().scaled(amplitude)
    }

    /// Localized twelve-beam droplet seed: the dodecagonal motif under a
    /// Gaussian envelope of width `sigma_frac · L` centered in the domain,
    /// scaled so the largest field value is `peak`. Zero-mean.
    ///
    /// Nucleation searches start from this: a weak quasicrystalline droplet
    /// on the disordered background. An unstructured random perturbation also
    /// reaches the critical droplet in principle, but at shallow quench its
    /// escape from the flat disordered basin is impractically slow.
    pub fn localized_twelve_beam(&self, sigma_frac: F, peak: F) -> StateVector<F> {
        let beams = self.twelve_beam_seed(F::one());
        let enveloped = self.enveloped(&beams, sigma_frac);
        let max = enveloped.max_abs();
        enveloped.scaled(peak / max)
    }

    /// Single-beam stripe seed along x with wavenumber snapped to `q`, under
    /// the same Gaussian envelope. Used to nudge a quasicrystal toward a
    /// layered phase inside a central disc.
    pub fn localized_stripes(&self, sigma_frac: F, peak: F, q: F) -> StateVector<F> {
        let n = self.grid_size;
        let l = self.domain_length.to_f64().unwrap();
        let dk = 2.0 * std::f64::consts::PI / l;
        let kx = (q.to_f64().unwrap() / dk).round() * dk;
        let mut field = Vec::with_capacity(n * n);
        for i in 0..n {
            let x = l * i as f64 / n as f64;
            let v = cast::<F>((kx * x).cos());
            for _ in 0..n {
                field.push(v);
            }
        }
        let stripes = StateVector::new(field).expect("finite seed");
        let enveloped = self.enveloped(&stripes, sigma_frac);
        let max = enveloped.max_abs();
        enveloped.scaled(peak / max)
    }

    fn enveloped(&self, field: &StateVector<F>, sigma_frac: F) -> StateVector<F> {
        let n = self.grid_size;
        let l = self.domain_length.to_f64().unwrap();
        let c = l / 2.0;
        let sigma = l * sigma_frac.to_f64().unwrap();
        let two_sigma_sq = 2.0 * sigma * sigma;
        let out: Vec<F> = (0..n * n)
            .map(|idx| {
                let i = idx / n;
                let j = idx % n;
                let x = l * i as f64 / n as f64 - c;
                let y = l * j as f64 / n as f64 - c;
                let env = cast::<F>((-(x * x + y * y) / two_sigma_sq).exp());
                field.as_slice()[idx] * env
            })
            .collect();
        StateVector::new(out)
            .expect("finite envelope")
            .project_zero_mean()
    }

    /// Metric preconditioner `p(k) = N² / (1 + ℓ(k)²)`.
    ///
    /// Explicit stepping on the raw ∂E/∂φ gradient is hopeless at realistic
    /// resolutions: stability demands a step below 2/max ℓ(k)², which is ~1e-9
    /// at N = 512. The inverse-operator metric flattens the spectrum of the
    /// flow to O(1) while leaving every stationary point in place.
    pub fn preconditioner(&self) -> LpPreconditioner<F> {
        let n2: F = cast((self.grid_size * self.grid_size) as f64);
        LpPreconditioner {
            surface: self.clone(),
            weights: self
                .multiplier
                .iter()
                .map(|&m| n2 / (F::one() + m * m))
                .collect(),
        }
    }
}

impl<F: Scalar + FftNum> PotentialSurface<F> for LpSurface<F> {
    fn dimension(&self) -> usize {
        self.grid_size * self.grid_size
    }

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError> {
        self.check_dimension(x)?;
        self.check_mean(x)?;
        let n2: F = cast((self.grid_size * self.grid_size) as f64);
        let spec = self.to_spectral(x.as_slice());
        // Parseval: grid mean of ½(Lφ)² equals ½ Σ ℓ²|φ̂|² with φ̂ = raw/N².
        let half: F = cast(0.5);
        let mut linear = F::zero();
        for (c, &m) in spec.iter().zip(&self.multiplier) {
            linear += m * m * c.norm_sqr();
        }
        linear = half * linear / (n2 * n2);

        let third: F = cast(1.0 / 3.0);
        let quarter: F = cast(0.25);
        let mut local = F::zero();
        for &v in x.as_slice() {
            let v2 = v * v;
            local += -half * self.epsilon * v2 - third * self.alpha * v2 * v + quarter * v2 * v2;
        }
        Ok(linear + local / n2)
    }

    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        self.check_dimension(x)?;
        self.check_mean(x)?;
        let n2: F = cast((self.grid_size * self.grid_size) as f64);
        let mut spec = self.to_spectral(x.as_slice());
        for (c, &m) in spec.iter_mut().zip(&self.multiplier) {
            *c *= m * m;
        }
        self.fft2(&mut spec, true);
        // Inverse of the unnormalized pair needs 1/N²; the quadrature weight
        // of ∂E/∂φ contributes another 1/N².
        let inv_n2 = F::one() / n2;
        let grad: Vec<F> = x
            .as_slice()
            .iter()
            .zip(&spec)
            .map(|(&v, c)| {
                let operator = c.re * inv_n2;
                (operator - self.epsilon * v - self.alpha * v * v + v * v * v) * inv_n2
            })
            .collect();
        let grad = StateVector::new(grad).map_err(|_| PesError::NonZeroMean {
            mean: f64::NAN,
        })?;
        Ok(grad.project_zero_mean())
    }
}

/// Spectral metric preconditioner produced by [`LpSurface::preconditioner`].
pub struct LpPreconditioner<F: Scalar + FftNum> {
    surface: LpSurface<F>,
    weights: Vec<F>,
}

impl<F: Scalar + FftNum> Preconditioner<F> for LpPreconditioner<F> {
    fn apply(&self, force: &StateVector<F>) -> StateVector<F> {
        let n2: F = cast((self.surface.grid_size * self.surface.grid_size) as f64);
        let mut spec = self.surface.to_spectral(force.as_slice());
        for (c, &w) in spec.iter_mut().zip(&self.weights) {
            *c *= w;
        }
        self.surface.fft2(&mut spec, true);
        let inv_n2 = F::one() / n2;
        StateVector::new(spec.iter().map(|c| c.re * inv_n2).collect())
            .expect("finite preconditioned force")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::fd_gradient;

    fn small_surface() -> LpSurface<f64> {
        LpSurface::new(
            32,
            8.0 * std::f64::consts::PI,
            -0.01,
            1.0,
            1.0,
            2.0 * (std::f64::consts::PI / 12.0).cos(),
        )
    }

    #[test]
    fn zero_field_zero_energy_zero_gradient() {
        let pes = small_surface();
        let z = StateVector::zeros(32 * 32);
        assert_eq!(pes.energy(&z).unwrap(), 0.0);
        assert!(pes.gradient(&z).unwrap().norm() < 1e-15);
    }

    #[test]
    fn non_zero_mean_rejected() {
        let pes = small_surface();
        let bad = StateVector::new(vec![1e-3; 32 * 32]).unwrap();
        assert!(matches!(
            pes.energy(&bad),
            Err(PesError::NonZeroMean { .. })
        ));
    }

    #[test]
    fn single_mode_on_q1_shell_kills_linear_term() {
        // φ = a cos(k·x) with |k| = q1 sits in the kernel of the linear
        // operator: the energy reduces to the local terms exactly.
        let pes = small_surface();
        let n = 32;
        let l = 8.0 * std::f64::consts::PI;
        // dk = 2π/L = 0.25; |k| = 1 = q1 at mode (4, 0) exactly... 2π·4/L = 1.
        let a = 0.05;
        let field: Vec<f64> = (0..n * n)
            .map(|idx| {
                let i = idx / n;
                let x = l * i as f64 / n as f64;
                a * x.cos()
            })
            .collect();
        let phi = StateVector::new(field).unwrap().project_zero_mean();
        let e = pes.energy(&phi).unwrap();
        // Local terms of a pure cosine: mean φ² = a²/2, mean φ³ = 0, mean φ⁴ = 3a⁴/8.
        let expected = -(-0.01) / 2.0 * (a * a / 2.0) - 0.0 + 0.25 * (3.0 * a.powi(4) / 8.0);
        assert!(
            (e - expected).abs() < 1e-12,
            "energy {e:e} vs expected {expected:e}"
        );
    }

    #[test]
    fn gradient_matches_fd_and_has_zero_mean() {
        let pes = small_surface();
        let phi = pes.random_zero_mean_field(7, 0.1, 1.5);
        let g = pes.gradient(&phi).unwrap();
        assert!(g.mean().abs() < 1e-12, "gradient mean {:e}", g.mean());

        // FD over individual grid values, mean-projected like the analytic
        // one. The step must keep the probe's mean shift h/N² inside the
        // zero-mean guard of 1e-10.
        let fd = fd_gradient(&pes, &phi, 4e-8).unwrap().project_zero_mean();
        let rel = (&g - &fd).norm() / g.norm();
        assert!(rel < 1e-5, "relative FD error {rel:e}");
    }

    #[test]
    fn energy_invariant_under_spectral_resampling() {
        // Zero-padding the spectrum onto a 2x finer grid must not change the
        // energy of a spectrally resolved field.
        let n = 32;
        let l = 8.0 * std::f64::consts::PI;
        let q2 = 2.0 * (std::f64::consts::PI / 12.0).cos();
        let coarse = LpSurface::new(n, l, -0.01, 1.0, 1.0, q2);
        let fine = LpSurface::new(2 * n, l, -0.01, 1.0, 1.0, q2);
        // Band-limited field: |k| <= 3·dk keeps φ⁴ below both Nyquist bands.
        let phi = coarse.random_zero_mean_field(3, 0.2, 3.0 * 0.25);

        // Resample by zero-padded spectrum.
        let spec = coarse.to_spectral(phi.as_slice());
        let m = 2 * n;
        let mut padded = vec![num_complex::Complex::new(0.0f64, 0.0); m * m];
        for i in 0..n {
            for j in 0..n {
                let ii = if i <= n / 2 { i } else { i + m - n };
                let jj = if j <= n / 2 { j } else { j + m - n };
                padded[ii * m + jj] = spec[i * n + j];
            }
        }
        fine.fft2(&mut padded, true);
        let scale = 1.0 / (n * n) as f64; // forward 1/N² convention carried over
        let resampled =
            StateVector::new(padded.iter().map(|c| c.re * scale).collect()).unwrap();

        let e_coarse = coarse.energy(&phi).unwrap();
        let e_fine = fine.energy(&resampled.project_zero_mean()).unwrap();
        let rel = (e_coarse - e_fine).abs() / e_coarse.abs().max(1e-30);
        assert!(rel < 1e-8, "resampling drift {rel:e}");
    }

    #[test]
    fn preconditioner_preserves_zeros_and_sign() {
        let pes = small_surface();
        let p = pes.preconditioner();
        let z = StateVector::zeros(32 * 32);
        assert!(Preconditioner::<f64>::apply(&p, &z).norm() < 1e-30);
        // Positive-definite: <f, P f> > 0 for f != 0.
        let f = pes.random_zero_mean_field(11, 0.3, 2.0);
        let pf = p.apply(&f);
        assert!(f.dot(&pf) > 0.0);
    }
}
