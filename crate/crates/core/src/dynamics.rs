//! Laser-assisted charge transfer between the two ions.
//!
//! Four states in the order |G_l⟩, |E_l⟩, |E_r⟩, |G_r⟩ coupled as a chain:
//! both lasers with strength Ω on G–E, tunnelling κ on E_l–E_r. The
//! charge-swap offset is assumed compensated by the laser frequencies, so
//! the resonant model has no diagonal terms; `residual_detuning` adds one
//! on |G_l⟩ for miscompensation studies.
//!
//! Times are dimensionless, τ = κt/ħ, unless stated otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quantities::constants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisState {
    GroundLeft = 0,
    ExcitedLeft = 1,
    ExcitedRight = 2,
    GroundRight = 3,
}

impl BasisState {
    pub fn ket(self) -> [Complex64; 4] {
        let mut v = [Complex64::new(0.0, 0.0); 4];
        v[self as usize] = Complex64::new(1.0, 0.0);
        v
    }
}

/// Parameters of the transfer Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSystem {
    /// Tunnel coupling κ (J, or 1 for dimensionless systems).
    pub kappa: f64,
    /// Laser coupling Ω, same unit as κ.
    pub omega: f64,
    /// Uncompensated offset on |G_l⟩, same unit as κ. Zero by default.
    pub residual_detuning: f64,
}

impl TransferSystem {
    /// Physical system with couplings in joules.
    pub fn new(omega: f64, kappa: f64) -> Self {
        assert!(kappa > 0.0, "tunnel coupling must be positive");
        assert!(omega >= 0.0, "laser coupling must be non-negative");
        Self {
            kappa,
            omega,
            residual_detuning: 0.0,
        }
    }

    /// System in units of κ, characterised by δ = Ω/κ alone.
    pub fn from_ratio(delta: f64) -> Self {
        Self::new(delta, 1.0)
    }

    pub fn with_residual_detuning(mut self, detuning: f64) -> Self {
        self.residual_detuning = detuning;
        self
    }

    pub fn delta(&self) -> f64 {
        self.omega / self.kappa
    }

    /// H/κ in the basis (G_l, E_l, E_r, G_r).
    pub fn scaled_hamiltonian(&self) -> [[f64; 4]; 4] {
        let d = self.delta();
        let mut h = [[0.0; 4]; 4];
        h[0][1] = d;
        h[1][0] = d;
        h[1][2] = 1.0;
        h[2][1] = 1.0;
        h[2][3] = d;
        h[3][2] = d;
        h[0][0] = self.residual_detuning / self.kappa;
        h
    }

    /// Physical time (s) for a dimensionless τ, with κ in joules.
    pub fn seconds(&self, tau: f64) -> f64 {
        tau * constants().hbar / self.kappa
    }

    pub fn tau(&self, seconds: f64) -> f64 {
        seconds * self.kappa / constants().hbar
    }
}

/// Eigenvalues and column eigenvectors of a real symmetric 4×4 matrix by
/// cyclic Jacobi rotations. Off-diagonal mass is driven below `1e-14`
/// relative to the Frobenius norm.
pub fn jacobi_eigen(mut a: [[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let norm: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-14 * norm.max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q].abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

/// Exact propagator exp(−iHτ/κ) built from one eigen-decomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: [f64; 4],
    vectors: [[f64; 4]; 4],
}

impl Propagator {
    pub fn new(sys: &TransferSystem) -> Self {
        let (energies, vectors) = jacobi_eigen(sys.scaled_hamiltonian());
        Self { energies, vectors }
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        self.energies
    }

    pub fn evolve(&self, psi0: &[Complex64; 4], tau: f64) -> [Complex64; 4] {
        let mut coeff = [Complex64::new(0.0, 0.0); 4];
        for (k, c) in coeff.iter_mut().enumerate() {
            let overlap: Complex64 = (0..4).map(|i| psi0[i] * self.vectors[i][k]).sum();
            *c = overlap * Complex64::from_polar(1.0, -self.energies[k] * tau);
        }
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| coeff[k] * self.vectors[i][k]).sum();
        }
        out
    }
}

/// Populations on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTrace {
    /// τ = κt/ħ.
    pub times: Vec<f64>,
    /// Populations of (G_l, E_l, E_r, G_r) at each time.
    pub populations: Vec<[f64; 4]>,
}

impl ProbabilityTrace {
    /// |⟨G_l|ψ⟩|² + |⟨E_l|ψ⟩|².
    pub fn p_left(&self) -> Vec<f64> {
        self.populations.iter().map(|p| p[0] + p[1]).collect()
    }

    pub fn p_right(&self) -> Vec<f64> {
        self.populations.iter().map(|p| p[2] + p[3]).collect()
    }

    pub fn total(&self) -> Vec<f64> {
        self.populations.iter().map(|p| p.iter().sum()).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub fn propagate(sys: &TransferSystem, initial: &[Complex64; 4], times: &[f64]) -> ProbabilityTrace {
    let prop = Propagator::new(sys);
    let populations = times
        .iter()
        .map(|&t| {
            let psi = prop.evolve(initial, t);
            [psi[0].norm_sqr(), psi[1].norm_sqr(), psi[2].norm_sqr(), psi[3].norm_sqr()]
        })
        .collect();
    ProbabilityTrace {
        times: times.to_vec(),
        populations,
    }
}

/// Frequencies (in units of κ/ħ) entering the closed-form left population:
/// ε± = √((1 + 2δ² ± √(1+4δ²))/2) = (√(1+4δ²) ± 1)/2.
pub fn beat_frequencies(delta: f64) -> (f64, f64) {
    let r = (1.0 + 4.0 * delta * delta).sqrt();
    let plus = ((1.0 + 2.0 * delta * delta + r) / 2.0).sqrt();
    let minus = ((1.0 + 2.0 * delta * delta - r).max(0.0) / 2.0).sqrt();
    (plus, minus)
}

/// Closed-form p_left(τ) for an electron starting in |G_r⟩ with resonant
/// couplings.
pub fn analytic_p_left(tau: f64, delta: f64) -> f64 {
    let (ep, em) = beat_frequencies(delta);
    let a = delta * (em * tau).cos() - delta * (ep * tau).cos();
    let b = ep * (em * tau).sin() - em * (ep * tau).sin();
    (a * a + b * b) / (1.0 + 4.0 * delta * delta)
}

/// δ → ∞ limit, ½(1 − cos τ).
pub fn strong_drive_p_left(tau: f64) -> f64 {
    0.5 * (1.0 - tau.cos())
}

/// Two-level tunnelling between |E_l⟩ and |E_r⟩ alone: left population
/// sin²(τ) starting from |E_r⟩.
pub fn two_level_p_left(tau: f64) -> f64 {
    tau.sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferTimeMode {
    /// t_m = (2m+1)πħ/κ from the δ ≫ 1 limit.
    StrongDriving,
    /// Local maxima of the propagated p_left within [0, τ_max].
    Numeric { tau_max: f64, samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferTime {
    pub tau: f64,
    pub p_left: f64,
}

/// Times at which the electron is most likely with the left ion, starting
/// from |G_r⟩. Returns at most `m_max + 1` entries.
pub fn transfer_times(sys: &TransferSystem, m_max: usize, mode: TransferTimeMode) -> Vec<TransferTime> {
    match mode {
        TransferTimeMode::StrongDriving => (0..=m_max)
            .map(|m| {
                let tau = (2 * m + 1) as f64 * PI;
                TransferTime {
                    tau,
                    p_left: strong_drive_p_left(tau),
                }
            })
            .collect(),
        TransferTimeMode::Numeric { tau_max, samples } => {
            let prop = Propagator::new(sys);
            let start = BasisState::GroundRight.ket();
            let p = |t: f64| {
                let psi = prop.evolve(&start, t);
                psi[0].norm_sqr() + psi[1].norm_sqr()
            };
            let n = samples.max(3);
            let step = tau_max / (n - 1) as f64;
            let vals: Vec<f64> = (0..n).map(|i| p(i as f64 * step)).collect();
            let mut out = Vec::new();
            for i in 1..n - 1 {
                if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] {
                    let tau = golden_max(&p, (i - 1) as f64 * step, (i + 1) as f64 * step);
                    out.push(TransferTime { tau, p_left: p(tau) });
                    if out.len() > m_max {
                        break;
                    }
                }
            }
            out
        }
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() < 1e-12 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Evenly spaced τ samples on [0, tau_max].
pub fn time_grid(tau_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| tau_max * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn jacobi_reconstructs_matrix() {
        let sys = TransferSystem::from_ratio(0.7).with_residual_detuning(0.3);
        let h = sys.scaled_hamiltonian();
        let (w, v) = jacobi_eigen(h);
        for i in 0..4 {
            for j in 0..4 {
                let r: f64 = (0..4).map(|k| v[i][k] * w[k] * v[j][k]).sum();
                assert!((r - h[i][j]).abs() < 1e-13);
                let o: f64 = (0..4).map(|k| v[k][i] * v[k][j]).sum();
                assert!((o - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn eigenvalues_of_resonant_chain() {
        let d: f64 = 1.3;
        let r = (1.0 + 4.0 * d * d).sqrt();
        let mut w = Propagator::new(&TransferSystem::from_ratio(d)).eigenvalues();
        w.sort_by(f64::total_cmp);
        let expected = [-(r + 1.0) / 2.0, -(r - 1.0) / 2.0, (r - 1.0) / 2.0, (r + 1.0) / 2.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn starts_on_the_right() {
        assert_eq!(analytic_p_left(0.0, 0.5), 0.0);
    }

    #[test]
    fn strong_drive_transfer_at_half_period() {
        let p = analytic_p_left(PI, 100.0);
        assert!((p - strong_drive_p_left(PI)).abs() < 1e-3);
        assert!((p - 1.0).abs() < 1e-3);
    }

    #[test]
    fn laser_off_is_two_level_rabi() {
        let sys = TransferSystem::new(0.0, 1.0);
        let times = time_grid(10.0, 101);
        let trace = propagate(&sys, &BasisState::ExcitedRight.ket(), &times);
        for (t, p) in times.iter().zip(&trace.populations) {
            assert!((p[1] - two_level_p_left(*t)).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_drive_times() {
        let kappa = crate::quantities::hertz_to_energy(87.5e6);
        let sys = TransferSystem::new(100.0 * kappa, kappa);
        let t = transfer_times(&sys, 2, TransferTimeMode::StrongDriving);
        assert_eq!(t.len(), 3);
        assert!((sys.seconds(t[0].tau) * 1e9 - 5.714).abs() < 1e-3);
        assert!((t[1].tau - 3.0 * PI).abs() < 1e-15);
        for x in t {
            assert!((x.p_left - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weak_drive_stays_right() {
        let sys = TransferSystem::from_ratio(0.2);
        let t = transfer_times(&sys, 10, TransferTimeMode::Numeric { tau_max: 20.0, samples: 2001 });
        assert!(!t.is_empty());
        let best = t.iter().map(|x| x.p_left).fold(0.0, f64::max);
        assert!(best < 0.5, "{best}");
        for x in &t {
            assert!((x.p_left - analytic_p_left(x.tau, 0.2)).abs() < 1e-10);
        }
    }

    #[test]
    fn time_reversal() {
        let sys = TransferSystem::from_ratio(0.9).with_residual_detuning(0.2);
        let prop = Propagator::new(&sys);
        let psi0 = BasisState::GroundRight.ket();
        for t in [0.3, 7.0, 55.0] {
            let fwd = prop.evolve(&psi0, t);
            let back = prop.evolve(&fwd, -t);
            for (a, b) in back.iter().zip(psi0.iter()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn unitarity(delta in 0.0f64..50.0, tau in -100.0f64..100.0, det in -2.0f64..2.0) {
            let sys = TransferSystem::from_ratio(delta).with_residual_detuning(det);
            let psi = Propagator::new(&sys).evolve(&BasisState::GroundRight.ket(), tau);
            let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }

        #[test]
        fn mirror_symmetry(delta in 0.0f64..20.0, tau in 0.0f64..40.0) {
            let sys = TransferSystem::from_ratio(delta);
            let from_right = propagate(&sys, &BasisState::GroundRight.ket(), &[tau]);
            let from_left = propagate(&sys, &BasisState::GroundLeft.ket(), &[tau]);
            prop_assert!((from_left.p_right()[0] - from_right.p_left()[0]).abs() < 1e-12);
        }

        #[test]
        fn depends_only_on_scaled_time(delta in 0.0f64..10.0, tau in 0.0f64..40.0, scale in 1e-30f64..1e-20) {
            let unit = TransferSystem::from_ratio(delta);
            let physical = TransferSystem::new(delta * scale, scale);
            let a = propagate(&unit, &BasisState::GroundRight.ket(), &[tau]).p_left()[0];
            let t_s = physical.seconds(tau);
            let b = propagate(&physical, &BasisState::GroundRight.ket(), &[physical.tau(t_s)]).p_left()[0];
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn analytic_matches_propagation(delta in 0.0f64..100.0, tau in 0.0f64..40.0) {
            let sys = TransferSystem::from_ratio(delta);
            let p = propagate(&sys, &BasisState::GroundRight.ket(), &[tau]).p_left()[0];
            prop_assert!((p - analytic_p_left(tau, delta)).abs() < 1e-9);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
        }
    }
}
