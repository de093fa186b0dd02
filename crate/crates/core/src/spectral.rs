//! Gerade/ungerade eigenstates of the channelled electron near the top of
//! the barrier between the two ions.
//!
//! The potential (trap term off) is mirror-symmetric about the midpoint, so
//! each parity is solved on the half-line `u = z − z_sym ≥ 0`: Numerov
//! integration runs inward from a Dirichlet wall beyond the outer turning
//! point, and the parity condition at `u = 0` is the shooting mismatch.
//! Gerade and ungerade levels are found independently on identical grids,
//! so their tiny difference 2κ is not swamped by discretisation bias.
//!
//! Everything here is in atomic units internally.

use rayon::prelude::*;
use thiserror::Error;

use crate::electronic::{energy_of_n_au, n_of_energy_au, Potential1D, Wells};
use crate::quantities::{constants, hartree_to_joules, joules_to_hartree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("potential is not mirror-symmetric (trap term must be off)")]
    NotSymmetric,
    #[error("invalid energy window: {0}")]
    InvalidWindow(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("eigenvalue near n = {n:.6} ({parity:?}) not converged: shift {shift_n:.3e} in n between the two finest grids exceeds {tolerance:.1e}")]
    NotConverged {
        parity: Parity,
        n: f64,
        shift_n: f64,
        tolerance: f64,
    },
    #[error("lost eigenvalue near n = {n:.6} ({parity:?}) while refining the grid to step {step} a0")]
    LostRoot { parity: Parity, n: f64, step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Gerade,
    Ungerade,
}

/// A potential symmetric under u → −u, sampled as a function of u ≥ 0.
pub trait ReflectionSymmetric: Sync {
    /// V(u) in Hartree, u in a₀.
    fn value(&self, u: f64) -> f64;
    /// Distance from the centre to the outermost well minimum (a₀).
    fn outer_well(&self) -> f64;
    /// Position of the reflection centre in the lab frame (a₀).
    fn center(&self) -> f64 {
        0.0
    }
}

/// [`Potential1D`] seen from its reflection centre.
#[derive(Debug, Clone, Copy)]
pub struct ChannelPotential {
    inner: Potential1D,
    center: f64,
}

impl ChannelPotential {
    pub fn new(p: &Potential1D) -> Result<Self, SpectralError> {
        if !p.is_symmetric() {
            return Err(SpectralError::NotSymmetric);
        }
        Ok(Self {
            inner: *p,
            center: p.symmetry_point_bohr(),
        })
    }
}

impl ReflectionSymmetric for ChannelPotential {
    fn value(&self, u: f64) -> f64 {
        self.inner.value_au(self.center + u)
    }

    fn outer_well(&self) -> f64 {
        match self.inner.wells() {
            Wells::Both => self.inner.half_separation_bohr(),
            _ => 0.0,
        }
    }

    fn center(&self) -> f64 {
        self.center
    }
}

/// Closure-backed symmetric potential, for model problems.
pub struct FnPotential<F> {
    pub f: F,
    pub outer_well: f64,
}

impl<F: Fn(f64) -> f64 + Sync> ReflectionSymmetric for FnPotential<F> {
    fn value(&self, u: f64) -> f64 {
        (self.f)(u)
    }

    fn outer_well(&self) -> f64 {
        self.outer_well
    }
}

/// Window of effective quantum numbers (E = −2/n² Hartree).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NWindow {
    pub lo: f64,
    pub hi: f64,
}

impl NWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self, SpectralError> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(SpectralError::InvalidWindow(format!(
                "need 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn energy_lo(&self) -> f64 {
        energy_of_n_au(self.lo)
    }

    pub fn energy_hi(&self) -> f64 {
        energy_of_n_au(self.hi)
    }
}

/// Half-domain discretisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverGrid {
    /// Base step Δz (a₀).
    pub step: f64,
    /// Half-domain length from the reflection centre to the wall (a₀).
    pub half_width: f64,
    /// Number of grids: Δz, Δz/2, ... (at least 1).
    pub levels: usize,
}

/// Default base step (a₀).
pub const DEFAULT_STEP: f64 = 2.0;
/// Default wall placement beyond the outer turning point.
pub const DEFAULT_MARGIN: f64 = 0.3;
/// Minimum allowed wall margin.
pub const MIN_MARGIN: f64 = 0.2;
/// Minimum grid points per shortest local wavelength.
pub const MIN_POINTS_PER_WAVELENGTH: f64 = 12.0;

impl SolverGrid {
    /// Places the wall at `(1 + margin)` times the outer classical turning
    /// point of the top of the window and checks that the base step
    /// resolves the shortest local wavelength.
    pub fn for_window(
        pot: &impl ReflectionSymmetric,
        window: NWindow,
        step: f64,
        margin: f64,
        levels: usize,
    ) -> Result<Self, SpectralError> {
        if margin < MIN_MARGIN {
            return Err(SpectralError::InvalidGrid(format!(
                "margin {margin} below {MIN_MARGIN}"
            )));
        }
        let turning = outer_turning_point(pot, window.energy_hi())?;
        let grid = Self {
            step,
            half_width: turning * (1.0 + margin),
            levels,
        };
        grid.check_resolution(pot, window)?;
        Ok(grid)
    }

    pub fn check_resolution(
        &self,
        pot: &impl ReflectionSymmetric,
        window: NWindow,
    ) -> Result<(), SpectralError> {
        if !(self.step > 0.0 && self.half_width > 2.0 * self.step) || self.levels == 0 {
            return Err(SpectralError::InvalidGrid(format!("{self:?}")));
        }
        let lambda = shortest_wavelength(pot, window.energy_hi());
        if self.step * MIN_POINTS_PER_WAVELENGTH > lambda {
            return Err(SpectralError::InvalidGrid(format!(
                "step {} a0 gives fewer than {MIN_POINTS_PER_WAVELENGTH} points per wavelength {lambda:.2} a0",
                self.step
            )));
        }
        Ok(())
    }

    /// Step of refinement level `l`.
    pub fn step_at(&self, level: usize) -> f64 {
        self.step / (1u64 << level) as f64
    }

    /// Half-domain sample count at level `l` (including both ends).
    pub fn points_at(&self, level: usize) -> usize {
        (self.half_width / self.step_at(level)).round() as usize + 1
    }
}

/// Largest u with V(u) = energy, beyond the outer well.
pub fn outer_turning_point(pot: &impl ReflectionSymmetric, energy: f64) -> Result<f64, SpectralError> {
    let start = pot.outer_well();
    if pot.value(start) >= energy {
        return Err(SpectralError::InvalidWindow(format!(
            "energy {energy} Eh lies below the well bottom {}",
            pot.value(start)
        )));
    }
    if energy >= 0.0 {
        return Err(SpectralError::InvalidWindow(
            "window must lie below the continuum".into(),
        ));
    }
    let mut lo = start;
    let mut hi = start + 1.0;
    while pot.value(hi) < energy {
        lo = hi;
        hi = start + 2.0 * (hi - start);
        if hi > 1e12 {
            return Err(SpectralError::InvalidWindow("no outer turning point".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pot.value(mid) < energy {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// 2π/√(2(E − V_min)) with V_min taken at the well bottom.
pub fn shortest_wavelength(pot: &impl ReflectionSymmetric, energy: f64) -> f64 {
    let vmin = pot.value(pot.outer_well()).min(pot.value(0.0));
    2.0 * std::f64::consts::PI / (2.0 * (energy - vmin)).max(f64::MIN_POSITIVE).sqrt()
}

/// Potential sampled on one half-domain grid.
struct HalfGrid {
    step: f64,
    v: Vec<f64>,
}

impl HalfGrid {
    fn new(pot: &impl ReflectionSymmetric, step: f64, points: usize) -> Self {
        let v = (0..points)
            .into_par_iter()
            .map(|i| pot.value(i as f64 * step))
            .collect();
        Self { step, v }
    }

    /// Inward Numerov sweep at energy `e`. Returns the parity mismatch
    /// (scale-free, continuous in `e`) and the number of nodes in (0, u_max).
    fn shoot(&self, e: f64, parity: Parity) -> (f64, usize) {
        let c = self.step * self.step / 12.0;
        let n = self.v.len();
        let g = |i: usize| 2.0 * (self.v[i] - e);
        let mut prev = 0.0;
        let mut cur = 1e-30;
        let mut nodes = 0;
        for i in (1..n - 1).rev() {
            let next = (2.0 * (1.0 + 5.0 * c * g(i)) * cur - (1.0 - c * g(i + 1)) * prev)
                / (1.0 - c * g(i - 1));
            if i > 1 && next * cur < 0.0 {
                nodes += 1;
            }
            prev = cur;
            cur = next;
            if cur.abs() > 1e200 {
                prev *= 1e-200;
                cur *= 1e-200;
            }
        }
        // cur = φ₀, prev = φ₁
        let norm = (cur * cur + prev * prev).sqrt();
        let mismatch = match parity {
            Parity::Gerade => ((1.0 - c * g(1)) * prev - (1.0 + 5.0 * c * g(0)) * cur) / norm,
            Parity::Ungerade => cur / norm,
        };
        if parity == Parity::Ungerade && prev * cur < 0.0 {
            // a node between u₀ and u₁ belongs to the interior
            nodes += 1;
        }
        (mismatch, nodes)
    }

    /// Same sweep keeping every sample (φ₀ .. φ_{N−1}).
    fn trajectory(&self, e: f64) -> Vec<f64> {
        let c = self.step * self.step / 12.0;
        let n = self.v.len();
        let g = |i: usize| 2.0 * (self.v[i] - e);
        let mut phi = vec![0.0; n];
        phi[n - 2] = 1e-30;
        for i in (1..n - 1).rev() {
            phi[i - 1] = (2.0 * (1.0 + 5.0 * c * g(i)) * phi[i] - (1.0 - c * g(i + 1)) * phi[i + 1])
                / (1.0 - c * g(i - 1));
            if phi[i - 1].abs() > 1e200 {
                for x in &mut phi[i - 1..] {
                    *x *= 1e-200;
                }
            }
        }
        phi
    }
}

/// Solver controls other than the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Energy-scan step in n.
    pub scan_step_n: f64,
    /// Allowed eigenvalue shift (in n) between the two finest grids.
    pub n_tolerance: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            scan_step_n: 0.01,
            n_tolerance: 1e-3,
        }
    }
}

/// Grid-convergence record of one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    /// Steps of the grids used (a₀).
    pub steps: Vec<f64>,
    /// Eigenvalue on each grid (Hartree).
    pub grid_energies: Vec<f64>,
    /// Richardson estimate assuming fourth-order error (Hartree).
    pub richardson: f64,
    /// (E₀ − E₁)/(E₁ − E₂) when three or more grids were used.
    pub error_ratio: Option<f64>,
    /// |n(E_finest) − n(E_second finest)|, zero for a single grid.
    pub shift_n: f64,
}

/// A parity eigenstate with its wavefunction on the full symmetric domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityEigenstate {
    pub parity: Parity,
    /// Best energy estimate (J).
    pub energy: f64,
    /// Effective quantum number of `energy`.
    pub n: f64,
    /// Nodes on the open half-line u > 0.
    pub half_nodes: usize,
    /// Lab-frame position of sample 0 (a₀).
    pub z_start: f64,
    /// Sample spacing (a₀), equal to the base grid step.
    pub step: f64,
    /// φ(z) in a₀^{-1/2}, normalised, positive just inside the left wall.
    pub wavefunction: Vec<f64>,
    pub convergence: Convergence,
    /// Whether the grid shift stayed within the solver tolerance.
    pub converged: bool,
}

impl ParityEigenstate {
    pub fn energy_hartree(&self) -> f64 {
        joules_to_hartree(self.energy)
    }

    /// Eigenvalue of the base-grid discretisation that `wavefunction`
    /// belongs to (Hartree).
    pub fn grid_energy(&self) -> f64 {
        self.convergence.grid_energies[0]
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.wavefunction.len()).map(move |i| self.z_start + i as f64 * self.step)
    }

    /// Index of the reflection centre.
    pub fn center_index(&self) -> usize {
        self.wavefunction.len() / 2
    }
}

/// Finds every eigenvalue of one parity inside `window`. States whose grid
/// shift exceeds the tolerance are returned with `converged == false`.
pub fn solve_parity(
    pot: &impl ReflectionSymmetric,
    parity: Parity,
    window: NWindow,
    grid: &SolverGrid,
    settings: &SolverSettings,
) -> Result<Vec<ParityEigenstate>, SpectralError> {
    grid.check_resolution(pot, window)?;
    let base = HalfGrid::new(pot, grid.step, grid.points_at(0));
    let roots = scan_roots(&base, parity, window, settings.scan_step_n);

    let refined: Vec<HalfGrid> = (1..grid.levels)
        .map(|l| HalfGrid::new(pot, grid.step_at(l), grid.points_at(l)))
        .collect();

    roots
        .into_par_iter()
        .map(|(e0, nodes)| {
            let mut energies = vec![e0];
            for (l, g) in refined.iter().enumerate() {
                let prev = *energies.last().unwrap();
                let e = refine_root(g, parity, prev).ok_or(SpectralError::LostRoot {
                    parity,
                    n: n_of_energy_au(prev),
                    step: grid.step_at(l + 1),
                })?;
                energies.push(e);
            }
            let convergence = convergence_record(grid, &energies);
            let converged = convergence.shift_n <= settings.n_tolerance;
            let half = base.trajectory(e0);
            let (z_start, wavefunction) = mirror_and_normalize(&half, parity, grid.step, pot.center());
            Ok(ParityEigenstate {
                parity,
                energy: hartree_to_joules(convergence.richardson),
                n: n_of_energy_au(convergence.richardson),
                half_nodes: nodes,
                z_start,
                step: grid.step,
                wavefunction,
                convergence,
                converged,
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|mut v| {
            v.sort_by(|a, b| a.energy.total_cmp(&b.energy));
            v
        })
}

fn convergence_record(grid: &SolverGrid, energies: &[f64]) -> Convergence {
    let k = energies.len();
    let richardson = if k >= 2 {
        energies[k - 1] + (energies[k - 1] - energies[k - 2]) / 15.0
    } else {
        energies[0]
    };
    let error_ratio = (k >= 3).then(|| {
        (energies[k - 3] - energies[k - 2]) / (energies[k - 2] - energies[k - 1])
    });
    let shift_n = if k >= 2 {
        (n_of_energy_au(energies[k - 1]) - n_of_energy_au(energies[k - 2])).abs()
    } else {
        0.0
    };
    Convergence {
        steps: (0..k).map(|l| grid.step_at(l)).collect(),
        grid_energies: energies.to_vec(),
        richardson,
        error_ratio,
        shift_n,
    }
}

/// Brackets roots on an n-spaced energy scan, subdividing intervals whose
/// node counts show more than one eigenvalue, then polishes each root.
fn scan_roots(grid: &HalfGrid, parity: Parity, window: NWindow, dn: f64) -> Vec<(f64, usize)> {
    let steps = ((window.hi - window.lo) / dn).ceil().max(1.0) as usize;
    let energies: Vec<f64> = (0..=steps)
        .map(|i| energy_of_n_au((window.lo + i as f64 * dn).min(window.hi)))
        .collect();
    let samples: Vec<(f64, usize)> = energies.par_iter().map(|&e| grid.shoot(e, parity)).collect();

    let intervals: Vec<usize> = (0..steps).collect();
    let mut roots: Vec<(f64, usize)> = intervals
        .par_iter()
        .flat_map_iter(|&i| {
            let mut out = Vec::new();
            bracket(
                grid,
                parity,
                (energies[i], samples[i]),
                (energies[i + 1], samples[i + 1]),
                0,
                &mut out,
            );
            out
        })
        .collect();
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-13 * b.0.abs());
    roots
}

fn bracket(
    grid: &HalfGrid,
    parity: Parity,
    lo: (f64, (f64, usize)),
    hi: (f64, (f64, usize)),
    depth: usize,
    out: &mut Vec<(f64, usize)>,
) {
    let (ea, (fa, na)) = lo;
    let (eb, (fb, nb)) = hi;
    let sign_change = fa * fb < 0.0;
    let node_jump = nb.abs_diff(na);
    let ambiguous = node_jump > 1 || (node_jump == 1) != sign_change;
    if ambiguous && depth < 24 {
        let em = 0.5 * (ea + eb);
        let sm = grid.shoot(em, parity);
        bracket(grid, parity, lo, (em, sm), depth + 1, out);
        bracket(grid, parity, (em, sm), hi, depth + 1, out);
        return;
    }
    if sign_change {
        let e = polish(grid, parity, ea, fa, eb, fb);
        let nodes = na.min(nb);
        out.push((e, nodes));
    }
}

/// Illinois false position, safeguarded by bisection.
fn polish(grid: &HalfGrid, parity: Parity, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut stale = false;
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let (fc, _) = grid.shoot(c, parity);
        if fc == 0.0 {
            return c;
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            stale = false;
        } else {
            if stale {
                fa *= 0.5;
            }
            stale = true;
        }
        b = c;
        fb = fc;
    }
    0.5 * (a + b)
}

/// Locates the root of `grid` nearest to `guess` by expanding a bracket.
fn refine_root(grid: &HalfGrid, parity: Parity, guess: f64) -> Option<f64> {
    let mut w = 1e-8 * guess.abs();
    let f0 = grid.shoot(guess, parity).0;
    while w < 1e-3 * guess.abs() {
        let below = guess - w;
        let above = guess + w;
        let fb = grid.shoot(below, parity).0;
        let fa = grid.shoot(above, parity).0;
        if f0 * fb <= 0.0 {
            return Some(polish(grid, parity, below, fb, guess, f0));
        }
        if f0 * fa <= 0.0 {
            return Some(polish(grid, parity, guess, f0, above, fa));
        }
        w *= 4.0;
    }
    None
}

/// Extends the half-line solution by parity, normalises it and fixes the
/// sign so that φ > 0 just inside the left wall.
fn mirror_and_normalize(half: &[f64], parity: Parity, step: f64, center: f64) -> (f64, Vec<f64>) {
    let n = half.len();
    let sign = match parity {
        Parity::Gerade => 1.0,
        Parity::Ungerade => -1.0,
    };
    let mut full = Vec::with_capacity(2 * n - 1);
    full.extend(half[1..].iter().rev().map(|x| sign * x));
    full.push(if parity == Parity::Ungerade { 0.0 } else { half[0] });
    full.extend_from_slice(&half[1..]);
    let norm = (full.iter().map(|x| x * x).sum::<f64>() * step).sqrt();
    let peak = full.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let first = full
        .iter()
        .find(|x| x.abs() > 1e-3 * peak)
        .copied()
        .unwrap_or(1.0);
    let scale = first.signum() / norm;
    for x in &mut full {
        *x *= scale;
    }
    (center - (n - 1) as f64 * step, full)
}

/// A gerade/ungerade doublet and its localised combinations.
#[derive(Debug, Clone, PartialEq)]
pub struct TunnelPair {
    pub gerade: ParityEigenstate,
    pub ungerade: ParityEigenstate,
    /// κ = (E_u − E_g)/2 (J).
    pub kappa: f64,
    /// κ from the raw eigenvalues of each grid (J).
    pub kappa_per_grid: Vec<f64>,
    /// (|E_g⟩ + |E_u⟩)/√2.
    pub left: Vec<f64>,
    /// (|E_g⟩ − |E_u⟩)/√2.
    pub right: Vec<f64>,
    /// Probability of |E_l⟩ on the left of the midpoint.
    pub left_fraction: f64,
}

impl TunnelPair {
    /// κ/h (Hz).
    pub fn kappa_hertz(&self) -> f64 {
        self.kappa / constants().planck()
    }

    /// Relative κ change between the two finest grids.
    pub fn kappa_grid_shift(&self) -> f64 {
        let k = self.kappa_per_grid.len();
        if k < 2 {
            return 0.0;
        }
        ((self.kappa_per_grid[k - 1] - self.kappa_per_grid[k - 2]) / self.kappa_per_grid[k - 1]).abs()
    }

    pub fn mean_n(&self) -> f64 {
        0.5 * (self.gerade.n + self.ungerade.n)
    }
}

/// Pairs found in a window plus any level whose partner lies outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpectrum {
    pub pairs: Vec<TunnelPair>,
    pub unpaired: Vec<ParityEigenstate>,
}

impl PairSpectrum {
    pub fn is_partial(&self) -> bool {
        !self.unpaired.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &ParityEigenstate> {
        self.pairs
            .iter()
            .flat_map(|p| [&p.gerade, &p.ungerade])
            .chain(&self.unpaired)
    }

    /// The first state that failed the grid-convergence check.
    pub fn convergence_error(&self, settings: &SolverSettings) -> Option<SpectralError> {
        self.states().find(|s| !s.converged).map(|s| SpectralError::NotConverged {
            parity: s.parity,
            n: s.n,
            shift_n: s.convergence.shift_n,
            tolerance: settings.n_tolerance,
        })
    }
}

/// Solves both parities and pairs levels with equal half-line node count.
pub fn tunnel_pairs(
    pot: &impl ReflectionSymmetric,
    window: NWindow,
    grid: &SolverGrid,
    settings: &SolverSettings,
) -> Result<PairSpectrum, SpectralError> {
    let (g, u) = rayon::join(
        || solve_parity(pot, Parity::Gerade, window, grid, settings),
        || solve_parity(pot, Parity::Ungerade, window, grid, settings),
    );
    Ok(pair_levels(g?, u?))
}

pub fn pair_levels(gerade: Vec<ParityEigenstate>, ungerade: Vec<ParityEigenstate>) -> PairSpectrum {
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    let mut us: Vec<Option<ParityEigenstate>> = ungerade.into_iter().map(Some).collect();
    for g in gerade {
        let partner = us
            .iter_mut()
            .find(|u| u.as_ref().is_some_and(|u| u.half_nodes == g.half_nodes))
            .and_then(Option::take);
        match partner {
            Some(u) => pairs.push(make_pair(g, u)),
            None => unpaired.push(g),
        }
    }
    unpaired.extend(us.into_iter().flatten());
    pairs.sort_by(|a, b| a.gerade.energy.total_cmp(&b.gerade.energy));
    unpaired.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    PairSpectrum { pairs, unpaired }
}

fn make_pair(gerade: ParityEigenstate, ungerade: ParityEigenstate) -> TunnelPair {
    let kappa = 0.5 * (ungerade.energy - gerade.energy);
    let kappa_per_grid = gerade
        .convergence
        .grid_energies
        .iter()
        .zip(&ungerade.convergence.grid_energies)
        .map(|(g, u)| hartree_to_joules(0.5 * (u - g)))
        .collect();
    let (left, right) = combine(&gerade.wavefunction, &ungerade.wavefunction);
    let mid = gerade.center_index();
    let step = gerade.step;
    let left_fraction = (left[..mid].iter().map(|x| x * x).sum::<f64>() + 0.5 * left[mid] * left[mid]) * step;
    TunnelPair {
        gerade,
        ungerade,
        kappa,
        kappa_per_grid,
        left,
        right,
        left_fraction,
    }
}

fn combine(g: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let left = g.iter().zip(u).map(|(a, b)| s * (a + b)).collect();
    let right = g.iter().zip(u).map(|(a, b)| s * (a - b)).collect();
    (left, right)
}

/// |E_l⟩ and |E_r⟩ of a pair.
pub fn localized_states(pair: &TunnelPair) -> (Vec<f64>, Vec<f64>) {
    combine(&pair.gerade.wavefunction, &pair.ungerade.wavefunction)
}

/// ∫ a·b dz on a shared grid.
pub fn overlap(a: &[f64], b: &[f64], step: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * step
}

/// Residual ‖Hφ − EBφ‖/‖EBφ‖ of the Numerov discretisation
/// −½δ²φ/h² + B(Vφ) = E·Bφ with B = (1, 10, 1)/12, evaluated on interior
/// samples of the stored wavefunction.
pub fn numerov_residual(pot: &impl ReflectionSymmetric, state: &ParityEigenstate) -> f64 {
    let phi = &state.wavefunction;
    let h = state.step;
    let e = state.grid_energy();
    let mid = state.center_index() as f64;
    let v: Vec<f64> = (0..phi.len())
        .map(|i| pot.value(((i as f64 - mid) * h).abs()))
        .collect();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..phi.len() - 1 {
        let lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
        let bv = (v[i + 1] * phi[i + 1] + 10.0 * v[i] * phi[i] + v[i - 1] * phi[i - 1]) / 12.0;
        let bphi = (phi[i + 1] + 10.0 * phi[i] + phi[i - 1]) / 12.0;
        let r = -0.5 * lap + bv - e * bphi;
        num += r * r;
        den += (e * bphi) * (e * bphi);
    }
    (num / den).sqrt()
}
