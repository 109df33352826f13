//! Integration over the cone, inner products of packets, and position space.
//!
//! The invariant measure is dμ = d³p/(2|p⃗|) = (r/2) dr d(cosθ) dϑ. The
//! quadrature is a tensor product of Gauss–Legendre rules in r (over a window
//! fitted to the packet) and in cosθ, and the periodic trapezoid rule in ϑ.
//!
//! Every sum over nodes is evaluated in parallel and reduced in node order, so
//! results do not depend on the number of worker threads.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::ConePoint;
use crate::krein::{gram, krein_pair, plain_pair};
use crate::rep::Wave;
use crate::sl2c::{lorentz_of, FourVector, KreinMetric, SL2Element};
use crate::transversal::{gauge_residue, TransversalState};
use crate::{Error, Result, C4, C64};

/// Node counts of the tensor-product rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_r: usize,
    pub n_polar: usize,
    pub n_azimuth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_r: 64,
            n_polar: 32,
            n_azimuth: 32,
        }
    }
}

impl QuadratureConfig {
    pub fn new(n_r: usize, n_polar: usize, n_azimuth: usize) -> Self {
        QuadratureConfig {
            n_r,
            n_polar,
            n_azimuth,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_r == 0 || self.n_polar == 0 || self.n_azimuth < 2 || self.n_azimuth % 2 != 0 {
            return Err(Error::Accuracy(format!(
                "invalid node counts {self:?}: need n_r, n_polar ≥ 1 and an even n_azimuth"
            )));
        }
        Ok(())
    }
}

/// Lower end of every radial window, as a fraction of its upper end.
pub const RADIAL_FLOOR: f64 = 1e-6;

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one node"));
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    rule.iter().map(|(x, w)| (mid + half * x, half * w)).collect()
}

/// A quadrature rule for ∫ f dμ over the cone.
#[derive(Debug, Clone)]
pub struct ConeQuadrature {
    nodes: Vec<ConePoint>,
    weights: Vec<f64>,
    /// Index of each node's azimuth, used by the halving estimate.
    azimuth_index: Vec<u32>,
    /// Radial index: 0 or n_r − 1 marks the window edges.
    radial_index: Vec<u32>,
    config: QuadratureConfig,
    window: (f64, f64),
}

impl ConeQuadrature {
    /// The tensor rule on the radial window [r_min, r_max].
    pub fn new(config: QuadratureConfig, r_min: f64, r_max: f64) -> Result<Self> {
        config.validate()?;
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::NonPositiveRadius(r_max));
        }
        let r_min = r_min.max(RADIAL_FLOOR * r_max);
        if r_min >= r_max {
            return Err(Error::Accuracy(format!("empty radial window [{r_min}, {r_max}]")));
        }
        let radial = gauss_legendre(config.n_r, r_min, r_max);
        let polar = gauss_legendre(config.n_polar, -1.0, 1.0);
        let h = TAU / config.n_azimuth as f64;
        let total = config.n_r * config.n_polar * config.n_azimuth;
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut azimuth_index = Vec::with_capacity(total);
        let mut radial_index = Vec::with_capacity(total);
        for (ir, &(r, wr)) in radial.iter().enumerate() {
            for &(u, wu) in &polar {
                let polar_angle = u.clamp(-1.0, 1.0).acos();
                for k in 0..config.n_azimuth {
                    nodes.push(ConePoint::from_spherical(r, polar_angle, h * k as f64)?);
                    weights.push(wr * wu * h * r / 2.0);
                    azimuth_index.push(k as u32);
                    radial_index.push(ir as u32);
                }
            }
        }
        Ok(ConeQuadrature {
            nodes,
            weights,
            azimuth_index,
            radial_index,
            config,
            window: (r_min, r_max),
        })
    }

    /// A rule whose radial window covers the given support points.
    pub fn for_support(config: QuadratureConfig, support: &[[f64; 3]]) -> Result<Self> {
        let radii: Vec<f64> = support
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt())
            .collect();
        if radii.is_empty() {
            return Err(Error::InvalidPacket("empty support".into()));
        }
        let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = radii.iter().copied().fold(0.0, f64::max);
        Self::new(config, lo, hi)
    }

    /// A rule covering the supports of all the given waves.
    pub fn for_waves(config: QuadratureConfig, waves: &[&Wave]) -> Result<Self> {
        let mut pts = Vec::new();
        for w in waves {
            pts.extend(w.support().ok_or_else(|| {
                Error::InvalidPacket("wave is not localized; no quadrature window can be fitted".into())
            })?);
        }
        Self::for_support(config, &pts)
    }

    /// The same weights at the nodes p ↦ V(α)p. By invariance of dμ this is a
    /// rule for ∫ f dμ adapted to f = g∘Λ(α), whose mass sits near V(α)·supp g.
    pub fn transformed(&self, alpha: &SL2Element) -> Result<Self> {
        let v = lorentz_of(alpha);
        let nodes = self
            .nodes
            .iter()
            .map(|p| p.transformed(&v))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConeQuadrature { nodes, ..self.clone() })
    }

    pub fn nodes(&self) -> &[ConePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn config(&self) -> QuadratureConfig {
        self.config
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn values<F>(&self, f: F) -> Result<Vec<C64>>
    where
        F: Fn(&ConePoint) -> Result<C64> + Sync + Send,
    {
        self.nodes.par_iter().map(f).collect()
    }

    /// Σ wᵢ f(pᵢ).
    pub fn integrate<F>(&self, f: F) -> Result<C64>
    where
        F: Fn(&ConePoint) -> Result<C64> + Sync + Send,
    {
        let vals = self.values(f)?;
        Ok(self.weights.iter().zip(&vals).map(|(w, v)| v * *w).sum())
    }

    /// The integral together with two accuracy indicators: the change when
    /// every second azimuth is dropped (and the rest reweighted), and the
    /// largest |f| on the two radial edges of the window relative to the
    /// largest |f| anywhere.
    pub fn integrate_with_estimate<F>(&self, f: F) -> Result<Estimate>
    where
        F: Fn(&ConePoint) -> Result<C64> + Sync + Send,
    {
        let vals = self.values(f)?;
        let mut full = C64::new(0.0, 0.0);
        let mut half = C64::new(0.0, 0.0);
        let (mut peak, mut edge) = (0.0_f64, 0.0_f64);
        let last = (self.config.n_r - 1) as u32;
        for i in 0..vals.len() {
            let term = vals[i] * self.weights[i];
            full += term;
            if self.azimuth_index[i] % 2 == 0 {
                half += term * 2.0;
            }
            let mag = (vals[i] * self.weights[i] / self.nodes[i].r()).norm();
            peak = peak.max(mag);
            if self.radial_index[i] == 0 || self.radial_index[i] == last {
                edge = edge.max(mag);
            }
        }
        Ok(Estimate {
            value: full,
            azimuth_halving: (full - half).norm(),
            edge_ratio: if peak > 0.0 { edge / peak } else { 0.0 },
        })
    }

    /// max |p·p| / (p⁰)² over the nodes.
    pub fn mass_shell_residual(&self) -> f64 {
        self.nodes
            .iter()
            .map(|p| {
                let q = p.four_vector();
                q.minkowski(&q).abs() / (p.r() * p.r())
            })
            .fold(0.0, f64::max)
    }
}

/// An integral with its accuracy indicators, see [`ConeQuadrature::integrate_with_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: C64,
    pub azimuth_halving: f64,
    pub edge_ratio: f64,
}

/// ∫ ⟨φ(p), B(p) φ′(p)⟩ dμ, positive definite.
pub fn hilbert_product(phi: &Wave, psi: &Wave, q: &ConeQuadrature) -> Result<C64> {
    q.integrate(|p| {
        let b = gram(p).map(|x| C64::new(x, 0.0));
        Ok(phi.eval(p)?.dotc(&(b * psi.eval(p)?)))
    })
}

/// ∫ ⟨φ(p), J φ′(p)⟩ dμ with J = diag(−1, 1, 1, 1).
pub fn krein_product(phi: &Wave, psi: &Wave, q: &ConeQuadrature) -> Result<C64> {
    q.integrate(|p| Ok(krein_pair(&phi.eval(p)?, &psi.eval(p)?)))
}

/// ∫ ⟨φ(p), φ′(p)⟩ dμ, the unweighted L² product (a scale for residuals).
pub fn l2_product(phi: &Wave, psi: &Wave, q: &ConeQuadrature) -> Result<C64> {
    q.integrate(|p| Ok(plain_pair(&phi.eval(p)?, &psi.eval(p)?)))
}

/// Which momentum-space product to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentumProduct {
    Krein,
    Hilbert,
}

/// The Krein or Hilbert product with the accuracy indicators of the rule.
pub fn product_with_estimate(kind: MomentumProduct, phi: &Wave, psi: &Wave, q: &ConeQuadrature) -> Result<Estimate> {
    q.integrate_with_estimate(|p| {
        let (a, b) = (phi.eval(p)?, psi.eval(p)?);
        Ok(match kind {
            MomentumProduct::Krein => krein_pair(&a, &b),
            MomentumProduct::Hilbert => a.dotc(&(gram(p).map(|x| C64::new(x, 0.0)) * b)),
        })
    })
}

/// ∫ (f̄₊f′₊ + f̄₋f′₋) dμ.
pub fn transversal_product(s: &TransversalState, t: &TransversalState, q: &ConeQuadrature) -> Result<C64> {
    q.integrate(|p| {
        let ([a, b], [c, d]) = (s.eval(p)?, t.eval(p)?);
        Ok(a.conj() * c + b.conj() * d)
    })
}

/// g̃ with V(α)φ(Λ(α)p) − (𝕌(α)φ)(p) = g̃·p, read off the gauge residue u as
/// ⟨p, u⟩/|p|² (Euclidean in ℂ⁴, |p|² = 2r²).
pub fn nonlocal_gauge_function(alpha: &SL2Element, s: &TransversalState, p: &ConePoint) -> Result<C64> {
    let u = gauge_residue(alpha, s, p)?;
    let pv = p.four_vector().to_complex();
    Ok(pv.dotc(&u) / (2.0 * p.r() * p.r()))
}

/// ‖u − g̃ p‖∞: how far the residue is from a multiple of p.
pub fn gauge_function_defect(alpha: &SL2Element, s: &TransversalState, p: &ConePoint) -> Result<f64> {
    let u = gauge_residue(alpha, s, p)?;
    let g = nonlocal_gauge_function(alpha, s, p)?;
    Ok(crate::max_abs_c(&(u - p.four_vector().to_complex() * g)))
}

/// Nodes below this fraction of the largest |wᵢ φ̃(pᵢ)| are dropped from the
/// position-space sums.
pub const PRUNE_FRACTION: f64 = 1e-12;

/// φ(x) = (2π)^{−3/2} ∫ φ̃(p) e^{−ip·x} dμ(p), as a quadrature sum.
#[derive(Debug, Clone)]
pub struct PositionWaveFunction {
    momenta: Vec<FourVector>,
    amplitudes: Vec<C4>,
}

/// Fourier transform of a momentum wave function by the given quadrature.
pub fn to_position(phi: &Wave, q: &ConeQuadrature) -> Result<PositionWaveFunction> {
    let norm = (TAU).powf(-1.5);
    let amps: Vec<C4> = q
        .nodes()
        .par_iter()
        .zip(q.weights().par_iter())
        .map(|(p, w)| Ok(phi.eval(p)? * C64::new(w * norm, 0.0)))
        .collect::<Result<_>>()?;
    let peak = amps.iter().map(|a| crate::max_abs_c(a)).fold(0.0, f64::max);
    let mut momenta = Vec::new();
    let mut amplitudes = Vec::new();
    for (p, a) in q.nodes().iter().zip(amps) {
        if crate::max_abs_c(&a) > PRUNE_FRACTION * peak {
            momenta.push(p.four_vector());
            amplitudes.push(a);
        }
    }
    Ok(PositionWaveFunction { momenta, amplitudes })
}

impl PositionWaveFunction {
    /// Number of momentum modes kept after pruning.
    pub fn modes(&self) -> usize {
        self.momenta.len()
    }

    /// φ(x).
    pub fn eval(&self, x: &FourVector) -> C4 {
        self.eval_with_derivative(x).0
    }

    /// ∂ₜφ(x), with ∂ₜ acting as −ip⁰ under the integral.
    pub fn eval_dt(&self, x: &FourVector) -> C4 {
        self.eval_with_derivative(x).1
    }

    /// (φ(x), ∂ₜφ(x)).
    pub fn eval_with_derivative(&self, x: &FourVector) -> (C4, C4) {
        let mut value = C4::zeros();
        let mut dt = C4::zeros();
        for (p, a) in self.momenta.iter().zip(&self.amplitudes) {
            let e = C64::from_polar(1.0, -p.minkowski(x));
            let term = a * e;
            value += term;
            dt += term * C64::new(0.0, -p[0]);
        }
        (value, dt)
    }

    /// φ and ∂ₜφ at every point of a spatial grid at time t, in grid order.
    /// Uses e^{−ip·x} = e^{−ip⁰t} Πₖ e^{ipₖxₖ}: per grid row (i, j) the first
    /// two factors are folded into the amplitudes, so the innermost loop over
    /// the last axis is a single complex multiply per component. Modes are
    /// summed in their stored order for every point.
    pub fn eval_on_grid(&self, grid: &SpatialGrid, t: f64) -> Vec<(C4, C4)> {
        let axes = grid.axes();
        let n = grid.points_per_axis();
        let m = self.momenta.len();
        // tables[k][mode * n + i] = e^{i p_k x_k,i}
        let tables: Vec<Vec<C64>> = (0..3)
            .map(|k| {
                let mut tab = Vec::with_capacity(m * n);
                for p in &self.momenta {
                    tab.extend(axes[k].iter().map(|x| C64::from_polar(1.0, p[k + 1] * x)));
                }
                tab
            })
            .collect();
        let base: Vec<(C4, C4)> = self
            .momenta
            .iter()
            .zip(&self.amplitudes)
            .map(|(p, a)| {
                let v = a * C64::from_polar(1.0, -p[0] * t);
                (v, v * C64::new(0.0, -p[0]))
            })
            .collect();
        let rows: Vec<Vec<(C4, C4)>> = (0..n * n)
            .into_par_iter()
            .map(|row| {
                let (i, j) = (row / n, row % n);
                // re/im parts of the 8 accumulated components per point
                let mut acc = vec![[0.0_f64; 16]; n];
                for (mode, (v, d)) in base.iter().enumerate() {
                    let e = tables[0][mode * n + i] * tables[1][mode * n + j];
                    let mut c = [0.0_f64; 16];
                    for q in 0..4 {
                        let (x, y) = (v[q] * e, d[q] * e);
                        c[2 * q] = x.re;
                        c[2 * q + 1] = x.im;
                        c[8 + 2 * q] = y.re;
                        c[8 + 2 * q + 1] = y.im;
                    }
                    let last = &tables[2][mode * n..(mode + 1) * n];
                    for (slot, z) in acc.iter_mut().zip(last) {
                        for q in 0..8 {
                            let (a, b) = (c[2 * q], c[2 * q + 1]);
                            slot[2 * q] += a * z.re - b * z.im;
                            slot[2 * q + 1] += a * z.im + b * z.re;
                        }
                    }
                }
                acc.into_iter()
                    .map(|s| {
                        let v = C4::from_fn(|q, _| C64::new(s[2 * q], s[2 * q + 1]));
                        let d = C4::from_fn(|q, _| C64::new(s[8 + 2 * q], s[9 + 2 * q]));
                        (v, d)
                    })
                    .collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    }
}

/// A cubic grid of spacing h with points center + h·(i, j, k), |i|,|j|,|k| ≤ m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub center: [f64; 3],
    pub half_width: f64,
    pub spacing: f64,
}

impl SpatialGrid {
    pub fn new(center: [f64; 3], half_width: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) || !(half_width >= 0.0) {
            return Err(Error::Accuracy(format!(
                "invalid grid: half width {half_width}, spacing {spacing}"
            )));
        }
        Ok(SpatialGrid {
            center,
            half_width,
            spacing,
        })
    }

    pub fn points_per_axis(&self) -> usize {
        2 * (self.half_width / self.spacing).floor() as usize + 1
    }

    fn axes(&self) -> [Vec<f64>; 3] {
        let m = (self.half_width / self.spacing).floor() as i64;
        let axis = |c: f64| (-m..=m).map(|i| c + self.spacing * i as f64).collect();
        [axis(self.center[0]), axis(self.center[1]), axis(self.center[2])]
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(3)
    }
}

/// i ∫ {φ̄·J∂ₜφ′ − (∂ₜφ)‾·Jφ′} d³x over the grid at time t (trapezoid sum).
/// For packets that vanish at the grid boundary this equals the momentum-space
/// Krein product and does not depend on t.
pub fn position_krein_product(
    phi: &PositionWaveFunction,
    psi: &PositionWaveFunction,
    t: f64,
    grid: &SpatialGrid,
) -> C64 {
    position_krein_product_with_edge(phi, psi, t, grid).value
}

/// A position-space Krein product with the containment indicator of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionProduct {
    pub value: C64,
    /// Largest |φ| or |φ′| on the faces of the grid relative to the largest
    /// value inside; small when the grid contains both packets at time t.
    pub edge_ratio: f64,
}

/// [`position_krein_product`] together with the edge ratio of the grid, from
/// a single evaluation of each field.
pub fn position_krein_product_with_edge(
    phi: &PositionWaveFunction,
    psi: &PositionWaveFunction,
    t: f64,
    grid: &SpatialGrid,
) -> PositionProduct {
    let a = phi.eval_on_grid(grid, t);
    let b = if std::ptr::eq(phi, psi) {
        a.clone()
    } else {
        psi.eval_on_grid(grid, t)
    };
    let j = KreinMetric;
    let mut sum = C64::new(0.0, 0.0);
    for ((f, fd), (g, gd)) in a.iter().zip(&b) {
        sum += f.dotc(&j.apply(gd)) - fd.dotc(&j.apply(g));
    }
    PositionProduct {
        value: sum * C64::new(0.0, grid.cell_volume()),
        edge_ratio: edge_ratio(&a, grid).max(edge_ratio(&b, grid)),
    }
}

fn edge_ratio(vals: &[(C4, C4)], grid: &SpatialGrid) -> f64 {
    let n = grid.points_per_axis();
    let (mut edge, mut peak) = (0.0_f64, 0.0_f64);
    for (idx, (v, _)) in vals.iter().enumerate() {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let m = crate::max_abs_c(v);
        peak = peak.max(m);
        if [i, j, k].iter().any(|&c| c == 0 || c == n - 1) {
            edge = edge.max(m);
        }
    }
    if peak > 0.0 {
        edge / peak
    } else {
        0.0
    }
}

/// ∫ dμ of exp(−|p⃗−p⃗₀|²/σ²), the square of a unit Gaussian envelope, in
/// closed form: π s³ √(2π) erf(R/(s√2))/R with s = σ/√2 and R = |p⃗₀|
/// (2π s² at R = 0).
pub fn gaussian_norm_squared(center: [f64; 3], sigma: f64) -> f64 {
    let r = (center[0] * center[0] + center[1] * center[1] + center[2] * center[2]).sqrt();
    let s = sigma / 2f64.sqrt();
    let x = r / (s * 2f64.sqrt());
    if x < 1e-8 {
        return 2.0 * PI * s * s;
    }
    PI * s.powi(3) * (2.0 * PI).sqrt() * libm::erf(x) / r
}

/// Grid and quadrature used to compare the position-space Krein product with
/// the momentum-space one. The grid at time t is centred at t·velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeskConfig {
    pub quadrature: QuadratureConfig,
    pub half_width: f64,
    pub spacing: f64,
    pub times: [f64; 2],
}

impl DeskConfig {
    /// Calibrated on [`crate::packet::PacketSpec::reference`]: 48 radial and
    /// 64×64 angular nodes, a 15³ grid of spacing 1, slices at t = 0 and 1.5.
    pub fn reference() -> Self {
        DeskConfig {
            quadrature: QuadratureConfig::new(48, 64, 64),
            half_width: 7.0,
            spacing: 1.0,
            times: [0.0, 1.5],
        }
    }

    pub fn grid_at(&self, t: f64, velocity: [f64; 3]) -> Result<SpatialGrid> {
        SpatialGrid::new(velocity.map(|v| v * t), self.half_width, self.spacing)
    }
}

/// The momentum-space Krein product and its position-space counterparts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub momentum: C64,
    pub slices: Vec<Slice>,
    /// Largest |position − momentum| over the slices, relative to `scale`.
    pub discrepancy: f64,
    /// Largest difference between slices, relative to `scale`.
    pub time_spread: f64,
    /// √(‖φ‖₂ ‖φ′‖₂) in L²(dμ), the scale of both relative figures.
    pub scale: f64,
    pub modes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slice {
    pub t: f64,
    pub value: C64,
    pub edge_ratio: f64,
}

/// Evaluates ⟨φ, Jφ′⟩ in momentum space and as the conserved position-space
/// current on the desk grids.
pub fn cross_check(phi: &Wave, psi: &Wave, desk: &DeskConfig, velocity: [f64; 3]) -> Result<CrossCheck> {
    let q = ConeQuadrature::for_waves(desk.quadrature, &[phi, psi])?;
    let momentum = krein_product(phi, psi, &q)?;
    let scale = (l2_product(phi, phi, &q)?.re * l2_product(psi, psi, &q)?.re).sqrt();
    let f = to_position(phi, &q)?;
    let g = to_position(psi, &q)?;
    let same = Wave::ptr_eq(phi, psi);
    let mut slices = Vec::new();
    for &t in &desk.times {
        let grid = desk.grid_at(t, velocity)?;
        let pp = position_krein_product_with_edge(&f, if same { &f } else { &g }, t, &grid);
        slices.push(Slice {
            t,
            value: pp.value,
            edge_ratio: pp.edge_ratio,
        });
    }
    let rel = |z: C64| if scale > 0.0 { z.norm() / scale } else { z.norm() };
    let discrepancy = slices.iter().map(|s| rel(s.value - momentum)).fold(0.0, f64::max);
    let mut time_spread = 0.0_f64;
    for a in &slices {
        for b in &slices {
            time_spread = time_spread.max(rel(a.value - b.value));
        }
    }
    Ok(CrossCheck {
        momentum,
        slices,
        discrepancy,
        time_spread,
        scale,
        modes: f.modes().max(g.modes()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::FrameLabel;
    use crate::rep::{act_local, Envelope, GroupElement};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Adaptive Simpson on [a, b]; independent reference for radial integrals.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn step<F: Fn(f64) -> f64 + Copy>(
            f: F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = (a + b) / 2.0;
            let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f((a + b) / 2.0));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    /// ∫ dμ of exp(−|p⃗−p⃗₀|²/(2s²)) reduced to one radial integral:
    /// (2πs²/R) ∫₀^∞ e^{−(r²+R²)/(2s²)} sinh(rR/s²) dr.
    fn radial_reference(center: [f64; 3], s: f64, weight: impl Fn(f64) -> f64 + Copy) -> f64 {
        let big_r = (center.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let f = move |r: f64| {
            // e^{−(r−R)²/2s²}(1 − e^{−2rR/s²})/2, the sinh term without overflow
            let g = (-(r - big_r).powi(2) / (2.0 * s * s)).exp() * (-(-2.0 * r * big_r / (s * s)).exp_m1()) / 2.0;
            g * weight(r)
        };
        2.0 * PI * s * s / big_r * simpson(f, 0.0, big_r + 12.0 * s, 1e-15)
    }

    fn packet(label: FrameLabel, center: [f64; 3], sigma: f64) -> Wave {
        Wave::frame(label, Envelope::gaussian(center, sigma, c(1.0, 0.0)))
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(5, 0.0, 2.0);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(9)).sum();
        assert_relative_eq!(s, 2f64.powi(10) / 10.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_measure_matches_radial_reference() {
        let center = [0.6, -1.1, 0.9];
        let sigma = 0.4;
        let env = Envelope::gaussian(center, sigma, c(1.0, 0.0));
        let q = ConeQuadrature::for_support(QuadratureConfig::default(), &env.support().unwrap()).unwrap();
        let got = q.integrate(|p| Ok(env.eval(p))).unwrap();
        let reference = radial_reference(center, sigma, |_| 1.0);
        assert_relative_eq!(got.re, reference, max_relative = 1e-8);
        assert!(got.im.abs() < 1e-15);
        let closed = gaussian_norm_squared(center, sigma * 2f64.sqrt());
        assert_relative_eq!(closed, reference, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_norm_far_from_the_apex() {
        let (center, sigma) = ([1.5, 2.0, 0.0], 0.25);
        let closed = gaussian_norm_squared(center, sigma);
        let reference = radial_reference(center, sigma / 2f64.sqrt(), |_| 1.0);
        assert_relative_eq!(closed, reference, max_relative = 1e-12);
    }

    #[test]
    fn products_of_frame_packets() {
        let (center, sigma) = ([1.0, 1.2, -0.5], 0.45);
        let plus = packet(FrameLabel::TransversePlus, center, sigma);
        let minus = packet(FrameLabel::TransverseMinus, center, sigma);
        let fwd = packet(FrameLabel::ForwardNull, center, sigma);
        let bwd = packet(FrameLabel::BackwardNull, center, sigma);
        let q = ConeQuadrature::for_waves(QuadratureConfig::new(64, 48, 64), &[&plus]).unwrap();
        let mass = radial_reference(center, sigma / 2f64.sqrt(), |_| 1.0);

        assert_relative_eq!(hilbert_product(&plus, &plus, &q).unwrap().re, mass, max_relative = 1e-8);
        assert!(hilbert_product(&plus, &minus, &q).unwrap().norm() < 1e-14);
        // B = r² on the backward null ray; the forward one (r⁻²) diverges
        // logarithmically at the apex unless the envelope vanishes there.
        let weighted = radial_reference(center, sigma / 2f64.sqrt(), |r| r * r);
        assert_relative_eq!(
            hilbert_product(&bwd, &bwd, &q).unwrap().re,
            weighted,
            max_relative = 1e-8
        );

        assert_relative_eq!(krein_product(&plus, &plus, &q).unwrap().re, mass, max_relative = 1e-8);
        assert!(krein_product(&bwd, &bwd, &q).unwrap().norm() < 1e-14 * mass);
        assert_relative_eq!(krein_product(&fwd, &bwd, &q).unwrap().re, -mass, max_relative = 1e-8);
    }

    #[test]
    fn sesquilinearity() {
        let a = packet(FrameLabel::TransversePlus, [1.0, 0.3, 0.2], 0.5);
        let b = packet(FrameLabel::BackwardNull, [0.8, 0.0, 0.6], 0.4);
        let q = ConeQuadrature::for_waves(QuadratureConfig::default(), &[&a, &b]).unwrap();
        let z = c(0.3, -1.2);
        let lhs = krein_product(&a.scale(z), &b, &q).unwrap();
        let rhs = z.conj() * krein_product(&a, &b, &q).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let conj = krein_product(&b, &a, &q).unwrap().conj();
        assert!((conj - krein_product(&a, &b, &q).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn transformed_rule_integrates_the_pulled_back_function() {
        let center = [0.5, 0.5, 1.0];
        let env = Envelope::gaussian(center, 0.3, c(1.0, 0.0));
        let q = ConeQuadrature::for_support(QuadratureConfig::default(), &env.support().unwrap()).unwrap();
        let alpha = SL2Element::alpha_03(1.5) * SL2Element::alpha_23(0.4);
        let moved = q.transformed(&alpha).unwrap();
        let v_inv = lorentz_of(&alpha).inverse();
        let pulled = moved.integrate(|p| Ok(env.eval(&p.transformed(&v_inv)?))).unwrap();
        let direct = q.integrate(|p| Ok(env.eval(p))).unwrap();
        assert_relative_eq!(pulled.re, direct.re, max_relative = 1e-12);
        assert!(moved.mass_shell_residual() < 1e-12);
    }

    #[test]
    fn estimate_flags_truncated_windows() {
        let env = Envelope::gaussian([0.0, 0.0, 2.0], 0.3, c(1.0, 0.0));
        let good = ConeQuadrature::new(QuadratureConfig::default(), 0.0, 4.5).unwrap();
        let bad = ConeQuadrature::new(QuadratureConfig::default(), 1.8, 2.2).unwrap();
        let e_good = good.integrate_with_estimate(|p| Ok(env.eval(p))).unwrap();
        let e_bad = bad.integrate_with_estimate(|p| Ok(env.eval(p))).unwrap();
        assert!(e_good.edge_ratio < 1e-8);
        assert!(e_bad.edge_ratio > 1e-2);
        assert!(e_good.azimuth_halving < 1e-10);
    }

    #[test]
    fn gauge_function_for_the_three_boost() {
        let p = ConePoint::from_spatial([1.0, 0.0, 0.0]).unwrap();
        let s = TransversalState::from_envelopes(Envelope::Constant(c(0.0, 0.0)), Envelope::Constant(c(1.0, 0.0)));
        let g = nonlocal_gauge_function(&SL2Element::alpha_03(1.0), &s, &p).unwrap();
        // U − 𝕌 = t·(1, n)·f₋ = (t/p⁰)·p with t = sinh λ ρ/(p⁰cosh λ + p³sinh λ)
        assert_relative_eq!(g.re, 1f64.tanh(), max_relative = 1e-13);
        assert!(gauge_function_defect(&SL2Element::alpha_03(1.0), &s, &p).unwrap() < 1e-14);
        let rot = nonlocal_gauge_function(&SL2Element::alpha_23(0.9), &s, &p).unwrap();
        assert!(rot.norm() < 1e-14);
    }

    #[test]
    fn position_transform_of_zero_and_translation() {
        let w = packet(FrameLabel::TransversePlus, [1.0, 0.5, 0.2], 0.5);
        let q = ConeQuadrature::for_waves(QuadratureConfig::default(), &[&w]).unwrap();
        let zero = to_position(&Wave::zero(), &q).unwrap();
        assert_eq!(zero.eval(&FourVector::new(0.3, 0.1, 0.2, 0.3)), C4::zeros());

        let a = FourVector::new(0.4, -0.3, 0.2, 0.7);
        let shifted = to_position(&act_local(&GroupElement::translation(a), &w), &q).unwrap();
        let base = to_position(&w, &q).unwrap();
        for x in [
            FourVector::new(0.0, 0.0, 0.0, 0.0),
            FourVector::new(1.0, -0.5, 0.3, 2.0),
        ] {
            let lhs = shifted.eval(&x);
            let rhs = base.eval(&(x - a));
            assert!(crate::max_abs_c(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let w = packet(FrameLabel::TransverseMinus, [0.7, 0.5, 0.2], 0.5);
        let q = ConeQuadrature::for_waves(QuadratureConfig::new(16, 12, 12), &[&w]).unwrap();
        let f = to_position(&w, &q).unwrap();
        let grid = SpatialGrid::new([0.1, -0.2, 0.3], 1.0, 0.5).unwrap();
        let vals = f.eval_on_grid(&grid, 0.4);
        let axes = grid.axes();
        let n = grid.points_per_axis();
        for (idx, (v, d)) in vals.iter().enumerate().step_by(7) {
            let x = FourVector::new(0.4, axes[0][idx / (n * n)], axes[1][(idx / n) % n], axes[2][idx % n]);
            let (pv, pd) = f.eval_with_derivative(&x);
            assert!(crate::max_abs_c(&(pv - v)) < 1e-12);
            assert!(crate::max_abs_c(&(pd - d)) < 1e-12);
        }
    }

    #[test]
    fn position_field_is_on_shell() {
        let w = packet(FrameLabel::TransversePlus, [1.0, 0.5, 0.2], 0.5);
        let q = ConeQuadrature::for_waves(QuadratureConfig::new(32, 16, 16), &[&w]).unwrap();
        let f = to_position(&w, &q).unwrap();
        let x = FourVector::new(0.2, 0.3, -0.1, 0.4);
        let h = 1e-2;
        let mut box_op = C4::zeros();
        let centre = f.eval(&x);
        for mu in 0..4 {
            let mut e = [0.0; 4];
            e[mu] = h;
            let d2 = (f.eval(&(x + FourVector(e))) + f.eval(&(x - FourVector(e))) - centre * C64::new(2.0, 0.0))
                / C64::new(h * h, 0.0);
            box_op += if mu == 0 { d2 } else { -d2 };
        }
        assert!(crate::max_abs_c(&box_op) < 1e-4 * crate::max_abs_c(&centre).max(1e-3));
    }
}
