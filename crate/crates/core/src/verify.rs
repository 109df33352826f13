//! Seeded verification suites.
//!
//! Each suite draws its samples from a ChaCha stream determined by the seed and
//! the suite, so a suite gives the same report whether it runs alone or as part
//! of `all`. Reports contain no timings or host details and are reproducible
//! byte for byte.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::cone::{boost_action, section_lorentz, section_residual, wigner_element, ConePoint};
use crate::field::{
    cross_check, gauge_function_defect, hilbert_product, krein_product, l2_product, nonlocal_gauge_function,
    to_position, ConeQuadrature, DeskConfig, QuadratureConfig,
};
use crate::krein::{fiber_symmetry, gram, gram_residual, gram_sqrt, krein_pair, Frame, FrameLabel};
use crate::packet::PacketSpec;
use crate::rep::{
    act_conjugate, act_induced, act_local, intertwine_to_local, multiplier_cocycle_check, multiplier_krein_residual,
    pointwise_distance, Envelope, GroupElement, Wave,
};
use crate::sl2c::{
    intertwiner, little_group_element, little_group_residual, lorentz_imaginary_part, lorentz_of, minkowski_metric,
    pauli, FourVector, KreinMetric, SL2Element,
};
use crate::transversal::{
    gauge_residue, helicity_multipliers, residue_defect, theta, theta_matrix, theta_matrix_conjugate,
    theta_rotation_13, theta_rotation_23, PhasePair, TransversalState,
};
use crate::{max_abs, max_abs_c, Error, Result, C4, C64};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sl2c,
    Cone,
    Krein,
    Rep,
    Transversal,
    Field,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [
        Suite::Sl2c,
        Suite::Cone,
        Suite::Krein,
        Suite::Rep,
        Suite::Transversal,
        Suite::Field,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Sl2c => "sl2c",
            Suite::Cone => "cone",
            Suite::Krein => "krein",
            Suite::Rep => "rep",
            Suite::Transversal => "transversal",
            Suite::Field => "field",
            Suite::All => "all",
        }
    }

    /// Samples drawn when none are requested.
    pub fn default_samples(&self) -> usize {
        match self {
            Suite::Sl2c => 1000,
            Suite::Cone => 500,
            Suite::Krein => 500,
            Suite::Rep => 50,
            Suite::Transversal => 200,
            Suite::Field => 4,
            Suite::All => 0,
        }
    }

    fn stream(&self) -> u64 {
        Suite::PARTS.iter().position(|s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidPacket(format!("unknown suite {s:?}")))
    }
}

/// One identity checked over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    /// The identity or statement being checked.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
    /// Supporting figures for diagnostics, e.g. a sequence of norm ratios.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub precision: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerance_scale: f64,
    pub quadrature: QuadratureConfig,
    pub desk: DeskConfig,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub environment: Environment,
}

impl Report {
    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides every suite's default sample count.
    pub samples: Option<usize>,
    /// Multiplies every tolerance; below 1 it shows how much margin each
    /// check has.
    pub tolerance_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            samples: None,
            tolerance_scale: 1.0,
        }
    }
}

/// Runs a suite (or all of them) and collects the report.
pub fn run(suite: Suite, opts: VerifyOptions) -> Result<Report> {
    let parts: Vec<Suite> = match suite {
        Suite::All => Suite::PARTS.to_vec(),
        s => vec![s],
    };
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    for part in parts {
        let n = opts.samples.unwrap_or(part.default_samples());
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(part.stream());
        let mut ctx = Ctx {
            suite: part,
            rng,
            n,
            tolerance_scale: opts.tolerance_scale,
            checks: Vec::new(),
        };
        match part {
            Suite::Sl2c => suite_sl2c(&mut ctx),
            Suite::Cone => suite_cone(&mut ctx),
            Suite::Krein => suite_krein(&mut ctx),
            Suite::Rep => suite_rep(&mut ctx),
            Suite::Transversal => suite_transversal(&mut ctx),
            Suite::Field => suite_field(&mut ctx),
            Suite::All => unreachable!(),
        }?;
        for c in &ctx.checks {
            if c.samples == 0 {
                warnings.push(format!("{}/{}: no samples drawn, passes vacuously", c.suite, c.name));
            }
        }
        checks.extend(ctx.checks);
    }
    Ok(Report {
        schema: SCHEMA,
        suite,
        pass: checks.iter().all(|c| c.pass),
        checks,
        warnings,
        environment: Environment {
            precision: "f64".into(),
            seed: opts.seed,
            samples: opts.samples,
            tolerance_scale: opts.tolerance_scale,
            quadrature: QuadratureConfig::default(),
            desk: DeskConfig::reference(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
    })
}

struct Ctx {
    suite: Suite,
    rng: ChaCha8Rng,
    n: usize,
    tolerance_scale: f64,
    checks: Vec<Check>,
}

/// Running maximum of a residual.
struct Acc {
    max: f64,
    count: usize,
}

impl Acc {
    fn new() -> Self {
        Acc { max: 0.0, count: 0 }
    }

    fn add(&mut self, r: f64) {
        // NaN must fail the check, so it is kept rather than ignored by max()
        self.max = if r.is_nan() || self.max.is_nan() {
            f64::NAN
        } else {
            self.max.max(r)
        };
        self.count += 1;
    }
}

impl Ctx {
    fn push(&mut self, name: &str, anchor: &str, acc: Acc, tolerance: f64) {
        self.push_values(name, anchor, acc, tolerance, Vec::new());
    }

    fn push_values(&mut self, name: &str, anchor: &str, acc: Acc, tolerance: f64, values: Vec<f64>) {
        let tolerance = tolerance * self.tolerance_scale;
        self.checks.push(Check {
            suite: self.suite.as_str().into(),
            name: name.into(),
            anchor: anchor.into(),
            max_residual: acc.max,
            tolerance,
            pass: acc.max <= tolerance,
            samples: acc.count,
            values,
        });
    }
}

// --- samplers --------------------------------------------------------------

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    UnitSphere.sample(rng)
}

fn sigma_dot(n: [f64; 3]) -> Matrix2<C64> {
    pauli(1) * C64::new(n[0], 0.0) + pauli(2) * C64::new(n[1], 0.0) + pauli(3) * C64::new(n[2], 0.0)
}

/// exp(−iθ n·σ/2) exp(λ m·σ/2) with θ uniform, |λ| ≤ max_rapidity and a
/// random overall sign, covering both sheets of the cover.
pub fn random_sl2(rng: &mut ChaCha8Rng, max_rapidity: f64) -> SL2Element {
    let theta = rng.random_range(-TAU..TAU);
    let lambda = rng.random_range(-max_rapidity..=max_rapidity);
    let rot = SL2Element::exp_traceless(sigma_dot(unit_vector(rng)) * C64::new(0.0, -theta / 2.0));
    let boost = SL2Element::exp_traceless(sigma_dot(unit_vector(rng)) * C64::new(lambda / 2.0, 0.0));
    let alpha = rot * boost;
    if rng.random_bool(0.5) {
        -alpha
    } else {
        alpha
    }
}

pub fn random_group_element(rng: &mut ChaCha8Rng, max_rapidity: f64, max_shift: f64) -> GroupElement {
    let a = FourVector([(); 4].map(|_| rng.random_range(-max_shift..=max_shift)));
    GroupElement::new(a, random_sl2(rng, max_rapidity))
}

/// Relative distance of a sampled point from the polar axis, at least.
pub const POLE_BAND: f64 = 1e-3;

/// r log-uniform in [r_min, r_max], direction uniform outside the pole band.
pub fn random_cone_point(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> ConePoint {
    let r = (rng.random_range(r_min.ln()..=r_max.ln())).exp();
    loop {
        let d = unit_vector(rng);
        if d[0].hypot(d[1]) >= POLE_BAND {
            return ConePoint::from_spatial(d.map(|x| x * r)).expect("r > 0");
        }
    }
}

fn random_c4(rng: &mut ChaCha8Rng) -> C4 {
    C4::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A smooth ℂ⁴ field defined on the whole cone, frame-free so that it can be
/// evaluated at any point: c₀ e^{i k·p⃗} + c₁ p⁰ + c₂ e^{−|p⃗|²/8}.
fn random_smooth_wave(rng: &mut ChaCha8Rng) -> Wave {
    let (c0, c1, c2) = (random_c4(rng), random_c4(rng), random_c4(rng));
    let k = unit_vector(rng).map(|x| x * 0.7);
    Wave::custom(
        move |p| {
            let s = p.spatial();
            let phase = C64::from_polar(1.0, k[0] * s[0] + k[1] * s[1] + k[2] * s[2]);
            let r = p.r();
            Ok(c0 * phase + c1 * C64::new(r, 0.0) + c2 * C64::new((-r * r / 8.0).exp(), 0.0))
        },
        None,
    )
}

fn random_transversal_state(rng: &mut ChaCha8Rng) -> TransversalState {
    let a: [C64; 4] = [(); 4].map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let k = unit_vector(rng);
    TransversalState::new(
        move |p| {
            let s = p.spatial();
            let x = k[0] * s[0] + k[1] * s[1] + k[2] * s[2];
            Ok([a[0] + a[1] * C64::from_polar(1.0, x), a[2] * x.cos() + a[3] * p.r()])
        },
        None,
    )
}

/// The (r, θ, ϑ) grid of the geometric suites: 64 radii log-spaced in
/// [0.1, 10], 32 polar midpoints (so no node lies on the axis), 32 azimuths.
pub fn cone_grid() -> Vec<ConePoint> {
    let mut out = Vec::with_capacity(64 * 32 * 32);
    for i in 0..64 {
        let r = 10f64.powf(-1.0 + 2.0 * i as f64 / 63.0);
        for j in 0..32 {
            let polar = (j as f64 + 0.5) * PI / 32.0;
            for k in 0..32 {
                out.push(ConePoint::from_spherical(r, polar, k as f64 * TAU / 32.0).expect("r > 0"));
            }
        }
    }
    out
}

// --- sl2c -----------------------------------------------------------------

fn suite_sl2c(ctx: &mut Ctx) -> Result<()> {
    let g = minkowski_metric();
    let (mut metric, mut hom, mut sign, mut real, mut det, mut inv, mut little, mut proper) = (
        Acc::new(),
        Acc::new(),
        Acc::new(),
        Acc::new(),
        Acc::new(),
        Acc::new(),
        Acc::new(),
        Acc::new(),
    );
    let s = intertwiner();
    let mut unitary = Acc::new();
    if ctx.n > 0 {
        unitary.add(max_abs_c(&(s * s.adjoint() - Matrix4::identity())));
    }
    for _ in 0..ctx.n {
        let a = random_sl2(&mut ctx.rng, 1.5);
        let b = random_sl2(&mut ctx.rng, 1.5);
        let (va, vb) = (lorentz_of(&a), lorentz_of(&b));
        metric.add(max_abs(&(va.matrix().transpose() * g * va.matrix() - g)));
        hom.add(max_abs(&(lorentz_of(&(a * b)).matrix() - va.matrix() * vb.matrix())));
        sign.add(max_abs(&(lorentz_of(&-a).matrix() - va.matrix())));
        real.add(lorentz_imaginary_part(&a));
        det.add((a.det() - C64::new(1.0, 0.0)).norm());
        inv.add(max_abs_c(&((a * a.inverse()).matrix() - Matrix2::identity())));
        let m = va.matrix();
        proper.add((m.determinant() - 1.0).abs().max(1.0 - m[(0, 0)]).max(0.0));
        let z = C64::new(ctx.rng.random_range(-2.0..2.0), ctx.rng.random_range(-2.0..2.0));
        little.add(little_group_residual(&little_group_element(
            z,
            ctx.rng.random_range(-TAU..TAU),
        )));
    }
    ctx.push("lorentz_metric", "V(α)ᵀ g V(α) = g", metric, 1e-10);
    ctx.push("homomorphism", "V(αβ) = V(α)V(β)", hom, 1e-10);
    ctx.push("double_cover_sign", "V(−α) = V(α)", sign, 1e-14);
    ctx.push("real_image", "S(α⊗ᾱ)S⁻¹ is real", real, 1e-12);
    ctx.push("unimodular", "det α = 1", det, 1e-12);
    ctx.push("inverse", "α α⁻¹ = 1", inv, 1e-12);
    ctx.push("proper_orthochronous", "det V(α) = 1 and V(α)⁰₀ ≥ 1", proper, 1e-10);
    ctx.push(
        "little_group_stationary",
        "γ(z,φ) p̄̂ γ(z,φ)* = p̄̂ for p̄ = (1,0,0,1)",
        little,
        1e-12,
    );
    ctx.push("intertwiner_unitary", "S S* = 1", unitary, 1e-15);
    Ok(())
}

// --- cone -----------------------------------------------------------------

fn suite_cone(ctx: &mut Ctx) -> Result<()> {
    let mut grid = Acc::new();
    for p in cone_grid() {
        grid.add(section_residual(&p) / p.r());
    }
    ctx.push(
        "section_grid",
        "β(p)⁻¹ p̄̂ (β(p)⁻¹)* = p̂ on the 64×32×32 grid (relative to r)",
        grid,
        1e-10,
    );

    let (mut maps, mut stab, mut cocycle, mut on_cone, mut action) =
        (Acc::new(), Acc::new(), Acc::new(), Acc::new(), Acc::new());
    for _ in 0..ctx.n {
        let p = random_cone_point(&mut ctx.rng, 0.05, 20.0);
        let a = random_sl2(&mut ctx.rng, 1.0);
        let d = random_sl2(&mut ctx.rng, 1.0);
        let moved = section_lorentz(&p).apply(&p.four_vector());
        maps.add(max_abs(
            &(moved.to_vector() - FourVector::new(1.0, 0.0, 0.0, 1.0).to_vector()),
        ));
        stab.add(little_group_residual(&wigner_element(&a, &p)?));
        cocycle.add(multiplier_cocycle_check(&d, &a, &p)?);
        let q = boost_action(&a, &p)?;
        let raw = lorentz_of(&a).inverse().apply(&p.four_vector());
        on_cone.add(raw.minkowski(&raw).abs() / (raw[0] * raw[0]));
        let twice = boost_action(&(a * d), &p)?;
        let stepwise = boost_action(&d, &q)?;
        let diff: f64 = (0..3)
            .map(|k| (twice.spatial()[k] - stepwise.spatial()[k]).abs())
            .fold(0.0, f64::max);
        action.add(diff / twice.r());
    }
    ctx.push("section_maps_to_standard", "V(β(p)) p = p̄", maps, 1e-10);
    ctx.push("wigner_stabilizer", "γ(α,p) fixes p̄", stab, 1e-10);
    ctx.push(
        "multiplier_cocycle",
        "V(γ(δα,p)) = V(γ(δ,p)) V(γ(α,Λ(δ)p))",
        cocycle,
        1e-10,
    );
    ctx.push("action_on_cone", "Λ(α)p stays on the cone", on_cone, 1e-12);
    ctx.push("action_composition", "Λ(αδ)p = Λ(δ)Λ(α)p", action, 1e-12);
    Ok(())
}

// --- krein ----------------------------------------------------------------

fn suite_krein(ctx: &mut Ctx) -> Result<()> {
    let j = KreinMetric.matrix();
    let id = Matrix4::<f64>::identity();
    let pairing = Matrix4::new(
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, -1.0, 0.0,
    );
    let names = [
        "eigen_law",
        "sqrt_squares",
        "gram_matches_section",
        "section_krein_unitary_left",
        "section_krein_unitary_right",
        "sqrt_krein_unitary",
        "frame_orthonormal",
        "frame_complete",
        "krein_pairing_table",
        "fiber_symmetry_involution",
        "fiber_symmetry_transverse",
        "fiber_symmetry_null_rays",
    ];
    let mut acc: Vec<Acc> = names.iter().map(|_| Acc::new()).collect();
    for p in cone_grid() {
        let r = p.r();
        let (b, sb, jp) = (gram(&p), gram_sqrt(&p), fiber_symmetry(&p));
        let v = *section_lorentz(&p).matrix();
        let f = Frame::at(&p)?;
        let w = f.matrix();
        let eig = FrameLabel::ALL
            .iter()
            .map(|&l| max_abs(&(b * f.get(l) - f.get(l) * l.eigenvalue(r))) / l.eigenvalue(r).max(1.0))
            .fold(0.0, f64::max);
        acc[0].add(eig);
        acc[1].add(max_abs(&(sb * sb - b)) / b.amax().max(1.0));
        acc[2].add(gram_residual(&p) / b.amax().max(1.0));
        acc[3].add(max_abs(&(v * j * v.transpose() * j - id)));
        acc[4].add(max_abs(&(j * v.transpose() * j * v - id)));
        acc[5].add(max_abs(&(sb * j * sb * j - id)));
        acc[6].add(max_abs(&(w.transpose() * w - id)));
        acc[7].add(max_abs(&(w * w.transpose() - id)));
        acc[8].add(max_abs(&(w.transpose() * j * w - pairing)));
        acc[9].add(max_abs(&(jp * jp - id)) / b.amax().max(1.0));
        let wp = f.get(FrameLabel::TransversePlus);
        let wm = f.get(FrameLabel::TransverseMinus);
        acc[10].add(max_abs(&(jp * wp - wp)).max(max_abs(&(jp * wm - wm))));
        let (fw, bw) = (f.get(FrameLabel::ForwardNull), f.get(FrameLabel::BackwardNull));
        let null = max_abs(&(jp * fw + bw / (r * r))).max(max_abs(&(jp * bw + fw * (r * r))));
        acc[11].add(null / (r * r).max(1.0 / (r * r)));
    }
    let anchors = [
        "B(p) w_λ = λ w_λ with λ ∈ {1, 1, r⁻², r²} (relative to max(λ, 1))",
        "√B(p) √B(p) = B(p)",
        "closed-form B(p) = V(β(p))ᵀ V(β(p))",
        "V(β(p)) J V(β(p))* J = 1",
        "J V(β(p))* J V(β(p)) = 1",
        "√B(p) J √B(p) J = 1",
        "frame is orthonormal",
        "Σ_λ w_λ w_λᵀ = 1",
        "⟨w_λ, J w_μ⟩ = diag(1, 1) ⊕ [[0, −1], [−1, 0]]",
        "J′ₚ² = 1 with J′ₚ = J B(p)",
        "J′ₚ w₁± = w₁±",
        "J′ₚ w_{r⁻²} = −r⁻² w_{r²} and J′ₚ w_{r²} = −r² w_{r⁻²}",
    ];
    for ((name, anchor), a) in names.iter().zip(anchors).zip(acc) {
        ctx.push(name, anchor, a, 1e-10);
    }

    let (mut herm, mut lin) = (Acc::new(), Acc::new());
    for _ in 0..ctx.n {
        let (u, v, z) = (
            random_c4(&mut ctx.rng),
            random_c4(&mut ctx.rng),
            random_c4(&mut ctx.rng),
        );
        let c = C64::new(ctx.rng.random_range(-2.0..2.0), ctx.rng.random_range(-2.0..2.0));
        herm.add((krein_pair(&u, &v) - krein_pair(&v, &u).conj()).norm());
        lin.add((krein_pair(&(u * c + z), &v) - (c.conj() * krein_pair(&u, &v) + krein_pair(&z, &v))).norm());
    }
    ctx.push("pair_hermitian", "⟨u, Jv⟩ = conj ⟨v, Ju⟩", herm, 1e-14);
    ctx.push("pair_conjugate_linear", "⟨cu + z, Jv⟩ = c̄⟨u, Jv⟩ + ⟨z, Jv⟩", lin, 1e-14);
    Ok(())
}

// --- rep ------------------------------------------------------------------

/// Radial range of the representation samples. The conjugate action contains
/// J′ₚ = J B(p), whose entries grow like max(r², r⁻²); over a boosted orbit the
/// rounding error of a two-path comparison grows with the product of those
/// factors, so the samples stay within a band where 1e-10 is meaningful.
pub const REP_R_MIN: f64 = 0.25;
pub const REP_R_MAX: f64 = 4.0;

fn suite_rep(ctx: &mut Ctx) -> Result<()> {
    let names = [
        "local_group_law",
        "conjugate_group_law",
        "induced_group_law",
        "intertwiner_commutes",
        "conjugate_is_fiber_conjugated_local",
        "local_inverse",
        "multiplier_krein_unitary",
    ];
    let mut acc: Vec<Acc> = names.iter().map(|_| Acc::new()).collect();
    for _ in 0..ctx.n {
        let g1 = random_group_element(&mut ctx.rng, 1.0, 2.0);
        let g2 = random_group_element(&mut ctx.rng, 1.0, 2.0);
        let phi = random_smooth_wave(&mut ctx.rng);
        let pts: Vec<ConePoint> = (0..100)
            .map(|_| random_cone_point(&mut ctx.rng, REP_R_MIN, REP_R_MAX))
            .collect();
        let g12 = g1.compose(&g2);
        acc[0].add(pointwise_distance(
            &act_local(&g1, &act_local(&g2, &phi)),
            &act_local(&g12, &phi),
            &pts,
        )?);
        acc[1].add(pointwise_distance(
            &act_conjugate(&g1, &act_conjugate(&g2, &phi)),
            &act_conjugate(&g12, &phi),
            &pts,
        )?);
        acc[2].add(pointwise_distance(
            &act_induced(&g1, &act_induced(&g2, &phi)),
            &act_induced(&g12, &phi),
            &pts,
        )?);
        acc[3].add(pointwise_distance(
            &intertwine_to_local(&act_induced(&g1, &phi)),
            &act_local(&g1, &intertwine_to_local(&phi)),
            &pts,
        )?);
        acc[4].add(pointwise_distance(
            &act_conjugate(&g1, &phi),
            &act_local(&g1, &phi.fiber_symmetry()).fiber_symmetry(),
            &pts,
        )?);
        acc[5].add(pointwise_distance(
            &act_local(&g1.inverse(), &act_local(&g1, &phi)),
            &phi,
            &pts,
        )?);
        for p in &pts[..10] {
            acc[6].add(multiplier_krein_residual(&g1.element, p)?);
        }
    }
    let anchors = [
        "U(g₁)U(g₂) = U(g₁g₂), local action, 100 points per pair",
        "U′(g₁)U′(g₂) = U′(g₁g₂), conjugate action, 100 points per pair",
        "U(g₁)U(g₂) = U(g₁g₂), induced action, 100 points per pair",
        "V(β)⁻¹ ∘ U_ind(g) = U_loc(g) ∘ V(β)⁻¹",
        "U′(g) = J′ U(g) J′",
        "U(g⁻¹)U(g) = 1",
        "V(γ(α,p)) J V(γ(α,p))ᵀ J = 1",
    ];
    for ((name, anchor), a) in names.iter().zip(anchors).zip(acc) {
        ctx.push(name, anchor, a, 1e-10);
    }
    Ok(())
}

// --- transversal ----------------------------------------------------------

fn suite_transversal(ctx: &mut Ctx) -> Result<()> {
    let names = [
        "residue_krein_null",
        "theta_antisymmetry",
        "theta_unit_circle",
        "theta_sign_invariance",
        "theta_cocycle",
        "theta_conjugate_picture",
        "theta_closed_form_boost03",
        "theta_closed_form_rot12",
        "theta_closed_form_rot23",
        "theta_closed_form_rot13",
        "helicity_multipliers",
        "transversal_krein_is_l2",
    ];
    let mut acc: Vec<Acc> = names.iter().map(|_| Acc::new()).collect();
    let mut rotation_residue = Acc::new();
    for _ in 0..ctx.n {
        let p = random_cone_point(&mut ctx.rng, 0.1, 10.0);
        let a = random_sl2(&mut ctx.rng, 1.0);
        let d = random_sl2(&mut ctx.rng, 1.0);
        let s = random_transversal_state(&mut ctx.rng);

        let u = gauge_residue(&a, &s, &p)?;
        acc[0].add(residue_defect(&u, &p)? / max_abs_c(&u).powi(2).max(1.0));
        let m = theta_matrix(&a, &p)?;
        acc[1].add(m.identity_residual());
        let t = m.phase();
        acc[2].add((t.cos * t.cos + t.sin * t.sin - 1.0).abs());
        acc[3].add(theta(&-a, &p)?.distance(&t));
        let q = boost_action(&a, &p)?;
        acc[4].add(theta(&(a * d), &p)?.distance(&t.add(&theta(&d, &q)?)));
        acc[5].add(theta_matrix_conjugate(&a, &p)?.max_difference(&m));

        let lambda = ctx.rng.random_range(-2.0..2.0);
        let angle = ctx.rng.random_range(-PI..PI);
        acc[6].add(theta(&SL2Element::alpha_03(lambda), &p)?.distance(&PhasePair::from_angle(0.0)));
        acc[7].add(theta(&SL2Element::alpha_12(angle), &p)?.distance(&PhasePair::from_angle(0.0)));
        acc[8].add(theta(&SL2Element::alpha_23(angle), &p)?.distance(&theta_rotation_23(angle, &p)));
        acc[9].add(theta(&SL2Element::alpha_13(angle), &p)?.distance(&theta_rotation_13(angle, &p)));

        let h = helicity_multipliers(&a, &p)?;
        let e = t.unit();
        let diag = Matrix2::new(e, C64::new(0.0, 0.0), C64::new(0.0, 0.0), e.conj());
        acc[10].add(max_abs_c(&(h - diag)));

        let [fp, fm] = s.eval(&p)?;
        let phi = s.embed().eval(&p)?;
        acc[11].add(
            (krein_pair(&phi, &phi) - (fp.norm_sqr() + fm.norm_sqr())).norm()
                / (fp.norm_sqr() + fm.norm_sqr()).max(1.0),
        );

        for rot in [
            SL2Element::alpha_12(angle),
            SL2Element::alpha_23(angle),
            SL2Element::alpha_13(angle),
        ] {
            rotation_residue.add(max_abs_c(&gauge_residue(&rot, &s, &p)?));
        }
    }
    let anchors = [
        "residue u of the split is Krein-null and Krein-orthogonal to w₁± (relative to max(|u|², 1))",
        "Θ⁺₋ = −Θ⁻₊ and Θ⁺₊ = Θ⁻₋",
        "(Θ⁺₊)² + (Θ⁻₊)² = 1",
        "Θ(−α, p) = Θ(α, p)",
        "Θ(αδ, p) = Θ(α, p) + Θ(δ, Λ(α)p)",
        "the conjugate action has the same transversal block",
        "Θ(α₀₃, p) = 0",
        "Θ(α₁₂, p) = 0",
        "Θ(α₂₃, p): cos = (p²p³ sinθ/ρ + ρ cosθ)/D, sin = −r p¹ sinθ/(Dρ); sign of sin fixed by Θ⁻₊ = ⟨w₁⁺(p), J V w₁⁻(Λp)⟩",
        "Θ(α₁₃, p): the α₂₃ form with p¹ ↔ p² and the sign of sin reversed",
        "𝒰⁻¹ R(Θ) 𝒰 = diag(e^{iΘ}, e^{−iΘ})",
        "⟨φ, Jφ⟩ = |f₊|² + |f₋|² on the transversal subspace",
    ];
    for ((name, anchor), a) in names.iter().zip(anchors).zip(acc) {
        ctx.push(name, anchor, a, 1e-10);
    }
    ctx.push(
        "rotation_residue_zero",
        "spatial rotations map the transversal subspace into itself",
        rotation_residue,
        1e-12,
    );
    Ok(())
}

// --- field ----------------------------------------------------------------

/// Ratios ‖U(α₀₃(λ))φ‖/‖φ‖ in the B-weighted norm for a w₁⁻ packet near the
/// apex: centre |p⃗₀| = 0.05, σ = 0.01.
pub fn unboundedness_ratios(rapidities: &[f64]) -> Result<Vec<f64>> {
    let phi = Wave::frame(
        FrameLabel::TransverseMinus,
        Envelope::gaussian([0.03, 0.0, 0.04], 0.01, C64::new(1.0, 0.0)),
    );
    let q = ConeQuadrature::for_waves(QuadratureConfig::default(), &[&phi])?;
    let base = hilbert_product(&phi, &phi, &q)?.re;
    rapidities
        .iter()
        .map(|&l| {
            let alpha = SL2Element::alpha_03(l);
            let moved = act_local(&GroupElement::homogeneous(alpha), &phi);
            let qt = q.transformed(&alpha)?;
            Ok((hilbert_product(&moved, &moved, &qt)?.re / base).sqrt())
        })
        .collect()
}

/// Two Gaussian frame terms with |p⃗₀| ∈ [2, 3] and σ ∈ [0.2, 0.3], so that
/// every centre clears the apex by more than six widths.
fn random_packet(rng: &mut ChaCha8Rng) -> Wave {
    let terms = (0..2).map(|_| {
        let label = FrameLabel::ALL[rng.random_range(0..4)];
        let r = rng.random_range(2.0..3.0);
        let center = unit_vector(rng).map(|x| x * r);
        let sigma = rng.random_range(0.2..0.3);
        let amp = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        Wave::frame(label, Envelope::gaussian(center, sigma, amp))
    });
    Wave::sum(terms)
}

fn suite_field(ctx: &mut Ctx) -> Result<()> {
    let config = QuadratureConfig::default();

    // Measure against the closed form of ∫ exp(−|p⃗−p⃗₀|²/σ²) dμ.
    let (center, sigma) = ([0.6, -1.1, 0.9], 0.55);
    let env = Envelope::gaussian(center, sigma, C64::new(1.0, 0.0));
    let q = ConeQuadrature::for_support(config, &env.support().expect("gaussian"))?;
    let got = q.integrate(|p| Ok(C64::new(env.eval(p).norm_sqr(), 0.0)))?;
    let exact = crate::field::gaussian_norm_squared(center, sigma);
    let mut measure = Acc::new();
    measure.add((got.re - exact).abs() / exact);
    ctx.push(
        "measure_reference",
        "∫ exp(−|p⃗−p⃗₀|²/σ²) dμ = π s³ √(2π) erf(R/(s√2))/R, s = σ/√2",
        measure,
        1e-8,
    );

    // Krein invariance with a fresh quadrature fitted to the moved packets.
    // boosts compress the packets in angle, hence the fine angular rule
    let invariance_config = QuadratureConfig::new(48, 128, 128);
    let (mut local, mut conj, mut shell) = (Acc::new(), Acc::new(), Acc::new());
    for _ in 0..ctx.n {
        let g = random_group_element(&mut ctx.rng, 0.5, 2.0);
        // φ′ contains φ, so the pair always overlaps
        let a = random_packet(&mut ctx.rng);
        let c = C64::new(ctx.rng.random_range(-1.0..1.0), ctx.rng.random_range(-1.0..1.0));
        let b = a.scale(c).add(&random_packet(&mut ctx.rng));
        let q0 = ConeQuadrature::for_waves(invariance_config, &[&a, &b])?;
        let before = krein_product(&a, &b, &q0)?;
        let scale = (l2_product(&a, &a, &q0)?.re * l2_product(&b, &b, &q0)?.re).sqrt();
        shell.add(q0.mass_shell_residual());
        for (acc, act) in [
            (&mut local, act_local as fn(&GroupElement, &Wave) -> Wave),
            (&mut conj, act_conjugate),
        ] {
            let (ua, ub) = (act(&g, &a), act(&g, &b));
            let q1 = ConeQuadrature::for_waves(invariance_config, &[&ua, &ub])?;
            acc.add((krein_product(&ua, &ub, &q1)? - before).norm() / scale);
        }
    }
    ctx.push(
        "krein_invariance_local",
        "⟨U(g)φ, J U(g)φ′⟩ = ⟨φ, Jφ′⟩ (relative to ‖φ‖‖φ′‖)",
        local,
        1e-6,
    );
    ctx.push(
        "krein_invariance_conjugate",
        "⟨U′(g)φ, J U′(g)φ′⟩ = ⟨φ, Jφ′⟩ (relative to ‖φ‖‖φ′‖)",
        conj,
        1e-6,
    );
    ctx.push("on_shell_nodes", "p·p = 0 at every quadrature node", shell, 1e-12);

    // Momentum against position on the reference desk.
    let desk = DeskConfig::reference();
    let spec = PacketSpec::reference();
    let phi = spec.to_wave()?;
    let cc = cross_check(&phi, &phi, &desk, spec.velocity())?;
    let (mut agree, mut spread, mut edge) = (Acc::new(), Acc::new(), Acc::new());
    agree.add(cc.discrepancy);
    spread.add(cc.time_spread);
    for s in &cc.slices {
        edge.add(s.edge_ratio);
    }
    let values: Vec<f64> = std::iter::once(cc.momentum.re)
        .chain(cc.slices.iter().map(|s| s.value.re))
        .collect();
    ctx.push_values(
        "position_momentum_agreement",
        "i∫{φ̄·J∂ₜφ − (∂ₜφ)‾·Jφ} d³x = ∫⟨φ̃, Jφ̃⟩ dμ on the reference packet and grid",
        agree,
        1e-3,
        values,
    );
    ctx.push(
        "time_slice_independence",
        "the position Krein product does not depend on t",
        spread,
        1e-3,
    );
    ctx.push(
        "desk_grid_containment",
        "|φ| on the grid faces relative to its peak",
        edge,
        1e-2,
    );

    let null_spec = PacketSpec::single(FrameLabel::BackwardNull, spec.terms[0].center, spec.terms[0].sigma);
    let null = null_spec.to_wave()?;
    let nc = cross_check(
        &null,
        &null,
        &DeskConfig {
            times: [0.0, 0.0],
            ..desk
        },
        spec.velocity(),
    )?;
    let mut nullity = Acc::new();
    nullity.add(nc.slices[0].value.norm() / nc.scale);
    ctx.push(
        "position_null_ray",
        "a w_{r²} packet has zero position Krein product (relative to ‖φ‖²)",
        nullity,
        1e-3,
    );

    // Local law and translation covariance at spacetime points near the packet.
    let q = ConeQuadrature::for_waves(desk.quadrature, &[&phi])?;
    let base = to_position(&phi, &q)?;
    let (mut law, mut shift) = (Acc::new(), Acc::new());
    let elements: Vec<GroupElement> = (0..4)
        .map(|_| GroupElement::homogeneous(random_sl2(&mut ctx.rng, 0.3)))
        .collect();
    let a = FourVector::new(0.4, -0.3, 0.5, 0.2);
    let shifted = to_position(&act_local(&GroupElement::translation(a), &phi), &q)?;
    let vel = spec.velocity();
    let mut xs = Vec::new();
    for _ in 0..100 {
        let t = ctx.rng.random_range(-1.0..1.0);
        let off = unit_vector(&mut ctx.rng).map(|x| x * ctx.rng.random_range(0.0..2.0));
        xs.push(FourVector::new(
            t,
            vel[0] * t + off[0],
            vel[1] * t + off[1],
            vel[2] * t + off[2],
        ));
    }
    let peak = xs.iter().map(|x| max_abs_c(&base.eval(x))).fold(0.0, f64::max);
    for x in &xs {
        shift.add(max_abs_c(&(shifted.eval(x) - base.eval(&(*x - a)))) / peak);
    }
    for (i, g) in elements.iter().enumerate() {
        let moved = act_local(g, &phi);
        let qm = ConeQuadrature::for_waves(desk.quadrature, &[&moved])?;
        let fm = to_position(&moved, &qm)?;
        let v = lorentz_of(&g.element);
        let v_inv = v.inverse();
        for x in xs.iter().skip(i * 25).take(25) {
            // evaluate the moved field where the original one is concentrated
            let y = v.apply(x);
            let rhs = v.apply_c(&base.eval(&v_inv.apply(&y)));
            law.add(max_abs_c(&(fm.eval(&y) - rhs)) / peak);
        }
    }
    ctx.push(
        "local_law",
        "F(U(α)φ̃)(x) = V(α) F(φ̃)(V(α)⁻¹x) at 100 spacetime points (relative to the peak)",
        law,
        1e-6,
    );
    ctx.push("translation_covariance", "F(U(a)φ̃)(x) = F(φ̃)(x − a)", shift, 1e-8);

    // The gauge function of the transversal action.
    let (mut gauge, mut rot) = (Acc::new(), Acc::new());
    for _ in 0..ctx.n.max(1) * 25 {
        let p = random_cone_point(&mut ctx.rng, 0.1, 10.0);
        let s = random_transversal_state(&mut ctx.rng);
        let alpha = random_sl2(&mut ctx.rng, 1.0);
        let u = gauge_residue(&alpha, &s, &p)?;
        gauge.add(gauge_function_defect(&alpha, &s, &p)? / max_abs_c(&u).max(1.0));
        rot.add(nonlocal_gauge_function(&SL2Element::alpha_23(ctx.rng.random_range(-PI..PI)), &s, &p)?.norm());
    }
    ctx.push("gauge_function_defect", "U(α)φ − 𝕌(α)φ = g̃ p", gauge, 1e-10);
    ctx.push("gauge_function_rotation", "g̃ = 0 for rotations", rot, 1e-12);

    // Unboundedness of boosts in the B-weighted norm.
    let ratios = unboundedness_ratios(&[1.0, 2.0, 3.0, 4.0])?;
    let mut mono = Acc::new();
    for w in ratios.windows(2) {
        mono.add((1.0 - w[1] / w[0]).max(0.0));
    }
    ctx.push_values(
        "boost_unboundedness",
        "‖U(α₀₃(λ))φ‖/‖φ‖ grows with λ ∈ {1, 2, 3, 4} for a packet near the apex",
        mono,
        0.0,
        ratios,
    );
    Ok(())
}
