use std::path::Path;

use krein_photon::cone::{
    boost_action, little_group_parameters, section, section_lorentz, section_residual, wigner_element, ConePoint,
};
use krein_photon::field::{
    cross_check, l2_product, position_krein_product_with_edge, product_with_estimate, to_position, ConeQuadrature,
    DeskConfig, MomentumProduct, QuadratureConfig,
};
use krein_photon::krein::{fiber_symmetry, gram, gram_sqrt, Frame, FrameLabel};
use krein_photon::packet::PacketSpec;
use krein_photon::rep::{act_local, GroupElement};
use krein_photon::sl2c::{little_group_residual, lorentz_of, FourVector, SL2Element};
use krein_photon::transversal::theta;
use krein_photon::verify::{self, Suite, VerifyOptions};
use krein_photon::{max_abs_c, Error, C4, C64};
use nalgebra::{Matrix2, Matrix4};
use serde_json::{json, Value};

use crate::grammar::ParsedElement;

/// Schema version of every JSON document the tool writes.
pub const SCHEMA: u32 = 1;

/// Strict-mode bounds: azimuth-halving change relative to √(‖φ‖‖φ′‖) and
/// radial edge ratio of a momentum product.
pub const STRICT_QUADRATURE: f64 = 1e-6;
/// Strict-mode bound on |φ| at the faces of a position grid relative to its peak.
pub const STRICT_GRID_EDGE: f64 = 1e-2;
/// Strict-mode bound on the relative momentum/position discrepancy.
pub const STRICT_CROSS_CHECK: f64 = 1e-3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonPositiveRadius(_) | Error::NotOnCone(_) | Error::DegenerateCoordinates(_) => 3,
            Error::Accuracy(_) => 4,
            Error::NotUnimodular { .. } | Error::InvalidPacket(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub type Outcome = Result<Value, Failure>;

/// A finished document plus the exit code to use after it has been written.
pub struct Document {
    pub body: Value,
    pub failure: Option<Failure>,
}

impl From<Value> for Document {
    fn from(body: Value) -> Self {
        Document { body, failure: None }
    }
}

fn real_matrix<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> Value {
    json!((0..R)
        .map(|i| (0..C).map(|j| m[(i, j)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn complex_matrix(m: &Matrix2<C64>) -> Value {
    json!((0..2)
        .map(|i| (0..2).map(|j| m[(i, j)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn complex_vector(v: &C4) -> Value {
    json!(v.iter().collect::<Vec<_>>())
}

fn sorted_eigenvalues(m: &Matrix4<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Rounds every number in `v` to `digits` significant digits.
pub fn round_numbers(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.is_f64().then(|| n.as_f64()).flatten().filter(|x| *x != 0.0) {
                let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
                *v = json!(r);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_numbers(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| round_numbers(x, digits)),
        _ => {}
    }
}

fn element_json(text: &str, g: &ParsedElement) -> Value {
    json!({
        "input": text,
        "matrix": complex_matrix(g.element.matrix()),
        "projection_correction": g.correction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalObject {
    #[value(name = "beta")]
    Beta,
    #[value(name = "V")]
    V,
    #[value(name = "B")]
    B,
    #[value(name = "sqrtB")]
    SqrtB,
    #[value(name = "frame")]
    Frame,
    #[value(name = "Jp")]
    Jp,
    #[value(name = "theta")]
    Theta,
    #[value(name = "wigner")]
    Wigner,
}

impl EvalObject {
    fn name(&self) -> &'static str {
        match self {
            EvalObject::Beta => "beta",
            EvalObject::V => "V",
            EvalObject::B => "B",
            EvalObject::SqrtB => "sqrtB",
            EvalObject::Frame => "frame",
            EvalObject::Jp => "Jp",
            EvalObject::Theta => "theta",
            EvalObject::Wigner => "wigner",
        }
    }
}

pub struct EvalInputs<'a> {
    pub p: Option<FourVector>,
    pub alpha: Option<(&'a str, ParsedElement)>,
}

pub fn eval(object: EvalObject, inputs: EvalInputs) -> Outcome {
    let point = inputs.p.map(|p| ConePoint::from_four_vector(&p)).transpose()?;
    let need_p = || point.ok_or_else(|| Failure::parse(format!("`eval {}` needs --p", object.name())));
    let need_alpha = || {
        inputs
            .alpha
            .map(|(_, g)| g.element)
            .ok_or_else(|| Failure::parse(format!("`eval {}` needs --alpha", object.name())))
    };
    let (value, metadata) = match object {
        EvalObject::Beta => {
            let p = need_p()?;
            (
                complex_matrix(section(&p).matrix()),
                json!({ "section_residual": section_residual(&p) }),
            )
        }
        EvalObject::V => match (inputs.alpha, point) {
            (Some((_, g)), p) => {
                let v = lorentz_of(&g.element);
                let image = p.map(|p| v.apply(&p.four_vector()).0);
                (
                    real_matrix(v.matrix()),
                    json!({ "metric_residual": v.metric_residual(), "image_of_p": image }),
                )
            }
            (None, Some(p)) => {
                let v = section_lorentz(&p);
                (
                    real_matrix(v.matrix()),
                    json!({ "of": "section", "metric_residual": v.metric_residual() }),
                )
            }
            (None, None) => return Err(Failure::parse("`eval V` needs --alpha or --p")),
        },
        EvalObject::B | EvalObject::SqrtB | EvalObject::Jp => {
            let p = need_p()?;
            let m = match object {
                EvalObject::B => gram(&p),
                EvalObject::SqrtB => gram_sqrt(&p),
                _ => fiber_symmetry(&p),
            };
            (
                real_matrix(&m),
                json!({ "r": p.r(), "eigenvalues": sorted_eigenvalues(&m) }),
            )
        }
        EvalObject::Frame => {
            let p = need_p()?;
            let f = Frame::at(&p)?;
            let mut vectors = serde_json::Map::new();
            let mut eigen = serde_json::Map::new();
            for l in FrameLabel::ALL {
                vectors.insert(l.as_str().into(), json!(f.get(l).iter().collect::<Vec<_>>()));
                eigen.insert(l.as_str().into(), json!(l.eigenvalue(p.r())));
            }
            (Value::Object(vectors), json!({ "r": p.r(), "eigenvalues": eigen }))
        }
        EvalObject::Theta => {
            let (p, alpha) = (need_p()?, need_alpha()?);
            let t = theta(&alpha, &p)?;
            let u = t.unit();
            (
                json!({ "cos": t.cos, "sin": t.sin }),
                json!({
                    "angle": t.sin.atan2(t.cos),
                    "helicity_multipliers": { "+1": u, "-1": u.conj() },
                    "image_of_p": boost_action(&alpha, &p)?.four_vector().0,
                }),
            )
        }
        EvalObject::Wigner => {
            let (p, alpha) = (need_p()?, need_alpha()?);
            let gamma = wigner_element(&alpha, &p)?;
            let (z, phi) = little_group_parameters(&gamma);
            (
                complex_matrix(gamma.matrix()),
                json!({ "z": z, "phi": phi, "little_group_residual": little_group_residual(&gamma) }),
            )
        }
    };
    Ok(json!({
        "schema": SCHEMA,
        "object": object.name(),
        "p": inputs.p.map(|p| p.0),
        "alpha": inputs.alpha.map(|(t, g)| element_json(t, &g)),
        "value": value,
        "metadata": metadata,
    }))
}

pub fn verify(suite: Suite, opts: VerifyOptions) -> Result<Document, Failure> {
    let report = verify::run(suite, opts)?;
    let failure = (!report.pass).then(|| Failure {
        code: 1,
        message: format!(
            "failing checks: {}",
            report
                .failing()
                .map(|c| format!("{}/{}", c.suite, c.name))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    });
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let body = serde_json::to_value(&report).expect("reports always serialize");
    Ok(Document { body, failure })
}

pub fn read_packet(path: &Path) -> Result<PacketSpec, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    PacketSpec::from_json(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProductKind {
    Krein,
    Hilbert,
    PositionKrein,
}

pub struct ProductOptions {
    pub quadrature: Option<QuadratureConfig>,
    pub time: f64,
    pub half_width: Option<f64>,
    pub spacing: Option<f64>,
    pub cross_check: bool,
    pub strict: bool,
}

pub fn product(kind: ProductKind, a: &Path, b: &Path, opts: &ProductOptions) -> Result<Document, Failure> {
    let (spec_a, spec_b) = (read_packet(a)?, read_packet(b)?);
    let (phi, psi) = (spec_a.to_wave()?, spec_b.to_wave()?);
    let mut desk = DeskConfig::reference();
    if let Some(q) = opts.quadrature {
        desk.quadrature = q;
    }
    if let Some(h) = opts.half_width {
        desk.half_width = h;
    }
    if let Some(s) = opts.spacing {
        desk.spacing = s;
    }
    let mut warnings: Vec<String> = Vec::new();
    let mut body = json!({
        "schema": SCHEMA,
        "kind": match kind {
            ProductKind::Krein => "krein",
            ProductKind::Hilbert => "hilbert",
            ProductKind::PositionKrein => "position-krein",
        },
        "packets": [a.display().to_string(), b.display().to_string()],
    });
    match kind {
        ProductKind::Krein | ProductKind::Hilbert => {
            let cfg = opts.quadrature.unwrap_or_default();
            let q = ConeQuadrature::for_waves(cfg, &[&phi, &psi])?;
            let which = if kind == ProductKind::Krein {
                MomentumProduct::Krein
            } else {
                MomentumProduct::Hilbert
            };
            let est = product_with_estimate(which, &phi, &psi, &q)?;
            let scale = (l2_product(&phi, &phi, &q)?.re * l2_product(&psi, &psi, &q)?.re).sqrt();
            let halving = if scale > 0.0 {
                est.azimuth_halving / scale
            } else {
                est.azimuth_halving
            };
            if halving > STRICT_QUADRATURE {
                warnings.push(format!(
                    "azimuth halving changes the value by {halving:.3e} relative, above {STRICT_QUADRATURE:e}"
                ));
            }
            if est.edge_ratio > STRICT_QUADRATURE {
                warnings.push(format!(
                    "integrand at the radial window edge is {:.3e} of its peak, above {STRICT_QUADRATURE:e}",
                    est.edge_ratio
                ));
            }
            body["value"] = json!(est.value);
            body["quadrature"] = json!({
                "config": cfg,
                "window": q.window(),
                "nodes": q.len(),
                "relative_azimuth_halving": halving,
                "edge_ratio": est.edge_ratio,
                "scale": scale,
            });
        }
        ProductKind::PositionKrein => {
            let q = ConeQuadrature::for_waves(desk.quadrature, &[&phi, &psi])?;
            let f = to_position(&phi, &q)?;
            let g = to_position(&psi, &q)?;
            let grid = desk.grid_at(opts.time, spec_a.velocity())?;
            let pp = position_krein_product_with_edge(&f, &g, opts.time, &grid);
            if pp.edge_ratio > STRICT_GRID_EDGE {
                warnings.push(format!(
                    "field on the grid faces is {:.3e} of its peak, above {STRICT_GRID_EDGE:e}; enlarge --half-width",
                    pp.edge_ratio
                ));
            }
            body["value"] = json!(pp.value);
            body["time"] = json!(opts.time);
            body["grid"] = json!({
                "center": grid.center,
                "half_width": grid.half_width,
                "spacing": grid.spacing,
                "points_per_axis": grid.points_per_axis(),
                "edge_ratio": pp.edge_ratio,
            });
            body["quadrature"] = json!({
                "config": desk.quadrature,
                "window": q.window(),
                "nodes": q.len(),
                "modes": f.modes().max(g.modes()),
            });
        }
    }
    if opts.cross_check {
        let cc = cross_check(&phi, &psi, &desk, spec_a.velocity())?;
        eprintln!("momentum/position discrepancy: {:.3e} (relative)", cc.discrepancy);
        if cc.discrepancy > STRICT_CROSS_CHECK {
            warnings.push(format!(
                "momentum/position discrepancy {:.3e} above {STRICT_CROSS_CHECK:e}",
                cc.discrepancy
            ));
        }
        for s in &cc.slices {
            if s.edge_ratio > STRICT_GRID_EDGE {
                warnings.push(format!(
                    "grid at t = {} does not contain the packets (edge ratio {:.3e})",
                    s.t, s.edge_ratio
                ));
            }
        }
        body["cross_check"] = json!({ "desk": desk, "result": cc });
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let failure = (opts.strict && !warnings.is_empty()).then(|| Failure {
        code: 4,
        message: format!("strict accuracy: {}", warnings.join("; ")),
    });
    body["warnings"] = json!(warnings);
    Ok(Document { body, failure })
}

pub struct TransformOptions<'a> {
    pub points: Vec<FourVector>,
    pub alpha: Option<(&'a str, ParsedElement)>,
    pub translation: Option<FourVector>,
    pub quadrature: Option<QuadratureConfig>,
}

/// φ(x) and ∂ₜφ(x) for a packet, optionally after acting with (a, α). When
/// acted on, the result is also compared with V(α)φ(V(α)⁻¹(x − a)).
pub fn transform(packet: &Path, opts: &TransformOptions) -> Outcome {
    if opts.points.is_empty() {
        return Err(Failure::parse("`transform` needs at least one --x"));
    }
    let spec = read_packet(packet)?;
    let phi = spec.to_wave()?;
    let cfg = opts.quadrature.unwrap_or(DeskConfig::reference().quadrature);
    let alpha = opts.alpha.map(|(_, g)| g.element).unwrap_or_else(SL2Element::identity);
    let a = opts.translation.unwrap_or(FourVector::ZERO);
    let g = GroupElement::new(a, alpha);
    let acted = opts.alpha.is_some() || opts.translation.is_some();
    let moved = if acted { act_local(&g, &phi) } else { phi.clone() };
    let q = ConeQuadrature::for_waves(cfg, &[&moved])?;
    let field = to_position(&moved, &q)?;
    let mut points = Vec::new();
    for x in &opts.points {
        let (v, dt) = field.eval_with_derivative(x);
        points.push(json!({ "x": x.0, "value": complex_vector(&v), "dt": complex_vector(&dt) }));
    }
    let mut body = json!({
        "schema": SCHEMA,
        "packet": packet.display().to_string(),
        "alpha": opts.alpha.map(|(t, g)| element_json(t, &g)),
        "translation": opts.translation.map(|a| a.0),
        "quadrature": { "config": cfg, "window": q.window(), "nodes": q.len(), "modes": field.modes() },
        "points": points,
    });
    if acted {
        let q0 = ConeQuadrature::for_waves(cfg, &[&phi])?;
        let base = to_position(&phi, &q0)?;
        let v = lorentz_of(&alpha);
        let v_inv = v.inverse();
        let (mut worst, mut peak) = (0.0_f64, 0.0_f64);
        for x in &opts.points {
            let lhs = field.eval(x);
            let rhs = v.apply_c(&base.eval(&v_inv.apply(&(*x - a))));
            worst = worst.max(max_abs_c(&(lhs - rhs)));
            peak = peak.max(max_abs_c(&rhs));
        }
        body["local_law"] = json!({
            "max_difference": worst,
            "relative": if peak > 0.0 { worst / peak } else { worst },
        });
    }
    Ok(body)
}
