//! Gaussian wave packets described as data, as read from JSON files.
//!
//! ```json
//! {"terms": [{"label": "w1+", "center": [1.5, 2.0, 0.0], "sigma": 0.5, "amplitude": [1.0, 0.0]}]}
//! ```
//!
//! Each term is a frame vector times a Gaussian envelope in p⃗. The amplitude
//! is optional and defaults to 1.

use serde::{Deserialize, Serialize};

use crate::krein::FrameLabel;
use crate::rep::{Envelope, Wave};
use crate::{Error, Result, C64};

/// One frame component w_λ(p)·A·exp(−|p⃗ − p⃗₀|²/(2σ²)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketTerm {
    pub label: FrameLabel,
    pub center: [f64; 3],
    pub sigma: f64,
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

/// Packet centres must lie farther than this many widths from the apex, so the
/// radial window stays clear of r = 0. Near the apex the gauge components are
/// weighted by r⁻² and the conjugate action loses all precision.
pub const APEX_CLEARANCE: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub terms: Vec<PacketTerm>,
}

impl PacketTerm {
    pub fn new(label: FrameLabel, center: [f64; 3], sigma: f64, amplitude: C64) -> Self {
        PacketTerm {
            label,
            center,
            sigma,
            amplitude: [amplitude.re, amplitude.im],
        }
    }

    pub fn amplitude(&self) -> C64 {
        C64::new(self.amplitude[0], self.amplitude[1])
    }

    pub fn envelope(&self) -> Envelope {
        Envelope::gaussian(self.center, self.sigma, self.amplitude())
    }
}

impl PacketSpec {
    pub fn new(terms: Vec<PacketTerm>) -> Result<Self> {
        let spec = PacketSpec { terms };
        spec.validate()?;
        Ok(spec)
    }

    /// A single term.
    pub fn single(label: FrameLabel, center: [f64; 3], sigma: f64) -> Self {
        PacketSpec {
            terms: vec![PacketTerm::new(label, center, sigma, C64::new(1.0, 0.0))],
        }
    }

    /// The transversal packet the position-space checks are calibrated on:
    /// w₁⁺ times a unit Gaussian centred at (2.1, 2.8, 0) with σ = 0.5.
    pub fn reference() -> Self {
        Self::single(FrameLabel::TransversePlus, [2.1, 2.8, 0.0], 0.5)
    }

    /// At least one term; every σ positive; all numbers finite; every centre
    /// farther than [`APEX_CLEARANCE`]·σ from the apex.
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidPacket("a packet needs at least one term".into()));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if !(t.sigma > 0.0 && t.sigma.is_finite()) {
                return Err(Error::InvalidPacket(format!(
                    "term {i}: sigma must be positive and finite, got {}",
                    t.sigma
                )));
            }
            if !t.center.iter().chain(&t.amplitude).all(|x| x.is_finite()) {
                return Err(Error::InvalidPacket(format!(
                    "term {i}: non-finite center or amplitude"
                )));
            }
            let r = t.center.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r <= APEX_CLEARANCE * t.sigma {
                return Err(Error::InvalidPacket(format!(
                    "term {i}: |center| = {r} must exceed {APEX_CLEARANCE}·sigma = {}",
                    APEX_CLEARANCE * t.sigma
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PacketSpec = serde_json::from_str(text).map_err(|e| Error::InvalidPacket(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("packet specs always serialize")
    }

    /// The momentum wave function Σ w_λ G.
    pub fn to_wave(&self) -> Result<Wave> {
        self.validate()?;
        Ok(Wave::sum(self.terms.iter().map(|t| Wave::frame(t.label, t.envelope()))))
    }

    /// Mean direction of motion, p̂₀ averaged with weights |A|²σ³ and
    /// normalized; zero when the directions cancel.
    pub fn velocity(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        for t in &self.terms {
            let r = t.center.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 0.0 {
                let w = t.amplitude().norm_sqr() * t.sigma.powi(3) / r;
                for k in 0..3 {
                    v[k] += w * t.center[k];
                }
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            v.map(|x| x / n)
        } else {
            v
        }
    }

    /// True when every term lies along w₁⁺ or w₁⁻.
    pub fn is_transversal(&self) -> bool {
        self.terms.iter().all(|t| t.label.is_transverse())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConePoint;

    #[test]
    fn json_round_trip_and_default_amplitude() {
        let spec = PacketSpec::from_json(r#"{"terms":[{"label":"wr2","center":[0,0,2],"sigma":0.3}]}"#).unwrap();
        assert_eq!(spec.terms[0].amplitude, [1.0, 0.0]);
        assert_eq!(spec.terms[0].label, FrameLabel::BackwardNull);
        assert_eq!(PacketSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn invalid_packets_are_rejected() {
        for text in [
            r#"{"terms":[]}"#,
            r#"{"terms":[{"label":"w1+","center":[1,0,0],"sigma":0}]}"#,
            r#"{"terms":[{"label":"w1+","center":[1,0,0],"sigma":-1}]}"#,
            r#"{"terms":[{"label":"w3","center":[1,0,0],"sigma":1}]}"#,
            r#"{"terms":[{"label":"w1+","center":[1,0],"sigma":1}]}"#,
            r#"{"terms":[{"label":"w1+","center":[1,0,0],"sigma":1,"extra":2}]}"#,
            r#"{"terms":[{"label":"w1+","center":[0.6,0,0],"sigma":0.1}]}"#,
            "not json",
        ] {
            assert!(
                matches!(PacketSpec::from_json(text), Err(Error::InvalidPacket(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn wave_is_the_sum_of_terms() {
        let mut spec = PacketSpec::reference();
        spec.terms.push(PacketTerm::new(
            FrameLabel::ForwardNull,
            [0.0, 1.0, 1.0],
            0.2,
            C64::new(0.0, 2.0),
        ));
        let w = spec.to_wave().unwrap();
        let p = ConePoint::from_spatial([1.0, 1.5, 0.5]).unwrap();
        let frame = crate::krein::Frame::at(&p).unwrap();
        let expect = frame.get_c(FrameLabel::TransversePlus) * spec.terms[0].envelope().eval(&p)
            + frame.get_c(FrameLabel::ForwardNull) * spec.terms[1].envelope().eval(&p);
        assert!(crate::max_abs_c(&(w.eval(&p).unwrap() - expect)) < 1e-15);
        assert!(!spec.is_transversal());
        assert!(PacketSpec::reference().is_transversal());
    }
}
