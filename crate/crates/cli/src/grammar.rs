//! Text forms of the command-line inputs.
//!
//! Four-vectors are comma-separated reals `t,x,y,z`. Group elements are one or
//! more factors joined by `*`, each of the form
//!
//! ```text
//! rot12:θ | rot13:θ | rot23:θ | boost03:λ | little:z_re,z_im,φ | raw:a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im
//! ```
//!
//! A `raw` matrix is rescaled onto det = 1 and the size of that correction is
//! reported back.

use krein_photon::field::QuadratureConfig;
use krein_photon::sl2c::{little_group_element, FourVector, SL2Element};
use krein_photon::C64;
use nalgebra::Matrix2;

/// A parsed group element together with the largest projection correction
/// applied to any `raw` factor.
#[derive(Debug, Clone, Copy)]
pub struct ParsedElement {
    pub element: SL2Element,
    pub correction: f64,
}

fn reals(text: &str, what: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("{what}: `{s}` is not a finite number"))
        })
        .collect()
}

fn fixed<const N: usize>(text: &str, what: &str) -> Result<[f64; N], String> {
    let v = reals(text, what)?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("{what}: expected {N} comma-separated numbers, got {}", v.len()))
}

pub fn four_vector(text: &str) -> Result<FourVector, String> {
    fixed::<4>(text, "four-vector").map(FourVector)
}

pub fn quadrature(text: &str) -> Result<QuadratureConfig, String> {
    let v = fixed::<3>(text, "quadrature")?;
    if v.iter().any(|x| x.fract() != 0.0 || *x < 1.0) {
        return Err(format!(
            "quadrature: node counts must be positive integers, got `{text}`"
        ));
    }
    let cfg = QuadratureConfig::new(v[0] as usize, v[1] as usize, v[2] as usize);
    if cfg.n_azimuth % 2 != 0 {
        return Err("quadrature: the azimuthal node count must be even".into());
    }
    Ok(cfg)
}

fn factor(text: &str) -> Result<(SL2Element, f64), String> {
    let (kind, args) = text
        .split_once(':')
        .ok_or_else(|| format!("group element `{text}`: expected kind:arguments"))?;
    let one = || fixed::<1>(args, kind).map(|[x]| x);
    Ok(match kind.trim() {
        "rot12" => (SL2Element::alpha_12(one()?), 0.0),
        "rot13" => (SL2Element::alpha_13(one()?), 0.0),
        "rot23" => (SL2Element::alpha_23(one()?), 0.0),
        "boost03" => (SL2Element::alpha_03(one()?), 0.0),
        "little" => {
            let [re, im, phi] = fixed::<3>(args, kind)?;
            (little_group_element(C64::new(re, im), phi), 0.0)
        }
        "raw" => {
            let v = fixed::<8>(args, kind)?;
            let c = |i: usize| C64::new(v[2 * i], v[2 * i + 1]);
            SL2Element::project(Matrix2::new(c(0), c(1), c(2), c(3))).map_err(|e| format!("raw element: {e}"))?
        }
        other => {
            return Err(format!(
                "unknown group element kind `{other}` (rot12, rot13, rot23, boost03, little, raw)"
            ))
        }
    })
}

pub fn group_element(text: &str) -> Result<ParsedElement, String> {
    let mut element = SL2Element::identity();
    let mut correction = 0.0_f64;
    for part in text.split('*') {
        let (g, c) = factor(part)?;
        element = element * g;
        correction = correction.max(c);
    }
    Ok(ParsedElement { element, correction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use krein_photon::max_abs_c;

    #[test]
    fn four_vectors() {
        assert_eq!(four_vector("2, 0,0,2").unwrap(), FourVector::new(2.0, 0.0, 0.0, 2.0));
        assert!(four_vector("1,0,0").is_err());
        assert!(four_vector("1,0,0,x").is_err());
        assert!(four_vector("1,0,0,inf").is_err());
    }

    #[test]
    fn named_elements_and_products() {
        let g = group_element("rot23:0.7").unwrap();
        assert!(max_abs_c(&(g.element.matrix() - SL2Element::alpha_23(0.7).matrix())) < 1e-15);
        let h = group_element("boost03:1*rot12:0.3").unwrap();
        let want = SL2Element::alpha_03(1.0) * SL2Element::alpha_12(0.3);
        assert!(max_abs_c(&(h.element.matrix() - want.matrix())) < 1e-15);
        assert!(group_element("spin:1").is_err());
        assert!(group_element("rot12").is_err());
        assert!(group_element("little:1,2").is_err());
    }

    #[test]
    fn raw_elements_are_projected() {
        let g = group_element("raw:2,0,0,0,0,0,2,0").unwrap();
        assert!((g.correction - 1.0).abs() < 1e-15);
        assert!((g.element.det() - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(group_element("raw:1,0,1,0,1,0,1,0").is_err());
    }

    #[test]
    fn quadrature_counts() {
        assert_eq!(quadrature("8,4,6").unwrap(), QuadratureConfig::new(8, 4, 6));
        assert!(quadrature("8,4,5").is_err());
        assert!(quadrature("8,0,4").is_err());
        assert!(quadrature("8,1.5,4").is_err());
    }
}
