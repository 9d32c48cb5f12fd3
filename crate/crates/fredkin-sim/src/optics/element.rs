//! Transfer matrices of the individual optical elements.
//!
//! A polarizing beam splitter transmits H and reflects V with no reflection
//! phase; every PBS entry is 0 or 1. The arithmetic of the post-selected
//! gates carries no imaginary units, so adding the physical i-on-reflection
//! convention would break every amplitude fixture. A half-wave plate at angle
//! theta acts on one mode's (H, V) pair as the real reflection
//! [[cos 2t, sin 2t], [sin 2t, -cos 2t]]; plates covering several parallel
//! rails are modeled as one element with a port list. Angles are stored in
//! degrees, matching how the plates are labeled on the bench.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::channel::{Channel, ChannelBasis, Pol};
use super::OpticsError;

/// Jones matrix of a half-wave plate with its fast axis at `theta_deg`.
/// Real, symmetric, and self-inverse for every angle.
pub fn hwp_matrix(theta_deg: f64) -> [[f64; 2]; 2] {
    let two_theta = 2.0 * theta_deg.to_radians();
    let (s, c) = two_theta.sin_cos();
    [[c, s], [s, -c]]
}

/// One beam-splitting event inside a PBS cube: input rail `in_a` (and
/// optionally a second rail `in_b` crossing it) mapped onto the transmit and
/// reflect output rails. H goes straight (a -> t, b -> r), V crosses
/// (a -> r, b -> t). A crossing with no `in_b` is a plain polarization split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PbsCrossing {
    pub in_a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_b: Option<String>,
    pub out_t: String,
    pub out_r: String,
}

impl PbsCrossing {
    pub fn split(in_a: &str, out_t: &str, out_r: &str) -> Self {
        Self {
            in_a: in_a.into(),
            in_b: None,
            out_t: out_t.into(),
            out_r: out_r.into(),
        }
    }

    pub fn mix(in_a: &str, in_b: &str, out_t: &str, out_r: &str) -> Self {
        Self {
            in_a: in_a.into(),
            in_b: Some(in_b.into()),
            out_t: out_t.into(),
            out_r: out_r.into(),
        }
    }

    /// Channel relabelings performed by this crossing.
    pub fn mappings(&self) -> Vec<(Channel, Channel)> {
        let mut maps = vec![
            (Channel::h(&self.in_a), Channel::h(&self.out_t)),
            (Channel::v(&self.in_a), Channel::v(&self.out_r)),
        ];
        if let Some(b) = &self.in_b {
            maps.push((Channel::h(b), Channel::h(&self.out_r)));
            maps.push((Channel::v(b), Channel::v(&self.out_t)));
        }
        maps
    }

    fn ports(&self) -> Vec<&str> {
        let mut p = vec![self.in_a.as_str(), self.out_t.as_str(), self.out_r.as_str()];
        if let Some(b) = &self.in_b {
            p.push(b.as_str());
        }
        p
    }
}

/// A named element of an interferometer. One PBS element may hold several
/// crossings (parallel displaced rails through the same cube) and one HWP may
/// cover several rails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OpticalElement {
    Pbs {
        label: String,
        crossings: Vec<PbsCrossing>,
    },
    Hwp {
        label: String,
        ports: Vec<String>,
        theta_deg: f64,
    },
    Phase {
        label: String,
        port: String,
        phi: f64,
    },
}

impl OpticalElement {
    pub fn pbs(label: &str, crossings: Vec<PbsCrossing>) -> Self {
        Self::Pbs {
            label: label.into(),
            crossings,
        }
    }

    pub fn hwp(label: &str, ports: &[&str], theta_deg: f64) -> Self {
        Self::Hwp {
            label: label.into(),
            ports: ports.iter().map(|p| p.to_string()).collect(),
        theta_deg,
        }
    }

    pub fn phase(label: &str, port: &str, phi: f64) -> Self {
        Self::Phase {
            label: label.into(),
            port: port.into(),
            phi,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Self::Pbs { label, .. } | Self::Hwp { label, .. } | Self::Phase { label, .. } => label,
        }
    }

    pub fn validate(&self) -> Result<(), OpticsError> {
        match self {
            Self::Pbs { label, crossings } => {
                for c in crossings {
                    let ports = c.ports();
                    for (i, p) in ports.iter().enumerate() {
                        if ports[..i].contains(p) {
                            return Err(OpticsError::DuplicatePort(
                                p.to_string(),
                                label.clone(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            Self::Hwp { label, ports, .. } => {
                for (i, p) in ports.iter().enumerate() {
                    if ports[..i].contains(p) {
                        return Err(OpticsError::DuplicatePort(p.clone(), label.clone()));
                    }
                }
                Ok(())
            }
            Self::Phase { .. } => Ok(()),
        }
    }

    /// Channels a live input channel can move to through this element, used
    /// when closing an input set into the full live basis.
    pub fn extend_live_set(&self, live: &mut Vec<Channel>) {
        let contains = |set: &[Channel], ch: &Channel| set.contains(ch);
        match self {
            Self::Pbs { crossings, .. } => {
                for c in crossings {
                    for (from, to) in c.mappings() {
                        if contains(live, &from) && !contains(live, &to) {
                            live.push(to);
                        }
                    }
                }
            }
            Self::Hwp { ports, .. } => {
                for p in ports {
                    let h = Channel::h(p);
                    let v = Channel::v(p);
                    if contains(live, &h) || contains(live, &v) {
                        if !contains(live, &h) {
                            live.push(h);
                        }
                        if !contains(live, &v) {
                            live.push(v);
                        }
                    }
                }
            }
            Self::Phase { .. } => {}
        }
    }

    /// Left-multiplies the element's unitary onto an evolving matrix, i.e.
    /// u := E u. PBS relabelings act as channel pair swaps; each pairs an
    /// upstream label with a downstream one, so on the live basis the element
    /// is a genuine permutation.
    pub fn apply_left(
        &self,
        basis: &ChannelBasis,
        u: &mut Array2<Complex64>,
    ) -> Result<(), OpticsError> {
        self.validate()?;
        match self {
            Self::Pbs { crossings, .. } => {
                for c in crossings {
                    for (from, to) in c.mappings() {
                        match (basis.contains(&from), basis.contains(&to)) {
                            (true, true) => {
                                let i = basis.index_of(&from)?;
                                let j = basis.index_of(&to)?;
                                for col in 0..u.ncols() {
                                    let tmp = u[[i, col]];
                                    u[[i, col]] = u[[j, col]];
                                    u[[j, col]] = tmp;
                                }
                            }
                            (true, false) => {
                                // a live channel must have somewhere to go
                                return Err(OpticsError::UnknownChannel(to.to_string()));
                            }
                            (false, _) => {} // vacuum rail, nothing to route
                        }
                    }
                }
            }
            Self::Hwp { ports, theta_deg, .. } => {
                let [[a, b], [c, d]] = hwp_matrix(*theta_deg);
                for p in ports {
                    let h = Channel::h(p);
                    let v = Channel::v(p);
                    if !basis.contains(&h) && !basis.contains(&v) {
                        return Err(OpticsError::UnknownChannel(h.to_string()));
                    }
                    let i = basis.index_of(&h)?;
                    let j = basis.index_of(&v)?;
                    for col in 0..u.ncols() {
                        let rh = u[[i, col]];
                        let rv = u[[j, col]];
                        u[[i, col]] = a * rh + b * rv;
                        u[[j, col]] = c * rh + d * rv;
                    }
                }
            }
            Self::Phase { port, phi, .. } => {
                let factor = Complex64::from_polar(1.0, *phi);
                for pol in [Pol::H, Pol::V] {
                    let ch = Channel::new(port.clone(), pol);
                    if basis.contains(&ch) {
                        let i = basis.index_of(&ch)?;
                        for col in 0..u.ncols() {
                            u[[i, col]] *= factor;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
