//! Interferometer assembly: live-channel closure, element-by-element
//! compilation, and the built-in partial-swap layout.
//!
//! The partial-swap interferometer takes the control photon on two parallel
//! rails (u carries the auxiliary H component, d the computational H/V) and
//! the target photon on rail t. The logical swap is realized by the photons
//! trading sides: for computational inputs the control photon exits on the
//! target arms 11/12 while the target photon exits on the carrier arms 9/10,
//! so reading each arm's polarization yields the exchanged qubit values. An
//! auxiliary-level control (u rail) passes straight through on the primed
//! arms and nothing is exchanged.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chain::ChainPlan;
use super::channel::{Channel, ChannelBasis};
use super::element::{OpticalElement, PbsCrossing};
use super::OpticsError;
use crate::qudit::UnitaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateName {
    Pswap,
    Fredkin3,
}

impl GateName {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateName::Pswap => "pswap",
            GateName::Fredkin3 => "fredkin3",
        }
    }

    pub fn parse(s: &str) -> Result<Self, OpticsError> {
        match s {
            "pswap" => Ok(GateName::Pswap),
            "fredkin3" => Ok(GateName::Fredkin3),
            other => Err(OpticsError::InvalidInput(format!("unknown gate {other}"))),
        }
    }
}

/// Which logical subsystem an output arm reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotRole {
    CarrierSide,
    TargetSide,
}

/// A coincidence detector arm: a labeled group of output channels, one per
/// logical level of the subsystem it reads.
#[derive(Debug, Clone)]
pub struct DetectionArm {
    pub label: String,
    pub role: SlotRole,
    pub level_channels: Vec<Channel>,
}

/// A compiled interferometer together with its logical encoding and
/// detection layout.
#[derive(Debug, Clone)]
pub struct InterferometerSpec {
    pub gate: GateName,
    pub basis: ChannelBasis,
    pub elements: Vec<OpticalElement>,
    pub compiled: Array2<Complex64>,
    pub photon_labels: Vec<String>,
    /// Input encoding per logical slot: channel carrying each logical level.
    pub input_slots: Vec<(String, Vec<Channel>)>,
    pub arms: Vec<DetectionArm>,
    /// Present for the chained three-photon gate.
    pub chain: Option<ChainPlan>,
}

impl InterferometerSpec {
    pub fn logical_dims(&self) -> Vec<usize> {
        self.input_slots.iter().map(|(_, chs)| chs.len()).collect()
    }

    pub fn logical_dim(&self) -> usize {
        self.logical_dims().iter().product()
    }

    pub fn compiled_unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::new(self.compiled.clone()).expect("compiled matrix is square")
    }

    pub fn arm(&self, label: &str) -> Option<&DetectionArm> {
        self.arms.iter().find(|a| a.label == label)
    }
}

/// Closes a set of input channels under the action of an element list,
/// preserving first-seen order.
pub(crate) fn live_basis(
    inputs: &[Channel],
    elements: &[OpticalElement],
) -> Result<ChannelBasis, OpticsError> {
    let mut live: Vec<Channel> = Vec::new();
    for ch in inputs {
        if !live.contains(ch) {
            live.push(ch.clone());
        }
    }
    for e in elements {
        e.validate()?;
        e.extend_live_set(&mut live);
    }
    ChannelBasis::new(live)
}

/// Compiles an element list into a single channel unitary over the live
/// basis and checks unitarity.
pub(crate) fn compile_elements(
    basis: &ChannelBasis,
    elements: &[OpticalElement],
) -> Result<Array2<Complex64>, OpticsError> {
    let n = basis.len();
    let mut u = Array2::eye(n);
    for e in elements {
        e.apply_left(basis, &mut u)?;
    }
    let defect = UnitaryMatrix::new(u.clone())
        .map_err(OpticsError::Qudit)?
        .unitarity_defect();
    if defect > 1e-10 {
        return Err(OpticsError::NotUnitary(defect));
    }
    Ok(u)
}

fn arms_disjoint(arms: &[DetectionArm]) -> Result<(), OpticsError> {
    let mut seen: Vec<&str> = Vec::new();
    for arm in arms {
        for ch in &arm.level_channels {
            let mode = ch.mode.as_str();
            if seen.contains(&mode) {
                return Err(OpticsError::OverlappingArms(mode.to_string()));
            }
        }
        for ch in &arm.level_channels {
            if !seen.contains(&ch.mode.as_str()) {
                seen.push(&ch.mode);
            }
        }
    }
    Ok(())
}

/// Element list of the post-selected partial-swap interferometer: six PBS
/// cubes and eight wave plates.
pub(crate) fn pswap_elements(prefix: &str) -> Vec<OpticalElement> {
    let p = |m: &str| format!("{prefix}{m}");
    let pfx = |crossing: PbsCrossing| PbsCrossing {
        in_a: p(&crossing.in_a),
        in_b: crossing.in_b.map(|b| p(&b)),
        out_t: p(&crossing.out_t),
        out_r: p(&crossing.out_r),
    };
    let hwp = |label: &str, ports: &[&str], theta: f64| OpticalElement::Hwp {
        label: format!("{prefix}{label}"),
        ports: ports.iter().map(|m| p(m)).collect(),
        theta_deg: theta,
    };
    vec![
        OpticalElement::Pbs {
            label: p("PBS1"),
            crossings: vec![
                pfx(PbsCrossing::split("u", "1p", "2p")),
                pfx(PbsCrossing::split("d", "1", "2")),
            ],
        },
        OpticalElement::Pbs {
            label: p("PBS2"),
            crossings: vec![pfx(PbsCrossing::split("t", "4", "3"))],
        },
        hwp("HWP45a", &["1"], 45.0),
        hwp("HWP45b", &["2"], 45.0),
        hwp("HWP67a", &["3"], 67.5),
        hwp("HWP22a", &["4"], 22.5),
        OpticalElement::Pbs {
            label: p("PBS3"),
            crossings: vec![pfx(PbsCrossing::mix("2", "3", "6", "5"))],
        },
        OpticalElement::Pbs {
            label: p("PBS4"),
            crossings: vec![
                pfx(PbsCrossing::mix("1", "4", "8", "7")),
                pfx(PbsCrossing::split("1p", "8p", "7p")),
            ],
        },
        hwp("HWP67b", &["5", "6"], 67.5),
        hwp("HWP22b", &["7", "8", "8p"], 22.5),
        OpticalElement::Pbs {
            label: p("PBS5"),
            crossings: vec![
                pfx(PbsCrossing::mix("8", "5", "9", "10")),
                pfx(PbsCrossing::split("8p", "9p", "10p")),
            ],
        },
        OpticalElement::Pbs {
            label: p("PBS6"),
            crossings: vec![pfx(PbsCrossing::mix("7", "6", "11", "12"))],
        },
        hwp("HWP45c", &["10", "10p"], 45.0),
        hwp("HWP45d", &["12"], 45.0),
    ]
}

pub(crate) fn pswap_input_slots(prefix: &str) -> Vec<(String, Vec<Channel>)> {
    let p = |m: &str| format!("{prefix}{m}");
    vec![
        (
            "c".to_string(),
            vec![
                Channel::h(p("d")),
                Channel::v(p("d")),
                Channel::h(p("u")),
            ],
        ),
        (
            "t".to_string(),
            vec![Channel::h(p("t")), Channel::v(p("t"))],
        ),
    ]
}

pub(crate) fn pswap_arms(prefix: &str) -> Vec<DetectionArm> {
    let p = |m: &str| format!("{prefix}{m}");
    vec![
        DetectionArm {
            label: "9".into(),
            role: SlotRole::CarrierSide,
            level_channels: vec![
                Channel::h(p("9")),
                Channel::v(p("9")),
                Channel::h(p("9p")),
            ],
        },
        DetectionArm {
            label: "10".into(),
            role: SlotRole::CarrierSide,
            level_channels: vec![
                Channel::h(p("10")),
                Channel::v(p("10")),
                Channel::h(p("10p")),
            ],
        },
        DetectionArm {
            label: "11".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p("11")), Channel::v(p("11"))],
        },
        DetectionArm {
            label: "12".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p("12")), Channel::v(p("12"))],
        },
    ]
}

/// Builds and compiles the post-selected partial-swap interferometer.
pub fn build_pswap_interferometer() -> Result<InterferometerSpec, OpticsError> {
    let elements = pswap_elements("");
    let input_slots = pswap_input_slots("");
    let inputs: Vec<Channel> = {
        // basis seed in ket order: u:H, d:H, d:V, t:H, t:V
        let c = &input_slots[0].1;
        let t = &input_slots[1].1;
        vec![c[2].clone(), c[0].clone(), c[1].clone(), t[0].clone(), t[1].clone()]
    };
    let basis = live_basis(&inputs, &elements)?;
    let compiled = compile_elements(&basis, &elements)?;
    let arms = pswap_arms("");
    arms_disjoint(&arms)?;
    Ok(InterferometerSpec {
        gate: GateName::Pswap,
        basis,
        elements,
        compiled,
        photon_labels: vec!["c".into(), "t".into()],
        input_slots,
        arms,
        chain: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pswap_has_six_pbs_and_eight_hwp() {
        let spec = build_pswap_interferometer().unwrap();
        let pbs = spec
            .elements
            .iter()
            .filter(|e| matches!(e, OpticalElement::Pbs { .. }))
            .count();
        let hwp = spec
            .elements
            .iter()
            .filter(|e| matches!(e, OpticalElement::Hwp { .. }))
            .count();
        assert_eq!((pbs, hwp), (6, 8));
    }

    #[test]
    fn compiled_pswap_is_unitary() {
        let spec = build_pswap_interferometer().unwrap();
        let defect = spec.compiled_unitary().unitarity_defect();
        assert!(defect <= 1e-10, "defect {defect}");
    }

    #[test]
    fn first_pbs_routes_like_the_layout() {
        // u:H transmits to 1p, d:H transmits to 1, d:V reflects into 2
        let spec = build_pswap_interferometer().unwrap();
        let elements = &spec.elements[..2];
        let basis = &spec.basis;
        let mut u = Array2::eye(basis.len());
        for e in elements {
            e.apply_left(basis, &mut u).unwrap();
        }
        let idx = |m: &str, pol| basis.index_of(&Channel::new(m, pol)).unwrap();
        use super::super::channel::Pol::*;
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(u[[idx("1p", H), idx("u", H)]], one);
        assert_eq!(u[[idx("1", H), idx("d", H)]], one);
        assert_eq!(u[[idx("2", V), idx("d", V)]], one);
        // PBS entries are all 0 or 1
        for x in u.iter() {
            assert!(x.im == 0.0 && (x.re == 0.0 || x.re == 1.0));
        }
    }

    #[test]
    fn pbs_applied_twice_restores_the_channel_map() {
        let spec = build_pswap_interferometer().unwrap();
        let basis = &spec.basis;
        let pbs = &spec.elements[0];
        let mut u = Array2::eye(basis.len());
        pbs.apply_left(basis, &mut u).unwrap();
        pbs.apply_left(basis, &mut u).unwrap();
        for (i, row) in u.rows().into_iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(*x, Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn overlapping_arms_are_rejected() {
        let mut arms = pswap_arms("");
        arms[1].level_channels[0] = Channel::h("9");
        assert!(matches!(
            arms_disjoint(&arms),
            Err(OpticsError::OverlappingArms(_))
        ));
    }
}
