//! Versioned JSON netlists for the built-in interferometers. A netlist lists
//! the channel basis, logical input encodings, detection arms and the element
//! sequence; loading one recompiles the channel unitary from that data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::chain::{build_fredkin_from_parts, FredkinParts};
use super::channel::{Channel, ChannelBasis};
use super::element::OpticalElement;
use super::spec::{compile_elements, DetectionArm, GateName, InterferometerSpec, SlotRole};
use super::OpticsError;

pub const NETLIST_SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetlistArm {
    pub label: String,
    pub role: SlotRole,
    pub level_channels: Vec<Channel>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainSection {
    pub stage_prefixes: Vec<String>,
    /// (carrier slot, target slot) labels per stage.
    pub stage_slots: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetlistDoc {
    pub schema_version: String,
    pub gate: String,
    pub photons: Vec<String>,
    pub channels: Vec<Channel>,
    pub input_slots: BTreeMap<String, Vec<Channel>>,
    pub detection_arms: Vec<NetlistArm>,
    pub elements: Vec<OpticalElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSection>,
}

/// Serializable netlist of a built spec.
pub fn netlist_document(spec: &InterferometerSpec) -> NetlistDoc {
    NetlistDoc {
        schema_version: NETLIST_SCHEMA_VERSION.to_string(),
        gate: spec.gate.as_str().to_string(),
        photons: spec.photon_labels.clone(),
        channels: spec.basis.channels().to_vec(),
        input_slots: spec
            .input_slots
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        detection_arms: spec
            .arms
            .iter()
            .map(|a| NetlistArm {
                label: a.label.clone(),
                role: a.role,
                level_channels: a.level_channels.clone(),
            })
            .collect(),
        elements: spec.elements.clone(),
        chain: spec.chain.as_ref().map(|plan| ChainSection {
            stage_prefixes: plan.stage_prefixes.to_vec(),
            stage_slots: vec![
                ("c".into(), "t2".into()),
                ("c".into(), "t1".into()),
                ("c".into(), "t2".into()),
            ],
        }),
    }
}

/// Rebuilds and recompiles a spec from its netlist document.
pub fn load_netlist(doc: &NetlistDoc) -> Result<InterferometerSpec, OpticsError> {
    if doc.schema_version != NETLIST_SCHEMA_VERSION {
        return Err(OpticsError::Netlist(format!(
            "unsupported schema version {}",
            doc.schema_version
        )));
    }
    let gate = GateName::parse(&doc.gate)?;
    let arms: Vec<DetectionArm> = doc
        .detection_arms
        .iter()
        .map(|a| DetectionArm {
            label: a.label.clone(),
            role: a.role,
            level_channels: a.level_channels.clone(),
        })
        .collect();
    let mut input_slots = Vec::new();
    for label in &doc.photons {
        let channels = doc.input_slots.get(label).ok_or_else(|| {
            OpticsError::Netlist(format!("missing input slot for photon {label}"))
        })?;
        input_slots.push((label.clone(), channels.clone()));
    }
    match gate {
        GateName::Pswap => {
            let basis = ChannelBasis::new(doc.channels.clone())?;
            let compiled = compile_elements(&basis, &doc.elements)?;
            Ok(InterferometerSpec {
                gate,
                basis,
                elements: doc.elements.clone(),
                compiled,
                photon_labels: doc.photons.clone(),
                input_slots,
                arms,
                chain: None,
            })
        }
        GateName::Fredkin3 => {
            let chain = doc
                .chain
                .as_ref()
                .ok_or_else(|| OpticsError::Netlist("missing chain section".into()))?;
            if chain.stage_prefixes.len() != 3 {
                return Err(OpticsError::Netlist(
                    "chained gate needs exactly three stages".into(),
                ));
            }
            let encode = doc
                .elements
                .first()
                .cloned()
                .ok_or_else(|| OpticsError::Netlist("missing encode element".into()))?;
            let merge = doc
                .elements
                .last()
                .cloned()
                .ok_or_else(|| OpticsError::Netlist("missing merge element".into()))?;
            let mut stage_elements: [Vec<OpticalElement>; 3] =
                [Vec::new(), Vec::new(), Vec::new()];
            for e in &doc.elements[1..doc.elements.len() - 1] {
                let k = chain
                    .stage_prefixes
                    .iter()
                    .position(|p| e.label().starts_with(p.as_str()))
                    .ok_or_else(|| {
                        OpticsError::Netlist(format!(
                            "element {} belongs to no stage",
                            e.label()
                        ))
                    })?;
                stage_elements[k].push(e.clone());
            }
            let prefixes: [String; 3] = chain
                .stage_prefixes
                .clone()
                .try_into()
                .expect("length checked above");
            build_fredkin_from_parts(FredkinParts {
                encode,
                stage_elements,
                stage_prefixes: prefixes,
                merge,
            })
        }
    }
}
