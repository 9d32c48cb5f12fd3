use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::OpticsError;

/// Photon polarization. Horizontal encodes logical |0>, vertical |1>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pol {
    H,
    V,
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pol::H => write!(f, "H"),
            Pol::V => write!(f, "V"),
        }
    }
}

/// One optical channel: a spatial mode label paired with a polarization.
/// Primed modes are written with a trailing `p` (`9p` for 9').
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel {
    pub mode: String,
    pub pol: Pol,
}

impl Channel {
    pub fn new(mode: impl Into<String>, pol: Pol) -> Self {
        Self {
            mode: mode.into(),
            pol,
        }
    }

    pub fn h(mode: impl Into<String>) -> Self {
        Self::new(mode, Pol::H)
    }

    pub fn v(mode: impl Into<String>) -> Self {
        Self::new(mode, Pol::V)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.mode, self.pol)
    }
}

impl std::str::FromStr for Channel {
    type Err = OpticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mode, pol) = s
            .rsplit_once(':')
            .ok_or_else(|| OpticsError::UnknownChannel(s.to_string()))?;
        let pol = match pol {
            "H" => Pol::H,
            "V" => Pol::V,
            _ => return Err(OpticsError::UnknownChannel(s.to_string())),
        };
        Ok(Channel::new(mode, pol))
    }
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered, duplicate-free set of live channels. Ordering is fixed at
/// construction and defines the row/column layout of every compiled matrix.
#[derive(Debug, Clone)]
pub struct ChannelBasis {
    channels: Vec<Channel>,
    lookup: HashMap<Channel, usize>,
}

impl ChannelBasis {
    pub fn new(channels: Vec<Channel>) -> Result<Self, OpticsError> {
        let mut lookup = HashMap::with_capacity(channels.len());
        for (i, ch) in channels.iter().enumerate() {
            if lookup.insert(ch.clone(), i).is_some() {
                return Err(OpticsError::DuplicateChannel(ch.to_string()));
            }
        }
        Ok(Self { channels, lookup })
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn contains(&self, ch: &Channel) -> bool {
        self.lookup.contains_key(ch)
    }

    pub fn index_of(&self, ch: &Channel) -> Result<usize, OpticsError> {
        self.lookup
            .get(ch)
            .copied()
            .ok_or_else(|| OpticsError::UnknownChannel(ch.to_string()))
    }
}
