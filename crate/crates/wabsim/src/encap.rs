//! Tunnel encapsulation calculus: layer stacks, MTU budgets, payload efficiency.
//!
//! A user-plane packet crossing the relayed backhaul carries up to three
//! nested tunnels — the backhaul GTP-U tunnel of the WAB-MT's PDU session, a
//! site-to-site VPN, and the end UE's own GTP-U tunnel inside it. Each layer
//! costs header bytes (20 network + 8 datagram + 8 tunnel = 36 by default),
//! so the MTU left for the inner payload shrinks with every layer. This
//! module keeps that arithmetic honest and explicit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default per-layer overhead in bytes: 20 (network) + 8 (datagram) + 8 (tunnel header).
pub const DEFAULT_LAYER_OVERHEAD_BYTES: u32 = 36;

/// Layers a packet accepts before [`EncapError::StackOverflow`], unless overridden.
pub const DEFAULT_MAX_LAYERS: usize = 4;

/// Smallest outer MTU a policy accepts.
pub const MIN_OUTER_MTU_BYTES: u32 = 68;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncapError {
    #[error("encapsulation stack already holds the maximum of {max} layers")]
    StackOverflow { max: usize },
    #[error("cannot decapsulate a packet with an empty layer stack")]
    EmptyStack,
    #[error("combined layer overhead {overhead_bytes} B leaves no payload room in outer MTU {outer_mtu_bytes} B")]
    OverheadExceedsMtu {
        outer_mtu_bytes: u32,
        overhead_bytes: u32,
    },
    #[error("outer MTU {0} B is below the minimum of {MIN_OUTER_MTU_BYTES} B")]
    MtuTooSmall(u32),
    #[error("packet of {total_bytes} B cannot traverse outer MTU {outer_mtu_bytes} B with fragmentation forbidden")]
    FragmentationForbidden {
        outer_mtu_bytes: u32,
        total_bytes: u32,
    },
    #[error("packet payload must be at least 1 byte")]
    EmptyPayload,
}

/// What a tunnel layer is, for bookkeeping and logs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    /// Backhaul-session GTP-U tunnel (WAB-MT PDU session user plane).
    GtpU { tunnel_id: u32 },
    /// Site-to-site VPN between the donor site and the core site.
    Vpn,
    /// End-UE GTP-U tunnel carried inside the VPN.
    InnerGtpU { tunnel_id: u32 },
}

/// One encapsulation layer together with the header bytes it adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub overhead_bytes: u32,
}

impl Layer {
    /// Backhaul GTP-U layer at the default 36 B overhead.
    pub fn gtpu(tunnel_id: u32) -> Self {
        Self {
            kind: LayerKind::GtpU { tunnel_id },
            overhead_bytes: DEFAULT_LAYER_OVERHEAD_BYTES,
        }
    }

    /// VPN layer at the default 36 B overhead.
    pub fn vpn() -> Self {
        Self {
            kind: LayerKind::Vpn,
            overhead_bytes: DEFAULT_LAYER_OVERHEAD_BYTES,
        }
    }

    /// Inner (UE-session) GTP-U layer at the default 36 B overhead.
    pub fn inner_gtpu(tunnel_id: u32) -> Self {
        Self {
            kind: LayerKind::InnerGtpU { tunnel_id },
            overhead_bytes: DEFAULT_LAYER_OVERHEAD_BYTES,
        }
    }

    /// Same kind, custom overhead (e.g. compressed headers or test layers).
    pub fn with_overhead(kind: LayerKind, overhead_bytes: u32) -> Self {
        Self {
            kind,
            overhead_bytes,
        }
    }
}

/// The canonical three-layer stack carried by a relayed user-plane packet.
pub fn reference_stack(bh_tunnel_id: u32, ue_tunnel_id: u32) -> Vec<Layer> {
    vec![
        Layer::inner_gtpu(ue_tunnel_id),
        Layer::vpn(),
        Layer::gtpu(bh_tunnel_id),
    ]
}

/// A payload plus its encapsulation stack, innermost layer first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packet {
    payload_bytes: u32,
    layers: Vec<Layer>,
    max_layers: usize,
}

impl Packet {
    /// Bare packet with the default layer budget.
    pub fn new(payload_bytes: u32) -> Result<Self, EncapError> {
        Self::with_max_layers(payload_bytes, DEFAULT_MAX_LAYERS)
    }

    /// Bare packet with an explicit layer budget.
    pub fn with_max_layers(payload_bytes: u32, max_layers: usize) -> Result<Self, EncapError> {
        if payload_bytes == 0 {
            return Err(EncapError::EmptyPayload);
        }
        Ok(Self {
            payload_bytes,
            layers: Vec::new(),
            max_layers,
        })
    }

    pub fn payload_bytes(&self) -> u32 {
        self.payload_bytes
    }

    /// Layers innermost first; the last entry is the outermost header.
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn max_layers(&self) -> usize {
        self.max_layers
    }

    /// On-the-wire size: payload plus every layer's overhead.
    pub fn total_bytes(&self) -> u32 {
        self.payload_bytes
            + self
                .layers
                .iter()
                .map(|l| l.overhead_bytes)
                .sum::<u32>()
    }

    /// Push `layer` as the new outermost header.
    pub fn encap(mut self, layer: Layer) -> Result<Self, EncapError> {
        if self.layers.len() >= self.max_layers {
            return Err(EncapError::StackOverflow {
                max: self.max_layers,
            });
        }
        self.layers.push(layer);
        Ok(self)
    }

    /// Pop the outermost header, returning it and the shortened packet.
    pub fn decap(mut self) -> Result<(Layer, Self), EncapError> {
        match self.layers.pop() {
            Some(layer) => Ok((layer, self)),
            None => Err(EncapError::EmptyStack),
        }
    }
}

/// Whether oversized packets are dropped or split.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fragmentation {
    #[default]
    Forbidden,
    Allowed,
}

/// Outer MTU budget and the fragmentation stance applied against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtuPolicy {
    pub outer_mtu_bytes: u32,
    pub fragmentation: Fragmentation,
}

impl MtuPolicy {
    pub fn new(outer_mtu_bytes: u32) -> Result<Self, EncapError> {
        if outer_mtu_bytes < MIN_OUTER_MTU_BYTES {
            return Err(EncapError::MtuTooSmall(outer_mtu_bytes));
        }
        Ok(Self {
            outer_mtu_bytes,
            fragmentation: Fragmentation::Forbidden,
        })
    }

    /// True when `packet` may traverse a link governed by this policy whole.
    pub fn admits(&self, packet: &Packet) -> bool {
        packet.total_bytes() <= self.outer_mtu_bytes || self.fragmentation == Fragmentation::Allowed
    }
}

impl Default for MtuPolicy {
    fn default() -> Self {
        Self {
            outer_mtu_bytes: 1500,
            fragmentation: Fragmentation::Forbidden,
        }
    }
}

/// Bytes left for the inner payload once every layer in `layers` is paid for.
pub fn effective_mtu(policy: &MtuPolicy, layers: &[Layer]) -> Result<u32, EncapError> {
    if policy.outer_mtu_bytes < MIN_OUTER_MTU_BYTES {
        return Err(EncapError::MtuTooSmall(policy.outer_mtu_bytes));
    }
    let overhead_bytes: u32 = layers.iter().map(|l| l.overhead_bytes).sum();
    if overhead_bytes >= policy.outer_mtu_bytes {
        return Err(EncapError::OverheadExceedsMtu {
            outer_mtu_bytes: policy.outer_mtu_bytes,
            overhead_bytes,
        });
    }
    Ok(policy.outer_mtu_bytes - overhead_bytes)
}

/// Fraction of on-the-wire bytes that are inner payload: `inner / (inner + overheads)`.
pub fn payload_efficiency(layers: &[Layer], inner_payload_bytes: u32) -> f64 {
    let overhead_bytes: u32 = layers.iter().map(|l| l.overhead_bytes).sum();
    f64::from(inner_payload_bytes) / f64::from(inner_payload_bytes + overhead_bytes)
}
