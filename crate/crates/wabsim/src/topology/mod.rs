//! Network topology and control-plane state machine.
//!
//! A WAB node is one chassis carrying two logical halves: a WAB-MT that
//! attaches to a donor gNB like a regular subscriber, and a WAB-gNB that
//! serves end UEs. The donor's backhaul core anchors two PDU sessions for the
//! MT (one carrying N2 signalling, one carrying N3 user traffic) and every
//! interface of the onboard gNB towards the UE-serving core rides inside
//! those sessions. The topology is a star by construction: an MT may only
//! select infrastructure donors, never another WAB node's gNB, so chains
//! deeper than one wireless hop cannot form.

mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use validate::{ValidationReport, Violation, ViolationKind};

/// Identifier of a logical network function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Identifier of a WAB chassis (the vehicle- or room-mounted unit).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChassisId(pub String);

impl ChassisId {
    pub fn new(id: impl Into<String>) -> Self {
        ChassisId(id.into())
    }
}

impl fmt::Display for ChassisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ChassisId {
    fn from(s: &str) -> Self {
        ChassisId(s.to_string())
    }
}

/// Identifier of a PDU session (backhaul or end-UE).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SessionId(pub u64);

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sentinel session id for Xn links that run directly between wired gNBs.
pub const XN_DIRECT: SessionId = SessionId(0);

/// Function a node performs in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeRole {
    /// Donor gNB on the wired infrastructure side.
    BhGnb,
    /// Core network serving backhaul subscribers (the MTs).
    Bh5gc,
    /// Core network serving end UEs, reached through the backhaul.
    ServingCore,
    /// gNB half of a WAB chassis, serving end UEs.
    WabGnb,
    /// Mobile-termination half of a WAB chassis, a subscriber of the donor.
    WabMt,
    /// End user equipment.
    EndUe,
}

/// Lifecycle of a WAB chassis through integration and outages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WabNodeState {
    Off,
    MtRegistering,
    MtRegistered,
    BhSessionsEstablishing,
    BhSessionsActive,
    GnbRegistering,
    Operational,
    /// Backhaul lost below the outage floor; sessions are retained for
    /// reconnection and the chassis serves no traffic.
    Degraded,
}

impl WabNodeState {
    /// Whether the integration/outage state machine permits `from -> to`.
    pub fn can_transition(from: WabNodeState, to: WabNodeState) -> bool {
        use WabNodeState::*;
        matches!(
            (from, to),
            (Off, MtRegistering)
                | (MtRegistering, MtRegistered)
                | (MtRegistered, BhSessionsEstablishing)
                | (BhSessionsEstablishing, BhSessionsActive)
                | (BhSessionsActive, GnbRegistering)
                | (GnbRegistering, Operational)
                | (Operational, Degraded)
                | (Degraded, Operational)
        )
    }
}

/// Interface a backhaul PDU session carries for the onboard gNB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CarriedInterface {
    /// Control plane towards the serving core.
    N2,
    /// User plane towards the serving core.
    N3,
}

/// Milestones of the WAB integration sequence, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationPhase {
    MtRegistration,
    N2SessionEstablishment,
    N3SessionEstablishment,
    GnbRegistration,
}

/// QoS requested for a PDU session: 5QI-like priority plus optional GBR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QosProfile {
    /// Lower is more important.
    pub priority: u8,
    pub guaranteed_rate_bps: Option<u64>,
}

impl QosProfile {
    /// Profile for control-plane (N2) backhaul sessions.
    pub fn signalling() -> Self {
        QosProfile {
            priority: 1,
            guaranteed_rate_bps: None,
        }
    }

    /// Profile for user-plane (N3) backhaul sessions.
    pub fn data() -> Self {
        QosProfile {
            priority: 9,
            guaranteed_rate_bps: None,
        }
    }
}

/// Lifecycle of a PDU session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionState {
    Requested,
    Active,
    Released,
}

/// PDU session between a WAB-MT and the backhaul core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BhPduSession {
    pub session_id: SessionId,
    pub owner_mt: NodeId,
    /// Backhaul core anchoring the session (follows the donor on handover).
    pub anchor_core: NodeId,
    pub carried: CarriedInterface,
    pub qos: QosProfile,
    pub state: SessionState,
}

/// PDU session between an end UE and the serving core, tunneled over backhaul.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UePduSession {
    pub session_id: SessionId,
    pub ue: NodeId,
    pub serving_gnb: NodeId,
    /// Data radio bearer id, unique per serving gNB.
    pub drb_id: u8,
    /// N3 tunnel endpoint id, unique network-wide.
    pub n3_tunnel_id: u32,
    /// Backhaul N3 session this session rides in.
    pub carried_by: SessionId,
    pub state: SessionState,
}

/// Xn link between two gNBs, possibly tunneled through a backhaul session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XnLink {
    pub a: NodeId,
    pub b: NodeId,
    /// Backhaul N3 session carrying the link, or [`XN_DIRECT`] when wired.
    pub tunneled_via: SessionId,
}

/// One network function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub role: NodeRole,
    /// Chassis this node is half of (WAB-MT and WAB-gNB only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chassis: Option<ChassisId>,
    /// Planar position in meters, when physically placed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 2]>,
}

impl Node {
    pub fn bh_gnb(id: impl Into<NodeId>, position: [f64; 2]) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::BhGnb,
            chassis: None,
            position: Some(position),
        }
    }

    pub fn bh_5gc(id: impl Into<NodeId>) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::Bh5gc,
            chassis: None,
            position: None,
        }
    }

    pub fn serving_core(id: impl Into<NodeId>) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::ServingCore,
            chassis: None,
            position: None,
        }
    }

    pub fn wab_mt(
        id: impl Into<NodeId>,
        chassis: impl Into<ChassisId>,
        position: [f64; 2],
    ) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::WabMt,
            chassis: Some(chassis.into()),
            position: Some(position),
        }
    }

    pub fn wab_gnb(id: impl Into<NodeId>, chassis: impl Into<ChassisId>) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::WabGnb,
            chassis: Some(chassis.into()),
            position: None,
        }
    }

    pub fn end_ue(id: impl Into<NodeId>, position: [f64; 2]) -> Self {
        Node {
            id: id.into(),
            role: NodeRole::EndUe,
            chassis: None,
            position: Some(position),
        }
    }
}

/// The two halves of a WAB node plus its lifecycle state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WabChassis {
    pub id: ChassisId,
    pub mt: Option<NodeId>,
    pub gnb: Option<NodeId>,
    pub state: WabNodeState,
}

impl WabChassis {
    /// Both halves present.
    pub fn is_complete(&self) -> bool {
        self.mt.is_some() && self.gnb.is_some()
    }
}

/// Knobs governing control-plane behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkConfig {
    /// Permit several active backhaul sessions carrying the same interface
    /// for one MT (redundancy experiments). Off by default.
    pub allow_duplicate_interfaces: bool,
}

/// Result of a WAB-MT handover attempt. Rejection is a value, not an error:
/// the network answers mobility requests, it does not fault on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandoverOutcome {
    Completed,
    Rejected(HandoverReject),
}

/// Why a handover request was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandoverReject {
    /// Target is a WAB-gNB; onboarding to it would chain two wireless hops.
    ForbiddenTargetKind,
    /// Target exists but cannot act as a donor (not a gNB).
    TargetNotDonor,
    /// The named MT does not exist or is not a WAB-MT.
    NotAWabMt,
    /// The MT has no donor yet (registration never completed).
    MtNotRegistered,
    /// Target donor has no backhaul core attached.
    TargetCoreUnreachable,
    /// Target node id does not exist.
    UnknownTarget,
}

/// Control-plane happenings, appended in causal order.
///
/// The log is observability only: it is skipped on serialization so that
/// rejected operations leave the serialized network byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TopologyEvent {
    StateChanged {
        chassis: ChassisId,
        from: WabNodeState,
        to: WabNodeState,
    },
    IntegrationPhase {
        chassis: ChassisId,
        phase: IntegrationPhase,
    },
    SessionEstablished {
        session: SessionId,
        owner_mt: NodeId,
        carried: CarriedInterface,
    },
    SessionReleased {
        session: SessionId,
    },
    UeSessionReleased {
        session: SessionId,
        ue: NodeId,
    },
    UeAttached {
        ue: NodeId,
        gnb: NodeId,
        session: SessionId,
    },
    HandoverCompleted {
        mt: NodeId,
        from: NodeId,
        to: NodeId,
    },
    HandoverRejected {
        mt: NodeId,
        target: NodeId,
        reason: HandoverReject,
    },
    XnEstablished {
        a: NodeId,
        b: NodeId,
        tunneled_via: SessionId,
    },
    BackhaulDegraded {
        chassis: ChassisId,
    },
    BackhaulRecovered {
        chassis: ChassisId,
    },
}

/// Control-plane failures.
#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown chassis {0}")]
    UnknownChassis(ChassisId),
    #[error("unknown session {0}")]
    UnknownSession(SessionId),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node {node} has role {found:?}, expected {expected}")]
    WrongRole {
        node: NodeId,
        expected: &'static str,
        found: NodeRole,
    },
    #[error("node {0} requires a chassis")]
    MissingChassis(NodeId),
    #[error("node {0} must not declare a chassis")]
    UnexpectedChassis(NodeId),
    #[error("chassis {0} already has a node in that role")]
    ChassisConflict(ChassisId),
    #[error("chassis {0} is missing its MT or gNB half")]
    IncompleteChassis(ChassisId),
    #[error("no reachable core behind {0}")]
    CoreUnreachable(NodeId),
    #[error("node {0} has not completed registration")]
    NotRegistered(NodeId),
    #[error("{mt} already holds an active {carried:?} backhaul session")]
    DuplicateInterface {
        mt: NodeId,
        carried: CarriedInterface,
    },
    #[error("node {0} is not operational")]
    NodeNotOperational(NodeId),
    #[error("no active N3 backhaul session behind {0}")]
    NoN3Session(NodeId),
    #[error("gNB {0} has exhausted DRB identifiers")]
    DrbExhausted(NodeId),
    #[error("chassis {chassis}: state cannot move from {from:?} to {to:?}")]
    InvalidTransition {
        chassis: ChassisId,
        from: WabNodeState,
        to: WabNodeState,
    },
}

type Result<T> = std::result::Result<T, TopologyError>;

/// Complete control-plane state of one simulated network.
///
/// All collections are ordered maps so iteration — and therefore behavior and
/// serialization — is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    config: NetworkConfig,
    nodes: std::collections::BTreeMap<NodeId, Node>,
    chassis: std::collections::BTreeMap<ChassisId, WabChassis>,
    /// Serving donor per WAB-MT.
    donors: std::collections::BTreeMap<NodeId, NodeId>,
    /// Backhaul core behind each donor gNB.
    core_links: std::collections::BTreeMap<NodeId, NodeId>,
    bh_sessions: std::collections::BTreeMap<SessionId, BhPduSession>,
    ue_sessions: std::collections::BTreeMap<SessionId, UePduSession>,
    xn_links: Vec<XnLink>,
    next_session: u64,
    next_tunnel: u32,
    next_drb: std::collections::BTreeMap<NodeId, u8>,
    #[serde(skip)]
    events: Vec<TopologyEvent>,
}

impl Default for NetworkState {
    fn default() -> Self {
        NetworkState::new(NetworkConfig::default())
    }
}

impl NetworkState {
    pub fn new(config: NetworkConfig) -> Self {
        NetworkState {
            config,
            nodes: Default::default(),
            chassis: Default::default(),
            donors: Default::default(),
            core_links: Default::default(),
            bh_sessions: Default::default(),
            ue_sessions: Default::default(),
            xn_links: Vec::new(),
            // Session ids start at 1; 0 is the wired-Xn sentinel.
            next_session: 1,
            next_tunnel: 1,
            next_drb: Default::default(),
            events: Vec::new(),
        }
    }

    // ---- introspection ----

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn chassis(&self, id: &ChassisId) -> Option<&WabChassis> {
        self.chassis.get(id)
    }

    pub fn chassis_iter(&self) -> impl Iterator<Item = &WabChassis> {
        self.chassis.values()
    }

    /// Current donor gNB of a WAB-MT, if registered.
    pub fn donor_of(&self, mt: &NodeId) -> Option<&NodeId> {
        self.donors.get(mt)
    }

    /// Backhaul core behind a donor gNB.
    pub fn core_behind(&self, gnb: &NodeId) -> Option<&NodeId> {
        self.core_links.get(gnb)
    }

    pub fn bh_session(&self, id: SessionId) -> Option<&BhPduSession> {
        self.bh_sessions.get(&id)
    }

    pub fn bh_sessions(&self) -> impl Iterator<Item = &BhPduSession> {
        self.bh_sessions.values()
    }

    pub fn ue_session(&self, id: SessionId) -> Option<&UePduSession> {
        self.ue_sessions.get(&id)
    }

    pub fn ue_sessions(&self) -> impl Iterator<Item = &UePduSession> {
        self.ue_sessions.values()
    }

    pub fn xn_links(&self) -> &[XnLink] {
        &self.xn_links
    }

    /// Active backhaul session of `mt` carrying `iface`, if any.
    pub fn active_bh_session(&self, mt: &NodeId, iface: CarriedInterface) -> Option<&BhPduSession> {
        self.bh_sessions
            .values()
            .find(|s| s.owner_mt == *mt && s.carried == iface && s.state == SessionState::Active)
    }

    /// Event log accumulated so far (not part of serialized state).
    pub fn events(&self) -> &[TopologyEvent] {
        &self.events
    }

    /// Takes and clears the event log.
    pub fn drain_events(&mut self) -> Vec<TopologyEvent> {
        std::mem::take(&mut self.events)
    }

    /// Canonical JSON rendering of the full control-plane state. Equal states
    /// render byte-identically; the event log is excluded.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("network state serializes")
    }

    // ---- construction ----

    /// Adds a node, enforcing role/chassis pairing rules.
    pub fn add_node(&mut self, node: Node) -> Result<()> {
        if self.nodes.contains_key(&node.id) {
            return Err(TopologyError::DuplicateNode(node.id));
        }
        match node.role {
            NodeRole::WabMt | NodeRole::WabGnb => {
                let chassis_id = node
                    .chassis
                    .clone()
                    .ok_or_else(|| TopologyError::MissingChassis(node.id.clone()))?;
                let entry = self
                    .chassis
                    .entry(chassis_id.clone())
                    .or_insert_with(|| WabChassis {
                        id: chassis_id.clone(),
                        mt: None,
                        gnb: None,
                        state: WabNodeState::Off,
                    });
                let slot = match node.role {
                    NodeRole::WabMt => &mut entry.mt,
                    _ => &mut entry.gnb,
                };
                if slot.is_some() {
                    return Err(TopologyError::ChassisConflict(chassis_id));
                }
                *slot = Some(node.id.clone());
            }
            _ => {
                if node.chassis.is_some() {
                    return Err(TopologyError::UnexpectedChassis(node.id));
                }
            }
        }
        self.nodes.insert(node.id.clone(), node);
        Ok(())
    }

    /// Wires a donor gNB to its backhaul core.
    pub fn set_core_link(&mut self, gnb: &NodeId, core: &NodeId) -> Result<()> {
        self.require_role(gnb, NodeRole::BhGnb, "a donor gNB")?;
        self.require_role(core, NodeRole::Bh5gc, "a backhaul core")?;
        self.core_links.insert(gnb.clone(), core.clone());
        Ok(())
    }

    /// Declares a donor edge without any role or depth checking. Exists so
    /// externally declared (possibly corrupt) topologies can be loaded and
    /// then judged by [`NetworkState::validate_topology`].
    pub fn set_donor_unchecked(&mut self, mt: &NodeId, donor: &NodeId) {
        self.donors.insert(mt.clone(), donor.clone());
    }

    // ---- integration ----

    /// Runs the full integration sequence of a chassis against a donor:
    /// MT registration, N2 and N3 backhaul session establishment, then gNB
    /// registration. Returns the resulting state. Integrating an already
    /// Operational chassis is a no-op; integrating a Degraded chassis
    /// reconnects it (sessions were retained).
    pub fn integrate_wab_node(
        &mut self,
        chassis_id: &ChassisId,
        donor: &NodeId,
    ) -> Result<WabNodeState> {
        let ch = self
            .chassis
            .get(chassis_id)
            .ok_or_else(|| TopologyError::UnknownChassis(chassis_id.clone()))?
            .clone();
        let (mt, gnb) = match (ch.mt.clone(), ch.gnb.clone()) {
            (Some(mt), Some(gnb)) => (mt, gnb),
            _ => return Err(TopologyError::IncompleteChassis(chassis_id.clone())),
        };
        self.require_role(donor, NodeRole::BhGnb, "a donor gNB")?;
        if !self.core_links.contains_key(donor) {
            return Err(TopologyError::CoreUnreachable(donor.clone()));
        }
        if !self.nodes.values().any(|n| n.role == NodeRole::ServingCore) {
            return Err(TopologyError::CoreUnreachable(gnb.clone()));
        }

        let mut state = ch.state;
        if state == WabNodeState::Operational {
            return Ok(state);
        }
        if state == WabNodeState::Degraded {
            self.set_state(chassis_id, WabNodeState::Operational)?;
            self.events.push(TopologyEvent::BackhaulRecovered {
                chassis: chassis_id.clone(),
            });
            return Ok(WabNodeState::Operational);
        }

        if state == WabNodeState::Off {
            self.set_state(chassis_id, WabNodeState::MtRegistering)?;
            self.donors.insert(mt.clone(), donor.clone());
            self.set_state(chassis_id, WabNodeState::MtRegistered)?;
            self.events.push(TopologyEvent::IntegrationPhase {
                chassis: chassis_id.clone(),
                phase: IntegrationPhase::MtRegistration,
            });
            state = WabNodeState::MtRegistered;
        }
        if state == WabNodeState::MtRegistered {
            self.set_state(chassis_id, WabNodeState::BhSessionsEstablishing)?;
            self.establish_bh_pdu_session(&mt, CarriedInterface::N2, QosProfile::signalling())?;
            self.events.push(TopologyEvent::IntegrationPhase {
                chassis: chassis_id.clone(),
                phase: IntegrationPhase::N2SessionEstablishment,
            });
            self.establish_bh_pdu_session(&mt, CarriedInterface::N3, QosProfile::data())?;
            self.events.push(TopologyEvent::IntegrationPhase {
                chassis: chassis_id.clone(),
                phase: IntegrationPhase::N3SessionEstablishment,
            });
            self.set_state(chassis_id, WabNodeState::BhSessionsActive)?;
            state = WabNodeState::BhSessionsActive;
        }
        if state == WabNodeState::BhSessionsActive {
            self.set_state(chassis_id, WabNodeState::GnbRegistering)?;
            self.set_state(chassis_id, WabNodeState::Operational)?;
            self.events.push(TopologyEvent::IntegrationPhase {
                chassis: chassis_id.clone(),
                phase: IntegrationPhase::GnbRegistration,
            });
            state = WabNodeState::Operational;
        }
        Ok(state)
    }

    /// Establishes one backhaul PDU session for a registered WAB-MT.
    pub fn establish_bh_pdu_session(
        &mut self,
        mt: &NodeId,
        carried: CarriedInterface,
        qos: QosProfile,
    ) -> Result<BhPduSession> {
        self.require_role(mt, NodeRole::WabMt, "a WAB-MT")?;
        let chassis_id = self.chassis_of(mt)?;
        let state = self.chassis[&chassis_id].state;
        if matches!(state, WabNodeState::Off | WabNodeState::MtRegistering) {
            return Err(TopologyError::NotRegistered(mt.clone()));
        }
        let donor = self
            .donors
            .get(mt)
            .ok_or_else(|| TopologyError::NotRegistered(mt.clone()))?;
        let anchor = self
            .core_links
            .get(donor)
            .ok_or_else(|| TopologyError::CoreUnreachable(donor.clone()))?
            .clone();
        if !self.config.allow_duplicate_interfaces
            && self.active_bh_session(mt, carried).is_some()
        {
            return Err(TopologyError::DuplicateInterface {
                mt: mt.clone(),
                carried,
            });
        }
        let session_id = self.alloc_session();
        let session = BhPduSession {
            session_id,
            owner_mt: mt.clone(),
            anchor_core: anchor,
            carried,
            qos,
            state: SessionState::Active,
        };
        self.bh_sessions.insert(session_id, session.clone());
        self.events.push(TopologyEvent::SessionEstablished {
            session: session_id,
            owner_mt: mt.clone(),
            carried,
        });
        Ok(session)
    }

    /// Attaches an end UE to an Operational WAB-gNB, allocating a DRB and an
    /// N3 tunnel riding the chassis' backhaul N3 session.
    pub fn attach_ue(&mut self, ue: &NodeId, wab_gnb: &NodeId) -> Result<UePduSession> {
        self.require_role(ue, NodeRole::EndUe, "an end UE")?;
        self.require_role(wab_gnb, NodeRole::WabGnb, "a WAB-gNB")?;
        let chassis_id = self.chassis_of(wab_gnb)?;
        let ch = &self.chassis[&chassis_id];
        if ch.state != WabNodeState::Operational {
            return Err(TopologyError::NodeNotOperational(wab_gnb.clone()));
        }
        let mt = ch
            .mt
            .clone()
            .ok_or_else(|| TopologyError::IncompleteChassis(chassis_id.clone()))?;
        let n3 = self
            .active_bh_session(&mt, CarriedInterface::N3)
            .ok_or_else(|| TopologyError::NoN3Session(wab_gnb.clone()))?
            .session_id;

        let drb = self.next_drb.entry(wab_gnb.clone()).or_insert(0);
        let drb_id = drb
            .checked_add(1)
            .ok_or_else(|| TopologyError::DrbExhausted(wab_gnb.clone()))?;
        *drb = drb_id;
        let n3_tunnel_id = self.next_tunnel;
        self.next_tunnel += 1;
        let session_id = self.alloc_session();
        let session = UePduSession {
            session_id,
            ue: ue.clone(),
            serving_gnb: wab_gnb.clone(),
            drb_id,
            n3_tunnel_id,
            carried_by: n3,
            state: SessionState::Active,
        };
        self.ue_sessions.insert(session_id, session.clone());
        self.events.push(TopologyEvent::UeAttached {
            ue: ue.clone(),
            gnb: wab_gnb.clone(),
            session: session_id,
        });
        Ok(session)
    }

    /// Moves a WAB-MT to a new donor. All checks run before any mutation, so
    /// a rejected handover leaves the network state untouched. On completion
    /// the MT's backhaul sessions keep their identifiers and re-anchor to the
    /// new donor's core; end-UE sessions riding them remain valid.
    pub fn handover_wab_mt(&mut self, mt: &NodeId, target: &NodeId) -> HandoverOutcome {
        use HandoverReject::*;
        let reject = |net: &mut Self, reason: HandoverReject| {
            net.events.push(TopologyEvent::HandoverRejected {
                mt: mt.clone(),
                target: target.clone(),
                reason,
            });
            HandoverOutcome::Rejected(reason)
        };

        match self.nodes.get(mt) {
            Some(n) if n.role == NodeRole::WabMt => {}
            _ => return reject(self, NotAWabMt),
        }
        let target_role = match self.nodes.get(target) {
            Some(n) => n.role,
            None => return reject(self, UnknownTarget),
        };
        match target_role {
            NodeRole::WabGnb => return reject(self, ForbiddenTargetKind),
            NodeRole::BhGnb => {}
            _ => return reject(self, TargetNotDonor),
        }
        let Some(current) = self.donors.get(mt).cloned() else {
            return reject(self, MtNotRegistered);
        };
        if current == *target {
            // Self-handover: nothing to do and nothing changes.
            return HandoverOutcome::Completed;
        }
        let Some(anchor) = self.core_links.get(target).cloned() else {
            return reject(self, TargetCoreUnreachable);
        };

        self.donors.insert(mt.clone(), target.clone());
        for session in self.bh_sessions.values_mut() {
            if session.owner_mt == *mt && session.state == SessionState::Active {
                session.anchor_core = anchor.clone();
            }
        }
        self.events.push(TopologyEvent::HandoverCompleted {
            mt: mt.clone(),
            from: current,
            to: target.clone(),
        });
        HandoverOutcome::Completed
    }

    /// Establishes an Xn link between two gNBs. A link touching a WAB-gNB is
    /// tunneled through that side's backhaul N3 session (the initiator's when
    /// both are WAB); wired gNB pairs connect directly ([`XN_DIRECT`]).
    pub fn setup_xn(&mut self, a: &NodeId, b: &NodeId) -> Result<XnLink> {
        let role_a = self.require_gnb(a)?;
        let role_b = self.require_gnb(b)?;
        if a == b {
            return Err(TopologyError::WrongRole {
                node: a.clone(),
                expected: "a distinct peer gNB",
                found: role_a,
            });
        }
        for (id, role) in [(a, role_a), (b, role_b)] {
            if role == NodeRole::WabGnb {
                let chassis_id = self.chassis_of(id)?;
                if self.chassis[&chassis_id].state != WabNodeState::Operational {
                    return Err(TopologyError::NodeNotOperational(id.clone()));
                }
            }
        }
        let tunneled_via = if role_a == NodeRole::WabGnb {
            self.n3_behind_gnb(a)?
        } else if role_b == NodeRole::WabGnb {
            self.n3_behind_gnb(b)?
        } else {
            XN_DIRECT
        };
        if let Some(existing) = self
            .xn_links
            .iter()
            .find(|l| (l.a == *a && l.b == *b) || (l.a == *b && l.b == *a))
        {
            return Ok(existing.clone());
        }
        let link = XnLink {
            a: a.clone(),
            b: b.clone(),
            tunneled_via,
        };
        self.xn_links.push(link.clone());
        self.events.push(TopologyEvent::XnEstablished {
            a: a.clone(),
            b: b.clone(),
            tunneled_via,
        });
        Ok(link)
    }

    /// Releases a backhaul session and cascades release to every active
    /// end-UE session riding it. Returns how many UE sessions were released.
    /// Releasing an already-released session is a no-op.
    pub fn release_bh_pdu_session(&mut self, id: SessionId) -> Result<usize> {
        let session = self
            .bh_sessions
            .get_mut(&id)
            .ok_or(TopologyError::UnknownSession(id))?;
        if session.state == SessionState::Released {
            return Ok(0);
        }
        session.state = SessionState::Released;
        self.events.push(TopologyEvent::SessionReleased { session: id });
        let mut released = 0;
        for ue_session in self.ue_sessions.values_mut() {
            if ue_session.carried_by == id && ue_session.state == SessionState::Active {
                ue_session.state = SessionState::Released;
                self.events.push(TopologyEvent::UeSessionReleased {
                    session: ue_session.session_id,
                    ue: ue_session.ue.clone(),
                });
                released += 1;
            }
        }
        Ok(released)
    }

    /// Marks an Operational chassis Degraded (backhaul below the outage
    /// floor). Sessions are retained. Returns false if already Degraded.
    pub fn degrade_backhaul(&mut self, chassis_id: &ChassisId) -> Result<bool> {
        let state = self.chassis_state(chassis_id)?;
        match state {
            WabNodeState::Degraded => Ok(false),
            WabNodeState::Operational => {
                self.set_state(chassis_id, WabNodeState::Degraded)?;
                self.events.push(TopologyEvent::BackhaulDegraded {
                    chassis: chassis_id.clone(),
                });
                Ok(true)
            }
            other => Err(TopologyError::InvalidTransition {
                chassis: chassis_id.clone(),
                from: other,
                to: WabNodeState::Degraded,
            }),
        }
    }

    /// Reconnects a Degraded chassis. Returns false if already Operational.
    pub fn recover_backhaul(&mut self, chassis_id: &ChassisId) -> Result<bool> {
        let state = self.chassis_state(chassis_id)?;
        match state {
            WabNodeState::Operational => Ok(false),
            WabNodeState::Degraded => {
                self.set_state(chassis_id, WabNodeState::Operational)?;
                self.events.push(TopologyEvent::BackhaulRecovered {
                    chassis: chassis_id.clone(),
                });
                Ok(true)
            }
            other => Err(TopologyError::InvalidTransition {
                chassis: chassis_id.clone(),
                from: other,
                to: WabNodeState::Operational,
            }),
        }
    }

    // ---- internals ----

    fn alloc_session(&mut self) -> SessionId {
        let id = SessionId(self.next_session);
        self.next_session += 1;
        id
    }

    fn chassis_state(&self, id: &ChassisId) -> Result<WabNodeState> {
        self.chassis
            .get(id)
            .map(|c| c.state)
            .ok_or_else(|| TopologyError::UnknownChassis(id.clone()))
    }

    fn set_state(&mut self, id: &ChassisId, to: WabNodeState) -> Result<()> {
        let ch = self
            .chassis
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownChassis(id.clone()))?;
        let from = ch.state;
        if !WabNodeState::can_transition(from, to) {
            return Err(TopologyError::InvalidTransition {
                chassis: id.clone(),
                from,
                to,
            });
        }
        ch.state = to;
        self.events
            .push(TopologyEvent::StateChanged {
                chassis: id.clone(),
                from,
                to,
            });
        Ok(())
    }

    fn chassis_of(&self, node: &NodeId) -> Result<ChassisId> {
        self.nodes
            .get(node)
            .ok_or_else(|| TopologyError::UnknownNode(node.clone()))?
            .chassis
            .clone()
            .ok_or_else(|| TopologyError::MissingChassis(node.clone()))
    }

    fn require_role(&self, id: &NodeId, role: NodeRole, expected: &'static str) -> Result<&Node> {
        let node = self
            .nodes
            .get(id)
            .ok_or_else(|| TopologyError::UnknownNode(id.clone()))?;
        if node.role != role {
            return Err(TopologyError::WrongRole {
                node: id.clone(),
                expected,
                found: node.role,
            });
        }
        Ok(node)
    }

    fn require_gnb(&self, id: &NodeId) -> Result<NodeRole> {
        let node = self
            .nodes
            .get(id)
            .ok_or_else(|| TopologyError::UnknownNode(id.clone()))?;
        match node.role {
            NodeRole::BhGnb | NodeRole::WabGnb => Ok(node.role),
            found => Err(TopologyError::WrongRole {
                node: id.clone(),
                expected: "a gNB",
                found,
            }),
        }
    }

    fn n3_behind_gnb(&self, wab_gnb: &NodeId) -> Result<SessionId> {
        let chassis_id = self.chassis_of(wab_gnb)?;
        let mt = self.chassis[&chassis_id]
            .mt
            .clone()
            .ok_or_else(|| TopologyError::IncompleteChassis(chassis_id.clone()))?;
        self.active_bh_session(&mt, CarriedInterface::N3)
            .map(|s| s.session_id)
            .ok_or_else(|| TopologyError::NoN3Session(wab_gnb.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One donor, one core pair, one complete chassis, one UE.
    fn base_net() -> NetworkState {
        let mut net = NetworkState::new(NetworkConfig::default());
        net.add_node(Node::bh_gnb("donor-1", [0.0, 600.0])).unwrap();
        net.add_node(Node::bh_5gc("bh-core")).unwrap();
        net.add_node(Node::serving_core("serving-core")).unwrap();
        net.add_node(Node::wab_mt("wab-mt", "wab-1", [100.0, 200.0]))
            .unwrap();
        net.add_node(Node::wab_gnb("wab-gnb", "wab-1")).unwrap();
        net.add_node(Node::end_ue("ue-1", [100.0, 200.0])).unwrap();
        net.set_core_link(&"donor-1".into(), &"bh-core".into())
            .unwrap();
        net
    }

    fn integrated_net() -> NetworkState {
        let mut net = base_net();
        net.integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap();
        net
    }

    #[test]
    fn integration_walks_the_full_state_ladder() {
        let mut net = base_net();
        let end = net
            .integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap();
        assert_eq!(end, WabNodeState::Operational);
        assert_eq!(
            net.chassis(&"wab-1".into()).unwrap().state,
            WabNodeState::Operational
        );
        assert_eq!(net.donor_of(&"wab-mt".into()), Some(&"donor-1".into()));

        let states: Vec<(WabNodeState, WabNodeState)> = net
            .events()
            .iter()
            .filter_map(|e| match e {
                TopologyEvent::StateChanged { from, to, .. } => Some((*from, *to)),
                _ => None,
            })
            .collect();
        use WabNodeState::*;
        assert_eq!(
            states,
            vec![
                (Off, MtRegistering),
                (MtRegistering, MtRegistered),
                (MtRegistered, BhSessionsEstablishing),
                (BhSessionsEstablishing, BhSessionsActive),
                (BhSessionsActive, GnbRegistering),
                (GnbRegistering, Operational),
            ]
        );

        let phases: Vec<IntegrationPhase> = net
            .events()
            .iter()
            .filter_map(|e| match e {
                TopologyEvent::IntegrationPhase { phase, .. } => Some(*phase),
                _ => None,
            })
            .collect();
        assert_eq!(
            phases,
            vec![
                IntegrationPhase::MtRegistration,
                IntegrationPhase::N2SessionEstablishment,
                IntegrationPhase::N3SessionEstablishment,
                IntegrationPhase::GnbRegistration,
            ]
        );

        // Exactly one N2 and one N3 session, ids from 1, anchored at the core.
        let sessions: Vec<&BhPduSession> = net.bh_sessions().collect();
        assert_eq!(sessions.len(), 2);
        assert_eq!(sessions[0].session_id, SessionId(1));
        assert_eq!(sessions[0].carried, CarriedInterface::N2);
        assert_eq!(sessions[1].session_id, SessionId(2));
        assert_eq!(sessions[1].carried, CarriedInterface::N3);
        for s in sessions {
            assert_eq!(s.anchor_core, "bh-core".into());
            assert_eq!(s.state, SessionState::Active);
        }
    }

    #[test]
    fn integration_is_idempotent_once_operational() {
        let mut net = integrated_net();
        let before = net.to_canonical_json();
        net.drain_events();
        let state = net
            .integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap();
        assert_eq!(state, WabNodeState::Operational);
        assert!(net.events().is_empty());
        assert_eq!(net.to_canonical_json(), before);
    }

    #[test]
    fn integration_requires_reachable_cores() {
        let mut net = NetworkState::new(NetworkConfig::default());
        net.add_node(Node::bh_gnb("donor-1", [0.0, 0.0])).unwrap();
        net.add_node(Node::bh_5gc("bh-core")).unwrap();
        net.add_node(Node::wab_mt("wab-mt", "wab-1", [0.0, 0.0]))
            .unwrap();
        net.add_node(Node::wab_gnb("wab-gnb", "wab-1")).unwrap();
        // No core link behind the donor.
        let err = net
            .integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap_err();
        assert!(matches!(err, TopologyError::CoreUnreachable(n) if n == "donor-1".into()));
        // Core link present but no serving core anywhere.
        net.set_core_link(&"donor-1".into(), &"bh-core".into())
            .unwrap();
        let err = net
            .integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap_err();
        assert!(matches!(err, TopologyError::CoreUnreachable(n) if n == "wab-gnb".into()));
        assert_eq!(
            net.chassis(&"wab-1".into()).unwrap().state,
            WabNodeState::Off
        );
    }

    #[test]
    fn add_node_enforces_chassis_pairing() {
        let mut net = base_net();
        let err = net
            .add_node(Node::bh_gnb("donor-1", [1.0, 1.0]))
            .unwrap_err();
        assert!(matches!(err, TopologyError::DuplicateNode(_)));

        let err = net
            .add_node(Node::wab_mt("wab-mt-2", "wab-1", [0.0, 0.0]))
            .unwrap_err();
        assert!(matches!(err, TopologyError::ChassisConflict(_)));

        let mut bare = Node::wab_mt("wab-mt-3", "wab-2", [0.0, 0.0]);
        bare.chassis = None;
        let err = net.add_node(bare).unwrap_err();
        assert!(matches!(err, TopologyError::MissingChassis(_)));

        let mut odd = Node::end_ue("ue-9", [0.0, 0.0]);
        odd.chassis = Some("wab-1".into());
        let err = net.add_node(odd).unwrap_err();
        assert!(matches!(err, TopologyError::UnexpectedChassis(_)));
    }

    #[test]
    fn session_establishment_guards() {
        let mut net = base_net();
        let err = net
            .establish_bh_pdu_session(
                &"wab-mt".into(),
                CarriedInterface::N3,
                QosProfile::data(),
            )
            .unwrap_err();
        assert!(matches!(err, TopologyError::NotRegistered(_)));

        net.integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap();
        let err = net
            .establish_bh_pdu_session(
                &"wab-mt".into(),
                CarriedInterface::N3,
                QosProfile::data(),
            )
            .unwrap_err();
        assert!(matches!(err, TopologyError::DuplicateInterface { .. }));

        let err = net
            .establish_bh_pdu_session(&"ue-1".into(), CarriedInterface::N3, QosProfile::data())
            .unwrap_err();
        assert!(matches!(err, TopologyError::WrongRole { .. }));
    }

    #[test]
    fn duplicate_interfaces_allowed_when_configured() {
        let mut net = NetworkState::new(NetworkConfig {
            allow_duplicate_interfaces: true,
        });
        net.add_node(Node::bh_gnb("donor-1", [0.0, 0.0])).unwrap();
        net.add_node(Node::bh_5gc("bh-core")).unwrap();
        net.add_node(Node::serving_core("serving-core")).unwrap();
        net.add_node(Node::wab_mt("wab-mt", "wab-1", [0.0, 0.0]))
            .unwrap();
        net.add_node(Node::wab_gnb("wab-gnb", "wab-1")).unwrap();
        net.set_core_link(&"donor-1".into(), &"bh-core".into())
            .unwrap();
        net.integrate_wab_node(&"wab-1".into(), &"donor-1".into())
            .unwrap();
        let extra = net
            .establish_bh_pdu_session(&"wab-mt".into(), CarriedInterface::N3, QosProfile::data())
            .unwrap();
        assert_eq!(extra.session_id, SessionId(3));
    }

    #[test]
    fn ue_attach_allocates_unique_bearers_and_tunnels() {
        let mut net = integrated_net();
        let s1 = net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap();
        assert_eq!(s1.drb_id, 1);
        assert_eq!(s1.n3_tunnel_id, 1);
        assert_eq!(s1.carried_by, SessionId(2)); // the N3 backhaul session
        assert_eq!(s1.state, SessionState::Active);

        net.add_node(Node::end_ue("ue-2", [1.0, 1.0])).unwrap();
        let s2 = net.attach_ue(&"ue-2".into(), &"wab-gnb".into()).unwrap();
        assert_eq!(s2.drb_id, 2);
        assert_eq!(s2.n3_tunnel_id, 2);
        assert_ne!(s1.session_id, s2.session_id);
    }

    #[test]
    fn ue_attach_requires_operational_gnb_and_right_roles() {
        let mut net = base_net();
        let err = net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap_err();
        assert!(matches!(err, TopologyError::NodeNotOperational(_)));

        let mut net = integrated_net();
        let err = net.attach_ue(&"ue-1".into(), &"donor-1".into()).unwrap_err();
        assert!(matches!(err, TopologyError::WrongRole { .. }));
        let err = net.attach_ue(&"wab-mt".into(), &"wab-gnb".into()).unwrap_err();
        assert!(matches!(err, TopologyError::WrongRole { .. }));
        let err = net.attach_ue(&"ue-1".into(), &"ghost".into()).unwrap_err();
        assert!(matches!(err, TopologyError::UnknownNode(_)));
    }

    #[test]
    fn handover_moves_donor_and_preserves_sessions() {
        let mut net = integrated_net();
        net.add_node(Node::bh_gnb("donor-2", [500.0, 600.0])).unwrap();
        net.add_node(Node::bh_5gc("bh-core-2")).unwrap();
        net.set_core_link(&"donor-2".into(), &"bh-core-2".into())
            .unwrap();
        let ue_session = net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap();

        let ids_before: Vec<SessionId> = net.bh_sessions().map(|s| s.session_id).collect();
        let outcome = net.handover_wab_mt(&"wab-mt".into(), &"donor-2".into());
        assert_eq!(outcome, HandoverOutcome::Completed);
        assert_eq!(net.donor_of(&"wab-mt".into()), Some(&"donor-2".into()));
        let ids_after: Vec<SessionId> = net.bh_sessions().map(|s| s.session_id).collect();
        assert_eq!(ids_before, ids_after);
        for s in net.bh_sessions() {
            assert_eq!(s.anchor_core, "bh-core-2".into());
            assert_eq!(s.state, SessionState::Active);
        }
        let carried = net.ue_session(ue_session.session_id).unwrap();
        assert_eq!(carried.state, SessionState::Active);
        assert_eq!(carried.carried_by, ue_session.carried_by);
    }

    #[test]
    fn handover_to_wab_gnb_is_rejected_without_state_change() {
        let mut net = integrated_net();
        net.add_node(Node::wab_mt("wab-mt-2", "wab-2", [10.0, 10.0]))
            .unwrap();
        net.add_node(Node::wab_gnb("wab-gnb-2", "wab-2")).unwrap();
        net.integrate_wab_node(&"wab-2".into(), &"donor-1".into())
            .unwrap();
        let before = net.to_canonical_json();
        let outcome = net.handover_wab_mt(&"wab-mt-2".into(), &"wab-gnb".into());
        assert_eq!(
            outcome,
            HandoverOutcome::Rejected(HandoverReject::ForbiddenTargetKind)
        );
        assert_eq!(net.to_canonical_json(), before);
        assert!(matches!(
            net.events().last(),
            Some(TopologyEvent::HandoverRejected {
                reason: HandoverReject::ForbiddenTargetKind,
                ..
            })
        ));
    }

    #[test]
    fn handover_rejection_taxonomy() {
        let mut net = integrated_net();
        let mt: NodeId = "wab-mt".into();

        let outcome = net.handover_wab_mt(&mt, &"ghost".into());
        assert_eq!(
            outcome,
            HandoverOutcome::Rejected(HandoverReject::UnknownTarget)
        );
        let outcome = net.handover_wab_mt(&mt, &"ue-1".into());
        assert_eq!(
            outcome,
            HandoverOutcome::Rejected(HandoverReject::TargetNotDonor)
        );
        let outcome = net.handover_wab_mt(&"ue-1".into(), &"donor-1".into());
        assert_eq!(outcome, HandoverOutcome::Rejected(HandoverReject::NotAWabMt));

        // Donor without a core behind it.
        net.add_node(Node::bh_gnb("donor-bare", [1.0, 1.0])).unwrap();
        let outcome = net.handover_wab_mt(&mt, &"donor-bare".into());
        assert_eq!(
            outcome,
            HandoverOutcome::Rejected(HandoverReject::TargetCoreUnreachable)
        );

        // Unregistered MT.
        net.add_node(Node::wab_mt("wab-mt-2", "wab-2", [0.0, 0.0]))
            .unwrap();
        net.add_node(Node::wab_gnb("wab-gnb-2", "wab-2")).unwrap();
        let outcome = net.handover_wab_mt(&"wab-mt-2".into(), &"donor-1".into());
        assert_eq!(
            outcome,
            HandoverOutcome::Rejected(HandoverReject::MtNotRegistered)
        );

        // Self-handover completes without touching anything.
        net.drain_events();
        let before = net.to_canonical_json();
        let outcome = net.handover_wab_mt(&mt, &"donor-1".into());
        assert_eq!(outcome, HandoverOutcome::Completed);
        assert_eq!(net.to_canonical_json(), before);
        assert!(net.events().is_empty());
    }

    #[test]
    fn release_cascades_to_carried_ue_sessions() {
        let mut net = integrated_net();
        net.add_node(Node::end_ue("ue-2", [1.0, 1.0])).unwrap();
        let s1 = net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap();
        let s2 = net.attach_ue(&"ue-2".into(), &"wab-gnb".into()).unwrap();
        let n3 = s1.carried_by;

        let released = net.release_bh_pdu_session(n3).unwrap();
        assert_eq!(released, 2);
        assert_eq!(net.bh_session(n3).unwrap().state, SessionState::Released);
        for id in [s1.session_id, s2.session_id] {
            assert_eq!(net.ue_session(id).unwrap().state, SessionState::Released);
        }
        // Idempotent.
        assert_eq!(net.release_bh_pdu_session(n3).unwrap(), 0);
        // Unknown session is an error.
        let err = net.release_bh_pdu_session(SessionId(999)).unwrap_err();
        assert!(matches!(err, TopologyError::UnknownSession(_)));
        // The N2 session is untouched.
        assert!(net
            .active_bh_session(&"wab-mt".into(), CarriedInterface::N2)
            .is_some());
    }

    #[test]
    fn xn_links_tunnel_through_the_wab_side() {
        let mut net = integrated_net();
        net.add_node(Node::bh_gnb("donor-2", [500.0, 0.0])).unwrap();
        net.add_node(Node::bh_5gc("bh-core-2")).unwrap();
        net.set_core_link(&"donor-2".into(), &"bh-core-2".into())
            .unwrap();

        let wired = net.setup_xn(&"donor-1".into(), &"donor-2".into()).unwrap();
        assert_eq!(wired.tunneled_via, XN_DIRECT);

        let tunneled = net.setup_xn(&"wab-gnb".into(), &"donor-1".into()).unwrap();
        assert_eq!(tunneled.tunneled_via, SessionId(2));

        // Same unordered pair returns the existing link.
        let again = net.setup_xn(&"donor-1".into(), &"wab-gnb".into()).unwrap();
        assert_eq!(again, tunneled);
        assert_eq!(net.xn_links().len(), 2);

        let err = net.setup_xn(&"donor-1".into(), &"donor-1".into()).unwrap_err();
        assert!(matches!(err, TopologyError::WrongRole { .. }));
        let err = net.setup_xn(&"ue-1".into(), &"donor-1".into()).unwrap_err();
        assert!(matches!(err, TopologyError::WrongRole { .. }));
    }

    #[test]
    fn xn_requires_operational_wab_side() {
        let mut net = base_net();
        let err = net.setup_xn(&"wab-gnb".into(), &"donor-1".into()).unwrap_err();
        assert!(matches!(err, TopologyError::NodeNotOperational(_)));
    }

    #[test]
    fn degrade_and_recover_cycle_preserves_sessions() {
        let mut net = integrated_net();
        let json_before = net.to_canonical_json();
        assert!(net.degrade_backhaul(&"wab-1".into()).unwrap());
        assert_eq!(
            net.chassis(&"wab-1".into()).unwrap().state,
            WabNodeState::Degraded
        );
        assert!(!net.degrade_backhaul(&"wab-1".into()).unwrap());
        for s in net.bh_sessions() {
            assert_eq!(s.state, SessionState::Active);
        }
        assert!(net.recover_backhaul(&"wab-1".into()).unwrap());
        assert!(!net.recover_backhaul(&"wab-1".into()).unwrap());
        assert_eq!(net.to_canonical_json(), json_before);

        let mut fresh = base_net();
        let err = fresh.degrade_backhaul(&"wab-1".into()).unwrap_err();
        assert!(matches!(err, TopologyError::InvalidTransition { .. }));
    }

    #[test]
    fn state_machine_permits_exactly_the_documented_edges() {
        use WabNodeState::*;
        let all = [
            Off,
            MtRegistering,
            MtRegistered,
            BhSessionsEstablishing,
            BhSessionsActive,
            GnbRegistering,
            Operational,
            Degraded,
        ];
        let allowed = [
            (Off, MtRegistering),
            (MtRegistering, MtRegistered),
            (MtRegistered, BhSessionsEstablishing),
            (BhSessionsEstablishing, BhSessionsActive),
            (BhSessionsActive, GnbRegistering),
            (GnbRegistering, Operational),
            (Operational, Degraded),
            (Degraded, Operational),
        ];
        for from in all {
            for to in all {
                let expected = allowed.contains(&(from, to));
                assert_eq!(
                    WabNodeState::can_transition(from, to),
                    expected,
                    "{from:?} -> {to:?}"
                );
            }
        }
    }

    #[test]
    fn canonical_json_round_trips() {
        let mut net = integrated_net();
        net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap();
        let json = net.to_canonical_json();
        let back: NetworkState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_canonical_json(), json);
        assert_eq!(back, {
            let mut n = net.clone();
            n.drain_events();
            n
        });
    }
}
