//! Scenario schema and the discrete-event simulation engine.
//!
//! A [`Scenario`] is a declarative JSON document: nodes and wiring, mobility
//! traces, obstruction polygons, radio and environment parameters, and the
//! traffic/handover/encapsulation knobs. [`run`] executes it tick by tick on
//! a deterministic event queue and emits one [`MeasurementRecord`] per tick;
//! [`run_o2i`] evaluates a static outdoor-to-indoor placement study instead.

pub mod geometry;
pub mod mobility;
mod o2i;
mod run;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encap::{self, EncapError, Fragmentation, Layer, MtuPolicy};
use crate::radio::{BeamSet, EnvParams, RadioConfig, RadioError};
use crate::topology::{Node, NodeId, NodeRole, TopologyError, TopologyEvent};

pub use crate::radio::LosState;
pub use o2i::{run_o2i, ExtensionCell, O2iOutput, O2iReport, SeCell};
pub use run::{run, RunOutput};

/// Planar position in meters.
pub type Point = [f64; 2];

/// Axis-aligned map bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub min: Point,
    pub max: Point,
}

impl Bounds {
    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.min[0] && p[0] <= self.max[0] && p[1] >= self.min[1] && p[1] <= self.max[1]
    }
}

/// What an obstruction polygon does to rays crossing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObstructionKind {
    /// Opaque blocker (building, dense foliage): link turns non-line-of-sight.
    Building,
    /// Transparent facade: link stays line-of-sight-like but pays the glass loss.
    GlassFacade,
    /// Interior wall: each crossing adds the per-wall loss.
    InteriorWall,
}

/// One obstruction polygon on the map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    /// Vertices in order (closed implicitly).
    pub polygon: Vec<Point>,
    /// Per-crossing loss override in dB; defaults to the environment's value
    /// for the kind. Lets light foliage coexist with concrete blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penetration_db: Option<f64>,
}

/// Timed waypoint: `[t_s, x_m, y_m]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint(pub f64, pub f64, pub f64);

impl Waypoint {
    pub fn t_s(&self) -> f64 {
        self.0
    }

    pub fn pos(&self) -> Point {
        [self.1, self.2]
    }
}

/// Piecewise-linear mobility trace of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trace {
    pub node: NodeId,
    /// Waypoints in strictly increasing time order.
    pub waypoints: Vec<Waypoint>,
    /// Antenna mount azimuth relative to the direction of travel, degrees.
    #[serde(default)]
    pub mount_bearing_deg: f64,
    /// Speed limit the trace must respect, m/s (default 30 km/h).
    #[serde(default = "default_max_speed")]
    pub max_speed_mps: f64,
}

/// A3-style handover parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandoverParams {
    /// Candidate must beat serving by this margin, dB.
    #[serde(default = "default_hysteresis")]
    pub hysteresis_db: f64,
    /// Margin must hold this long before triggering, seconds.
    #[serde(default = "default_ttt")]
    pub time_to_trigger_s: f64,
}

impl Default for HandoverParams {
    fn default() -> Self {
        HandoverParams {
            hysteresis_db: default_hysteresis(),
            time_to_trigger_s: default_ttt(),
        }
    }
}

/// Offered traffic model. Only saturated full-buffer traffic is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficModel {
    #[serde(default = "default_true")]
    pub full_buffer: bool,
}

impl Default for TrafficModel {
    fn default() -> Self {
        TrafficModel { full_buffer: true }
    }
}

/// Tunnel stack and MTU policy applied to backhauled user traffic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncapsulationModel {
    #[serde(default = "default_outer_mtu")]
    pub outer_mtu_bytes: u32,
    /// Inner IP packet size end hosts emit.
    #[serde(default = "default_inner_payload")]
    pub inner_payload_bytes: u32,
    /// Per-layer header overhead of the three-layer reference stack.
    #[serde(default = "default_layer_overhead")]
    pub layer_overhead_bytes: u32,
    #[serde(default)]
    pub fragmentation: Fragmentation,
}

impl Default for EncapsulationModel {
    fn default() -> Self {
        EncapsulationModel {
            outer_mtu_bytes: default_outer_mtu(),
            inner_payload_bytes: default_inner_payload(),
            layer_overhead_bytes: default_layer_overhead(),
            fragmentation: Fragmentation::default(),
        }
    }
}

impl EncapsulationModel {
    /// The three-layer reference stack at this model's overhead.
    pub fn stack(&self, bh_tunnel_id: u32, ue_tunnel_id: u32) -> Vec<Layer> {
        encap::reference_stack(bh_tunnel_id, ue_tunnel_id)
            .into_iter()
            .map(|l| Layer::with_overhead(l.kind, self.layer_overhead_bytes))
            .collect()
    }

    /// Fraction of backhaul airtime that is inner payload, given this stack.
    /// Errors if the encapsulated packet cannot traverse the outer MTU.
    pub fn goodput_factor(&self) -> Result<f64, EncapError> {
        let mut policy = MtuPolicy::new(self.outer_mtu_bytes)?;
        policy.fragmentation = self.fragmentation;
        let stack = self.stack(0, 0);
        let overhead: u32 = stack.iter().map(|l| l.overhead_bytes).sum();
        let total = self.inner_payload_bytes + overhead;
        if total <= self.outer_mtu_bytes {
            return Ok(encap::payload_efficiency(&stack, self.inner_payload_bytes));
        }
        match self.fragmentation {
            Fragmentation::Forbidden => Err(EncapError::FragmentationForbidden {
                outer_mtu_bytes: self.outer_mtu_bytes,
                total_bytes: total,
            }),
            Fragmentation::Allowed => {
                // Each fragment repeats the outer framing; efficiency is the
                // inner payload over the full frames sent.
                let frames = total.div_ceil(policy.outer_mtu_bytes);
                Ok(f64::from(self.inner_payload_bytes)
                    / f64::from(frames * policy.outer_mtu_bytes))
            }
        }
    }
}

/// Per-band radio configuration of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    #[serde(default = "RadioConfig::fr1_default")]
    pub fr1: RadioConfig,
    #[serde(default = "RadioConfig::fr2_default")]
    pub fr2: RadioConfig,
}

impl Default for RadioSection {
    fn default() -> Self {
        RadioSection {
            fr1: RadioConfig::fr1_default(),
            fr2: RadioConfig::fr2_default(),
        }
    }
}

/// Per-band propagation environment of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    #[serde(default = "EnvParams::fr1_default")]
    pub fr1: EnvParams,
    #[serde(default = "EnvParams::fr2_default")]
    pub fr2: EnvParams,
}

impl Default for EnvSection {
    fn default() -> Self {
        EnvSection {
            fr1: EnvParams::fr1_default(),
            fr2: EnvParams::fr2_default(),
        }
    }
}

/// Declared time windows of known propagation regimes, used for reporting
/// and calibration (none are required to run).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Segments {
    /// Window where the backhaul is line of sight, `[start_s, end_s]`.
    pub los: Option<[f64; 2]>,
    /// Window covering the LOS-to-NLOS collapse.
    pub transition: Option<[f64; 2]>,
    /// Window deep inside the shadowed region.
    pub deep_nlos: Option<[f64; 2]>,
}

/// Static placement study: systems are evaluated at numbered positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct O2iStudy {
    /// Numbered measurement positions (1-based in all indices below).
    pub positions: Vec<Point>,
    /// Where the WAB node sits in the baseline deployment.
    #[serde(default = "default_one")]
    pub wab_position: usize,
    /// UE position used for the coverage-extension comparison.
    pub extension_ue_position: usize,
    /// Alternative WAB placements evaluated against the baseline.
    #[serde(default)]
    pub extension_wab_positions: Vec<usize>,
}

/// A complete, self-contained simulation input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub duration_s: f64,
    #[serde(default = "default_tick_s")]
    pub tick_s: f64,
    #[serde(default)]
    pub seed: u64,
    pub nodes: Vec<Node>,
    /// Donor gNB to backhaul core wiring: `[gnb, core]` pairs.
    #[serde(default)]
    pub core_links: Vec<[NodeId; 2]>,
    /// Declared donor edges (initial attachment, or fixtures for validation).
    #[serde(default)]
    pub donors: BTreeMap<NodeId, NodeId>,
    #[serde(default)]
    pub mobility: Vec<Trace>,
    #[serde(default)]
    pub obstructions: Vec<Obstruction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub env: EnvSection,
    #[serde(default = "BeamSet::cpe_default")]
    pub beams: BeamSet,
    #[serde(default)]
    pub traffic: TrafficModel,
    #[serde(default)]
    pub handover: HandoverParams,
    /// Backhaul RSRP below which the WAB declares outage, dBm.
    #[serde(default = "default_outage_floor")]
    pub outage_floor_dbm: f64,
    /// Standard deviation of per-beam measurement noise, dB (0 disables).
    #[serde(default)]
    pub beam_jitter_sigma_db: f64,
    #[serde(default)]
    pub encapsulation: EncapsulationModel,
    #[serde(default)]
    pub segments: Segments,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o2i: Option<O2iStudy>,
}

fn default_tick_s() -> f64 {
    0.1
}

fn default_outage_floor() -> f64 {
    -110.0
}

fn default_max_speed() -> f64 {
    30.0 / 3.6
}

fn default_hysteresis() -> f64 {
    3.0
}

fn default_ttt() -> f64 {
    0.1
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

fn default_outer_mtu() -> u32 {
    1500
}

fn default_inner_payload() -> u32 {
    1384
}

fn default_layer_overhead() -> u32 {
    36
}

/// A reason a scenario cannot run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvalidScenario {
    #[error("duration_s must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("tick_s must be positive and no longer than the run, got {0}")]
    BadTick(f64),
    #[error("duplicate node id {0}")]
    DuplicateNodeId(NodeId),
    #[error("{context} references unknown node {node}")]
    UnknownNodeRef { context: &'static str, node: NodeId },
    #[error("role census: {0}")]
    RoleCensus(String),
    #[error("core link {0}: {1}")]
    BadCoreLink(String, String),
    #[error("node {0} needs a position or a mobility trace")]
    MissingPlacement(NodeId),
    #[error("trace of {node} is empty")]
    EmptyTrace { node: NodeId },
    #[error("trace of {node} is not strictly time-ordered at waypoint {index}")]
    TraceNotTimeOrdered { node: NodeId, index: usize },
    #[error(
        "trace of {node} segment {segment} moves at {speed_mps:.2} m/s, over the {limit_mps:.2} m/s limit"
    )]
    TraceTooFast {
        node: NodeId,
        segment: usize,
        speed_mps: f64,
        limit_mps: f64,
    },
    #[error("obstruction {index} has fewer than 3 vertices")]
    BadPolygon { index: usize },
    #[error("node {node} sits outside the declared bounds")]
    OutOfBoundsDecl { node: NodeId },
    #[error("radio.{band}: {detail}")]
    RadioInvalid { band: &'static str, detail: String },
    #[error("beams: {0}")]
    BeamsInvalid(String),
    #[error("handover: {0}")]
    BadHandover(String),
    #[error("beam_jitter_sigma_db must be non-negative, got {0}")]
    BadJitter(f64),
    #[error("encapsulation: {0}")]
    EncapDoesNotFit(String),
    #[error("segments.{which} is not an ordered window inside the run")]
    BadSegment { which: &'static str },
    #[error("traffic: only full_buffer traffic is modeled")]
    NotFullBuffer,
    #[error("o2i: {0}")]
    BadO2i(String),
}

fn join_errors(errors: &[InvalidScenario]) -> String {
    errors
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Failures while building or running a scenario.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scenario: {}", join_errors(.0))]
    InvalidScenario(Vec<InvalidScenario>),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error(transparent)]
    Encap(#[from] EncapError),
    #[error("node {node} left the map bounds at ({x:.1}, {y:.1})")]
    OutOfBounds { node: NodeId, x: f64, y: f64 },
}

/// Radio-layer view of one link at one tick (downlink-referenced).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkState {
    pub rsrp_dbm: f64,
    pub sinr_db: f64,
    pub mcs: u8,
    pub bler: f64,
    pub serving_ssb: u32,
    pub serving_csirs: u32,
    pub los: LosState,
}

/// One tick of simulator output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub t_s: f64,
    /// WAB chassis position.
    pub x_m: f64,
    pub y_m: f64,
    /// Backhaul link (donor to WAB-MT).
    pub fr2: LinkState,
    /// Access link (WAB-gNB to UE).
    pub fr1: LinkState,
    /// End-to-end goodput delivered to the UE, bits per second.
    pub e2e_dl_bps: f64,
    pub e2e_ul_bps: f64,
    /// Serving SSB beam changed since the previous tick.
    pub ssb_switch: bool,
    /// Serving CSI-RS refinement changed since the previous tick.
    pub csirs_switch: bool,
}

/// Timestamped simulation event for the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimEvent {
    pub t_s: f64,
    #[serde(flatten)]
    pub kind: SimEventKind,
}

/// What happened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimEventKind {
    /// Control-plane event surfaced from the topology layer.
    Topology { detail: TopologyEvent },
    /// The A3 condition held long enough and a handover was requested.
    HandoverTriggered {
        mt: NodeId,
        from: NodeId,
        to: NodeId,
        margin_db: f64,
    },
}

impl Scenario {
    /// Parses a scenario from JSON, rejecting unknown fields.
    pub fn from_json_str(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    /// Pretty JSON rendering (the shipped scenario file format).
    pub fn to_json_pretty(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    /// Checks everything needed to run and returns all problems found.
    pub fn validate(&self) -> Vec<InvalidScenario> {
        use InvalidScenario::*;
        let mut errs = Vec::new();

        if self.duration_s <= 0.0 || self.duration_s.is_nan() {
            errs.push(NonPositiveDuration(self.duration_s));
        }
        if self.tick_s <= 0.0 || self.tick_s.is_nan() || self.tick_s > self.duration_s.max(0.0) {
            errs.push(BadTick(self.tick_s));
        }

        let mut ids = std::collections::BTreeSet::new();
        for node in &self.nodes {
            if !ids.insert(node.id.clone()) {
                errs.push(DuplicateNodeId(node.id.clone()));
            }
        }
        let node_by_id: BTreeMap<&NodeId, &Node> =
            self.nodes.iter().map(|n| (&n.id, n)).collect();
        let traced: std::collections::BTreeSet<&NodeId> =
            self.mobility.iter().map(|t| &t.node).collect();

        // Role census: one UE, one complete chassis, reachable cores.
        let count = |role: NodeRole| self.nodes.iter().filter(|n| n.role == role).count();
        if count(NodeRole::EndUe) != 1 {
            errs.push(RoleCensus(format!(
                "expected exactly one end UE, found {}",
                count(NodeRole::EndUe)
            )));
        }
        if count(NodeRole::Bh5gc) == 0 {
            errs.push(RoleCensus("no backhaul core declared".into()));
        }
        if count(NodeRole::ServingCore) == 0 {
            errs.push(RoleCensus("no serving core declared".into()));
        }
        let chassis_ids: std::collections::BTreeSet<_> = self
            .nodes
            .iter()
            .filter_map(|n| n.chassis.clone())
            .collect();
        if chassis_ids.len() != 1
            || count(NodeRole::WabMt) != 1
            || count(NodeRole::WabGnb) != 1
        {
            errs.push(RoleCensus(format!(
                "expected exactly one WAB chassis (one MT and one gNB), found {} MT, {} gNB on {} chassis",
                count(NodeRole::WabMt),
                count(NodeRole::WabGnb),
                chassis_ids.len()
            )));
        }

        let mut donor_with_core = false;
        for (i, [gnb, core]) in self.core_links.iter().enumerate() {
            let label = format!("{i} ({gnb} -> {core})");
            match node_by_id.get(gnb) {
                None => errs.push(BadCoreLink(label.clone(), "gNB side does not exist".into())),
                Some(n) if n.role != NodeRole::BhGnb => errs.push(BadCoreLink(
                    label.clone(),
                    format!("gNB side is a {:?}", n.role),
                )),
                _ => {}
            }
            match node_by_id.get(core) {
                None => errs.push(BadCoreLink(label, "core side does not exist".into())),
                Some(n) if n.role != NodeRole::Bh5gc => {
                    errs.push(BadCoreLink(label, format!("core side is a {:?}", n.role)))
                }
                _ => donor_with_core = true,
            }
        }
        if !donor_with_core {
            errs.push(RoleCensus(
                "no donor gNB is wired to a backhaul core".into(),
            ));
        }

        for (mt, donor) in &self.donors {
            if !node_by_id.contains_key(mt) {
                errs.push(UnknownNodeRef {
                    context: "donors",
                    node: mt.clone(),
                });
            }
            if !node_by_id.contains_key(donor) {
                errs.push(UnknownNodeRef {
                    context: "donors",
                    node: donor.clone(),
                });
            }
        }

        // Placement: anchors need positions; movables need position or trace.
        for node in &self.nodes {
            let needs_placement = matches!(
                node.role,
                NodeRole::BhGnb | NodeRole::WabMt | NodeRole::EndUe
            );
            if needs_placement && node.position.is_none() && !traced.contains(&node.id) {
                errs.push(MissingPlacement(node.id.clone()));
            }
        }

        for trace in &self.mobility {
            if !node_by_id.contains_key(&trace.node) {
                errs.push(UnknownNodeRef {
                    context: "mobility",
                    node: trace.node.clone(),
                });
            }
            errs.extend(trace.check());
        }

        for (index, obstruction) in self.obstructions.iter().enumerate() {
            if obstruction.polygon.len() < 3 {
                errs.push(BadPolygon { index });
            }
        }

        if let Some(bounds) = &self.bounds {
            for node in &self.nodes {
                if let Some(p) = node.position {
                    if !bounds.contains(p) {
                        errs.push(OutOfBoundsDecl {
                            node: node.id.clone(),
                        });
                    }
                }
            }
            for trace in &self.mobility {
                if trace.waypoints.iter().any(|w| !bounds.contains(w.pos())) {
                    errs.push(OutOfBoundsDecl {
                        node: trace.node.clone(),
                    });
                }
            }
        }

        for (band, cfg) in [("fr1", &self.radio.fr1), ("fr2", &self.radio.fr2)] {
            if let Err(e) = cfg.validate() {
                errs.push(RadioInvalid {
                    band,
                    detail: e.to_string(),
                });
            }
        }
        if let Err(e) = self.beams.validate() {
            errs.push(BeamsInvalid(e.to_string()));
        }

        if self.handover.hysteresis_db < 0.0 {
            errs.push(BadHandover("hysteresis_db must be non-negative".into()));
        }
        if self.handover.time_to_trigger_s < 0.0 {
            errs.push(BadHandover("time_to_trigger_s must be non-negative".into()));
        }
        if self.beam_jitter_sigma_db < 0.0 {
            errs.push(BadJitter(self.beam_jitter_sigma_db));
        }
        if !self.traffic.full_buffer {
            errs.push(NotFullBuffer);
        }
        if let Err(e) = self.encapsulation.goodput_factor() {
            errs.push(EncapDoesNotFit(e.to_string()));
        }

        for (which, window) in [
            ("los", self.segments.los),
            ("transition", self.segments.transition),
            ("deep_nlos", self.segments.deep_nlos),
        ] {
            if let Some([a, b]) = window {
                if !(a >= 0.0 && a <= b && b <= self.duration_s) {
                    errs.push(BadSegment { which });
                }
            }
        }

        if let Some(o2i) = &self.o2i {
            if o2i.positions.is_empty() {
                errs.push(BadO2i("no positions declared".into()));
            }
            let in_range = |idx: usize| idx >= 1 && idx <= o2i.positions.len();
            for (label, idx) in [
                ("wab_position", o2i.wab_position),
                ("extension_ue_position", o2i.extension_ue_position),
            ] {
                if !in_range(idx) {
                    errs.push(BadO2i(format!("{label} {idx} is out of range")));
                }
            }
            for idx in &o2i.extension_wab_positions {
                if !in_range(*idx) {
                    errs.push(BadO2i(format!(
                        "extension_wab_positions entry {idx} is out of range"
                    )));
                }
            }
        }

        errs
    }
}

/// End-to-end goodput through a relay: the slower of the access link and the
/// encapsulation-taxed backhaul link.
pub fn compose_e2e(access_bps: f64, backhaul_bps: f64, goodput_factor: f64) -> f64 {
    access_bps.min(backhaul_bps * goodput_factor)
}

/// LOS classification of a path plus the environment to price it with (the
/// obstruction loss becomes the mean of the crossed polygons' losses, so
/// mixed foliage/concrete maps price each ray by what it actually crossed).
pub(crate) fn classify_path(
    a: Point,
    b: Point,
    obstructions: &[Obstruction],
    env: &EnvParams,
) -> (LosState, EnvParams) {
    let crossings = geometry::survey(a, b, obstructions);
    if !crossings.building_losses.is_empty() {
        let n = crossings.building_losses.len();
        let mean = crossings
            .building_losses
            .iter()
            .map(|o| o.unwrap_or(env.obstruction_db))
            .sum::<f64>()
            / n as f64;
        let mut priced = *env;
        priced.obstruction_db = mean;
        (
            LosState::Nlos {
                obstructions: n as u32,
            },
            priced,
        )
    } else if crossings.glass > 0 || crossings.walls > 0 {
        (
            LosState::Indoor {
                glass: crossings.glass > 0,
                interior_walls: crossings.walls,
            },
            *env,
        )
    } else {
        (LosState::Los, *env)
    }
}
