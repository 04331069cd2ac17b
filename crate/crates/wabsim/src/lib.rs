//! `wabsim` — discrete-event simulator and protocol library for wireless
//! access-and-backhaul (WAB) networks.
//!
//! A WAB node is a small-cell gNB co-packaged with a mobile-terminal modem
//! (WAB-MT): the MT attaches to a donor macro cell over an FR2 backhaul link
//! like an ordinary UE, control and user plane of the on-board gNB are
//! tunnelled through its backhaul PDU sessions, and end UEs attach to the
//! on-board gNB over an FR1 access link. The library models this single-hop
//! relay architecture end to end:
//!
//! - [`topology`] — node roles, WAB integration state machine, backhaul/UE
//!   PDU sessions, handover rules and structural validation.
//! - [`encap`] — tunnel layer stacks, effective-MTU budgets and payload
//!   efficiency of the GTP-U / VPN / GTP-U sandwich.
//! - [`radio`] — log-distance path loss, link budgets, SSB/CSI-RS beam
//!   selection, MCS tables, BLER waterfall and TDD throughput.
//! - [`engine`] — scenario files, planar obstruction maps, mobility traces,
//!   the fixed-tick event loop and the outdoor-to-indoor placement study.
//! - [`scenarios`] — builders for the two shipped reference scenarios
//!   (`vehicular`, `o2i`).
//! - [`cli`] — the `validate` / `run` / `calibrate-check` commands used by
//!   the `wabsim` binary, including CSV/JSON export and calibration targets.
//!
//! The primary interface is the library plus the runnable programs under
//! `examples/` (one per capability, e.g. `cargo run --example vehicular_run`).
//! The thin `wabsim` binary wraps [`cli`] for shell use.

pub mod cli;
pub mod encap;
pub mod engine;
pub mod radio;
pub mod scenarios;
pub mod topology;

pub use encap::{effective_mtu, payload_efficiency, Layer, LayerKind, MtuPolicy, Packet};
pub use engine::{LinkState, LosState, MeasurementRecord, RunOutput, Scenario};
pub use radio::{Band, Direction, EnvParams, RadioConfig};
pub use topology::{NetworkState, NodeId, NodeRole, WabNodeState};
