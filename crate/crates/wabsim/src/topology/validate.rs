//! Structural validation of declared or evolved topologies.
//!
//! Validation never mutates and never panics: it walks every reference in the
//! network and reports violations of the star invariants — donor depth, donor
//! multiplicity and session reference integrity — so that corrupt externally
//! declared topologies can be loaded, judged and printed.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NetworkState, NodeRole, SessionState, WabNodeState, XN_DIRECT};

/// Class of invariant a topology breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// A WAB-MT relays through another WAB node: more than one wireless hop.
    DepthExceeded,
    /// A WAB-MT has no usable donor (or its donor edge is malformed).
    DonorCount,
    /// A session or link references something that does not exist or is dead.
    DanglingSession,
}

/// One broken invariant, anchored at the id it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}: {}", self.kind, self.subject, self.detail)
    }
}

/// Outcome of [`NetworkState::validate_topology`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, subject: impl fmt::Display, detail: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            subject: subject.to_string(),
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("topology valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl NetworkState {
    /// Checks the star invariants over the whole network and reports every
    /// violation found. Valid topologies yield an empty report.
    pub fn validate_topology(&self) -> ValidationReport {
        use ViolationKind::*;
        let mut report = ValidationReport::default();

        for (mt, donor) in &self.donors {
            match self.nodes.get(mt) {
                Some(n) if n.role == NodeRole::WabMt => {}
                Some(n) => report.push(
                    DonorCount,
                    mt,
                    format!("donor edge starts at a {:?}, not a WAB-MT", n.role),
                ),
                None => report.push(DonorCount, mt, "donor edge starts at an unknown node"),
            }
            match self.nodes.get(donor) {
                Some(n) => match n.role {
                    NodeRole::BhGnb => {}
                    NodeRole::WabGnb => report.push(
                        DepthExceeded,
                        mt,
                        format!(
                            "donor {donor} is a WAB-gNB; relaying through another \
                             WAB node would exceed the single wireless hop"
                        ),
                    ),
                    other => report.push(
                        DonorCount,
                        mt,
                        format!("donor {donor} is a {other:?} and cannot serve as donor"),
                    ),
                },
                None => report.push(DonorCount, mt, format!("donor {donor} does not exist")),
            }
        }

        for ch in self.chassis.values() {
            let Some(mt) = &ch.mt else { continue };
            let registered = !matches!(
                ch.state,
                WabNodeState::Off | WabNodeState::MtRegistering
            );
            if registered && !self.donors.contains_key(mt) {
                report.push(
                    DonorCount,
                    mt,
                    format!("chassis {} is {:?} but its MT has no donor", ch.id, ch.state),
                );
            }
        }

        for s in self.bh_sessions.values() {
            if s.state != SessionState::Active {
                continue;
            }
            match self.nodes.get(&s.owner_mt) {
                Some(n) if n.role == NodeRole::WabMt => {}
                _ => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("backhaul session owner {} is not a live WAB-MT", s.owner_mt),
                ),
            }
            match self.nodes.get(&s.anchor_core) {
                Some(n) if n.role == NodeRole::Bh5gc => {}
                _ => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("backhaul session anchor {} is not a backhaul core", s.anchor_core),
                ),
            }
        }

        for s in self.ue_sessions.values() {
            if s.state != SessionState::Active {
                continue;
            }
            match self.nodes.get(&s.ue) {
                Some(n) if n.role == NodeRole::EndUe => {}
                _ => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("UE session endpoint {} is not a live UE", s.ue),
                ),
            }
            match self.nodes.get(&s.serving_gnb) {
                Some(n) if n.role == NodeRole::WabGnb => {}
                _ => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("UE session gNB {} is not a live WAB-gNB", s.serving_gnb),
                ),
            }
            match self.bh_sessions.get(&s.carried_by) {
                Some(bh) if bh.state == SessionState::Active => {}
                Some(_) => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("carried by backhaul session {}, which is released", s.carried_by),
                ),
                None => report.push(
                    DanglingSession,
                    s.session_id,
                    format!("carried by nonexistent backhaul session {}", s.carried_by),
                ),
            }
        }

        for link in &self.xn_links {
            for end in [&link.a, &link.b] {
                if !self.nodes.contains_key(end) {
                    report.push(
                        DanglingSession,
                        format!("xn {}<->{}", link.a, link.b),
                        format!("endpoint {end} does not exist"),
                    );
                }
            }
            if link.tunneled_via != XN_DIRECT {
                match self.bh_sessions.get(&link.tunneled_via) {
                    Some(bh) if bh.state == SessionState::Active => {}
                    _ => report.push(
                        DanglingSession,
                        format!("xn {}<->{}", link.a, link.b),
                        format!("tunnel session {} is not active", link.tunneled_via),
                    ),
                }
            }
        }

        report
    }
}
