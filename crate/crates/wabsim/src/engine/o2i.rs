//! Static outdoor-to-indoor placement study.
//!
//! Instead of replaying a mobility timeline, the study evaluates two systems
//! at numbered indoor positions: a direct millimeter-wave carrier from the
//! outdoor donor, and the relayed deployment (millimeter-wave backhaul to a
//! window-mounted WAB node plus a sub-6 GHz indoor cell). Spectral efficiency
//! is normalized per system — each over the channel it actually delivers on.

use serde::{Deserialize, Serialize};

use crate::radio::{self, bler, link_adapt, Direction, EnvParams, RadioConfig};
use crate::topology::{NetworkConfig, NetworkState, NodeRole};

use super::{
    classify_path, compose_e2e, EngineError, InvalidScenario, O2iStudy, Point, Scenario,
    SimEvent, SimEventKind,
};

/// One system at one study position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeCell {
    /// 1-based study position of the terminal.
    pub position: usize,
    /// Downlink RSRP of the link reaching the terminal, dBm (the direct link
    /// for the single-carrier system, the indoor access link for the relay).
    pub rsrp_dbm: f64,
    pub dl_bps: f64,
    pub ul_bps: f64,
    pub dl_se_bps_hz: f64,
    pub ul_se_bps_hz: f64,
}

/// Coverage-extension entry: the relay moved, the terminal fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionCell {
    /// 1-based position the WAB node was evaluated at.
    pub wab_position: usize,
    pub dl_bps: f64,
    pub ul_bps: f64,
    pub dl_se_bps_hz: f64,
    pub ul_se_bps_hz: f64,
}

/// Full study result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct O2iReport {
    pub scenario_name: String,
    /// Channel bandwidth normalizing the direct system's SE, Hz.
    pub fr2_bandwidth_hz: f64,
    /// Channel bandwidth normalizing the relayed system's SE, Hz.
    pub fr1_bandwidth_hz: f64,
    /// Baseline WAB placement (1-based).
    pub wab_position: usize,
    /// Terminal position of the extension comparison (1-based).
    pub extension_ue_position: usize,
    pub fr2_only: Vec<SeCell>,
    pub wab: Vec<SeCell>,
    /// First entry is the baseline placement, then the alternatives.
    pub extension: Vec<ExtensionCell>,
}

/// Study result plus the control-plane side effects of building it.
#[derive(Debug, Serialize)]
pub struct O2iOutput {
    pub report: O2iReport,
    pub events: Vec<SimEvent>,
    pub network: NetworkState,
}

/// Evaluated link: downlink RSRP plus both directions' throughput.
struct LinkEval {
    rsrp_dl_dbm: f64,
    dl_bps: f64,
    ul_bps: f64,
}

/// Runs the placement study of a scenario carrying an `o2i` section.
pub fn run_o2i(scenario: &Scenario) -> Result<O2iOutput, EngineError> {
    let mut problems = scenario.validate();
    if scenario.o2i.is_none() {
        problems.push(InvalidScenario::BadO2i("scenario has no o2i section".into()));
    }
    if !problems.is_empty() {
        return Err(EngineError::InvalidScenario(problems));
    }
    let study = scenario.o2i.as_ref().expect("checked above");
    log::info!(
        "running placement study {} over {} positions",
        scenario.name,
        study.positions.len()
    );

    // The control plane is exercised for real: the study's numbers only mean
    // something if the relay can actually integrate and serve a session.
    let mut net = NetworkState::new(NetworkConfig::default());
    for node in &scenario.nodes {
        net.add_node(node.clone())?;
    }
    for [gnb, core] in &scenario.core_links {
        net.set_core_link(gnb, core)?;
    }
    let find = |role: NodeRole| {
        scenario
            .nodes
            .iter()
            .find(|n| n.role == role)
            .expect("validated scenario has the role")
    };
    let mt = find(NodeRole::WabMt);
    let wab_gnb = find(NodeRole::WabGnb).id.clone();
    let ue = find(NodeRole::EndUe).id.clone();
    let chassis = mt.chassis.clone().expect("MT carries its chassis id");
    let mt_pos = mt.position.expect("static study MT has a position");
    let donor = match scenario.donors.get(&mt.id) {
        Some(d) => d.clone(),
        None => scenario
            .core_links
            .iter()
            .map(|[gnb, _]| gnb.clone())
            .min_by(|a, b| {
                let pa = node_pos(scenario, a);
                let pb = node_pos(scenario, b);
                dist(pa, mt_pos)
                    .partial_cmp(&dist(pb, mt_pos))
                    .expect("finite distances")
            })
            .expect("validated scenario has a wired donor"),
    };
    net.integrate_wab_node(&chassis, &donor)?;
    net.attach_ue(&ue, &wab_gnb)?;
    let events = net
        .drain_events()
        .into_iter()
        .map(|detail| SimEvent {
            t_s: 0.0,
            kind: SimEventKind::Topology { detail },
        })
        .collect();

    let donor_pos = node_pos(scenario, &donor);
    let goodput = scenario.encapsulation.goodput_factor()?;

    let fr2_only: Vec<SeCell> = (1..=study.positions.len())
        .map(|i| direct_cell(scenario, study, donor_pos, i))
        .collect();
    let wab: Vec<SeCell> = (1..=study.positions.len())
        .map(|i| wab_cell(scenario, study, donor_pos, goodput, study.wab_position, i))
        .collect();
    let mut extension = Vec::with_capacity(1 + study.extension_wab_positions.len());
    for &w in std::iter::once(&study.wab_position).chain(&study.extension_wab_positions) {
        let cell = wab_cell(
            scenario,
            study,
            donor_pos,
            goodput,
            w,
            study.extension_ue_position,
        );
        extension.push(ExtensionCell {
            wab_position: w,
            dl_bps: cell.dl_bps,
            ul_bps: cell.ul_bps,
            dl_se_bps_hz: cell.dl_se_bps_hz,
            ul_se_bps_hz: cell.ul_se_bps_hz,
        });
    }

    Ok(O2iOutput {
        report: O2iReport {
            scenario_name: scenario.name.clone(),
            fr2_bandwidth_hz: scenario.radio.fr2.bandwidth_hz,
            fr1_bandwidth_hz: scenario.radio.fr1.bandwidth_hz,
            wab_position: study.wab_position,
            extension_ue_position: study.extension_ue_position,
            fr2_only,
            wab,
            extension,
        },
        events,
        network: net,
    })
}

fn dist(a: Point, b: Point) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn node_pos(sc: &Scenario, id: &crate::topology::NodeId) -> Point {
    sc.nodes
        .iter()
        .find(|n| &n.id == id)
        .and_then(|n| n.position)
        .expect("validated node has a position")
}

/// Evaluates one wireless link; below the outage floor it carries nothing.
fn eval_link(
    cfg: &RadioConfig,
    env: &EnvParams,
    scenario: &Scenario,
    a: Point,
    b: Point,
    beam_gain_db: f64,
) -> LinkEval {
    let (los, env) = classify_path(a, b, &scenario.obstructions, env);
    let pl = radio::path_loss(dist(a, b), cfg.carrier_hz, &los, &env);
    let rsrp_dl = radio::rsrp_dbm(cfg, pl, beam_gain_db, Direction::Dl);
    if rsrp_dl < scenario.outage_floor_dbm {
        return LinkEval {
            rsrp_dl_dbm: rsrp_dl,
            dl_bps: 0.0,
            ul_bps: 0.0,
        };
    }
    let throughput = |dir: Direction, rsrp: f64| {
        let sinr = radio::sinr_db(cfg, rsrp);
        let mcs = link_adapt(sinr, cfg.mcs_table(dir), cfg.target_bler);
        let b = bler(sinr, mcs, cfg.mcs_table(dir));
        radio::link_throughput_bps(cfg, mcs, b, dir)
    };
    let rsrp_ul = rsrp_dl - cfg.eirp_dl_dbm + cfg.eirp_ul_dbm;
    LinkEval {
        rsrp_dl_dbm: rsrp_dl,
        dl_bps: throughput(Direction::Dl, rsrp_dl),
        ul_bps: throughput(Direction::Ul, rsrp_ul),
    }
}

/// Direct millimeter-wave carrier from the donor to the study position. The
/// terminal's beam set is assumed aligned (static install, peak gain).
fn direct_cell(sc: &Scenario, study: &O2iStudy, donor_pos: Point, idx: usize) -> SeCell {
    let p = study.positions[idx - 1];
    let link = eval_link(
        &sc.radio.fr2,
        &sc.env.fr2,
        sc,
        donor_pos,
        p,
        sc.beams.peak_gain_db(),
    );
    SeCell {
        position: idx,
        rsrp_dbm: link.rsrp_dl_dbm,
        dl_bps: link.dl_bps,
        ul_bps: link.ul_bps,
        dl_se_bps_hz: link.dl_bps / sc.radio.fr2.bandwidth_hz,
        ul_se_bps_hz: link.ul_bps / sc.radio.fr2.bandwidth_hz,
    }
}

/// Relayed system: backhaul to the WAB at `wab_idx`, indoor cell to `ue_idx`.
fn wab_cell(
    sc: &Scenario,
    study: &O2iStudy,
    donor_pos: Point,
    goodput: f64,
    wab_idx: usize,
    ue_idx: usize,
) -> SeCell {
    let wab_pos = study.positions[wab_idx - 1];
    let ue_pos = study.positions[ue_idx - 1];
    let backhaul = eval_link(
        &sc.radio.fr2,
        &sc.env.fr2,
        sc,
        donor_pos,
        wab_pos,
        sc.beams.peak_gain_db(),
    );
    let access = eval_link(&sc.radio.fr1, &sc.env.fr1, sc, wab_pos, ue_pos, 0.0);
    let dl = compose_e2e(access.dl_bps, backhaul.dl_bps, goodput);
    let ul = compose_e2e(access.ul_bps, backhaul.ul_bps, goodput);
    SeCell {
        position: ue_idx,
        rsrp_dbm: access.rsrp_dl_dbm,
        dl_bps: dl,
        ul_bps: ul,
        dl_se_bps_hz: dl / sc.radio.fr1.bandwidth_hz,
        ul_se_bps_hz: ul / sc.radio.fr1.bandwidth_hz,
    }
}
