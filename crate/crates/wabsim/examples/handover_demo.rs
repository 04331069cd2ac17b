//! Drive a WAB node between two donors and watch the A3 handover fire.
//!
//! The vehicle starts under donor-west, drives east until donor-east is
//! better by the hysteresis margin for the full time-to-trigger, and the
//! simulator re-anchors the mobile termination — re-routing its backhaul
//! sessions — without touching the onboard gNB or its UE.
//!
//! Run with: cargo run --example handover_demo

use std::collections::BTreeMap;

use wabsim::engine::{
    run, Bounds, EncapsulationModel, EnvSection, HandoverParams, RadioSection, Scenario, Segments,
    SimEventKind, Trace, TrafficModel, Waypoint,
};
use wabsim::radio::BeamSet;
use wabsim::topology::Node;

fn scenario() -> Scenario {
    Scenario {
        name: "two-donor-driveby".into(),
        description: "Straight drive from one donor's cell into the next.".into(),
        duration_s: 120.0,
        tick_s: 0.1,
        seed: 3,
        nodes: vec![
            Node::bh_gnb("donor-west", [0.0, 60.0]),
            Node::bh_gnb("donor-east", [480.0, 60.0]),
            Node::bh_5gc("bh-core"),
            Node::serving_core("serving-core"),
            // Kerb-side antenna: the mount faces the donors across the road.
            Node::wab_mt("wab-mt", "wab-1", [0.0, 0.0]),
            Node::wab_gnb("wab-gnb", "wab-1"),
            Node::end_ue("ue-1", [0.0, 0.0]),
        ],
        core_links: vec![
            ["donor-west".into(), "bh-core".into()],
            ["donor-east".into(), "bh-core".into()],
        ],
        donors: BTreeMap::new(),
        mobility: vec![
            Trace {
                node: "wab-mt".into(),
                waypoints: vec![Waypoint(0.0, 0.0, 0.0), Waypoint(120.0, 480.0, 0.0)],
                mount_bearing_deg: 90.0,
                max_speed_mps: 5.0,
            },
            Trace {
                node: "ue-1".into(),
                waypoints: vec![Waypoint(0.0, 0.0, 0.0), Waypoint(120.0, 480.0, 0.0)],
                mount_bearing_deg: 0.0,
                max_speed_mps: 5.0,
            },
        ],
        obstructions: vec![],
        bounds: Some(Bounds {
            min: [-20.0, -20.0],
            max: [500.0, 100.0],
        }),
        radio: RadioSection::default(),
        env: EnvSection::default(),
        beams: BeamSet::cpe_default(),
        traffic: TrafficModel::default(),
        handover: HandoverParams::default(),
        outage_floor_dbm: -130.0,
        beam_jitter_sigma_db: 0.0,
        encapsulation: EncapsulationModel::default(),
        segments: Segments::default(),
        o2i: None,
    }
}

fn main() {
    let sc = scenario();
    println!(
        "hysteresis {:.1} dB, time-to-trigger {:.1} s, donors at x=0 and x=480\n",
        sc.handover.hysteresis_db, sc.handover.time_to_trigger_s
    );

    let out = run(&sc).unwrap();

    println!("control-plane timeline:");
    for ev in &out.events {
        match &ev.kind {
            SimEventKind::HandoverTriggered { mt, from, to, margin_db } => {
                println!("  t={:>6.1}s  A3 trigger: {mt} {from} -> {to} (margin {margin_db:.2} dB)", ev.t_s);
            }
            SimEventKind::Topology { detail } => {
                println!("  t={:>6.1}s  {detail:?}", ev.t_s);
            }
        }
    }

    println!();
    let mid = out.records.len() / 2;
    for r in [&out.records[0], &out.records[mid], out.records.last().unwrap()] {
        println!(
            "t={:>6.1}s  position ({:>5.0}, {:>3.0})  backhaul rsrp {:>7.2} dBm  e2e dl {:>5.1} Mbps",
            r.t_s, r.x_m, r.y_m, r.fr2.rsrp_dbm, r.e2e_dl_bps / 1e6
        );
    }

    let donor = out.network.donor_of(&"wab-mt".into()).unwrap();
    println!("\nfinal serving donor: {donor}");
    println!("topology after the run: {}", out.network.validate_topology());
}
