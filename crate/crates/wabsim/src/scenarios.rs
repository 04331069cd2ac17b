//! Builders for the two shipped reference scenarios.
//!
//! The JSON files under `scenarios/` are generated from these builders (see
//! the ignored `regenerate_shipped_scenarios` test) and golden-tested against
//! them, so the shipped files and the code cannot drift apart.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::engine::{
    Bounds, EncapsulationModel, EnvSection, HandoverParams, O2iStudy, Obstruction,
    ObstructionKind, RadioSection, Scenario, Segments, Trace, TrafficModel, Waypoint,
};
use crate::radio::{BeamSet, EnvParams};
use crate::topology::Node;

/// Vehicle-mounted WAB node driving a rectangular block: a long line-of-sight
/// approach, a sharp corner that swings the antenna away from the donor, a
/// deeply shadowed stretch behind a large building, and a recovering return.
pub fn vehicular() -> Scenario {
    const SPEED: f64 = 8.0;
    let corner_center = [112.0, -392.0];
    let corner_radius = 12.0;
    let turn_duration = corner_radius * FRAC_PI_2 / SPEED;
    let t_corner_end = 74.0 + turn_duration;

    // Straight south along x = 100, quarter turn, then east, north, and back
    // west: sampling the turn finely keeps per-tick heading steps small.
    let mut waypoints = vec![Waypoint(0.0, 100.0, 200.0), Waypoint(74.0, 100.0, -392.0)];
    const TURN_CHORDS: usize = 19;
    for i in 1..TURN_CHORDS {
        let f = i as f64 / TURN_CHORDS as f64;
        let theta = FRAC_PI_2 * f;
        waypoints.push(Waypoint(
            74.0 + turn_duration * f,
            corner_center[0] - corner_radius * theta.cos(),
            corner_center[1] - corner_radius * theta.sin(),
        ));
    }
    waypoints.push(Waypoint(t_corner_end, 112.0, -404.0));
    waypoints.push(Waypoint(t_corner_end + 23.5, 300.0, -404.0));
    waypoints.push(Waypoint(t_corner_end + 99.0, 300.0, 200.0));
    waypoints.push(Waypoint(t_corner_end + 124.0, 100.0, 200.0));

    let route = |node: &str, mount_bearing_deg: f64| Trace {
        node: node.into(),
        waypoints: waypoints.clone(),
        mount_bearing_deg,
        max_speed_mps: SPEED,
    };

    Scenario {
        name: "vehicular".into(),
        description: "Vehicle-mounted WAB node circling a city block: \
                      line-of-sight approach, corner turn, deep shadow, return."
            .into(),
        duration_s: 200.3,
        tick_s: 0.1,
        seed: 7,
        nodes: vec![
            Node::bh_gnb("donor-1", [0.0, 600.0]),
            Node::bh_5gc("bh-core"),
            Node::serving_core("serving-core"),
            Node::wab_mt("wab-mt", "wab-1", [100.0, 200.0]),
            Node::wab_gnb("wab-gnb", "wab-1"),
            Node::end_ue("ue-1", [100.0, 200.0]),
        ],
        core_links: vec![["donor-1".into(), "bh-core".into()]],
        donors: BTreeMap::new(),
        // The rear-mounted antenna faces 162 degrees behind the direction of
        // travel, which points it at the donor during the southbound leg.
        mobility: vec![route("wab-mt", -162.0), route("ue-1", 0.0)],
        obstructions: vec![Obstruction {
            kind: ObstructionKind::Building,
            polygon: vec![
                [110.0, -350.0],
                [290.0, -350.0],
                [290.0, 100.0],
                [110.0, 100.0],
            ],
            penetration_db: None,
        }],
        bounds: Some(Bounds {
            min: [-50.0, -450.0],
            max: [350.0, 650.0],
        }),
        radio: RadioSection::default(),
        env: EnvSection {
            fr2: EnvParams {
                excess_db: 17.2,
                ..EnvParams::fr2_default()
            },
            fr1: EnvParams::fr1_default(),
        },
        beams: BeamSet::cpe_default(),
        traffic: TrafficModel::default(),
        handover: HandoverParams::default(),
        // Vehicle-grade modem: hangs on far below the indoor-unit default.
        outage_floor_dbm: -130.0,
        beam_jitter_sigma_db: 0.0,
        encapsulation: EncapsulationModel::default(),
        segments: Segments {
            los: Some([0.0, 74.0]),
            transition: Some([74.0, 78.0]),
            deep_nlos: Some([85.0, 155.0]),
        },
        o2i: None,
    }
}

/// Outdoor-to-indoor placement study: a donor across the street, a glass
/// facade, two interior walls, and five numbered indoor positions.
pub fn o2i() -> Scenario {
    let positions: Vec<[f64; 2]> = vec![
        [88.0, 0.0],
        [106.0, 0.0],
        [100.0, 14.0],
        [118.0, 0.0],
        [125.0, 20.0],
    ];
    let strip = |x0: f64, y0: f64, y1: f64| -> Vec<[f64; 2]> {
        vec![[x0, y0], [x0 + 0.4, y0], [x0 + 0.4, y1], [x0, y1]]
    };
    Scenario {
        name: "o2i".into(),
        description: "Outdoor donor serving indoor positions behind a glass \
                      facade and interior walls, directly and via a WAB relay."
            .into(),
        duration_s: 1.0,
        tick_s: 0.1,
        seed: 1,
        nodes: vec![
            Node::bh_gnb("donor-1", [0.0, 0.0]),
            Node::bh_5gc("bh-core"),
            Node::serving_core("serving-core"),
            Node::wab_mt("wab-mt", "wab-1", positions[0]),
            Node::wab_gnb("wab-gnb", "wab-1"),
            Node::end_ue("ue-1", positions[4]),
        ],
        core_links: vec![["donor-1".into(), "bh-core".into()]],
        donors: BTreeMap::new(),
        mobility: vec![],
        obstructions: vec![
            Obstruction {
                kind: ObstructionKind::GlassFacade,
                polygon: strip(85.0, -10.0, 35.0),
                penetration_db: None,
            },
            Obstruction {
                kind: ObstructionKind::InteriorWall,
                polygon: strip(95.0, 5.0, 30.0),
                penetration_db: None,
            },
            Obstruction {
                kind: ObstructionKind::InteriorWall,
                polygon: strip(110.0, 5.0, 30.0),
                penetration_db: None,
            },
        ],
        bounds: Some(Bounds {
            min: [-10.0, -30.0],
            max: [140.0, 50.0],
        }),
        radio: RadioSection::default(),
        env: EnvSection {
            fr2: EnvParams {
                excess_db: 15.0,
                ..EnvParams::fr2_default()
            },
            fr1: EnvParams::fr1_default(),
        },
        beams: BeamSet::cpe_default(),
        traffic: TrafficModel::default(),
        handover: HandoverParams::default(),
        outage_floor_dbm: -110.0,
        beam_jitter_sigma_db: 0.0,
        encapsulation: EncapsulationModel::default(),
        segments: Segments::default(),
        o2i: Some(O2iStudy {
            positions,
            wab_position: 1,
            extension_ue_position: 5,
            extension_wab_positions: vec![2, 4],
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::*;

    fn shipped_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
    }

    /// Regenerates the shipped scenario files from the builders:
    /// `cargo test -p wabsim regenerate_shipped_scenarios -- --ignored`
    #[test]
    #[ignore]
    fn regenerate_shipped_scenarios() {
        let dir = shipped_dir();
        std::fs::create_dir_all(&dir).unwrap();
        for sc in [vehicular(), o2i()] {
            let path = dir.join(format!("{}.json", sc.name));
            std::fs::write(&path, sc.to_json_pretty()).unwrap();
        }
    }

    #[test]
    fn shipped_scenarios_match_builders() {
        for sc in [vehicular(), o2i()] {
            let path = shipped_dir().join(format!("{}.json", sc.name));
            let json = std::fs::read_to_string(&path).unwrap_or_else(|e| {
                panic!(
                    "{}: {e}; run `cargo test -p wabsim regenerate_shipped_scenarios -- --ignored`",
                    path.display()
                )
            });
            let parsed = Scenario::from_json_str(&json).unwrap();
            assert_eq!(parsed, sc, "{} drifted from its builder", sc.name);
        }
    }

    #[test]
    fn both_scenarios_validate_clean() {
        for sc in [vehicular(), o2i()] {
            let errs = sc.validate();
            assert!(errs.is_empty(), "{}: {errs:?}", sc.name);
        }
    }

    #[test]
    fn vehicular_route_is_drivable() {
        let sc = vehicular();
        let route = &sc.mobility[0];
        assert!(route.check().is_empty());
        // The trace covers the whole run and closes the loop.
        assert!(route.end_s() >= sc.duration_s);
        let first = route.waypoints.first().unwrap();
        let last = route.waypoints.last().unwrap();
        assert_eq!(first.pos(), last.pos());
        // Corner sampling is fine enough for smooth per-tick heading steps.
        let corner: Vec<_> = route
            .waypoints
            .iter()
            .filter(|w| w.t_s() > 74.0 - 1e-9 && w.t_s() < 76.4)
            .collect();
        assert!(corner.len() >= 20, "found {} corner samples", corner.len());
    }

    #[test]
    fn vehicular_antenna_faces_the_donor_southbound() {
        let sc = vehicular();
        let route = &sc.mobility[0];
        // Heading south, mount -162: boresight wraps to 108 degrees, within
        // a beamwidth of the donor bearing for the whole southbound leg.
        let boresight = crate::radio::wrap_deg(route.heading_at(30.0) + route.mount_bearing_deg);
        assert!((boresight - 108.0).abs() < 1e-9);
        let p = route.position_at(30.0);
        let bearing = (600.0 - p[1]).atan2(-p[0]).to_degrees();
        assert!((bearing - boresight).abs() < 15.0);
    }

    #[test]
    fn o2i_positions_sit_behind_the_expected_walls() {
        use crate::engine::geometry::survey;
        let sc = o2i();
        let study = sc.o2i.as_ref().unwrap();
        let donor = [0.0, 0.0];
        // Crossings from the donor: (glass, walls) per numbered position.
        let expect = [(1, 0), (1, 0), (1, 1), (1, 0), (1, 2)];
        for (i, &(glass, walls)) in expect.iter().enumerate() {
            let c = survey(donor, study.positions[i], &sc.obstructions);
            assert_eq!(
                (c.glass, c.walls),
                (glass, walls),
                "position {} crossings",
                i + 1
            );
            assert!(c.building_losses.is_empty());
        }
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(vehicular(), vehicular());
        assert_eq!(o2i(), o2i());
    }
}
