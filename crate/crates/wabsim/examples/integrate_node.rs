//! Integrate a WAB node step by step and watch the control plane.
//!
//! Builds the smallest complete deployment by hand — donor, backhaul core,
//! serving core, one WAB chassis, one UE — then integrates the node and
//! prints every control-plane event the process emits.
//!
//! Run with: cargo run --example integrate_node

use wabsim::topology::{NetworkConfig, NetworkState, Node};

fn main() {
    let mut net = NetworkState::new(NetworkConfig::default());

    net.add_node(Node::bh_gnb("donor-1", [0.0, 0.0])).unwrap();
    net.add_node(Node::bh_5gc("bh-core")).unwrap();
    net.add_node(Node::serving_core("serving-core")).unwrap();
    net.add_node(Node::wab_mt("wab-mt", "wab-1", [120.0, 40.0])).unwrap();
    net.add_node(Node::wab_gnb("wab-gnb", "wab-1")).unwrap();
    net.add_node(Node::end_ue("ue-1", [122.0, 41.0])).unwrap();
    net.set_core_link(&"donor-1".into(), &"bh-core".into()).unwrap();

    println!("== integrating chassis wab-1 via donor-1 ==");
    let state = net.integrate_wab_node(&"wab-1".into(), &"donor-1".into()).unwrap();
    for event in net.drain_events() {
        println!("  {event:?}");
    }
    println!("chassis state: {state:?}\n");

    println!("== attaching ue-1 to the onboard gNB ==");
    let session = net.attach_ue(&"ue-1".into(), &"wab-gnb".into()).unwrap();
    for event in net.drain_events() {
        println!("  {event:?}");
    }
    println!(
        "UE session {:?}: DRB {}, N3 tunnel {}, carried by BH session {:?}\n",
        session.session_id, session.drb_id, session.n3_tunnel_id, session.carried_by
    );

    println!("== structural validation ==");
    println!("{}", net.validate_topology());

    println!("\n== a second hop is refused ==");
    let outcome = net.handover_wab_mt(&"wab-mt".into(), &"wab-gnb".into());
    println!("handover to the onboard gNB: {outcome:?}");
}
