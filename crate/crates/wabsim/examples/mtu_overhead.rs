//! Walk a user packet through the relay's tunnel stack and count the bytes.
//!
//! Shows the three-layer reference stack (backhaul GTP-U, secure VPN, inner
//! GTP-U), what it costs in effective MTU at common outer MTUs, and why the
//! simulator forbids fragmentation instead of papering over an oversized
//! inner packet.
//!
//! Run with: cargo run --example mtu_overhead

use wabsim::encap::{
    effective_mtu, payload_efficiency, reference_stack, Fragmentation, Layer, MtuPolicy, Packet,
};

fn main() {
    let stack = reference_stack(101, 7001);
    println!("reference tunnel stack (outermost first):");
    let mut total = 0;
    for layer in &stack {
        total += layer.overhead_bytes;
        println!("  {:?}  +{} B", layer.kind, layer.overhead_bytes);
    }
    println!("  total overhead: {total} B\n");

    println!("effective MTU once the stack is paid for:");
    for outer in [1500u32, 1420, 1280, 576] {
        let policy = MtuPolicy::new(outer).unwrap();
        match effective_mtu(&policy, &stack) {
            Ok(inner) => println!("  outer {outer:>5} B -> inner {inner:>5} B"),
            Err(e) => println!("  outer {outer:>5} B -> {e}"),
        }
    }

    let policy = MtuPolicy::new(1420).unwrap();
    let inner = effective_mtu(&policy, &stack).unwrap();
    println!(
        "\npayload efficiency at the 1420 B sweet spot: {:.4}",
        payload_efficiency(&stack, inner)
    );
    println!(
        "single VPN layer leaves {} B of a 1420 B outer MTU\n",
        effective_mtu(&policy, &[Layer::vpn()]).unwrap()
    );

    println!("encapsulating a {inner} B payload through the stack:");
    let mut packet = Packet::new(inner).unwrap();
    println!("  bare payload        {:>5} B", packet.total_bytes());
    for layer in stack.iter().rev() {
        packet = packet.encap(*layer).unwrap();
        println!("  after {:<29} {:>5} B", format!("{:?}", layer.kind), packet.total_bytes());
    }

    let strict = MtuPolicy::new(1420).unwrap();
    let relaxed = MtuPolicy {
        fragmentation: Fragmentation::Allowed,
        ..strict
    };
    println!("\nfull packet is {} B on the wire:", packet.total_bytes());
    println!("  fragmentation forbidden: admitted = {}", strict.admits(&packet));
    println!("  fragmentation allowed:   admitted = {}", relaxed.admits(&packet));

    let oversized = Packet::new(inner + 1).unwrap();
    let mut oversized = oversized;
    for layer in stack.iter().rev() {
        oversized = oversized.encap(*layer).unwrap();
    }
    println!(
        "one byte more ({} B): admitted under the strict policy = {}",
        oversized.total_bytes(),
        strict.admits(&oversized)
    );
}
