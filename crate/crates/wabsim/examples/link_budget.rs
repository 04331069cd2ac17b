//! Trace the full link budget from EIRP to throughput over distance.
//!
//! Sweeps a millimetre-wave access link and a sub-6 GHz backhaul link over
//! range in three propagation states, printing the chain each row: path
//! loss, per-resource-element RSRP and SINR, the MCS link adaptation picks,
//! the resulting BLER and the delivered downlink rate.
//!
//! Run with: cargo run --example link_budget

use wabsim::radio::{
    self, link_adapt, path_loss, rsrp_dbm, sinr_db, Direction, EnvParams, LosState, RadioConfig,
};

fn sweep(label: &str, cfg: &RadioConfig, env: &EnvParams, los: &LosState, beam_gain_dbi: f64) {
    println!("{label}");
    println!(
        "  {:>6}  {:>8}  {:>8}  {:>7}  {:>4}  {:>8}  {:>10}",
        "dist m", "loss dB", "rsrp dBm", "sinr dB", "mcs", "bler", "dl Mbps"
    );
    for distance_m in [10.0, 30.0, 100.0, 300.0, 1000.0] {
        let loss = path_loss(distance_m, cfg.carrier_hz, los, env);
        let rsrp = rsrp_dbm(cfg, loss, beam_gain_dbi, Direction::Dl);
        let sinr = sinr_db(cfg, rsrp);
        let table = cfg.mcs_table(Direction::Dl);
        let mcs = link_adapt(sinr, table, 0.1);
        let bler = radio::bler(sinr, mcs, table);
        let rate = radio::link_throughput_bps(cfg, mcs, bler, Direction::Dl);
        println!(
            "  {distance_m:>6.0}  {loss:>8.1}  {rsrp:>8.1}  {sinr:>7.1}  {mcs:>4}  {bler:>8.4}  {:>10.1}",
            rate / 1e6
        );
    }
    println!();
}

fn main() {
    let fr2 = RadioConfig::fr2_default();
    let fr1 = RadioConfig::fr1_default();
    let fr2_env = EnvParams::fr2_default();
    let fr1_env = EnvParams::fr1_default();

    println!(
        "FR2 backhaul: {:.1} GHz, {} PRB, EIRP {:.0} dBm -> noise floor {:.2} dBm/RE",
        fr2.carrier_hz / 1e9,
        fr2.n_prb,
        fr2.eirp_dbm(Direction::Dl),
        fr2.noise_per_re_dbm()
    );
    println!(
        "FR1 access:   {:.1} GHz, {} PRB, EIRP {:.0} dBm -> noise floor {:.2} dBm/RE\n",
        fr1.carrier_hz / 1e9,
        fr1.n_prb,
        fr1.eirp_dbm(Direction::Dl),
        fr1.noise_per_re_dbm()
    );

    sweep("FR2, line of sight, boresight beam (+8 dBi):", &fr2, &fr2_env, &LosState::Los, 8.0);
    sweep(
        "FR2, one obstruction in the path:",
        &fr2,
        &fr2_env,
        &LosState::Nlos { obstructions: 1 },
        8.0,
    );
    sweep(
        "FR2, indoor behind glass and one interior wall:",
        &fr2,
        &fr2_env,
        &LosState::Indoor {
            glass: true,
            interior_walls: 1,
        },
        8.0,
    );
    sweep("FR1, line of sight, omni (0 dBi):", &fr1, &fr1_env, &LosState::Los, 0.0);

    println!("uplink is the asymmetric direction — same FR1 geometry at 100 m:");
    let loss = path_loss(100.0, fr1.carrier_hz, &LosState::Los, &fr1_env);
    for dir in [Direction::Dl, Direction::Ul] {
        let rsrp = rsrp_dbm(&fr1, loss, 0.0, dir);
        let sinr = sinr_db(&fr1, rsrp);
        let table = fr1.mcs_table(dir);
        let mcs = link_adapt(sinr, table, 0.1);
        let bler = radio::bler(sinr, mcs, table);
        let rate = radio::link_throughput_bps(&fr1, mcs, bler, dir);
        println!(
            "  {dir:?}: eirp {:>4.0} dBm, tdd {:.1}, efficiency {:.3} -> {:.2} Mbps",
            fr1.eirp_dbm(dir),
            fr1.tdd_fraction(dir),
            fr1.efficiency(dir),
            rate / 1e6
        );
    }
}
