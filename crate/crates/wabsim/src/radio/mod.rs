//! Physical-layer model: path loss, link budgets, adaptive MCS and beams.
//!
//! Everything here is a pure function of its inputs so the engine can replay
//! links deterministically. The budget chain is: EIRP spread over occupied
//! resource elements, minus log-distance path loss (with per-environment
//! exponents and penetration losses), plus antenna and beam gains, compared
//! against thermal noise per resource element to get SINR. SINR drives MCS
//! selection and a logistic BLER, and throughput follows from spectral
//! efficiency, occupied bandwidth, MIMO rank, TDD split and a per-direction
//! scheduler efficiency factor.

pub mod beams;
pub mod mcs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use beams::{select_beam, wrap_deg, BeamSet, SsbBeam};
pub use mcs::{bler, link_adapt, McsTable, BLER_SLOPE_PER_DB, SHANNON_FRACTION};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

/// Subcarriers per physical resource block.
pub const SUBCARRIERS_PER_PRB: u32 = 12;

/// Validation failures for radio and beam configuration.
#[derive(Debug, Error)]
pub enum RadioError {
    #[error("invalid radio config field {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("invalid beam set: {reason}")]
    InvalidBeamSet { reason: String },
}

/// Carrier family a link operates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Band {
    /// Sub-6 GHz access carrier.
    Fr1,
    /// Millimeter-wave backhaul carrier.
    Fr2,
}

/// Link direction relative to the network (downlink towards the UE).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Dl,
    Ul,
}

/// Line-of-sight condition of a single link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LosState {
    /// Unobstructed path.
    Los,
    /// Path crosses opaque obstructions (buildings, foliage).
    Nlos { obstructions: u32 },
    /// Path enters a building through its facade and optionally interior walls.
    Indoor { glass: bool, interior_walls: u32 },
}

/// Propagation-environment parameters for one carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvParams {
    /// Path-loss exponent under line of sight.
    pub n_los: f64,
    /// Path-loss exponent when obstructed.
    pub n_nlos: f64,
    /// Penetration loss per opaque obstruction crossed, dB.
    pub obstruction_db: f64,
    /// Facade (glass) penetration loss, dB.
    pub glass_db: f64,
    /// Loss per interior wall crossed, dB.
    pub wall_db: f64,
    /// Flat calibration excess applied to every link in this environment, dB
    /// (clutter, cable and body losses not modeled individually).
    pub excess_db: f64,
}

impl EnvParams {
    /// Millimeter-wave defaults: harsh penetration, strong NLOS exponent.
    pub fn fr2_default() -> Self {
        EnvParams {
            n_los: 2.0,
            n_nlos: 3.2,
            obstruction_db: 15.0,
            glass_db: 8.0,
            wall_db: 15.0,
            excess_db: 0.0,
        }
    }

    /// Sub-6 GHz defaults: mild penetration losses.
    pub fn fr1_default() -> Self {
        EnvParams {
            n_los: 2.0,
            n_nlos: 3.0,
            obstruction_db: 15.0,
            glass_db: 2.0,
            wall_db: 5.0,
            excess_db: 0.0,
        }
    }
}

/// Full physical-layer configuration of one carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    pub band: Band,
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Channel bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Subcarrier spacing, Hz.
    pub scs_hz: f64,
    /// Allocated physical resource blocks.
    pub n_prb: u32,
    /// Fraction of slots serving the downlink (TDD split).
    pub tdd_dl_fraction: f64,
    /// Total radiated power towards the receiver, downlink, dBm.
    pub eirp_dl_dbm: f64,
    /// Total radiated power towards the network, uplink, dBm.
    pub eirp_ul_dbm: f64,
    /// Receive antenna gain before beamforming, dBi.
    pub rx_gain_dbi: f64,
    /// Spatial layers.
    pub mimo_layers: u32,
    /// MCS table capping the downlink.
    pub dl_mcs_table: McsTable,
    /// MCS table capping the uplink.
    pub ul_mcs_table: McsTable,
    /// Scheduler/overhead efficiency applied to downlink throughput, (0, 1].
    pub efficiency_dl: f64,
    /// Scheduler/overhead efficiency applied to uplink throughput, (0, 1].
    pub efficiency_ul: f64,
    /// Receiver noise figure, dB.
    pub noise_figure_db: f64,
    /// BLER operating point link adaptation aims at.
    pub target_bler: f64,
}

impl RadioConfig {
    /// Millimeter-wave backhaul defaults (26-28 GHz class hardware).
    pub fn fr2_default() -> Self {
        RadioConfig {
            band: Band::Fr2,
            carrier_hz: 27.2e9,
            bandwidth_hz: 200e6,
            scs_hz: 120e3,
            n_prb: 132,
            tdd_dl_fraction: 0.8,
            eirp_dl_dbm: 70.0,
            eirp_ul_dbm: 40.0,
            rx_gain_dbi: 0.0,
            mimo_layers: 2,
            dl_mcs_table: McsTable::Qam256,
            ul_mcs_table: McsTable::Qam64,
            efficiency_dl: 1.0,
            efficiency_ul: 1.0,
            noise_figure_db: 9.0,
            target_bler: 0.1,
        }
    }

    /// Sub-6 GHz access defaults (small indoor cell with a thin uplink).
    pub fn fr1_default() -> Self {
        RadioConfig {
            band: Band::Fr1,
            carrier_hz: 3.5e9,
            bandwidth_hz: 40e6,
            scs_hz: 30e3,
            n_prb: 106,
            tdd_dl_fraction: 0.8,
            eirp_dl_dbm: 20.0,
            eirp_ul_dbm: 20.0,
            rx_gain_dbi: 0.0,
            mimo_layers: 1,
            dl_mcs_table: McsTable::Qam64,
            ul_mcs_table: McsTable::Qam64,
            efficiency_dl: 0.30,
            efficiency_ul: 0.025,
            noise_figure_db: 7.0,
            target_bler: 0.1,
        }
    }

    /// Checks physical plausibility of the configuration.
    pub fn validate(&self) -> Result<(), RadioError> {
        let fail = |field: &'static str, reason: String| {
            Err(RadioError::InvalidConfig { field, reason })
        };
        if self.carrier_hz <= 0.0 {
            return fail("carrier_hz", "must be positive".into());
        }
        if self.bandwidth_hz <= 0.0 {
            return fail("bandwidth_hz", "must be positive".into());
        }
        if self.scs_hz <= 0.0 {
            return fail("scs_hz", "must be positive".into());
        }
        if self.n_prb == 0 {
            return fail("n_prb", "must be at least 1".into());
        }
        let occupied = self.occupied_bandwidth_hz();
        if occupied > self.bandwidth_hz {
            return fail(
                "n_prb",
                format!(
                    "{} PRBs occupy {occupied} Hz, exceeding the {} Hz channel",
                    self.n_prb, self.bandwidth_hz
                ),
            );
        }
        if !(self.tdd_dl_fraction > 0.0 && self.tdd_dl_fraction < 1.0) {
            return fail("tdd_dl_fraction", "must lie strictly in (0, 1)".into());
        }
        if self.mimo_layers == 0 {
            return fail("mimo_layers", "must be at least 1".into());
        }
        for (field, eff) in [
            ("efficiency_dl", self.efficiency_dl),
            ("efficiency_ul", self.efficiency_ul),
        ] {
            if !(eff > 0.0 && eff <= 1.0) {
                return fail(field, "must lie in (0, 1]".into());
            }
        }
        if !(self.target_bler > 0.0 && self.target_bler < 1.0) {
            return fail("target_bler", "must lie strictly in (0, 1)".into());
        }
        Ok(())
    }

    /// Bandwidth actually occupied by the PRB allocation, Hz.
    pub fn occupied_bandwidth_hz(&self) -> f64 {
        f64::from(self.n_prb) * f64::from(SUBCARRIERS_PER_PRB) * self.scs_hz
    }

    /// EIRP used in `dir`, dBm.
    pub fn eirp_dbm(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Dl => self.eirp_dl_dbm,
            Direction::Ul => self.eirp_ul_dbm,
        }
    }

    /// MCS table governing `dir`.
    pub fn mcs_table(&self, dir: Direction) -> McsTable {
        match dir {
            Direction::Dl => self.dl_mcs_table,
            Direction::Ul => self.ul_mcs_table,
        }
    }

    /// Scheduler efficiency applied to `dir`.
    pub fn efficiency(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Dl => self.efficiency_dl,
            Direction::Ul => self.efficiency_ul,
        }
    }

    /// Share of airtime `dir` receives under the TDD split.
    pub fn tdd_fraction(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Dl => self.tdd_dl_fraction,
            Direction::Ul => 1.0 - self.tdd_dl_fraction,
        }
    }

    /// Thermal noise plus noise figure over one resource element, dBm.
    pub fn noise_per_re_dbm(&self) -> f64 {
        THERMAL_NOISE_DBM_HZ + 10.0 * self.scs_hz.log10() + self.noise_figure_db
    }
}

/// Free-space path loss at one meter for `carrier_hz`, dB.
pub fn fspl_1m_db(carrier_hz: f64) -> f64 {
    20.0 * carrier_hz.log10() + 20.0 * (4.0 * std::f64::consts::PI / SPEED_OF_LIGHT_M_S).log10()
}

/// Log-distance path loss with penetration terms, dB.
///
/// Distances below one meter are clamped to the one-meter reference.
pub fn path_loss(distance_m: f64, carrier_hz: f64, los: &LosState, env: &EnvParams) -> f64 {
    let d = distance_m.max(1.0);
    let (exponent, penetration) = match los {
        LosState::Los => (env.n_los, 0.0),
        LosState::Nlos { obstructions } => {
            (env.n_nlos, f64::from(*obstructions) * env.obstruction_db)
        }
        LosState::Indoor {
            glass,
            interior_walls,
        } => (
            env.n_los,
            if *glass { env.glass_db } else { 0.0 }
                + f64::from(*interior_walls) * env.wall_db,
        ),
    };
    fspl_1m_db(carrier_hz) + 10.0 * exponent * d.log10() + penetration + env.excess_db
}

/// Per-resource-element received power, dBm.
///
/// The configured EIRP is spread uniformly over the occupied resource
/// elements, then attenuated by `path_loss_db` and boosted by the static
/// receive gain plus the selected beam's pattern gain.
pub fn rsrp_dbm(
    cfg: &RadioConfig,
    path_loss_db: f64,
    beam_gain_dbi: f64,
    dir: Direction,
) -> f64 {
    let re_count = f64::from(cfg.n_prb) * f64::from(SUBCARRIERS_PER_PRB);
    cfg.eirp_dbm(dir) - 10.0 * re_count.log10() - path_loss_db + cfg.rx_gain_dbi + beam_gain_dbi
}

/// Per-resource-element SINR, dB (interference-free network: noise-limited).
pub fn sinr_db(cfg: &RadioConfig, rsrp_dbm: f64) -> f64 {
    rsrp_dbm - cfg.noise_per_re_dbm()
}

/// Physical-layer throughput of one direction, bits per second.
pub fn link_throughput_bps(cfg: &RadioConfig, mcs: u8, bler: f64, dir: Direction) -> f64 {
    cfg.mcs_table(dir).se(mcs)
        * cfg.occupied_bandwidth_hz()
        * f64::from(cfg.mimo_layers)
        * cfg.tdd_fraction(dir)
        * (1.0 - bler)
        * cfg.efficiency(dir)
}

/// System spectral efficiency: throughput normalized by channel bandwidth.
pub fn spectral_efficiency(throughput_bps: f64, bandwidth_hz: f64) -> f64 {
    assert!(bandwidth_hz > 0.0, "bandwidth must be positive");
    throughput_bps / bandwidth_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RadioConfig::fr2_default().validate().unwrap();
        RadioConfig::fr1_default().validate().unwrap();
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let mut cfg = RadioConfig::fr2_default();
        cfg.tdd_dl_fraction = 1.0;
        assert!(cfg.validate().is_err());

        let mut cfg = RadioConfig::fr2_default();
        cfg.n_prb = 10_000; // occupies more than the channel
        assert!(cfg.validate().is_err());

        let mut cfg = RadioConfig::fr1_default();
        cfg.efficiency_ul = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = RadioConfig::fr1_default();
        cfg.mimo_layers = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn free_space_reference_at_one_meter() {
        // 20*log10(27.2e9) - 147.55 = 61.14 dB.
        let pl = path_loss(1.0, 27.2e9, &LosState::Los, &EnvParams::fr2_default());
        assert!((pl - 61.14).abs() < 0.1, "got {pl}");
        // Sub-meter distances clamp to the 1 m reference.
        let clamped = path_loss(0.0, 27.2e9, &LosState::Los, &EnvParams::fr2_default());
        assert!((clamped - pl).abs() < 1e-12);
    }

    #[test]
    fn path_loss_decomposes_additively() {
        let env = EnvParams::fr2_default();
        let los = path_loss(100.0, 27.2e9, &LosState::Los, &env);
        let indoor = path_loss(
            100.0,
            27.2e9,
            &LosState::Indoor {
                glass: true,
                interior_walls: 2,
            },
            &env,
        );
        assert!((indoor - los - (env.glass_db + 2.0 * env.wall_db)).abs() < 1e-9);

        let mut excess = env;
        excess.excess_db = 17.2;
        let shifted = path_loss(100.0, 27.2e9, &LosState::Los, &excess);
        assert!((shifted - los - 17.2).abs() < 1e-9);
    }

    #[test]
    fn path_loss_monotone_in_distance_and_obstructions() {
        let env = EnvParams::fr2_default();
        let mut last = 0.0;
        for d in [1.0, 3.0, 10.0, 50.0, 200.0, 1000.0] {
            let pl = path_loss(d, 27.2e9, &LosState::Los, &env);
            assert!(pl > last);
            last = pl;
        }
        let nlos1 = path_loss(50.0, 27.2e9, &LosState::Nlos { obstructions: 1 }, &env);
        let nlos3 = path_loss(50.0, 27.2e9, &LosState::Nlos { obstructions: 3 }, &env);
        let los = path_loss(50.0, 27.2e9, &LosState::Los, &env);
        assert!(nlos1 > los);
        assert!(nlos3 > nlos1 + 25.0); // two extra crossings at 15 dB each
    }

    #[test]
    fn rsrp_spreads_eirp_over_resource_elements() {
        // FR2 defaults: 70 dBm over 1584 REs = 38.0 dBm per RE before loss.
        let cfg = RadioConfig::fr2_default();
        let r = rsrp_dbm(&cfg, 0.0, 0.0, Direction::Dl);
        assert!((r - 38.0).abs() < 0.05, "got {r}");
        let ul = rsrp_dbm(&cfg, 0.0, 0.0, Direction::Ul);
        assert!((r - ul - 30.0).abs() < 1e-9);
        // Gains add linearly in dB.
        let gained = rsrp_dbm(&cfg, 80.0, 9.5, Direction::Dl);
        assert!((gained - (r - 80.0 + 9.5)).abs() < 1e-9);
    }

    #[test]
    fn noise_floor_per_resource_element() {
        let fr2 = RadioConfig::fr2_default();
        assert!((fr2.noise_per_re_dbm() - (-114.21)).abs() < 0.01);
        let fr1 = RadioConfig::fr1_default();
        assert!((fr1.noise_per_re_dbm() - (-122.23)).abs() < 0.01);
    }

    #[test]
    fn tdd_split_gives_exact_dl_ul_airtime_ratio() {
        // With symmetric tables and efficiencies, an 0.8 TDD split makes the
        // downlink exactly four times the uplink at equal MCS and BLER.
        let mut cfg = RadioConfig::fr2_default();
        cfg.ul_mcs_table = McsTable::Qam256;
        let dl = link_throughput_bps(&cfg, 10, 0.0, Direction::Dl);
        let ul = link_throughput_bps(&cfg, 10, 0.0, Direction::Ul);
        assert!((dl / ul - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fr1_peak_rates_match_hand_computation() {
        // 5.5547 b/s/Hz * 38.16 MHz * 0.8 TDD * 0.30 efficiency = 50.87 Mbps.
        let cfg = RadioConfig::fr1_default();
        let dl = link_throughput_bps(&cfg, 28, 0.0, Direction::Dl);
        assert!((dl - 50.872e6).abs() < 5e3, "got {dl}");
        assert!(dl > 40e6 && dl < 60e6);
        // Same MCS on the thin uplink: 5.5547 * 38.16 MHz * 0.2 * 0.025.
        let ul = link_throughput_bps(&cfg, 28, 0.0, Direction::Ul);
        assert!((ul - 1.0598e6).abs() < 1e3, "got {ul}");
    }

    #[test]
    fn fr2_backhaul_peak_rate_is_gigabit_class() {
        let cfg = RadioConfig::fr2_default();
        let mcs = cfg.dl_mcs_table.max_mcs();
        let dl = link_throughput_bps(&cfg, mcs, 0.0, Direction::Dl);
        // 7.4063 * 190.08 MHz * 2 layers * 0.8.
        assert!((dl - 2.2523e9).abs() < 1e6, "got {dl}");
    }

    #[test]
    fn bler_scales_throughput_linearly() {
        let cfg = RadioConfig::fr2_default();
        let clean = link_throughput_bps(&cfg, 5, 0.0, Direction::Dl);
        let half = link_throughput_bps(&cfg, 5, 0.5, Direction::Dl);
        assert!((half * 2.0 - clean).abs() < 1e-6);
        assert_eq!(link_throughput_bps(&cfg, 5, 1.0, Direction::Dl), 0.0);
    }

    #[test]
    fn calibration_chain_reproduces_backhaul_operating_point() {
        // A 412 m boresight mmWave link with 17.2 dB excess margin lands near
        // -83 dBm RSRP, 31 dB SINR, and adapts to MCS 20 on the 256-QAM table.
        let cfg = RadioConfig::fr2_default();
        let mut env = EnvParams::fr2_default();
        env.excess_db = 17.2;
        let pl = path_loss(412.31, 27.2e9, &LosState::Los, &env);
        let r = rsrp_dbm(&cfg, pl, 9.667, Direction::Dl);
        assert!((r - (-82.97)).abs() < 0.15, "got {r}");
        let s = sinr_db(&cfg, r);
        assert!((s - 31.24).abs() < 0.2, "got {s}");
        let mcs = link_adapt(s, cfg.dl_mcs_table, cfg.target_bler);
        assert_eq!(mcs, 20);
    }

    #[test]
    fn spectral_efficiency_normalizes_by_channel() {
        assert!((spectral_efficiency(100e6, 20e6) - 5.0).abs() < 1e-12);
        let cfg = RadioConfig::fr2_default();
        for mcs in [0, 9, 20, 27] {
            let thr = link_throughput_bps(&cfg, mcs, 0.0, Direction::Dl);
            let se = spectral_efficiency(thr, cfg.bandwidth_hz);
            let cap = cfg.dl_mcs_table.se(mcs)
                * f64::from(cfg.mimo_layers)
                * cfg.tdd_fraction(Direction::Dl);
            assert!(se <= cap + 1e-12);
        }
    }

    #[test]
    fn band_ordering_and_serde_round_trip() {
        assert!(Band::Fr1 < Band::Fr2);
        let cfg = RadioConfig::fr1_default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RadioConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
        let env = EnvParams::fr2_default();
        let json = serde_json::to_string(&env).unwrap();
        let back: EnvParams = serde_json::from_str(&json).unwrap();
        assert_eq!(env, back);
    }
}
