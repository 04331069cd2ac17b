//! MCS tables, BLER waterfall and link adaptation.
//!
//! Spectral efficiencies are the standard NR values (64-QAM-capable table for
//! uplink and FR1, 256-QAM-capable table for the FR2 downlink). Decode
//! thresholds are not measured figures: each MCS is placed at the SINR where
//! a fixed fraction of Shannon capacity equals its spectral efficiency, and a
//! logistic waterfall around that threshold models block errors.

use serde::{Deserialize, Serialize};

/// Logistic BLER slope in 1/dB: `bler = 1 / (1 + exp(k * (sinr - t)))`.
pub const BLER_SLOPE_PER_DB: f64 = 1.0;

/// Fraction of Shannon capacity used to place each MCS decode threshold.
pub const SHANNON_FRACTION: f64 = 0.56;

/// Separation enforced between consecutive thresholds so a higher MCS is
/// always strictly harder to decode.
const MIN_THRESHOLD_STEP_DB: f64 = 0.01;

/// 64-QAM-capable spectral efficiencies, MCS 0..=28 (bits/s/Hz).
const QAM64_SE: [f64; 29] = [
    0.2344, 0.3066, 0.3770, 0.4902, 0.6016, 0.7402, 0.8770, 1.0273, 1.1758,
    1.3262, 1.3281, 1.4766, 1.6953, 1.9141, 2.1602, 2.4063, 2.5703, 2.5664,
    2.7305, 3.0293, 3.3223, 3.6094, 3.9023, 4.2129, 4.5234, 4.8164, 5.1152,
    5.3320, 5.5547,
];

/// 256-QAM-capable spectral efficiencies, MCS 0..=27 (bits/s/Hz).
const QAM256_SE: [f64; 28] = [
    0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.6953, 1.9141, 2.1602,
    2.4063, 2.5703, 2.7305, 3.0293, 3.3223, 3.6094, 3.9023, 4.2129, 4.5234,
    4.8164, 5.1152, 5.3320, 5.5547, 5.8906, 6.2266, 6.5703, 6.9141, 7.1602,
    7.4063,
];

/// Which modulation family caps a link direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum McsTable {
    /// Up to 64-QAM (uplink and FR1 access defaults).
    Qam64,
    /// Up to 256-QAM (FR2 downlink default).
    Qam256,
}

impl McsTable {
    fn se_table(self) -> &'static [f64] {
        match self {
            McsTable::Qam64 => &QAM64_SE,
            McsTable::Qam256 => &QAM256_SE,
        }
    }

    /// Number of MCS indices in the table.
    pub fn len(self) -> usize {
        self.se_table().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Highest valid MCS index.
    pub fn max_mcs(self) -> u8 {
        (self.len() - 1) as u8
    }

    /// Spectral efficiency of `mcs` in bits/s/Hz.
    ///
    /// Panics if `mcs` is outside the table; indices always come from
    /// [`link_adapt`] or explicit iteration over `0..=max_mcs()`.
    pub fn se(self, mcs: u8) -> f64 {
        self.se_table()[usize::from(mcs)]
    }

    /// Decode threshold of `mcs` in dB SINR (the SINR where BLER is 0.5).
    ///
    /// Thresholds follow `10*log10(2^(se/SHANNON_FRACTION) - 1)` and are then
    /// monotonized: the standard 64-QAM table dips in spectral efficiency at
    /// index 17, and a threshold inversion there would let a higher MCS decode
    /// more easily than a lower one.
    pub fn threshold_db(self, mcs: u8) -> f64 {
        let table = self.se_table();
        let mut t = f64::NEG_INFINITY;
        for se in &table[..=usize::from(mcs)] {
            let raw = 10.0 * ((se / SHANNON_FRACTION).exp2() - 1.0).log10();
            t = raw.max(t + MIN_THRESHOLD_STEP_DB);
        }
        t
    }

    /// Render the table as CSV (`mcs,se_bits_per_hz,threshold_db`) for inspection.
    pub fn to_csv(self) -> String {
        let mut out = String::from("mcs,se_bits_per_hz,threshold_db\n");
        for mcs in 0..=self.max_mcs() {
            out.push_str(&format!(
                "{mcs},{:.4},{:.3}\n",
                self.se(mcs),
                self.threshold_db(mcs)
            ));
        }
        out
    }
}

/// Block error rate of `mcs` at `sinr_db`: logistic waterfall, 0.5 at threshold.
pub fn bler(sinr_db: f64, mcs: u8, table: McsTable) -> f64 {
    let t = table.threshold_db(mcs);
    1.0 / (1.0 + (BLER_SLOPE_PER_DB * (sinr_db - t)).exp())
}

/// Largest MCS whose predicted BLER stays at or under `target_bler`; MCS 0
/// is the floor when nothing qualifies.
pub fn link_adapt(sinr_db: f64, table: McsTable, target_bler: f64) -> u8 {
    let mut best = 0;
    for mcs in 0..=table.max_mcs() {
        if bler(sinr_db, mcs, table) <= target_bler {
            best = mcs;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_expected_sizes_and_ranges() {
        assert_eq!(McsTable::Qam64.len(), 29);
        assert_eq!(McsTable::Qam256.len(), 28);
        assert_eq!(McsTable::Qam64.max_mcs(), 28);
        assert!((McsTable::Qam64.se(28) - 5.5547).abs() < 1e-12);
        assert!((McsTable::Qam256.se(27) - 7.4063).abs() < 1e-12);
    }

    #[test]
    fn bler_is_half_exactly_at_threshold() {
        for table in [McsTable::Qam64, McsTable::Qam256] {
            for mcs in [0, 10, table.max_mcs()] {
                let t = table.threshold_db(mcs);
                assert!((bler(t, mcs, table) - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bler_twenty_db_above_threshold_is_negligible() {
        let t = McsTable::Qam64.threshold_db(5);
        assert!(bler(t + 20.0, 5, McsTable::Qam64) < 1e-8);
    }

    #[test]
    fn bler_decreases_with_sinr_and_increases_with_mcs() {
        // Strictness is only checked away from the saturated tails, where the
        // logistic rounds to exactly 0.0 or 1.0 in f64.
        let interior = |b: f64| b > 1e-12 && b < 1.0 - 1e-12;
        for table in [McsTable::Qam64, McsTable::Qam256] {
            for mcs in 0..=table.max_mcs() {
                let mut last = 1.0_f64;
                let mut sinr = -20.0;
                while sinr <= 40.0 {
                    let b = bler(sinr, mcs, table);
                    assert!(b <= last, "bler rose at sinr {sinr}, mcs {mcs}");
                    if interior(b) || interior(last) {
                        assert!(b < last, "bler flat at sinr {sinr}, mcs {mcs}");
                    }
                    last = b;
                    sinr += 1.0;
                }
            }
            let mut sinr = -20.0;
            while sinr <= 40.0 {
                for mcs in 1..=table.max_mcs() {
                    let lo = bler(sinr, mcs - 1, table);
                    let hi = bler(sinr, mcs, table);
                    assert!(hi >= lo, "bler fell with mcs at sinr {sinr}, mcs {mcs}");
                    if interior(lo) && interior(hi) {
                        assert!(hi > lo, "bler flat in mcs at sinr {sinr}, mcs {mcs}");
                    }
                }
                sinr += 1.0;
            }
        }
    }

    #[test]
    fn link_adapt_floors_and_saturates() {
        assert_eq!(link_adapt(-30.0, McsTable::Qam256, 0.1), 0);
        assert_eq!(
            link_adapt(60.0, McsTable::Qam256, 0.1),
            McsTable::Qam256.max_mcs()
        );
        assert_eq!(
            link_adapt(60.0, McsTable::Qam64, 0.1),
            McsTable::Qam64.max_mcs()
        );
    }

    #[test]
    fn link_adapt_matches_exhaustive_scan_and_is_monotone() {
        for table in [McsTable::Qam64, McsTable::Qam256] {
            let mut last = 0;
            let mut sinr = -15.0;
            while sinr <= 45.0 {
                let chosen = link_adapt(sinr, table, 0.1);
                let oracle = (0..=table.max_mcs())
                    .filter(|&m| bler(sinr, m, table) <= 0.1)
                    .max()
                    .unwrap_or(0);
                assert_eq!(chosen, oracle, "scan mismatch at sinr {sinr}");
                assert!(chosen >= last, "link_adapt not monotone at sinr {sinr}");
                last = chosen;
                sinr += 0.25;
            }
        }
    }

    #[test]
    fn chosen_mcs_meets_target_bler_when_any_qualifies() {
        let table = McsTable::Qam256;
        let mut sinr = -2.0;
        while sinr <= 45.0 {
            let mcs = link_adapt(sinr, table, 0.1);
            if mcs > 0 {
                assert!(bler(sinr, mcs, table) <= 0.1);
            }
            sinr += 0.5;
        }
    }

    #[test]
    fn thresholds_are_strictly_increasing_despite_se_dip() {
        for table in [McsTable::Qam64, McsTable::Qam256] {
            for mcs in 1..=table.max_mcs() {
                assert!(
                    table.threshold_db(mcs) > table.threshold_db(mcs - 1),
                    "threshold inversion at mcs {mcs}"
                );
            }
        }
        // The dip that motivates monotonization.
        assert!(McsTable::Qam64.se(17) < McsTable::Qam64.se(16));
    }

    #[test]
    fn csv_export_lists_every_index() {
        let csv = McsTable::Qam256.to_csv();
        assert_eq!(csv.lines().count(), 29); // header + 28 rows
        assert!(csv.starts_with("mcs,se_bits_per_hz,threshold_db\n"));
        assert!(csv.lines().last().unwrap().starts_with("27,7.4063,"));
    }
}
