//! SSB/CSI-RS beam sets: sector layout, pattern gain and two-stage selection.
//!
//! A [`BeamSet`] models a sectorized antenna: a row of wide SSB beams, each
//! subdivided into narrower CSI-RS refinements that add a small peak-gain
//! bonus. Selection is hierarchical like the real procedure — pick the best
//! SSB first, then the best refinement inside it — so a bearing sweep shows
//! frequent refinement switches long before any SSB switch.

use serde::{Deserialize, Serialize};

use super::RadioError;

/// One wide sweep beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsbBeam {
    /// Boresight azimuth relative to the mount, degrees.
    pub azimuth_deg: f64,
    /// 3 dB beamwidth, degrees.
    pub beamwidth_deg: f64,
    /// Peak gain, dBi.
    pub gain_dbi: f64,
}

/// A sector of SSB beams with per-beam CSI-RS refinements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSet {
    /// SSB beams in ascending, uniformly spaced azimuth order.
    pub beams: Vec<SsbBeam>,
    /// Refinements per SSB beam, evenly tiling its azimuth cell.
    pub csirs_per_ssb: usize,
    /// Extra peak gain of a refinement over its parent SSB beam, dB.
    pub csirs_gain_bonus_db: f64,
    /// Refinement beamwidth as a fraction of the parent beamwidth.
    pub csirs_beamwidth_scale: f64,
    /// Pattern floor: attenuation is capped at this many dB below peak.
    pub max_attenuation_db: f64,
}

impl BeamSet {
    /// Default customer-premises-style set: eight 20-degree SSB beams over a
    /// 120-degree sector, four refinements each with a +2 dB bonus.
    pub fn cpe_default() -> Self {
        let beams = (0..8)
            .map(|k| SsbBeam {
                azimuth_deg: -52.5 + 15.0 * f64::from(k),
                beamwidth_deg: 20.0,
                gain_dbi: 8.0,
            })
            .collect();
        BeamSet {
            beams,
            csirs_per_ssb: 4,
            csirs_gain_bonus_db: 2.0,
            csirs_beamwidth_scale: 0.5,
            max_attenuation_db: 45.0,
        }
    }

    /// Checks structural soundness: ordered uniform azimuths, positive widths
    /// and gains, and SSB spacing no wider than the beams (no coverage gaps).
    pub fn validate(&self) -> Result<(), RadioError> {
        let fail = |reason: &str| {
            Err(RadioError::InvalidBeamSet {
                reason: reason.to_string(),
            })
        };
        if self.beams.is_empty() {
            return fail("beam set has no SSB beams");
        }
        if self.csirs_per_ssb == 0 {
            return fail("csirs_per_ssb must be at least 1");
        }
        if !(self.csirs_beamwidth_scale > 0.0 && self.csirs_beamwidth_scale <= 1.0) {
            return fail("csirs_beamwidth_scale must lie in (0, 1]");
        }
        if self.max_attenuation_db <= 0.0 {
            return fail("max_attenuation_db must be positive");
        }
        for b in &self.beams {
            if b.beamwidth_deg <= 0.0 {
                return fail("beamwidth_deg must be positive");
            }
            if b.gain_dbi <= 0.0 {
                return fail("gain_dbi must be positive");
            }
        }
        if self.beams.len() > 1 {
            let spacing = self.beams[1].azimuth_deg - self.beams[0].azimuth_deg;
            if spacing <= 0.0 {
                return fail("SSB azimuths must be strictly ascending");
            }
            for w in self.beams.windows(2) {
                let s = w[1].azimuth_deg - w[0].azimuth_deg;
                if (s - spacing).abs() > 1e-9 {
                    return fail("SSB azimuths must be uniformly spaced");
                }
                if s > w[0].beamwidth_deg.min(w[1].beamwidth_deg) {
                    return fail("SSB spacing exceeds beamwidth, leaving coverage gaps");
                }
            }
        }
        Ok(())
    }

    /// Azimuth pitch between adjacent SSB beams (cell width), degrees.
    pub fn ssb_spacing_deg(&self) -> f64 {
        if self.beams.len() > 1 {
            self.beams[1].azimuth_deg - self.beams[0].azimuth_deg
        } else {
            self.beams[0].beamwidth_deg
        }
    }

    /// Boresight azimuth of refinement `csirs` under SSB beam `ssb`, degrees.
    pub fn csirs_azimuth_deg(&self, ssb: usize, csirs: usize) -> f64 {
        let pitch = self.ssb_spacing_deg() / self.csirs_per_ssb as f64;
        let centered = csirs as f64 - (self.csirs_per_ssb as f64 - 1.0) / 2.0;
        self.beams[ssb].azimuth_deg + pitch * centered
    }

    /// Pattern gain of SSB beam `ssb` toward `bearing_deg`, dBi.
    pub fn ssb_gain_db(&self, ssb: usize, bearing_deg: f64) -> f64 {
        let b = &self.beams[ssb];
        b.gain_dbi - self.rolloff(bearing_deg - b.azimuth_deg, b.beamwidth_deg)
    }

    /// Pattern gain of refinement (`ssb`, `csirs`) toward `bearing_deg`, dBi.
    pub fn csirs_gain_db(&self, ssb: usize, csirs: usize, bearing_deg: f64) -> f64 {
        let b = &self.beams[ssb];
        let off = bearing_deg - self.csirs_azimuth_deg(ssb, csirs);
        b.gain_dbi + self.csirs_gain_bonus_db
            - self.rolloff(off, b.beamwidth_deg * self.csirs_beamwidth_scale)
    }

    /// Net antenna gain with the selected beam pair applied.
    pub fn gain_db(&self, ssb: usize, csirs: usize, bearing_deg: f64) -> f64 {
        self.csirs_gain_db(ssb, csirs, bearing_deg)
    }

    /// Best achievable gain (a refinement observed exactly on boresight), dBi.
    pub fn peak_gain_db(&self) -> f64 {
        self.beams
            .iter()
            .map(|b| b.gain_dbi)
            .fold(f64::NEG_INFINITY, f64::max)
            + self.csirs_gain_bonus_db
    }

    /// Number of jitter samples [`select_beam`] consumes per invocation.
    pub fn jitter_len(&self) -> usize {
        self.beams.len() * (1 + self.csirs_per_ssb)
    }

    fn rolloff(&self, offset_deg: f64, beamwidth_deg: f64) -> f64 {
        let d = wrap_deg(offset_deg) / beamwidth_deg;
        (12.0 * d * d).min(self.max_attenuation_db)
    }
}

/// Normalizes an angle into (-180, 180] degrees.
pub fn wrap_deg(angle_deg: f64) -> f64 {
    let mut a = angle_deg % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

/// Two-stage beam selection toward `bearing_deg`.
///
/// `channel_jitter` perturbs the per-beam measurement scores: the first
/// `beams.len()` entries apply to the SSB stage, the rest (one per refinement,
/// grouped by SSB) to the CSI-RS stage. Pass an empty slice for an ideal
/// noiseless sweep. Ties resolve to the lowest index, so equal-seed runs
/// select identically.
pub fn select_beam(beams: &BeamSet, bearing_deg: f64, channel_jitter: &[f64]) -> (usize, usize) {
    debug_assert!(
        channel_jitter.is_empty() || channel_jitter.len() == beams.jitter_len(),
        "jitter slice must be empty or cover every beam"
    );
    let jitter = |idx: usize| channel_jitter.get(idx).copied().unwrap_or(0.0);

    let mut best_ssb = 0;
    let mut best_score = f64::NEG_INFINITY;
    for i in 0..beams.beams.len() {
        let score = beams.ssb_gain_db(i, bearing_deg) + jitter(i);
        if score > best_score {
            best_score = score;
            best_ssb = i;
        }
    }

    let base = beams.beams.len() + best_ssb * beams.csirs_per_ssb;
    let mut best_csirs = 0;
    let mut best_score = f64::NEG_INFINITY;
    for j in 0..beams.csirs_per_ssb {
        let score = beams.csirs_gain_db(best_ssb, j, bearing_deg) + jitter(base + j);
        if score > best_score {
            best_score = score;
            best_csirs = j;
        }
    }
    (best_ssb, best_csirs)
}
