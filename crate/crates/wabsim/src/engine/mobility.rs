//! Piecewise-linear mobility traces: sampling, heading, and sanity checks.

use super::{InvalidScenario, Point, Trace};

impl Trace {
    /// Time of the first waypoint. Panics on an empty trace.
    pub fn start_s(&self) -> f64 {
        self.waypoints.first().expect("trace has waypoints").t_s()
    }

    /// Time of the last waypoint. Panics on an empty trace.
    pub fn end_s(&self) -> f64 {
        self.waypoints.last().expect("trace has waypoints").t_s()
    }

    /// Index of the segment containing `t_s` (clamped to the trace ends).
    fn segment_at(&self, t_s: f64) -> usize {
        let idx = self.waypoints.partition_point(|w| w.t_s() <= t_s);
        idx.saturating_sub(1).min(self.waypoints.len().saturating_sub(2))
    }

    /// Position at `t_s`, linearly interpolated and clamped to the trace ends.
    pub fn position_at(&self, t_s: f64) -> Point {
        let w = &self.waypoints;
        assert!(!w.is_empty(), "trace has waypoints");
        if w.len() == 1 || t_s <= w[0].t_s() {
            return w[0].pos();
        }
        if t_s >= w[w.len() - 1].t_s() {
            return w[w.len() - 1].pos();
        }
        let i = self.segment_at(t_s);
        let (a, b) = (&w[i], &w[i + 1]);
        let dt = b.t_s() - a.t_s();
        let f = if dt > 0.0 { (t_s - a.t_s()) / dt } else { 0.0 };
        let [ax, ay] = a.pos();
        let [bx, by] = b.pos();
        [ax + f * (bx - ax), ay + f * (by - ay)]
    }

    /// Direction of travel at `t_s` in degrees, east = 0, counterclockwise.
    ///
    /// On a stationary segment the most recent motion wins (a parked vehicle
    /// keeps facing where it was going); a trace that never moves heads east.
    pub fn heading_at(&self, t_s: f64) -> f64 {
        let w = &self.waypoints;
        if w.len() < 2 {
            return 0.0;
        }
        let dir = |i: usize| -> Option<f64> {
            let [ax, ay] = w[i].pos();
            let [bx, by] = w[i + 1].pos();
            let (dx, dy) = (bx - ax, by - ay);
            if dx.hypot(dy) > 1e-9 {
                Some(dy.atan2(dx).to_degrees())
            } else {
                None
            }
        };
        let i = self.segment_at(t_s);
        if let Some(h) = dir(i) {
            return h;
        }
        for j in (0..i).rev() {
            if let Some(h) = dir(j) {
                return h;
            }
        }
        for j in i + 1..w.len() - 1 {
            if let Some(h) = dir(j) {
                return h;
            }
        }
        0.0
    }

    /// Structural problems with this trace.
    pub(crate) fn check(&self) -> Vec<InvalidScenario> {
        let mut errs = Vec::new();
        if self.waypoints.is_empty() {
            errs.push(InvalidScenario::EmptyTrace {
                node: self.node.clone(),
            });
            return errs;
        }
        for i in 1..self.waypoints.len() {
            let (prev, cur) = (self.waypoints[i - 1].t_s(), self.waypoints[i].t_s());
            if cur <= prev || cur.is_nan() || prev.is_nan() {
                errs.push(InvalidScenario::TraceNotTimeOrdered {
                    node: self.node.clone(),
                    index: i,
                });
            }
        }
        if !errs.is_empty() {
            return errs; // segment speeds are undefined without a time order
        }
        for i in 0..self.waypoints.len() - 1 {
            let (a, b) = (&self.waypoints[i], &self.waypoints[i + 1]);
            let [ax, ay] = a.pos();
            let [bx, by] = b.pos();
            let speed = (bx - ax).hypot(by - ay) / (b.t_s() - a.t_s());
            if speed > self.max_speed_mps + 1e-9 {
                errs.push(InvalidScenario::TraceTooFast {
                    node: self.node.clone(),
                    segment: i,
                    speed_mps: speed,
                    limit_mps: self.max_speed_mps,
                });
            }
        }
        errs
    }
}
