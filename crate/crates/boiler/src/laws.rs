//! Discrete-time physics of the boiler and the controller decision function.
//!
//! Every function works in whole litres and seconds with a time step of one tick.

use std::fmt;

use thiserror::Error;

use crate::params::{BoilerParams, NPUMPS};

/// Order sent from the controller to the pumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PumpOrder {
    On,
    Off,
    Keep,
}

impl PumpOrder {
    pub const ALL: [PumpOrder; 3] = [PumpOrder::On, PumpOrder::Off, PumpOrder::Keep];

    /// Integer encoding used in the emitted model (`ON = 0`, `OFF = 1`, `KEEP = 2`).
    pub fn code(self) -> i64 {
        match self {
            PumpOrder::On => 0,
            PumpOrder::Off => 1,
            PumpOrder::Keep => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PumpOrder::On => "ON",
            PumpOrder::Off => "OFF",
            PumpOrder::Keep => "KEEP",
        }
    }

    /// The pump action that carries out this order.
    pub fn action(self) -> &'static str {
        match self {
            PumpOrder::On => "pumpOn",
            PumpOrder::Off => "pumpOff",
            PumpOrder::Keep => "keep",
        }
    }
}

impl fmt::Display for PumpOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Physical state of the boiler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoilerState {
    /// Water quantity.
    pub q: i64,
    /// Steam rate.
    pub v: i64,
    /// Pump throughput.
    pub p: i64,
    /// Pump-delay queue; bit `k` set means one more pump delivers after `k` further ticks.
    pub t: i64,
    /// Whether the previous order was ON (implicit-time model only).
    pub lastpo: bool,
}

impl BoilerState {
    pub fn initial(params: &BoilerParams) -> BoilerState {
        BoilerState {
            q: params.initq,
            v: params.w,
            p: 0,
            t: 0,
            lastpo: false,
        }
    }

    /// Whether the state respects `0 <= q <= C`, `0 <= v <= W` and `0 <= p <= NPUMPS*P`.
    pub fn within_bounds(&self, params: &BoilerParams) -> bool {
        (0..=params.c).contains(&self.q)
            && (0..=params.w).contains(&self.v)
            && (0..=params.max_throughput()).contains(&self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("a pump was already switched on in this tick (t = {t})")]
    PumpCollision { t: i64 },
    #[error("pump throughput {p} cannot be lowered further")]
    PumpAlreadyOff { p: i64 },
    #[error("no decision rule applies to q={q} v={v} p={p} lastpo={lastpo}")]
    Undecided { q: i64, v: i64, p: i64, lastpo: bool },
}

/// Water after one second: `q + (p - v)` clamped to `[0, C]`.
pub fn water_update(q: i64, p: i64, v: i64, params: &BoilerParams) -> i64 {
    (q + (p - v)).clamp(0, params.c)
}

/// Steam rate after one second, kept within `[VMINOUT, W]`.
///
/// Minimal outside `(N1, N2)`, maximal inside `[B1, B2]`. In the two
/// transition bands the rate rises by `U1` when the level moves towards the
/// best band and falls by `U2` when it moves away; it is held when the level
/// is steady.
pub fn steam_rate_update(q: i64, v: i64, p: i64, params: &BoilerParams) -> i64 {
    let s = params;
    let next = if q >= s.n2 || q <= s.n1 {
        s.vminout
    } else if s.b1 <= q && q <= s.b2 {
        s.w
    } else {
        let below = q < s.b1;
        match (p - v).signum() {
            0 => v,
            1 if below => v + s.u1,
            -1 if !below => v + s.u1,
            _ => v - s.u2,
        }
    };
    next.clamp(s.vminout, s.w)
}

/// Registers a pump start: sets the top bit of the delay queue.
pub fn pump_on(t: i64, params: &BoilerParams) -> Result<i64, LawError> {
    let bit = params.pump_bit();
    if t & bit != 0 {
        return Err(LawError::PumpCollision { t });
    }
    Ok(t + bit)
}

/// Advances the delay queue by one tick. The lowest bit is the current
/// tick; when set, one pump starts delivering. Throughput saturates at
/// `NPUMPS * P`.
pub fn pump_delay_step(t: i64, p: i64, params: &BoilerParams) -> (i64, i64) {
    let p = if t % 2 == 1 {
        (p + params.p).min(params.max_throughput())
    } else {
        p
    };
    (t / 2, p)
}

/// One tick of the explicit-time boiler; every component is computed from the source state.
pub fn tick(s: BoilerState, params: &BoilerParams) -> BoilerState {
    let (t, p) = pump_delay_step(s.t, s.p, params);
    BoilerState {
        q: water_update(s.q, s.p, s.v, params),
        v: steam_rate_update(s.q, s.v, s.p, params),
        p,
        t,
        lastpo: s.lastpo,
    }
}

/// Applies a pump order in the explicit-time model: OFF lowers the
/// throughput at once, ON queues a start, KEEP does nothing.
pub fn apply_order(s: BoilerState, order: PumpOrder, params: &BoilerParams) -> Result<BoilerState, LawError> {
    let mut next = s;
    match order {
        PumpOrder::On => next.t = pump_on(s.t, params)?,
        PumpOrder::Off => {
            if s.p < params.p {
                return Err(LawError::PumpAlreadyOff { p: s.p });
            }
            next.p -= params.p;
        }
        PumpOrder::Keep => {}
    }
    Ok(next)
}

/// Result of one implicit-time pump update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImplicitPump {
    /// Throughput recorded at the next sample point.
    pub next_sample: i64,
    /// Throughput one second after the order.
    pub immediate: i64,
    /// Whether the order just applied was ON.
    pub lastpo: bool,
}

/// Pump throughput in the implicit-time model, driven by the previous and the current order.
///
/// | lastpo | order | next sample | immediate |
/// |--------|-------|-------------|-----------|
/// | true   | ON    | p + P       | p         |
/// | true   | KEEP  | p + P       | p         |
/// | true   | OFF   | p           | p         |
/// | false  | ON    | p           | p         |
/// | false  | KEEP  | p           | p         |
/// | false  | OFF   | p - P       | p - P     |
pub fn implicit_pump_update(
    p: i64,
    lastpo: bool,
    order: PumpOrder,
    params: &BoilerParams,
) -> Result<ImplicitPump, LawError> {
    let (next_sample, immediate) = match (lastpo, order) {
        (true, PumpOrder::On | PumpOrder::Keep) => (p + params.p, p),
        (true, PumpOrder::Off) | (false, PumpOrder::On | PumpOrder::Keep) => (p, p),
        (false, PumpOrder::Off) => {
            if p < params.p {
                return Err(LawError::PumpAlreadyOff { p });
            }
            (p - params.p, p - params.p)
        }
    };
    Ok(ImplicitPump {
        next_sample,
        immediate,
        lastpo: order == PumpOrder::On,
    })
}

/// Throughput a sensor observes in the implicit-time model: the stored
/// value lags one interval behind a pending start.
pub fn implicit_observed_throughput(s: &BoilerState, params: &BoilerParams) -> i64 {
    s.p + if s.lastpo { params.p } else { 0 }
}

/// One sample interval of the explicit-time model: the order, then `INTERVAL` ticks.
pub fn explicit_interval(
    s: BoilerState,
    order: PumpOrder,
    params: &BoilerParams,
) -> Result<BoilerState, LawError> {
    let mut s = apply_order(s, order, params)?;
    for _ in 0..params.interval {
        s = tick(s, params);
    }
    s.lastpo = order == PumpOrder::On;
    Ok(s)
}

/// One sample interval of the implicit-time model: the pump update, then
/// `INTERVAL` seconds of water and steam evolution at the resulting throughput.
pub fn implicit_interval(
    s: BoilerState,
    order: PumpOrder,
    params: &BoilerParams,
) -> Result<BoilerState, LawError> {
    let pump = implicit_pump_update(s.p, s.lastpo, order, params)?;
    let flow = pump.next_sample;
    let (mut q, mut v) = (s.q, s.v);
    for _ in 0..params.interval {
        (q, v) = (
            water_update(q, flow, v, params),
            steam_rate_update(q, v, flow, params),
        );
    }
    Ok(BoilerState {
        q,
        v,
        p: flow,
        t: 0,
        lastpo: pump.lastpo,
    })
}

/// One guarded case of the controller decision.
#[derive(Clone, Copy)]
pub struct DecisionRule {
    pub guard: &'static str,
    pub order: PumpOrder,
    pub applies: fn(&BoilerParams, i64, i64, i64, bool) -> bool,
}

impl fmt::Debug for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.guard, self.order)
    }
}

fn low(s: &BoilerParams, q: i64) -> bool {
    q < s.b1 + s.ftrd
}

fn high(s: &BoilerParams, q: i64) -> bool {
    q > s.b2 - s.ftru
}

/// The seven cases of the controller decision, in listing order.
pub const DECISION_RULES: [DecisionRule; 7] = [
    DecisionRule {
        guard: "q < B1+FTRD && p <= 3*P",
        order: PumpOrder::On,
        applies: |s, q, _, p, _| low(s, q) && p <= (NPUMPS - 2) * s.p,
    },
    DecisionRule {
        guard: "q < B1+FTRD && p == 4*P && lastpo == False",
        order: PumpOrder::On,
        applies: |s, q, _, p, lastpo| low(s, q) && p == (NPUMPS - 1) * s.p && !lastpo,
    },
    DecisionRule {
        guard: "q < B1+FTRD && p == 4*P && lastpo == True",
        order: PumpOrder::Keep,
        applies: |s, q, _, p, lastpo| low(s, q) && p == (NPUMPS - 1) * s.p && lastpo,
    },
    DecisionRule {
        guard: "q < B1+FTRD && p == 5*P",
        order: PumpOrder::Keep,
        applies: |s, q, _, p, _| low(s, q) && p == NPUMPS * s.p,
    },
    DecisionRule {
        guard: "q > B2-FTRU && p-v >= 0 && p > 0",
        order: PumpOrder::Off,
        applies: |s, q, v, p, _| high(s, q) && p - v >= 0 && p > 0,
    },
    DecisionRule {
        guard: "q > B2-FTRU && (p == 0 || p-v < 0)",
        order: PumpOrder::Keep,
        applies: |s, q, v, p, _| high(s, q) && (p == 0 || p - v < 0),
    },
    DecisionRule {
        guard: "B1+FTRD <= q && q <= B2-FTRU",
        order: PumpOrder::Keep,
        applies: |s, q, _, _, _| !low(s, q) && !high(s, q),
    },
];

/// Indices of the rules whose guard holds.
pub fn matching_rules(q: i64, v: i64, p: i64, lastpo: bool, params: &BoilerParams) -> Vec<usize> {
    DECISION_RULES
        .iter()
        .enumerate()
        .filter(|(_, r)| (r.applies)(params, q, v, p, lastpo))
        .map(|(i, _)| i)
        .collect()
}

/// The order the controller sends after observing `q`, `v` and `p`.
pub fn controller_decide(
    q: i64,
    v: i64,
    p: i64,
    lastpo: bool,
    params: &BoilerParams,
) -> Result<PumpOrder, LawError> {
    DECISION_RULES
        .iter()
        .find(|r| (r.applies)(params, q, v, p, lastpo))
        .map(|r| r.order)
        .ok_or(LawError::Undecided { q, v, p, lastpo })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> BoilerParams {
        BoilerParams::reference()
    }

    #[test]
    fn water_follows_net_flow() {
        let s = params().with("C", 200).unwrap();
        assert_eq!(water_update(100, 3, 5, &s), 98);
        assert_eq!(water_update(50, 4, 4, &s), 50);
        assert_eq!(water_update(1, 0, 3, &s), 0);
    }

    #[test]
    fn steam_extremes() {
        let s = params();
        assert_eq!(steam_rate_update((s.b1 + s.b2) / 2, s.vminout, 0, &s), s.w);
        assert_eq!(steam_rate_update(s.n2, s.w, 0, &s), s.vminout);
        assert_eq!(steam_rate_update(s.n1, s.w, 5, &s), s.vminout);
    }

    #[test]
    fn steam_bands() {
        let s = params();
        let low_band = s.b1 - 1;
        let high_band = s.b2 + 1;
        assert_eq!(steam_rate_update(low_band, 1, 3, &s), (1 + s.u1).min(s.w));
        assert_eq!(steam_rate_update(low_band, 4, 1, &s), 4 - s.u2);
        assert_eq!(steam_rate_update(high_band, 4, 0, &s), s.w);
        assert_eq!(steam_rate_update(high_band, 4, 5, &s), 4 - s.u2);
        assert_eq!(steam_rate_update(high_band, 2, 2, &s), 2);
    }

    #[test]
    fn queued_start_lands_after_interval() {
        let s = params();
        let (mut t, mut p) = (pump_on(0, &s).unwrap(), 0);
        let mut seen = vec![t];
        for _ in 0..s.interval {
            (t, p) = pump_delay_step(t, p, &s);
            seen.push(t);
        }
        assert_eq!(seen, [16, 8, 4, 2, 1, 0]);
        assert_eq!(p, s.p);
        assert_eq!(pump_delay_step(0, 3, &s), (0, 3));
    }

    #[test]
    fn bit_pattern_00101_increments_now_and_two_ticks_later() {
        let s = params();
        let (mut t, mut p) = (5, 0);
        let mut increments = Vec::new();
        for k in 0..5 {
            let before = p;
            (t, p) = pump_delay_step(t, p, &s);
            if p > before {
                increments.push(k);
            }
        }
        assert_eq!(increments, [0, 2]);
    }

    #[test]
    fn second_start_in_one_tick_collides() {
        let s = params();
        let t = pump_on(0, &s).unwrap();
        assert_eq!(pump_on(t, &s), Err(LawError::PumpCollision { t: 16 }));
    }

    #[test]
    fn implicit_table() {
        let s = params();
        let on = implicit_pump_update(2, true, PumpOrder::On, &s).unwrap();
        assert_eq!((on.next_sample, on.lastpo), (3, true));
        let off = implicit_pump_update(2, false, PumpOrder::Off, &s).unwrap();
        assert_eq!((off.next_sample, off.immediate), (1, 1));
        let keep = implicit_pump_update(2, false, PumpOrder::Keep, &s).unwrap();
        assert_eq!((keep.next_sample, keep.immediate, keep.lastpo), (2, 2, false));
        let cancel = implicit_pump_update(2, true, PumpOrder::Off, &s).unwrap();
        assert_eq!(cancel.next_sample, 2);
        assert!(implicit_pump_update(0, false, PumpOrder::Off, &s).is_err());
    }

    #[test]
    fn decision_examples() {
        let s = params();
        let lo = s.b1 + s.ftrd - 1;
        assert_eq!(controller_decide(lo, 4, 3 * s.p, false, &s), Ok(PumpOrder::On));
        assert_eq!(controller_decide(lo, 4, 4 * s.p, true, &s), Ok(PumpOrder::Keep));
        assert_eq!(controller_decide(s.b1 + s.ftrd, 4, 0, false, &s), Ok(PumpOrder::Keep));
        let hi = s.b2 - s.ftru + 1;
        assert_eq!(controller_decide(hi, 1, 2, false, &s), Ok(PumpOrder::Off));
        assert_eq!(controller_decide(hi, 4, 2, false, &s), Ok(PumpOrder::Keep));
    }
}
