//! FSP source generation for the boiler system.

use std::fmt::Write;

use thiserror::Error;

use crate::laws::{PumpOrder, DECISION_RULES};
use crate::params::{BoilerParams, ParamsError, NPUMPS};

/// How time is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// A `TIMER` process emits one `tick` per second and every timed component synchronises on it.
    Explicit,
    /// No timer: each sample interval is folded into the boiler's state update.
    Implicit,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Explicit, Mode::Implicit];

    /// Conventional output file name.
    pub fn file_name(self) -> &'static str {
        match self {
            Mode::Explicit => "boiler_explicit.fsp",
            Mode::Implicit => "boiler_implicit.fsp",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Explicit => "explicit",
            Mode::Implicit => "implicit",
        }
    }
}

/// Deliberate controller defects used to test that the checker notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mutation {
    #[default]
    None,
    /// The OFF branch is removed; above the upper threshold the controller always keeps.
    NoOff,
    /// Every decision is KEEP.
    AlwaysKeep,
}

/// Which progress declarations to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ProgressVariant {
    /// Only actions the model performs.
    #[default]
    Faithful,
    /// Also the rescue-mode and boiling-out actions, which no process performs.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmitOptions {
    pub mode: Mode,
    pub mutation: Mutation,
    pub progress: ProgressVariant,
}

impl EmitOptions {
    pub fn new(mode: Mode) -> EmitOptions {
        EmitOptions {
            mode,
            mutation: Mutation::None,
            progress: ProgressVariant::Faithful,
        }
    }

    pub fn mutation(mut self, mutation: Mutation) -> EmitOptions {
        self.mutation = mutation;
        self
    }

    pub fn progress(mut self, progress: ProgressVariant) -> EmitOptions {
        self.progress = progress;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Emits the complete model for `mode` with the faithful progress sets.
pub fn emit_fsp(params: &BoilerParams, mode: Mode) -> Result<String, EmitError> {
    emit_with(params, &EmitOptions::new(mode))
}

pub fn emit_with(params: &BoilerParams, opts: &EmitOptions) -> Result<String, EmitError> {
    let params = params.validated()?;
    let mut e = Emitter {
        out: String::new(),
        params,
        opts: *opts,
    };
    e.header();
    e.constants();
    e.sets();
    if opts.mode == Mode::Explicit {
        e.line("TIMER = (tick -> TIMER).");
        e.blank();
    }
    e.steam_boiler();
    e.sensors();
    e.channels();
    e.pump_controller();
    e.control_system();
    e.system_design();
    e.properties();
    e.progress();
    e.check_systems();
    Ok(e.out)
}

/// Component names of `SYSTEMDESIGN` for `mode`, in composition order.
pub fn system_components(mode: Mode) -> Vec<&'static str> {
    let mut names = vec![
        "STEAMBOILER",
        "CONTROLSYSTEM",
        "PUMPCONTROLLER",
        "WATERSENSOR",
        "STEAMSENSOR",
        "PUMPSENSOR",
    ];
    if mode == Mode::Explicit {
        names.push("TIMER");
    }
    names.extend(CHANNELS.iter().map(|c| c.process));
    names
}

struct Channel {
    process: &'static str,
    label: &'static str,
    domain: &'static str,
}

const CHANNELS: [Channel; 4] = [
    Channel {
        process: "WATERCHAN",
        label: "waterchan",
        domain: "Q",
    },
    Channel {
        process: "STEAMCHAN",
        label: "steamchan",
        domain: "V",
    },
    Channel {
        process: "PUMPSENSORCHAN",
        label: "pumpsensorchan",
        domain: "PUMPQ",
    },
    Channel {
        process: "PUMPCONTROLLERCHAN",
        label: "pumpcontrollerchan",
        domain: "PUMPORDER",
    },
];

/// Clamped successor expressions shared by both time models.
const WATER_NEXT: &str = "if q+p-v < 0 then 0 else if q+p-v > C then C else q+p-v";
const STEAM_UP: &str = "if v+U1 > W then W else v+U1";
const STEAM_DOWN: &str = "if v-U2 < VMINOUT then VMINOUT else v-U2";

/// Every reading a sensor may take belongs to the boiler, even values the physics never reaches.
const SENSED: &str = "    + {getWaterQuantity[Q], getSteamRate[V], getPumpRate[PUMPQ]}.";

struct Emitter {
    out: String,
    params: BoilerParams,
    opts: EmitOptions,
}

impl Emitter {
    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn blank(&mut self) {
        self.out.push('\n');
    }

    fn explicit(&self) -> bool {
        self.opts.mode == Mode::Explicit
    }

    /// `tick -> ... -> ` repeated once per second of the sample interval.
    /// Empty in the implicit model.
    fn ticks(&self) -> String {
        if !self.explicit() {
            return String::new();
        }
        "tick -> ".repeat(self.params.interval as usize)
    }

    fn header(&mut self) {
        let what = match self.opts.mode {
            Mode::Explicit => "explicit-timer model",
            Mode::Implicit => "implicit-timer model",
        };
        self.line(&format!("// Steam boiler control system, {what}."));
        self.line("// Generated from the boiler constants; regenerate instead of editing.");
        match self.opts.mutation {
            Mutation::None => {}
            Mutation::NoOff => self.line("// Mutated controller: never switches a pump off."),
            Mutation::AlwaysKeep => self.line("// Mutated controller: always keeps the pumps as they are."),
        }
        self.blank();
    }

    fn constants(&mut self) {
        let entries: Vec<(&str, i64)> = self.params.entries().collect();
        for (k, v) in entries {
            self.line(&format!("const {k} = {v}"));
        }
        self.line(&format!("const NPUMPS = {NPUMPS}"));
        if self.explicit() {
            self.line(&format!("const PUMPBIT = {}", self.params.pump_bit()));
        }
        for order in PumpOrder::ALL {
            self.line(&format!("const {} = {}", order.name(), order.code()));
        }
        self.line("const False = 0");
        self.line("const True = 1");
        self.blank();
        self.line("range Q = 0..C");
        self.line("range V = 0..W");
        self.line("range PUMPQ = 0..NPUMPS*P");
        if self.explicit() {
            self.line("range PUMPMAXDELAY = 0..2*PUMPBIT-1");
        }
        self.line("range PUMPORDER = ON..KEEP");
        self.line("range BOOL = False..True");
        self.blank();
    }

    fn sets(&mut self) {
        let tick = if self.explicit() { "tick, " } else { "" };
        if self.explicit() {
            self.line("set Timer = {tick}");
        }
        self.line(&format!("set PumpSensor = {{{tick}getPumpRate, pumpsensorchan}}"));
        self.line(&format!("set SteamSensor = {{{tick}getSteamRate, steamchan}}"));
        self.line(&format!("set WaterSensor = {{{tick}getWaterQuantity, waterchan}}"));
        self.line("set Pump = {pumpOn, pumpOff, keep, pumpcontrollerchan}");
        self.line(&format!(
            "set SteamBoiler = {{{tick}getPumpRate, getSteamRate, getWaterQuantity, pumpOn, pumpOff, keep}}"
        ));
        self.line("set Controller = {makedecision, waterchan, pumpsensorchan, steamchan, pumpcontrollerchan}");
        self.blank();
    }

    /// The guarded `boiling` branches applying one second of physics; `next`
    /// renders the target given the new water and steam expressions.
    fn physics(&mut self, indent: &str, next: &dyn Fn(&str) -> String) {
        let bands = "(N1 < q && q < B1) || (B2 < q && q < N2)";
        let cases = [
            ("q >= N2 || q <= N1".to_string(), "VMINOUT".to_string()),
            ("B1 <= q && q <= B2".to_string(), "W".to_string()),
            (
                "(N1 < q && q < B1 && p-v > 0) || (B2 < q && q < N2 && p-v < 0)".to_string(),
                STEAM_UP.to_string(),
            ),
            (
                "(N1 < q && q < B1 && p-v < 0) || (B2 < q && q < N2 && p-v > 0)".to_string(),
                STEAM_DOWN.to_string(),
            ),
            (format!("({bands}) && p == v"), "v".to_string()),
        ];
        for (i, (guard, steam)) in cases.iter().enumerate() {
            let bar = if i == 0 { "  " } else { "| " };
            let target = next(steam);
            self.line(&format!("{indent}{bar}when ({guard})"));
            self.line(&format!("{indent}      boiling -> {target}"));
        }
    }

    fn steam_boiler(&mut self) {
        if self.explicit() {
            self.line("STEAMBOILER = (start -> STEAMBOILERUN[INITQ][W][0][0]),");
            self.line("STEAMBOILERUN[q:Q][v:V][p:PUMPQ][t:PUMPMAXDELAY] = (");
            self.line("      getWaterQuantity[q] -> getSteamRate[v] -> getPumpRate[p] -> STEAMBOILERUN[q][v][p][t]");
            self.line("    | when (t < PUMPBIT) pumpOn -> STEAMBOILERUN[q][v][p][PUMPBIT+t]");
            self.line("    | when (p >= P) pumpOff -> STEAMBOILERUN[q][v][p-P][t]");
            self.line("    | keep -> STEAMBOILERUN[q][v][p][t]");
            self.line("    | tick -> (");
            self.physics("        ", &|steam| {
                format!("PUMPDELAY[{WATER_NEXT}][{steam}][p][t]")
            });
            self.out.pop();
            self.line(")),");
            self.line("PUMPDELAY[q:Q][v:V][p:PUMPQ][t:PUMPMAXDELAY] = (");
            self.line("      when (t % 2 == 1)");
            self.line("        pumpincrease -> STEAMBOILERUN[q][v][if p+P > NPUMPS*P then NPUMPS*P else p+P][t/2]");
            self.line("    | when (t % 2 == 0)");
            self.line("        pumpdelay -> STEAMBOILERUN[q][v][p][t/2])");
            self.line(SENSED);
        } else {
            self.line("STEAMBOILER = (start -> STEAMBOILERUN[INITQ][W][0][False]),");
            self.line("STEAMBOILERUN[q:Q][v:V][p:PUMPQ][lastpo:BOOL] = (");
            self.line("      getWaterQuantity[q] -> getSteamRate[v] -> getPumpRate[p+lastpo*P] -> PUMPWAIT[q][v][p][lastpo]),");
            self.line("PUMPWAIT[q:Q][v:V][p:PUMPQ][lastpo:BOOL] = (");
            self.line("      when (p+lastpo*P < NPUMPS*P) pumpOn -> EVOLVE[q][v][p+lastpo*P][True][0]");
            self.line("    | keep -> EVOLVE[q][v][p+lastpo*P][False][0]");
            self.line("    | when (lastpo == True || p >= P)");
            self.line("        pumpOff -> EVOLVE[q][v][if lastpo == True then p else p-P][False][0]),");
            self.line("EVOLVE[q:Q][v:V][p:PUMPQ][lastpo:BOOL][k:0..INTERVAL] =");
            self.line("    if k == INTERVAL then STEAMBOILERUN[q][v][p][lastpo]");
            self.line("    else (");
            self.physics("        ", &|steam| {
                format!("EVOLVE[{WATER_NEXT}][{steam}][p][lastpo][k+1]")
            });
            self.out.pop();
            self.line(")");
            self.line(SENSED);
        }
        self.blank();
    }

    fn sensors(&mut self) {
        let ticks = self.ticks();
        for (name, get, var, domain, chan) in [
            ("WATERSENSOR", "getWaterQuantity", "q", "Q", "waterchan"),
            ("STEAMSENSOR", "getSteamRate", "v", "V", "steamchan"),
            ("PUMPSENSOR", "getPumpRate", "p", "PUMPQ", "pumpsensorchan"),
        ] {
            self.line(&format!(
                "{name} = ({get}[{var}:{domain}] -> {chan}.send[{var}] -> {ticks}{name})."
            ));
        }
        self.blank();
    }

    fn channels(&mut self) {
        for c in &CHANNELS {
            self.line(&format!(
                "{} = ({}.send[x:{}] -> {}.receive[x] -> {}).",
                c.process, c.label, c.domain, c.label, c.process
            ));
        }
        self.blank();
    }

    fn pump_controller(&mut self) {
        let after = if self.explicit() {
            "PUMPTICK"
        } else {
            "PUMPCONTROLLER"
        };
        self.line("PUMPCONTROLLER = (pumpcontrollerchan.receive[o:PUMPORDER] ->");
        for (i, order) in [PumpOrder::On, PumpOrder::Off, PumpOrder::Keep].iter().enumerate() {
            let open = if i == 0 { "   (" } else { "    " };
            let close = if i == 2 { "))" } else { " |" };
            let guard = format!("o == {}", order.name());
            self.line(&format!(
                "{open}when ({guard}) {} -> {after}{close}",
                order.action()
            ));
        }
        if self.explicit() {
            self.out.pop();
            self.line(",");
            let ticks = self.ticks();
            self.line(&format!("PUMPTICK = ({ticks}PUMPCONTROLLER)."));
        } else {
            self.out.pop();
            self.line(".");
        }
        self.blank();
    }

    fn control_system(&mut self) {
        let explicit = self.explicit();
        let next = |lastpo: bool| {
            let v = if lastpo { "True" } else { "False" };
            if explicit {
                format!("CONTROLTICK[{v}]")
            } else {
                format!("SYSCONTROLRUN[{v}]")
            }
        };
        self.line("CONTROLSYSTEM = (init -> SYSCONTROLRUN[False]),");
        self.line("SYSCONTROLRUN[lastpo:BOOL] = (waterchan.receive[q:Q] ->");
        self.line("     steamchan.receive[v:V] -> pumpsensorchan.receive[p:PUMPQ] ->");
        self.line("     makedecision ->");
        let branches: Vec<(String, PumpOrder)> = match self.opts.mutation {
            Mutation::None => DECISION_RULES
                .iter()
                .map(|r| (r.guard.to_string(), r.order))
                .collect(),
            Mutation::NoOff => DECISION_RULES
                .iter()
                .filter(|r| r.order != PumpOrder::Off)
                .map(|r| {
                    let guard = if r.guard.starts_with("q > B2-FTRU") {
                        "q > B2-FTRU".to_string()
                    } else {
                        r.guard.to_string()
                    };
                    (guard, r.order)
                })
                .collect(),
            Mutation::AlwaysKeep => Vec::new(),
        };
        let last = if self.explicit() { ")," } else { ")" };
        if branches.is_empty() {
            self.line(&format!(
                "     pumpcontrollerchan.send[KEEP] -> {}{last}",
                next(false)
            ));
        } else {
            for (i, (guard, order)) in branches.iter().enumerate() {
                let open = if i == 0 { "   ( " } else { "   | " };
                let close = if i + 1 == branches.len() {
                    format!("){last}")
                } else {
                    String::new()
                };
                self.line(&format!("{open}when ({guard})"));
                self.line(&format!(
                    "        pumpcontrollerchan.send[{}] -> {}{close}",
                    order.name(),
                    next(*order == PumpOrder::On)
                ));
            }
        }
        if self.explicit() {
            let ticks = self.ticks();
            self.line(&format!(
                "CONTROLTICK[lastpo:BOOL] = ({ticks}SYSCONTROLRUN[lastpo])"
            ));
        }
        self.line("    + {pumpcontrollerchan.send[PUMPORDER]}.");
        self.blank();
    }

    fn system_design(&mut self) {
        let parts = system_components(self.opts.mode).join(" || ");
        self.line(&format!("||SYSTEMDESIGN = ({parts})."));
        self.blank();
    }

    fn properties(&mut self) {
        let s = self.params;
        for (name, lo, hi) in [
            ("BASIC", s.m1, s.m2),
            ("NORMAL", s.n1, s.n2),
            ("OPTIMIZATION", s.b1, s.b2),
        ] {
            let mut ext = Vec::new();
            if lo > 0 {
                ext.push(format!("getWaterQuantity[0..{}]", lo - 1));
            }
            if hi < s.c {
                ext.push(format!("getWaterQuantity[{}..{}]", hi + 1, s.c));
            }
            let mut text = format!("property {name} = (getWaterQuantity[q:{lo}..{hi}] -> {name})");
            if !ext.is_empty() {
                write!(text, "\n    + {{{}}}", ext.join(", ")).expect("writing to a String");
            }
            text.push('.');
            self.line(&text);
        }
        self.blank();
    }

    fn progress(&mut self) {
        self.line("progress WaterSensorWorking = {getWaterQuantity[q:Q]}");
        self.line("progress SteamSensorWorking = {getSteamRate[v:V]}");
        self.line("progress PumpSensorWorking = {getPumpRate[v:V]}");
        self.line("progress PumpControllerWorking = {pumpOn, pumpOff, keep}");
        match self.opts.progress {
            ProgressVariant::Faithful => {
                self.line("progress CSWorking = {makedecision}");
                self.line("progress STEAMBOILERWorking = {boiling}");
            }
            ProgressVariant::Literal => {
                self.line("progress CSWorking = {makedecision, makerescuedecision, rescue, repaired}");
                self.line("progress STEAMBOILERWorking = {boiling[q:Q][v:V][p:PUMPQ],");
                self.line("                               boilingout[q:Q][v:V][p:PUMPQ]}");
            }
        }
        self.blank();
    }

    fn check_systems(&mut self) {
        self.line("||BASICSYSTEM = (SYSTEMDESIGN || BASIC).");
        self.line("||NORMALSYSTEM = (SYSTEMDESIGN || NORMAL).");
        self.line("||OPTIMIZATIONSYSTEM = (SYSTEMDESIGN || OPTIMIZATION).");
    }
}
