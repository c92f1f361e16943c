//! Trace events, the JSON trace document and DOT renderings of the germ
//! forests.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{ChartStep, Ext, State, WeilDivisor};
use crate::ramification::Subcase;
use crate::toroidalize::Atlas;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub seq: u64,
    pub step: usize,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Event {
    RamificationComputed {
        divisor: WeilDivisor,
        sorted: Vec<u32>,
    },
    SubcaseClassified {
        germ: usize,
        target: usize,
        subcase: Subcase,
        a: u32,
        b: u32,
        i_o: Ext,
        j_o: Ext,
        i_s: Ext,
        j_s: Ext,
        toroidal: bool,
    },
    YBlowup {
        germ: usize,
        center_type: String,
        exceptional: String,
        first: usize,
        second: usize,
    },
    XBlowup {
        germ: usize,
        over: usize,
        exceptional: String,
        first: usize,
        second: usize,
    },
    Recenter {
        side: String,
        germ: usize,
        parent: usize,
        at: String,
    },
    Retarget {
        germ: usize,
        from: usize,
        to: usize,
    },
    MonitorCheck {
        before: Vec<u32>,
        after: Vec<u32>,
        one_q_center: bool,
        two_q_run: usize,
        run_bound: Option<u32>,
        ok: bool,
        violations: Vec<String>,
    },
    Done {
        steps: usize,
        outcome: String,
    },
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::RamificationComputed { .. } => "RamificationComputed",
            Event::SubcaseClassified { .. } => "SubcaseClassified",
            Event::YBlowup { .. } => "YBlowup",
            Event::XBlowup { .. } => "XBlowup",
            Event::Recenter { .. } => "Recenter",
            Event::Retarget { .. } => "Retarget",
            Event::MonitorCheck { .. } => "MonitorCheck",
            Event::Done { .. } => "Done",
        }
    }
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    events: &'a [TraceEvent],
    atlas: Option<&'a Atlas>,
}

/// Pretty JSON with a trailing newline; identical input gives identical
/// bytes.
pub fn trace_json(events: &[TraceEvent], atlas: Option<&Atlas>) -> String {
    let mut s = serde_json::to_string_pretty(&TraceDoc { events, atlas }).expect("serializable");
    s.push('\n');
    s
}

fn edge_label(step: &ChartStep) -> String {
    step.to_string()
}

fn boundary_label(b: &[Option<crate::model::ComponentId>; 2]) -> String {
    let parts: Vec<String> = b.iter().map(|c| c.map_or("-".into(), |c| c.to_string())).collect();
    parts.join(",")
}

/// Blowup and recentering forest of the source germs.
pub fn dot_x(state: &State, subcases: &BTreeMap<usize, Subcase>) -> String {
    let mut out = String::from("digraph source {\n  node [shape=box];\n");
    for g in &state.x {
        let sub = subcases.get(&g.id).map_or("-".to_string(), |s| s.to_string());
        let style = if g.active { "" } else { ", style=dashed" };
        let _ = writeln!(
            out,
            "  x{} [label=\"x{} {} [{}]\"{}];",
            g.id,
            g.id,
            sub,
            boundary_label(&g.boundary),
            style
        );
    }
    for g in &state.x {
        if let Some((p, step)) = &g.parent {
            let _ = writeln!(out, "  x{} -> x{} [label=\"{}\"];", p, g.id, edge_label(step));
        }
    }
    out.push_str("}\n");
    out
}

/// Blowup and recentering forest of the target germs.
pub fn dot_y(state: &State) -> String {
    let mut out = String::from("digraph target {\n  node [shape=ellipse];\n");
    for g in &state.y {
        let kind = format!("{}q", g.boundary.iter().filter(|b| b.is_some()).count());
        let style = if g.blown_up { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  y{} [label=\"y{} {} [{}]\"{}];",
            g.id,
            g.id,
            kind,
            boundary_label(&g.boundary),
            style
        );
    }
    for g in &state.y {
        if let Some((p, step)) = &g.parent {
            let _ = writeln!(out, "  y{} -> y{} [label=\"{}\"];", p, g.id, edge_label(step));
        }
    }
    out.push_str("}\n");
    out
}
