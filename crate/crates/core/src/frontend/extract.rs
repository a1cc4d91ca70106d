use std::collections::BTreeMap;

use super::ast::TypeExpr;
use super::graph::{CallEdge, ObjectGraph};
use super::FrontendError;
use crate::session::{Action, LtsError, Label, PayloadType, SessionLts, Transition, WidthPolicy};

/// Caller-view session for each `(caller, callee)` pair that communicates.
pub type PairSessions = BTreeMap<(String, String), SessionLts>;

/// Caller-view label of every event in execution order, widths concrete.
pub fn event_labels(graph: &ObjectGraph, policy: &WidthPolicy) -> Result<Vec<Label>, FrontendError> {
    graph
        .events
        .iter()
        .map(|ev| {
            let [request, response] = call_labels(graph, &graph.edges[ev.edge], policy)?;
            let label = if ev.response { response } else { request };
            Ok(Label { payload: label.payload.concretize(policy), ..label })
        })
        .collect()
}

/// Everything `object` sends and receives, in execution order, from its own
/// point of view; `None` when it takes part in no call.
pub fn object_session(graph: &ObjectGraph, object: &str, policy: &WidthPolicy) -> Result<Option<SessionLts>, FrontendError> {
    let mut seq = Vec::new();
    for ev in &graph.events {
        let edge = &graph.edges[ev.edge];
        let as_caller = edge.caller == object;
        if !as_caller && edge.callee != object {
            continue;
        }
        let [request, response] = call_labels(graph, edge, policy)?;
        let label = if ev.response { response } else { request };
        seq.push(if as_caller { label } else { label.dual() });
    }
    if seq.is_empty() {
        return Ok(None);
    }
    let session = SessionLts::linear(seq)?;
    Ok(Some(annotate_widths(&session, policy)?))
}

/// Abstract payload for a declared type. Bare `str` is bounded by the
/// longest string literal of the program.
pub fn payload_of(ty: &TypeExpr, max_literal_chars: u32) -> Option<PayloadType> {
    match ty {
        TypeExpr::Int => Some(PayloadType::Int { bits: None }),
        TypeExpr::Bool => Some(PayloadType::Bool { bits: None }),
        TypeExpr::Str(n) => Some(PayloadType::Str { chars: n.unwrap_or(max_literal_chars.max(1)), char_bits: None }),
        TypeExpr::Array(elem, Some(len)) => Some(PayloadType::array(payload_of(elem, max_literal_chars)?, *len)),
        TypeExpr::Array(_, None) | TypeExpr::Class(_) => None,
    }
}

fn unbounded(edge: &CallEdge, message: &str, ty: &TypeExpr) -> FrontendError {
    FrontendError::Unbounded {
        message: message.to_string(),
        ty: ty.to_string(),
        line: edge.span.line,
        col: edge.span.col,
    }
}

/// `!request` then `?response` for one call, seen from the caller.
fn call_labels(graph: &ObjectGraph, edge: &CallEdge, policy: &WidthPolicy) -> Result<[Label; 2], FrontendError> {
    let bound = graph.max_literal_chars;
    let request = match edge.params.as_slice() {
        [] => Label::new(Action::Send, edge.method.clone(), PayloadType::Bool { bits: None }),
        [(name, ty)] => {
            let payload = payload_of(ty, bound).ok_or_else(|| unbounded(edge, name, ty))?;
            Label::new(Action::Send, name.clone(), payload)
        }
        params => {
            // Several arguments travel as one message whose width is the sum.
            let mut bits = 0;
            for (name, ty) in params {
                let payload = payload_of(ty, bound).ok_or_else(|| unbounded(edge, name, ty))?;
                bits += payload.concretize(policy).width().expect("concretized");
            }
            Label::new(Action::Send, edge.method.clone(), PayloadType::int(bits))
        }
    };
    let message = edge.ret_name.clone().unwrap_or_else(|| format!("{}_ret", edge.method));
    let payload = payload_of(&edge.ret, bound).ok_or_else(|| unbounded(edge, &message, &edge.ret))?;
    Ok([request, Label::new(Action::Recv, message, payload)])
}

fn build(graph: &ObjectGraph, policy: &WidthPolicy) -> Result<PairSessions, FrontendError> {
    let mut labels: BTreeMap<(String, String), Vec<Label>> = BTreeMap::new();
    let mut edges: Vec<&CallEdge> = graph.edges.iter().collect();
    edges.sort_by_key(|e| e.order);
    for edge in edges {
        let pair = (edge.caller.clone(), edge.callee.clone());
        labels.entry(pair).or_default().extend(call_labels(graph, edge, policy)?);
    }
    Ok(labels
        .into_iter()
        .map(|(pair, seq)| (pair, SessionLts::linear(seq).expect("a linear sequence is a valid session")))
        .collect())
}

/// Sessions with scalar leaves left abstract (multi-argument requests are
/// summed under the default policy).
pub fn abstract_sessions(graph: &ObjectGraph) -> Result<PairSessions, FrontendError> {
    build(graph, &WidthPolicy::default())
}

/// Caller-view sessions with widths concretized by `policy`.
pub fn extract_sessions_with(graph: &ObjectGraph, policy: &WidthPolicy) -> Result<PairSessions, FrontendError> {
    build(graph, policy)?
        .into_iter()
        .map(|(pair, s)| Ok((pair, annotate_widths(&s, policy)?)))
        .collect()
}

/// Caller-view sessions under the default width policy.
pub fn extract_sessions(graph: &ObjectGraph) -> Result<PairSessions, FrontendError> {
    extract_sessions_with(graph, &WidthPolicy::default())
}

/// Give every abstract leaf a concrete width. Concrete leaves are kept, so
/// the operation is idempotent.
pub fn annotate_widths(session: &SessionLts, policy: &WidthPolicy) -> Result<SessionLts, LtsError> {
    let transitions = session
        .transitions()
        .iter()
        .map(|t| Transition {
            from: t.from,
            to: t.to,
            label: Label { payload: t.label.payload.concretize(policy), ..t.label.clone() },
        })
        .collect();
    SessionLts::new(session.num_states(), session.initial(), transitions)
}
