//! HTTP session service. Every number in a JSON payload is sent as a string.

use std::collections::HashMap;
use std::sync::Arc;

use atoric::exactmath::num::{serde_int_pairs, Int, Rat};
use atoric::flip::{Bounds, BUDGET_HORIZON};
use atoric::mori::{
    budget, generate, is_infinitely_right_mutable, max_antiflip_param, mutation_orbit, orbit_pairs, validate_seed,
    AntiflipCap, Asymptotics, Budget, MoriSeed,
};
use atoric::mutate::{classify, Mutability};
use atoric::wedge::{bounded, invariants, realize, Side, WedgeInvariants, WedgeParams};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use num_traits::Signed;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::parse::{parse_rational, parse_wedge, wedge_from_chain};
use crate::render::{render_svg, Viewport};
use crate::session::{Entry, Move, Registry, Session, SessionError};

pub const MAX_MORI_TERMS: usize = 500;

type Shared = Arc<Registry>;

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn json(status: StatusCode, body: impl Serialize) -> Response {
    match serde_json::to_value(body) {
        Ok(v) => (status, axum::Json(stringify_numbers(v))).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Mutability>,
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    json(status, ErrorBody { error: msg.into(), witness: None })
}

fn not_found(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, format!("no session {id:?}"))
}

fn session_error(e: SessionError) -> Response {
    let msg = e.to_string();
    match e {
        SessionError::NotMutable(m) => json(StatusCode::CONFLICT, ErrorBody { error: msg, witness: Some(*m) }),
        e if e.is_validation() => error(StatusCode::BAD_REQUEST, msg),
        _ => error(StatusCode::CONFLICT, msg),
    }
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, Response> {
    serde_json::from_slice(bytes).map_err(|e| error(StatusCode::BAD_REQUEST, format!("bad request body: {e}")))
}

#[derive(Serialize)]
struct Classification {
    left: Mutability,
    right: Mutability,
}

#[derive(Serialize)]
pub struct SessionView {
    id: String,
    cursor: usize,
    #[serde(rename = "historyLength")]
    history_length: usize,
    #[serde(rename = "canUndo")]
    can_undo: bool,
    #[serde(rename = "canRedo")]
    can_redo: bool,
    state: Entry,
    classify: Classification,
    invariants: WedgeInvariants,
    /// Present when the wedge is bounded and infinitely right-mutable.
    budget: Option<Budget>,
    /// Present when the wedge is bounded and K-positive.
    #[serde(rename = "antiflipCap")]
    antiflip_cap: Option<AntiflipCap>,
    #[serde(rename = "moveCount")]
    move_count: usize,
}

pub fn view(s: &Session) -> Option<SessionView> {
    let e = s.current()?.clone();
    let w = &e.wedge;
    let budget = e
        .bounds
        .as_ref()
        .filter(|_| is_infinitely_right_mutable(w).unwrap_or(false))
        .and_then(|b| budget(w, &b.l2, BUDGET_HORIZON).ok());
    let sigma = w.sigma();
    let antiflip_cap =
        e.bounds.as_ref().filter(|_| sigma.is_positive()).and_then(|b| max_antiflip_param(&b.l2, &sigma).ok());
    Some(SessionView {
        id: s.id.clone(),
        cursor: s.cursor,
        history_length: s.history.len(),
        can_undo: s.cursor > 0,
        can_redo: s.cursor + 1 < s.history.len(),
        classify: Classification { left: classify(w, Side::Left), right: classify(w, Side::Right) },
        invariants: invariants(w),
        budget,
        antiflip_cap,
        move_count: s.log.len(),
        state: e,
    })
}

/// Body of `POST /session`: a wedge (string or object), or a chain plus `a`.
#[derive(Deserialize)]
struct CreateRequest {
    wedge: Option<Value>,
    chain: Option<String>,
    a: Option<String>,
    bounds: Option<Bounds>,
}

fn wedge_of(req: &CreateRequest) -> Result<WedgeParams, String> {
    match (&req.wedge, &req.chain) {
        (Some(Value::String(s)), None) => parse_wedge(s),
        (Some(v), None) => serde_json::from_value::<WedgeParams>(v.clone()).map_err(|e| e.to_string()),
        (None, Some(chain)) => {
            let a = parse_rational(req.a.as_deref().ok_or("a chain needs an edge length \"a\"")?)?;
            wedge_from_chain(chain, &a)
        }
        _ => Err("give exactly one of \"wedge\" or \"chain\"".into()),
    }
}

async fn create(State(reg): State<Shared>, bytes: Bytes) -> Response {
    let req: CreateRequest = match body(&bytes) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    let w = match wedge_of(&req) {
        Ok(w) => w,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    match reg.create(w, req.bounds) {
        Ok((id, _)) => json(StatusCode::CREATED, view(&reg.snapshot(&id).expect("just created"))),
        Err(e) => session_error(e),
    }
}

async fn show(State(reg): State<Shared>, Path(id): Path<String>) -> Response {
    match reg.snapshot(&id) {
        Some(s) => json(StatusCode::OK, view(&s)),
        None => not_found(&id),
    }
}

async fn log(State(reg): State<Shared>, Path(id): Path<String>) -> Response {
    match reg.snapshot(&id) {
        Some(s) => json(StatusCode::OK, &s.log),
        None => not_found(&id),
    }
}

fn apply(reg: &Registry, id: &str, mv: Move) -> Response {
    match reg.apply(id, mv) {
        None => not_found(id),
        Some(Ok(s)) => json(StatusCode::OK, view(&s)),
        Some(Err(e)) => session_error(e),
    }
}

#[derive(Deserialize)]
struct MutateRequest {
    side: Side,
}

#[derive(Deserialize)]
struct AntiflipRequest {
    #[serde(rename = "aMinus", with = "atoric::exactmath::num::serde_rat")]
    a_minus: Rat,
}

#[derive(Deserialize)]
struct FlipRequest {
    #[serde(rename = "aPlus", with = "atoric::exactmath::num::serde_rat")]
    a_plus: Rat,
}

async fn do_mutate(State(reg): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Response {
    match body::<MutateRequest>(&bytes) {
        Ok(r) => apply(&reg, &id, Move::Mutate { side: r.side }),
        Err(resp) => resp,
    }
}

async fn do_antiflip(State(reg): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Response {
    match body::<AntiflipRequest>(&bytes) {
        Ok(r) => apply(&reg, &id, Move::Antiflip { a_minus: r.a_minus }),
        Err(resp) => resp,
    }
}

async fn do_flip(State(reg): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Response {
    match body::<FlipRequest>(&bytes) {
        Ok(r) => apply(&reg, &id, Move::Flip { a_plus: r.a_plus }),
        Err(resp) => resp,
    }
}

async fn do_undo(State(reg): State<Shared>, Path(id): Path<String>) -> Response {
    apply(&reg, &id, Move::Undo)
}

async fn do_redo(State(reg): State<Shared>, Path(id): Path<String>) -> Response {
    apply(&reg, &id, Move::Redo)
}

/// Draws the current state: the bounded quadrilateral when bounds are known.
pub fn render_entry(e: &Entry, vp: Option<Viewport>) -> Result<String, String> {
    let poly = match &e.bounds {
        Some(b) => bounded(&e.wedge, &b.l1, &b.l2).map_err(|e| e.to_string())?,
        None => realize(&e.wedge),
    };
    let vp = vp.unwrap_or_else(|| Viewport::fit(&poly));
    render_svg(&poly, &vp).map_err(|e| e.to_string())
}

fn viewport_query(q: &HashMap<String, String>) -> Result<Option<Viewport>, String> {
    let keys = ["x0", "y0", "x1", "y1"];
    let given: Vec<_> = keys.iter().filter_map(|k| q.get(*k)).collect();
    match given.len() {
        0 => Ok(None),
        4 => {
            let r: Vec<Rat> = given.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
            Ok(Some(Viewport::new(r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone())))
        }
        _ => Err("a viewport needs all of x0, y0, x1, y1".into()),
    }
}

async fn svg(State(reg): State<Shared>, Path(id): Path<String>, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(s) = reg.snapshot(&id) else { return not_found(&id) };
    let vp = match viewport_query(&q) {
        Ok(vp) => vp,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    match render_entry(s.current().expect("created sessions have a state"), vp) {
        Ok(doc) => ([(header::CONTENT_TYPE, "image/svg+xml")], doc).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e),
    }
}

#[derive(Serialize)]
struct MoriView {
    seed: MoriSeed,
    classification: Asymptotics,
    /// The first `n` terms in the display convention.
    #[serde(with = "serde_int_pairs")]
    sequence: Vec<(Int, Int)>,
    /// Left labels of `n` successive right mutations, when the wedge is
    /// infinitely right-mutable.
    #[serde(rename = "orbitPairs", with = "opt_pairs")]
    orbit_pairs: Option<Vec<(Int, Int)>>,
}

mod opt_pairs {
    use super::*;
    use serde::Serializer;

    #[derive(Serialize)]
    struct W<'a>(#[serde(with = "serde_int_pairs")] &'a Vec<(Int, Int)>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<(Int, Int)>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(W).serialize(s)
    }
}

async fn mori(State(reg): State<Shared>, Path(id): Path<String>, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(s) = reg.snapshot(&id) else { return not_found(&id) };
    let n = match q.get("n").map(|n| n.parse::<usize>()) {
        None => 10,
        Some(Ok(n)) if (1..=MAX_MORI_TERMS).contains(&n) => n,
        _ => return error(StatusCode::BAD_REQUEST, format!("n must be an integer in 1..={MAX_MORI_TERMS}")),
    };
    let w = &s.current().expect("created sessions have a state").wedge;
    let seed = match validate_seed(w.p1.clone(), w.q1.clone(), w.p2.clone(), w.q2.clone()) {
        Ok(seed) => seed,
        Err(e) => return error(StatusCode::CONFLICT, format!("no Mori sequence: {e}")),
    };
    let seq = generate(&seed, n);
    let orbit = match is_infinitely_right_mutable(w) {
        Ok(true) => mutation_orbit(w, n).ok().map(|o| orbit_pairs(&o)),
        _ => None,
    };
    json(
        StatusCode::OK,
        MoriView { classification: seq.classification, sequence: seq.display_pairs(), seed, orbit_pairs: orbit },
    )
}

pub fn router(reg: Shared) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(show))
        .route("/session/{id}/log", get(log))
        .route("/session/{id}/mutate", post(do_mutate))
        .route("/session/{id}/antiflip", post(do_antiflip))
        .route("/session/{id}/flip", post(do_flip))
        .route("/session/{id}/undo", post(do_undo))
        .route("/session/{id}/redo", post(do_redo))
        .route("/session/{id}/render.svg", get(svg))
        .route("/session/{id}/mori", get(mori))
        .with_state(reg)
}

pub async fn serve(bind: &str, reg: Registry) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(reg))).await
}
