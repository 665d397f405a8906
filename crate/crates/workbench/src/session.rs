//! Event-sourced exploration sessions: every state is derived by replaying a
//! move log from the `Create` move.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use atoric::exactmath::num::{serde_rat, show_rat, Rat};
use atoric::flip::{antiflip_in_bounds, flip, initial_antiflip, BoundedAntiflip, Bounds, FlipError, FlipKind, FlipResult};
use atoric::mutate::{classify, mutate, Mutability, MutabilityStatus, MutateError};
use atoric::wedge::{validate, Side, WedgeParams};
use num_traits::Signed;
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Move {
    Create {
        wedge: WedgeParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<Bounds>,
    },
    Mutate {
        side: Side,
    },
    Antiflip {
        #[serde(rename = "aMinus", with = "serde_rat")]
        a_minus: Rat,
    },
    Flip {
        #[serde(rename = "aPlus", with = "serde_rat")]
        a_plus: Rat,
    },
    Undo,
    Redo,
}

/// How a history entry was reached from its predecessor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Origin {
    Created,
    Mutated { side: Side },
    Antiflipped { antiflip: Box<BoundedOrPlain> },
    Flipped { flip: Box<FlipResult> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundedOrPlain {
    Bounded(BoundedAntiflip),
    Plain(atoric::flip::AntiflipResult),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub wedge: WedgeParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{} side is {:?}", if .0.side == Side::Left { "left" } else { "right" }, .0.status)]
    NotMutable(Box<Mutability>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bounds exhausted: ({l1}, {l2})", l1 = show_rat(.l1), l2 = show_rat(.l2))]
    NoRoom { l1: Rat, l2: Rat },
    #[error("nothing to {0}")]
    NothingTo(&'static str),
    #[error("the first move must be create")]
    NotCreated,
    #[error("session already created")]
    AlreadyCreated,
}

impl SessionError {
    /// Validation errors are the caller's fault; everything else is a
    /// precondition of the current state.
    pub fn is_validation(&self) -> bool {
        matches!(self, SessionError::Invalid(_) | SessionError::NotCreated | SessionError::AlreadyCreated)
    }
}

fn from_flip_error(e: FlipError) -> SessionError {
    match e {
        FlipError::NonPositiveLength | FlipError::NotCanonical { .. } => SessionError::Invalid(e.to_string()),
        FlipError::Mutation(MutateError::NotMutable(m)) => SessionError::NotMutable(m),
        other => SessionError::Precondition(other.to_string()),
    }
}

fn checked(l1: Rat, l2: Rat) -> Result<Bounds, SessionError> {
    if l1.is_positive() && l2.is_positive() {
        Ok(Bounds { l1, l2 })
    } else {
        Err(SessionError::NoRoom { l1, l2 })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub history: Vec<Entry>,
    pub cursor: usize,
    pub log: Vec<Move>,
}

impl Session {
    pub fn new(id: impl Into<String>) -> Self {
        Session { id: id.into(), ..Default::default() }
    }

    pub fn current(&self) -> Option<&Entry> {
        self.history.get(self.cursor)
    }

    fn next_entry(&self, cur: &Entry, mv: &Move) -> Result<Entry, SessionError> {
        let w = &cur.wedge;
        match mv {
            Move::Mutate { side } => {
                let m = classify(w, *side);
                if m.status != MutabilityStatus::Mutable {
                    return Err(SessionError::NotMutable(Box::new(m)));
                }
                let next = mutate(w, *side).map_err(|e| SessionError::Precondition(e.to_string()))?;
                let bounds = match &cur.bounds {
                    None => None,
                    Some(b) => Some(match side {
                        Side::Right => checked(&b.l1 + &w.a, &b.l2 - &next.a)?,
                        Side::Left => checked(&b.l1 - &next.a, &b.l2 + &w.a)?,
                    }),
                };
                Ok(Entry { wedge: next, bounds, origin: Origin::Mutated { side: *side } })
            }
            Move::Antiflip { a_minus } => {
                let (minus, bounds, detail) = match &cur.bounds {
                    Some(b) => {
                        let r = antiflip_in_bounds(w, &b.l1, &b.l2, a_minus).map_err(from_flip_error)?;
                        (r.result.minus.clone(), Some(r.new_bounds.clone()), BoundedOrPlain::Bounded(r))
                    }
                    None => {
                        let r = initial_antiflip(w, a_minus).map_err(from_flip_error)?;
                        (r.minus.clone(), None, BoundedOrPlain::Plain(r))
                    }
                };
                Ok(Entry { wedge: minus, bounds, origin: Origin::Antiflipped { antiflip: Box::new(detail) } })
            }
            Move::Flip { a_plus } => {
                let r = flip(w, a_plus).map_err(from_flip_error)?;
                let mut bounds = cur.bounds.clone();
                for pair in r.descent_orbit.windows(2) {
                    if let Some(b) = &bounds {
                        bounds = Some(checked(&b.l1 - &pair[1].a, &b.l2 + &pair[0].a)?);
                    }
                }
                let last = r.descent_orbit.last().expect("descent starts at the input").clone();
                let wedge = match &r.kind {
                    FlipKind::FlipTo { plus } => {
                        if let Some(b) = &bounds {
                            bounds = Some(checked(&b.l1 - &plus.a, &b.l2 + &last.a)?);
                        }
                        plus.clone()
                    }
                    FlipKind::DivisorialContraction { .. } => last,
                };
                Ok(Entry { wedge, bounds, origin: Origin::Flipped { flip: Box::new(r) } })
            }
            Move::Create { .. } | Move::Undo | Move::Redo => unreachable!("handled by apply"),
        }
    }

    /// Applies a move; on success it is appended to the log.
    pub fn apply(&mut self, mv: Move) -> Result<&Entry, SessionError> {
        match &mv {
            Move::Create { wedge, bounds } => {
                if !self.history.is_empty() {
                    return Err(SessionError::AlreadyCreated);
                }
                let w = validate(
                    wedge.p1.clone(),
                    wedge.q1.clone(),
                    wedge.p2.clone(),
                    wedge.q2.clone(),
                    wedge.c.clone(),
                    wedge.a.clone(),
                )
                .map_err(|e| SessionError::Invalid(e.to_string()))?;
                if let Some(b) = bounds {
                    if !b.l1.is_positive() || !b.l2.is_positive() {
                        return Err(SessionError::Invalid("bounds must be positive".into()));
                    }
                }
                self.history.push(Entry { wedge: w, bounds: bounds.clone(), origin: Origin::Created });
                self.cursor = 0;
            }
            Move::Undo => {
                if self.history.is_empty() {
                    return Err(SessionError::NotCreated);
                }
                if self.cursor == 0 {
                    return Err(SessionError::NothingTo("undo"));
                }
                self.cursor -= 1;
            }
            Move::Redo => {
                if self.cursor + 1 >= self.history.len() {
                    return Err(SessionError::NothingTo("redo"));
                }
                self.cursor += 1;
            }
            other => {
                let cur = self.current().ok_or(SessionError::NotCreated)?;
                let next = self.next_entry(cur, other)?;
                self.history.truncate(self.cursor + 1);
                self.history.push(next);
                self.cursor += 1;
            }
        }
        self.log.push(mv);
        Ok(&self.history[self.cursor])
    }

    /// Rebuilds a session from its move log.
    pub fn replay(id: impl Into<String>, log: &[Move]) -> Result<Session, SessionError> {
        let mut s = Session::new(id);
        for mv in log {
            s.apply(mv.clone())?;
        }
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
struct LogLine {
    session: String,
    #[serde(rename = "move")]
    mv: Move,
}

/// Sessions by id. Each session has its own lock, so moves on one session
/// are serialized while other sessions proceed independently.
#[derive(Default)]
pub struct Registry {
    sessions: RwLock<HashMap<String, Arc<RwLock<Session>>>>,
    counter: AtomicU64,
    journal: Option<PathBuf>,
    journal_lock: Mutex<()>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// A registry that appends every accepted move to a JSON-lines file and
    /// recovers any sessions already recorded there.
    pub fn with_journal(path: &Path) -> std::io::Result<Self> {
        let reg = Registry { journal: Some(path.to_path_buf()), ..Default::default() };
        if path.exists() {
            let mut logs: Vec<(String, Vec<Move>)> = Vec::new();
            for line in BufReader::new(std::fs::File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: LogLine = serde_json::from_str(&line)
                    .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
                match logs.iter_mut().find(|(id, _)| *id == rec.session) {
                    Some((_, l)) => l.push(rec.mv),
                    None => logs.push((rec.session, vec![rec.mv])),
                }
            }
            let mut max = 0;
            let mut map = reg.sessions.write();
            for (id, log) in logs {
                let s = Session::replay(id.clone(), &log)
                    .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
                if let Some(n) = id.strip_prefix('s').and_then(|n| n.parse::<u64>().ok()) {
                    max = max.max(n);
                }
                map.insert(id, Arc::new(RwLock::new(s)));
            }
            drop(map);
            reg.counter.store(max, Ordering::SeqCst);
        }
        Ok(reg)
    }

    fn record(&self, id: &str, mv: &Move) -> std::io::Result<()> {
        if let Some(path) = &self.journal {
            let _g = self.journal_lock.lock();
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            let line = serde_json::to_string(&LogLine { session: id.to_string(), mv: mv.clone() })?;
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    pub fn create(&self, wedge: WedgeParams, bounds: Option<Bounds>) -> Result<(String, Entry), SessionError> {
        let id = format!("s{}", self.counter.fetch_add(1, Ordering::SeqCst) + 1);
        let mut s = Session::new(id.clone());
        let mv = Move::Create { wedge, bounds };
        let entry = s.apply(mv.clone())?.clone();
        self.record(&id, &mv).map_err(|e| SessionError::Precondition(format!("journal: {e}")))?;
        self.sessions.write().insert(id.clone(), Arc::new(RwLock::new(s)));
        Ok((id, entry))
    }

    pub fn get(&self, id: &str) -> Option<Arc<RwLock<Session>>> {
        self.sessions.read().get(id).cloned()
    }

    /// Applies a move under the session's lock. `None` means no such session.
    pub fn apply(&self, id: &str, mv: Move) -> Option<Result<Session, SessionError>> {
        let s = self.get(id)?;
        let mut guard = s.write();
        Some(guard.apply(mv.clone()).map(|_| ()).and_then(|_| {
            self.record(id, &mv).map_err(|e| SessionError::Precondition(format!("journal: {e}")))?;
            Ok(guard.clone())
        }))
    }

    pub fn snapshot(&self, id: &str) -> Option<Session> {
        self.get(id).map(|s| s.read().clone())
    }
}
