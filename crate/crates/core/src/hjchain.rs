//! Chains of spheres: blow-up/blow-down moves, scripted replay, and splitting
//! a chain into `[Wahl]−c−[Wahl]`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{int, serde_int, Int};
use crate::exactmath::{recognize_wahl, Chain};
use crate::lattice::{resolve_vertex, LatticeVector, ResolvedEdge};
use crate::wedge::{b1_direction, r2_direction, WedgeParams};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("position {pos} out of range for a chain of length {len}")]
    OutOfRange { pos: usize, len: usize },
    #[error("entry {index} is {value}, only a 1 can be blown down")]
    NotMinusOne { index: usize, value: Int },
    #[error("step {step}: expected {expected}, got {actual}")]
    SnapshotMismatch { step: usize, expected: Chain, actual: Chain },
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<ChainError> },
    #[error("cannot parse chain {0:?}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedChain {
    pub left: Chain,
    #[serde(with = "serde_int")]
    pub c: Int,
    pub right: Chain,
}

impl MarkedChain {
    pub fn new(left: Chain, c: Int, right: Chain) -> Self {
        MarkedChain { left, c, right }
    }

    pub fn flatten(&self) -> Chain {
        let mid = Chain(vec![self.c.clone()]);
        Chain::concat(&[&self.left, &mid, &self.right])
    }

    /// Parses `"[4]-3-[]"`.
    pub fn parse(s: &str) -> Result<Self, ChainError> {
        let bad = || ChainError::Parse(s.to_string());
        let t = s.trim();
        let l_end = t.find(']').ok_or_else(bad)?;
        let r_start = t.rfind('[').ok_or_else(bad)?;
        if r_start <= l_end {
            return Err(bad());
        }
        let left = parse_chain(&t[..=l_end])?;
        let right = parse_chain(&t[r_start..])?;
        let mid = t[l_end + 1..r_start].trim();
        let mid = mid.strip_prefix('-').and_then(|m| m.strip_suffix('-')).ok_or_else(bad)?;
        let c = Int::from_str(mid.trim()).map_err(|_| bad())?;
        Ok(MarkedChain { left, c, right })
    }
}

impl fmt::Display for MarkedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.left, self.c, self.right)
    }
}

/// Parses `"[2,5,3]"` or `"2,5,3"`.
pub fn parse_chain(s: &str) -> Result<Chain, ChainError> {
    let t = s.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(Chain::empty());
    }
    t.split(',')
        .map(|x| Int::from_str(x.trim()).map_err(|_| ChainError::Parse(s.to_string())))
        .collect::<Result<Vec<_>, _>>()
        .map(Chain)
}

/// Blows up a point between entries `pos − 1` and `pos` (or at an end).
pub fn blowup(chain: &Chain, pos: usize) -> Result<Chain, ChainError> {
    let len = chain.len();
    if pos > len {
        return Err(ChainError::OutOfRange { pos, len });
    }
    let mut v = chain.0.clone();
    if pos > 0 {
        v[pos - 1] += 1;
    }
    if pos < len {
        v[pos] += 1;
    }
    v.insert(pos, Int::one());
    Ok(Chain(v))
}

pub fn blowdown(chain: &Chain, index: usize) -> Result<Chain, ChainError> {
    let len = chain.len();
    if index >= len {
        return Err(ChainError::OutOfRange { pos: index, len });
    }
    if !chain.0[index].is_one() {
        return Err(ChainError::NotMinusOne { index, value: chain.0[index].clone() });
    }
    let mut v = chain.0.clone();
    v.remove(index);
    if index > 0 {
        v[index - 1] -= 1;
    }
    if index < v.len() {
        v[index] -= 1;
    }
    Ok(Chain(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveOp {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub op: MoveOp,
    pub at: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Chain>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveScript {
    pub moves: Vec<Move>,
}

/// Every chain produced by the script (one per move), checked against the
/// snapshots; errors carry the 0-based step index.
pub fn replay_trace(start: &Chain, script: &MoveScript) -> Result<Vec<Chain>, ChainError> {
    let mut cur = start.clone();
    let mut trace = Vec::with_capacity(script.moves.len());
    for (step, m) in script.moves.iter().enumerate() {
        let next = match m.op {
            MoveOp::Up => blowup(&cur, m.at),
            MoveOp::Down => blowdown(&cur, m.at),
        }
        .map_err(|e| ChainError::Step { step, source: Box::new(e) })?;
        if let Some(exp) = &m.expect {
            if *exp != next {
                return Err(ChainError::SnapshotMismatch { step, expected: exp.clone(), actual: next });
            }
        }
        trace.push(next.clone());
        cur = next;
    }
    Ok(trace)
}

pub fn replay(start: &Chain, script: &MoveScript) -> Result<Chain, ChainError> {
    Ok(replay_trace(start, script)?.pop().unwrap_or_else(|| start.clone()))
}

/// The blow-up sequence that takes `[4,3]` through the printed chains to
/// `[2,5,3,1,2,3,2,2,7,3]`. The first move produces `[1,5,3]`, which the
/// text describes but does not list.
pub fn golden_script() -> MoveScript {
    let steps: [(MoveOp, usize, Option<&[i64]>); 10] = [
        (MoveOp::Up, 0, None),
        (MoveOp::Up, 0, Some(&[1, 2, 5, 3])),
        (MoveOp::Down, 0, Some(&[1, 5, 3])),
        (MoveOp::Up, 1, Some(&[2, 1, 6, 3])),
        (MoveOp::Up, 2, Some(&[2, 2, 1, 7, 3])),
        (MoveOp::Up, 2, Some(&[2, 3, 1, 2, 7, 3])),
        (MoveOp::Up, 2, Some(&[2, 4, 1, 2, 2, 7, 3])),
        (MoveOp::Up, 2, Some(&[2, 5, 1, 2, 2, 2, 7, 3])),
        (MoveOp::Up, 3, Some(&[2, 5, 2, 1, 3, 2, 2, 7, 3])),
        (MoveOp::Up, 3, Some(&[2, 5, 3, 1, 2, 3, 2, 2, 7, 3])),
    ];
    MoveScript {
        moves: steps
            .iter()
            .map(|(op, at, e)| Move { op: *op, at: *at, expect: e.map(Chain::from_i64s) })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WahlSplit {
    pub chain: MarkedChain,
    #[serde(with = "crate::exactmath::num::serde_int_vec")]
    pub left: Vec<Int>,
    #[serde(with = "crate::exactmath::num::serde_int_vec")]
    pub right: Vec<Int>,
}

/// All ways to write the chain as `left ++ [c] ++ right` with both blocks Wahl.
pub fn find_wahl_splits(chain: &Chain) -> Vec<WahlSplit> {
    let e = chain.entries();
    let mut out = Vec::new();
    for k in 1..e.len().saturating_sub(1) {
        let left = Chain(e[..k].to_vec());
        let right = Chain(e[k + 1..].to_vec());
        if let (Some((p1, q1)), Some((p2, q2))) = (recognize_wahl(&left), recognize_wahl(&right)) {
            out.push(WahlSplit {
                chain: MarkedChain::new(left, e[k].clone(), right),
                left: vec![p1, q1],
                right: vec![p2, q2],
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K1aWitness {
    pub parallel: bool,
    #[serde(rename = "cutDirection")]
    pub cut_direction: LatticeVector,
    /// 1-based position of the matching exceptional curve, from the compact edge.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<ResolvedEdge>,
    pub resolution: Vec<ResolvedEdge>,
}

/// Checks whether the `B₁` cut runs parallel to a curve in the minimal
/// resolution of the right vertex.
pub fn k1a_parallelism(w: &WedgeParams) -> K1aWitness {
    let d = b1_direction(w);
    let resolution = if w.p2.is_one() {
        Vec::new()
    } else {
        resolve_vertex(&r2_direction(w), &LatticeVector::new(int(-1), Int::zero())).expect("right vertex is singular")
    };
    let hit = resolution.iter().position(|e| e.direction.is_parallel(&d));
    K1aWitness {
        parallel: hit.is_some(),
        cut_direction: d,
        index: hit.map(|i| i + 1),
        edge: hit.map(|i| resolution[i].clone()),
        resolution,
    }
}
