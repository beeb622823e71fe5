//! Round-limited back-and-forth games on pinch-based boards. One
//! board glues a full pinch to stacks of one-sided blocks, the other
//! carries the stacks alone; the Duplicator strategy mirrors moves
//! by block position and distance bands, and an independent game-tree
//! search cross-checks it at small round counts.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::Bounds;
use crate::constructions::{self, ConstructError};
use crate::incidence::ExtendedNat;
use crate::relational::RelStructure;
use crate::solver::{self, SearchConfig, SolveError};

#[derive(Debug, Error)]
pub enum GameError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("search needs {needed} nodes, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("no valid response at round {round}: {reason}")]
    StrategyFailure { round: usize, reason: String },
    #[error("family is not homomorphism-independent")]
    NotHomIndependent,
    #[error("index {0} out of range")]
    BadIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Pinch,
    Br,
    Bl,
    ExtraTemplate,
}

impl BlockKind {
    fn label(self) -> &'static str {
        match self {
            BlockKind::Pinch => "PINCH",
            BlockKind::Br => "BR",
            BlockKind::Bl => "BL",
            BlockKind::ExtraTemplate => "EXTRA",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct ElemInfo {
    block: usize,
    iota: usize,
    payload: (usize, usize),
}

/// A game board: a structure whose elements are annotated with their
/// block, position, and originating pair, plus a position index for
/// the strategy's lookups.
#[derive(Debug, Clone)]
pub struct Board {
    structure: RelStructure,
    blocks: Vec<BlockKind>,
    block_start: Vec<usize>,
    block_len: Vec<usize>,
    elem: Vec<ElemInfo>,
    n_prime: usize,
    // (block, canonical iota/payload) -> element
    lookup: HashMap<(usize, usize, usize, usize), usize>,
    // element -> tuples mentioning it
    incident: Vec<Vec<(usize, Vec<usize>)>>,
}

// Landmark indexing shared by distances and condition labels.
const LEFT_PINCH: usize = 0;
const RIGHT_PINCH: usize = 1;
const LEFT_SLICE: usize = 2;
const RIGHT_SLICE: usize = 3;
const LANDMARK_NAME: [&str; 4] = ["left pinch", "right pinch", "left slice", "right slice"];

impl Board {
    fn assemble(
        parts: Vec<(RelStructure, BlockKind, Vec<(usize, (usize, usize))>)>,
        n_prime: usize,
    ) -> Result<Board, GameError> {
        let sig = parts[0].0.signature().clone();
        let pieces: Vec<RelStructure> = parts.iter().map(|(s, _, _)| s.clone()).collect();
        let (structure, offsets) = constructions::disjoint_union(&sig, &pieces)?;
        let mut blocks = Vec::new();
        let mut block_start = Vec::new();
        let mut block_len = Vec::new();
        let mut elem = vec![
            ElemInfo {
                block: 0,
                iota: 0,
                payload: (0, 0)
            };
            structure.size()
        ];
        let mut lookup = HashMap::new();
        for (b, ((_, kind, info), &off)) in parts.iter().zip(&offsets).enumerate() {
            blocks.push(*kind);
            block_start.push(off);
            block_len.push(info.len());
            for (local, &(iota, payload)) in info.iter().enumerate() {
                let id = off + local;
                elem[id] = ElemInfo {
                    block: b,
                    iota,
                    payload,
                };
                if *kind != BlockKind::ExtraTemplate {
                    lookup.insert((b, iota, payload.0, payload.1), id);
                }
            }
        }
        let mut incident = vec![Vec::new(); structure.size()];
        for (rel, table) in structure.tables().iter().enumerate() {
            for tuple in table {
                let mut seen = Vec::new();
                for &e in tuple {
                    if !seen.contains(&e) {
                        seen.push(e);
                        incident[e].push((rel, tuple.clone()));
                    }
                }
            }
        }
        Ok(Board {
            structure,
            blocks,
            block_start,
            block_len,
            elem,
            n_prime,
            lookup,
            incident,
        })
    }

    /// Wrap an arbitrary structure as a single extra-template block,
    /// for overriding the boards under test.
    pub fn from_plain(structure: &RelStructure) -> Result<Board, GameError> {
        let info: Vec<(usize, (usize, usize))> =
            (0..structure.size()).map(|e| (0, (e, e))).collect();
        Board::assemble(
            vec![(structure.clone(), BlockKind::ExtraTemplate, info)],
            0,
        )
    }

    pub fn structure(&self) -> &RelStructure {
        &self.structure
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }

    pub fn link_length(&self) -> usize {
        self.n_prime
    }

    pub fn block_kinds(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.elem[e].block
    }

    pub fn kind_of(&self, e: usize) -> BlockKind {
        self.blocks[self.elem[e].block]
    }

    pub fn iota_of(&self, e: usize) -> usize {
        self.elem[e].iota
    }

    pub fn payload_of(&self, e: usize) -> (usize, usize) {
        self.elem[e].payload
    }

    pub fn describe(&self, e: usize) -> String {
        let info = self.elem[e];
        format!(
            "{e}({},{},{})",
            info.block,
            self.blocks[info.block].label(),
            info.iota
        )
    }

    // Classes at the two pinched layers are fibres, so queries key on
    // the representative coordinates.
    fn canon(&self, iota: usize, payload: (usize, usize)) -> (usize, usize, usize) {
        if iota == 0 {
            (0, payload.0, 0)
        } else if iota == self.n_prime {
            (self.n_prime, 0, payload.1)
        } else {
            (iota, payload.0, payload.1)
        }
    }

    fn find(&self, block: usize, iota: usize, payload: (usize, usize)) -> Option<usize> {
        let (i, a, b) = self.canon(iota, payload);
        self.lookup.get(&(block, i, a, b)).copied()
    }

    /// Distances to the four landmark kinds. The extended reading
    /// also treats layers 1 and n'-1 of a full pinch block as slices.
    fn landmark_dists(&self, e: usize, extended: bool) -> [ExtendedNat; 4] {
        let info = self.elem[e];
        let np = self.n_prime as u64;
        let i = info.iota as u64;
        let inf = ExtendedNat::Infinity;
        let fin = ExtendedNat::Fin;
        match self.blocks[info.block] {
            BlockKind::Pinch => [
                fin(i),
                fin(np - i),
                if extended { fin((np - 1).abs_diff(i)) } else { inf },
                if extended { fin(i.abs_diff(1)) } else { inf },
            ],
            BlockKind::Br => [inf, fin(np - i), inf, fin(i - 1)],
            BlockKind::Bl => [fin(i), inf, fin(np - 1 - i), inf],
            BlockKind::ExtraTemplate => [inf, inf, inf, inf],
        }
    }
}

/// In-block distance is the position gap; across blocks it is
/// infinite.
pub fn board_distance(board: &Board, x: usize, y: usize) -> ExtendedNat {
    let (a, b) = (board.elem[x], board.elem[y]);
    if a.block == b.block {
        ExtendedNat::Fin(a.iota.abs_diff(b.iota) as u64)
    } else {
        ExtendedNat::Infinity
    }
}

/// Gap that round i cannot close before the game ends.
pub fn large_threshold(k: usize, i: usize) -> u64 {
    1u64 << (k + 1).saturating_sub(i)
}

fn near(d: ExtendedNat, t: u64) -> Option<u64> {
    match d {
        ExtendedNat::Fin(v) if v < t => Some(v),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoardSide {
    G,
    H,
}

impl std::fmt::Display for BoardSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoardSide::G => "G",
            BoardSide::H => "H",
        })
    }
}

/// Build the level-k boards: n' = 2^{k+1} + 2, H is k+1 copies of
/// the right and left side blocks, G adds the full pinch.
pub fn build_boards(
    template: &RelStructure,
    k: usize,
    bounds: &Bounds,
) -> Result<(Board, Board), GameError> {
    build_boards_inner(template, k, false, bounds)
}

/// Colour-family variant: boards over the chosen template with one
/// extra plain copy of it in both G and H.
pub fn build_boards_colour(
    family: &[RelStructure],
    j: usize,
    k: usize,
    bounds: &Bounds,
) -> Result<(Board, Board), GameError> {
    if j >= family.len() {
        return Err(GameError::BadIndex(j));
    }
    let config = SearchConfig::from_bounds(bounds);
    if !solver::is_hom_independent(family, &config)? {
        return Err(GameError::NotHomIndependent);
    }
    build_boards_inner(&family[j], k, true, bounds)
}

fn build_boards_inner(
    template: &RelStructure,
    k: usize,
    extra: bool,
    bounds: &Bounds,
) -> Result<(Board, Board), GameError> {
    let n_prime = (1usize << (k + 1)) + 2;
    let pinch = constructions::n_pinch(template, n_prime, bounds)?;
    let (br, br_trace) = constructions::b_right(&pinch)?;
    let (bl, bl_trace) = constructions::b_left(&pinch)?;
    let trace_info = |trace: &[constructions::PinchTrace]| -> Vec<(usize, (usize, usize))> {
        trace
            .iter()
            .map(|t| (t.iota, (t.repr.1, t.repr.2)))
            .collect()
    };
    let br_info = trace_info(&br_trace);
    let bl_info = trace_info(&bl_trace);
    let mut h_parts = Vec::new();
    if extra {
        let info: Vec<(usize, (usize, usize))> =
            (0..template.size()).map(|a| (0, (a, a))).collect();
        h_parts.push((template.clone(), BlockKind::ExtraTemplate, info));
    }
    for _ in 0..=k {
        h_parts.push((br.clone(), BlockKind::Br, br_info.clone()));
        h_parts.push((bl.clone(), BlockKind::Bl, bl_info.clone()));
    }
    let pinch_info: Vec<(usize, (usize, usize))> = (0..pinch.size())
        .map(|c| {
            let (_, a, b) = pinch.repr(c);
            (pinch.iota(c), (a, b))
        })
        .collect();
    let mut g_parts = vec![(
        pinch.structure().clone(),
        BlockKind::Pinch,
        pinch_info,
    )];
    g_parts.extend(h_parts.iter().cloned());
    let g = Board::assemble(g_parts, n_prime)?;
    let h = Board::assemble(h_parts, n_prime)?;
    Ok((g, h))
}

/// Play state over a fixed pair of boards.
#[derive(Debug, Clone)]
pub struct GameState<'a> {
    pub g: &'a Board,
    pub h: &'a Board,
    pub k: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl<'a> GameState<'a> {
    pub fn new(g: &'a Board, h: &'a Board, k: usize) -> Self {
        GameState {
            g,
            h,
            k,
            pairs: Vec::new(),
        }
    }
}

/// Full check: the played pairs form a bijection that preserves and
/// reflects every tuple among played elements.
pub fn is_partial_isomorphism(state: &GameState<'_>) -> bool {
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut bwd: HashMap<usize, usize> = HashMap::new();
    for &(g, h) in &state.pairs {
        if *fwd.entry(g).or_insert(h) != h || *bwd.entry(h).or_insert(g) != g {
            return false;
        }
    }
    for (rel, table) in state.g.structure.tables().iter().enumerate() {
        for tuple in table {
            if tuple.iter().all(|e| fwd.contains_key(e)) {
                let image: Vec<usize> = tuple.iter().map(|e| fwd[e]).collect();
                if !state.h.structure.has_tuple(rel, &image) {
                    return false;
                }
            }
        }
    }
    for (rel, table) in state.h.structure.tables().iter().enumerate() {
        for tuple in table {
            if tuple.iter().all(|e| bwd.contains_key(e)) {
                let pre: Vec<usize> = tuple.iter().map(|e| bwd[e]).collect();
                if !state.g.structure.has_tuple(rel, &pre) {
                    return false;
                }
            }
        }
    }
    true
}

// Incremental variant: earlier pairs are assumed checked, so only
// tuples touching the new pair need scanning.
fn extends_partial_iso(
    g_board: &Board,
    h_board: &Board,
    pairs: &[(usize, usize)],
    new: (usize, usize),
) -> bool {
    for &(g, h) in pairs {
        if (g == new.0) != (h == new.1) {
            return false;
        }
    }
    let mut fwd: HashMap<usize, usize> = pairs.iter().copied().collect();
    let mut bwd: HashMap<usize, usize> = pairs.iter().map(|&(g, h)| (h, g)).collect();
    fwd.insert(new.0, new.1);
    bwd.insert(new.1, new.0);
    for (rel, tuple) in &g_board.incident[new.0] {
        if tuple.iter().all(|e| fwd.contains_key(e)) {
            let image: Vec<usize> = tuple.iter().map(|e| fwd[e]).collect();
            if !h_board.structure.has_tuple(*rel, &image) {
                return false;
            }
        }
    }
    for (rel, tuple) in &h_board.incident[new.1] {
        if tuple.iter().all(|e| bwd.contains_key(e)) {
            let pre: Vec<usize> = tuple.iter().map(|e| bwd[e]).collect();
            if !g_board.structure.has_tuple(*rel, &pre) {
                return false;
            }
        }
    }
    true
}

// The strategy core. Rules in order: repeat, extra-block mirror,
// translate near an anchor pair, land in a fresh block at the same
// landmark distance, or take the middle of a fresh block. Responses
// outside the extra block never target the full pinch.
fn respond(
    g_board: &Board,
    h_board: &Board,
    k: usize,
    pairs: &[(usize, usize)],
    side: BoardSide,
    x: usize,
) -> Result<usize, GameError> {
    let round = pairs.len() + 1;
    let fail = |reason: String| GameError::StrategyFailure { round, reason };
    if round > k {
        return Err(fail("all rounds already played".into()));
    }
    let (s_board, r_board) = match side {
        BoardSide::G => (g_board, h_board),
        BoardSide::H => (h_board, g_board),
    };
    let anchors: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(g, h)| match side {
            BoardSide::G => (g, h),
            BoardSide::H => (h, g),
        })
        .collect();
    for &(s, r) in &anchors {
        if s == x {
            return Ok(r);
        }
    }
    if s_board.kind_of(x) == BlockKind::ExtraTemplate {
        let offset = x - s_board.block_start[s_board.block_of(x)];
        let target = r_board
            .blocks
            .iter()
            .position(|k| *k == BlockKind::ExtraTemplate)
            .ok_or_else(|| fail("response board has no extra block".into()))?;
        if offset >= r_board.block_len[target] {
            return Err(fail("no mirror element in the extra block".into()));
        }
        return Ok(r_board.block_start[target] + offset);
    }
    let t = large_threshold(k, round);
    // Nearest anchor in the same block, ties to the earliest round.
    let mut best: Option<(u64, usize)> = None;
    for (j, &(s, _)) in anchors.iter().enumerate() {
        if let Some(d) = near(board_distance(s_board, x, s), t) {
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
    }
    if let Some((_, j)) = best {
        let (s_anchor, partner) = anchors[j];
        let pblock = r_board.block_of(partner);
        if r_board.blocks[pblock] == BlockKind::ExtraTemplate {
            return Err(fail("anchor partner sits in the extra block".into()));
        }
        let target_iota = r_board.iota_of(partner) as isize + s_board.iota_of(x) as isize
            - s_board.iota_of(s_anchor) as isize;
        if target_iota < 0 {
            return Err(fail(format!(
                "translated position {target_iota} leaves the block"
            )));
        }
        return r_board
            .find(pblock, target_iota as usize, s_board.payload_of(x))
            .ok_or_else(|| {
                fail(format!(
                    "no element at translated position {target_iota} in block {pblock}"
                ))
            });
    }
    let fresh = |kind_ok: &dyn Fn(BlockKind) -> bool| -> Option<usize> {
        (0..r_board.blocks.len()).find(|&b| {
            kind_ok(r_board.blocks[b])
                && !anchors.iter().any(|&(_, r)| r_board.block_of(r) == b)
        })
    };
    let dists = s_board.landmark_dists(x, false);
    let near_landmark = (0..4)
        .filter_map(|i| near(dists[i], t).map(|l| (l, i)))
        .min();
    if let Some((l, landmark)) = near_landmark {
        let np = r_board.n_prime;
        let (kind, target_iota) = match landmark {
            LEFT_PINCH => (BlockKind::Bl, l as usize),
            RIGHT_PINCH => (BlockKind::Br, np - l as usize),
            LEFT_SLICE => (BlockKind::Bl, np - 1 - l as usize),
            RIGHT_SLICE => (BlockKind::Br, 1 + l as usize),
            _ => unreachable!(),
        };
        let block = fresh(&|b| b == kind).ok_or_else(|| {
            fail(format!(
                "no fresh {} block for a move near the {}",
                kind.label(),
                LANDMARK_NAME[landmark]
            ))
        })?;
        return r_board
            .find(block, target_iota, s_board.payload_of(x))
            .ok_or_else(|| fail(format!("no element at {target_iota} in fresh block")));
    }
    let block = fresh(&|b| b == BlockKind::Br || b == BlockKind::Bl)
        .ok_or_else(|| fail("no fresh block for a far move".into()))?;
    let target_iota = match r_board.blocks[block] {
        BlockKind::Br => (1usize << k) + 1,
        _ => 1usize << k,
    };
    r_board
        .find(block, target_iota, s_board.payload_of(x))
        .ok_or_else(|| fail(format!("no element at middle position {target_iota}")))
}

/// The strategy's reply to a move on either board.
pub fn duplicator_response(
    state: &GameState<'_>,
    side: BoardSide,
    element: usize,
) -> Result<usize, GameError> {
    respond(state.g, state.h, state.k, &state.pairs, side, element)
}

// One distance-condition sweep after a completed round, returning
// the first violation. `extended` switches the slice reading.
fn check_conditions(
    g_board: &Board,
    h_board: &Board,
    pairs: &[(usize, usize)],
    k: usize,
    round: usize,
    extended: bool,
) -> Option<String> {
    let t = large_threshold(k, round);
    for l in 0..pairs.len() {
        for j in l + 1..pairs.len() {
            let dg = board_distance(g_board, pairs[l].0, pairs[j].0);
            let dh = board_distance(h_board, pairs[l].1, pairs[j].1);
            if let Some(d) = near(dg, t) {
                if dh != ExtendedNat::Fin(d) {
                    return Some(format!(
                        "condition (1) pairs {},{}: d_G={d} but d_H={dh}",
                        l + 1,
                        j + 1
                    ));
                }
            } else if near(dh, t).is_some() {
                return Some(format!(
                    "condition (2) pairs {},{}: d_G={dg} large but d_H={dh}",
                    l + 1,
                    j + 1
                ));
            }
        }
    }
    for (j, &(g, h)) in pairs.iter().enumerate() {
        let gd = g_board.landmark_dists(g, extended);
        let hd = h_board.landmark_dists(h, extended);
        for m in 0..4 {
            if let Some(l) = near(gd[m], t) {
                if hd[m] != ExtendedNat::Fin(l) {
                    return Some(format!(
                        "condition ({}) pair {}: g at distance {l} from a {}, h at {}",
                        m + 3,
                        j + 1,
                        LANDMARK_NAME[m],
                        hd[m]
                    ));
                }
            } else if let Some(l) = near(hd[m], t) {
                return Some(format!(
                    "condition ({}) dual, pair {}: h at distance {l} from a {}, g at {}",
                    m + 3,
                    j + 1,
                    LANDMARK_NAME[m],
                    gd[m]
                ));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameReport {
    pub k: usize,
    pub transcripts: u64,
    pub moves_examined: u64,
    pub duplicator_wins: bool,
    /// First counterexample transcript with its reason, if any.
    pub failure: Option<String>,
    /// Rounds where the extended slice reading disagrees with the
    /// plain one.
    pub divergences: u64,
    pub first_divergence: Option<String>,
}

struct Verifier<'a> {
    g: &'a Board,
    h: &'a Board,
    k: usize,
    pairs: Vec<(usize, usize)>,
    lines: Vec<String>,
    report: GameReport,
}

impl Verifier<'_> {
    fn transcript(&self) -> String {
        self.lines.join("\n")
    }

    // Returns false once a counterexample is recorded.
    fn play_move(&mut self, side: BoardSide, x: usize) -> bool {
        let round = self.pairs.len() + 1;
        self.report.moves_examined += 1;
        let (s_board, _) = match side {
            BoardSide::G => (self.g, self.h),
            BoardSide::H => (self.h, self.g),
        };
        let y = match respond(self.g, self.h, self.k, &self.pairs, side, x) {
            Ok(y) => y,
            Err(GameError::StrategyFailure { reason, .. }) => {
                self.lines
                    .push(format!("{round}: S@{side}:{} D:?", s_board.describe(x)));
                self.report.failure =
                    Some(format!("{}\nstrategy failure: {reason}", self.transcript()));
                return false;
            }
            Err(_) => unreachable!("respond only fails as a strategy failure"),
        };
        let pair = match side {
            BoardSide::G => (x, y),
            BoardSide::H => (y, x),
        };
        let r_board = match side {
            BoardSide::G => self.h,
            BoardSide::H => self.g,
        };
        self.lines.push(format!(
            "{round}: S@{side}:{} D:{}",
            s_board.describe(x),
            r_board.describe(y)
        ));
        if !extends_partial_iso(self.g, self.h, &self.pairs, pair) {
            self.report.failure = Some(format!(
                "{}\npartial isomorphism violated at round {round}",
                self.transcript()
            ));
            return false;
        }
        self.pairs.push(pair);
        if let Some(v) = check_conditions(self.g, self.h, &self.pairs, self.k, round, false) {
            self.report.failure = Some(format!("{}\n{v}", self.transcript()));
            return false;
        }
        if let Some(v) = check_conditions(self.g, self.h, &self.pairs, self.k, round, true) {
            self.report.divergences += 1;
            if self.report.first_divergence.is_none() {
                self.report.first_divergence = Some(format!(
                    "{}\nextended slice reading: {v}",
                    self.transcript()
                ));
            }
        }
        true
    }

    fn undo(&mut self) {
        self.pairs.pop();
        self.lines.pop();
    }

    fn explore(&mut self) -> bool {
        if self.pairs.len() == self.k {
            self.report.transcripts += 1;
            return true;
        }
        for side in [BoardSide::G, BoardSide::H] {
            let n = match side {
                BoardSide::G => self.g.size(),
                BoardSide::H => self.h.size(),
            };
            for x in 0..n {
                if !self.play_move(side, x) {
                    return false;
                }
                let ok = self.explore();
                self.undo();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

/// Drive the strategy over Spoiler move sequences on explicit
/// boards, checking the partial isomorphism and all distance
/// conditions after every round.
pub fn verify_strategy_on(
    g: &Board,
    h: &Board,
    k: usize,
    mode: VerifyMode,
    bounds: &Bounds,
) -> Result<GameReport, GameError> {
    let total = (g.size() + h.size()) as u128;
    let needed = match mode {
        VerifyMode::Exhaustive => total
            .checked_pow(k as u32)
            .unwrap_or(u128::MAX),
        VerifyMode::Random { trials, .. } => trials as u128 * k.max(1) as u128,
    };
    if needed > bounds.game_budget as u128 {
        return Err(GameError::Budget {
            needed,
            budget: bounds.game_budget,
        });
    }
    let mut v = Verifier {
        g,
        h,
        k,
        pairs: Vec::new(),
        lines: Vec::new(),
        report: GameReport {
            k,
            transcripts: 0,
            moves_examined: 0,
            duplicator_wins: true,
            failure: None,
            divergences: 0,
            first_divergence: None,
        },
    };
    match mode {
        VerifyMode::Exhaustive => {
            v.explore();
        }
        VerifyMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            'trials: for _ in 0..trials {
                v.pairs.clear();
                v.lines.clear();
                for _ in 0..k {
                    let pick = rng.gen_range(0..g.size() + h.size());
                    let (side, x) = if pick < g.size() {
                        (BoardSide::G, pick)
                    } else {
                        (BoardSide::H, pick - g.size())
                    };
                    if !v.play_move(side, x) {
                        break 'trials;
                    }
                }
                v.report.transcripts += 1;
            }
        }
    }
    v.report.duplicator_wins = v.report.failure.is_none();
    Ok(v.report)
}

/// Build the boards for a template and verify the strategy on them.
pub fn verify_strategy(
    template: &RelStructure,
    k: usize,
    mode: VerifyMode,
    bounds: &Bounds,
) -> Result<GameReport, GameError> {
    let (g, h) = build_boards(template, k, bounds)?;
    verify_strategy_on(&g, &h, k, mode, bounds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Duplicator,
    Spoiler,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Winner::Duplicator => "DUPLICATOR",
            Winner::Spoiler => "SPOILER",
        })
    }
}

/// Game-tree oracle that ignores the strategy: Duplicator wins iff
/// every Spoiler move admits a reply keeping the pairs a partial
/// isomorphism, recursively to depth k.
pub fn solve_game(
    g: &Board,
    h: &Board,
    k: usize,
    bounds: &Bounds,
) -> Result<Winner, GameError> {
    let total = (g.size() + h.size()) as u128;
    let needed = total.checked_pow(2 * k as u32).unwrap_or(u128::MAX);
    if needed > bounds.game_budget as u128 {
        return Err(GameError::Budget {
            needed,
            budget: bounds.game_budget,
        });
    }
    fn wins(g: &Board, h: &Board, pairs: &mut Vec<(usize, usize)>, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        for side in [BoardSide::G, BoardSide::H] {
            let (s_n, r_n) = match side {
                BoardSide::G => (g.size(), h.size()),
                BoardSide::H => (h.size(), g.size()),
            };
            for x in 0..s_n {
                let mut answered = false;
                for y in 0..r_n {
                    let pair = match side {
                        BoardSide::G => (x, y),
                        BoardSide::H => (y, x),
                    };
                    if extends_partial_iso(g, h, pairs, pair) {
                        pairs.push(pair);
                        let ok = wins(g, h, pairs, left - 1);
                        pairs.pop();
                        if ok {
                            answered = true;
                            break;
                        }
                    }
                }
                if !answered {
                    return false;
                }
            }
        }
        true
    }
    let mut pairs = Vec::new();
    Ok(if wins(g, h, &mut pairs, k) {
        Winner::Duplicator
    } else {
        Winner::Spoiler
    })
}
