//! Tic-tac-toe seen from player X, who always moves first.
//!
//! Boards are nine characters in row-major order: `X` for the agent, `B` for
//! the opponent and `.` for an empty cell. Action `cK` places an X on cell
//! `K` (1-based, `c1` top-left, `c9` bottom-right). A transition covers X's
//! move and the opponent's reply, so the recorded next state is the board
//! X faces on its following turn, or the final board once the game is over.
//! Rewards are +1 for an X win, -1 for a loss and 0 otherwise.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use super::{EnvResponse, Environment};
use crate::domain::{ActionId, ExperienceTuple, StateId};
use crate::error::{Error, Result};
use crate::learner::rng_from_seed;
use crate::qtable::QTable;

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// Penalty for choosing an occupied cell; the board is left unchanged.
pub const ILLEGAL_MOVE_REWARD: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Empty,
    X,
    B,
}

impl Cell {
    fn symbol(self) -> char {
        match self {
            Cell::Empty => '.',
            Cell::X => 'X',
            Cell::B => 'B',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    XWins,
    BWins,
    Draw,
    Ongoing,
}

impl Outcome {
    pub fn is_terminal(self) -> bool {
        self != Outcome::Ongoing
    }

    /// Reward for X at the end of a game.
    pub fn reward(self) -> f64 {
        match self {
            Outcome::XWins => 1.0,
            Outcome::BWins => -1.0,
            Outcome::Draw | Outcome::Ongoing => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Board([Cell; 9]);

impl Board {
    pub fn empty() -> Self {
        Board([Cell::Empty; 9])
    }

    pub fn cell(&self, idx: usize) -> Cell {
        self.0[idx]
    }

    pub fn count(&self, cell: Cell) -> usize {
        self.0.iter().filter(|c| **c == cell).count()
    }

    pub fn empty_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..9).filter(|i| self.0[*i] == Cell::Empty)
    }

    /// Copy of the board with `mark` on `idx`, or `None` if the cell is taken.
    pub fn with_mark(&self, idx: usize, mark: Cell) -> Option<Board> {
        if idx >= 9 || self.0[idx] != Cell::Empty {
            return None;
        }
        let mut next = *self;
        next.0[idx] = mark;
        Some(next)
    }

    /// X has made as many moves as B or one more.
    pub fn has_valid_counts(&self) -> bool {
        let (x, b) = (self.count(Cell::X), self.count(Cell::B));
        x == b || x == b + 1
    }

    fn holds_line(&self, mark: Cell) -> bool {
        LINES
            .iter()
            .any(|line| line.iter().all(|i| self.0[*i] == mark))
    }

    pub fn winner(&self) -> Result<Outcome> {
        match (self.holds_line(Cell::X), self.holds_line(Cell::B)) {
            (true, true) => Err(Error::IllegalBoard(self.to_string())),
            (true, false) => Ok(Outcome::XWins),
            (false, true) => Ok(Outcome::BWins),
            (false, false) if self.count(Cell::Empty) == 0 => Ok(Outcome::Draw),
            (false, false) => Ok(Outcome::Ongoing),
        }
    }

    pub fn state_id(&self) -> StateId {
        StateId::new(self.to_string()).expect("board strings are valid identifiers")
    }
}

/// Outcome of the game on `board`.
pub fn ttt_winner(board: &Board) -> Result<Outcome> {
    board.winner()
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{}", c.symbol()))
    }
}

impl FromStr for Board {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 9 {
            return Err(Error::IllegalBoard(s.to_owned()));
        }
        let mut cells = [Cell::Empty; 9];
        for (cell, ch) in cells.iter_mut().zip(chars) {
            *cell = match ch {
                '.' => Cell::Empty,
                'X' => Cell::X,
                'B' => Cell::B,
                _ => return Err(Error::IllegalBoard(s.to_owned())),
            };
        }
        Ok(Board(cells))
    }
}

pub fn action_for_cell(idx: usize) -> ActionId {
    ActionId::new(format!("c{}", idx + 1)).expect("cell labels are valid identifiers")
}

/// Zero-based cell index named by an action label `c1`..`c9`.
pub fn cell_for_action(action: &str) -> Option<usize> {
    let k: usize = action.strip_prefix('c')?.parse().ok()?;
    (1..=9).contains(&k).then(|| k - 1)
}

/// X plays `cell` on `board`, then B replies uniformly at random.
fn play_round<R: Rng + ?Sized>(board: &Board, cell: usize, rng: &mut R) -> Result<(Board, Outcome)> {
    let after_x = board
        .with_mark(cell, Cell::X)
        .ok_or_else(|| Error::IllegalBoard(board.to_string()))?;
    let outcome = after_x.winner()?;
    if outcome.is_terminal() {
        return Ok((after_x, outcome));
    }
    let empty: Vec<usize> = after_x.empty_cells().collect();
    let reply = empty[rng.gen_range(0..empty.len())];
    let after_b = after_x.with_mark(reply, Cell::B).expect("cell is empty");
    Ok((after_b, after_b.winner()?))
}

/// Simulates random-versus-random games and records X's transitions.
///
/// Each X move yields one tuple: the board before the move, the cell played,
/// the reward (nonzero only when the game ends) and the board after B's reply
/// or the final board.
pub fn generate_games(num_games: usize, seed: u64) -> Vec<ExperienceTuple> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(num_games * 4);
    for _ in 0..num_games {
        let mut board = Board::empty();
        loop {
            let empty: Vec<usize> = board.empty_cells().collect();
            let cell = empty[rng.gen_range(0..empty.len())];
            let (next, outcome) = play_round(&board, cell, &mut rng).expect("random games stay legal");
            out.push(ExperienceTuple {
                state: board.state_id(),
                action: action_for_cell(cell),
                reward: outcome.reward(),
                next_state: next.state_id(),
            });
            if outcome.is_terminal() {
                break;
            }
            board = next;
        }
    }
    out
}

/// Plays one game against a uniformly random B. `choose` picks X's cell and
/// must return an empty one.
pub fn play_against_random<R, F>(mut choose: F, rng: &mut R) -> Result<Outcome>
where
    R: Rng + ?Sized,
    F: FnMut(&Board) -> usize,
{
    let mut board = Board::empty();
    loop {
        let cell = choose(&board);
        let (next, outcome) = play_round(&board, cell, rng)?;
        if outcome.is_terminal() {
            return Ok(outcome);
        }
        board = next;
    }
}

/// Legal cell with the highest value in `q`, ties going to the lowest cell.
/// Boards the table has never seen fall back to the first empty cell.
pub fn greedy_move(q: &QTable, board: &Board) -> Option<usize> {
    let state = board.to_string();
    let mut best: Option<(usize, f64)> = None;
    for cell in board.empty_cells() {
        let v = q.q_value(&state, action_for_cell(cell).as_str());
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((cell, v));
        }
    }
    best.map(|(cell, _)| cell)
}

/// Tic-tac-toe against a uniformly random opponent.
///
/// States are every board reachable at X's turn plus every final board.
/// Final boards absorb with reward 0.
#[derive(Debug, Clone)]
pub struct TicTacToe {
    states: Vec<StateId>,
    actions: Vec<ActionId>,
}

impl TicTacToe {
    pub const NAME: &'static str = "tictactoe";

    pub fn new() -> Self {
        Self {
            states: reachable_boards().iter().map(Board::state_id).collect(),
            actions: (0..9).map(action_for_cell).collect(),
        }
    }

    fn parse(state: &StateId, action: &ActionId) -> Result<(Board, usize)> {
        let board: Board = state.as_str().parse()?;
        let x_to_move = board.count(Cell::X) == board.count(Cell::B);
        if !board.has_valid_counts() || !(x_to_move || board.winner()?.is_terminal()) {
            return Err(Error::UnknownState(state.to_string()));
        }
        let cell = cell_for_action(action.as_str()).ok_or_else(|| Error::UnknownAction(action.to_string()))?;
        Ok((board, cell))
    }
}

impl Default for TicTacToe {
    fn default() -> Self {
        Self::new()
    }
}

/// Breadth-first enumeration of X-to-move and final boards.
fn reachable_boards() -> Vec<Board> {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([Board::empty()]);
    seen.insert(Board::empty());
    while let Some(board) = queue.pop_front() {
        order.push(board);
        if board.winner().expect("reachable boards are legal").is_terminal() {
            continue;
        }
        for x in board.empty_cells() {
            let after_x = board.with_mark(x, Cell::X).unwrap();
            let mut next = Vec::new();
            if after_x.winner().unwrap().is_terminal() {
                next.push(after_x);
            } else {
                next.extend(after_x.empty_cells().map(|b| after_x.with_mark(b, Cell::B).unwrap()));
            }
            for n in next {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
    }
    order
}

impl Environment for TicTacToe {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn states(&self) -> &[StateId] {
        &self.states
    }

    fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    fn step(&self, state: &StateId, action: &ActionId, mut rng: &mut dyn RngCore) -> Result<EnvResponse> {
        let (board, cell) = Self::parse(state, action)?;
        if board.winner()?.is_terminal() {
            return EnvResponse::new(state.clone(), 0.0);
        }
        if board.cell(cell) != Cell::Empty {
            return EnvResponse::new(state.clone(), ILLEGAL_MOVE_REWARD);
        }
        let (next, outcome) = play_round(&board, cell, &mut rng)?;
        EnvResponse::new(next.state_id(), outcome.reward())
    }

    fn transitions(&self, state: &StateId, action: &ActionId) -> Option<Result<Vec<(f64, EnvResponse)>>> {
        let enumerate = || -> Result<Vec<(f64, EnvResponse)>> {
            let (board, cell) = Self::parse(state, action)?;
            if board.winner()?.is_terminal() {
                return Ok(vec![(1.0, EnvResponse::new(state.clone(), 0.0)?)]);
            }
            let Some(after_x) = board.with_mark(cell, Cell::X) else {
                return Ok(vec![(1.0, EnvResponse::new(state.clone(), ILLEGAL_MOVE_REWARD)?)]);
            };
            let outcome = after_x.winner()?;
            if outcome.is_terminal() {
                return Ok(vec![(1.0, EnvResponse::new(after_x.state_id(), outcome.reward())?)]);
            }
            let replies: Vec<usize> = after_x.empty_cells().collect();
            let p = 1.0 / replies.len() as f64;
            replies
                .into_iter()
                .map(|r| {
                    let after_b = after_x.with_mark(r, Cell::B).unwrap();
                    Ok((p, EnvResponse::new(after_b.state_id(), after_b.winner()?.reward())?))
                })
                .collect()
        };
        Some(enumerate())
    }
}
