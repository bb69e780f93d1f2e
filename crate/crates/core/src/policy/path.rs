//! 8-connected breadth-first search over the room.

use crate::board::{Action, TilePos, BOARD_TILES};
use crate::error::{Error, Result};

const CELLS: usize = BOARD_TILES as usize * BOARD_TILES as usize;

/// Shortest action sequence from `from` to any tile in `goals`, avoiding
/// walls and `obstacles`. Neighbours are expanded in N, NE, E, SE, S, SW,
/// W, NW order, which fixes the tie-break between equal-length paths.
pub fn path_to_any(from: TilePos, goals: &[TilePos], obstacles: &[TilePos]) -> Option<Vec<Action>> {
    if goals.contains(&from) {
        return Some(Vec::new());
    }
    let mut parent: [Option<(TilePos, Action)>; CELLS] = [None; CELLS];
    let mut visited = [false; CELLS];
    visited[from.index()] = true;
    let mut frontier = std::collections::VecDeque::from([from]);
    while let Some(tile) = frontier.pop_front() {
        for action in Action::MOVES {
            let Some(next) = tile.offset(action.delta().expect("compass move")) else {
                continue;
            };
            if !next.is_playable() || visited[next.index()] || obstacles.contains(&next) {
                continue;
            }
            visited[next.index()] = true;
            parent[next.index()] = Some((tile, action));
            if goals.contains(&next) {
                let mut path = vec![action];
                let mut cur = tile;
                while let Some((prev, a)) = parent[cur.index()] {
                    path.push(a);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            frontier.push_back(next);
        }
    }
    None
}

/// Minimal-length 8-connected path from `from` to `to`.
pub fn shortest_path(from: TilePos, to: TilePos, obstacles: &[TilePos]) -> Result<Vec<Action>> {
    let no_path = || Error::NoPath {
        from: from.to_string(),
        to: to.to_string(),
    };
    if !from.is_playable() || !to.is_playable() || obstacles.contains(&to) {
        return Err(no_path());
    }
    path_to_any(from, &[to], obstacles).ok_or_else(no_path)
}

/// First move toward `to`, or `NoOp` when already there or unreachable.
pub fn step_toward(from: TilePos, to: TilePos, obstacles: &[TilePos]) -> Action {
    shortest_path(from, to, obstacles)
        .ok()
        .and_then(|p| p.first().copied())
        .unwrap_or(Action::NoOp)
}
