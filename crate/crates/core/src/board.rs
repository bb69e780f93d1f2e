//! Room geometry and the action space.
//!
//! The room is a 9×9 playable area surrounded by a one-tile wall, so tile
//! coordinates run over `0..11` and the playable tiles are `1..=9` on both
//! axes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side length of the room including walls, in tiles.
pub const BOARD_TILES: u8 = 11;
/// Side length of the playable area, in tiles.
pub const ROOM_TILES: u8 = 9;
/// Where the agent starts every trial.
pub const SPAWN: TilePos = TilePos { row: 5, col: 5 };

/// A tile coordinate on the 11×11 board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TilePos {
    pub row: u8,
    pub col: u8,
}

impl TilePos {
    pub const fn new(row: u8, col: u8) -> Self {
        Self { row, col }
    }

    /// Playable tiles are the interior 9×9 block; everything else is wall.
    pub fn is_playable(self) -> bool {
        (1..=ROOM_TILES).contains(&self.row) && (1..=ROOM_TILES).contains(&self.col)
    }

    pub fn is_wall(self) -> bool {
        !self.is_playable()
    }

    /// Chebyshev distance, the number of king moves between two tiles.
    pub fn chebyshev(self, other: TilePos) -> u8 {
        self.row
            .abs_diff(other.row)
            .max(self.col.abs_diff(other.col))
    }

    /// 8-neighbourhood adjacency. A tile is not adjacent to itself.
    pub fn is_adjacent(self, other: TilePos) -> bool {
        self.chebyshev(other) == 1
    }

    /// The tile reached by moving one step in `dir`, if it stays on the board.
    pub fn offset(self, (dr, dc): (i8, i8)) -> Option<TilePos> {
        let row = self.row as i16 + dr as i16;
        let col = self.col as i16 + dc as i16;
        let range = 0..BOARD_TILES as i16;
        (range.contains(&row) && range.contains(&col)).then(|| TilePos::new(row as u8, col as u8))
    }

    /// Row-major index on the 11×11 board.
    pub fn index(self) -> usize {
        self.row as usize * BOARD_TILES as usize + self.col as usize
    }

    pub fn playable_tiles() -> impl Iterator<Item = TilePos> {
        (1..=ROOM_TILES).flat_map(|row| (1..=ROOM_TILES).map(move |col| TilePos::new(row, col)))
    }
}

impl fmt::Display for TilePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Position-type ids, in catalog order.
pub const POS_CORNER: u8 = 0;
pub const POS_HORIZONTAL_WALL: u8 = 1;
pub const POS_VERTICAL_WALL: u8 = 2;
pub const POS_CENTER: u8 = 3;
pub const POSITION_TYPES: u8 = 4;

/// The playable tiles that make up a position-type region.
///
/// Regions are pairwise disjoint and never contain [`SPAWN`].
pub fn position_region_tiles(pos_type_id: u8) -> Result<Vec<TilePos>> {
    let lo = 1;
    let hi = ROOM_TILES;
    let tiles = match pos_type_id {
        POS_CORNER => vec![
            TilePos::new(lo, lo),
            TilePos::new(lo, hi),
            TilePos::new(hi, lo),
            TilePos::new(hi, hi),
        ],
        POS_HORIZONTAL_WALL => [lo, hi]
            .into_iter()
            .flat_map(|row| (lo + 1..hi).map(move |col| TilePos::new(row, col)))
            .collect(),
        POS_VERTICAL_WALL => (lo + 1..hi)
            .flat_map(|row| [lo, hi].into_iter().map(move |col| TilePos::new(row, col)))
            .collect(),
        POS_CENTER => (SPAWN.row - 1..=SPAWN.row + 1)
            .flat_map(|row| (SPAWN.col - 1..=SPAWN.col + 1).map(move |col| TilePos::new(row, col)))
            .filter(|&t| t != SPAWN)
            .collect(),
        other => {
            return Err(Error::InvalidArgument(format!(
                "position type id {other} out of range 0..{POSITION_TYPES}"
            )))
        }
    };
    Ok(tiles)
}

/// The position type whose region contains `tile`, if any.
pub fn region_of(tile: TilePos) -> Option<u8> {
    if !tile.is_playable() {
        return None;
    }
    let edge_row = tile.row == 1 || tile.row == ROOM_TILES;
    let edge_col = tile.col == 1 || tile.col == ROOM_TILES;
    match (edge_row, edge_col) {
        (true, true) => Some(POS_CORNER),
        (true, false) => Some(POS_HORIZONTAL_WALL),
        (false, true) => Some(POS_VERTICAL_WALL),
        (false, false) => (tile.chebyshev(SPAWN) == 1).then_some(POS_CENTER),
    }
}

/// Every action the environment understands.
///
/// The first nine form the base action set; the three transforms only do
/// anything in meta-learning episodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum Action {
    N = 0,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
    NoOp,
    TransformColor,
    TransformShape,
    TransformTexture,
}

impl Action {
    pub const COUNT: usize = 12;
    pub const BASE_COUNT: usize = 9;

    pub const ALL: [Action; Self::COUNT] = [
        Action::N,
        Action::NE,
        Action::E,
        Action::SE,
        Action::S,
        Action::SW,
        Action::W,
        Action::NW,
        Action::NoOp,
        Action::TransformColor,
        Action::TransformShape,
        Action::TransformTexture,
    ];

    /// Compass moves in tie-break order.
    pub const MOVES: [Action; 8] = [
        Action::N,
        Action::NE,
        Action::E,
        Action::SE,
        Action::S,
        Action::SW,
        Action::W,
        Action::NW,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(index: u8) -> Result<Action> {
        Action::ALL
            .get(index as usize)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("action id {index} out of range")))
    }

    /// Row/column delta for compass moves.
    pub fn delta(self) -> Option<(i8, i8)> {
        Some(match self {
            Action::N => (-1, 0),
            Action::NE => (-1, 1),
            Action::E => (0, 1),
            Action::SE => (1, 1),
            Action::S => (1, 0),
            Action::SW => (1, -1),
            Action::W => (0, -1),
            Action::NW => (-1, -1),
            _ => return None,
        })
    }

    pub fn is_transform(self) -> bool {
        self.transform_dim().is_some()
    }

    pub fn transform_dim(self) -> Option<crate::catalog::FeatureDim> {
        use crate::catalog::FeatureDim;
        match self {
            Action::TransformColor => Some(FeatureDim::Color),
            Action::TransformShape => Some(FeatureDim::Shape),
            Action::TransformTexture => Some(FeatureDim::Texture),
            _ => None,
        }
    }

    pub fn transform(dim: crate::catalog::FeatureDim) -> Option<Action> {
        use crate::catalog::FeatureDim;
        match dim {
            FeatureDim::Color => Some(Action::TransformColor),
            FeatureDim::Shape => Some(Action::TransformShape),
            FeatureDim::Texture => Some(Action::TransformTexture),
            FeatureDim::Position => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = serde_json::to_value(self).ok();
        let name = name.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        f.write_str(name)
    }
}
