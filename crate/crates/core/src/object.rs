use serde::{Deserialize, Serialize};

use crate::board::{region_of, TilePos};
use crate::catalog::{feature_name, FeatureDim};

/// One object in a room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub color: u8,
    pub shape: u8,
    pub texture: u8,
    pub pos_type: u8,
    pub tile: TilePos,
    pub alive: bool,
}

impl ObjectSpec {
    /// Value id along `dim`. Position is the position type, not the tile.
    pub fn value(&self, dim: FeatureDim) -> u8 {
        match dim {
            FeatureDim::Color => self.color,
            FeatureDim::Shape => self.shape,
            FeatureDim::Texture => self.texture,
            FeatureDim::Position => self.pos_type,
        }
    }

    pub fn set_value(&mut self, dim: FeatureDim, value: u8) {
        match dim {
            FeatureDim::Color => self.color = value,
            FeatureDim::Shape => self.shape = value,
            FeatureDim::Texture => self.texture = value,
            FeatureDim::Position => self.pos_type = value,
        }
    }

    pub fn name(&self, dim: FeatureDim) -> &'static str {
        feature_name(dim, self.value(dim)).expect("object values are catalog ids")
    }

    /// The tile lies inside the region of the object's position type.
    pub fn is_placed_consistently(&self) -> bool {
        region_of(self.tile) == Some(self.pos_type)
    }
}

/// Column of values along `dim`, one per object.
pub fn values(objects: &[ObjectSpec], dim: FeatureDim) -> Vec<u8> {
    objects.iter().map(|o| o.value(dim)).collect()
}
