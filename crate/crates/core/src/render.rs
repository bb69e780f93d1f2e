//! Rasterization of a room into a 99×99 RGB frame, 9 pixels per tile.
//!
//! Floor is black, walls are gray and the agent is a solid white tile
//! drawn last. Object sprites are the shape mask ANDed with the texture
//! mask, painted in the object color over the floor.

use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::board::{TilePos, BOARD_TILES};
use crate::catalog::{canonical_catalog, Mask9};
use crate::engine::WorldState;
use crate::error::{Error, Result};
use crate::object::ObjectSpec;

pub const TILE_PX: usize = 9;
pub const FRAME_PX: usize = TILE_PX * BOARD_TILES as usize;
pub const CHANNELS: usize = 3;

pub const FLOOR_RGB: [u8; 3] = [0, 0, 0];
pub const WALL_RGB: [u8; 3] = [96, 96, 96];
pub const AGENT_RGB: [u8; 3] = [255, 255, 255];

/// Row-major RGB frame of 99×99 pixels.
#[derive(Clone, PartialEq, Eq)]
pub struct PixelBuffer {
    data: Vec<u8>,
}

impl std::fmt::Debug for PixelBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PixelBuffer({}x{}x{})", FRAME_PX, FRAME_PX, CHANNELS)
    }
}

impl PixelBuffer {
    pub fn width(&self) -> usize {
        FRAME_PX
    }

    pub fn height(&self) -> usize {
        FRAME_PX
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * FRAME_PX + x) * CHANNELS;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    fn fill_tile(&mut self, tile: TilePos, rgb: [u8; 3]) {
        self.paint_mask(tile, &[0x1ff; 9], rgb);
    }

    fn paint_mask(&mut self, tile: TilePos, mask: &Mask9, rgb: [u8; 3]) {
        let x0 = tile.col as usize * TILE_PX;
        let y0 = tile.row as usize * TILE_PX;
        for (r, bits) in mask.iter().enumerate() {
            let row_start = ((y0 + r) * FRAME_PX + x0) * CHANNELS;
            for c in 0..TILE_PX {
                if bits & (1 << c) != 0 {
                    let i = row_start + c * CHANNELS;
                    self.data[i..i + CHANNELS].copy_from_slice(&rgb);
                }
            }
        }
    }

    fn tile_patch(&self, tile: TilePos) -> [[u8; 3]; TILE_PX * TILE_PX] {
        let x0 = tile.col as usize * TILE_PX;
        let y0 = tile.row as usize * TILE_PX;
        std::array::from_fn(|k| self.pixel(x0 + k % TILE_PX, y0 + k / TILE_PX))
    }

    /// Encode as an 8-bit RGB PNG.
    pub fn write_png(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut encoder = png::Encoder::new(
            std::io::BufWriter::new(file),
            FRAME_PX as u32,
            FRAME_PX as u32,
        );
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&self.data)?;
        writer.finish()?;
        Ok(())
    }

    /// The bare RGB buffer, no header.
    pub fn write_raw(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(&self.data)?;
        Ok(())
    }
}

/// Precomputed sprite masks, one per (shape, texture).
#[derive(Debug)]
pub struct SpriteAtlas {
    textures: usize,
    masks: Vec<Mask9>,
}

impl SpriteAtlas {
    fn build() -> Self {
        let catalog = canonical_catalog();
        let mut masks = Vec::with_capacity(catalog.shapes.len() * catalog.textures.len());
        for shape in &catalog.shapes {
            for texture in &catalog.textures {
                masks.push(std::array::from_fn(|r| shape.mask[r] & texture.mask[r]));
            }
        }
        Self {
            textures: catalog.textures.len(),
            masks,
        }
    }

    pub fn mask(&self, shape: u8, texture: u8) -> Option<&Mask9> {
        if texture as usize >= self.textures {
            return None;
        }
        self.masks
            .get(shape as usize * self.textures + texture as usize)
    }

    /// Reverse lookup from a rendered coverage mask.
    pub fn lookup(&self, mask: &Mask9) -> Option<(u8, u8)> {
        let k = self.masks.iter().position(|m| m == mask)?;
        Some(((k / self.textures) as u8, (k % self.textures) as u8))
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

pub fn sprite_atlas() -> &'static SpriteAtlas {
    static ATLAS: OnceLock<SpriteAtlas> = OnceLock::new();
    ATLAS.get_or_init(SpriteAtlas::build)
}

/// A 9×9 RGB patch for one sprite over the floor color.
pub fn render_sprite(shape: u8, texture: u8, rgb: [u8; 3]) -> Result<[[u8; 3]; TILE_PX * TILE_PX]> {
    let mask = sprite_atlas().mask(shape, texture).ok_or_else(|| {
        Error::InvalidArgument(format!("no sprite for shape {shape} texture {texture}"))
    })?;
    Ok(std::array::from_fn(|k| {
        if mask[k / TILE_PX] & (1 << (k % TILE_PX)) != 0 {
            rgb
        } else {
            FLOOR_RGB
        }
    }))
}

fn background() -> &'static PixelBuffer {
    static BG: OnceLock<PixelBuffer> = OnceLock::new();
    BG.get_or_init(|| {
        let mut frame = PixelBuffer {
            data: vec![0; FRAME_PX * FRAME_PX * CHANNELS],
        };
        for row in 0..BOARD_TILES {
            for col in 0..BOARD_TILES {
                let tile = TilePos::new(row, col);
                frame.fill_tile(tile, if tile.is_wall() { WALL_RGB } else { FLOOR_RGB });
            }
        }
        frame
    })
}

/// Draw alive objects then the agent on top.
pub fn render_room(objects: &[ObjectSpec], agent: TilePos) -> PixelBuffer {
    let catalog = canonical_catalog();
    let atlas = sprite_atlas();
    let mut frame = background().clone();
    for obj in objects.iter().filter(|o| o.alive) {
        let rgb = catalog.colors[obj.color as usize].rgb;
        let mask = atlas.mask(obj.shape, obj.texture).expect("catalog ids");
        frame.paint_mask(obj.tile, mask, rgb);
    }
    frame.fill_tile(agent, AGENT_RGB);
    frame
}

pub fn render_frame(state: &WorldState) -> PixelBuffer {
    render_room(state.objects(), state.agent())
}

/// An object as the agent can see it: where it is and what it looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibleObject {
    pub tile: TilePos,
    pub color: u8,
    pub shape: u8,
    pub texture: u8,
}

/// The visible content of a frame. Objects are listed in row-major tile
/// order, which carries no information about internal object indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Percept {
    pub agent: TilePos,
    pub objects: Vec<VisibleObject>,
}

impl Percept {
    /// What a frame of `state` shows, without rasterizing it.
    pub fn of_state(state: &WorldState) -> Percept {
        let agent = state.agent();
        let mut objects: Vec<VisibleObject> = state
            .objects()
            .iter()
            .filter(|o| o.alive && o.tile != agent)
            .map(|o| VisibleObject {
                tile: o.tile,
                color: o.color,
                shape: o.shape,
                texture: o.texture,
            })
            .collect();
        objects.sort_by_key(|o| o.tile);
        Percept { agent, objects }
    }

    /// Recover the percept from pixels.
    pub fn decode(frame: &PixelBuffer) -> Result<Percept> {
        let catalog = canonical_catalog();
        let atlas = sprite_atlas();
        let mut agent = None;
        let mut objects = Vec::new();
        for tile in TilePos::playable_tiles() {
            let patch = frame.tile_patch(tile);
            if patch.iter().all(|&p| p == AGENT_RGB) {
                agent = Some(tile);
                continue;
            }
            let Some(&rgb) = patch.iter().find(|&&p| p != FLOOR_RGB) else {
                continue;
            };
            let mut mask = [0u16; 9];
            for (k, p) in patch.iter().enumerate() {
                if *p != FLOOR_RGB {
                    if *p != rgb {
                        return Err(Error::InvalidArgument(format!("tile {tile} mixes colors")));
                    }
                    mask[k / TILE_PX] |= 1 << (k % TILE_PX);
                }
            }
            let color = catalog
                .colors
                .iter()
                .position(|c| c.rgb == rgb)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown color {rgb:?} at {tile}"))
                })?;
            let (shape, texture) = atlas
                .lookup(&mask)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown sprite at {tile}")))?;
            objects.push(VisibleObject {
                tile,
                color: color as u8,
                shape,
                texture,
            });
        }
        let agent = agent.ok_or_else(|| Error::InvalidArgument("no agent in frame".into()))?;
        Ok(Percept { agent, objects })
    }
}
