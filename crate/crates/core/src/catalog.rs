//! The fixed feature universe: 19 colors, 11 shapes, 6 textures and 4
//! position types, together with the sprite data used by the renderer.
//!
//! Names are single vocabulary tokens. Shape names pluralize by appending
//! `s`, which the reward explanations rely on.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::board::{self, TilePos, POSITION_TYPES};
use crate::error::{Error, Result};

/// The four axes along which objects vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureDim {
    Color,
    Shape,
    Texture,
    Position,
}

impl FeatureDim {
    pub const ALL: [FeatureDim; 4] = [
        FeatureDim::Color,
        FeatureDim::Shape,
        FeatureDim::Texture,
        FeatureDim::Position,
    ];

    /// The dimensions a magic wand can change.
    pub const ATTRIBUTES: [FeatureDim; 3] =
        [FeatureDim::Color, FeatureDim::Shape, FeatureDim::Texture];

    /// Slot order used by every explanation template.
    pub const SLOT_ORDER: [FeatureDim; 4] = [
        FeatureDim::Color,
        FeatureDim::Texture,
        FeatureDim::Shape,
        FeatureDim::Position,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureDim::Color => "color",
            FeatureDim::Shape => "shape",
            FeatureDim::Texture => "texture",
            FeatureDim::Position => "position",
        }
    }

    pub fn from_name(name: &str) -> Option<FeatureDim> {
        FeatureDim::ALL.into_iter().find(|d| d.name() == name)
    }

    /// Number of catalog values along this dimension.
    pub fn cardinality(self) -> usize {
        let catalog = canonical_catalog();
        match self {
            FeatureDim::Color => catalog.colors.len(),
            FeatureDim::Shape => catalog.shapes.len(),
            FeatureDim::Texture => catalog.textures.len(),
            FeatureDim::Position => catalog.position_types.len(),
        }
    }
}

impl fmt::Display for FeatureDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// A 9×9 binary mask, one `u16` per row with bit `c` set for column `c`.
pub type Mask9 = [u16; 9];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorEntry {
    pub name: &'static str,
    pub rgb: [u8; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeEntry {
    pub name: &'static str,
    pub mask: Mask9,
}

impl ShapeEntry {
    pub fn plural(&self) -> String {
        format!("{}s", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextureEntry {
    pub name: &'static str,
    /// Coverage mask ANDed with a shape mask.
    pub mask: Mask9,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionEntry {
    pub name: &'static str,
    pub tiles: Vec<TilePos>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureCatalog {
    pub colors: Vec<ColorEntry>,
    pub shapes: Vec<ShapeEntry>,
    pub textures: Vec<TextureEntry>,
    pub position_types: Vec<PositionEntry>,
}

const COLORS: [(&str, [u8; 3]); 19] = [
    ("red", [230, 25, 75]),
    ("green", [60, 180, 75]),
    ("blue", [0, 130, 200]),
    ("yellow", [255, 225, 25]),
    ("purple", [145, 30, 180]),
    ("orange", [245, 130, 48]),
    ("pink", [250, 190, 212]),
    ("cyan", [70, 240, 240]),
    ("magenta", [240, 50, 230]),
    ("lavender", [220, 190, 255]),
    ("brown", [170, 110, 40]),
    ("olive", [128, 128, 0]),
    ("teal", [0, 128, 128]),
    ("navy", [0, 0, 128]),
    ("maroon", [128, 0, 0]),
    ("lime", [210, 245, 60]),
    ("gold", [200, 160, 0]),
    ("salmon", [250, 128, 114]),
    ("turquoise", [64, 224, 208]),
];

const SHAPES: [(&str, [&str; 9]); 11] = [
    (
        "triangle",
        [
            "....#....",
            "...###...",
            "...###...",
            "..#####..",
            "..#####..",
            ".#######.",
            ".#######.",
            "#########",
            ".........",
        ],
    ),
    (
        "tee",
        [
            ".........",
            "#########",
            "#########",
            "...###...",
            "...###...",
            "...###...",
            "...###...",
            "...###...",
            ".........",
        ],
    ),
    (
        "square",
        [
            ".........",
            ".#######.",
            ".#######.",
            ".#######.",
            ".#######.",
            ".#######.",
            ".#######.",
            ".#######.",
            ".........",
        ],
    ),
    (
        "circle",
        [
            "...###...",
            ".#######.",
            ".#######.",
            "#########",
            "#########",
            "#########",
            ".#######.",
            ".#######.",
            "...###...",
        ],
    ),
    (
        "diamond",
        [
            "....#....",
            "...###...",
            "..#####..",
            ".#######.",
            "#########",
            ".#######.",
            "..#####..",
            "...###...",
            "....#....",
        ],
    ),
    (
        "heart",
        [
            ".........",
            ".##...##.",
            "####.####",
            "#########",
            "#########",
            ".#######.",
            "..#####..",
            "...###...",
            "....#....",
        ],
    ),
    (
        "star",
        [
            "....#....",
            "....#....",
            "...###...",
            "#########",
            ".#######.",
            "..#####..",
            "..##.##..",
            ".##...##.",
            ".#.....#.",
        ],
    ),
    (
        "ring",
        [
            "..#####..",
            ".#######.",
            "##.....##",
            "##.....##",
            "##.....##",
            "##.....##",
            "##.....##",
            ".#######.",
            "..#####..",
        ],
    ),
    (
        "pentagon",
        [
            "....#....",
            "..#####..",
            ".#######.",
            "#########",
            "#########",
            ".#######.",
            ".#######.",
            ".#######.",
            ".........",
        ],
    ),
    (
        "hexagon",
        [
            ".........",
            "..#####..",
            ".#######.",
            "#########",
            "#########",
            "#########",
            ".#######.",
            "..#####..",
            ".........",
        ],
    ),
    (
        "arrow",
        [
            "....#....",
            "...###...",
            "..#####..",
            ".#######.",
            "#########",
            "...###...",
            "...###...",
            "...###...",
            "...###...",
        ],
    ),
];

const TEXTURES: [&str; 6] = [
    "solid",
    "horizontal-striped",
    "vertical-striped",
    "checkered",
    "diagonal-striped",
    "dotted",
];

const POSITION_NAMES: [&str; 4] = [
    "in-the-corner",
    "against-horizontal-wall",
    "against-vertical-wall",
    "in-the-center",
];

fn parse_mask(rows: &[&str; 9]) -> Mask9 {
    let mut mask = [0u16; 9];
    for (r, row) in rows.iter().enumerate() {
        for (c, ch) in row.bytes().enumerate() {
            if ch == b'#' {
                mask[r] |= 1 << c;
            }
        }
    }
    mask
}

fn texture_mask(name: &str) -> Mask9 {
    let covered = |r: usize, c: usize| match name {
        "solid" => true,
        "horizontal-striped" => r.is_multiple_of(2),
        "vertical-striped" => c.is_multiple_of(2),
        "checkered" => (r + c).is_multiple_of(2),
        "diagonal-striped" => (r + c) % 3 != 2,
        "dotted" => !(r % 3 == 1 && c % 3 == 1),
        _ => unreachable!("unknown texture {name}"),
    };
    let mut mask = [0u16; 9];
    for (r, row) in mask.iter_mut().enumerate() {
        for c in 0..9 {
            if covered(r, c) {
                *row |= 1 << c;
            }
        }
    }
    mask
}

fn build_catalog() -> FeatureCatalog {
    FeatureCatalog {
        colors: COLORS
            .iter()
            .map(|&(name, rgb)| ColorEntry { name, rgb })
            .collect(),
        shapes: SHAPES
            .iter()
            .map(|(name, rows)| ShapeEntry {
                name,
                mask: parse_mask(rows),
            })
            .collect(),
        textures: TEXTURES
            .iter()
            .map(|&name| TextureEntry {
                name,
                mask: texture_mask(name),
            })
            .collect(),
        position_types: (0..POSITION_TYPES)
            .map(|id| PositionEntry {
                name: POSITION_NAMES[id as usize],
                tiles: board::position_region_tiles(id).expect("static region ids"),
            })
            .collect(),
    }
}

/// The single fixed catalog shared by the whole crate.
pub fn canonical_catalog() -> &'static FeatureCatalog {
    static CATALOG: OnceLock<FeatureCatalog> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// Catalog name of value `id` along `dim`.
pub fn feature_name(dim: FeatureDim, id: u8) -> Result<&'static str> {
    let catalog = canonical_catalog();
    let i = id as usize;
    let name = match dim {
        FeatureDim::Color => catalog.colors.get(i).map(|e| e.name),
        FeatureDim::Shape => catalog.shapes.get(i).map(|e| e.name),
        FeatureDim::Texture => catalog.textures.get(i).map(|e| e.name),
        FeatureDim::Position => catalog.position_types.get(i).map(|e| e.name),
    };
    name.ok_or_else(|| Error::InvalidArgument(format!("{dim} id {id} out of range")))
}

/// Reverse lookup of [`feature_name`].
pub fn feature_id(dim: FeatureDim, name: &str) -> Option<u8> {
    (0..dim.cardinality() as u8).find(|&id| feature_name(dim, id).ok() == Some(name))
}

fn mask_hex(mask: &Mask9) -> String {
    mask.iter()
        .map(|row| format!("{row:03x}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl FeatureCatalog {
    /// Plain-text table: `dimension<TAB>id<TAB>name<TAB>render-data-in-hex`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, c) in self.colors.iter().enumerate() {
            let hex = format!("{:02x}{:02x}{:02x}", c.rgb[0], c.rgb[1], c.rgb[2]);
            out.push_str(&format!("color\t{id}\t{}\t{hex}\n", c.name));
        }
        for (id, s) in self.shapes.iter().enumerate() {
            out.push_str(&format!("shape\t{id}\t{}\t{}\n", s.name, mask_hex(&s.mask)));
        }
        for (id, t) in self.textures.iter().enumerate() {
            out.push_str(&format!(
                "texture\t{id}\t{}\t{}\n",
                t.name,
                mask_hex(&t.mask)
            ));
        }
        for (id, p) in self.position_types.iter().enumerate() {
            let tiles: Vec<_> = p
                .tiles
                .iter()
                .map(|t| format!("{:02x}{:02x}", t.row, t.col))
                .collect();
            out.push_str(&format!(
                "position\t{id}\t{}\t{}\n",
                p.name,
                tiles.join(",")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cardinalities() {
        let c = canonical_catalog();
        assert_eq!(c.colors.len(), 19);
        assert_eq!(c.shapes.len(), 11);
        assert_eq!(c.textures.len(), 6);
        assert_eq!(c.position_types.len(), 4);
    }

    #[test]
    fn includes_quoted_names() {
        let c = canonical_catalog();
        let colors: Vec<_> = c.colors.iter().map(|e| e.name).collect();
        let shapes: Vec<_> = c.shapes.iter().map(|e| e.name).collect();
        let textures: Vec<_> = c.textures.iter().map(|e| e.name).collect();
        let positions: Vec<_> = c.position_types.iter().map(|e| e.name).collect();
        for name in ["red", "green", "lavender"] {
            assert!(colors.contains(&name));
        }
        for name in ["triangle", "tee", "square"] {
            assert!(shapes.contains(&name));
        }
        for name in ["horizontal-striped", "checkered"] {
            assert!(textures.contains(&name));
        }
        assert_eq!(
            positions,
            [
                "in-the-corner",
                "against-horizontal-wall",
                "against-vertical-wall",
                "in-the-center"
            ]
        );
    }

    #[test]
    fn repeated_calls_are_identical() {
        assert_eq!(build_catalog(), build_catalog());
        assert_eq!(canonical_catalog().dump(), build_catalog().dump());
    }

    #[test]
    fn names_are_single_tokens_and_injective() {
        let mut all = HashSet::new();
        for dim in FeatureDim::ALL {
            let mut seen = HashSet::new();
            for id in 0..dim.cardinality() as u8 {
                let name = feature_name(dim, id).unwrap();
                assert!(!name.contains(char::is_whitespace));
                assert!(seen.insert(name));
                assert!(all.insert(name), "{name} reused across dimensions");
                assert_eq!(feature_id(dim, name), Some(id));
            }
        }
    }

    #[test]
    fn feature_name_examples() {
        let striped = feature_id(FeatureDim::Texture, "horizontal-striped").unwrap();
        assert_eq!(
            feature_name(FeatureDim::Texture, striped).unwrap(),
            "horizontal-striped"
        );
        assert_eq!(
            feature_name(FeatureDim::Position, 0).unwrap(),
            "in-the-corner"
        );
        assert!(feature_name(FeatureDim::Shape, 11).is_err());
    }

    #[test]
    fn palette_avoids_reserved_render_colors() {
        for c in &canonical_catalog().colors {
            assert!(
                ![[0, 0, 0], [96, 96, 96], [255, 255, 255]].contains(&c.rgb),
                "{}",
                c.name
            );
        }
        let distinct: HashSet<_> = canonical_catalog().colors.iter().map(|c| c.rgb).collect();
        assert_eq!(distinct.len(), 19);
    }

    #[test]
    fn horizontal_stripes_zero_alternate_rows() {
        let t = &canonical_catalog().textures
            [feature_id(FeatureDim::Texture, "horizontal-striped").unwrap() as usize];
        for (r, row) in t.mask.iter().enumerate() {
            assert_eq!(*row, if r % 2 == 0 { 0x1ff } else { 0 });
        }
    }
}
