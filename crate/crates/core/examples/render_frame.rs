//! Render the first frame of an episode to PNG and decode it back into
//! objects.

use oddity::render::Percept;
use oddity::{EpisodeConfig, TaskKind, WorldState};

fn main() -> oddity::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "frame.png".into());
    let (state, first) = WorldState::reset(&EpisodeConfig::new(TaskKind::Basic, 3))?;
    let frame = first.observation.pixels.expect("rendering is on");
    frame.write_png(std::path::Path::new(&out))?;
    println!("wrote {}x{} frame to {out}", frame.width(), frame.height());

    let decoded = Percept::decode(&frame)?;
    assert_eq!(decoded, Percept::of_state(&state));
    for o in &decoded.objects {
        println!(
            "{} color={} shape={} texture={}",
            o.tile, o.color, o.shape, o.texture
        );
    }
    Ok(())
}
