//! Space-time diagrams: one row per time step, one column per cell.

use std::fmt::Write as _;

use ringmaj::{Configuration, StabilityMap};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Svg,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub overlay: bool,
    /// Pixels per cell for the image formats.
    pub cell_size: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("stability overlay is not available for pgm output")]
    OverlayUnavailable,
    #[error("overlay needs one stability map per state ({states} states, {maps} maps)")]
    MissingLabels { states: usize, maps: usize },
    #[error("nothing to render")]
    Empty,
}

const LIGHT: u8 = 0xdd;
const DARK: u8 = 0x22;

pub fn render_spacetime(
    states: &[Configuration],
    maps: &[StabilityMap],
    spec: RenderSpec,
) -> Result<Vec<u8>, RenderError> {
    if states.is_empty() {
        return Err(RenderError::Empty);
    }
    if spec.overlay && spec.format == Format::Pgm {
        return Err(RenderError::OverlayUnavailable);
    }
    if spec.overlay && maps.len() != states.len() {
        return Err(RenderError::MissingLabels {
            states: states.len(),
            maps: maps.len(),
        });
    }
    let labels = spec.overlay.then_some(maps);
    Ok(match spec.format {
        Format::Text => text(states, labels).into_bytes(),
        Format::Svg => svg(states, labels, spec.cell_size).into_bytes(),
        Format::Pgm => pgm(states, spec.cell_size),
    })
}

fn text(states: &[Configuration], labels: Option<&[StabilityMap]>) -> String {
    let mut out = String::new();
    for (t, s) in states.iter().enumerate() {
        out.extend(s.bits().map(|b| if b == 1 { '#' } else { '.' }));
        if let Some(maps) = labels {
            out.push(' ');
            out.push_str(&maps[t].letters());
        }
        out.push('\n');
    }
    out
}

fn svg(states: &[Configuration], labels: Option<&[StabilityMap]>, cs: usize) -> String {
    let n = states[0].n();
    let (w, h) = (n * cs, states.len() * cs);
    let half = cs as f64 / 2.0;
    let font = (cs * 7 / 10).max(1);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    for (t, s) in states.iter().enumerate() {
        for (i, b) in s.bits().enumerate() {
            let (x, y) = (i * cs, t * cs);
            let (fill, ink) = if b == 1 { (DARK, LIGHT) } else { (LIGHT, DARK) };
            let _ = writeln!(
                out,
                r##"<rect x="{x}" y="{y}" width="{cs}" height="{cs}" fill="#{fill:02x}{fill:02x}{fill:02x}"/>"##
            );
            if let Some(maps) = labels {
                let _ = writeln!(
                    out,
                    r##"<text x="{}" y="{}" font-size="{font}" font-family="monospace" text-anchor="middle" dominant-baseline="central" fill="#{ink:02x}{ink:02x}{ink:02x}">{}</text>"##,
                    x as f64 + half,
                    y as f64 + half,
                    maps[t].get(i).letter(),
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn pgm(states: &[Configuration], cs: usize) -> Vec<u8> {
    let n = states[0].n();
    let (w, h) = (n * cs, states.len() * cs);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    for s in states {
        let row: Vec<u8> = s
            .bits()
            .flat_map(|b| std::iter::repeat_n(if b == 1 { DARK } else { LIGHT }, cs))
            .collect();
        for _ in 0..cs {
            out.extend_from_slice(&row);
        }
    }
    out
}
