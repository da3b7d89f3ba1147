//! Configuration dump formats: PBM text grids and SVG for d = 2, plus a raw
//! binary format for any dimension (header, then the packed payload
//! row-major with the last axis fastest).

use std::io::{self, Read, Write};

use super::{Boundary, Configuration, LatticeError, Layout};

const RAW_MAGIC: &[u8; 8] = b"ERODRAW1";

/// Plain PBM (P1): rows printed north to south so the text looks like the
/// plane, columns west to east.
pub fn to_pbm(cfg: &Configuration) -> Result<String, LatticeError> {
    let layout = cfg.layout();
    if layout.dimension() != 2 {
        return Err(LatticeError::InvalidWindow(
            "PBM output requires a two-dimensional window".into(),
        ));
    }
    let width = layout.extent(0);
    let height = layout.extent(1);
    let mut s = String::new();
    s.push_str(&format!("P1\n# window x [{}, {}] y [{}, {}] boundary {}\n{} {}\n",
        layout.lo[0], layout.hi[0], layout.lo[1], layout.hi[1], cfg.boundary(), width, height));
    for j in (layout.lo[1]..=layout.hi[1]).rev() {
        for i in layout.lo[0]..=layout.hi[0] {
            s.push(if cfg.get(&[i, j]) { '1' } else { '0' });
            if i < layout.hi[0] {
                s.push(' ');
            }
        }
        s.push('\n');
    }
    Ok(s)
}

/// Minimal SVG rendering: one black unit square per one.
pub fn to_svg(cfg: &Configuration) -> Result<String, LatticeError> {
    let layout = cfg.layout();
    if layout.dimension() != 2 {
        return Err(LatticeError::InvalidWindow(
            "SVG output requires a two-dimensional window".into(),
        ));
    }
    let w = layout.extent(0);
    let h = layout.extent(1);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" \
         shape-rendering=\"crispEdges\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    for site in cfg.iter_ones() {
        let x = site[0] - layout.lo[0];
        let y = layout.hi[1] - site[1]; // svg y grows downward; flip north up
        s.push_str(&format!(
            "<rect x=\"{x}\" y=\"{y}\" width=\"1\" height=\"1\" fill=\"black\"/>\n"
        ));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn boundary_byte(b: Boundary) -> u8 {
    match b {
        Boundary::Zeros => 0,
        Boundary::Ones => 1,
        Boundary::Periodic => 2,
    }
}

fn boundary_from_byte(b: u8) -> Result<Boundary, io::Error> {
    match b {
        0 => Ok(Boundary::Zeros),
        1 => Ok(Boundary::Ones),
        2 => Ok(Boundary::Periodic),
        other => Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unknown boundary byte {other}"),
        )),
    }
}

/// Raw dump: magic, u32 dimension, per-axis (i64 lo, i64 hi), u8 boundary,
/// then the packed bit payload as little-endian u64 words.
pub fn write_raw<W: Write>(cfg: &Configuration, mut w: W) -> io::Result<()> {
    let layout = cfg.layout();
    w.write_all(RAW_MAGIC)?;
    w.write_all(&(layout.dimension() as u32).to_le_bytes())?;
    for k in 0..layout.dimension() {
        w.write_all(&layout.lo[k].to_le_bytes())?;
        w.write_all(&layout.hi[k].to_le_bytes())?;
    }
    w.write_all(&[boundary_byte(cfg.boundary())])?;
    for word in cfg.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_raw<R: Read>(mut r: R) -> io::Result<Configuration> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != RAW_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    let d = u32::from_le_bytes(u32buf) as usize;
    if d == 0 || d > 16 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad dimension"));
    }
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    let mut i64buf = [0u8; 8];
    for k in 0..d {
        r.read_exact(&mut i64buf)?;
        lo[k] = i64::from_le_bytes(i64buf);
        r.read_exact(&mut i64buf)?;
        hi[k] = i64::from_le_bytes(i64buf);
    }
    let mut bbuf = [0u8; 1];
    r.read_exact(&mut bbuf)?;
    let boundary = boundary_from_byte(bbuf[0])?;
    let layout = Layout::new(&lo, &hi)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let mut words = vec![0u64; layout.word_count()];
    for word in words.iter_mut() {
        r.read_exact(&mut i64buf)?;
        *word = u64::from_le_bytes(i64buf);
    }
    Ok(Configuration::from_words(layout, boundary, words))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_round_trip() {
        let mut cfg = Configuration::zeros(&[-3, -2, 0], &[2, 5, 66], Boundary::Periodic).unwrap();
        cfg.set(&[0, 0, 0], true);
        cfg.set(&[-3, 5, 66], true);
        cfg.set(&[2, -2, 31], true);
        let mut buf = Vec::new();
        write_raw(&cfg, &mut buf).unwrap();
        let back = read_raw(&buf[..]).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn pbm_shape() {
        let mut cfg = Configuration::zeros(&[0, 0], &[2, 1], Boundary::Zeros).unwrap();
        cfg.set(&[0, 1], true);
        let s = to_pbm(&cfg).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "P1");
        assert_eq!(lines[2], "3 2");
        assert_eq!(lines[3], "1 0 0", "north row first");
        assert_eq!(lines[4], "0 0 0");
    }

    #[test]
    fn svg_contains_one_rect_per_one() {
        let mut cfg = Configuration::zeros(&[0, 0], &[4, 4], Boundary::Zeros).unwrap();
        cfg.set(&[1, 1], true);
        cfg.set(&[3, 2], true);
        let svg = to_svg(&cfg).unwrap();
        assert_eq!(svg.matches("fill=\"black\"").count(), 2);
    }
}
