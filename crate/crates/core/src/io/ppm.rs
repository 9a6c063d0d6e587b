//! Binary PPM (P6) rasters: `P6\n<width> <height>\n255\n` followed by
//! `width·height` RGB byte triples, first row at the top.

use crate::{Error, Result};

/// Fixed colour scales; values are clamped to `[lo, hi]` before lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Gray,
    /// Black → purple → orange → pale yellow.
    Heat,
}

impl Colormap {
    fn rgb(self, s: f64) -> [u8; 3] {
        let s = s.clamp(0.0, 1.0);
        match self {
            Colormap::Gray => {
                let v = (255.0 * s).round() as u8;
                [v, v, v]
            }
            Colormap::Heat => {
                const STOPS: [[f64; 3]; 4] = [
                    [0.0, 0.0, 4.0],
                    [120.0, 28.0, 109.0],
                    [237.0, 105.0, 37.0],
                    [252.0, 255.0, 164.0],
                ];
                let x = s * 3.0;
                let i = (x.floor() as usize).min(2);
                let f = x - i as f64;
                let c = |k: usize| (STOPS[i][k] + f * (STOPS[i + 1][k] - STOPS[i][k])).round() as u8;
                [c(0), c(1), c(2)]
            }
        }
    }
}

/// Encodes row-major `values` (`width` per row). The scale defaults to the data range.
pub fn encode_ppm(
    values: &[f64],
    width: usize,
    height: usize,
    range: Option<(f64, f64)>,
    cmap: Colormap,
) -> Result<Vec<u8>> {
    if values.len() != width * height || width == 0 {
        return Err(Error::GridMismatch(format!(
            "{} values for a {width}×{height} raster",
            values.len()
        )));
    }
    let (lo, hi) = range.unwrap_or_else(|| {
        values
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(3 * values.len());
    for v in values {
        let s = if v.is_finite() { (v - lo) / span } else { 0.0 };
        out.extend_from_slice(&cmap.rgb(s));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_extremes() {
        let b = encode_ppm(&[0.0, 1.0, 2.0, 4.0], 2, 2, None, Colormap::Gray).unwrap();
        let head = b"P6\n2 2\n255\n";
        assert_eq!(&b[..head.len()], head);
        assert_eq!(b.len(), head.len() + 12);
        assert_eq!(&b[head.len()..head.len() + 3], &[0, 0, 0]);
        assert_eq!(&b[b.len() - 3..], &[255, 255, 255]);
        let h = encode_ppm(&[0.0, 1.0], 2, 1, Some((0.0, 1.0)), Colormap::Heat).unwrap();
        assert_eq!(&h[h.len() - 6..], &[0, 0, 4, 252, 255, 164]);
        assert!(encode_ppm(&[0.0; 3], 2, 2, None, Colormap::Gray).is_err());
    }
}
