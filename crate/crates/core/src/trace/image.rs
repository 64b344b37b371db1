//! Binary raster images and the plain/raw PBM formats.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::path::{Adjacency, GridPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbmError {
    #[error("not a PBM file (magic must be P1 or P4)")]
    BadMagic,
    #[error("malformed PBM header: {0}")]
    BadHeader(String),
    #[error("PBM dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("PBM raster truncated: expected {expected} pixels, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid PBM pixel byte {0:?}")]
    BadPixel(char),
    #[error("pixel {0} lies outside the {1}x{2} image")]
    OutOfBounds(GridPoint, usize, usize),
}

/// A `width` x `height` binary image. Pixel `(x, y)` has `x` rightward and
/// `y` downward from the top-left corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    foreground: BTreeSet<GridPoint>,
}

/// Row-major ordering key (top to bottom, then left to right).
pub fn row_major(p: &GridPoint) -> (i64, i64) {
    (p.y, p.x)
}

impl BinaryImage {
    pub fn new(
        width: usize,
        height: usize,
        pixels: impl IntoIterator<Item = GridPoint>,
    ) -> Result<Self, PbmError> {
        let foreground: BTreeSet<GridPoint> = pixels.into_iter().collect();
        for &p in &foreground {
            if p.x < 0 || p.y < 0 || p.x as usize >= width || p.y as usize >= height {
                return Err(PbmError::OutOfBounds(p, width, height));
            }
        }
        Ok(Self { width, height, foreground })
    }

    /// Image from text rows, `#` or `1` for foreground and anything else for
    /// background. Rows may have different lengths.
    pub fn from_rows(rows: &[&str]) -> Self {
        let width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
        let pixels = rows.iter().enumerate().flat_map(|(y, row)| {
            row.chars()
                .enumerate()
                .filter(|&(_, c)| c == '#' || c == '1')
                .map(move |(x, _)| GridPoint::new(x as i64, y as i64))
        });
        Self::new(width, rows.len(), pixels).expect("pixels are within the rows")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn foreground(&self) -> &BTreeSet<GridPoint> {
        &self.foreground
    }

    pub fn is_foreground(&self, p: GridPoint) -> bool {
        self.foreground.contains(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.foreground.is_empty()
    }

    /// Foreground pixels adjacent to `p`.
    pub fn neighbours(&self, p: GridPoint, adjacency: Adjacency) -> impl Iterator<Item = GridPoint> + '_ {
        neighbours_in(&self.foreground, p, adjacency)
    }

    /// Connected components, each as an image of the same size, ordered by
    /// their first pixel in row-major order.
    pub fn components(&self, adjacency: Adjacency) -> Vec<BinaryImage> {
        let mut parts = components_of(&self.foreground, adjacency);
        parts.sort_by_key(|c| c.iter().map(row_major).min());
        parts
            .into_iter()
            .map(|foreground| BinaryImage { width: self.width, height: self.height, foreground })
            .collect()
    }

    pub fn parse_pbm(bytes: &[u8]) -> Result<Self, PbmError> {
        let mut cursor = Cursor { bytes, pos: 0 };
        let raw = match cursor.token()? {
            b"P1" => false,
            b"P4" => true,
            _ => return Err(PbmError::BadMagic),
        };
        let width = cursor.number("width")?;
        let height = cursor.number("height")?;
        if width == 0 || height == 0 {
            return Err(PbmError::ZeroDimension { width, height });
        }
        let expected = width * height;
        let mut pixels = Vec::new();
        if raw {
            // exactly one whitespace byte separates the header from the raster
            cursor.pos += 1;
            let stride = width.div_ceil(8);
            let data = &bytes[cursor.pos.min(bytes.len())..];
            if data.len() < stride * height {
                let found = (data.len() / stride) * width;
                return Err(PbmError::Truncated { expected, found });
            }
            for y in 0..height {
                for x in 0..width {
                    let byte = data[y * stride + x / 8];
                    if byte & (0x80 >> (x % 8)) != 0 {
                        pixels.push(GridPoint::new(x as i64, y as i64));
                    }
                }
            }
        } else {
            let mut found = 0;
            while found < expected {
                let Some(c) = cursor.next_significant() else { break };
                match c {
                    b'0' => {}
                    b'1' => pixels.push(GridPoint::new((found % width) as i64, (found / width) as i64)),
                    other => return Err(PbmError::BadPixel(other as char)),
                }
                found += 1;
            }
            if found < expected {
                return Err(PbmError::Truncated { expected, found });
            }
        }
        Self::new(width, height, pixels)
    }

    /// Plain PBM (P1), one text row per image row.
    pub fn to_pbm_plain(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for y in 0..self.height {
            let row: Vec<&str> = (0..self.width)
                .map(|x| if self.is_foreground(GridPoint::new(x as i64, y as i64)) { "1" } else { "0" })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Raw PBM (P4), rows packed most significant bit first.
    pub fn to_pbm_raw(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
        let stride = self.width.div_ceil(8);
        let mut raster = vec![0u8; stride * self.height];
        for p in &self.foreground {
            let (x, y) = (p.x as usize, p.y as usize);
            raster[y * stride + x / 8] |= 0x80 >> (x % 8);
        }
        out.extend(raster);
        out
    }
}

pub(crate) fn neighbours_in(
    set: &BTreeSet<GridPoint>,
    p: GridPoint,
    adjacency: Adjacency,
) -> impl Iterator<Item = GridPoint> + '_ {
    adjacency
        .offsets()
        .iter()
        .map(move |&(dx, dy)| GridPoint::new(p.x + dx, p.y + dy))
        .filter(move |q| set.contains(q))
}

pub(crate) fn components_of(set: &BTreeSet<GridPoint>, adjacency: Adjacency) -> Vec<BTreeSet<GridPoint>> {
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for &seed in set {
        if !seen.insert(seed) {
            continue;
        }
        let mut part = BTreeSet::from([seed]);
        let mut queue = VecDeque::from([seed]);
        while let Some(p) = queue.pop_front() {
            for q in neighbours_in(set, p, adjacency) {
                if seen.insert(q) {
                    part.insert(q);
                    queue.push_back(q);
                }
            }
        }
        parts.push(part);
    }
    parts
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Next byte that is neither whitespace nor inside a comment.
    fn next_significant(&mut self) -> Option<u8> {
        while let Some(&c) = self.bytes.get(self.pos) {
            self.pos += 1;
            if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if !c.is_ascii_whitespace() {
                return Some(c);
            }
        }
        None
    }

    fn token(&mut self) -> Result<&'a [u8], PbmError> {
        self.next_significant().ok_or_else(|| PbmError::BadHeader("unexpected end of header".into()))?;
        let start = self.pos - 1;
        while self.bytes.get(self.pos).is_some_and(|c| !c.is_ascii_whitespace() && *c != b'#') {
            self.pos += 1;
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize, PbmError> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PbmError::BadHeader(format!("{what} is not a number: {:?}", String::from_utf8_lossy(tok))))
    }
}
