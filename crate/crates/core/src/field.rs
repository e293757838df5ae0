//! Real fields sampled at the cell midpoints of a rectangular phase-space
//! grid, and the `KCFIELD v1` dump format.
//!
//! Node `(i, j)` sits at `q = q_lo + (i + ½) Δq`, `p = p_lo + (j + ½) Δp`;
//! values are stored with `q` as the outer (row) index.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::krylov::Spill;
use crate::{Error, PhasePoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Plane,
    Torus,
}

impl GeometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Plane => "plane",
            GeometryKind::Torus => "torus",
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGeometry {
    pub kind: GeometryKind,
    pub m: usize,
    pub q_lo: f64,
    pub q_hi: f64,
    pub p_lo: f64,
    pub p_hi: f64,
}

impl PhaseSpaceGeometry {
    pub fn plane(q_lo: f64, q_hi: f64, p_lo: f64, p_hi: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs M >= 2, got {m}"
            )));
        }
        if !(q_hi > q_lo && p_hi > p_lo) {
            return Err(Error::InvalidParameter("empty phase-space window".into()));
        }
        Ok(Self {
            kind: GeometryKind::Plane,
            m,
            q_lo,
            q_hi,
            p_lo,
            p_hi,
        })
    }

    /// `[-l, l]²`
    pub fn square_window(l: f64, m: usize) -> Result<Self> {
        Self::plane(-l, l, -l, l, m)
    }

    pub fn torus(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs M >= 2, got {m}"
            )));
        }
        Ok(Self {
            kind: GeometryKind::Torus,
            m,
            q_lo: 0.0,
            q_hi: 1.0,
            p_lo: 0.0,
            p_hi: 1.0,
        })
    }

    pub fn dq(&self) -> f64 {
        (self.q_hi - self.q_lo) / self.m as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_hi - self.p_lo) / self.m as f64
    }

    /// Largest grid spacing.
    pub fn spacing(&self) -> f64 {
        self.dq().max(self.dp())
    }

    pub fn cell_area(&self) -> f64 {
        self.dq() * self.dp()
    }

    pub fn q_node(&self, i: usize) -> f64 {
        self.q_lo + (i as f64 + 0.5) * self.dq()
    }

    pub fn p_node(&self, j: usize) -> f64 {
        self.p_lo + (j as f64 + 0.5) * self.dp()
    }

    pub fn node(&self, i: usize, j: usize) -> PhasePoint {
        PhasePoint::new(self.q_node(i), self.p_node(j))
    }

    pub fn len(&self) -> usize {
        self.m * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// All nodes, `q` outer.
    pub fn nodes(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.m).flat_map(move |i| (0..self.m).map(move |j| self.node(i, j)))
    }

    pub fn check_resolution(&self, limit: f64) -> Result<()> {
        let spacing = self.spacing();
        if spacing > limit * (1.0 + 1e-12) {
            return Err(Error::Resolution { spacing, limit });
        }
        Ok(())
    }

    pub fn matches(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        self.kind == other.kind
            && self.m == other.m
            && close(self.q_lo, other.q_lo)
            && close(self.q_hi, other.q_hi)
            && close(self.p_lo, other.p_lo)
            && close(self.p_hi, other.p_hi)
    }

    pub fn header(&self) -> String {
        format!(
            "KCFIELD v1 kind={} M={} qlo={:?} qhi={:?} plo={:?} phi={:?}",
            self.kind, self.m, self.q_lo, self.q_hi, self.p_lo, self.p_hi
        )
    }

    fn parse_header(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("KCFIELD") || tokens.next() != Some("v1") {
            return Err(Error::FieldFormat(format!("bad magic in header `{line}`")));
        }
        let mut kind = None;
        let mut m = None;
        let mut bounds = [None; 4];
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::FieldFormat(format!("malformed token `{tok}`")))?;
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::FieldFormat(format!("bad number for {key}: `{value}`")))
            };
            match key {
                "kind" => {
                    kind = Some(match value {
                        "plane" => GeometryKind::Plane,
                        "torus" => GeometryKind::Torus,
                        other => return Err(Error::FieldFormat(format!("unknown kind `{other}`"))),
                    })
                }
                "M" => {
                    m = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| Error::FieldFormat(format!("bad grid size `{value}`")))?,
                    )
                }
                "qlo" => bounds[0] = Some(num()?),
                "qhi" => bounds[1] = Some(num()?),
                "plo" => bounds[2] = Some(num()?),
                "phi" => bounds[3] = Some(num()?),
                other => return Err(Error::FieldFormat(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::FieldFormat(format!("header lacks `{k}`"));
        let kind = kind.ok_or_else(|| missing("kind"))?;
        let m = m.ok_or_else(|| missing("M"))?;
        let [q_lo, q_hi, p_lo, p_hi] = [
            bounds[0].ok_or_else(|| missing("qlo"))?,
            bounds[1].ok_or_else(|| missing("qhi"))?,
            bounds[2].ok_or_else(|| missing("plo"))?,
            bounds[3].ok_or_else(|| missing("phi"))?,
        ];
        if m < 2 {
            return Err(Error::FieldFormat(format!("grid size {m} below 2")));
        }
        Ok(Self {
            kind,
            m,
            q_lo,
            q_hi,
            p_lo,
            p_hi,
        })
    }
}

/// Real field on a phase-space grid; `values[[i, j]]` is the sample at
/// `(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    geometry: PhaseSpaceGeometry,
    values: Array2<f64>,
}

impl PhaseSpaceField {
    pub fn new(geometry: PhaseSpaceGeometry, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (geometry.m, geometry.m) {
            return Err(Error::InvalidParameter(format!(
                "field of shape {:?} on an {}x{} grid",
                values.dim(),
                geometry.m,
                geometry.m
            )));
        }
        Ok(Self { geometry, values })
    }

    pub fn zeros(geometry: PhaseSpaceGeometry) -> Self {
        Self {
            geometry,
            values: Array2::zeros((geometry.m, geometry.m)),
        }
    }

    pub fn from_fn(geometry: PhaseSpaceGeometry, f: impl Fn(PhasePoint) -> f64) -> Self {
        let values =
            Array2::from_shape_fn((geometry.m, geometry.m), |(i, j)| f(geometry.node(i, j)));
        Self { geometry, values }
    }

    pub fn geometry(&self) -> &PhaseSpaceGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    /// Midpoint-rule integral.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.geometry.cell_area()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `∫ |f - g| dx` on a shared grid.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if !self.geometry.matches(&other.geometry) {
            return Err(Error::GeometryMismatch);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(sum * self.geometry.cell_area())
    }

    pub fn write_kcfield<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.geometry.header())?;
        let mut buf = Vec::with_capacity(self.values.len() * 8);
        for v in self.values.iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_kcfield<R: Read>(r: R) -> Result<Self> {
        let mut reader = BufReader::new(r);
        let mut line = String::new();
        reader.read_line(&mut line)?;
        if !line.ends_with('\n') {
            return Err(Error::FieldFormat("header line is not terminated".into()));
        }
        let geometry = PhaseSpaceGeometry::parse_header(line.trim_end())?;
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        let expected = geometry.len() * 8;
        if bytes.len() != expected {
            return Err(Error::FieldFormat(format!(
                "payload has {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let data: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        let values =
            Array2::from_shape_vec((geometry.m, geometry.m), data).expect("payload length checked");
        Ok(Self { geometry, values })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_kcfield(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_kcfield(std::fs::File::open(path)?)
    }
}

impl Spill for PhaseSpaceField {
    fn byte_len(&self) -> usize {
        self.values.len() * 8
    }

    fn spill(&self, out: &mut Vec<u8>) {
        crate::krylov::store::spill_f64s(self.values.iter().copied(), out);
    }

    fn restore(template: &Self, bytes: &[u8]) -> Self {
        let data: Vec<f64> = crate::krylov::store::restore_f64s(bytes).collect();
        let m = template.geometry.m;
        Self {
            geometry: template.geometry,
            values: Array2::from_shape_vec((m, m), data).expect("spilled field matches template"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kcfield_round_trip() {
        let g = PhaseSpaceGeometry::plane(-1.5, 1.5, -0.25, 2.0, 7).unwrap();
        let f = PhaseSpaceField::from_fn(g, |x| x.q * 3.0 - x.p.powi(2) + 1e-300);
        let mut buf = Vec::new();
        f.write_kcfield(&mut buf).unwrap();
        let header_end = buf.iter().position(|&b| b == b'\n').unwrap();
        assert_eq!(
            std::str::from_utf8(&buf[..header_end]).unwrap(),
            "KCFIELD v1 kind=plane M=7 qlo=-1.5 qhi=1.5 plo=-0.25 phi=2.0"
        );
        assert_eq!(buf.len(), header_end + 1 + 49 * 8);
        let back = PhaseSpaceField::read_kcfield(&buf[..]).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn payload_is_q_major_little_endian() {
        let g = PhaseSpaceGeometry::torus(2).unwrap();
        let f = PhaseSpaceField::new(g, ndarray::array![[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let mut buf = Vec::new();
        f.write_kcfield(&mut buf).unwrap();
        let start = buf.iter().position(|&b| b == b'\n').unwrap() + 1;
        let second = f64::from_le_bytes(buf[start + 8..start + 16].try_into().unwrap());
        assert_eq!(second, 2.0);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let g = PhaseSpaceGeometry::torus(4).unwrap();
        let mut buf = Vec::new();
        PhaseSpaceField::zeros(g).write_kcfield(&mut buf).unwrap();
        buf.pop();
        assert!(matches!(
            PhaseSpaceField::read_kcfield(&buf[..]),
            Err(Error::FieldFormat(_))
        ));
    }

    #[test]
    fn midpoint_nodes() {
        let g = PhaseSpaceGeometry::torus(4).unwrap();
        assert_eq!(g.node(0, 3), PhasePoint::new(0.125, 0.875));
        assert!(g.check_resolution(0.25).is_ok());
        assert!(matches!(
            g.check_resolution(0.2),
            Err(Error::Resolution { .. })
        ));
    }
}
