//! Disk-type and circuit-type eigenvalue inclusion sets for a product `AB`.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::circuits::{enumerate_circuits, Circuit};
use super::digraph::product_digraph;
use crate::error::{Error, Result};
use crate::product::ProductShape;
use crate::scalar::{Real, Scalar};
use crate::tensor::{row_sums, Tensor};

/// Absolute slack on every membership comparison.
pub const MEMBERSHIP_SLACK: f64 = 1e-9;

/// Circuit enumeration is refused for digraphs with more vertices than this
/// whose arc count is at least half of `n^2`.
pub const DENSE_DIGRAPH_VERTICES: usize = 12;

/// `{z : |z - center| <= radius}`; `row` is 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
    pub row: usize,
}

impl Disk {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius + MEMBERSHIP_SLACK
    }
}

/// `{z : prod |z - centers[t]| <= prod radii[t]}` over one circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRegion {
    pub circuit: Circuit,
    pub centers: Vec<Complex64>,
    pub radii: Vec<f64>,
}

impl CircuitRegion {
    /// The slack is applied per factor, `prod |z - c_t| <= prod (r_t + eps)`,
    /// so membership here implies membership in one of the slackened disks.
    pub fn contains(&self, z: Complex64) -> bool {
        let lhs: f64 = self.centers.iter().map(|c| (z - c).norm()).product();
        let rhs: f64 = self.radii.iter().map(|r| r + MEMBERSHIP_SLACK).product();
        lhs <= rhs
    }
}

/// Anything [`region_contains`] can evaluate.
pub trait Region {
    fn contains_point(&self, z: Complex64) -> bool;
}

impl Region for Disk {
    fn contains_point(&self, z: Complex64) -> bool {
        self.contains(z)
    }
}

impl Region for CircuitRegion {
    fn contains_point(&self, z: Complex64) -> bool {
        self.contains(z)
    }
}

/// Whether `z` lies in at least one of the regions.
pub fn region_contains<R: Region>(regions: &[R], z: Complex64) -> bool {
    regions.iter().any(|r| r.contains_point(z))
}

/// `c_{i..i} = sum a_{i i_2..i_m} b_{i_2 i..i} ... b_{i_m i..i}`, the
/// diagonal of `AB`, without forming the product.
pub fn product_diagonal<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Vec<Complex64>> {
    let shape = ProductShape::of(a, b)?;
    let n = shape.dim;
    // b_{j i..i} for every (j, i).
    let mut bcol = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    b.for_each_nonzero(|idx, v| {
        let tail = &idx[1..];
        match tail.first() {
            None => {
                for slot in bcol[idx[0]].iter_mut() {
                    *slot = v.to_complex64();
                }
            }
            Some(&first) if tail.iter().all(|&j| j == first) => {
                bcol[idx[0]][first] = v.to_complex64()
            }
            Some(_) => {}
        }
    });
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    a.for_each_nonzero(|idx, v| {
        let i = idx[0];
        let term = idx[1..]
            .iter()
            .fold(v.to_complex64(), |acc, &j| acc * bcol[j][i]);
        out[i] += term;
    });
    Ok(out)
}

fn require_square_product<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<ProductShape> {
    let shape = ProductShape::of(a, b)?;
    if shape.result_order < 2 {
        return Err(Error::Unsupported(
            "inclusion sets need a product of order at least 2; B must have order at least 2"
                .into(),
        ));
    }
    Ok(shape)
}

/// One disk per row: center `c_{i..i}`, radius `r_i(A) R(B)^{m-1} - |c_{i..i}|`.
pub fn gershgorin_regions<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Vec<Disk>> {
    let shape = require_square_product(a, b)?;
    let centers = product_diagonal(a, b)?;
    let scale = row_sums(b)
        .max
        .pow_u64((shape.left_order - 1) as u64)
        .to_f64();
    let ra = row_sums(a);
    centers
        .into_iter()
        .enumerate()
        .map(|(i, center)| {
            let bound = ra.values[i].to_f64() * scale;
            let radius = bound - center.norm();
            if radius < -1e-12 * bound.max(1.0) || !radius.is_finite() {
                return Err(Error::Invariant(format!(
                    "disk {} has negative radius {radius}",
                    i + 1
                )));
            }
            Ok(Disk {
                center,
                radius: radius.max(0.0),
                row: i,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrualdiOptions {
    pub circuit_cap: usize,
    /// Cap for materializing `AB` when its digraph cannot be read off the
    /// factor patterns.
    pub entry_cap: usize,
}

impl Default for BrualdiOptions {
    fn default() -> Self {
        BrualdiOptions {
            circuit_cap: super::circuits::DEFAULT_CIRCUIT_CAP,
            entry_cap: crate::product::DEFAULT_ENTRY_CAP,
        }
    }
}

/// One region per circuit of the digraph of `AB`, which must have every
/// vertex on a circuit. For `n = 1` the single vertex forms its own region.
pub fn brualdi_regions<T: Scalar>(
    a: &Tensor<T>,
    b: &Tensor<T>,
    opts: &BrualdiOptions,
) -> Result<Vec<CircuitRegion>> {
    let disks = gershgorin_regions(a, b)?;
    let n = a.dim();
    if n == 1 {
        return Ok(vec![region_for(Circuit { vertices: vec![0] }, &disks)]);
    }
    let pd = product_digraph(a, b, opts.entry_cap)?;
    if !pd.exact {
        return Err(Error::InexactProductPattern {
            arcs: pd.digraph.arc_count(),
        });
    }
    let g = pd.digraph;
    if let Some(v) = g.first_uncovered_vertex() {
        return Err(Error::NotWeaklyConnected { vertex: v + 1 });
    }
    let arcs = g.arc_count();
    if n > DENSE_DIGRAPH_VERTICES && 2 * arcs >= n * n {
        return Err(Error::DigraphTooDense { vertices: n, arcs });
    }
    let circuits = enumerate_circuits(&g, opts.circuit_cap)?;
    Ok(circuits
        .into_iter()
        .map(|c| region_for(c, &disks))
        .collect())
}

fn region_for(circuit: Circuit, disks: &[Disk]) -> CircuitRegion {
    CircuitRegion {
        centers: circuit.vertices.iter().map(|&v| disks[v].center).collect(),
        radii: circuit.vertices.iter().map(|&v| disks[v].radius).collect(),
        circuit,
    }
}

/// `[re_min, re_max] x [im_min, im_max]` covering every disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BoundingBox {
    pub fn of_disks(disks: &[Disk]) -> Self {
        let mut b = BoundingBox {
            re_min: f64::INFINITY,
            re_max: f64::NEG_INFINITY,
            im_min: f64::INFINITY,
            im_max: f64::NEG_INFINITY,
        };
        for d in disks {
            b.re_min = b.re_min.min(d.center.re - d.radius);
            b.re_max = b.re_max.max(d.center.re + d.radius);
            b.im_min = b.im_min.min(d.center.im - d.radius);
            b.im_max = b.im_max.max(d.center.im + d.radius);
        }
        b
    }

    /// Grows the box about its center by `factor`, and to at least
    /// `min_extent` in each direction.
    pub fn scaled(&self, factor: f64, min_extent: f64) -> Self {
        let (cr, ci) = (
            (self.re_min + self.re_max) / 2.0,
            (self.im_min + self.im_max) / 2.0,
        );
        let hr = ((self.re_max - self.re_min) * factor).max(min_extent) / 2.0;
        let hi = ((self.im_max - self.im_min) * factor).max(min_extent) / 2.0;
        BoundingBox {
            re_min: cr - hr,
            re_max: cr + hr,
            im_min: ci - hi,
            im_max: ci + hi,
        }
    }

    /// `nx * ny` points, endpoints included.
    pub fn grid(&self, nx: usize, ny: usize) -> Vec<Complex64> {
        let axis = |lo: f64, hi: f64, k: usize, count: usize| {
            if count <= 1 {
                (lo + hi) / 2.0
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            }
        };
        let mut pts = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                pts.push(Complex64::new(
                    axis(self.re_min, self.re_max, ix, nx),
                    axis(self.im_min, self.im_max, iy, ny),
                ));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub z: Complex64,
    /// `min_i (|z - c_i| - r_i)`: how far `z` is outside the nearest disk.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub holds: bool,
    pub samples: usize,
    pub brualdi_hits: usize,
    pub violations: usize,
    pub worst: Option<Violation>,
}

/// Samples the bounding box of the disk union on an `nx * ny` grid (plus the
/// disk centers) and checks that every point of the circuit-region union is
/// also in the disk union.
pub fn check_containment_b_in_g(
    disks: &[Disk],
    regions: &[CircuitRegion],
    nx: usize,
    ny: usize,
) -> ContainmentReport {
    let bbox = BoundingBox::of_disks(disks);
    let mut points = bbox.grid(nx, ny);
    points.extend(disks.iter().map(|d| d.center));
    let mut report = ContainmentReport {
        holds: true,
        samples: points.len(),
        brualdi_hits: 0,
        violations: 0,
        worst: None,
    };
    for z in points {
        if !region_contains(regions, z) {
            continue;
        }
        report.brualdi_hits += 1;
        if region_contains(disks, z) {
            continue;
        }
        report.holds = false;
        report.violations += 1;
        let excess = disks
            .iter()
            .map(|d| (z - d.center).norm() - d.radius)
            .fold(f64::INFINITY, f64::min);
        if report.worst.as_ref().is_none_or(|w| excess > w.excess) {
            report.worst = Some(Violation { z, excess });
        }
    }
    report
}

/// Which family a region document describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Gershgorin,
    Brualdi,
}

impl RegionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionKind::Gershgorin => "gershgorin",
            RegionKind::Brualdi => "brualdi",
        }
    }
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `{"type", "disks": [{center, radius, row}], "circuit_regions": [{circuit,
/// centers, radii}]}` with 1-based rows and circuit vertices.
pub fn regions_to_value(kind: RegionKind, disks: &[Disk], regions: &[CircuitRegion]) -> Value {
    json!({
        "type": kind.as_str(),
        "disks": disks.iter().map(|d| json!({
            "center": complex_value(d.center),
            "radius": d.radius,
            "row": d.row + 1,
        })).collect::<Vec<_>>(),
        "circuit_regions": regions.iter().map(|r| json!({
            "circuit": r.circuit.one_based(),
            "centers": r.centers.iter().map(|c| complex_value(*c)).collect::<Vec<_>>(),
            "radii": r.radii,
        })).collect::<Vec<_>>(),
    })
}
