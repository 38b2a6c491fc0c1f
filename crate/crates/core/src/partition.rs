//! Hierarchical ternary partition of a box domain.
//!
//! Every division splits a cell's longest side (lowest index on ties) into
//! three equal parts. The middle child keeps the parent's center, so it also
//! keeps the parent's value; only the two outer children need new values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CellId = u64;

/// Axis-aligned box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidParameter("domain has no dimensions".into()));
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFiniteDomain { dim });
            }
            if lo >= hi {
                return Err(Error::DegenerateDomain {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            bounds.iter().map(|b| b.0).collect(),
            bounds.iter().map(|b| b.1).collect(),
        )
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lower: vec![0.0; dim],
            upper: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (u - l))
            .collect()
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// Maps a point of the unit cube onto this domain.
    pub fn from_unit(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (l, h))| l + t * (h - l))
            .collect()
    }

    /// Maps a point of this domain onto the unit cube.
    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, h))| (v - l) / (h - l))
            .collect()
    }
}

/// Value stored at a cell center: either a true evaluation or a GP placeholder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellValue {
    pub value: f64,
    pub gp_based: bool,
}

impl CellValue {
    pub fn evaluated(value: f64) -> Self {
        Self {
            value,
            gp_based: false,
        }
    }

    pub fn gp(value: f64) -> Self {
        Self {
            value,
            gp_based: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrectangle {
    pub id: CellId,
    pub center: Vec<f64>,
    pub half_widths: Vec<f64>,
    pub depth: usize,
    pub value: f64,
    pub gp_based: bool,
}

impl Hyperrectangle {
    pub fn volume(&self) -> f64 {
        self.half_widths.iter().map(|w| 2.0 * w).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.center.iter().zip(&self.half_widths))
            .all(|(v, (c, w))| (v - c).abs() <= *w * (1.0 + 1e-12))
    }

    /// Index of the longest side, lowest index on ties.
    pub fn split_dim(&self) -> usize {
        split_dim(&self.half_widths)
    }

    /// False once the cell is at floating-point resolution: the children's
    /// center offset would no longer clearly exceed the rounding error of
    /// the center itself, so new centers could coincide with existing ones.
    pub fn is_divisible(&self) -> bool {
        let d = self.split_dim();
        let offset = 2.0 * self.half_widths[d] / 3.0;
        offset > RESOLUTION_ULPS * f64::EPSILON * (self.center[d].abs() + offset)
    }
}

/// Multiple of the machine epsilon below which a split offset is treated as
/// rounding noise.
const RESOLUTION_ULPS: f64 = 1024.0;

fn split_dim(half_widths: &[f64]) -> usize {
    let mut best = 0;
    for (i, w) in half_widths.iter().enumerate() {
        if *w > half_widths[best] {
            best = i;
        }
    }
    best
}

/// Geometry of the three children (left, center, right) of a box.
pub fn split_box(center: &[f64], half_widths: &[f64]) -> [(Vec<f64>, Vec<f64>); 3] {
    let d = split_dim(half_widths);
    let mut hw = half_widths.to_vec();
    hw[d] = half_widths[d] / 3.0;
    let offset = 2.0 * hw[d];
    let mut left = center.to_vec();
    left[d] -= offset;
    let mut right = center.to_vec();
    right[d] += offset;
    [
        (left, hw.clone()),
        (center.to_vec(), hw.clone()),
        (right, hw),
    ]
}

/// Centers of the fully expanded subtree of `cell` down to relative depth
/// `xi`, in left/center/right depth-first order. Always 3^xi distinct points.
pub fn expanded_subtree_centers(cell: &Hyperrectangle, xi: usize) -> Vec<Vec<f64>> {
    fn expand(center: &[f64], hw: &[f64], xi: usize, out: &mut Vec<Vec<f64>>) {
        if xi == 0 {
            out.push(center.to_vec());
            return;
        }
        for (c, w) in split_box(center, hw) {
            expand(&c, &w, xi - 1, out);
        }
    }
    let mut out = Vec::with_capacity(3usize.pow(xi as u32));
    expand(&cell.center, &cell.half_widths, xi, &mut out);
    out
}

/// Depth-indexed live cells plus the division/evaluation/placeholder counters.
#[derive(Debug, Clone)]
pub struct PartitionTree {
    domain: Domain,
    /// `levels[h]` holds the live cells at depth h in creation order.
    levels: Vec<Vec<Hyperrectangle>>,
    next_id: CellId,
    /// Division count n; 1 at initialization.
    pub n: usize,
    /// True evaluations N.
    pub n_evals: usize,
    /// Live GP placeholders N_gp.
    pub n_gp: usize,
}

impl PartitionTree {
    /// Creates the root cell at the domain center and labels it with `root`.
    pub fn init(domain: Domain, root: impl FnOnce(&[f64]) -> Result<CellValue>) -> Result<Self> {
        let center = domain.center();
        let v = root(&center)?;
        let cell = Hyperrectangle {
            id: 0,
            center,
            half_widths: domain.half_widths(),
            depth: 0,
            value: v.value,
            gp_based: v.gp_based,
        };
        Ok(Self {
            domain,
            levels: vec![vec![cell]],
            next_id: 1,
            n: 1,
            n_evals: usize::from(!v.gp_based),
            n_gp: usize::from(v.gp_based),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Largest h with a non-empty T_h.
    pub fn depth(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    pub fn level(&self, h: usize) -> &[Hyperrectangle] {
        self.levels.get(h).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cells(&self) -> impl Iterator<Item = &Hyperrectangle> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn locate(&self, id: CellId) -> Option<(usize, usize)> {
        self.levels
            .iter()
            .enumerate()
            .find_map(|(h, l)| l.iter().position(|c| c.id == id).map(|i| (h, i)))
    }

    pub fn get(&self, id: CellId) -> Option<&Hyperrectangle> {
        self.locate(id).map(|(h, i)| &self.levels[h][i])
    }

    /// Divisible live cell at depth `h` with the largest value; the oldest
    /// wins ties. Cells at floating-point resolution are never selected.
    pub fn select_max_at_depth(&self, h: usize) -> Option<&Hyperrectangle> {
        let mut best: Option<&Hyperrectangle> = None;
        for c in self.level(h).iter().filter(|c| c.is_divisible()) {
            match best {
                Some(b) if c.value > b.value || (c.value == b.value && c.id < b.id) => {
                    best = Some(c)
                }
                None => best = Some(c),
                _ => {}
            }
        }
        best
    }

    /// True while at least one live cell can still be divided.
    pub fn has_divisible(&self) -> bool {
        self.cells().any(Hyperrectangle::is_divisible)
    }

    /// Divides a live cell into three children at depth h+1.
    ///
    /// `label` is called for the left child and then the right child; the
    /// center child inherits the parent's value and label. The tree is left
    /// untouched if `label` fails. Returns the ids of (left, center, right).
    pub fn divide(
        &mut self,
        id: CellId,
        mut label: impl FnMut(&[f64]) -> Result<CellValue>,
    ) -> Result<[CellId; 3]> {
        let (h, i) = self.locate(id).ok_or(Error::NotLive(id))?;
        let parent = &self.levels[h][i];
        if !parent.is_divisible() {
            return Err(Error::InvalidParameter(format!(
                "cell {id} is at floating-point resolution and cannot be divided"
            )));
        }
        let [(lc, lw), (cc, cw), (rc, rw)] = split_box(&parent.center, &parent.half_widths);
        let (pv, pgp) = (parent.value, parent.gp_based);

        let left = label(&lc)?;
        let right = label(&rc)?;

        self.levels[h].remove(i);
        if self.levels.len() <= h + 1 {
            self.levels.push(Vec::new());
        }
        let base = self.next_id;
        self.next_id += 3;
        let children = [
            (lc, lw, left),
            (
                cc,
                cw,
                CellValue {
                    value: pv,
                    gp_based: pgp,
                },
            ),
            (rc, rw, right),
        ];
        for (k, (center, half_widths, v)) in children.into_iter().enumerate() {
            if k != 1 {
                if v.gp_based {
                    self.n_gp += 1;
                } else {
                    self.n_evals += 1;
                }
            }
            self.levels[h + 1].push(Hyperrectangle {
                id: base + k as CellId,
                center,
                half_widths,
                depth: h + 1,
                value: v.value,
                gp_based: v.gp_based,
            });
        }
        self.n += 1;
        Ok([base, base + 1, base + 2])
    }

    /// Replaces a GP placeholder with a true evaluation.
    pub fn resolve(&mut self, id: CellId, value: f64) -> Result<()> {
        let (h, i) = self.locate(id).ok_or(Error::NotLive(id))?;
        let cell = &mut self.levels[h][i];
        if !cell.gp_based {
            return Err(Error::InvalidParameter(format!(
                "cell {id} is not a GP placeholder"
            )));
        }
        cell.value = value;
        cell.gp_based = false;
        self.n_evals += 1;
        self.n_gp -= 1;
        Ok(())
    }

    /// Sum of live cell volumes.
    pub fn live_volume(&self) -> f64 {
        self.cells().map(Hyperrectangle::volume).sum()
    }
}
