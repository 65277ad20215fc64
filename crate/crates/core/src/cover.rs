//! Box domains and their dyadic covering trees.
//!
//! A [`Cover`] at level `sigma` holds `2^sigma` leaves stored level-order in a
//! flat array. Splitting event `k` (0-based) halves every leaf at the midpoint
//! of axis `k mod d`; leaf `i` (0-based) yields children `2i` and `2i + 1`,
//! lower half first. Leaves are half-open boxes `[lo, hi)`, except that points
//! on the domain's upper boundary belong to the topmost leaf along that axis.

use rand::Rng;

use crate::error::{Error, Result};

/// Norm used to measure leaf and domain diameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormKind {
    #[default]
    Euclidean,
    Sup,
}

impl NormKind {
    fn of_sides(self, sides: impl Iterator<Item = f64>) -> f64 {
        match self {
            NormKind::Euclidean => sides.map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Sup => sides.fold(0.0, f64::max),
        }
    }
}

/// Axis-aligned box `[lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
    norm: NormKind,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::with_norm(lo, hi, NormKind::default())
    }

    pub fn with_norm(lo: Vec<f64>, hi: Vec<f64>, norm: NormKind) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        if lo.len() != hi.len() {
            return Err(Error::Dimension {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        for (axis, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return Err(Error::InvalidDomain(format!(
                    "axis {axis}: need finite lo < hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(Self { lo, hi, norm })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn norm(&self) -> NormKind {
        self.norm
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn diameter(&self) -> f64 {
        self.norm
            .of_sides(self.lo.iter().zip(&self.hi).map(|(l, h)| h - l))
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| 0.5 * (l + h))
            .collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&x, (&l, &h))| x >= l && x <= h)
    }

    pub(crate) fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: point.len(),
            });
        }
        if !self.contains(point) {
            return Err(Error::OutOfDomain {
                point: point.to_vec(),
            });
        }
        Ok(())
    }

    /// Leaf `index` (0-based) of the level-`sigma` cover, computed by
    /// descending the covering tree without materialising the level.
    pub fn dyadic_cell(&self, sigma: u32, index: usize) -> Leaf {
        assert!(
            sigma < usize::BITS && index < (1usize << sigma),
            "leaf index out of range"
        );
        let d = self.dim();
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        for event in 0..sigma {
            let axis = event as usize % d;
            let mid = midpoint(lo[axis], hi[axis]);
            if (index >> (sigma - 1 - event)) & 1 == 1 {
                lo[axis] = mid;
            } else {
                hi[axis] = mid;
            }
        }
        Leaf {
            id: index + 1,
            lo,
            hi,
        }
    }
}

#[inline]
fn midpoint(lo: f64, hi: f64) -> f64 {
    lo + 0.5 * (hi - lo)
}

/// One cell of a cover. `id` is 1-based within its level.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub id: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Leaf {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn diameter(&self, norm: NormKind) -> f64 {
        leaf_diameter(self, norm)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| midpoint(l, h))
            .collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&x, (&l, &h))| x >= l && x <= h)
    }
}

/// Diameter of a leaf box under the given norm.
pub fn leaf_diameter(leaf: &Leaf, norm: NormKind) -> f64 {
    norm.of_sides(leaf.lo.iter().zip(&leaf.hi).map(|(l, h)| h - l))
}

/// Uniform sample on the leaf box.
pub fn sample_in_leaf<R: Rng + ?Sized>(leaf: &Leaf, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(leaf.lo.len());
    sample_box(&leaf.lo, &leaf.hi, rng, &mut out);
    out
}

fn sample_box<R: Rng + ?Sized>(lo: &[f64], hi: &[f64], rng: &mut R, out: &mut Vec<f64>) {
    out.clear();
    for (&l, &h) in lo.iter().zip(hi) {
        let u: f64 = rng.gen();
        // rounding can push l + u(h - l) onto h; keep the half-open cell
        let x = l + u * (h - l);
        out.push(if x < h { x } else { l });
    }
}

/// The current dyadic partition of a [`BoxDomain`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    domain: BoxDomain,
    sigma: u32,
    // leaf i occupies bounds[2di .. 2di + 2d] as (lo_0..lo_{d-1}, hi_0..hi_{d-1})
    bounds: Vec<f64>,
}

impl Cover {
    /// The trivial cover `{domain}`.
    pub fn new(domain: BoxDomain) -> Self {
        let mut bounds = domain.lo.clone();
        bounds.extend_from_slice(&domain.hi);
        Self {
            domain,
            sigma: 0,
            bounds,
        }
    }

    /// Cover after `sigma` splitting events.
    pub fn at_depth(domain: BoxDomain, sigma: u32) -> Self {
        (0..sigma).fold(Self::new(domain), |c, _| c.split_all())
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Number of leaves, `2^sigma`.
    pub fn len(&self) -> usize {
        self.bounds.len() / (2 * self.domain.dim())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Axis halved by the next splitting event.
    pub fn next_split_axis(&self) -> usize {
        self.sigma as usize % self.domain.dim()
    }

    /// Bounds `(lo, hi)` of leaf `index` (0-based).
    pub fn leaf_bounds(&self, index: usize) -> (&[f64], &[f64]) {
        let d = self.domain.dim();
        let cell = &self.bounds[2 * d * index..2 * d * (index + 1)];
        cell.split_at(d)
    }

    /// Leaf `index` (0-based); its `id` is `index + 1`.
    pub fn leaf(&self, index: usize) -> Leaf {
        let (lo, hi) = self.leaf_bounds(index);
        Leaf {
            id: index + 1,
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = Leaf> + '_ {
        (0..self.len()).map(move |i| self.leaf(i))
    }

    pub fn leaf_volume(&self) -> f64 {
        self.domain.volume() / self.len() as f64
    }

    /// Successor cover: every leaf halved along the round-robin axis.
    pub fn split_all(&self) -> Cover {
        let d = self.domain.dim();
        let axis = self.next_split_axis();
        let mut bounds = Vec::with_capacity(2 * self.bounds.len());
        for cell in self.bounds.chunks_exact(2 * d) {
            let mid = midpoint(cell[axis], cell[d + axis]);
            let start = bounds.len();
            bounds.extend_from_slice(cell);
            bounds[start + d + axis] = mid;
            let start = bounds.len();
            bounds.extend_from_slice(cell);
            bounds[start + axis] = mid;
        }
        Cover {
            domain: self.domain.clone(),
            sigma: self.sigma + 1,
            bounds,
        }
    }

    /// 0-based index of the unique leaf containing `point`.
    pub fn leaf_containing(&self, point: &[f64]) -> Result<usize> {
        self.domain.check_point(point)?;
        let d = self.domain.dim();
        let mut lo = self.domain.lo.clone();
        let mut hi = self.domain.hi.clone();
        let mut index = 0usize;
        for event in 0..self.sigma {
            let axis = event as usize % d;
            let mid = midpoint(lo[axis], hi[axis]);
            index <<= 1;
            if point[axis] >= mid {
                index |= 1;
                lo[axis] = mid;
            } else {
                hi[axis] = mid;
            }
        }
        Ok(index)
    }

    /// Uniform point in leaf `index`, written into `out`.
    pub fn sample_point_into<R: Rng + ?Sized>(&self, index: usize, rng: &mut R, out: &mut Vec<f64>) {
        let (lo, hi) = self.leaf_bounds(index);
        sample_box(lo, hi, rng, out);
    }

    /// Center of leaf `index`, written into `out`.
    pub fn center_into(&self, index: usize, out: &mut Vec<f64>) {
        let (lo, hi) = self.leaf_bounds(index);
        out.clear();
        out.extend(lo.iter().zip(hi).map(|(&l, &h)| midpoint(l, h)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_square() -> BoxDomain {
        BoxDomain::cube(2, 0.0, 1.0).unwrap()
    }

    #[test]
    fn new_cover_is_the_domain() {
        let c = Cover::new(unit_square());
        assert_eq!(c.sigma(), 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c.leaf(0).lo, vec![0.0, 0.0]);
        assert_eq!(c.leaf(0).hi, vec![1.0, 1.0]);

        let c = Cover::new(BoxDomain::cube(1, -1.0, 1.0).unwrap());
        assert_eq!(c.len(), 1);

        let c = Cover::new(BoxDomain::new(vec![0.0; 3], vec![1.0, 2.0, 3.0]).unwrap());
        assert_eq!(c.len(), 1);
        assert_eq!(c.leaf(0).volume(), 6.0);
    }

    #[test]
    fn invalid_domains_are_rejected() {
        assert!(matches!(
            BoxDomain::new(vec![1.0], vec![1.0]),
            Err(Error::InvalidDomain(_))
        ));
        assert!(matches!(
            BoxDomain::new(vec![0.0, 2.0], vec![1.0, 1.0]),
            Err(Error::InvalidDomain(_))
        ));
        assert!(BoxDomain::new(vec![], vec![]).is_err());
        assert!(matches!(
            BoxDomain::new(vec![0.0], vec![1.0, 2.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn first_splits_of_unit_square() {
        let c1 = Cover::new(unit_square()).split_all();
        assert_eq!(c1.sigma(), 1);
        assert_eq!(c1.leaf(0).lo, vec![0.0, 0.0]);
        assert_eq!(c1.leaf(0).hi, vec![0.5, 1.0]);
        assert_eq!(c1.leaf(1).lo, vec![0.5, 0.0]);
        assert_eq!(c1.leaf(1).hi, vec![1.0, 1.0]);

        let c2 = c1.split_all();
        assert_eq!(c2.len(), 4);
        for leaf in c2.leaves() {
            assert_eq!(leaf.volume(), 0.25);
        }
        // children of leaf 1 (1-based) are 1 and 2, split along axis 1
        assert_eq!(c2.leaf(0).hi, vec![0.5, 0.5]);
        assert_eq!(c2.leaf(1).lo, vec![0.0, 0.5]);
    }

    #[test]
    fn one_dimensional_split_halves_interval() {
        let c = Cover::new(BoxDomain::cube(1, 0.0, 1.0).unwrap()).split_all();
        assert_eq!(c.leaf(0).hi, vec![0.5]);
        assert_eq!(c.leaf(1).lo, vec![0.5]);
        assert_eq!(c.leaf(1).hi, vec![1.0]);
    }

    #[test]
    fn leaf_containing_examples() {
        let c2 = Cover::at_depth(unit_square(), 2);
        let i = c2.leaf_containing(&[0.1, 0.9]).unwrap();
        assert_eq!(c2.leaf(i).lo, vec![0.0, 0.5]);
        assert_eq!(c2.leaf(i).hi, vec![0.5, 1.0]);

        let c = Cover::at_depth(BoxDomain::cube(1, 0.0, 1.0).unwrap(), 1);
        assert_eq!(c.leaf_containing(&[0.5]).unwrap(), 1);
        assert_eq!(c.leaf_containing(&[1.0]).unwrap(), 1);
        assert_eq!(c.leaf_containing(&[0.0]).unwrap(), 0);

        let c0 = Cover::new(unit_square());
        assert_eq!(c0.leaf_containing(&[0.3, 1.0]).unwrap(), 0);

        assert!(matches!(
            c2.leaf_containing(&[1.2, 0.5]),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            c2.leaf_containing(&[0.5]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn upper_boundary_maps_to_last_leaf_along_axis() {
        let c = Cover::at_depth(unit_square(), 4);
        let i = c.leaf_containing(&[1.0, 1.0]).unwrap();
        assert_eq!(i, c.len() - 1);
        let i = c.leaf_containing(&[1.0, 0.0]).unwrap();
        assert_eq!(c.leaf(i).hi[0], 1.0);
        assert_eq!(c.leaf(i).lo[1], 0.0);
    }

    #[test]
    fn samples_stay_in_leaf() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let leaf = Cover::new(BoxDomain::cube(1, 0.0, 1.0).unwrap()).leaf(0);
        let x = sample_in_leaf(&leaf, &mut rng);
        assert!(x[0] >= 0.0 && x[0] <= 1.0);

        let leaf = BoxDomain::cube(1, 0.0, 1.0)
            .unwrap()
            .dyadic_cell(40, 123_456_789);
        for _ in 0..1000 {
            let x = sample_in_leaf(&leaf, &mut rng);
            assert!(x[0] >= leaf.lo[0] && x[0] < leaf.hi[0]);
        }
    }

    #[test]
    fn sample_moments_match_leaf_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let leaf = Cover::new(unit_square()).split_all().leaf(0);
        let n = 100_000;
        let mut sum = [0.0; 2];
        for _ in 0..n {
            let x = sample_in_leaf(&leaf, &mut rng);
            sum[0] += x[0];
            sum[1] += x[1];
        }
        // uniform on [0, w]: sd = w / sqrt(12)
        let se = [0.5 / 12f64.sqrt() / (n as f64).sqrt(), 1.0 / 12f64.sqrt() / (n as f64).sqrt()];
        assert!((sum[0] / n as f64 - 0.25).abs() < 3.0 * se[0]);
        assert!((sum[1] / n as f64 - 0.5).abs() < 3.0 * se[1]);
    }

    #[test]
    fn sampling_is_deterministic_given_rng_state() {
        let leaf = unit_square().dyadic_cell(3, 5);
        let a = sample_in_leaf(&leaf, &mut ChaCha8Rng::seed_from_u64(3));
        let b = sample_in_leaf(&leaf, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn diameters() {
        let sq = Cover::new(unit_square());
        assert_relative_eq!(leaf_diameter(&sq.leaf(0), NormKind::Euclidean), 2f64.sqrt());
        let c2 = Cover::at_depth(unit_square(), 2);
        for leaf in c2.leaves() {
            let diam = leaf_diameter(&leaf, NormKind::Euclidean);
            assert_relative_eq!(diam, 2f64.sqrt() / 2.0);
            assert!(diam <= unit_square().diameter() * 2f64.powi(-1) + 1e-15);
        }
        let half = Cover::new(unit_square()).split_all().leaf(0);
        assert_eq!(leaf_diameter(&half, NormKind::Sup), 1.0);
    }

    #[test]
    fn dyadic_cell_matches_materialised_cover() {
        let dom = BoxDomain::new(vec![-0.3, 0.1, 2.0], vec![0.7, 0.35, 5.0]).unwrap();
        let c = Cover::at_depth(dom.clone(), 8);
        for i in 0..c.len() {
            assert_eq!(c.leaf(i), dom.dyadic_cell(8, i));
        }
    }

    #[test]
    fn children_partition_parent() {
        let dom = BoxDomain::new(vec![-1.0, 0.0], vec![1.0, 3.0]).unwrap();
        let parent = Cover::at_depth(dom, 3);
        let child = parent.split_all();
        let axis = parent.next_split_axis();
        for i in 0..parent.len() {
            let p = parent.leaf(i);
            let (a, b) = (child.leaf(2 * i), child.leaf(2 * i + 1));
            assert_eq!(a.lo, p.lo);
            assert_eq!(b.hi, p.hi);
            assert_eq!(a.hi[axis], b.lo[axis]);
            for k in 0..2 {
                if k != axis {
                    assert_eq!(a.hi[k], p.hi[k]);
                    assert_eq!(b.lo[k], p.lo[k]);
                }
            }
            assert_relative_eq!(a.volume(), p.volume() / 2.0, max_relative = 1e-12);
            assert_relative_eq!(b.volume(), p.volume() / 2.0, max_relative = 1e-12);
        }
    }
}
