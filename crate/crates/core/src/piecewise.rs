//! Piecewise kernel interpolation on a kd-tree subdivision of phase space.
//!
//! The root box `[0, L) × [-v_max, v_max]` is split recursively at the median
//! coordinate, alternating x and v (starting with x), until every box holds at
//! most `N_box` particles. Each leaf gets an independent local interpolant, so
//! the total cost is linear in the particle count.

use std::fmt;

use rayon::prelude::*;

use crate::direct::{DirectInterpolant, InterpolationError};
use crate::kernels::KernelSpec;
use crate::particles::{wrap_position, Domain, ParticleEnsemble, PhasePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    V,
}

impl Axis {
    fn other(self) -> Self {
        match self {
            Axis::X => Axis::V,
            Axis::V => Axis::X,
        }
    }

    #[inline]
    fn coord(self, p: PhasePoint) -> f64 {
        match self {
            Axis::X => p.x,
            Axis::V => p.v,
        }
    }
}

/// Axis-aligned box `[x_lo, x_hi) × [v_lo, v_hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_lo: f64,
    pub x_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

impl Bounds {
    pub fn contains(&self, z: PhasePoint) -> bool {
        z.x >= self.x_lo && z.x < self.x_hi && z.v >= self.v_lo && z.v < self.v_hi
    }

    fn split(&self, axis: Axis, value: f64) -> (Bounds, Bounds) {
        match axis {
            Axis::X => (Bounds { x_hi: value, ..*self }, Bounds { x_lo: value, ..*self }),
            Axis::V => (Bounds { v_hi: value, ..*self }, Bounds { v_lo: value, ..*self }),
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}) x [{}, {})", self.x_lo, self.x_hi, self.v_lo, self.v_hi)
    }
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    Split {
        axis: Axis,
        value: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Position of this leaf in [`KdTree::leaves`].
        leaf: usize,
        particles: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct KdNode {
    pub bounds: Bounds,
    pub kind: NodeKind,
}

/// kd-tree over particle indices, stored as an arena with the root at 0.
#[derive(Debug, Clone)]
pub struct KdTree {
    nodes: Vec<KdNode>,
    leaves: Vec<usize>,
}

impl KdTree {
    /// Builds the tree with the cyclic median-split rule.
    ///
    /// The split sits halfway between the two coordinates adjacent to the
    /// median; when those coincide it moves to the nearest gap between distinct
    /// coordinates, so every particle lies inside its leaf's box. If all
    /// coordinates along the scheduled axis coincide, the other axis is used.
    ///
    /// # Panics
    ///
    /// Panics if `n_box < 2`.
    pub fn build(ensemble: &ParticleEnsemble, n_box: usize) -> Self {
        assert!(n_box >= 2, "N_box must be at least 2, got {n_box}");
        let domain = ensemble.domain();
        let root = Bounds {
            x_lo: 0.0,
            x_hi: domain.length,
            v_lo: -domain.v_max,
            v_hi: domain.v_max,
        };
        let mut tree = KdTree {
            nodes: Vec::new(),
            leaves: Vec::new(),
        };
        let indices: Vec<usize> = (0..ensemble.len()).collect();
        tree.grow(ensemble.positions(), indices, root, Axis::X, n_box);
        tree
    }

    fn grow(
        &mut self,
        points: &[PhasePoint],
        mut indices: Vec<usize>,
        bounds: Bounds,
        axis: Axis,
        n_box: usize,
    ) -> usize {
        let id = self.nodes.len();
        if indices.len() <= n_box {
            return self.push_leaf(bounds, indices);
        }

        let split = median_split(points, &mut indices, axis)
            .map(|at| (axis, at))
            .or_else(|| median_split(points, &mut indices, axis.other()).map(|at| (axis.other(), at)));
        let Some((used, at)) = split else {
            // every particle at the same point; nothing left to separate
            return self.push_leaf(bounds, indices);
        };

        let value = 0.5 * (used.coord(points[indices[at - 1]]) + used.coord(points[indices[at]]));
        let right_indices = indices.split_off(at);
        let (left_bounds, right_bounds) = bounds.split(used, value);

        self.nodes.push(KdNode {
            bounds,
            kind: NodeKind::Split {
                axis: used,
                value,
                left: usize::MAX,
                right: usize::MAX,
            },
        });
        let left = self.grow(points, indices, left_bounds, used.other(), n_box);
        let right = self.grow(points, right_indices, right_bounds, used.other(), n_box);
        if let NodeKind::Split { left: l, right: r, .. } = &mut self.nodes[id].kind {
            *l = left;
            *r = right;
        }
        id
    }

    fn push_leaf(&mut self, bounds: Bounds, particles: Vec<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(KdNode {
            bounds,
            kind: NodeKind::Leaf {
                leaf: self.leaves.len(),
                particles,
            },
        });
        self.leaves.push(id);
        id
    }

    pub fn root(&self) -> &KdNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &KdNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[KdNode] {
        &self.nodes
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf nodes in construction order.
    pub fn leaves(&self) -> impl Iterator<Item = &KdNode> {
        self.leaves.iter().map(|&id| &self.nodes[id])
    }

    pub fn depth(&self) -> usize {
        fn walk(tree: &KdTree, id: usize) -> usize {
            match tree.nodes[id].kind {
                NodeKind::Leaf { .. } => 0,
                NodeKind::Split { left, right, .. } => 1 + walk(tree, left).max(walk(tree, right)),
            }
        }
        walk(self, 0)
    }

    /// Index (into [`KdTree::leaves`]) of the leaf whose half-open box holds `z`.
    pub fn locate(&self, z: PhasePoint) -> usize {
        let mut id = 0;
        loop {
            match &self.nodes[id].kind {
                NodeKind::Leaf { leaf, .. } => return *leaf,
                NodeKind::Split {
                    axis,
                    value,
                    left,
                    right,
                } => {
                    id = if axis.coord(z) < *value { *left } else { *right };
                }
            }
        }
    }

    /// Leaves whose box meets the vertical line `{x} × ℝ`, in tree order.
    pub fn leaves_on_line(&self, x: f64, out: &mut Vec<usize>) {
        out.clear();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            match &self.nodes[id].kind {
                NodeKind::Leaf { leaf, .. } => out.push(*leaf),
                NodeKind::Split {
                    axis: Axis::X,
                    value,
                    left,
                    right,
                } => stack.push(if x < *value { *left } else { *right }),
                NodeKind::Split {
                    axis: Axis::V,
                    left,
                    right,
                    ..
                } => {
                    stack.push(*right);
                    stack.push(*left);
                }
            }
        }
    }
}

/// Sorts `indices` along `axis` (ties by index) and returns the split position
/// nearest the middle with distinct coordinates on either side.
fn median_split(points: &[PhasePoint], indices: &mut [usize], axis: Axis) -> Option<usize> {
    indices.sort_by(|&a, &b| axis.coord(points[a]).total_cmp(&axis.coord(points[b])).then(a.cmp(&b)));
    let n = indices.len();
    let mid = n / 2;
    let gap = |k: usize| axis.coord(points[indices[k - 1]]) < axis.coord(points[indices[k]]);
    (0..n).find_map(|offset| {
        [mid.checked_sub(offset), mid.checked_add(offset)]
            .into_iter()
            .flatten()
            .find(|&k| k >= 1 && k < n && gap(k))
    })
}

/// Independent local interpolants on the leaves of a [`KdTree`].
#[derive(Debug, Clone)]
pub struct PiecewiseInterpolant {
    tree: KdTree,
    locals: Vec<DirectInterpolant>,
    domain: Domain,
}

impl PiecewiseInterpolant {
    /// Builds the tree and fits every leaf.
    pub fn build(
        ensemble: &ParticleEnsemble,
        n_box: usize,
        spec: KernelSpec,
        mu: f64,
    ) -> Result<Self, InterpolationError> {
        Self::fit(ensemble, KdTree::build(ensemble, n_box), spec, mu)
    }

    /// Fits one local interpolant per leaf of `tree`, which must have been
    /// built over `ensemble`.
    pub fn fit(
        ensemble: &ParticleEnsemble,
        tree: KdTree,
        spec: KernelSpec,
        mu: f64,
    ) -> Result<Self, InterpolationError> {
        let domain = ensemble.domain();
        let locals = tree
            .leaves
            .par_iter()
            .map(|&id| {
                let node = &tree.nodes[id];
                let NodeKind::Leaf { particles, .. } = &node.kind else {
                    unreachable!("leaf list holds only leaves")
                };
                let points: Vec<PhasePoint> = particles.iter().map(|&i| ensemble.positions()[i]).collect();
                let values: Vec<f64> = particles.iter().map(|&i| ensemble.values()[i]).collect();
                let window = (node.bounds.x_lo, node.bounds.x_hi);
                DirectInterpolant::fit_window(&points, &values, domain, spec, mu, window).map_err(|err| {
                    let err = match err {
                        InterpolationError::DuplicateCenters { first, second } => {
                            InterpolationError::DuplicateCenters {
                                first: particles.get(first).copied().unwrap_or(first),
                                second: particles.get(second).copied().unwrap_or(second),
                            }
                        }
                        other => other,
                    };
                    InterpolationError::Leaf {
                        bounds: node.bounds,
                        source: Box::new(err),
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { tree, locals, domain })
    }

    pub fn tree(&self) -> &KdTree {
        &self.tree
    }

    /// Local interpolants, in the order of [`KdTree::leaves`].
    pub fn locals(&self) -> &[DirectInterpolant] {
        &self.locals
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Value of the local interpolant owning `z`; zero outside `|v| ≤ v_max`.
    pub fn evaluate(&self, z: PhasePoint) -> f64 {
        if !(z.v >= -self.domain.v_max && z.v <= self.domain.v_max) {
            return 0.0;
        }
        let z = PhasePoint::new(wrap_position(z.x, self.domain.length), z.v);
        self.locals[self.tree.locate(z)].evaluate_raw(z)
    }

    /// Charge density `ρ(x) = 1 - ∫ f dv`, integrating each box's local
    /// interpolant exactly over the box's velocity range.
    pub fn integrate_density(&self, xs: &[f64]) -> Vec<f64> {
        xs.par_iter()
            .map_init(Vec::new, |boxes, &x| {
                let x = wrap_position(x, self.domain.length);
                self.tree.leaves_on_line(x, boxes);
                let mut rho = 1.0;
                for &leaf in boxes.iter() {
                    let b = self.tree.nodes[self.tree.leaves[leaf]].bounds;
                    rho -= self.locals[leaf].clipped_integral(x, b.v_lo, b.v_hi);
                }
                rho
            })
            .collect()
    }
}
