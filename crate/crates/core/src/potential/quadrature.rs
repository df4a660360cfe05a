//! Adaptive octree quadrature over voxel cells.
//!
//! Each leaf carries a 2-point Gauss product estimate (8 nodes) of the
//! integrand over its cube, together with the same rule applied to its
//! eight children. The difference of the two is the leaf's error estimate;
//! the leaf with the largest estimate, which is the one nearest the field
//! point, is split until the summed estimate falls under
//! `rel_tol · |total|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::distributions::VoxelGrid;
use crate::error::{Error, Result};
use crate::vector::Vector3;

use super::QuadratureOptions;

const GAUSS2: f64 = 0.577_350_269_189_625_8;

/// Hard cap on live leaves, independent of the depth budget.
const MAX_LEAVES: usize = 1 << 20;

struct Leaf<const N: usize> {
    corner: Vector3,
    size: f64,
    density: f64,
    depth: u32,
    fine: [f64; N],
    error: f64,
    order: u64,
}

impl<const N: usize> PartialEq for Leaf<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Leaf<N> {}

impl<const N: usize> PartialOrd for Leaf<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Leaf<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn add<const N: usize>(a: &mut [f64; N], b: &[f64; N], scale: f64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += scale * y;
    }
}

fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// 2-point Gauss product rule for ∫_cube f over `[corner, corner + size]³`.
fn gauss2<const N: usize>(corner: Vector3, size: f64, f: &impl Fn(Vector3) -> [f64; N]) -> [f64; N] {
    let half = 0.5 * size;
    let mid = corner + Vector3::new(half, half, half);
    let mut sum = [0.0; N];
    for a in [-GAUSS2, GAUSS2] {
        for b in [-GAUSS2, GAUSS2] {
            for c in [-GAUSS2, GAUSS2] {
                add(&mut sum, &f(mid + Vector3::new(a, b, c) * half), 1.0);
            }
        }
    }
    let vol = half.powi(3);
    sum.map(|s| s * vol)
}

fn children(corner: Vector3, size: f64) -> impl Iterator<Item = Vector3> {
    let h = 0.5 * size;
    (0..8).map(move |i| corner + Vector3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64) * h)
}

fn refined<const N: usize>(corner: Vector3, size: f64, f: &impl Fn(Vector3) -> [f64; N]) -> [f64; N] {
    let mut sum = [0.0; N];
    for child in children(corner, size) {
        add(&mut sum, &gauss2(child, 0.5 * size, f), 1.0);
    }
    sum
}

/// ∫_Ω μ(x) f(x) dx over the occupied cells of `grid`.
pub(crate) fn integrate<const N: usize>(
    grid: &VoxelGrid,
    opts: &QuadratureOptions,
    f: impl Fn(Vector3) -> [f64; N],
) -> Result<[f64; N]> {
    let mut heap = BinaryHeap::new();
    let mut total = [0.0; N];
    let mut error_sum = 0.0;
    let mut order = 0u64;

    let mut make_leaf = |corner: Vector3, size: f64, density: f64, depth: u32, coarse: [f64; N]| {
        let fine = refined(corner, size, &f);
        let mut diff = fine;
        add(&mut diff, &coarse, -1.0);
        order += 1;
        Leaf {
            corner,
            size,
            density,
            depth,
            fine,
            error: density * norm(&diff),
            order,
        }
    };

    for (corner, density) in grid.occupied_cells() {
        let size = grid.cell_size();
        let coarse = gauss2(corner, size, &f);
        let leaf = make_leaf(corner, size, density, 0, coarse);
        add(&mut total, &leaf.fine, density);
        error_sum += leaf.error;
        heap.push(leaf);
    }

    while error_sum > opts.rel_tol * norm(&total) {
        let leaf = heap.pop().expect("error budget implies a leaf");
        if leaf.depth >= opts.max_subdivisions || heap.len() + 8 > MAX_LEAVES {
            return Err(Error::ToleranceNotMet {
                rel_tol: opts.rel_tol,
                estimate: error_sum / norm(&total),
            });
        }
        add(&mut total, &leaf.fine, -leaf.density);
        error_sum -= leaf.error;
        let half = 0.5 * leaf.size;
        for child in children(leaf.corner, leaf.size) {
            let coarse = gauss2(child, half, &f);
            let c = make_leaf(child, half, leaf.density, leaf.depth + 1, coarse);
            add(&mut total, &c.fine, c.density);
            error_sum += c.error;
            heap.push(c);
        }
    }

    // Re-sum in creation order so the result does not depend on the running
    // cancellation in `total`.
    let mut leaves = heap.into_vec();
    leaves.sort_by_key(|l| l.order);
    let mut result = [0.0; N];
    for leaf in &leaves {
        add(&mut result, &leaf.fine, leaf.density);
    }
    Ok(result)
}
