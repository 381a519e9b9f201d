//! Fill-reducing ordering for matrices whose unknowns sit at points of the
//! plane.
//!
//! Geometric nested dissection: the vertex set is split by a line
//! perpendicular to its longer extent. Among the candidate lines near the
//! median, the one with the smallest separator is used, where the separator
//! is the set of vertices on the near side with a neighbour on the far side.
//! Both halves are ordered recursively and the separator is numbered last.

use alloc::vec;
use alloc::vec::Vec;

/// Parts at or below this size keep their natural order.
const LEAF_SIZE: usize = 64;

/// Smallest fraction of the non-separator vertices allowed on either side.
const MIN_BALANCE: f64 = 0.25;

/// Returns `perm` with `perm[new] = old`.
pub fn nested_dissection(ptr: &[usize], adj: &[u32], coords: &[[f64; 2]]) -> Vec<usize> {
    let n = coords.len();
    let mut out = Vec::with_capacity(n);
    let mut stamp = vec![u32::MAX; n];
    let mut counter = 0u32;
    let mut stack: Vec<Task> = vec![Task::Split((0..n).collect())];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(v) => out.extend(v),
            Task::Split(verts) => {
                if verts.len() <= LEAF_SIZE {
                    out.extend(verts);
                    continue;
                }
                counter += 1;
                match split(&verts, ptr, adj, coords, &mut stamp, counter) {
                    Some((left, right, sep)) => {
                        // processed in reverse push order: left, right, separator
                        stack.push(Task::Emit(sep));
                        stack.push(Task::Split(right));
                        stack.push(Task::Split(left));
                    }
                    None => out.extend(verts),
                }
            }
        }
    }
    out
}

enum Task {
    Split(Vec<usize>),
    Emit(Vec<usize>),
}

type Parts = (Vec<usize>, Vec<usize>, Vec<usize>);

fn split(
    verts: &[usize],
    ptr: &[usize],
    adj: &[u32],
    coords: &[[f64; 2]],
    stamp: &mut [u32],
    id: u32,
) -> Option<Parts> {
    for &v in verts {
        stamp[v] = id;
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for &v in verts {
        for a in 0..2 {
            lo[a] = lo[a].min(coords[v][a]);
            hi[a] = hi[a].max(coords[v][a]);
        }
    }
    let first = if hi[0] - lo[0] >= hi[1] - lo[1] { 0 } else { 1 };
    for axis in [first, 1 - first] {
        if hi[axis] <= lo[axis] {
            continue;
        }
        if let Some(parts) = split_along(verts, ptr, adj, coords, stamp, id, axis) {
            return Some(parts);
        }
    }
    None
}

fn split_along(
    verts: &[usize],
    ptr: &[usize],
    adj: &[u32],
    coords: &[[f64; 2]],
    stamp: &[u32],
    id: u32,
    axis: usize,
) -> Option<Parts> {
    let n = verts.len();
    // each vertex v blocks the cut values c in [x_v, max neighbour coordinate)
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * n);
    let mut xs: Vec<f64> = Vec::with_capacity(n);
    for &v in verts {
        let x = coords[v][axis];
        xs.push(x);
        let mut reach = x;
        for &w in &adj[ptr[v]..ptr[v + 1]] {
            let w = w as usize;
            if stamp[w] == id {
                reach = reach.max(coords[w][axis]);
            }
        }
        if reach > x {
            events.push((x, 1));
            events.push((reach, -1));
        }
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup();
    if xs.len() < 2 {
        return None;
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // sweep the candidate values in increasing order
    let mut sorted: Vec<f64> = verts.iter().map(|&v| coords[v][axis]).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut best: Option<(usize, f64)> = None;
    let mut e = 0;
    let mut active = 0i64;
    let mut below = 0usize;
    for &c in &xs[..xs.len() - 1] {
        while e < events.len() && events[e].0 <= c {
            active += events[e].1 as i64;
            e += 1;
        }
        while below < n && sorted[below] <= c {
            below += 1;
        }
        let sep = active as usize;
        let left = below - sep;
        let right = n - below;
        let rest = (left + right) as f64;
        if rest == 0.0 || (left as f64) < MIN_BALANCE * rest || (right as f64) < MIN_BALANCE * rest {
            continue;
        }
        if best.map_or(true, |(s, _)| sep < s) {
            best = Some((sep, c));
        }
    }
    let (_, c) = best?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut sep = Vec::new();
    for &v in verts {
        let x = coords[v][axis];
        if x > c {
            right.push(v);
            continue;
        }
        let crosses = adj[ptr[v]..ptr[v + 1]].iter().any(|&w| stamp[w as usize] == id && coords[w as usize][axis] > c);
        if crosses {
            sep.push(v);
        } else {
            left.push(v);
        }
    }
    Some((left, right, sep))
}

/// Inverse permutation.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> (Vec<usize>, Vec<u32>, Vec<[f64; 2]>) {
        let mut ptr = vec![0];
        let mut adj = Vec::new();
        let mut coords = Vec::new();
        for j in 0..n {
            for i in 0..n {
                coords.push([i as f64, j as f64]);
                for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n {
                        adj.push((b as usize * n + a as usize) as u32);
                    }
                }
                ptr.push(adj.len());
            }
        }
        (ptr, adj, coords)
    }

    #[test]
    fn is_a_permutation_with_separator_last() {
        let (ptr, adj, coords) = grid(30);
        let perm = nested_dissection(&ptr, &adj, &coords);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..900).collect::<Vec<_>>());
        // the top separator is a full grid line of 30 vertices
        let tail = &perm[870..];
        let x0 = coords[tail[0]][0];
        assert!(tail.iter().all(|&v| coords[v][0] == x0));
        assert_eq!(invert(&perm)[perm[5]], 5);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(nested_dissection(&[0], &[], &[]).is_empty());
        // all points coincide: natural order
        let coords = vec![[0.0, 0.0]; 100];
        let ptr: Vec<usize> = (0..=100).map(|_| 0).collect();
        assert_eq!(nested_dissection(&ptr, &[], &coords), (0..100).collect::<Vec<_>>());
    }
}
