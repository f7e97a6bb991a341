//! Direct deciders by explicit search. Each assumes its structure is over the
//! problem's vocabulary; [`Problem::accepts`](super::Problem::accepts) checks
//! that first.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::structure::Structure;

fn rel(a: &Structure, name: &str) -> usize {
    a.vocabulary()
        .relation_index(name)
        .expect("decider called on a structure over its own vocabulary")
}

fn constant(a: &Structure, name: &str) -> usize {
    a.constant(name)
        .expect("decider called on a structure over its own vocabulary") as usize
}

/// Out-neighbour lists of the binary relation `E`.
pub fn successors(a: &Structure) -> Vec<Vec<usize>> {
    let e = rel(a, "E");
    let n = a.size() as usize;
    (0..n)
        .map(|u| (0..n).filter(|&v| a.holds_at(e, u * n + v)).collect())
        .collect()
}

/// Adjacency of `E` made symmetric.
#[allow(clippy::needless_range_loop)]
pub fn undirected_adjacency(a: &Structure) -> Vec<Vec<bool>> {
    let e = rel(a, "E");
    let n = a.size() as usize;
    let mut adj = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            if a.holds_at(e, u * n + v) {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
    }
    adj
}

fn directed_adjacency(a: &Structure) -> Vec<Vec<bool>> {
    let e = rel(a, "E");
    let n = a.size() as usize;
    (0..n)
        .map(|u| (0..n).map(|v| a.holds_at(e, u * n + v)).collect())
        .collect()
}

fn bfs(adj: &[Vec<bool>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            return true;
        }
        for (v, &edge) in adj[u].iter().enumerate() {
            if edge && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// A directed `E`-path from `s` to `t`; the empty path counts when `s = t`.
pub fn reach(a: &Structure) -> bool {
    bfs(&directed_adjacency(a), constant(a, "s"), constant(a, "t"))
}

pub fn reach_undirected(a: &Structure) -> bool {
    bfs(&undirected_adjacency(a), constant(a, "s"), constant(a, "t"))
}

/// The vertices from which `t` is accessible: the least set containing `t`,
/// every existential vertex with an edge into the set, and every universal
/// vertex with at least one edge whose successors all lie in the set.
pub fn alternating_accessible(a: &Structure) -> Vec<bool> {
    let succ = successors(a);
    let u = rel(a, "U");
    let t = constant(a, "t");
    let n = succ.len();
    let mut acc = vec![false; n];
    acc[t] = true;
    loop {
        let mut changed = false;
        for x in 0..n {
            if acc[x] || succ[x].is_empty() {
                continue;
            }
            let ok = if a.holds_at(u, x) {
                succ[x].iter().all(|&y| acc[y])
            } else {
                succ[x].iter().any(|&y| acc[y])
            };
            if ok {
                acc[x] = true;
                changed = true;
            }
        }
        if !changed {
            return acc;
        }
    }
}

pub fn altreach(a: &Structure) -> bool {
    alternating_accessible(a)[constant(a, "s")]
}

/// A path visiting every vertex exactly once, from `from` to `to`.
pub fn hamiltonian_path(adj: &[Vec<bool>], from: usize, to: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    if from == to {
        return None;
    }
    let mut path = vec![from];
    let mut used = vec![false; n];
    used[from] = true;
    fn extend(adj: &[Vec<bool>], to: usize, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = adj.len();
        let last = *path.last().unwrap();
        if path.len() == n {
            return last == to;
        }
        for v in 0..n {
            if used[v] || !adj[last][v] || (v == to && path.len() + 1 < n) {
                continue;
            }
            used[v] = true;
            path.push(v);
            if extend(adj, to, path, used) {
                return true;
            }
            path.pop();
            used[v] = false;
        }
        false
    }
    extend(adj, to, &mut path, &mut used).then_some(path)
}

pub fn hp_0max(a: &Structure) -> bool {
    hamiltonian_path(&directed_adjacency(a), 0, a.max() as usize).is_some()
}

pub fn hp_0max_undirected(a: &Structure) -> bool {
    hamiltonian_path(&undirected_adjacency(a), 0, a.max() as usize).is_some()
}

/// Hamiltonian path from `0` to `1`.
pub fn hp_01(a: &Structure) -> bool {
    hamiltonian_path(&directed_adjacency(a), 0, 1).is_some()
}

pub fn hp_two_points(a: &Structure) -> bool {
    hamiltonian_path(&directed_adjacency(a), constant(a, "s"), constant(a, "t")).is_some()
}

pub fn hp_two_points_undirected(a: &Structure) -> bool {
    hamiltonian_path(&undirected_adjacency(a), constant(a, "s"), constant(a, "t")).is_some()
}

/// Connected components of an undirected graph, each listed in increasing
/// order.
fn components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for v in 0..n {
                if adj[u][v] && comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// A 2-colouring of the edges of the simple undirected graph `adj` (loops
/// ignored) without a monochromatic triangle, as `(u, v, colour)` with `u < v`.
pub fn triangle_free_colouring(adj: &[Vec<bool>]) -> Option<Vec<(usize, usize, bool)>> {
    let n = adj.len();
    let mut colour = vec![vec![None::<bool>; n]; n];
    let mut result = Vec::new();
    for comp in components(adj) {
        let mut edges = Vec::new();
        for (j, &v) in comp.iter().enumerate() {
            for &u in &comp[..j] {
                if adj[u][v] {
                    edges.push((u, v));
                }
            }
        }
        if !colour_edges(adj, &edges, 0, &mut colour) {
            return None;
        }
        result.extend(edges.iter().map(|&(u, v)| (u, v, colour[u][v].unwrap())));
    }
    Some(result)
}

fn colour_edges(adj: &[Vec<bool>], edges: &[(usize, usize)], i: usize, colour: &mut [Vec<Option<bool>>]) -> bool {
    let Some(&(u, v)) = edges.get(i) else {
        return true;
    };
    // The first edge of a component can take either colour by symmetry.
    let choices: &[bool] = if i == 0 { &[false] } else { &[false, true] };
    for &c in choices {
        let closes_mono = (0..adj.len()).any(|w| {
            w != u
                && w != v
                && adj[u][w]
                && adj[v][w]
                && colour[u.min(w)][u.max(w)] == Some(c)
                && colour[v.min(w)][v.max(w)] == Some(c)
        });
        if closes_mono {
            continue;
        }
        colour[u][v] = Some(c);
        if colour_edges(adj, edges, i + 1, colour) {
            return true;
        }
        colour[u][v] = None;
    }
    false
}

/// Some 2-colouring of the (symmetrised, loop-free) edges has no
/// monochromatic triangle.
pub fn mono_triangle(a: &Structure) -> bool {
    triangle_free_colouring(&undirected_adjacency(a)).is_some()
}

pub fn co_mono_triangle(a: &Structure) -> bool {
    !mono_triangle(a)
}

/// A perfect 3-dimensional matching inside `M`, as one triple per first
/// coordinate.
pub fn three_dm_matching(a: &Structure) -> Option<Vec<[u32; 3]>> {
    let m = rel(a, "M");
    let n = a.size() as usize;
    let mut by_first: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for t in a.tuples(m) {
        by_first[t[0] as usize].push((t[1] as usize, t[2] as usize));
    }
    fn pick(
        by_first: &[Vec<(usize, usize)>],
        x: usize,
        used_y: &mut [bool],
        used_z: &mut [bool],
        out: &mut Vec<[u32; 3]>,
    ) -> bool {
        if x == by_first.len() {
            return true;
        }
        for &(y, z) in &by_first[x] {
            if used_y[y] || used_z[z] {
                continue;
            }
            used_y[y] = true;
            used_z[z] = true;
            out.push([x as u32, y as u32, z as u32]);
            if pick(by_first, x + 1, used_y, used_z, out) {
                return true;
            }
            out.pop();
            used_y[y] = false;
            used_z[z] = false;
        }
        false
    }
    let mut out = Vec::new();
    pick(&by_first, 0, &mut vec![false; n], &mut vec![false; n], &mut out).then_some(out)
}

pub fn three_dm(a: &Structure) -> bool {
    three_dm_matching(a).is_some()
}

/// `sum of 2^i over i in set`, saturating.
fn binary_value(bits: impl Iterator<Item = usize>) -> u128 {
    bits.fold(0u128, |acc, i| {
        acc.saturating_add(if i < 128 { 1u128 << i } else { u128::MAX })
    })
}

/// Length of edge `(x, y)`: the number whose `i`-th bit is `L(x, y, i)`.
pub fn edge_length(a: &Structure, x: usize, y: usize) -> u128 {
    let l = rel(a, "L");
    let n = a.size() as usize;
    binary_value((0..n).filter(|&i| a.holds_at(l, (x * n + y) * n + i)))
}

/// The bound: the number whose `i`-th bit is `K(i)`.
pub fn length_bound(a: &Structure) -> u128 {
    let k = rel(a, "K");
    binary_value((0..a.size() as usize).filter(|&i| a.holds_at(k, i)))
}

/// A simple directed path from `s` to `t` whose total edge length is at
/// least the bound.
pub fn longest_path(a: &Structure) -> bool {
    let n = a.size() as usize;
    let e = rel(a, "E");
    let (s, t) = (constant(a, "s"), constant(a, "t"));
    let bound = length_bound(a);
    let len: Vec<Vec<Option<u128>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.holds_at(e, x * n + y).then(|| edge_length(a, x, y)))
                .collect()
        })
        .collect();
    fn walk(len: &[Vec<Option<u128>>], u: usize, t: usize, acc: u128, bound: u128, used: &mut [bool]) -> bool {
        if u == t {
            return acc >= bound;
        }
        for v in 0..len.len() {
            if let (false, Some(l)) = (used[v], len[u][v]) {
                used[v] = true;
                let found = walk(len, v, t, acc.saturating_add(l), bound, used);
                used[v] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[s] = true;
    walk(&len, s, t, 0, bound, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::builtin;
    use alloc::sync::Arc;

    fn st(size: u32, edges: &[&[u32]], s: u32, t: u32) -> Structure {
        Structure::from_parts(
            Arc::new(builtin::st_graph()),
            size,
            &[("E", edges)],
            &[("s", s), ("t", t)],
        )
        .unwrap()
    }

    fn graph(size: u32, edges: &[&[u32]]) -> Structure {
        Structure::from_parts(Arc::new(builtin::graph()), size, &[("E", edges)], &[]).unwrap()
    }

    fn complete(size: u32) -> Structure {
        let voc = Arc::new(builtin::graph());
        let mut g = Structure::empty(voc, size).unwrap();
        for u in 0..size {
            for v in u + 1..size {
                g.insert("E", &[u, v]).unwrap();
            }
        }
        g
    }

    #[test]
    fn reach_examples() {
        assert!(reach(&st(3, &[&[0, 2], &[2, 1]], 0, 1)));
        assert!(!reach(&st(3, &[&[2, 0], &[1, 2]], 0, 1)));
        assert!(reach_undirected(&st(3, &[&[2, 0], &[1, 2]], 0, 1)));
        assert!(reach(&st(2, &[], 1, 1)));
    }

    #[test]
    fn hamiltonian_paths() {
        let path = graph(3, &[&[0, 1], &[1, 2]]);
        assert!(hp_0max(&path));
        assert!(!hp_01(&path));
        let back = graph(3, &[&[1, 0], &[2, 1]]);
        assert!(!hp_0max(&back));
        assert!(hp_0max_undirected(&back));
        assert!(!hp_two_points(&st(2, &[&[0, 1]], 0, 0)));
    }

    #[test]
    fn ramsey_six() {
        assert!(mono_triangle(&complete(5)));
        assert!(!mono_triangle(&complete(6)));
        assert!(co_mono_triangle(&complete(6)));
        let colouring = triangle_free_colouring(&undirected_adjacency(&complete(5))).unwrap();
        assert_eq!(colouring.len(), 10);
    }

    #[test]
    fn three_dm_examples() {
        let voc = Arc::new(builtin::three_dm());
        let diag = Structure::from_parts(voc.clone(), 2, &[("M", &[&[0, 0, 0], &[1, 1, 1]])], &[]).unwrap();
        assert!(three_dm(&diag));
        let clash = Structure::from_parts(voc.clone(), 2, &[("M", &[&[0, 0, 0], &[1, 0, 1]])], &[]).unwrap();
        assert!(!three_dm(&clash));
        assert!(!three_dm(&Structure::empty(voc, 2).unwrap()));
    }

    #[test]
    fn alternating_reachability() {
        let voc = Arc::new(builtin::alt_graph());
        // 0 universal with edges to 1 and 2; only 1 reaches t = 3.
        let mut a = Structure::from_parts(
            voc.clone(),
            4,
            &[("E", &[&[0, 1], &[0, 2], &[1, 3]]), ("U", &[&[0]])],
            &[("s", 0), ("t", 3)],
        )
        .unwrap();
        assert!(!altreach(&a));
        a.insert("E", &[2, 3]).unwrap();
        assert!(altreach(&a));
        // A universal vertex without edges reaches nothing.
        let dead = Structure::from_parts(voc, 2, &[("U", &[&[0]])], &[("s", 0), ("t", 1)]).unwrap();
        assert!(!altreach(&dead));
    }

    #[test]
    fn longest_path_unit_lengths() {
        let voc = Arc::new(builtin::longest_path());
        let a = Structure::from_parts(
            voc.clone(),
            3,
            &[
                ("E", &[&[0, 1], &[1, 2]]),
                ("L", &[&[0, 1, 0], &[1, 2, 0]]),
                ("K", &[&[1]]),
            ],
            &[("s", 0), ("t", 2)],
        )
        .unwrap();
        assert_eq!(length_bound(&a), 2);
        assert!(longest_path(&a));
        let short = Structure::from_parts(
            voc,
            3,
            &[("E", &[&[0, 2]]), ("L", &[&[0, 2, 0]]), ("K", &[&[1]])],
            &[("s", 0), ("t", 2)],
        )
        .unwrap();
        assert!(!longest_path(&short));
    }
}
