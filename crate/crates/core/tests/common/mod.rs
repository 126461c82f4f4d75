#![allow(dead_code)]

use essentri_core::skeleton::build_skeleton;
use essentri_core::{Mode, Perm4, Triangulation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random closed, connected triangulation with `1..=max_tets` tetrahedra that
/// passes validation. Faces are paired uniformly; invalid draws are rejected.
pub fn random_triangulation(seed: u64, max_tets: usize) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(1..=max_tets);
        let mut faces: Vec<(usize, usize)> = (0..n).flat_map(|t| (0..4).map(move |f| (t, f))).collect();
        faces.shuffle(&mut rng);
        let mut tri = Triangulation::new(n);
        for pair in faces.chunks(2) {
            let ((t, f), (u, g)) = (pair[0], pair[1]);
            let mut from: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            let mut to: Vec<usize> = (0..4).filter(|&v| v != g).collect();
            from.sort();
            to.shuffle(&mut rng);
            let mut images = [0u8; 4];
            images[f] = g as u8;
            for (a, b) in from.iter().zip(&to) {
                images[*a] = *b as u8;
            }
            tri.join(t, f, u, Perm4::new(images).unwrap());
        }
        if tri.validate_mode(Mode::Closed).is_valid() && connected(&tri) && build_skeleton(&tri).is_ok() {
            return tri;
        }
    }
}

fn connected(tri: &Triangulation) -> bool {
    let n = tri.tet_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Edge cycles of the seven-tetrahedron m136 triangulation as tabulated in the
/// literature: `(tet, [a, b])` per corner.
pub const M136_CYCLES: [&[(usize, [usize; 2])]; 7] = [
    &[(0, [0, 1]), (4, [3, 0]), (2, [2, 1]), (1, [3, 1])],
    &[(0, [0, 2]), (1, [3, 2]), (2, [3, 0]), (6, [1, 3])],
    &[(0, [0, 3]), (6, [1, 0]), (5, [1, 0]), (3, [3, 0]), (6, [0, 2]), (5, [0, 3]), (3, [1, 3]), (6, [3, 0]), (0, [2, 3]), (4, [3, 2])],
    &[(0, [1, 2]), (4, [1, 3]), (2, [3, 2]), (1, [3, 0]), (2, [2, 0]), (1, [0, 2]), (3, [1, 2]), (5, [0, 2]), (3, [0, 2]), (1, [1, 2])],
    &[(0, [1, 3]), (4, [0, 2]), (5, [3, 2]), (3, [3, 2]), (5, [1, 2]), (4, [1, 2])],
    &[(1, [0, 1]), (2, [0, 1]), (6, [3, 2]), (3, [1, 0])],
    &[(2, [1, 3]), (6, [2, 1]), (5, [3, 1]), (4, [0, 1])],
];

/// Equal as cyclic sequences, allowing reversal of the traversal and of the edge direction.
pub fn same_cycle(a: &[(usize, [usize; 2])], b: &[(usize, [usize; 2])]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let flip = |c: &[(usize, [usize; 2])]| c.iter().map(|&(t, [x, y])| (t, [y, x])).collect::<Vec<_>>();
    let variants = [b.to_vec(), b.iter().rev().copied().collect(), flip(b), flip(b).into_iter().rev().collect()];
    variants.iter().any(|v| (0..v.len()).any(|r| (0..a.len()).all(|i| a[i] == v[(i + r) % v.len()])))
}
