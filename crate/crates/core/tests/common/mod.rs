#![allow(dead_code)]

use kingid_core::{diagonal_code, is_valid, Coord, SetKind, TorusCode};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each cell a codeword with probability `p`.
pub fn random_code(w: usize, h: usize, p: f64, rng: &mut ChaCha8Rng) -> TorusCode {
    TorusCode::from_fn(w, h, |_| rng.gen_bool(p)).unwrap()
}

/// Drop codewords in random order while the code stays valid.
pub fn prune(code: &mut TorusCode, rng: &mut ChaCha8Rng) {
    let mut cells: Vec<Coord> = code.members().collect();
    cells.shuffle(rng);
    for c in cells {
        code.remove(c);
        if !is_valid(code) {
            code.insert(c);
        }
    }
}

/// An inclusion-minimal valid code reached from the full torus.
pub fn random_minimal(w: usize, h: usize, rng: &mut ChaCha8Rng) -> TorusCode {
    let mut code = TorusCode::full(w, h).unwrap();
    prune(&mut code, rng);
    code
}

/// The 3/7 construction plus random extra codewords, then pruned back to a
/// minimal valid code.
pub fn perturbed_construction(k: usize, extra: f64, rng: &mut ChaCha8Rng) -> TorusCode {
    perturbed(&diagonal_code(7, &[1, 3, 6], 7 * k, 7 * k).unwrap(), extra, rng)
}

/// A mix of minimal random codes and perturbed constructions.
pub fn valid_codes(n: usize, seed: u64) -> Vec<TorusCode> {
    let mut rng = rng(seed);
    let sizes = [(8, 8), (10, 10), (9, 11), (12, 12), (6, 13)];
    (0..n)
        .map(|i| {
            if i % 4 == 3 {
                perturbed_construction(1 + i % 2, 0.3, &mut rng)
            } else {
                let (w, h) = sizes[i % sizes.len()];
                random_minimal(w, h, &mut rng)
            }
        })
        .collect()
}

/// Every subset of a `w x h` torus, as codes.
pub fn all_codes(w: usize, h: usize) -> impl Iterator<Item = TorusCode> {
    let n = w * h;
    (0u64..1 << n).map(move |mask| TorusCode::from_fn(w, h, |p| mask >> (p.y as usize * w + p.x as usize) & 1 == 1).unwrap())
}

/// Direct scan of the three set families at every position.
pub fn scan_violations(code: &TorusCode) -> Vec<(Coord, SetKind)> {
    let mut out = Vec::new();
    for y in 0..code.height() as i32 {
        for x in 0..code.width() as i32 {
            let hit = |cells: &[(i32, i32)]| cells.iter().any(|&(dx, dy)| code.contains(Coord::new(x + dx, y + dy)));
            let p = Coord::new(x, y);
            if !hit(&[(0, 0), (3, 0), (0, 3), (3, 3)]) {
                out.push((p, SetKind::Corners));
            }
            if !hit(&[(0, 0), (1, 0), (2, 0)]) {
                out.push((p, SetKind::Horizontal));
            }
            if !hit(&[(0, 0), (0, 1), (0, 2)]) {
                out.push((p, SetKind::Vertical));
            }
        }
    }
    out
}

/// Alternately a minimal valid code and a random code, on random small tori.
pub fn mixed_codes(n: usize, seed: u64) -> Vec<TorusCode> {
    let mut rng = rng(seed);
    (0..n)
        .map(|i| {
            let w = rng.gen_range(4..=9);
            let h = rng.gen_range(4..=9);
            if i % 2 == 0 {
                random_minimal(w, h, &mut rng)
            } else {
                let p = rng.gen_range(0.3..0.8);
                random_code(w, h, p, &mut rng)
            }
        })
        .collect()
}

/// Valid codes with one codeword removed, leaving exactly one violated set.
pub fn seeded_single_violations(n: usize, seed: u64) -> Vec<TorusCode> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let mut code = random_minimal(8, 8, &mut rng);
        let members: Vec<Coord> = code.members().collect();
        let victim = *members.choose(&mut rng).unwrap();
        code.remove(victim);
        if scan_violations(&code).len() == 1 {
            out.push(code);
        }
    }
    out
}

/// `tile` repeated `kx` by `ky` times.
pub fn tiled(tile: &TorusCode, kx: usize, ky: usize) -> TorusCode {
    TorusCode::from_fn(tile.width() * kx, tile.height() * ky, |p| tile.contains(p)).unwrap()
}

/// Random extra codewords added to `code`, then pruned to a minimal valid code.
pub fn perturbed(code: &TorusCode, extra: f64, rng: &mut ChaCha8Rng) -> TorusCode {
    let mut code = code.clone();
    for c in code.domain().collect::<Vec<_>>() {
        if rng.gen_bool(extra) {
            code.insert(c);
        }
    }
    prune(&mut code, rng);
    code
}
