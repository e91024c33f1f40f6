#![allow(dead_code)]

use jss_core::{Matrix, Permutation, RelationSet, SignatureMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn positive4() -> Matrix {
    Matrix::from_rows(&[
        [30.0, 41.0, 3.0, 16.0],
        [41.0, 61.0, 3.0, 20.0],
        [3.0, 3.0, 1.0, 2.0],
        [16.0, 20.0, 2.0, 10.0],
    ])
    .unwrap()
}

pub fn positive4_compound() -> Matrix {
    Matrix::from_rows(&[
        [149.0, -33.0, -56.0, -60.0, -156.0, 12.0],
        [-33.0, 21.0, 12.0, 32.0, 34.0, -10.0],
        [-56.0, 12.0, 44.0, 22.0, 90.0, -2.0],
        [-60.0, 32.0, 22.0, 52.0, 62.0, -14.0],
        [-156.0, 34.0, 90.0, 62.0, 210.0, -10.0],
        [12.0, -10.0, -2.0, -14.0, -10.0, 6.0],
    ])
    .unwrap()
}

pub fn mixed4() -> Matrix {
    Matrix::from_rows(&[
        [2.0, 5.0, 4.0, 3.0],
        [3.0, 36.0, 25.0, 12.0],
        [3.0, 25.0, 18.0, 9.0],
        [3.0, 12.0, 9.0, 6.0],
    ])
    .unwrap()
}

pub fn mixed4_compound() -> Matrix {
    Matrix::from_rows(&[
        [57.0, 38.0, 15.0, -19.0, -48.0, -27.0],
        [35.0, 24.0, 9.0, -10.0, -30.0, -18.0],
        [9.0, 6.0, 3.0, -3.0, -6.0, -3.0],
        [-33.0, -21.0, -9.0, 23.0, 24.0, 9.0],
        [-72.0, -48.0, -18.0, 24.0, 72.0, 42.0],
        [-39.0, -27.0, -9.0, 9.0, 42.0, 27.0],
    ])
    .unwrap()
}

pub fn cyclic3() -> Matrix {
    Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
}

pub fn signed3() -> Matrix {
    Matrix::from_rows(&[[8.5, 0.0, 6.1], [-5.6, 3.2, -7.4], [6.0, -2.8, 6.6]]).unwrap()
}

pub fn signed3_compound() -> Matrix {
    Matrix::from_rows(&[
        [27.2, -28.74, -19.52],
        [-23.8, 19.5, 17.08],
        [-3.52, 7.44, 0.4],
    ])
    .unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_positive(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| rng.gen_range(0.1..2.0))
}

/// Nonnegative with zeros, kept irreducible by a Hamiltonian cycle.
pub fn random_sparse_irreducible(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut cycle: Vec<usize> = (0..n).collect();
    cycle.shuffle(rng);
    let mut m = Matrix::from_fn(n, |_, _| {
        if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(0.1..2.0)
        }
    })
    .to_rows();
    for k in 0..n {
        m[cycle[k]][cycle[(k + 1) % n]] = rng.gen_range(0.1..2.0);
    }
    Matrix::from_rows(&m).unwrap()
}

pub fn random_signature(rng: &mut impl Rng, n: usize) -> SignatureMatrix {
    let signs: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
    SignatureMatrix::from_signs(&signs).unwrap()
}

pub fn random_relation(rng: &mut impl Rng, n: usize) -> RelationSet {
    let pairs: Vec<(usize, usize)> = jss_core::compound::PairIndexer::new(n)
        .pairs()
        .iter()
        .map(|&(i, j)| if rng.gen_bool(0.5) { (i, j) } else { (j, i) })
        .collect();
    RelationSet::from_pairs(n, &pairs).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::new(image).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::new(prefix.clone()).unwrap());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Random product of nonnegative elementary bidiagonal factors and a positive
/// diagonal; always totally nonnegative.
pub fn random_totally_nonnegative(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::from_fn(n, |i, j| if i == j { rng.gen_range(0.5..2.0) } else { 0.0 });
    let factors = rng.gen_range(1..=2 * n);
    for _ in 0..factors {
        let k = rng.gen_range(1..n);
        let w = rng.gen_range(0.2..1.5);
        let lower = rng.gen_bool(0.5);
        let e = Matrix::from_fn(n, |i, j| {
            if i == j {
                1.0
            } else if (lower && i == k && j == k - 1) || (!lower && i == k - 1 && j == k) {
                w
            } else {
                0.0
            }
        });
        m = if rng.gen_bool(0.5) { e.matmul(&m).unwrap() } else { m.matmul(&e).unwrap() };
    }
    m
}

/// Nonnegative matrix with three diagonal-free cyclic blocks of random sizes
/// summing to `n`, conjugated by a random permutation.
pub fn random_block_cyclic(rng: &mut impl Rng, n: usize) -> Matrix {
    assert!(n >= 3);
    let mut sizes = [1usize; 3];
    for _ in 3..n {
        sizes[rng.gen_range(0..3)] += 1;
    }
    let mut block = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat(b).take(s));
    }
    let raw = Matrix::from_fn(n, |i, j| {
        if block[j] == (block[i] + 1) % 3 {
            rng.gen_range(0.1..3.0)
        } else {
            0.0
        }
    });
    let theta = random_permutation(rng, n);
    jss_core::matrix::conjugate_permutation(&raw, &theta).unwrap()
}
