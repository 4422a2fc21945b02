use std::time::Instant;
use toric_lift::basis::*;
use toric_lift::latalg::*;
use toric_lift::matrix::*;

fn k4_binary() -> IMat {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut rows = vec![vec![0i64; 16]; 24];
    for col in 0..16usize {
        let idx = [(col >> 3) & 1, (col >> 2) & 1, (col >> 1) & 1, col & 1];
        for (e, &(a, b)) in edges.iter().enumerate() {
            let cell = idx[a] * 2 + idx[b];
            rows[e * 4 + cell][col] = 1;
        }
    }
    IMat::from_rows(&rows)
}

fn main() {
    let b = k4_binary();
    let t = Instant::now();
    let l = kernel_lattice(&b);
    println!("kernel rank {} ({:?})", l.rank(), t.elapsed());
    let t = Instant::now();
    let m = markov_basis(&l);
    println!("markov completion: {} moves ({:?})", m.moves.len(), t.elapsed());
    let t = Instant::now();
    let min = minimal_markov_basis(&l).unwrap();
    println!("minimal basis: {} moves ({:?})", min.moves.len(), t.elapsed());
}
