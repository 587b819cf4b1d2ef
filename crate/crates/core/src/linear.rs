//! A deformed reflection representation over a prime field, used by the oracle to
//! separate group elements cheaply. Each generator acts by `v ↦ v − B(e_s, v)·e_s`
//! with `B(e_s, e_s) = 1 + q`, `B(e_s, e_t) = B(e_t, e_s) = 0` for commuting pairs, and otherwise `B(e_s, e_t)·B(e_t, e_s) = q(2 + ζ + ζ⁻¹)` for a
//! primitive m-th root of unity ζ, which makes the 2-dimensional blocks satisfy the
//! Artin relations.

use crate::graph::ArtinGraph;
use crate::words::Letter;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root_of_unity(m: u64, p: u64) -> u64 {
    let factors = prime_factors(m);
    (2..p)
        .map(|g| pow_mod(g, (p - 1) / m, p))
        .find(|&z| factors.iter().all(|&r| pow_mod(z, m / r, p) != 1))
        .expect("p ≡ 1 mod m")
}

#[derive(Debug, Clone)]
pub struct LinearRep {
    p: u64,
    n: usize,
    /// Row-major matrices indexed by letter index.
    mats: Vec<Vec<u64>>,
}

impl LinearRep {
    pub fn new(graph: &ArtinGraph) -> LinearRep {
        LinearRep::with_parameter(graph, 0x2545_f491_4f6c_dd1d)
    }

    /// `seed` picks the deformation parameter q.
    pub fn with_parameter(graph: &ArtinGraph, seed: u64) -> LinearRep {
        let lcm = graph.edges().iter().fold(2u64, |l, &(_, _, m)| l / gcd(l, m as u64) * m as u64);
        let mut p = (1u64 << 61) / lcm * lcm + 1;
        while !is_prime(p) {
            p -= lcm;
        }
        let q = seed % (p - 3) + 2;
        let n = graph.vertex_count();
        // b[s][t] = B(e_s, e_t)
        let mut b = vec![vec![0u64; n]; n];
        for s in 0..n {
            b[s][s] = (1 + q) % p;
            for t in s + 1..n {
                let (st, ts) = match graph.label(s as u16, t as u16) {
                    Some(2) => (0, 0),
                    Some(m) => {
                        let z = primitive_root_of_unity(m as u64, p);
                        let zi = pow_mod(z, p - 2, p);
                        (p - 1, p - mul_mod(q, (2 + z + zi) % p, p))
                    }
                    None => (p - 1, p - mul_mod(q, 7 + seed % 1_000_003, p)),
                };
                b[s][t] = st % p;
                b[t][s] = ts % p;
            }
        }
        let q_inv = pow_mod(q, p - 2, p);
        let mut mats = vec![Vec::new(); 2 * n];
        for s in 0..n {
            let mut fwd = vec![0u64; n * n];
            let mut inv = vec![0u64; n * n];
            for i in 0..n {
                fwd[i * n + i] = 1;
                inv[i * n + i] = 1;
            }
            for t in 0..n {
                // σ = I − e_s b_sᵀ, σ⁻¹ = I − q⁻¹ e_s b_sᵀ
                fwd[s * n + t] = (fwd[s * n + t] + p - b[s][t]) % p;
                inv[s * n + t] = (inv[s * n + t] + p - mul_mod(q_inv, b[s][t], p)) % p;
            }
            mats[Letter::pos(s as u16).index()] = fwd;
            mats[Letter::neg(s as u16).index()] = inv;
        }
        LinearRep { p, n, mats }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn image(&self, w: &[Letter]) -> Vec<u64> {
        let n = self.n;
        let mut acc = vec![0u64; n * n];
        for i in 0..n {
            acc[i * n + i] = 1;
        }
        let mut next = vec![0u64; n * n];
        for l in w {
            let m = &self.mats[l.index()];
            for i in 0..n {
                for j in 0..n {
                    let mut s: u128 = 0;
                    for k in 0..n {
                        s += acc[i * n + k] as u128 * m[k * n + j] as u128;
                    }
                    next[i * n + j] = (s % self.p as u128) as u64;
                }
            }
            std::mem::swap(&mut acc, &mut next);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{alternating, Side};

    #[test]
    fn primes() {
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(2_305_843_009_213_693_953));
        assert!(is_prime(97) && !is_prime(91));
    }

    #[test]
    fn artin_relations_hold() {
        for (ab, bc, ca) in [(2, 3, 4), (4, 4, 4), (6, 4, 8), (5, 7, 0), (3, 3, 3)] {
            let g = ArtinGraph::triangle(ab, bc, ca);
            let rep = LinearRep::new(&g);
            for (u, v, m) in g.edges() {
                let (x, y) = (Letter::pos(u), Letter::pos(v));
                let lhs = alternating(x, y, m as usize, Side::Left).unwrap();
                let rhs = alternating(y, x, m as usize, Side::Left).unwrap();
                assert_eq!(rep.image(&lhs), rep.image(&rhs), "{ab}{bc}{ca} edge {u}-{v}");
                let shorter = alternating(x, y, m as usize - 1, Side::Left).unwrap();
                let shorter_r = alternating(y, x, m as usize - 1, Side::Left).unwrap();
                assert_ne!(rep.image(&shorter), rep.image(&shorter_r));
            }
            for l in 0..3u16 {
                let w = [Letter::pos(l), Letter::neg(l)];
                assert_eq!(rep.image(&w), rep.image(&[]));
            }
        }
    }
}
