//! Brute-force oracles shared by the integration tests. They read only the
//! public constraint lists, never the solver's index structures.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbcsp_core::csp::{Constraint, CspInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f7e57)
}

/// Conflicts by linear scan of every constraint's pair list.
pub fn brute_conflicts(inst: &CspInstance, values: &[u32]) -> usize {
    violated_ids(inst, values).len()
}

pub fn violated_ids(inst: &CspInstance, values: &[u32]) -> Vec<usize> {
    inst.constraints()
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.disallowed
                .contains(&(values[c.var_a as usize], values[c.var_b as usize]))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Conflicts among the variables of `subset` only.
pub fn conflicts_within(inst: &CspInstance, values: &[u32], subset: &[u32]) -> usize {
    inst.constraints()
        .iter()
        .filter(|c| subset.contains(&c.var_a) && subset.contains(&c.var_b))
        .filter(|c| {
            c.disallowed
                .contains(&(values[c.var_a as usize], values[c.var_b as usize]))
        })
        .count()
}

/// Whether any of the `d^n` assignments has zero conflicts.
pub fn exhaustively_satisfiable(inst: &CspInstance) -> bool {
    let (n, d) = (inst.num_vars(), inst.domain_size() as u32);
    let mut values = vec![0u32; n];
    loop {
        if brute_conflicts(inst, &values) == 0 {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            values[k] += 1;
            if values[k] < d {
                break;
            }
            values[k] = 0;
            k += 1;
        }
    }
}

/// A random instance with independent uniform choices (duplicates of
/// variable pairs allowed).
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, d: usize, m: usize) -> CspInstance {
    let constraints = (0..m)
        .map(|_| {
            let a = rng.gen_range(0..n as u32);
            let mut b = rng.gen_range(0..n as u32 - 1);
            if b >= a {
                b += 1;
            }
            let k = rng.gen_range(1..=d * d);
            let pairs = rand::seq::index::sample(rng, d * d, k)
                .into_iter()
                .map(|x| ((x / d) as u32, (x % d) as u32))
                .collect();
            Constraint::new(a, b, pairs)
        })
        .collect();
    CspInstance::new(n, d, constraints).unwrap()
}

/// Like [`random_instance`] but with at most one constraint per unordered
/// variable pair, oriented `a < b`.
pub fn random_duplicate_free(rng: &mut ChaCha8Rng, n: usize, d: usize, m: usize) -> CspInstance {
    let mut pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    rand::seq::SliceRandom::shuffle(pairs.as_mut_slice(), rng);
    let constraints = pairs
        .into_iter()
        .take(m)
        .map(|(a, b)| {
            let k = rng.gen_range(1..=d * d);
            let set = rand::seq::index::sample(rng, d * d, k)
                .into_iter()
                .map(|x| ((x / d) as u32, (x % d) as u32))
                .collect();
            Constraint::new(a, b, set)
        })
        .collect();
    CspInstance::new(n, d, constraints).unwrap()
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..d as u32)).collect()
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n as u32, k, &mut Vec::new(), &mut out);
    out
}
