use rayon::prelude::*;

use crate::estimate::{ConstantEstimate, Side};
use crate::lattice::{LinOperator, NormSpec, Vector};
use crate::search::{self, AscentConfig, Rng};

use super::kind::{ratio_value, ConstantKind};

const STREAM_RANDOM: u64 = 31;
const STREAM_REFINE: u64 = 32;

/// Exhaustive partition enumeration is used up to this dimension.
pub const MAX_PARTITION_DIM: usize = 10;

/// All set partitions of `0..n` as restricted growth strings.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for v in 0..=max + 1 {
            a[i] = v;
            rec(i + 1, max.max(v), a, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(1, 0, &mut a, &mut out);
    out
}

pub(crate) fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let x = next.last().unwrap().saturating_add(*v);
            next.push(x);
        }
        row = next;
    }
    row[0]
}

fn unit(n: usize, j: usize) -> Vector {
    let mut e = vec![0.0; n];
    e[j] = 1.0;
    e
}

/// Family `(z·χ_{P_i})_i` for the partition given by labels.
fn split(z: &[f64], labels: &[usize]) -> Vec<Vector> {
    let parts = labels.iter().max().map_or(0, |m| m + 1);
    (0..parts)
        .map(|k| {
            z.iter()
                .zip(labels)
                .map(|(v, l)| if *l == k { *v } else { 0.0 })
                .collect()
        })
        .collect()
}

fn closed_form(t: &LinOperator, kind: ConstantKind, budget: usize, seed: u64) -> Option<ConstantEstimate> {
    if !t.is_identity() || t.domain() != t.codomain() {
        return None;
    }
    let NormSpec::Lp(r) = t.domain().spec() else {
        return None;
    };
    let n = t.domain().dim();
    let spread = match kind {
        ConstantKind::UpperEstimate(p) => r.recip() > p.recip(),
        ConstantKind::LowerEstimate(q) => q.recip() > r.recip(),
        _ => return None,
    };
    let witness: Vec<Vector> = if spread {
        (0..n).map(|j| unit(n, j)).collect()
    } else {
        vec![unit(n, 0)]
    };
    Some(ConstantEstimate {
        value: ratio_value(t, kind, &witness),
        side: Side::Exact,
        witness,
        budget,
        seed,
    })
}

fn random_family(n: usize, kind: ConstantKind, rng: &mut Rng) -> Vec<Vector> {
    if kind.is_disjoint() {
        let parts = 1 + search::index(rng, n);
        let labels: Vec<usize> = (0..n).map(|_| search::index(rng, parts + 1)).collect();
        let mut fam: Vec<Vector> = (0..parts)
            .map(|k| {
                let s = (0.5 * search::gaussian(rng)).exp();
                labels
                    .iter()
                    .map(|l| if *l == k { s * search::gaussian(rng) } else { 0.0 })
                    .collect()
            })
            .collect();
        fam.retain(|x: &Vector| x.iter().any(|v| *v != 0.0));
        if fam.is_empty() {
            fam.push(search::gaussian_vec(rng, n));
        }
        fam
    } else {
        let len = 2 + search::index(rng, 2 * n - 1);
        let sparse = search::uniform(rng) < 0.5;
        (0..len)
            .map(|_| {
                let s = search::gaussian(rng).exp();
                let keep = search::index(rng, n);
                (0..n)
                    .map(|j| {
                        let v = s * search::gaussian(rng);
                        if sparse && j != keep && search::uniform(rng) < 0.5 {
                            0.0
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn flatten(fam: &[Vector]) -> Vec<f64> {
    fam.iter().flatten().copied().collect()
}

fn unflatten(x: &[f64], n: usize) -> Vec<Vector> {
    x.chunks(n).map(|c| c.to_vec()).collect()
}

/// Coordinate ascent over the entries of a family; disjoint kinds keep supports.
pub(crate) fn refine(t: &LinOperator, kind: ConstantKind, fam: &[Vector], rng: &mut Rng) -> (Vec<Vector>, f64) {
    let n = t.domain().dim();
    let x0 = flatten(fam);
    let mask: Option<Vec<bool>> = kind.is_disjoint().then(|| {
        let mut owner = vec![usize::MAX; n];
        for (i, x) in fam.iter().enumerate() {
            for j in 0..n {
                if x[j] != 0.0 {
                    owner[j] = i;
                }
            }
        }
        fam.iter()
            .enumerate()
            .flat_map(|(i, _)| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| owner[j] == i)
            .collect()
    });
    let cfg = AscentConfig {
        nonneg: false,
        initial_step: 0.25,
        min_step: 1e-8,
        max_evals: (300 * x0.len()).clamp(2000, 20000),
        random_dirs: 2,
    };
    let mut f = |x: &[f64]| ratio_value(t, kind, &unflatten(x, n));
    let (x, v) = search::ascend(&mut f, x0, mask.as_deref(), &cfg, rng);
    (unflatten(&x, n), v)
}

/// Best ratio found over structured families, random families and local refinement.
///
/// Always a lower bound; exact only for identities on ℓ_r with an estimate
/// kind, where every partition reduces to a power mean of part norms.
pub fn estimate_constant(t: &LinOperator, kind: ConstantKind, budget: usize, seed: u64) -> ConstantEstimate {
    let budget = budget.max(1);
    if let Some(e) = closed_form(t, kind, budget, seed) {
        return e;
    }
    let n = t.domain().dim();
    if t.is_zero() {
        return ConstantEstimate {
            value: 0.0,
            side: Side::Exact,
            witness: vec![unit(n, 0)],
            budget,
            seed,
        };
    }
    let mut pool: Vec<Vec<Vector>> = Vec::new();
    for j in 0..n {
        pool.push(vec![unit(n, j)]);
    }
    pool.push(vec![vec![1.0; n]]);
    pool.push((0..n).map(|j| unit(n, j)).collect());
    if kind.is_disjoint() && n <= MAX_PARTITION_DIM && bell(n) <= 16 * budget {
        let ones = vec![1.0; n];
        let parts = set_partitions(n);
        let values: Vec<f64> = parts
            .par_iter()
            .map(|labels| ratio_value(t, kind, &split(&ones, labels)))
            .collect();
        let mut order: Vec<usize> = (0..parts.len()).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
        for &i in order.iter().take(4) {
            pool.push(split(&ones, &parts[i]));
        }
    }
    let values: Vec<f64> = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = search::trial_rng(seed, STREAM_RANDOM, i);
            ratio_value(t, kind, &random_family(n, kind, &mut rng))
        })
        .collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    for &i in order.iter().take(3) {
        let mut rng = search::trial_rng(seed, STREAM_RANDOM, i as u64);
        pool.push(random_family(n, kind, &mut rng));
    }
    let pool_values: Vec<f64> = pool.iter().map(|f| ratio_value(t, kind, f)).collect();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&i, &j| pool_values[j].total_cmp(&pool_values[i]).then(i.cmp(&j)));
    let refined: Vec<(Vec<Vector>, f64)> = order
        .iter()
        .take(4)
        .enumerate()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(rank, &i)| {
            let mut rng = search::trial_rng(seed, STREAM_REFINE, rank as u64);
            refine(t, kind, &pool[i], &mut rng)
        })
        .collect();
    let mut best_fam = pool[order[0]].clone();
    let mut best = pool_values[order[0]];
    for (fam, v) in refined {
        if v > best {
            best = v;
            best_fam = fam;
        }
    }
    ConstantEstimate {
        value: ratio_value(t, kind, &best_fam).max(0.0),
        side: Side::Lower,
        witness: best_fam,
        budget,
        seed,
    }
}
