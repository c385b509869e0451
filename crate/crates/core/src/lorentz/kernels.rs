//! Lorentz norm formulas on nonnegative values over weighted atoms.

/// Subset enumeration is used up to this many atoms.
pub const MAX_ENUM_DIM: usize = 20;

fn order_desc(a: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| a[j].total_cmp(&a[i]).then(i.cmp(&j)));
    idx
}

pub(crate) fn prefix_value(a: &[f64], w: &[f64], p: f64, r: f64) -> f64 {
    best_prefix(a, w, &order_desc(a), p, r)
}

fn best_prefix(a: &[f64], w: &[f64], order: &[usize], p: f64, r: f64) -> f64 {
    let e = 1.0 / p - 1.0 / r;
    let (mut s, mut m, mut best) = (0.0, 0.0, 0.0f64);
    for &i in order {
        if a[i] == 0.0 {
            break;
        }
        s += w[i] * a[i].powf(r);
        m += w[i];
        best = best.max(m.powf(e) * s.powf(1.0 / r));
    }
    best
}

/// `sup_A μ(A)^{1/p−1/r} (Σ_A w_i a_i^r)^{1/r}` and whether the value is exact.
///
/// Exact through prefixes of the decreasing order for uniform weights and
/// through subset enumeration up to [`MAX_ENUM_DIM`] atoms; otherwise the
/// prefix value is returned as a lower bound.
pub fn weak_norm_r(a: &[f64], w: &[f64], p: f64, r: f64) -> (f64, bool) {
    let n = a.len();
    let order = order_desc(a);
    let prefix = best_prefix(a, w, &order, p, r);
    if w.iter().all(|v| *v == w[0]) {
        return (prefix, true);
    }
    if n > MAX_ENUM_DIM {
        return (prefix, false);
    }
    (enumerate_subsets(a, w, p, r), true)
}

pub(crate) fn enumerate_subsets(a: &[f64], w: &[f64], p: f64, r: f64) -> f64 {
    let n = a.len();
    let e = 1.0 / p - 1.0 / r;
    let ar: Vec<f64> = a.iter().zip(w).map(|(a, w)| w * a.powf(r)).collect();
    let size = 1usize << n;
    let mut sw = vec![0.0; size];
    let mut sa = vec![0.0; size];
    let mut best = 0.0f64;
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        sw[mask] = sw[rest] + w[low];
        sa[mask] = sa[rest] + ar[low];
        if sa[mask] > 0.0 {
            best = best.max(sw[mask].powf(e) * sa[mask].powf(1.0 / r));
        }
    }
    best
}

/// `q Σ_k v_k (T_k^{1/q} − T_{k−1}^{1/q})` over the decreasing order.
pub fn norm_q1(a: &[f64], w: &[f64], q: f64) -> f64 {
    let order = order_desc(a);
    let (mut t, mut prev, mut sum) = (0.0, 0.0, 0.0);
    for &i in &order {
        if a[i] == 0.0 {
            break;
        }
        t += w[i];
        let cur = f64::powf(t, 1.0 / q);
        sum += a[i] * (cur - prev);
        prev = cur;
    }
    q * sum
}

/// Dual norm of the `[1]`-norm of weak-L_p, by the greedy rule over the
/// polymatroid `{y ≥ 0 : Σ_A y_i ≤ μ(A)^{1/p*}}`.
pub fn weak_r1_dual(b: &[f64], w: &[f64], p: f64) -> f64 {
    let g: Vec<f64> = b.iter().zip(w).map(|(b, w)| b / w).collect();
    let order = order_desc(&g);
    let e = 1.0 - 1.0 / p;
    let (mut t, mut prev, mut sum) = (0.0, 0.0, 0.0);
    for &i in &order {
        if g[i] == 0.0 {
            break;
        }
        t += w[i];
        let cur = f64::powf(t, e);
        sum += g[i] * (cur - prev);
        prev = cur;
    }
    sum
}
