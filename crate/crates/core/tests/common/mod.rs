//! Test-side oracles, written without the library's bracket machinery.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;
use plucker_poisson::PluckerVector;

/// `π_ab` with the antisymmetric convention, from the raw component list.
pub fn pi_at(p: &PluckerVector, a: usize, b: usize) -> f64 {
    let n = p.dim();
    if a == b {
        return 0.0;
    }
    let (i, j, s) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    // lexicographic position of (i, j)
    let idx = i * n - i * (i + 1) / 2 + (j - i - 1);
    s * p.components()[idx]
}

/// `P_ab(x) = π_ab Π_{m≠a,b} x_m`, entry by entry.
pub fn structure(p: &PluckerVector, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            return 0.0;
        }
        let prod: f64 = (0..n).filter(|&m| m != a && m != b).map(|m| x[m]).product();
        pi_at(p, a, b) * prod
    })
}

/// `R_ijkl = p_ij p_kl − p_ik p_jl + p_jk p_il` for sorted indices.
pub fn relation(p: &PluckerVector, q: [usize; 4]) -> f64 {
    let mut s = q;
    s.sort_unstable();
    let [i, j, k, l] = s;
    pi_at(p, i, j) * pi_at(p, k, l) - pi_at(p, i, k) * pi_at(p, j, l) + pi_at(p, j, k) * pi_at(p, i, l)
}

/// Sparse polynomial: exponent vector to coefficient.
pub type Poly = BTreeMap<Vec<u32>, f64>;

fn add_term(p: &mut Poly, e: Vec<u32>, c: f64) {
    *p.entry(e).or_insert(0.0) += c;
}

pub fn coordinate_poly(n: usize, i: usize) -> Poly {
    let mut e = vec![0; n];
    e[i] = 1;
    Poly::from([(e, 1.0)])
}

fn derivative(p: &Poly, l: usize) -> Poly {
    let mut out = Poly::new();
    for (e, &c) in p {
        if e[l] > 0 {
            let mut d = e.clone();
            d[l] -= 1;
            add_term(&mut out, d, c * e[l] as f64);
        }
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            add_term(&mut out, ea.iter().zip(eb).map(|(u, v)| u + v).collect(), ca * cb);
        }
    }
    out
}

/// `{x_a, x_b}` as a polynomial.
fn coordinate_bracket(p: &PluckerVector, a: usize, b: usize) -> Poly {
    let n = p.dim();
    let mut e = vec![1; n];
    e[a] = 0;
    e[b] = 0;
    Poly::from([(e, pi_at(p, a, b))])
}

/// `{f, g} = Σ_ab ∂_a f · {x_a, x_b} · ∂_b g`, expanded symbolically.
pub fn poly_bracket(p: &PluckerVector, f: &Poly, g: &Poly) -> Poly {
    let n = p.dim();
    let mut out = Poly::new();
    for a in 0..n {
        let fa = derivative(f, a);
        if fa.is_empty() {
            continue;
        }
        for b in 0..n {
            if a == b {
                continue;
            }
            let gb = derivative(g, b);
            if gb.is_empty() {
                continue;
            }
            for (e, c) in mul(&mul(&fa, &coordinate_bracket(p, a, b)), &gb) {
                add_term(&mut out, e, c);
            }
        }
    }
    out
}

pub fn poly_eval(p: &Poly, x: &[f64]) -> f64 {
    p.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product::<f64>()).sum()
}

/// Brute-force jacobiator `{x_i,{x_j,x_k}} + cyclic` evaluated at `x`.
pub fn nested_jacobiator(p: &PluckerVector, [i, j, k]: [usize; 3], x: &[f64]) -> f64 {
    let n = p.dim();
    let c = |m| coordinate_poly(n, m);
    let term = |a, b, d| poly_eval(&poly_bracket(p, &c(a), &poly_bracket(p, &c(b), &c(d))), x);
    term(i, j, k) + term(j, k, i) + term(k, i, j)
}

/// Central-difference Jacobian; exact up to rounding for maps of degree ≤ 2.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let m = f(x).len();
    let mut j = DMatrix::zeros(m, x.len());
    for c in 0..x.len() {
        let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
        xp[c] += h;
        xm[c] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for r in 0..m {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

/// One verdict line on stderr, bypassing the test harness capture.
pub fn report(criterion: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "criterion {criterion:>2}: {verdict}  {detail}");
}
