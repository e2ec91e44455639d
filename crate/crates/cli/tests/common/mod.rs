//! Random expression generators shared by the integration tests.

#![allow(dead_code)]

use kcosym_core::{Dimensions, HamiltonianSystem, ParamSet, PotentialFamily, ScalarField};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn names(dims: Dimensions, coords: &[usize]) -> Vec<String> {
    coords.iter().map(|&c| dims.name(c).unwrap()).collect()
}

/// Sum of 1..=5 monomials of degree at most `deg` over `vars`.
pub fn polynomial(rng: &mut StdRng, vars: &[String], deg: usize) -> String {
    let terms = rng.gen_range(1..=5);
    let mut out = Vec::new();
    for _ in 0..terms {
        let c: f64 = rng.gen_range(-2.0..2.0);
        let mut t = format!("({c:?})");
        for _ in 0..rng.gen_range(0..=deg) {
            t.push('*');
            t.push_str(vars.choose(rng).unwrap());
        }
        out.push(t);
    }
    out.join(" + ")
}

pub fn field(text: &str, dims: Dimensions) -> ScalarField {
    ScalarField::parse(text, dims, &ParamSet::new()).unwrap()
}

pub fn random_dims(rng: &mut StdRng, max_k: usize, max_n: usize) -> Dimensions {
    Dimensions::new(rng.gen_range(1..=max_k), rng.gen_range(1..=max_n)).unwrap()
}

pub fn all_coords(dims: Dimensions) -> Vec<usize> {
    (0..dims.coord_count()).collect()
}

pub fn base_coords(dims: Dimensions) -> Vec<usize> {
    (0..dims.base_count()).collect()
}

pub fn random_hamiltonian(rng: &mut StdRng, dims: Dimensions) -> HamiltonianSystem {
    let vars = names(dims, &all_coords(dims));
    HamiltonianSystem::new(dims, field(&polynomial(rng, &vars, 3), dims)).unwrap()
}

pub fn random_potentials(rng: &mut StdRng, dims: Dimensions) -> PotentialFamily {
    let vars = names(dims, &base_coords(dims));
    let ws = (0..dims.k())
        .map(|_| field(&polynomial(rng, &vars, 3), dims))
        .collect();
    PotentialFamily::new(dims, ws).unwrap()
}

pub fn random_point(rng: &mut StdRng, len: usize, r: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-r..r)).collect()
}

/// A smooth random expression over `vars` that is defined everywhere.
pub fn smooth_expr(rng: &mut StdRng, vars: &[String], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            vars.choose(rng).unwrap().clone()
        } else {
            format!("({:?})", rng.gen_range(-2.0..2.0_f64))
        };
    }
    let a = smooth_expr(rng, vars, depth - 1);
    match rng.gen_range(0..11) {
        0 => format!("({a} + {})", smooth_expr(rng, vars, depth - 1)),
        1 => format!("({a} - {})", smooth_expr(rng, vars, depth - 1)),
        2 => format!("({a} * {})", smooth_expr(rng, vars, depth - 1)),
        3 => format!("({a} / (2 + sin({})))", smooth_expr(rng, vars, depth - 1)),
        4 => format!("sin({a})"),
        5 => format!("cos({a})"),
        6 => format!("exp(0.3*sin({a}))"),
        7 => format!("log(1.5 + cos({a}))"),
        8 => format!("sqrt(1 + ({a})^2)"),
        9 => format!("asin(0.5*sin({a}))"),
        _ => format!("({a})^{}", rng.gen_range(0..4)),
    }
}

/// Canonical solution plus random free momentum components: off-diagonal
/// `(X_a)^b_i` are arbitrary and the diagonal is rebalanced on `a = 0`.
pub fn random_solution(
    r: &mut StdRng,
    sys: &HamiltonianSystem,
) -> kcosym_core::KVectorFieldLocal {
    let dims = sys.dims();
    let vars = names(dims, &all_coords(dims));
    let mut x = kcosym_core::canonical_solution(sys);
    for i in 0..dims.n() {
        let mut diag0 = x.momentum(0, 0, i).clone();
        for a in 0..dims.k() {
            for b in 0..dims.k() {
                if a == 0 && b == 0 {
                    continue;
                }
                let f = field(&polynomial(r, &vars, 2), dims);
                if a == b {
                    diag0 = diag0.sub(&f);
                }
                x.set_momentum(a, b, i, f);
            }
        }
        x.set_momentum(0, 0, i, diag0);
    }
    x
}
