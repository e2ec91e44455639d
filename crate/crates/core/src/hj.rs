//! Hamilton–Jacobi sections and their residuals.
//!
//! A section `γ(x, q) = (x, q, γ^α_i(x, q))` of `R^k × (T¹_k)*Q → R^k × Q`
//! is admissible when `∂γ^α_i/∂q^j = ∂γ^α_j/∂q^i`, and solves the
//! Hamilton–Jacobi equation when, for every `i`,
//!
//! ```text
//! ∂H/∂q^i∘γ + (∂H/∂p^α_j∘γ) ∂γ^α_j/∂q^i + Σ_α ∂γ^α_i/∂x^α = 0.
//! ```
//!
//! Its reduction `Z^γ_α = ∂/∂x^α + (∂H/∂p^α_i∘γ) ∂/∂q^i` lives on `R^k × Q`;
//! integral sections of `Z^γ` lifted by `γ` solve the HDW equations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{HamiltonianSystem, ScalarField};
use crate::hdw::KVectorFieldLocal;
use crate::model::{BasePoint, Dimensions};

fn reject_momenta(dims: Dimensions, fields: &[ScalarField], what: &'static str) -> Result<()> {
    for f in fields {
        if let Some(&c) = f.references().iter().find(|&&c| c >= dims.base_count()) {
            return Err(match dims.name(c) {
                Some(name) if dims.is_momentum(c) => Error::MomentumDependence { what, coord: name },
                _ => Error::IndexOutOfRange {
                    what,
                    index: c,
                    len: dims.base_count(),
                },
            });
        }
    }
    Ok(())
}

fn expect_len(found: usize, expected: usize, what: &'static str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what,
            expected,
            found,
        })
    }
}

fn check_point(dims: Dimensions, pt: &BasePoint) -> Result<()> {
    if pt.dims() == dims {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what: "base point dimensions",
            expected: dims.base_count(),
            found: pt.dims().base_count(),
        })
    }
}

/// The momenta `γ^α_i(x, q)` of a section, stored `α`-outer.
#[derive(Debug, Clone)]
pub struct HJSection {
    dims: Dimensions,
    components: Vec<ScalarField>,
}

impl HJSection {
    pub fn new(dims: Dimensions, components: Vec<ScalarField>) -> Result<Self> {
        expect_len(components.len(), dims.k() * dims.n(), "section components")?;
        reject_momenta(dims, &components, "section")?;
        Ok(Self { dims, components })
    }

    pub fn zero(dims: Dimensions) -> Self {
        Self {
            dims,
            components: alloc::vec![ScalarField::zero(); dims.k() * dims.n()],
        }
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    /// `γ^α_i`.
    pub fn component(&self, alpha: usize, i: usize) -> &ScalarField {
        &self.components[alpha * self.dims.n() + i]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    /// `γ(x, q)` as a flat phase-space environment.
    pub fn phase_env(&self, pt: &BasePoint) -> Result<Vec<f64>> {
        check_point(self.dims, pt)?;
        let mut env = pt.to_env();
        self.fill_momenta(&mut env)?;
        Ok(env)
    }

    /// Overwrites the momentum slots of `env` with `γ` evaluated at its `(x, q)`.
    pub fn fill_momenta(&self, env: &mut [f64]) -> Result<()> {
        let base = self.dims.base_count();
        for (m, g) in self.components.iter().enumerate() {
            env[base + m] = g.value(env)?;
        }
        Ok(())
    }

    /// Largest `|closedness_residual|` entry at `pt`.
    pub fn max_closedness(&self, pt: &BasePoint) -> Result<f64> {
        Ok(closedness_residual(self, pt)?
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs())))
    }
}

/// Potentials `W^α(x, q)` with `γ^α_i = ∂W^α/∂q^i`.
#[derive(Debug, Clone)]
pub struct PotentialFamily {
    dims: Dimensions,
    potentials: Vec<ScalarField>,
}

impl PotentialFamily {
    pub fn new(dims: Dimensions, potentials: Vec<ScalarField>) -> Result<Self> {
        expect_len(potentials.len(), dims.k(), "potentials")?;
        reject_momenta(dims, &potentials, "potential")?;
        Ok(Self { dims, potentials })
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn potential(&self, alpha: usize) -> &ScalarField {
        &self.potentials[alpha]
    }
}

/// `Z^γ_α = ∂/∂x^α + f^i_α ∂/∂q^i`, components stored `α`-outer.
#[derive(Debug, Clone)]
pub struct ReducedKVectorField {
    dims: Dimensions,
    components: Vec<ScalarField>,
}

impl ReducedKVectorField {
    pub fn new(dims: Dimensions, components: Vec<ScalarField>) -> Result<Self> {
        expect_len(components.len(), dims.k() * dims.n(), "reduced components")?;
        reject_momenta(dims, &components, "reduced field")?;
        Ok(Self { dims, components })
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    /// `f^i_α`.
    pub fn component(&self, alpha: usize, i: usize) -> &ScalarField {
        &self.components[alpha * self.dims.n() + i]
    }

    /// Writes `f^i_α(env)` for `i in 0..n` into `out`.
    pub fn eval_direction(&self, alpha: usize, env: &[f64], out: &mut [f64]) -> Result<(), crate::error::EvalError> {
        let n = self.dims.n();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = self.components[alpha * n + i].value(env)?;
        }
        Ok(())
    }
}

/// Entries `(α, i, j) ↦ ∂γ^α_i/∂q^j - ∂γ^α_j/∂q^i`, flattened `α`-outer.
pub fn closedness_residual(gamma: &HJSection, pt: &BasePoint) -> Result<Vec<f64>> {
    let dims = gamma.dims();
    check_point(dims, pt)?;
    let (k, n) = (dims.k(), dims.n());
    let env = pt.to_env();
    let mut jac = Vec::with_capacity(k * n * n);
    for a in 0..k {
        for i in 0..n {
            for j in 0..n {
                jac.push(gamma.component(a, i).partial(&env, dims.q(j))?);
            }
        }
    }
    let at = |a: usize, i: usize, j: usize| jac[(a * n + i) * n + j];
    let mut out = Vec::with_capacity(k * n * n);
    for a in 0..k {
        for i in 0..n {
            for j in 0..n {
                out.push(at(a, i, j) - at(a, j, i));
            }
        }
    }
    Ok(out)
}

/// `γ^α_i = ∂W^α/∂q^i`.
pub fn section_from_potentials(w: &PotentialFamily) -> HJSection {
    let dims = w.dims();
    let mut components = Vec::with_capacity(dims.k() * dims.n());
    for a in 0..dims.k() {
        for i in 0..dims.n() {
            components.push(w.potential(a).partial_field(dims.q(i)));
        }
    }
    HJSection { dims, components }
}

fn check_dims(a: Dimensions, b: Dimensions) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what: "dimensions",
            expected: a.coord_count(),
            found: b.coord_count(),
        })
    }
}

/// The `n` components of the Hamilton–Jacobi equation at `pt`.
pub fn hj_residual(gamma: &HJSection, sys: &HamiltonianSystem, pt: &BasePoint) -> Result<Vec<f64>> {
    let dims = sys.dims();
    check_dims(dims, gamma.dims())?;
    let (k, n) = (dims.k(), dims.n());
    let base = pt.to_env();
    let phase = gamma.phase_env(pt)?;
    let h = sys.hamiltonian();
    let mut h_p = Vec::with_capacity(k * n);
    for a in 0..k {
        for j in 0..n {
            h_p.push(h.partial(&phase, dims.p(a, j))?);
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = h.partial(&phase, dims.q(i))?;
        for a in 0..k {
            let g_ai = gamma.component(a, i);
            r += g_ai.partial(&base, dims.x(a))?;
            for j in 0..n {
                let hp = h_p[a * n + j];
                if hp != 0.0 {
                    r += hp * gamma.component(a, j).partial(&base, dims.q(i))?;
                }
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// `Σ_α ∂W^α/∂x^α + H(x, q, ∂W/∂q)` at `pt`.
pub fn classical_hj_residual(
    w: &PotentialFamily,
    sys: &HamiltonianSystem,
    pt: &BasePoint,
) -> Result<f64> {
    let dims = sys.dims();
    check_dims(dims, w.dims())?;
    check_point(dims, pt)?;
    let base = pt.to_env();
    let mut phase = base.clone();
    let mut r = 0.0;
    for a in 0..dims.k() {
        let wa = w.potential(a);
        r += wa.partial(&base, dims.x(a))?;
        for i in 0..dims.n() {
            phase[dims.p(a, i)] = wa.partial(&base, dims.q(i))?;
        }
    }
    Ok(r + sys.hamiltonian().value(&phase)?)
}

/// Spread of [`classical_hj_residual`] over field samples at fixed `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSpread {
    pub min: f64,
    pub max: f64,
}

impl QSpread {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// Evaluates the classical residual at `(x, q)` for every `q` in
/// `q_samples`. A solution family may leave a residual `K(x)` but it must
/// not vary with `q`.
pub fn q_independence_check(
    w: &PotentialFamily,
    sys: &HamiltonianSystem,
    x: &[f64],
    q_samples: &[Vec<f64>],
) -> Result<QSpread> {
    if q_samples.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: q_samples.len(),
        });
    }
    let dims = sys.dims();
    let mut spread = QSpread {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for q in q_samples {
        let pt = BasePoint::new(dims, x.to_vec(), q.clone())?;
        let r = classical_hj_residual(w, sys, &pt)?;
        spread.min = spread.min.min(r);
        spread.max = spread.max.max(r);
    }
    Ok(spread)
}

/// `f^i_α(x, q) = ∂H/∂p^α_i (x, q, γ(x, q))`.
pub fn reduce(sys: &HamiltonianSystem, gamma: &HJSection) -> Result<ReducedKVectorField> {
    let dims = sys.dims();
    check_dims(dims, gamma.dims())?;
    let (k, n) = (dims.k(), dims.n());
    let subs: Vec<(usize, ScalarField)> = (0..k)
        .flat_map(|a| (0..n).map(move |i| (a, i)))
        .map(|(a, i)| (dims.p(a, i), gamma.component(a, i).clone()))
        .collect();
    let h = sys.hamiltonian();
    let components = (0..k)
        .flat_map(|a| (0..n).map(move |i| (a, i)))
        .map(|(a, i)| h.partial_field(dims.p(a, i)).compose(subs.clone()))
        .collect();
    Ok(ReducedKVectorField { dims, components })
}

/// `Σ_α ((X_α)^α_j∘γ - ∂γ^α_j/∂x^α - ((X_α)^i∘γ) ∂γ^α_j/∂q^i)` for each `j`.
/// Vanishes exactly when `X|_{Im γ} - T¹_kγ(Z^γ)` lies in the kernel of
/// [`crate::hdw::kernel_check`].
pub fn kernel_difference_residual(
    x: &KVectorFieldLocal,
    gamma: &HJSection,
    pt: &BasePoint,
) -> Result<Vec<f64>> {
    let dims = gamma.dims();
    check_dims(dims, x.dims())?;
    let (k, n) = (dims.k(), dims.n());
    let base = pt.to_env();
    let phase = gamma.phase_env(pt)?;
    let mut x_field = Vec::with_capacity(k * n);
    for a in 0..k {
        for i in 0..n {
            x_field.push(x.field(a, i).value(&phase)?);
        }
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = 0.0;
        for a in 0..k {
            let g_aj = gamma.component(a, j);
            r += x.momentum(a, a, j).value(&phase)?;
            r -= g_aj.partial(&base, dims.x(a))?;
            for i in 0..n {
                r -= x_field[a * n + i] * g_aj.partial(&base, dims.q(i))?;
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// Cross-differentiation obstruction of `∂ψ^i/∂x^α = f^i_α(x, ψ)`:
/// entry `(α, β, i)` is the bracket component `[Z_α, Z_β]^i = Z_α(f^i_β) - Z_β(f^i_α)`,
/// flattened `α`-outer.
pub fn compatibility_residual(z: &ReducedKVectorField, pt: &BasePoint) -> Result<Vec<f64>> {
    let dims = z.dims();
    check_point(dims, pt)?;
    let (k, n) = (dims.k(), dims.n());
    let env = pt.to_env();
    let mut f = Vec::with_capacity(k * n);
    for a in 0..k {
        for i in 0..n {
            f.push(z.component(a, i).value(&env)?);
        }
    }
    // Z_β(f^i_α) for all α, β, i.
    let mut lie = alloc::vec![0.0; k * k * n];
    for a in 0..k {
        for i in 0..n {
            let fa = z.component(a, i);
            let mut dq = Vec::with_capacity(n);
            for j in 0..n {
                dq.push(fa.partial(&env, dims.q(j))?);
            }
            for b in 0..k {
                let mut v = fa.partial(&env, dims.x(b))?;
                for j in 0..n {
                    v += f[b * n + j] * dq[j];
                }
                lie[(a * k + b) * n + i] = v;
            }
        }
    }
    let mut out = Vec::with_capacity(k * k * n);
    for a in 0..k {
        for b in 0..k {
            for i in 0..n {
                out.push(lie[(b * k + a) * n + i] - lie[(a * k + b) * n + i]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParamSet;
    use alloc::vec;
    use alloc::vec::Vec;
    use alloc::string::String;

    const SQRT2: f64 = core::f64::consts::SQRT_2;

    fn scalar_field_sys(dims: Dimensions) -> HamiltonianSystem {
        let params = ParamSet::new().with("m", 1.0).unwrap();
        HamiltonianSystem::parse(
            "0.5*(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2) - (0.5*m^2*q1^2 - 0.5*m^2*q1^2)",
            dims,
            &params,
        )
        .unwrap()
    }

    fn scalar_field_section(c: [f64; 4]) -> HJSection {
        let dims = Dimensions::new(4, 1).unwrap();
        let params = ParamSet::new()
            .with("C1", c[0]).unwrap()
            .with("C2", c[1]).unwrap()
            .with("C3", c[2]).unwrap()
            .with("C4", c[3]).unwrap();
        let comps = (1..=4)
            .map(|a| ScalarField::parse(&alloc::format!("0.5*C{a}*q1^2"), dims, &params).unwrap())
            .collect();
        HJSection::new(dims, comps).unwrap()
    }

    fn potentials(dims: Dimensions, texts: &[&str], params: &ParamSet) -> PotentialFamily {
        let ws = texts
            .iter()
            .map(|t| ScalarField::parse(t, dims, params).unwrap())
            .collect();
        PotentialFamily::new(dims, ws).unwrap()
    }

    fn bp(dims: Dimensions, x: &[f64], q: &[f64]) -> BasePoint {
        BasePoint::new(dims, x.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn section_rejects_momenta() {
        let dims = Dimensions::new(1, 1).unwrap();
        let g = ScalarField::parse("p1_1", dims, &ParamSet::new()).unwrap();
        let e = HJSection::new(dims, vec![g]).unwrap_err();
        assert!(matches!(e, Error::MomentumDependence { .. }));
    }

    #[test]
    fn closedness_examples() {
        let d11 = Dimensions::new(1, 1).unwrap();
        let g = HJSection::new(
            d11,
            vec![ScalarField::parse("q1^2*x1", d11, &ParamSet::new()).unwrap()],
        )
        .unwrap();
        assert_eq!(closedness_residual(&g, &bp(d11, &[0.3], &[2.0])).unwrap(), [0.0]);

        let d12 = Dimensions::new(1, 2).unwrap();
        let p = ParamSet::new();
        let g = HJSection::new(
            d12,
            vec![
                ScalarField::parse("q2", d12, &p).unwrap(),
                ScalarField::parse("0", d12, &p).unwrap(),
            ],
        )
        .unwrap();
        let r = closedness_residual(&g, &bp(d12, &[0.0], &[0.5, 0.7])).unwrap();
        // (α, i, j) = (1, 1, 2) is flat index 1.
        assert_eq!(r, [0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn potentials_give_closed_sections() {
        let dims = Dimensions::new(2, 2).unwrap();
        let w = potentials(
            dims,
            &["q1^2*q2*x1 + sin(q2)*exp(q1)", "q1*q2^3 - x2*x1*q1 + log(2 + q2^2)"],
            &ParamSet::new(),
        );
        let g = section_from_potentials(&w);
        let pt = bp(dims, &[0.4, -0.2], &[0.9, -1.3]);
        assert!(g.max_closedness(&pt).unwrap() <= 1e-12);
    }

    #[test]
    fn potential_section_examples() {
        let dims = Dimensions::new(4, 1).unwrap();
        let params = ParamSet::new()
            .with("C1", SQRT2).unwrap()
            .with("C2", 1.0).unwrap()
            .with("C3", 1.0).unwrap()
            .with("C4", 0.0).unwrap();
        let w = potentials(dims, &["C1/6*q1^3", "C2/6*q1^3", "C3/6*q1^3", "C4/6*q1^3"], &params);
        let g = section_from_potentials(&w);
        let pt = bp(dims, &[0.1, 0.2, 0.3, 0.4], &[1.5]);
        let env = pt.to_env();
        let c = [SQRT2, 1.0, 1.0, 0.0];
        for a in 0..4 {
            let v = g.component(a, 0).value(&env).unwrap();
            assert!((v - 0.5 * c[a] * 1.5 * 1.5).abs() < 1e-15);
        }

        let d11 = Dimensions::new(1, 1).unwrap();
        let zero = section_from_potentials(&potentials(d11, &["0"], &ParamSet::new()));
        assert_eq!(zero.component(0, 0).value(&[0.2, 0.3, 0.0]).unwrap(), 0.0);
        let g = section_from_potentials(&potentials(d11, &["q1*x1"], &ParamSet::new()));
        assert_eq!(g.component(0, 0).value(&[0.25, 3.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn scalar_field_hj_identity() {
        let dims = Dimensions::new(4, 1).unwrap();
        let sys = scalar_field_sys(dims);
        let good = scalar_field_section([SQRT2, 1.0, 1.0, 0.0]);
        for q in [-3.0, -0.5, 0.0, 1.0, 2.5] {
            let r = hj_residual(&good, &sys, &bp(dims, &[0.3, -0.2, 0.9, 0.1], &[q])).unwrap();
            assert!(r[0].abs() <= 1e-12, "{r:?}");
        }
        let bad = scalar_field_section([1.0, 0.0, 0.0, 0.0]);
        let r = hj_residual(&bad, &sys, &bp(dims, &[0.0; 4], &[2.0])).unwrap();
        assert!((r[0] + 4.0).abs() <= 1e-12);
    }

    #[test]
    fn trivial_system() {
        let dims = Dimensions::new(2, 1).unwrap();
        let sys = HamiltonianSystem::parse("0", dims, &ParamSet::new()).unwrap();
        let g = HJSection::zero(dims);
        let pt = bp(dims, &[0.1, 0.2], &[0.3]);
        assert_eq!(hj_residual(&g, &sys, &pt).unwrap(), [0.0]);
        let z = reduce(&sys, &g).unwrap();
        assert_eq!(z.component(1, 0).value(&pt.to_env()).unwrap(), 0.0);
        assert_eq!(compatibility_residual(&z, &pt).unwrap(), [0.0; 4]);
        let x = crate::hdw::canonical_solution(&sys);
        assert_eq!(kernel_difference_residual(&x, &g, &pt).unwrap(), [0.0]);
        let w = potentials(dims, &["0", "0"], &ParamSet::new());
        assert_eq!(classical_hj_residual(&w, &sys, &pt).unwrap(), 0.0);
    }

    #[test]
    fn classical_residual_scalar_field() {
        let dims = Dimensions::new(4, 1).unwrap();
        let sys = scalar_field_sys(dims);
        let params = ParamSet::new()
            .with("C1", SQRT2).unwrap()
            .with("C2", 1.0).unwrap()
            .with("C3", 1.0).unwrap()
            .with("C4", 0.0).unwrap();
        let w = potentials(dims, &["C1/6*q1^3", "C2/6*q1^3", "C3/6*q1^3", "C4/6*q1^3"], &params);
        let samples: Vec<Vec<f64>> = [-2.0, -1.0, 0.5, 3.0].iter().map(|q| vec![*q]).collect();
        let s = q_independence_check(&w, &sys, &[0.1, 0.2, 0.3, 0.4], &samples).unwrap();
        assert!(s.spread() <= 1e-12 && s.max.abs() <= 1e-12);

        // h(x) = x1^2 shifts the residual by 2 x1 and nothing else.
        let shifted = potentials(
            dims,
            &["C1/6*q1^3 + x1^2", "C2/6*q1^3 + x1^2", "C3/6*q1^3 + x1^2", "C4/6*q1^3 + x1^2"],
            &params,
        );
        let s = q_independence_check(&shifted, &sys, &[0.35, 0.2, 0.3, 0.4], &samples).unwrap();
        assert!(s.spread() <= 1e-12);
        assert!((s.min - 0.7).abs() <= 1e-12);
        // ... and leaves the section unchanged.
        let pt = bp(dims, &[0.35, 0.2, 0.3, 0.4], &[1.1]);
        let env = pt.to_env();
        let (g0, g1) = (section_from_potentials(&w), section_from_potentials(&shifted));
        for a in 0..4 {
            assert_eq!(
                g0.component(a, 0).value(&env).unwrap(),
                g1.component(a, 0).value(&env).unwrap()
            );
        }
    }

    #[test]
    fn q_dependent_residual_detected() {
        let dims = Dimensions::new(1, 1).unwrap();
        let sys = HamiltonianSystem::parse("0", dims, &ParamSet::new()).unwrap();
        let w = potentials(dims, &["q1*x1"], &ParamSet::new());
        let samples = vec![vec![0.0], vec![1.0], vec![2.0]];
        let s = q_independence_check(&w, &sys, &[0.5], &samples).unwrap();
        assert_eq!(s.spread(), 2.0);
        assert!(q_independence_check(&w, &sys, &[0.5], &samples[..1]).is_err());
    }

    #[test]
    fn oscillator_classical_residual() {
        let dims = Dimensions::new(1, 1).unwrap();
        let params = ParamSet::new().with("E", 0.5).unwrap();
        let sys = HamiltonianSystem::parse("0.5*(p1_1^2 + q1^2)", dims, &params).unwrap();
        let w = potentials(
            dims,
            &["-E*x1 + 0.5*(q1*sqrt(2*E - q1^2) + 2*E*asin(q1/sqrt(2*E)))"],
            &params,
        );
        for q in [-0.9, -0.3, 0.0, 0.6, 0.95] {
            let r = classical_hj_residual(&w, &sys, &bp(dims, &[0.7], &[q])).unwrap();
            assert!(r.abs() <= 1e-14, "{q}: {r}");
        }
        let g = section_from_potentials(&w);
        let z = reduce(&sys, &g).unwrap();
        let f = z.component(0, 0).value(&[0.0, 0.6, 0.0]).unwrap();
        assert!((f - 0.8).abs() <= 1e-15);
    }

    #[test]
    fn scalar_field_reduction() {
        let dims = Dimensions::new(4, 1).unwrap();
        let c = [1.3, 0.5, -0.7, 2.0];
        let z = reduce(&scalar_field_sys(dims), &scalar_field_section(c)).unwrap();
        let q = 1.7;
        let env = bp(dims, &[0.1, 0.2, 0.3, 0.4], &[q]).to_env();
        let sign = [-1.0, 1.0, 1.0, 1.0];
        for a in 0..4 {
            let want = sign[a] * 0.5 * c[a] * q * q;
            assert!((z.component(a, 0).value(&env).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn compatibility_examples() {
        let dims = Dimensions::new(4, 1).unwrap();
        let z = reduce(
            &scalar_field_sys(dims),
            &scalar_field_section([SQRT2, 1.0, 1.0, 0.0]),
        )
        .unwrap();
        let r = compatibility_residual(&z, &bp(dims, &[0.1, 0.2, 0.3, 0.4], &[1.7])).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-13), "{r:?}");

        let d21 = Dimensions::new(2, 1).unwrap();
        let p = ParamSet::new();
        let z = ReducedKVectorField::new(
            d21,
            vec![
                ScalarField::parse("q1", d21, &p).unwrap(),
                ScalarField::parse("x1", d21, &p).unwrap(),
            ],
        )
        .unwrap();
        let x1 = 0.3;
        let r = compatibility_residual(&z, &bp(d21, &[x1, 0.9], &[2.0])).unwrap();
        // (α, β) = (1, 2) -> index 1; antisymmetric partner at index 2.
        assert!((r[1] - (1.0 - x1)).abs() < 1e-15);
        assert_eq!(r[2], -r[1]);
        assert_eq!((r[0], r[3]), (0.0, 0.0));
    }

    #[test]
    fn theorem_identity_on_a_fixed_case() {
        let dims = Dimensions::new(2, 2).unwrap();
        let sys = HamiltonianSystem::parse(
            "p1_1^2*q2 + x1*p2_2*p1_2 - q1^3 + p2_1*sin(q2)",
            dims,
            &ParamSet::new(),
        )
        .unwrap();
        let w = potentials(dims, &["q1^2*q2 + x2*q1", "q2^3*x1 - q1*q2"], &ParamSet::new());
        let g = section_from_potentials(&w);
        let x = crate::hdw::canonical_solution(&sys);
        let pt = bp(dims, &[0.3, -0.6], &[0.8, 1.1]);
        let kd = kernel_difference_residual(&x, &g, &pt).unwrap();
        let hj = hj_residual(&g, &sys, &pt).unwrap();
        for j in 0..2 {
            assert!((kd[j] + hj[j]).abs() <= 1e-12, "{kd:?} vs {hj:?}");
        }
    }

    #[test]
    fn fields_are_send_sync() {
        fn check<T: Send + Sync>() {}
        check::<HJSection>();
        check::<ReducedKVectorField>();
        check::<HamiltonianSystem>();
        let _: Option<String> = None;
    }
}
