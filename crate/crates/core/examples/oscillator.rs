use kcosym_core::*;

fn main() -> Result<()> {
    let dims = Dimensions::new(1, 1)?;
    let none = ParamSet::new();
    let sys = HamiltonianSystem::parse("0.5*p1_1^2 + 0.5*q1^2", dims, &none)?;
    let gamma = HJSection::new(dims, vec![ScalarField::parse("sqrt(1 - q1^2)", dims, &none)?])?;
    let z = reduce(&sys, &gamma)?;
    let grid = GridSpec::uniform(1, 0.0, 0.01, 100)?;
    let psi = integrate_section(&z, &[0.0], &grid, &[0], &IntegrateOptions::default())?;
    let last = grid.node_count() - 1;
    println!("psi(1) = {:.12}, sin(1) = {:.12}", psi.value(last)[0], 1f64.sin());
    Ok(())
}
