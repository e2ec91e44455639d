//! Builtin Hamiltonians and ready-to-run example problems.

use kcosym_core::Dimensions;

use crate::CliError;

const SCALAR_FIELD_H: &str = "0.5*(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)";
const KLEIN_GORDON_H: &str = "0.5*(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2) - 0.5*m^2*q1^2";

/// Hamiltonians addressable as `hamiltonian = "builtin:<name>"`.
pub const HAMILTONIANS: &[(&str, &str)] = &[
    ("scalar-field", SCALAR_FIELD_H),
    ("klein-gordon", KLEIN_GORDON_H),
    ("oscillator", "0.5*(p1_1^2 + q1^2)"),
    ("free", "0.5*p1_1^2"),
    ("zero", "0"),
];

/// Expression text of a builtin Hamiltonian, checked against `dims`.
pub fn builtin_hamiltonian(name: &str, dims: Dimensions) -> Result<&'static str, String> {
    let text = HAMILTONIANS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let known: Vec<_> = HAMILTONIANS.iter().map(|(n, _)| *n).collect();
            format!("unknown builtin Hamiltonian `{name}` (known: {})", known.join(", "))
        })?;
    let need = match name {
        "scalar-field" | "klein-gordon" => Some((4, 1)),
        "oscillator" | "free" => Some((1, 1)),
        _ => None,
    };
    if let Some((k, n)) = need {
        if (dims.k(), dims.n()) != (k, n) {
            return Err(format!("builtin Hamiltonian `{name}` needs k = {k}, n = {n}"));
        }
    }
    Ok(text)
}

/// A registry entry: name, one-line summary, problem text generator.
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    render: fn() -> Result<String, CliError>,
}

impl Example {
    /// The problem file, after checking the entry's constants.
    pub fn render(&self) -> Result<String, CliError> {
        (self.render)()
    }
}

pub const EXAMPLES: &[Example] = &[
    Example {
        name: "scalar-field",
        summary: "massless scalar field, quadratic section, C = (1, 1, 0, 0)",
        render: || scalar_field("scalar-field", [1.0, 1.0, 0.0, 0.0], true, SCALAR_GRID),
    },
    Example {
        name: "scalar-field-sqrt2",
        summary: "massless scalar field, quadratic section, C = (sqrt 2, 1, 1, 0)",
        render: || {
            scalar_field(
                "scalar-field-sqrt2",
                [std::f64::consts::SQRT_2, 1.0, 1.0, 0.0],
                true,
                SQRT2_GRID,
            )
        },
    },
    Example {
        name: "scalar-field-bad",
        summary: "scalar field with C = (1, 0, 0, 0); fails the Hamilton-Jacobi check",
        render: || scalar_field("scalar-field-bad", [1.0, 0.0, 0.0, 0.0], false, SCALAR_GRID),
    },
    Example {
        name: "scalar-field-potentials",
        summary: "scalar field section given by potentials W = C/6 q^3",
        render: scalar_field_potentials,
    },
    Example {
        name: "scalar-field-from-phi",
        summary: "section built from a plane-wave solution phi, F = m^2 q^2 / 2",
        render: || from_phi(false),
    },
    Example {
        name: "scalar-field-from-phi-kg",
        summary: "the same construction with F = m^2 q^2; fails the Hamilton-Jacobi check",
        render: || from_phi(true),
    },
    Example {
        name: "oscillator-k1",
        summary: "harmonic oscillator (k = 1) at energy 1/2, psi(t) = sin t",
        render: oscillator,
    },
    Example {
        name: "free-k1",
        summary: "free particle (k = 1) with constant momentum section",
        render: free,
    },
    Example {
        name: "trivial",
        summary: "H = 0 with the zero section",
        render: trivial,
    },
];

pub fn example(name: &str) -> Result<&'static Example, CliError> {
    EXAMPLES.iter().find(|e| e.name == name).ok_or_else(|| {
        let known: Vec<_> = EXAMPLES.iter().map(|e| e.name).collect();
        CliError::Input(format!(
            "unknown example `{name}` (known: {})",
            known.join(", ")
        ))
    })
}

struct Grid {
    origin: f64,
    spacing: f64,
    steps: usize,
    subdivisions: usize,
}

const SCALAR_GRID: Grid = Grid {
    origin: 0.0,
    spacing: 0.05,
    steps: 10,
    subdivisions: 2,
};

// psi = 2/(sqrt2 x1 - x2 - x3 + 1) has its pole at distance > 0.5 from
// [0, 0.25]^4 in the denominator.
const SQRT2_GRID: Grid = Grid {
    origin: 0.0,
    spacing: 0.05,
    steps: 5,
    subdivisions: 4,
};

fn grid_block(k: usize, g: &Grid) -> String {
    format!(
        "[grid]\norigin = {:?}\nspacing = {:?}\nsteps = {}\n\n[integrator]\nsubdivisions = {}\n",
        vec![g.origin; k],
        vec![g.spacing; k],
        g.steps,
        g.subdivisions
    )
}

fn scalar_params(c: [f64; 4]) -> String {
    let mut s = String::from("[params]\n");
    for (a, v) in c.iter().enumerate() {
        s.push_str(&format!("C{} = {v:?}\n", a + 1));
    }
    s
}

/// `C1^2 = C2^2 + C3^2 + C4^2`, the condition for the quadratic section.
fn check_cone(name: &str, c: [f64; 4]) -> Result<(), CliError> {
    let lhs = c[0] * c[0];
    let rhs = c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    if (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "builtin `{name}`: C1^2 = {lhs} but C2^2 + C3^2 + C4^2 = {rhs}"
        )))
    }
}

const SCALAR_SAMPLES: &str = "q_samples = [[-3.0], [-1.5], [0.5], [2.0], [3.0]]";

fn scalar_field(name: &str, c: [f64; 4], admissible: bool, g: Grid) -> Result<String, CliError> {
    if admissible {
        check_cone(name, c)?;
    }
    let note = if admissible {
        "# With psi(0) = 2 the integral section is\n\
         # psi = 2/(C1 x1 - C2 x2 - C3 x3 - C4 x4 + 1).\n"
    } else {
        "# C1^2 != C2^2 + C3^2 + C4^2, so the Hamilton-Jacobi residual is\n\
         # (C2^2 + C3^2 + C4^2 - C1^2) q^3 / 2 = -q^3 / 2 and `check` fails.\n"
    };
    Ok(format!(
        "# Scalar field on Minkowski space with F(q) = m^2 q^2 / 2, so the\n\
         # potential term F - m^2 q^2 / 2 vanishes. Section gamma^a = C_a q^2 / 2.\n\
         {note}\
         name = \"{name}\"\n\
         hamiltonian = \"{SCALAR_FIELD_H}\"\n\
         section = [[\"0.5*C1*q1^2\"], [\"0.5*C2*q1^2\"], [\"0.5*C3*q1^2\"], [\"0.5*C4*q1^2\"]]\n\
         initial_q = [2.0]\n\
         {SCALAR_SAMPLES}\n\n\
         [dims]\nk = 4\nn = 1\n\n\
         {}\n{}",
        scalar_params(c),
        grid_block(4, &g)
    ))
}

fn scalar_field_potentials() -> Result<String, CliError> {
    let c = [1.0, 1.0, 0.0, 0.0];
    check_cone("scalar-field-potentials", c)?;
    Ok(format!(
        "# The scalar-field section written through potentials W^a = C_a q^3 / 6.\n\
         name = \"scalar-field-potentials\"\n\
         hamiltonian = \"builtin:scalar-field\"\n\
         potentials = [\"C1/6*q1^3\", \"C2/6*q1^3\", \"C3/6*q1^3\", \"C4/6*q1^3\"]\n\
         initial_q = [2.0]\n\
         {SCALAR_SAMPLES}\n\n\
         [dims]\nk = 4\nn = 1\n\n\
         {}\n{}",
        scalar_params(c),
        grid_block(4, &SCALAR_GRID)
    ))
}

fn from_phi(kg: bool) -> Result<String, CliError> {
    let name = if kg {
        "scalar-field-from-phi-kg"
    } else {
        "scalar-field-from-phi"
    };
    let (m, amp, kappa) = (1.0_f64, 1.0_f64, 1.0_f64);
    // Plane wave phi = A sin(omega x1 - kappa x2). The field equation derived
    // from H fixes omega: omega^2 = kappa^2 when the mass term cancels,
    // omega^2 = kappa^2 + m^2 otherwise.
    let omega = if kg { (kappa * kappa + m * m).sqrt() } else { kappa };
    let dispersion = if kg {
        omega * omega - kappa * kappa - m * m
    } else {
        omega * omega - kappa * kappa
    };
    if dispersion.abs() > 1e-12 {
        return Err(CliError::Input(format!(
            "builtin `{name}`: plane wave violates its dispersion relation by {dispersion}"
        )));
    }
    let (h, note) = if kg {
        (
            "builtin:klein-gordon",
            "# F(q) = m^2 q^2 gives H = ... - m^2 q^2 / 2 and the Klein-Gordon equation,\n\
             # so phi needs omega^2 = kappa^2 + m^2. The section below does not depend\n\
             # on q, and its Hamilton-Jacobi residual is m^2 (phi - q): `check` fails\n\
             # away from q = phi even though psi = phi is recovered by `solve`.\n",
        )
    } else {
        (
            "builtin:scalar-field",
            "# F(q) = m^2 q^2 / 2 cancels the mass term, so phi solves the wave\n\
             # equation and needs omega = kappa.\n",
        )
    };
    let phi = "A*sin(omega*x1 - kappa*x2)";
    Ok(format!(
        "# Section gamma^a = g^ab d(phi)/dx^b with metric diag(-1, 1, 1, 1), from\n\
         # potentials W^a = (q - phi/2) gamma^a for the plane wave\n\
         # phi = {phi}.\n\
         {note}\
         name = \"{name}\"\n\
         hamiltonian = \"{h}\"\n\
         potentials = [\n\
         \x20   \"(q1 - 0.5*{phi})*(-A*omega*cos(omega*x1 - kappa*x2))\",\n\
         \x20   \"(q1 - 0.5*{phi})*(-A*kappa*cos(omega*x1 - kappa*x2))\",\n\
         \x20   \"0\",\n\
         \x20   \"0\",\n\
         ]\n\
         initial_q = [0.0]\n\
         q_samples = [[-1.0], [0.0], [0.5], [1.0]]\n\n\
         [dims]\nk = 4\nn = 1\n\n\
         [params]\nm = {m:?}\nA = {amp:?}\nomega = {omega:?}\nkappa = {kappa:?}\n\n\
         {}",
        grid_block(
            4,
            &Grid {
                origin: 0.0,
                spacing: 0.1,
                steps: 10,
                subdivisions: 2,
            }
        )
    ))
}

fn oscillator() -> Result<String, CliError> {
    Ok(format!(
        "# k = 1: H = (p^2 + q^2)/2. W = -E t + integral of sqrt(2E - q^2) dq solves\n\
         # W_t + H(q, W_q) = 0; with E = 1/2 and psi(0) = 0 the curve is psi = sin t\n\
         # and its momentum cos t.\n\
         name = \"oscillator-k1\"\n\
         hamiltonian = \"builtin:oscillator\"\n\
         potentials = [\"-E*x1 + 0.5*(q1*sqrt(2*E - q1^2) + 2*E*asin(q1/sqrt(2*E)))\"]\n\
         initial_q = [0.0]\n\
         q_samples = [[-0.9], [-0.5], [0.0], [0.5], [0.9]]\n\n\
         [dims]\nk = 1\nn = 1\n\n\
         [params]\nE = 0.5\n\n\
         {}",
        grid_block(
            1,
            &Grid {
                origin: 0.0,
                spacing: 0.01,
                steps: 140,
                subdivisions: 1,
            }
        )
    ))
}

fn free() -> Result<String, CliError> {
    Ok(format!(
        "# k = 1: H = p^2/2 with the constant section p = c; psi(t) = q0 + c t.\n\
         name = \"free-k1\"\n\
         hamiltonian = \"builtin:free\"\n\
         section = [[\"c\"]]\n\
         initial_q = [1.0]\n\
         q_samples = [[-1.0], [0.0], [1.0]]\n\n\
         [dims]\nk = 1\nn = 1\n\n\
         [params]\nc = 0.75\n\n\
         {}",
        grid_block(
            1,
            &Grid {
                origin: 0.0,
                spacing: 0.1,
                steps: 10,
                subdivisions: 1,
            }
        )
    ))
}

fn trivial() -> Result<String, CliError> {
    Ok(format!(
        "# H = 0 and gamma = 0: every residual vanishes.\n\
         name = \"trivial\"\n\
         hamiltonian = \"builtin:zero\"\n\
         section = [[\"0\"], [\"0\"]]\n\
         initial_q = [0.5]\n\
         q_samples = [[-1.0], [0.5]]\n\n\
         [dims]\nk = 2\nn = 1\n\n\
         {}",
        grid_block(
            2,
            &Grid {
                origin: 0.0,
                spacing: 0.25,
                steps: 4,
                subdivisions: 1,
            }
        )
    ))
}
