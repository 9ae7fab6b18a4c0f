//! Figure-reproduction scenarios with the caption parameters.

use crate::config::{Direction, EngineChoice, InitialState, OutputKind, ScenarioConfig, SectionConfig};

const H: f64 = 0.866_025_403_784_438_6;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `(name, description)` for every preset.
pub const PRESETS: [(&str, &str); 8] = [
    ("fig1", "quasi-periodic linear flow, section n = e2 through the origin"),
    ("fig2", "periodic linear flow with a.(a*a) = 0"),
    ("fig3", "diagonal generator a3 = a8 = 1/2, quasi-periodic Lissajous curve"),
    ("fig3-right", "diagonal generator a3 = sqrt3, a8 = 1/2, periodic Lissajous curve"),
    ("fig4", "diagonal generator equilibria: triangle of stationary states"),
    ("fig5", "limit cycle of the nonlinear flow from a pure state"),
    ("fig6", "damped quasi-periodic spiral into a pure equilibrium"),
    ("fig7", "entropy auto-oscillation on the limit cycle from the maximally mixed state"),
];

fn scenario(name: &str, a: [f64; 8], b: [f64; 8], xi0: [f64; 8], t_end: f64, samples: usize, outputs: &[OutputKind]) -> ScenarioConfig {
    ScenarioConfig {
        name: Some(name.into()),
        a,
        b,
        xi0: InitialState::Vector(xi0),
        t_end,
        samples,
        engine: EngineChoice::Auto,
        section: None,
        outputs: outputs.to_vec(),
    }
}

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    use OutputKind::*;
    let z = [0.0; 8];
    let north = [0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, 0.5];
    let fig5_a = [1.0, 1.0, 0.0, 2.0, -2.0, 1.0, 0.0, 0.0];
    let fig5_b = north;
    Some(match name {
        "fig1" => ScenarioConfig {
            section: Some(SectionConfig {
                normal: [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                point: z,
                direction: Direction::Both,
            }),
            ..scenario(
                name,
                [0.0, 1.0, 0.0, -1.0, 0.3, 0.0, 1.0, 0.0],
                z,
                [0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5],
                400.0,
                16001,
                &[Trajectory, Poincare, Classification],
            )
        },
        "fig2" => scenario(name, [1.0, 0.0, 1.0, 1.0, -1.0, 1.0, 1.0, 0.0], z, north, 100.0, 5001, &[Trajectory, Classification]),
        "fig3" => scenario(name, [0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], z, [0.1; 8], 400.0, 8001, &[Trajectory, Classification]),
        "fig3-right" => scenario(name, [0.0, 0.0, SQRT3, 0.0, 0.0, 0.0, 0.0, 0.5], z, [0.1; 8], 150.0, 7501, &[Trajectory, Classification]),
        "fig4" => scenario(name, [0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], z, [0.1; 8], 100.0, 1001, &[Equilibria]),
        "fig5" => scenario(name, fig5_a, fig5_b, [0.0, 0.0, -H, 0.0, 0.0, 0.0, 0.0, 0.5], 60.0, 6001, &[Trajectory, Classification]),
        "fig6" => scenario(name, [1.0, 0.0, -1.0, 0.0, 2.0, -1.0, 1.0, -1.0], [0.1; 8], north, 600.0, 6001, &[Trajectory, Entropy, Classification]),
        "fig7" => scenario(name, fig5_a, fig5_b, z, 60.0, 6001, &[Trajectory, Entropy, Classification]),
        _ => return None,
    })
}

/// Equilibrium reported in the fig6 caption.
pub const FIG6_EQUILIBRIUM: [f64; 8] = [0.284966, -0.168841, -0.042086, -0.035279, 0.556160, -0.356250, 0.522711, -0.421682];
