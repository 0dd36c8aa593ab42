//! Joint detection probabilities for a pair of polarization-entangled
//! photons, with optional white-noise admixture.
//!
//! The state is `(|xx> + |yy>) / sqrt(2)`. Each side measures along an
//! analyzer angle: outcome 1 means the photon is found along the analyzer
//! direction, outcome 0 along the perpendicular one. Every joint
//! probability depends only on the difference of the two analyzer angles:
//! `P^{11} = P^{00} = cos^2(d) / 2` and `P^{10} = P^{01} = sin^2(d) / 2`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{PIndex, Scenario};

/// Analyzer angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSettings {
    /// A, setting 1.
    pub theta: f64,
    /// A, setting 2.
    pub theta_p: f64,
    /// B, setting 1.
    pub phi: f64,
    /// B, setting 2.
    pub phi_p: f64,
}

impl AngleSettings {
    pub fn new(theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> Self {
        Self {
            theta,
            theta_p,
            phi,
            phi_p,
        }
    }

    pub fn from_degrees(theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> Self {
        Self::new(
            theta.to_radians(),
            theta_p.to_radians(),
            phi.to_radians(),
            phi_p.to_radians(),
        )
    }

    pub fn a(&self, s: u8) -> f64 {
        if s == 1 {
            self.theta
        } else {
            self.theta_p
        }
    }

    pub fn b(&self, t: u8) -> f64 {
        if t == 1 {
            self.phi
        } else {
            self.phi_p
        }
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self::new(
            self.theta + delta,
            self.theta_p + delta,
            self.phi + delta,
            self.phi_p + delta,
        )
    }

    pub fn is_finite(&self) -> bool {
        [self.theta, self.theta_p, self.phi, self.phi_p]
            .iter()
            .all(|x| x.is_finite())
    }

    pub fn to_degrees(&self) -> AnglesDeg {
        AnglesDeg {
            theta: self.theta.to_degrees(),
            theta_p: self.theta_p.to_degrees(),
            phi: self.phi.to_degrees(),
            phi_p: self.phi_p.to_degrees(),
        }
    }

    /// `(x, y, z)` = `(theta - phi, phi' - theta, phi - theta')`.
    pub fn reduced(&self) -> ReducedAngles {
        ReducedAngles::new(
            self.theta - self.phi,
            self.phi_p - self.theta,
            self.phi - self.theta_p,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnglesDeg {
    pub theta: f64,
    pub theta_p: f64,
    pub phi: f64,
    pub phi_p: f64,
}

/// Angle differences `x = theta - phi`, `y = phi' - theta`,
/// `z = phi - theta'`; the fourth difference `w = theta' - phi'` is always
/// `-(x + y + z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedAngles {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedAngles {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_degrees(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.to_radians(), y.to_radians(), z.to_radians())
    }

    pub fn w(&self) -> f64 {
        -(self.x + self.y + self.z)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn degrees(&self) -> [f64; 3] {
        [
            self.x.to_degrees(),
            self.y.to_degrees(),
            self.z.to_degrees(),
        ]
    }

    /// Full angles with the gauge fixed at `theta = 0`.
    pub fn to_full(&self) -> AngleSettings {
        reduced_to_full(*self)
    }
}

pub fn reduced_to_full(r: ReducedAngles) -> AngleSettings {
    AngleSettings::new(0.0, -r.x - r.z, -r.x, r.y)
}

/// The 16 joint probabilities of the 2-outcome scenario, in P-row order,
/// optionally mixed with white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumJointTable {
    angles: AngleSettings,
    gamma: f64,
    probs: [f64; 16],
}

impl QuantumJointTable {
    pub fn angles(&self) -> AngleSettings {
        self.angles
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.probs
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::binary()
    }

    pub fn get(&self, p: PIndex) -> Result<f64> {
        Ok(self.probs[Scenario::binary().p_flat_index(p)?])
    }

    /// The four entries of block `(s, t)` ordered `(11, 10, 01, 00)`.
    pub fn block(&self, s: u8, t: u8) -> [f64; 4] {
        let off = Scenario::binary().block_offset(s, t);
        [
            self.probs[off + 3],
            self.probs[off + 2],
            self.probs[off + 1],
            self.probs[off],
        ]
    }

    pub fn block_sum(&self, s: u8, t: u8) -> f64 {
        self.block(s, t).iter().sum()
    }

    pub fn to_json(&self) -> TableJson {
        let blocks = Scenario::SETTING_PAIRS
            .iter()
            .map(|&(s, t)| (format!("{s}{t}"), self.block(s, t)))
            .collect();
        TableJson {
            angles_deg: self.angles.to_degrees(),
            gamma: self.gamma,
            blocks,
        }
    }

    /// CSV rows `s,t,k,l,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,k,l,probability\n");
        for (p, v) in Scenario::binary().p_indices().zip(self.probs) {
            out.push_str(&format!("{},{},{},{},{v:.15}\n", p.s, p.t, p.k, p.l));
        }
        out
    }
}

/// Wire form `{angles_deg, gamma, blocks: {"11": [p11,p10,p01,p00], ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub angles_deg: AnglesDeg,
    pub gamma: f64,
    pub blocks: BTreeMap<String, [f64; 4]>,
}

/// Closed-form joint probabilities.
pub fn joint_table(angles: AngleSettings) -> QuantumJointTable {
    let mut probs = [0.0; 16];
    for (r, p) in Scenario::binary().p_indices().enumerate() {
        let d = angles.a(p.s) - angles.b(p.t);
        let (sin, cos) = d.sin_cos();
        probs[r] = if p.k == p.l {
            0.5 * cos * cos
        } else {
            0.5 * sin * sin
        };
    }
    QuantumJointTable {
        angles,
        gamma: 0.0,
        probs,
    }
}

/// Analyzer direction for an outcome: 1 along the angle, 0 perpendicular.
fn direction(angle: f64, outcome: usize) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    if outcome == 1 {
        [c, s]
    } else {
        [-s, c]
    }
}

fn projector(v: [f64; 2]) -> [[f64; 2]; 2] {
    [[v[0] * v[0], v[0] * v[1]], [v[1] * v[0], v[1] * v[1]]]
}

/// Kronecker product of two 2x2 operators applied to a two-photon vector.
fn apply_product(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2], psi: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (r, o) in out.iter_mut().enumerate() {
        let (ra, rb) = (r / 2, r % 2);
        for (c, x) in psi.iter().enumerate() {
            let (ca, cb) = (c / 2, c % 2);
            *o += a[ra][ca] * b[rb][cb] * x;
        }
    }
    out
}

/// The same table computed as squared norms of the projected state.
///
/// Polarization vectors have a vanishing third component, so the state and
/// the projectors are reduced to the two transverse components.
pub fn joint_table_from_state(angles: AngleSettings) -> QuantumJointTable {
    let psi = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
    let mut probs = [0.0; 16];
    for (r, p) in Scenario::binary().p_indices().enumerate() {
        let pa = projector(direction(angles.a(p.s), p.k));
        let pb = projector(direction(angles.b(p.t), p.l));
        let projected = apply_product(&pa, &pb, &psi);
        probs[r] = projected.iter().map(|x| x * x).sum();
    }
    QuantumJointTable {
        angles,
        gamma: 0.0,
        probs,
    }
}

/// Mixes the state with a fraction `gamma` of white noise, which gives
/// every outcome of every setting pair probability `1/4`.
pub fn apply_noise(table: &QuantumJointTable, gamma: f64) -> Result<QuantumJointTable> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!(
            "noise fraction must lie in [0, 1], got {gamma}"
        )));
    }
    let mut probs = table.probs;
    for p in probs.iter_mut() {
        *p = gamma / 4.0 + (1.0 - gamma) * *p;
    }
    Ok(QuantumJointTable {
        angles: table.angles,
        gamma: 1.0 - (1.0 - table.gamma) * (1.0 - gamma),
        probs,
    })
}
