//! Gate kinds, their conventions and explicit unitaries.
//!
//! | gate        | unitary                                                   |
//! |-------------|-----------------------------------------------------------|
//! | `RX(α)`     | `exp(-i α X / 2)`                                         |
//! | `RZ(α)`     | `exp(-i α Z / 2)`                                         |
//! | `H`         | `(X + Z) / √2`                                            |
//! | `CPHASE(φ)` | `diag(1, 1, 1, e^{iφ})`                                   |
//! | `CZ`        | `CPHASE(π)`                                               |
//! | `SWAP`      | exchanges the two qubits                                  |
//! | `XY(β)`     | `|01⟩ → cos(β/2)|01⟩ + i sin(β/2)|10⟩` and symmetric       |
//! | `ISWAP`     | `XY(π)`, i.e. `|01⟩ → i|10⟩`                               |
//! | `CRX(φ)`    | `RX(φ)` on the second qubit when the first is `|1⟩`        |
//!
//! Two-qubit matrices are indexed by `bit(q₀) + 2·bit(q₁)` where `q₀` is the
//! first listed qubit (the control for `CRX`).

use core::f64::consts::{FRAC_1_SQRT_2, PI};
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{cis, I, ONE, ZERO};

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Rx,
    Rz,
    H,
    Cphase,
    Cz,
    Swap,
    ISwap,
    Xy,
    Crx,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::Rx,
        GateKind::Rz,
        GateKind::H,
        GateKind::Cphase,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::ISwap,
        GateKind::Xy,
        GateKind::Crx,
        GateKind::Measure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Rz => "RZ",
            GateKind::H => "H",
            GateKind::Cphase => "CPHASE",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::ISwap => "ISWAP",
            GateKind::Xy => "XY",
            GateKind::Crx => "CRX",
            GateKind::Measure => "MEASURE",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Rz | GateKind::H | GateKind::Measure => 1,
            _ => 2,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Rz | GateKind::Cphase | GateKind::Xy | GateKind::Crx
        )
    }

    /// Gates the target hardware executes directly.
    pub fn is_native(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Rz | GateKind::Cphase | GateKind::Xy | GateKind::Measure
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate instance: kind, one or two qubit indices and an optional angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: [usize; 2],
    angle: f64,
}

/// Explicit unitary of a gate, sized by arity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateMatrix {
    One(Matrix2),
    Two(Matrix4),
}

impl Gate {
    /// Generic constructor; validates arity and that two-qubit indices differ.
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Gate> {
        if qubits.len() != kind.arity() {
            return Err(Error::LengthMismatch {
                expected: kind.arity(),
                found: qubits.len(),
            });
        }
        if kind.has_angle() != angle.is_some() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{kind} {} an angle",
                if kind.has_angle() { "requires" } else { "takes no" }
            )));
        }
        if let Some(a) = angle {
            if !a.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{kind} angle must be finite"
                )));
            }
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateQubit(qubits[0]));
        }
        let second = if qubits.len() == 2 { qubits[1] } else { qubits[0] };
        Ok(Gate {
            kind,
            qubits: [qubits[0], second],
            angle: angle.unwrap_or(0.0),
        })
    }

    fn one(kind: GateKind, q: usize, angle: f64) -> Gate {
        Gate {
            kind,
            qubits: [q, q],
            angle,
        }
    }

    fn two(kind: GateKind, a: usize, b: usize, angle: f64) -> Gate {
        assert_ne!(a, b, "two-qubit gate on a single qubit");
        Gate {
            kind,
            qubits: [a, b],
            angle,
        }
    }

    pub fn rx(q: usize, angle: f64) -> Gate {
        Gate::one(GateKind::Rx, q, angle)
    }

    pub fn rz(q: usize, angle: f64) -> Gate {
        Gate::one(GateKind::Rz, q, angle)
    }

    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q, 0.0)
    }

    pub fn measure(q: usize) -> Gate {
        Gate::one(GateKind::Measure, q, 0.0)
    }

    pub fn cphase(control: usize, target: usize, angle: f64) -> Gate {
        Gate::two(GateKind::Cphase, control, target, angle)
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Cz, a, b, 0.0)
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b, 0.0)
    }

    pub fn iswap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::ISwap, a, b, 0.0)
    }

    pub fn xy(a: usize, b: usize, angle: f64) -> Gate {
        Gate::two(GateKind::Xy, a, b, angle)
    }

    pub fn crx(control: usize, target: usize, angle: f64) -> Gate {
        Gate::two(GateKind::Crx, control, target, angle)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn angle(&self) -> Option<f64> {
        self.kind.has_angle().then_some(self.angle)
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Same gate acting on relabelled qubits.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: [map(self.qubits[0]), map(self.qubits[1])],
            angle: self.angle,
        }
    }

    /// Errors unless every index is below `n_qubits`.
    pub fn check(&self, n_qubits: usize) -> Result<()> {
        for &q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::InvalidQubit { qubit: q, n_qubits });
            }
        }
        Ok(())
    }

    /// The inverse gate, as a gate sequence (all kinds here invert to one gate
    /// except `ISWAP`, whose inverse is `XY(-π)`).
    pub fn inverse(&self) -> Result<Gate> {
        let q = self.qubits;
        Ok(match self.kind {
            GateKind::Measure => return Err(Error::MeasureInUnitaryPath),
            GateKind::H | GateKind::Cz | GateKind::Swap => *self,
            GateKind::ISwap => Gate::xy(q[0], q[1], -PI),
            kind => Gate {
                kind,
                qubits: q,
                angle: -self.angle,
            },
        })
    }

    pub fn matrix(&self) -> Result<GateMatrix> {
        let a = self.angle;
        Ok(match self.kind {
            GateKind::Measure => return Err(Error::MeasureInUnitaryPath),
            GateKind::Rx => GateMatrix::One(rx_matrix(a)),
            GateKind::Rz => GateMatrix::One(rz_matrix(a)),
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                GateMatrix::One([[h, h], [h, -h]])
            }
            GateKind::Cphase => GateMatrix::Two(diag4([ONE, ONE, ONE, cis(a)])),
            GateKind::Cz => GateMatrix::Two(diag4([ONE, ONE, ONE, -ONE])),
            GateKind::Swap => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][2] = ONE;
                m[2][1] = ONE;
                m[3][3] = ONE;
                GateMatrix::Two(m)
            }
            GateKind::ISwap => GateMatrix::Two(xy_matrix(PI)),
            GateKind::Xy => GateMatrix::Two(xy_matrix(a)),
            GateKind::Crx => {
                let r = rx_matrix(a);
                let mut m = [[ZERO; 4]; 4];
                // control is local bit 0, target local bit 1
                m[0][0] = ONE;
                m[2][2] = ONE;
                m[1][1] = r[0][0];
                m[1][3] = r[0][1];
                m[3][1] = r[1][0];
                m[3][3] = r[1][1];
                GateMatrix::Two(m)
            }
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(a) = self.angle() {
            write!(f, "({a})")?;
        }
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

pub fn rx_matrix(angle: f64) -> Matrix2 {
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = -I * (angle / 2.0).sin();
    [[c, s], [s, c]]
}

pub fn rz_matrix(angle: f64) -> Matrix2 {
    [[cis(-angle / 2.0), ZERO], [ZERO, cis(angle / 2.0)]]
}

pub fn xy_matrix(angle: f64) -> Matrix4 {
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = I * (angle / 2.0).sin();
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[3][3] = ONE;
    m[1][1] = c;
    m[2][2] = c;
    m[1][2] = s;
    m[2][1] = s;
    m
}

fn diag4(d: [Complex64; 4]) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

/// Matrix product `a · b` of 4×4 matrices.
pub fn mul4(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}
