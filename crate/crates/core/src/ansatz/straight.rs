//! Exact edge states of a straight edge with unit normal `(cos θ, sin θ)`.

use num_complex::Complex64;

use super::chi::ChiProfile;
use super::envelope::Envelope;
use crate::fields::{Point, Spinor};

pub type SpinMatrix = [[Complex64; 2]; 2];

/// Rotation taking the θ-edge to the vertical one:
/// `[[cos θ/2, −i sin θ/2], [−i sin θ/2, cos θ/2]]`.
pub fn rotation_spinor(theta: f64) -> SpinMatrix {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

/// Polarization `(cos θ/2, i sin θ/2)` of the edge mode.
pub fn edge_spinor(theta: f64) -> Spinor {
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::new(0.0, (theta / 2.0).sin()),
    ]
}

fn frame(theta: f64, x: Point) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * x[0] + s * x[1], -s * x[0] + c * x[1])
}

/// `χ(n̂·x)·e^{iλ(t̂·x − t)}·(cos θ/2, i sin θ/2)`.
pub fn plane_wave(chi: &ChiProfile, theta: f64, lambda: f64, t: f64, x: Point) -> Spinor {
    let (u, v) = frame(theta, x);
    let amp = Complex64::from_polar(chi.eval(u), lambda * (v - t));
    let [a, b] = edge_spinor(theta);
    [amp * a, amp * b]
}

/// `χ(n̂·x)·g(t̂·x − t)·(cos θ/2, i sin θ/2)`: travels along `t̂` at unit speed.
pub fn straight_traveling(chi: &ChiProfile, theta: f64, g: &Envelope, t: f64, x: Point) -> Spinor {
    let (u, v) = frame(theta, x);
    let amp = chi.eval(u) * g.value(v - t);
    let [a, b] = edge_spinor(theta);
    [a * amp, b * amp]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::TransitionProfile;
    use std::f64::consts::PI;

    fn chi() -> ChiProfile {
        ChiProfile::new(TransitionProfile::tanh(1.0).unwrap()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn rotation_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = rotation_spinor(0.0);
        assert_eq!(s, [[one, zero], [zero, one]]);
        let s = rotation_spinor(PI);
        let mi = Complex64::new(0.0, -1.0);
        assert!(close(s[0][0], zero, 1e-16) && close(s[0][1], mi, 1e-16));
        assert!(close(s[1][0], mi, 1e-16) && close(s[1][1], zero, 1e-16));
    }

    #[test]
    fn rotation_is_unitary_and_inverts_to_the_edge_spinor() {
        for k in 0..24 {
            let theta = k as f64 * PI / 12.0;
            let s = rotation_spinor(theta);
            // S*S = I
            for i in 0..2 {
                for j in 0..2 {
                    let e: Complex64 = (0..2).map(|k| s[k][i].conj() * s[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(close(e, Complex64::new(want, 0.0), 1e-15));
                }
            }
            // S*·(1, 0)ᵀ is the polarization of the plane wave
            let back = [s[0][0].conj(), s[0][1].conj()];
            let spin = edge_spinor(theta);
            assert!(close(back[0], spin[0], 1e-15) && close(back[1], spin[1], 1e-15));
        }
    }

    #[test]
    fn plane_wave_examples() {
        let c = chi();
        let [a, b] = plane_wave(&c, 0.0, 0.0, 0.0, [0.8, -3.0]);
        assert!(close(a, Complex64::new(c.eval(0.8), 0.0), 1e-16) && b == Complex64::new(0.0, 0.0));
        // θ = 0, λ = 0.5: pure phase e^{−0.5it} in time
        let x = [0.3, 1.1];
        let p0 = plane_wave(&c, 0.0, 0.5, 0.0, x);
        for t in [0.5, 1.7, 9.0] {
            let p = plane_wave(&c, 0.0, 0.5, t, x);
            let ph = Complex64::from_polar(1.0, -0.5 * t);
            assert!(close(p[0], p0[0] * ph, 1e-15));
        }
        // θ = π: polarization (0, i), amplitude χ(−x₁)
        let [a, b] = plane_wave(&c, PI, 0.0, 0.0, [0.8, 2.0]);
        assert!(a.norm() < 1e-16);
        assert!(close(b, Complex64::new(0.0, c.eval(-0.8)), 1e-15));
    }

    #[test]
    fn traveling_wave_translates_along_the_tangent() {
        let c = chi();
        let g = Envelope::gaussian(-1.0, 1.0).unwrap();
        let theta: f64 = 0.9;
        let tan = [-theta.sin(), theta.cos()];
        for (x, t) in [([0.3, 0.2], 1.5), ([-2.0, 1.0], 4.0)] {
            let moved = [x[0] + t * tan[0], x[1] + t * tan[1]];
            let a = straight_traveling(&c, theta, &g, t, moved);
            let b = straight_traveling(&c, theta, &g, 0.0, x);
            assert!(close(a[0], b[0], 1e-15) && close(a[1], b[1], 1e-15));
        }
    }
}
