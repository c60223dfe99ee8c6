"""Smoke test for the pyselfoc extension.

Build and install first, e.g.
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pyselfoc-*.whl
"""

import math

import pyselfoc as so


def main():
    assert so.hermite_phys(3, 1.0) == -4.0
    ground = so.OscillatorFrame(1.0)
    assert abs(so.oscillator_psi(0.0, 0, ground) - math.pi ** -0.25) < 1e-15

    k = so.build_kernel(ground, so.OscillatorFrame(3.0))
    assert abs(k.prefactor - (math.sqrt(3) / 2) ** 0.5) < 1e-12

    rule = so.gauss_hermite(20)
    assert abs(sum(rule.weights) - math.sqrt(math.pi)) < 1e-13

    t = so.Transition1D.dimensionless(3.0, 9.0, 0)
    s = so.spectrum1d(t, 1e-8)
    assert s.complete and s.captured_mass >= 1 - 1e-8
    peak = s.argmax()
    assert abs(so.overlap_quad(t, peak) - s.amplitudes[peak]) < 1e-12
    print(f"ground-state spectrum: argmax {peak}, P = {s.probabilities[peak]:.6f}, "
          f"fc estimate {so.fc_estimate(t)}")

    try:
        so.spectrum1d(t, 1e-8, 5)
        raise AssertionError("cap not reported")
    except so.CapReachedError:
        pass
    assert not so.spectrum1d(t, 1e-8, 5, allow_partial=True).complete

    m = so.coupling_matrix(ground, so.OscillatorFrame(3.0, 3.0), 20, 400)
    assert m.orthogonality_defect < 1e-8

    src = so.Waveguide2D(1.0, 1.0)
    dst = so.Waveguide2D(2.0, 3.0, 0.0, (3.0, 4.0))
    tensor = so.spectrum2d_separable(src, dst, 0, 0)
    print(f"separable 2D argmax {tensor.argmax()}, entropy {tensor.schmidt().entropy:.2e}")

    modes = so.normal_modes(so.Waveguide2D(1.0, 1.0, 1.0))
    assert abs(modes.theta - math.pi / 4) < 1e-15
    assert abs(modes.omega_plus ** 2 - 1.5) < 1e-12

    twisted = so.coupled_tensor(so.Waveguide2D(1.0, 2.0), so.Waveguide2D(2.0, 3.0, 2.0, (1.0, 1.5)))
    assert twisted.schmidt().entropy > 0

    try:
        so.OscillatorFrame(-1.0)
        raise AssertionError("negative frequency accepted")
    except ValueError:
        pass
    print("ok")


if __name__ == "__main__":
    main()
