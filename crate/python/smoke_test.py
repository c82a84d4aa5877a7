"""Smoke test for the st0sim Python extension.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/st0sim-*.whl
"""

import cmath
import math

import numpy as np

import st0sim


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    params = st0sim.DeviceParams()
    assert params.g == 2.0 and params.j_exc == 2e-6

    fields = st0sim.FieldConfig.table1().with_transverse(1e-4)
    h = np.array(st0sim.build_dqd(fields))
    assert h.shape == (4, 4)
    assert np.allclose(h, h.conj().T, atol=0.0)

    evals, evecs = st0sim.eigh(h.tolist())
    want = np.linalg.eigvalsh(h)
    assert np.allclose(evals, want, rtol=0.0, atol=1e-18), (evals, want)
    v = np.array(evecs)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)

    u = np.array(st0sim.expm_unitary(h.tolist(), 1e-9))
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)

    pt = st0sim.pt_eigenvalues(st0sim.FieldConfig(b_z=0.1).with_transverse(1e-4))
    assert pt["weak_regime"]
    for a, b in zip(pt["lambda_p"], pt["lambda"]):
        assert abs(a - b) < 1e-8

    rows = st0sim.table2()
    assert [r[0] for r in rows] == [0.0, 1e-4, 5e-4]
    for r in rows:
        for k in range(4):
            assert close(r[5 + k], r[9 + k], 1e-11)

    times = [k * 1e-10 for k in range(201)]
    pops = st0sim.evolve(st0sim.FieldConfig.table1(), "S", times)
    assert all(close(sum(p), 1.0, 1e-12) for p in pops)
    assert max(p[1] for p in pops) > 0.8

    tau = st0sim.gate_time_for(math.pi, 5e-7)
    assert close(tau, math.pi * params.hbar / 5e-7, 1e-24)

    lag_grid = [k * 2.5e-12 for k in range(20001)]
    z_fields = st0sim.FieldConfig(b_z=0.1).with_transverse(5e-4)
    lag = st0sim.phase_lag(z_fields, "plus", lag_grid)
    assert lag["time_shift"] > 0.0
    assert lag["predicted_stretch"] > 0.0

    a, b = st0sim.transition_amplitudes(st0sim.FieldConfig.table1())
    assert cmath.isclose(a, 2 * 6.42915e-5 * 0.01 / 2, rel_tol=1e-12)
    assert a == b.conjugate()

    try:
        st0sim.gate_time_for(1.0, 0.0)
    except ValueError as e:
        assert "zero coupling" in str(e)
    else:
        raise AssertionError("expected ValueError")

    try:
        st0sim.evolve(st0sim.FieldConfig.table1(), "Q", times)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("st0sim smoke test passed")


if __name__ == "__main__":
    main()
