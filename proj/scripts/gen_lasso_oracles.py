#!/usr/bin/env python3
"""Freeze reference solutions for the l1 solver test suite.

Each instance is   min_w ||x - D w||_2^2 + lam * ||w||_1   (no 1/2 factor).
Reference objectives come from an interior-point conic solver (Clarabel via
cvxpy, tight tolerances) and are cross-checked against CVXOPT; an instance is
only emitted when the two agree to 1e-9 relative.  Output goes to
tests/data/lasso_oracles.json.

Run from the repository root:  python3 scripts/gen_lasso_oracles.py
"""

import json
import os

import cvxpy as cp
import numpy as np

SEED = 20240614
COUNT = 100


def solve_reference(D, x, lam):
    K = D.shape[1]
    w = cp.Variable(K)
    obj = cp.Minimize(cp.sum_squares(x - D @ w) + lam * cp.norm1(w))
    prob = cp.Problem(obj)
    f_a = prob.solve(
        solver=cp.CLARABEL,
        tol_gap_abs=1e-12,
        tol_gap_rel=1e-12,
        tol_feas=1e-12,
    )
    try:
        f_b = cp.Problem(obj).solve(
            solver=cp.CVXOPT, abstol=1e-10, reltol=1e-10, feastol=1e-10
        )
    except cp.error.SolverError:
        f_b = cp.Problem(obj).solve(solver=cp.SCS, eps=1e-10, max_iters=200000)
    return f_a, f_b


def main():
    rng = np.random.default_rng(SEED)
    out = []
    trials = 0
    while len(out) < COUNT:
        trials += 1
        d = int(rng.integers(10, 51))
        K = int(rng.integers(20, 101))
        lam = float(np.exp(rng.uniform(np.log(0.01), np.log(1.0))))
        D = rng.standard_normal((d, K))
        D /= np.linalg.norm(D, axis=0, keepdims=True)
        x = rng.standard_normal(d)

        f_a, f_b = solve_reference(D, x, lam)
        rel = abs(f_a - f_b) / max(abs(f_a), 1e-12)
        if rel > 1e-9:
            print(f"skip (solver disagreement {rel:.2e})")
            continue
        out.append(
            {
                "d": d,
                "K": K,
                "lambda": lam,
                # column-major: atom after atom
                "D": [float(v) for v in D.flatten(order="F")],
                "x": [float(v) for v in x],
                "objective": float(f_a),
            }
        )
        if len(out) % 20 == 0:
            print(f"{len(out)}/{COUNT} (trials {trials})")

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    path = os.path.join(root, "tests", "data", "lasso_oracles.json")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump({"seed": SEED, "instances": out}, f)
    print(f"wrote {path} ({os.path.getsize(path) / 1e6:.1f} MB)")


if __name__ == "__main__":
    main()
