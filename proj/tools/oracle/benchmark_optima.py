"""Independent oracle for the benchmark optima frozen in src/benchmarks.cpp.

For each test function (standard minimization form on its native domain) this
searches a dense grid plus seeded random probes, refines the best candidates
with L-BFGS-B inside the box, and prints the maximization value (-min) and
the maximizers mapped to [0,1]^D.

    python3 tools/oracle/benchmark_optima.py
"""
import numpy as np
from scipy.optimize import minimize


def branin(x):
    x1, x2 = x[..., 0], x[..., 1]
    b = 5.1 / (4 * np.pi ** 2)
    c = 5 / np.pi
    return (x2 - b * x1 ** 2 + c * x1 - 6) ** 2 + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1) + 10


def rosenbrock(x):
    return np.sum(100 * (x[..., 1:] - x[..., :-1] ** 2) ** 2 + (x[..., :-1] - 1) ** 2, axis=-1)


H3_A = np.array([[3, 10, 30], [0.1, 10, 35], [3, 10, 30], [0.1, 10, 35]], float)
H3_P = 1e-4 * np.array([[3689, 1170, 2673], [4699, 4387, 7470], [1091, 8732, 5547],
                        [381, 5743, 8828]], float)
H_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
H6_A = np.array([[10, 3, 17, 3.5, 1.7, 8], [0.05, 10, 17, 0.1, 8, 14],
                 [3, 3.5, 1.7, 10, 17, 8], [17, 8, 0.05, 10, 0.1, 14]], float)
H6_P = 1e-4 * np.array([[1312, 1696, 5569, 124, 8283, 5886], [2329, 4135, 8307, 3736, 1004, 9991],
                        [2348, 1451, 3522, 2883, 3047, 6650], [4047, 8828, 8732, 5743, 1091, 381]],
                       float)


def hartmann(A, P):
    def f(x):
        d = x[..., None, :] - P
        return -np.sum(H_ALPHA * np.exp(-np.sum(A * d ** 2, axis=-1)), axis=-1)
    return f


SHEKEL_C = np.array([[4, 4, 4, 4], [1, 1, 1, 1], [8, 8, 8, 8], [6, 6, 6, 6], [3, 7, 3, 7],
                     [2, 9, 2, 9], [5, 5, 3, 3], [8, 1, 8, 1], [6, 2, 6, 2], [7, 3.6, 7, 3.6]],
                    float)
SHEKEL_BETA = 0.1 * np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5], float)


def shekel(x):
    d = x[..., None, :] - SHEKEL_C
    return -np.sum(1.0 / (np.sum(d ** 2, axis=-1) + SHEKEL_BETA), axis=-1)


PROBLEMS = {
    "branin": (branin, np.array([[-5, 10], [0, 15]], float)),
    "rosenbrock2": (rosenbrock, np.array([[-5, 10], [-5, 10]], float)),
    "hartmann3": (hartmann(H3_A, H3_P), np.array([[0, 1]] * 3, float)),
    "hartmann6": (hartmann(H6_A, H6_P), np.array([[0, 1]] * 6, float)),
    "shekel10": (shekel, np.array([[0, 10]] * 4, float)),
}


def solve(name, fn, box, probes=1_000_000, keep=60, seed=0):
    rng = np.random.default_rng(seed)
    dim = box.shape[0]
    lo, hi = box[:, 0], box[:, 1]
    per_axis = max(3, int(round(200_000 ** (1.0 / dim))))
    axes = [np.linspace(0, 1, per_axis)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    units = np.vstack([grid, rng.random((probes, dim))])
    vals = fn(lo + units * (hi - lo))
    order = np.argsort(vals)[:keep]

    found = []
    for u0 in units[order]:
        res = minimize(lambda u: fn(lo + u * (hi - lo)), u0, method="L-BFGS-B",
                       bounds=[(0, 1)] * dim, options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10_000})
        found.append((float(res.fun), res.x))
    best = min(v for v, _ in found)
    optima = []
    for v, u in sorted(found, key=lambda p: p[0]):
        if v <= best + 1e-7 and all(np.linalg.norm(u - o) > 1e-3 for o in optima):
            optima.append(u)
    print(f"{name}: optimum_value(max) = {-best:.17g}")
    for u in optima:
        print("    unit point:", ", ".join(f"{c:.17g}" for c in u),
              "  value:", f"{-fn(lo + u * (hi - lo)):.17g}")


if __name__ == "__main__":
    for name, (fn, box) in PROBLEMS.items():
        solve(name, fn, box)
