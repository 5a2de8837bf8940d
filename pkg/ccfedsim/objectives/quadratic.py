# coding:utf8
"""
Heterogeneous quadratics f_i(x) = 1/2 (x - b_i)^T A_i (x - b_i).

Gradient noise is injected, not sampled: it is isotropic Gaussian with
per-coordinate std noise_sigma / sqrt(d), so E|g - grad f|^2 == noise_sigma^2.
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from ccfedsim.objectives.base import GradSample, Objective
from ccfedsim.params import ParamVec


class QuadraticObjective(Objective):
    kind = "quadratic"

    def __init__(self, A, b, noise_sigma: float = 0.0):
        A = np.array(A, dtype=np.float64)
        b = np.array(b, dtype=np.float64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != b.size:
            raise ValueError("A must be {0}x{0} for b of length {0}, got {1}".format(b.size, A.shape))
        if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, float(np.abs(A).max()))):
            raise ValueError("A must be symmetric")
        eigvals = np.linalg.eigvalsh(A)
        if eigvals[0] < -1e-10 * max(1.0, float(eigvals[-1])):
            raise ValueError("A must be positive semidefinite, min eigenvalue {}".format(eigvals[0]))
        if noise_sigma < 0 or not np.isfinite(noise_sigma):
            raise ValueError("noise_sigma must be finite and >= 0: {}".format(noise_sigma))
        super().__init__(b.size)
        A.flags.writeable = False
        b.flags.writeable = False
        self.A = A
        self.b = b
        self.noise_sigma = float(noise_sigma)
        # L-smoothness constant
        self.smoothness = float(max(eigvals[-1], 0.0))

    @classmethod
    def random(
        cls,
        dim: int,
        rng: np.random.Generator,
        sigma_g: float = 1.0,
        l_max: float = 1.0,
        noise_sigma: float = 0.0,
        l_min: float = 0.1,
    ) -> "QuadraticObjective":
        """
            A = Q^T diag(lambda) Q with lambda ~ U[l_min, l_max], b ~ N(0, sigma_g^2 I)
        """
        if l_max < l_min:
            raise ValueError("l_max must be >= {}: {}".format(l_min, l_max))
        q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
        # sign fix makes Q uniformly distributed
        q = q * np.sign(np.diag(r))
        lam = rng.uniform(l_min, l_max, size=dim)
        A = q.T @ np.diag(lam) @ q
        A = (A + A.T) / 2.0
        b = rng.normal(0.0, sigma_g, size=dim)
        return cls(A, b, noise_sigma=noise_sigma)

    def full_gradient(self, x: ParamVec) -> ParamVec:
        self.check_dim(x)
        return ParamVec(self.A @ (x.values - self.b))

    def stochastic_gradient(self, x: ParamVec, batch_size: int, rng: np.random.Generator) -> GradSample:
        """
            Exact gradient plus N(0, noise_sigma^2 / d) noise on every coordinate,
            so the total noise has E|xi|^2 = noise_sigma^2. batch_size is ignored.
        """
        self.check_dim(x)
        diff = x.values - self.b
        grad = self.A @ diff
        if self.noise_sigma > 0:
            grad = grad + rng.normal(0.0, self.noise_sigma / np.sqrt(self.dim), size=self.dim)
        return GradSample(grad=ParamVec(grad), loss=0.5 * float(diff @ (self.A @ diff)))

    def evaluate(self, x: ParamVec) -> Tuple[float, Optional[float]]:
        self.check_dim(x)
        diff = x.values - self.b
        return 0.5 * float(diff @ (self.A @ diff)), None


def global_minimizer(objectives: Sequence[QuadraticObjective]) -> ParamVec:
    """
        argmin of (1/N) sum f_i:  (sum A_i) x* = sum A_i b_i
    """
    if not objectives:
        raise ValueError("no objectives")
    A = sum(obj.A for obj in objectives)
    rhs = sum(obj.A @ obj.b for obj in objectives)
    return ParamVec(np.linalg.solve(A, rhs))
