"""Brute-force reference computations written without the package.

Index loops and plain formulas only; these are what the package is checked
against.
"""
import itertools

import numpy as np
from scipy import integrate

R3 = range(3)


def kron(a, b):
    return 1.0 if a == b else 0.0


def lame(E, nu):
    lam = E * nu / ((1 + nu) * (1 - 2 * nu))
    mu = E / (2 * (1 + nu))
    return lam, mu, lam + 2 * mu / 3


def stiffness_loops(E, nu):
    lam, mu, _ = lame(E, nu)
    C = np.zeros((3, 3, 3, 3))
    for i, j, k, l in itertools.product(R3, R3, R3, R3):
        C[i, j, k, l] = lam * kron(k, l) * kron(i, j) + 2 * mu * kron(k, i) * kron(l, j)
    return C


def compliance_loops(E, nu):
    D = np.zeros((3, 3, 3, 3))
    for i, j, k, l in itertools.product(R3, R3, R3, R3):
        D[i, j, k, l] = ((1 + nu) * kron(k, i) * kron(l, j) - nu * kron(k, l) * kron(i, j)) / E
    return D


def contract(T, t):
    out = np.zeros((3, 3))
    for i, j, k, l in itertools.product(R3, R3, R3, R3):
        out[i, j] += T[i, j, k, l] * t[k, l]
    return out


def deviator(t):
    t = np.asarray(t, dtype=float)
    tr = t[0, 0] + t[1, 1] + t[2, 2]
    return t - tr / 3 * np.eye(3)


def j2_j3(t):
    s = deviator(t)
    j2 = 0.5 * sum(s[i, j] * s[i, j] for i in R3 for j in R3)
    j3 = sum(s[i, j] * s[j, k] * s[k, i] for i in R3 for j in R3 for k in R3) / 3
    return j2, j3


def energy(sigma, eps):
    return 0.5 * sum(sigma[i, j] * eps[i, j] for i in R3 for j in R3)


def q4_stiffness_entry(E, nu, a, da, b, db):
    """Plane-strain stiffness entry of the unit-square quad4 by adaptive
    integration of the analytic shape-function gradients over [0,1]^2."""
    lam, mu, _ = lame(E, nu)
    D = np.array([[lam + 2 * mu, lam, 0], [lam, lam + 2 * mu, 0], [0, 0, mu]])
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]

    def grad(n, x, y):
        cx, cy = corners[n]
        sx = 1 if cx else -1
        sy = 1 if cy else -1
        fx = x if cx else 1 - x
        fy = y if cy else 1 - y
        return sx * fy, sy * fx

    def bcol(n, d, x, y):
        gx, gy = grad(n, x, y)
        return np.array([gx, 0, gy]) if d == 0 else np.array([0, gy, gx])

    val, _ = integrate.dblquad(lambda y, x: bcol(a, da, x, y) @ D @ bcol(b, db, x, y),
                               0, 1, 0, 1, epsabs=1e-13, epsrel=1e-13)
    return val


def plane_strain_uniaxial(E, nu, sigma0):
    """Strains of sigma_11 = sigma0 in plane strain (sigma_22 = 0)."""
    e11 = (1 - nu ** 2) * sigma0 / E
    e22 = -nu * (1 + nu) * sigma0 / E
    return e11, e22
