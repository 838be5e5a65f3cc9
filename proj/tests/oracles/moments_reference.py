"""Cross-sectional covariance and price variance by Lyapunov ODEs.

Independent of the fundamental-matrix formulas used by the library:

  Sigma' = B Sigma + Sigma B^T + (1 - rho^2) Theta Theta^T
  P'     = A P + P A^T + G G^T,   X = (S, Q_bar, V_bar), G = (sigma, 0, rho eta)

with Var(S_t) = P_00. Parameters: eta 1, b 5e-2, gamma 0.05, gamma_bar 0.1,
k 5e-3, k_bar 1e-3, alpha 0.1, beta 1, sigma 1, T 1.
"""
import numpy as np
from scipy.integrate import solve_ivp

from riccati_reference import BASE, separate_rhs, solve

P = dict(BASE, eta=1.0, b=5e-2, g=0.05, gb=0.1, kb=1e-3)
SIGMA0 = np.diag([0.25, 0.02 ** 2])


def matrices(sol, p, t):
    c = sol.sol(t)
    k, kb, g, gb, beta = p["k"], p["kb"], p["g"], p["gb"], p["beta"]
    K = 2 * k + kb
    on_q = 2 * c[5] - g * c[10]
    on_v = c[10] - 2 * g * c[7]
    nq = on_q / (2 * k)
    nv = on_v / (2 * k)
    nqb = (2 * k * (c[9] - g * c[12]) - kb * on_q) / (2 * k * K)
    nvb = (2 * k * (c[11] - g * c[14]) - kb * on_v) / (2 * k * K)
    gg = g + gb
    B = np.array([[nq, nv], [-g * nq, -(beta + g * nv)]])
    C = np.array([[nq + nqb, nv + nvb], [-gg * (nq + nqb), -(beta + gg * (nv + nvb))]])
    return B, C


def covariance(sol, p, t_end):
    theta = np.array([0.0, p["eta"]])
    noise = (1 - p["rho"] ** 2) * np.outer(theta, theta)

    def rhs(t, y):
        S = y.reshape(2, 2)
        B, _ = matrices(sol, p, t)
        return (B @ S + S @ B.T + noise).ravel()

    r = solve_ivp(rhs, [0, t_end], SIGMA0.ravel(), method="DOP853", rtol=1e-13, atol=1e-15)
    return r.y[:, -1].reshape(2, 2)


def price_variance(sol, p, t_end):
    G = np.array([p["sigma"], 0.0, p["rho"] * p["eta"]])

    def rhs(t, y):
        Pm = y.reshape(3, 3)
        _, C = matrices(sol, p, t)
        A = np.zeros((3, 3))
        A[0, 1:] = p["b"] * C[0]
        A[1:, 1:] = C
        return (A @ Pm + Pm @ A.T + np.outer(G, G)).ravel()

    r = solve_ivp(rhs, [0, t_end], np.zeros(9), method="DOP853", rtol=1e-13, atol=1e-15)
    return r.y[0, -1]


if __name__ == "__main__":
    for rho in [0.0, 0.5, 1.0]:
        p = dict(P, rho=rho)
        term = np.zeros(15); term[5] = -p["alpha"]; term[10] = 1
        sol = solve(separate_rhs, term, p)
        for t in [0.5, 1.0]:
            S = covariance(sol, p, t)
            print(f"{{{rho}, {t}, {S[0,0]:.16e}, {S[1,1]:.16e}, {S[0,1]:.16e}}},  // cov")
    for rho in [-1.0, -0.5, 0.0, 0.5, 1.0]:
        p = dict(P, rho=rho)
        term = np.zeros(15); term[5] = -p["alpha"]; term[10] = 1
        sol = solve(separate_rhs, term, p)
        print(f"{{{rho}, 1.0, {price_variance(sol, p, 1.0):.16e}}},  // price var")
