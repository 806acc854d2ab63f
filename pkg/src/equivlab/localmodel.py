"""Fiberwise model operator on C^m: closed-form spectrum, Hermite-Galerkin
cross-check, the degree-zero kernel state, and the cutoff/normalization
quantities used by the localization isometries.

The model operator on sections of the 2^{2m}-dimensional fiber algebra over
C^m is

    -4 sum_a d^2/dz^a dzbar^a  +  T^2 |Z|^2  +  T * W,

where W is the constant fiber endomorphism assembled from the Clifford
actions of the normal frame, scaled here at T = 1.  The scalar part is a
2m-dimensional harmonic oscillator with levels 2T (K + m); W has integer
eigenvalues 2j, j in [-m, m], with binomial multiplicities, so the full
spectrum is 2T (K + m + j).  The kernel is one-dimensional, spanned by
exp(theta - T |Z|^2 / 2) with theta the degree-zero pairing form of the
frame, and the first nonzero eigenvalue is 2T: the spectral-gap constant
A = 2 is frozen as a fixture.

The Galerkin route expands each real coordinate in Hermite functions of
frequency T, so the kernel state is exactly representable and the kinetic
and potential pieces are assembled separately from ladder matrix elements
(their off-diagonals cancel only in exact arithmetic, which keeps the
numerical route independent of the closed form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.sparse import csr_matrix, identity, kron
from scipy.sparse.linalg import eigsh

from .exterior import (AlgebraElement, clifford_c, clifford_hat_c,
                       enumerate_basis, frame_vector, metric_dual_wedge,
                       norm_sq, wedge)
from .scalars import ExactScalar, I_UNIT

_DENSE_LIMIT = 1600
GAP_CONSTANT = 2.0   # first nonzero eigenvalue over T; fixture value


@dataclass(frozen=True)
class OscillatorModel:
    m: int
    T: float
    cutoff: int = 8

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need fiber dimension m >= 1")
        if self.T <= 0:
            raise ValueError("need T > 0")
        if self.cutoff < 2:
            raise ValueError("need cutoff >= 2")


# ---------------------------------------------------------------------------
# Fiber endomorphism via the exact Clifford actions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def fiber_endomorphism_exact(m: int) -> tuple:
    """Exact matrix (tuple of tuples of ExactScalar) of the zero-order fiber
    term at T = 1:  -i * sum_a ( c(wbar_a) hatc(w_a) + c(w_a) hatc(wbar_a) )."""
    basis = enumerate_basis(m, 1)
    labels = list(basis.labels)
    total = None
    for a in range(1, m + 1):
        w = frame_vector(m, a, conjugated=False)
        wbar = frame_vector(m, a, conjugated=True)
        term = (clifford_c(wbar, m).compose(clifford_hat_c(w, m))
                + clifford_c(w, m).compose(clifford_hat_c(wbar, m)))
        total = term if total is None else total + term
    scaled = total.scaled(-I_UNIT)
    return tuple(tuple(row) for row in scaled.matrix(labels, labels, exact=True))


def fiber_endomorphism(m: int) -> np.ndarray:
    mat = fiber_endomorphism_exact(m)
    out = np.array([[c.to_complex() for c in row] for row in mat])
    if np.abs(out.imag).max() > 0:
        raise AssertionError("fiber endomorphism should be real")
    return out.real


# ---------------------------------------------------------------------------
# Closed-form spectrum
# ---------------------------------------------------------------------------

@dataclass
class AnalyticSpectrum:
    model: OscillatorModel
    levels: list[tuple[float, int]]       # (eigenvalue, multiplicity), sorted
    kernel_multiplicity: int
    min_nonzero: float

    @property
    def gap_over_T(self) -> float:
        return self.min_nonzero / self.model.T


def oscillator_spectrum_analytic(model: OscillatorModel,
                                 max_level: int = 12) -> AnalyticSpectrum:
    """Spectrum 2T (K + m + j): the scalar oscillator ladder shifted by the
    integer eigenvalues 2j of the fiber endomorphism, with multiplicities
    C(K + 2m - 1, 2m - 1) * C(2m, m + j).  Levels up to 2T*max_level."""
    m, T = model.m, model.T
    mult: dict[int, int] = {}
    for level in range(max_level + 1):
        total = 0
        for j in range(-m, m + 1):
            K = level - m - j
            if K < 0:
                continue
            total += math.comb(K + 2 * m - 1, 2 * m - 1) * math.comb(2 * m, m + j)
        if total:
            mult[level] = total
    levels = [(2.0 * T * lv, mu) for lv, mu in sorted(mult.items())]
    if mult.get(0, 0) != 1:
        raise AssertionError("closed form lost the one-dimensional kernel")
    return AnalyticSpectrum(model=model, levels=levels, kernel_multiplicity=1,
                            min_nonzero=2.0 * T)


def convolve_spectra(a: list[tuple[float, int]], b: list[tuple[float, int]],
                     cap: float) -> list[tuple[float, int]]:
    """Multiset sum of two spectra, truncated at `cap`; the m-fold
    convolution of the m=1 spectrum is the independent oracle for the
    tensor structure."""
    acc: dict[float, int] = {}
    for x, mx in a:
        for y, my in b:
            s = round(x + y, 9)
            if s <= cap + 1e-9:
                acc[s] = acc.get(s, 0) + mx * my
    return sorted(acc.items())


# ---------------------------------------------------------------------------
# Hermite-Galerkin route
# ---------------------------------------------------------------------------

def _ladder_blocks(cutoff: int, omega: float) -> tuple[np.ndarray, np.ndarray]:
    """(kinetic, position-squared) matrices in the frequency-omega Hermite
    basis; their sum is diagonal only in exact arithmetic."""
    n = cutoff
    diag = 2.0 * np.arange(n) + 1.0
    off = np.sqrt(np.arange(1, n - 1) * (np.arange(1, n - 1) + 1.0))
    x2 = np.diag(diag / (2.0 * omega))
    p2 = np.diag(omega * diag / 2.0)
    for i, v in enumerate(off):
        x2[i, i + 2] = x2[i + 2, i] = v / (2.0 * omega)
        p2[i, i + 2] = p2[i + 2, i] = -omega * v / 2.0
    return p2, x2


@dataclass
class GalerkinResult:
    model: OscillatorModel
    eigenvalues: np.ndarray            # ascending; full or lowest slice
    kernel_vector: np.ndarray | None   # eigenvector of the smallest eigenvalue
    dim: int
    dense: bool

    def kernel_count(self) -> int:
        """Resolved near-zero cluster size, -1 if the clustering is ambiguous."""
        from .deformed import cluster_kernel
        count, _, resolved, _ = cluster_kernel(np.asarray(self.eigenvalues))
        return count if resolved else -1


def galerkin_matrix(model: OscillatorModel):
    """Sparse Galerkin matrix: scalar oscillator (Kronecker sum over 2m real
    coordinates) plus T times the constant fiber endomorphism."""
    m, T, c = model.m, model.T, model.cutoff
    p2, x2 = _ladder_blocks(c, T)
    h1 = csr_matrix(p2 + (T * T) * x2)
    n_coords = 2 * m
    hsc = None
    for i in range(n_coords):
        term = None
        for jj in range(n_coords):
            blk = h1 if jj == i else identity(c, format="csr")
            term = blk if term is None else kron(term, blk, format="csr")
        hsc = term if hsc is None else hsc + term
    fiber = csr_matrix(T * fiber_endomorphism(m))
    total = kron(hsc, identity(fiber.shape[0], format="csr"), format="csr") \
        + kron(identity(c ** n_coords, format="csr"), fiber, format="csr")
    return total


def oscillator_galerkin(model: OscillatorModel, how_many: int = 48,
                        with_vector: bool = True) -> GalerkinResult:
    if model.cutoff < 4:
        raise ValueError("Galerkin route needs cutoff >= 4")
    h = galerkin_matrix(model)
    dim = h.shape[0]
    if dim <= _DENSE_LIMIT:
        dense = h.toarray()
        dense = 0.5 * (dense + dense.T)
        evals, evecs = np.linalg.eigh(dense)
        kvec = evecs[:, 0] if with_vector else None
        return GalerkinResult(model=model, eigenvalues=evals,
                              kernel_vector=kvec, dim=dim, dense=True)
    k = min(how_many, dim - 2)
    v0 = np.ones(dim) / math.sqrt(dim)
    # shift-invert below the spectrum: robust for the highly clustered
    # oscillator levels, deterministic with a fixed start vector
    evals, evecs = eigsh(h, k=k, sigma=-0.5 * model.T, which="LM", v0=v0)
    order = np.argsort(evals)
    return GalerkinResult(model=model, eigenvalues=evals[order],
                          kernel_vector=evecs[:, order[0]] if with_vector else None,
                          dim=dim, dense=False)


# ---------------------------------------------------------------------------
# The kernel state
# ---------------------------------------------------------------------------

@dataclass
class ThetaState:
    m: int
    theta: AlgebraElement
    exp_theta: AlgebraElement
    norm_sq_exact: ExactScalar         # equals 2^m
    pointwise_norm: float              # 2^{m/2}

    def fiber_coefficients(self) -> np.ndarray:
        basis = enumerate_basis(self.m, 1)
        vec = np.zeros(len(basis.labels), dtype=complex)
        flt = self.exp_theta.to_float()
        for i, lab in enumerate(basis.labels):
            vec[i] = flt.terms.get(lab, 0.0)
        return vec


def beta_state(model: OscillatorModel) -> ThetaState:
    """exp(theta) by the terminating exterior exponential; theta is the
    degree-zero sum over the frame of dual-pair products."""
    m = model.m
    one = AlgebraElement.scalar_one(m)
    theta = None
    for a in range(1, m + 1):
        w = frame_vector(m, a, conjugated=False)
        wbar = frame_vector(m, a, conjugated=True)
        term = metric_dual_wedge(w, metric_dual_wedge(wbar, one))
        theta = term if theta is None else theta + term
    assert all(lab.r == 0 for lab in theta.terms)
    power = one
    total = one
    fact = 1
    for j in range(1, m + 1):
        power = wedge(power, theta)
        fact *= j
        total = total + power.scale(ExactScalar(Fraction(1, fact)))
    nsq = norm_sq(total)
    return ThetaState(m=m, theta=theta, exp_theta=total, norm_sq_exact=nsq,
                      pointwise_norm=math.sqrt(2.0 ** m))


def beta_vector(model: OscillatorModel) -> np.ndarray:
    """Coefficients of exp(theta - T |Z|^2 / 2) in the Galerkin basis: the
    scalar ground state tensor the fiber exponential, unit normalized."""
    state = beta_state(model)
    fiber = state.fiber_coefficients()
    dim_sc = model.cutoff ** (2 * model.m)
    vec = np.zeros(dim_sc * len(fiber), dtype=complex)
    vec[:len(fiber)] = fiber                      # scalar multi-index 0...0
    return vec / np.linalg.norm(vec)


def kernel_overlap(result: GalerkinResult) -> float:
    """|<galerkin kernel vector, beta>| with both unit normalized."""
    beta = beta_vector(result.model)
    v = result.kernel_vector
    return float(abs(np.vdot(v / np.linalg.norm(v), beta)))


def beta_residual(model: OscillatorModel) -> float:
    """||H beta|| for the Galerkin matrix H: zero up to round-off because
    beta lies exactly in the span."""
    h = galerkin_matrix(model)
    beta = beta_vector(model)
    return float(np.linalg.norm(h @ beta))


# ---------------------------------------------------------------------------
# Cutoff profile, normalization integral, isometry defect
# ---------------------------------------------------------------------------

def smooth_bump(a: float) -> float:
    """Even C^2 bump: 1 on |a| <= 1/2, 0 on |a| >= 1, quintic in between."""
    x = abs(a)
    if x <= 0.5:
        return 1.0
    if x >= 1.0:
        return 0.0
    t = 2.0 * (x - 0.5)
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)


@dataclass(frozen=True)
class CutoffProfile:
    eps: float = 1.0

    def gamma(self, a: float) -> float:
        return smooth_bump(a)

    def gamma_radial(self, rho: float) -> float:
        return smooth_bump(rho / self.eps)


def alpha_T(profile: CutoffProfile, m: int, T: float,
            rel_tol: float = 1.0e-12) -> tuple[float, float]:
    """Normalization integral of the cut-off Gaussian over the fiber,
    (2 pi)^{-m} int gamma_eps^2 exp(-T |Z|^2), by radial quadrature.
    Returns (alpha, alpha * T^m); the second converges to 2^{-m}."""
    eps = profile.eps

    def integrand(rho: float) -> float:
        g = profile.gamma_radial(rho)
        return (g * g) * math.exp(-T * rho * rho) * rho ** (2 * m - 1)

    val, err = integrate.quad(integrand, 0.0, eps,
                              points=[eps / 2.0, eps],
                              epsabs=0.0, epsrel=rel_tol, limit=200)
    if val > 0 and err / val > 1.0e-10:
        raise RuntimeError(f"normalization quadrature did not converge: "
                           f"rel err {err / val:g}")
    # (2 pi)^{-m} * Vol(S^{2m-1}) = 2 / (2^m (m-1)!)
    alpha = val * 2.0 / (2.0 ** m * math.factorial(m - 1))
    return alpha, alpha * T ** m


def isometry_defect(model: OscillatorModel, profile: CutoffProfile,
                    u1: np.ndarray, u2: np.ndarray | None = None) -> float:
    """| <<I u1, I u2>> - <u1, u2> | for the localization embedding
    I u = (2^m alpha_T)^{-1/2} gamma_eps (pi^* u) exp(theta - T|Z|^2/2).

    The normalization alpha is adaptive quadrature; the fiber integral of
    |I u|^2 is composite Gauss-Legendre with the fiber-algebra norm of
    exp(theta) taken from the exact exterior computation, so the defect
    measures agreement of two independent integration routes."""
    if u2 is None:
        u2 = u1
    m, T = model.m, model.T
    state = beta_state(model)
    nsq = state.norm_sq_exact.to_complex().real    # |exp theta|^2 = 2^m
    alpha, _ = alpha_T(profile, m, T)
    eps = profile.eps
    nodes, weights = np.polynomial.legendre.leggauss(64)
    val = 0.0
    for lo, hi in ((0.0, eps / 2.0), (eps / 2.0, eps)):
        rho = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        g = np.array([profile.gamma_radial(r) for r in rho])
        f = g * g * np.exp(-T * rho * rho) * rho ** (2 * m - 1)
        val += 0.5 * (hi - lo) * float(weights @ f)
    fiber_integral = val * 2.0 / (2.0 ** m * math.factorial(m - 1)) * nsq
    base = complex(np.vdot(u1, u2))
    lhs = fiber_integral / (2.0 ** m * alpha) * base
    return float(abs(lhs - base))
