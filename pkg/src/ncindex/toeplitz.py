"""Truncated-Fourier Toeplitz index engine for circle actions.

The compression P a P of an acting unitary onto the nonnegative modes of
the circle Dirac generator is assembled on the mode window [0, F_c] and
its tau-weighted kernel/cokernel defect is read from singular values.
Kernel vectors concentrated near the top of the window are truncation
artifacts of the finite section and are discarded; the genuine Hardy
boundary sits at mode 0.

Orientation is pinned once by the translation action with the symbol of
one negative winding, whose index is +1; the classical winding number of
the determinant loop therefore enters all comparisons with a minus sign.
"""

from __future__ import annotations

import numpy as np

from .errors import IllConditioned, NotUnitary, PhaseJump
from .group_algebra import GroupAlgebraElement, GroupSpec

TWO_PI_I = 2j * np.pi


class CircleSystem:
    """Translation action on functions on the circle.

    Elements are Fourier polynomials (group algebra of Z); the action
    translates, the generator differentiates, and the invariant trace is
    the zeroth Fourier coefficient.  The faithful representation is
    grid-diagonal on `grid_n` points.
    """

    kind = "circle"

    def __init__(self, grid_n=256):
        self.spec = GroupSpec.lattice(1)
        self.grid_n = grid_n
        self.rep_dim = 1

    def element(self, coeffs):
        return GroupAlgebraElement(self.spec,
                                   {(int(m),): c for m, c in
                                    coeffs.items()})

    def exponential(self, m):
        """The loop x -> e^{-2 pi i m x}."""
        return self.element({-m: 1.0})

    def weights(self, a):
        return {g[0]: c for g, c in a.terms.items()}

    def delta(self, a):
        """Generator of the action: d/dt of translation at t = 0."""
        return GroupAlgebraElement(
            self.spec,
            {g: TWO_PI_I * g[0] * c for g, c in a.terms.items()})

    def trace(self, a):
        return a.trace_e()

    def star(self, a):
        return a.star()

    def mul(self, a, b):
        return a * b

    def one(self):
        return GroupAlgebraElement.one(self.spec)

    def samples(self, a, n=None):
        """Values of the symbol on a uniform grid, as 1x1 blocks."""
        n = n or self.grid_n
        x = np.arange(n) / n
        vals = np.zeros(n, dtype=complex)
        for g, c in a.terms.items():
            vals += c * np.exp(TWO_PI_I * g[0] * x)
        return vals.reshape(n, 1, 1)

    def weight_blocks(self, a):
        return {g[0]: np.array([[c]], dtype=complex)
                for g, c in a.terms.items()}

    @staticmethod
    def from_samples(values, band):
        """Fourier coefficients |m| <= band of sampled symbol values."""
        n = len(values)
        coeffs = np.fft.fft(np.asarray(values, dtype=complex)) / n
        out = {}
        for m in range(-band, band + 1):
            c = coeffs[m % n]
            if c != 0:
                out[m] = c
        return out


class RotationSystem:
    """Rational rotation algebra in its q x q clock-shift representation.

    Elements are weight decompositions {m: block} where the circle acts
    on weight m with character e^{2 pi i m t}; the shift generator V has
    weight one and the clock generator has weight zero.  The invariant
    trace is the normalized matrix trace of the weight-zero block.
    """

    kind = "rotation"

    def __init__(self, p, q):
        if q < 1:
            raise ValueError("q must be positive")
        self.p = p
        self.q = q
        self.rep_dim = q
        omega = np.exp(TWO_PI_I * p / q)
        self.clock = np.diag(omega ** np.arange(q))
        self.shift = np.roll(np.eye(q, dtype=complex), 1, axis=0)

    def element(self, blocks):
        return {int(m): np.asarray(b, dtype=complex)
                for m, b in blocks.items() if np.any(b)}

    def v(self):
        return {1: self.shift.copy()}

    def u_clock(self):
        return {0: self.clock.copy()}

    def one(self):
        return {0: np.eye(self.q, dtype=complex)}

    def weights(self, a):
        return a

    def weight_blocks(self, a):
        return a

    def delta(self, a):
        return {m: TWO_PI_I * m * b for m, b in a.items() if m}

    def trace(self, a):
        b = a.get(0)
        if b is None:
            return 0j
        return complex(np.trace(b) / self.q)

    def star(self, a):
        return {-m: b.conj().T for m, b in a.items()}

    def mul(self, a, b):
        out = {}
        for m, x in a.items():
            for n, y in b.items():
                k = m + n
                xy = x @ y
                out[k] = out.get(k, 0) + xy
        return {m: b for m, b in out.items() if np.any(b)}

    def samples(self, a, n=64):
        x = np.arange(n) / n
        vals = np.zeros((n, self.q, self.q), dtype=complex)
        for m, b in a.items():
            vals += np.exp(TWO_PI_I * m * x)[:, None, None] * b
        return vals


def unitary_residual(system, u):
    uu = system.mul(system.star(u), u)
    one = system.one()
    keys = set(system.weights(uu)) | set(system.weights(one))
    worst = 0.0
    for k in keys:
        a = np.asarray(system.weight_blocks(uu).get(
            k, np.zeros((system.rep_dim, system.rep_dim))))
        b = np.asarray(system.weight_blocks(one).get(
            k, np.zeros((system.rep_dim, system.rep_dim))))
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


class ToeplitzProblem:
    """Assembled compressions of the acting symbol on modes [0, F_c]."""

    def __init__(self, system, u, fc, eps_k=1e-6, blocks=None,
                 bandwidth=0):
        self.system = system
        self.u = u
        self.fc = fc
        self.eps_k = eps_k
        self.blocks = blocks
        self.bandwidth = bandwidth


def assemble_toeplitz(system, u, fc, eps_k=1e-6, tol=1e-8):
    """Compression matrices of the action of u onto modes 0..F_c.

    For the circle system one scalar Toeplitz matrix per grid point is
    produced (they are diagonal-phase conjugates of each other); matrix
    systems give a single block Toeplitz matrix.  Entries depend only on
    the mode difference.
    """
    res = unitary_residual(system, u)
    if res > tol:
        raise NotUnitary(f"unitarity residual {res:.3g} > {tol}")
    weights = system.weight_blocks(u)
    band = max((abs(m) for m in weights), default=0)
    d = system.rep_dim
    size = fc + 1
    blocks = []
    if system.kind == "circle":
        ys = np.arange(system.grid_n) / system.grid_n
        base = {m: c[0, 0] for m, c in weights.items()}
        for y in ys:
            mat = np.zeros((size, size), dtype=complex)
            for m, c in base.items():
                cy = c * np.exp(TWO_PI_I * m * y)
                # weight m raises the mode index by m
                for k in range(size):
                    j = k + m
                    if 0 <= j < size:
                        mat[j, k] = cy
            blocks.append(mat)
    else:
        mat = np.zeros((size * d, size * d), dtype=complex)
        for m, blk in weights.items():
            for k in range(size):
                j = k + m
                if 0 <= j < size:
                    mat[j * d:(j + 1) * d, k * d:(k + 1) * d] = blk
        blocks.append(mat)
    return ToeplitzProblem(system, u, fc, eps_k, blocks, band)


def _mode_mass_top(vec, d, size, margin):
    """Fraction of l2 mass in the top `margin` share of the mode range."""
    v = np.abs(np.asarray(vec).reshape(size, d)) ** 2
    per_mode = v.sum(axis=1)
    cut = int(np.floor(size * (1.0 - margin)))
    total = per_mode.sum()
    if total == 0:
        return 0.0
    return float(per_mode[cut:].sum() / total)


def _block_index(mat, d, eps_k, margin):
    size = mat.shape[0] // d
    uu, sv, vh = np.linalg.svd(mat)
    small = sv < eps_k
    above = sv[~small]
    if len(above) and above.min() < 10 * eps_k:
        raise IllConditioned(
            f"singular value {above.min():.3g} within 10x of the kernel "
            f"threshold {eps_k:g}")
    ker = 0
    for i in np.nonzero(small)[0]:
        if _mode_mass_top(vh[i].conj(), d, size, margin) <= 0.5:
            ker += 1
    coker = 0
    for i in np.nonzero(small)[0]:
        if _mode_mass_top(uu[:, i], d, size, margin) <= 0.5:
            coker += 1
    return ker - coker


def tau_index(tp, margin=0.1):
    """Trace-weighted kernel-minus-cokernel defect of the compression.

    Kernel and cokernel vectors are read from singular values below the
    threshold; vectors whose mass sits in the top margin of the mode
    window are finite-section artifacts and are not counted.  The result
    is normalized by the trace: grid average for the circle system,
    matrix-dimension division for matrix systems.
    """
    if tp.fc < 8 * max(tp.bandwidth, 1):
        raise ValueError(
            f"truncation margin violated: F_c = {tp.fc} < 8 x bandwidth "
            f"= {8 * tp.bandwidth}")
    d = tp.system.rep_dim
    if tp.system.kind == "circle":
        vals = [_block_index(b, 1, tp.eps_k, margin) for b in tp.blocks]
        return float(np.mean(vals))
    return _block_index(tp.blocks[0], d, tp.eps_k, margin) / d


def dynsys_formula(system, u, tol=1e-10):
    """The derivation-trace index value -(2 pi i)^{-1} tau(u* delta(u))."""
    du = system.delta(u)
    first = -system.trace(system.mul(system.star(u), du)) / TWO_PI_I
    dus = system.delta(system.star(u))
    second = system.trace(system.mul(u, dus)) / TWO_PI_I
    if abs(first - second) > tol:
        raise ArithmeticError(
            f"the two derivation-trace expressions disagree: "
            f"{first} vs {second}")
    return first


def winding_oracle(samples):
    """Winding number of the determinant loop of sampled matrices.

    Raises PhaseJump when consecutive phases differ by pi or more, which
    means the sampling is too coarse to trust.
    """
    arr = np.asarray(samples, dtype=complex)
    if arr.ndim == 1:
        dets = arr
    else:
        dets = np.linalg.det(arr)
    if np.min(np.abs(dets)) < 1e-12:
        raise PhaseJump("determinant loop passes through zero")
    closed = np.concatenate([dets, dets[:1]])
    phases = np.angle(closed[1:] / closed[:-1])
    if np.max(np.abs(phases)) >= np.pi * (1 - 1e-9):
        raise PhaseJump("phase increment >= pi between samples")
    total = float(np.sum(phases) / (2 * np.pi))
    wind = int(round(total))
    if abs(total - wind) > 1e-6:
        raise PhaseJump(f"winding {total} is not close to an integer")
    return wind


def winding_index(system, u, n_samples=512):
    """Sign-adjusted oracle prediction for the tau-index of u."""
    w = winding_oracle(system.samples(u, n_samples))
    return -w / system.rep_dim
