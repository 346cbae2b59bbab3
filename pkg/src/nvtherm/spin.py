"""Spin-1 Hamiltonian of the NV- center with 14N hyperfine coupling.

The electron spin (S = 1) couples to the host 14N nuclear spin (I = 1)
giving a 9-dimensional product space.  Basis ordering is
``|m_s> x |m_I>`` with both quantum numbers running +1, 0, -1, i.e. index
``3 * i_s + i_n``.  All couplings are in MHz.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ContractViolationError,
    InvalidParameterError,
    LabeledDegeneracyError,
)

_SQ2 = 1.0 / np.sqrt(2.0)

# Spin-1 operators in the (+1, 0, -1) basis
SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128) * _SQ2
SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=np.complex128) * _SQ2
SZ = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
for _op in (SX, SY, SZ):
    _op.setflags(write=False)


def spin_operators():
    """Return the spin-1 operator triple ``(Sx, Sy, Sz)`` (read-only 3x3 arrays)."""
    return SX, SY, SZ


@dataclass(frozen=True)
class SpinParams:
    """Zero-field Hamiltonian parameters of one electronic level (MHz).

    Attributes
    ----------
    d : float
        Axial zero-field splitting.
    e : float
        Transverse (strain) splitting.
    a_par : float
        Axial hyperfine coupling to the 14N nucleus.
    a_perp : float
        Transverse hyperfine coupling.
    """

    d: float
    e: float
    a_par: float
    a_perp: float

    def __post_init__(self):
        for name in ("d", "e", "a_par", "a_perp"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def build_hamiltonian(params):
    """Assemble the 9x9 zero-field Hamiltonian.

    ``H = d (Sz^2 - 2/3) + e (Sy^2 - Sx^2) + a_par Sz Iz
    + a_perp (Sx Ix + Sy Iy)`` acting on the electron (x) nucleus product
    space.  The result is exactly Hermitian (in fact real symmetric) and
    traceless, returned read-only.
    """
    p = params
    eye3 = np.eye(3, dtype=np.complex128)
    h = p.d * np.kron(SZ @ SZ - (2.0 / 3.0) * eye3, eye3)
    h += p.e * np.kron(SY @ SY - SX @ SX, eye3)
    h += p.a_par * np.kron(SZ, SZ)
    h += p.a_perp * (np.kron(SX, SX) + np.kron(SY, SY))
    h.setflags(write=False)
    return h


def eigh(h, tol=1e-12, max_sweeps=100):
    """Eigenvalues and eigenvectors of a Hermitian matrix.

    Validates Hermiticity to ``1e-12`` relative to the Frobenius norm and
    then runs the cyclic Jacobi solver.  Raises
    :class:`ContractViolationError` for non-Hermitian input.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {h.shape}")
    norm = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > 1e-12 * max(norm, 1.0):
        raise ContractViolationError("matrix is not Hermitian")
    return kernels.jacobi_eigh(h, tol=tol, max_sweeps=max_sweeps)


def eigenvalues(h, **kwargs):
    """Ascending eigenvalues of a Hermitian matrix (see :func:`eigh`)."""
    return eigh(h, **kwargs)[0]


@dataclass(frozen=True)
class TransitionLine:
    """One labeled spin transition out of the m_s = 0 manifold.

    Attributes
    ----------
    frequency_mhz : float
        Transition frequency (positive for d > 0 levels).
    m_i : int
        Nuclear spin projection of the manifold (-1, 0, +1).
    branch : str
        ``"lower"`` or ``"upper"`` electron branch.
    """

    frequency_mhz: float
    m_i: int
    branch: str


@dataclass(frozen=True)
class TransitionSet:
    """The six labeled transitions of one electronic level."""

    lines: tuple

    def frequencies(self):
        """All transition frequencies as an array, sorted ascending."""
        return np.sort(np.array([ln.frequency_mhz for ln in self.lines]))

    def splitting(self, m_i):
        """Upper-minus-lower branch splitting within one nuclear manifold."""
        by_branch = {ln.branch: ln.frequency_mhz for ln in self.lines if ln.m_i == m_i}
        return by_branch["upper"] - by_branch["lower"]


_MI_VALUES = (1, 0, -1)


def _component_weights(vec):
    """Summed probability weight per electron and per nuclear projection."""
    prob = np.abs(vec) ** 2
    grid = prob.reshape(3, 3)
    return grid.sum(axis=1), grid.sum(axis=0)


def _assign_nuclear_labels(indices, w, v, need, scale):
    """Assign m_I labels within one electron manifold.

    ``need`` maps m_I -> how many levels must carry that label.  Levels with
    a dominant (> 0.5) nuclear weight claim their label directly.  A level
    without a dominant weight can only be labeled when it is
    eigenvalue-degenerate with other manifold members, because then any
    rotation within the degenerate cluster is an equally valid eigenbasis
    and the reported frequencies do not depend on the label choice; the
    label is picked by the cluster's summed nuclear occupancy.  Genuine
    non-degenerate mixing raises :class:`LabeledDegeneracyError`.
    """
    need = dict(need)
    labels = {}
    ambiguous = []
    nuclear = {}
    for idx in indices:
        wn = nuclear.setdefault(idx, _component_weights(v[:, idx])[1])
        mi = _MI_VALUES[int(np.argmax(wn))]
        if wn.max() > 0.5 and need.get(mi, 0) > 0:
            labels[idx] = mi
            need[mi] -= 1
        else:
            ambiguous.append(idx)
    # Degeneracy tolerance relative to the spectral spread: label choices
    # inside a cluster move reported frequencies by at most the cluster
    # width, so anything below ~1e-5 of the spectrum is inconsequential.
    tol = 1e-5 * scale
    handled = set()
    for idx in ambiguous:
        if idx in handled:
            continue
        cluster = [other for other in indices if abs(w[idx] - w[other]) <= tol]
        if len(cluster) < 2:
            raise LabeledDegeneracyError(
                "eigenstate mixing prevents unambiguous m_I labeling",
                eigenvalues=w,
            )
        # The cluster spans a (near-)degenerate subspace; its summed nuclear
        # occupancy says how many members belong to each manifold, minus any
        # members that already claimed a label directly.
        occupancy = dict(
            zip(_MI_VALUES, sum(nuclear[other] for other in cluster))
        )
        for other in cluster:
            if other in labels:
                occupancy[labels[other]] -= 1.0
        for other in cluster:
            if other in labels:
                continue
            choices = [mi for mi in _MI_VALUES if need.get(mi, 0) > 0]
            choices.sort(key=lambda mi: -occupancy[mi])
            if not choices or occupancy[choices[0]] <= 0.25:
                raise LabeledDegeneracyError(
                    "nuclear label multiplicities cannot be satisfied",
                    eigenvalues=w,
                )
            labels[other] = choices[0]
            need[choices[0]] -= 1
            occupancy[choices[0]] -= 1.0
            handled.add(other)
    return labels


def transition_frequencies(params):
    """Labeled transition frequencies from the m_s = 0 manifold.

    Diagonalizes the full Hamiltonian, groups eigenstates by dominant
    electron projection, labels each group member by dominant nuclear
    projection, and returns the six ``m_s = 0 -> lower/upper`` transition
    frequencies per nuclear manifold.  Raises
    :class:`LabeledDegeneracyError` when strong state mixing makes the
    labeling ambiguous (the error carries the raw eigenvalues).
    """
    h = build_hamiltonian(params)
    w, v = kernels.jacobi_eigh(h)
    scale = max(float(w.max() - w.min()), 1.0)

    zero_group = []
    pm_group = []
    for idx in range(9):
        we, _ = _component_weights(v[:, idx])
        if we[1] > 0.5:
            zero_group.append(idx)
        else:
            pm_group.append(idx)
    if len(zero_group) != 3:
        raise LabeledDegeneracyError(
            "could not isolate the m_s = 0 manifold", eigenvalues=w
        )

    zero_labels = _assign_nuclear_labels(
        zero_group, w, v, {1: 1, 0: 1, -1: 1}, scale
    )
    pm_labels = _assign_nuclear_labels(pm_group, w, v, {1: 2, 0: 2, -1: 2}, scale)

    lines = []
    for mi in _MI_VALUES:
        base = [idx for idx, lab in zero_labels.items() if lab == mi][0]
        pair = sorted(
            (idx for idx, lab in pm_labels.items() if lab == mi),
            key=lambda idx: w[idx],
        )
        for branch, idx in zip(("lower", "upper"), pair):
            freq = w[idx] - w[base]
            if freq <= 0.0:
                raise ContractViolationError(
                    "non-positive transition frequency; level ordering assumes d > |e|"
                )
            lines.append(TransitionLine(freq, mi, branch))
    return TransitionSet(tuple(lines))


def average_splitting(e_es, a_par):
    """Thermally averaged half-splitting of the six-line resonance pattern.

    Weighted average ``e/3 + (2/3) sqrt(a_par^2 + e^2)`` of the m_I = 0
    manifold half-splitting ``e`` and the m_I = +-1 half-splittings
    ``sqrt(a_par^2 + e^2)`` (secular hyperfine).
    """
    if not (np.isfinite(e_es) and np.isfinite(a_par)):
        raise InvalidParameterError("e_es and a_par must be finite")
    if e_es < 0.0:
        raise InvalidParameterError(f"e_es must be non-negative, got {e_es}")
    return e_es / 3.0 + (2.0 / 3.0) * np.sqrt(a_par * a_par + e_es * e_es)


def brute_force_average_splitting(d, e, a_par, a_perp=0.0):
    """Average half-splitting computed from the labeled 9x9 spectrum.

    Serves as the independent oracle for :func:`average_splitting`: builds
    the full Hamiltonian, labels the transitions, and averages the
    per-manifold half-splittings with weights 1/3 (m_I = 0) and 2/3
    (m_I = +-1).  With ``a_perp = 0`` this matches the analytic form to
    machine precision; transverse hyperfine shifts it at order
    ``a_perp^2 / d``.
    """
    ts = transition_frequencies(SpinParams(d, e, a_par, a_perp))
    s0 = ts.splitting(0)
    s1 = ts.splitting(1)
    sm1 = ts.splitting(-1)
    return 0.5 * (s0 / 3.0 + (2.0 / 3.0) * 0.5 * (s1 + sm1))


@dataclass(frozen=True)
class OdmrLineModel:
    """Parametric resonance-dip model for synthesis and fitting.

    Attributes
    ----------
    centers : tuple of float
        Line centers (MHz).
    widths : tuple of float
        Full widths at half maximum (MHz), all positive.
    contrasts : tuple of float
        Fractional dip depths in [0, 1).
    baseline : float
        Off-resonance count rate (counts/s).
    """

    centers: tuple
    widths: tuple
    contrasts: tuple
    baseline: float

    def __post_init__(self):
        n = len(self.centers)
        if len(self.widths) != n or len(self.contrasts) != n:
            raise InvalidParameterError("centers, widths, contrasts must align")
        if n == 0:
            raise InvalidParameterError("at least one line is required")
        values = (*self.centers, *self.widths, *self.contrasts, self.baseline)
        if not all(np.isfinite(x) for x in values):
            raise InvalidParameterError("line parameters must be finite")
        if any(w <= 0 for w in self.widths):
            raise InvalidParameterError("widths must be positive")
        if any(not 0.0 <= c < 1.0 for c in self.contrasts):
            raise InvalidParameterError("contrasts must lie in [0, 1)")
        if self.baseline <= 0:
            raise InvalidParameterError("baseline must be positive")

    def packed(self):
        """Parameters in kernel order: baseline, then (center, width, contrast) per line."""
        params = [self.baseline]
        for c, w, con in zip(self.centers, self.widths, self.contrasts):
            params.extend((c, w, con))
        return np.array(params)


def lines_from_transitions(transitions, width, contrast, baseline):
    """Build an :class:`OdmrLineModel` with one dip per labeled transition."""
    centers = tuple(sorted(ln.frequency_mhz for ln in transitions.lines))
    n = len(centers)
    return OdmrLineModel(centers, (width,) * n, (contrast,) * n, baseline)


def synthesize_odmr(lines, grid, exposure=1.0):
    """Noiseless resonance spectrum of ``lines`` on a frequency grid.

    Returns a :class:`nvtherm.spectra.Spectrum` whose counts are the dip
    profile times ``exposure``.
    """
    from .spectra import Spectrum

    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise InvalidParameterError("grid must be strictly increasing, length >= 2")
    rate = kernels.odmr_profile(grid, lines.packed(), len(lines.centers))
    return Spectrum(axis=grid, counts=rate * exposure, exposure=exposure,
                    axis_unit="MHz")
