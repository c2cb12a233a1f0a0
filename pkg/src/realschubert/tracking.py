"""Homotopy continuation: total-degree solves, parameter sweeps, and the
degeneration probe toward the curve origin.

Paths are tracked in batches with vectorized numpy arithmetic (Euler
predictor, Newton corrector, adaptive step halving/doubling); endpoints are
Newton-refined in doubles and, when ill-conditioned or nearly colliding,
re-polished in extended precision against the exact Fraction coefficients.
The merged output is canonicalized by lexicographic sort, so path order
never affects results.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Optional

import mpmath as mp
import numpy as np

from .errors import (
    PathCrossingError,
    SpecValidationError,
)
from .partitions import degree, pieri
from .systems import (
    CompiledKernel,
    LocalChart,
    PolynomialSystem,
    SchubertProblem,
    build_system,
)
from .osculating import flag_at_end


class PathStatus(IntEnum):
    RUNNING = 0
    CONVERGED = 1
    DIVERGED = 2
    SINGULAR = 3
    STEP_FAILURE = 4
    UNREACHED = 5


@dataclass
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-10
    corrector_tol: float = 1e-9
    max_corrector_iters: int = 3
    divergence_bound: float = 1e8
    refine_tol: float = 1e-12
    dedup_tol: float = 1e-6
    minor_tol: float = 1e-8
    step_growth_after: int = 5
    max_step: float = 0.2
    max_steps: int = 20000
    chunk_size: int = 4096
    mp_digits: int = 60
    mp_sigma_threshold: float = 1e-6
    mp_distinct_tol: float = 1e-12
    limit_rank_tol: float = 1e-4
    sweep_segments: int = 8
    chart_retries: int = 2

    def __post_init__(self):
        if self.min_step >= self.initial_step:
            raise SpecValidationError("min step must be below initial step")
        for name in ("corrector_tol", "refine_tol", "dedup_tol", "minor_tol"):
            if getattr(self, name) <= 0:
                raise SpecValidationError(f"{name} must be positive")

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class TrackedPath:
    start: np.ndarray
    status: PathStatus
    endpoint: Optional[np.ndarray]
    residual: float
    steps: int


@dataclass
class Solution:
    """A verified endpoint: chart coordinates, orthonormal row
    representative, residuals, and Jacobian conditioning data."""

    x: Optional[np.ndarray]
    representative: np.ndarray
    residual: float
    minor_residual: float
    sigma_min: float
    sigma_max: float
    imag_mag: float
    refined_mp: bool = False

    def coords(self) -> np.ndarray:
        return self.x if self.x is not None else self.representative.ravel()


@dataclass
class SolutionSet:
    problem: SchubertProblem
    solutions: list
    expected: int
    seed: int
    config: TrackerConfig
    dedup_tol: float
    path_stats: dict = field(default_factory=dict)
    spurious: int = 0
    ambient_change: Optional[np.ndarray] = None

    @property
    def found(self) -> int:
        return len(self.solutions)

    @property
    def deficiency(self) -> int:
        return self.found - self.expected

    @property
    def unreached(self) -> int:
        return self.path_stats.get("unreached", 0)


# ------------------------------------------------------------- homotopies


class TotalDegreeHomotopy:
    """(1-t) * gamma * (x_i^{d_i} - 1) + t * F(x)."""

    def __init__(self, kernel: CompiledKernel, degrees, gamma: complex):
        self.kernel = kernel
        self.d = np.array(degrees)
        self.gamma = gamma
        self.n = kernel.nvars

    def eval(self, X, t):
        F, JF = self.kernel.residual_jacobian(X)
        Xd = X**self.d
        G = Xd - 1.0
        dG = self.d * X ** np.maximum(self.d - 1, 0)
        t1 = t[:, None]
        H = (1 - t1) * self.gamma * G + t1 * F
        Jx = t[:, None, None] * JF
        idx = np.arange(self.n)
        Jx[:, idx, idx] += (1 - t1) * self.gamma * dG
        Ht = F - self.gamma * G
        return H, Jx, Ht


class LinearHomotopy:
    """(1-t) * gamma * F0(x) + t * F1(x) between two same-shape systems."""

    def __init__(self, k0: CompiledKernel, k1: CompiledKernel, gamma: complex):
        self.k0 = k0
        self.k1 = k1
        self.gamma = gamma

    def eval(self, X, t):
        F0, J0 = self.k0.residual_jacobian(X)
        F1, J1 = self.k1.residual_jacobian(X)
        t1 = t[:, None]
        H = (1 - t1) * self.gamma * F0 + t1 * F1
        Jx = (1 - t[:, None, None]) * self.gamma * J0 + t[:, None, None] * J1
        Ht = F1 - self.gamma * F0
        return H, Jx, Ht


def _safe_solve(J, B):
    """Batched linear solve that never raises: returns (solution, bad_mask)."""
    n = B.shape[1]
    bad = ~(
        np.isfinite(J).all(axis=(1, 2)) & np.isfinite(B).all(axis=1)
    )
    if bad.any():
        J = J.copy()
        B = B.copy()
        J[bad] = np.eye(n)
        B[bad] = 0
    try:
        out = np.linalg.solve(J, B[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(B)
        for i in range(len(B)):
            try:
                out[i] = np.linalg.solve(J[i], B[i])
            except np.linalg.LinAlgError:
                out[i] = 0
                bad[i] = True
    finite = np.isfinite(out).all(axis=1)
    out[~finite] = 0
    return out, bad | ~finite


def _track_chunk(homotopy, starts, cfg: TrackerConfig):
    X = np.array(starts, dtype=complex)
    P, n = X.shape
    t = np.zeros(P)
    h = np.full(P, cfg.initial_step)
    streak = np.zeros(P, dtype=int)
    steps = np.zeros(P, dtype=int)
    stat = np.full(P, PathStatus.RUNNING, dtype=int)
    for _ in range(cfg.max_steps):
        act = np.flatnonzero(stat == PathStatus.RUNNING)
        if act.size == 0:
            break
        ta = t[act]
        ha = np.minimum(h[act], 1.0 - ta)
        Xa = X[act]
        _, Jx, Ht = homotopy.eval(Xa, ta)
        dx, bad0 = _safe_solve(Jx, Ht)
        Xc = Xa - ha[:, None] * dx
        tp = ta + ha
        ok = ~bad0
        small = np.zeros(act.size, dtype=bool)
        for _ in range(cfg.max_corrector_iters):
            Hc, Jc, _ = homotopy.eval(Xc, tp)
            delta, bad = _safe_solve(Jc, Hc)
            Xc = Xc - delta
            ok &= ~bad
            small = ok & (
                np.linalg.norm(delta, axis=1)
                <= cfg.corrector_tol * (1 + np.linalg.norm(Xc, axis=1))
            )
        accept = small & np.isfinite(Xc).all(axis=1)
        ia = act[accept]
        X[ia] = Xc[accept]
        t[ia] = tp[accept]
        steps[ia] += 1
        streak[ia] += 1
        grow = ia[streak[ia] >= cfg.step_growth_after]
        h[grow] = np.minimum(h[grow] * 2, cfg.max_step)
        streak[grow] = 0
        ir = act[~accept]
        h[ir] /= 2
        streak[ir] = 0
        stat[ir[h[ir] < cfg.min_step]] = PathStatus.STEP_FAILURE
        norms = np.linalg.norm(X[act], axis=1)
        # certifiably diverging: past the hard bound, or blowing up with no
        # room left before t = 1
        div = (norms > cfg.divergence_bound) | (
            (norms > 1e5) & (1 - t[act] < 1e-5)
        )
        stat[act[div]] = PathStatus.DIVERGED
        done = act[(t[act] >= 1.0 - 1e-14) & (stat[act] == PathStatus.RUNNING)]
        stat[done] = PathStatus.CONVERGED
    stat[stat == PathStatus.RUNNING] = PathStatus.UNREACHED
    return X, stat, steps


def track(homotopy, starts, cfg: TrackerConfig):
    """Track every start point; chunked to bound memory."""
    starts = np.asarray(starts, dtype=complex)
    if len(starts) == 0:
        return starts, np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    outs = []
    for i in range(0, len(starts), cfg.chunk_size):
        outs.append(_track_chunk(homotopy, starts[i : i + cfg.chunk_size], cfg))
    X = np.concatenate([o[0] for o in outs])
    stat = np.concatenate([o[1] for o in outs])
    steps = np.concatenate([o[2] for o in outs])
    return X, stat, steps


def newton_refine(kernel: CompiledKernel, X, tol, iters=50):
    """Batched Newton against the target system; returns points and the
    max-norm residuals."""
    X = np.array(X, dtype=complex)
    if X.size == 0:
        return X, np.zeros(0)
    for _ in range(iters):
        F, J = kernel.residual_jacobian(X)
        delta, _ = _safe_solve(J, F)
        X = X - delta
        if np.all(
            np.linalg.norm(delta, axis=1)
            <= 1e-16 * (1 + np.linalg.norm(X, axis=1))
        ):
            break
    res = np.abs(kernel.residual(X)).max(axis=1)
    return X, res


# ------------------------------------------------------- extended precision


class MPRefiner:
    """Newton polish against the exact Fraction coefficients in mpmath."""

    def __init__(self, system: PolynomialSystem, digits: int):
        self.digits = digits
        self.n = system.nvars
        eqs = system.equations
        self.eq_terms = [list(eq.terms.items()) for eq in eqs]
        self.jac_terms = [
            [list(eq.diff(v).terms.items()) for v in range(self.n)] for eq in eqs
        ]

    @staticmethod
    def _eval_terms(terms, x):
        total = mp.mpc(0)
        for e, c in terms:
            t = mp.mpf(c.numerator) / mp.mpf(c.denominator)
            for i, k in enumerate(e):
                if k:
                    t = t * x[i] ** k
            total += t
        return total

    def refine(self, x0, iters=60):
        """Returns (refined point as complex128 array, residual, mp point)."""
        with mp.workdps(self.digits):
            x = [mp.mpc(complex(v)) for v in np.asarray(x0, dtype=complex)]
            for _ in range(iters):
                F = mp.matrix([self._eval_terms(t, x) for t in self.eq_terms])
                J = mp.matrix(
                    [
                        [self._eval_terms(self.jac_terms[i][v], x) for v in range(self.n)]
                        for i in range(self.n)
                    ]
                )
                try:
                    delta = mp.lu_solve(J, F)
                except Exception:
                    break
                x = [xi - di for xi, di in zip(x, delta)]
                if max(abs(d) for d in delta) < mp.mpf(10) ** (-self.digits + 8):
                    break
            res = max(
                abs(self._eval_terms(t, x)) for t in self.eq_terms
            )
            out = np.array([complex(v) for v in x])
            return out, float(res), x


# ------------------------------------------------------------- start system


def total_degree_start(system: PolynomialSystem):
    """Start system x_i^{d_i} = 1 with its roots-of-unity start points.

    Returns (degrees, points); the number of points is the Bezout bound
    prod(d_i)."""
    degrees = system.degrees()
    roots = [
        [np.exp(2j * np.pi * k / d) for k in range(d)] for d in degrees
    ]
    points = np.array(
        [list(combo) for combo in itertools.product(*roots)], dtype=complex
    )
    return degrees, points


# ------------------------------------------------------------------- solve


def _orthonormal_representative(chart: LocalChart, x):
    H = chart.h_values(np.asarray(x, dtype=complex))
    Q, R = np.linalg.qr(H.conj().T)
    ph = np.diagonal(R).copy()
    ph = np.where(ph == 0, 1.0, ph)
    ph = ph / np.abs(ph)
    Q = Q * ph.conj()
    return Q.conj().T


def _sort_key(x):
    return tuple(val for c in x for val in (round(c.real, 9), round(c.imag, 9)))


def _cluster(points, tol):
    """Greedy clustering in lexicographic order; returns list of index lists."""
    order = sorted(range(len(points)), key=lambda i: _sort_key(points[i]))
    reps, clusters = [], []
    for i in order:
        for j, r in enumerate(reps):
            if np.linalg.norm(points[i] - r) <= tol * (
                1 + np.linalg.norm(r)
            ):
                clusters[j].append(i)
                break
        else:
            reps.append(points[i])
            clusters.append([i])
    return clusters


def _finish_solutions(system, endpoints, cfg, refiner=None):
    """Refine, dedup (with extended-precision collision handling), verify
    against the full minor sets, and package Solution records."""
    kernel = system.kernel()
    chart = system.chart
    X, res = newton_refine(kernel, endpoints, cfg.refine_tol)
    keep = res < cfg.refine_tol
    X = X[keep]
    if len(X) == 0:
        return [], 0
    # conditioning; decide who gets an extended-precision pass
    _, J = kernel.residual_jacobian(X)
    svals = np.linalg.svd(J, compute_uv=False)
    sig_min = svals[:, -1]
    need_mp = sig_min < cfg.mp_sigma_threshold
    clusters = _cluster(list(X), 10 * cfg.dedup_tol)
    for cl in clusters:
        if len(cl) > 1:
            need_mp[cl] = True
    refined_flags = np.zeros(len(X), dtype=bool)
    if need_mp.any():
        if refiner is None:
            refiner = MPRefiner(system, cfg.mp_digits)
        for i in np.flatnonzero(need_mp):
            xi, ri, _ = refiner.refine(X[i])
            if np.isfinite(xi).all() and ri < 1e-20:
                X[i] = xi
                refined_flags[i] = True
    # dedup: full-precision distinct test inside collision clusters
    clusters = _cluster(list(X), cfg.dedup_tol)
    chosen = []
    for cl in clusters:
        if len(cl) == 1:
            chosen.append(cl[0])
            continue
        sub = []
        for i in cl:
            if all(
                np.linalg.norm(X[i] - X[j]) > cfg.mp_distinct_tol for j in sub
            ):
                sub.append(i)
        chosen.extend(sub)
    # verify against the unsquared minors; drop squaring artifacts
    sols = []
    spurious = 0
    res_final = np.abs(kernel.residual(X)).max(axis=1) if len(X) else []
    _, Jf = kernel.residual_jacobian(X)
    sv = np.linalg.svd(Jf, compute_uv=False)
    for i in chosen:
        mres = system.minor_residual(X[i])
        if mres >= cfg.minor_tol:
            spurious += 1
            continue
        x = X[i]
        scale = max(1.0, np.abs(x).max())
        sols.append(
            Solution(
                x=x,
                representative=_orthonormal_representative(chart, x),
                residual=float(res_final[i]),
                minor_residual=float(mres),
                sigma_min=float(sv[i, -1]),
                sigma_max=float(sv[i, 0]),
                imag_mag=float(np.abs(x.imag).max() / scale),
                refined_mp=bool(refined_flags[i]),
            )
        )
    sols.sort(key=lambda s: _sort_key(s.x))
    return sols, spurious


def solve(
    problem: SchubertProblem,
    config: Optional[TrackerConfig] = None,
    seed: int = 0,
) -> SolutionSet:
    """All isolated solutions of the problem by total-degree homotopy.

    Endpoints are refined, deduplicated, and verified against the full
    (unsquared) minor conditions; the verified count is reported alongside
    the combinatorial degree.  On a count mismatch the solve is retried in
    randomly rotated ambient coordinates before reporting the deficiency.
    """
    cfg = config or TrackerConfig()
    expected = problem.expected_count()
    best = None
    for attempt in range(cfg.chart_retries + 1):
        if attempt == 0:
            Q = None
        else:
            rng = np.random.default_rng([seed, 7, attempt])
            A = rng.standard_normal((problem.box.ambient, problem.box.ambient))
            Q, _ = np.linalg.qr(A)
        result = _solve_in_frame(problem, cfg, seed, Q, expected)
        if best is None or abs(result.deficiency) < abs(best.deficiency):
            best = result
        if best.deficiency == 0:
            break
    return best


def _solve_in_frame(problem, cfg, seed, Q, expected):
    system = build_system(problem, seed=seed, ambient_change=Q)
    kernel = system.kernel()
    rng = np.random.default_rng([seed, 1])
    gamma = np.exp(2j * np.pi * rng.uniform())
    degrees, starts = total_degree_start(system)
    ends, stat, steps = track(
        TotalDegreeHomotopy(kernel, degrees, gamma), starts, cfg
    )
    conv = stat == PathStatus.CONVERGED
    sols, spurious = _finish_solutions(system, ends[conv], cfg)
    if Q is not None:
        sols = _map_solutions_back(problem, sols, Q)
    stats = {
        "paths": int(len(starts)),
        "converged": int(conv.sum()),
        "diverged": int((stat == PathStatus.DIVERGED).sum()),
        "step_failures": int((stat == PathStatus.STEP_FAILURE).sum()),
        "unreached": int((stat == PathStatus.UNREACHED).sum()),
        "total_steps": int(steps.sum()),
    }
    return SolutionSet(
        problem=problem,
        solutions=sols,
        expected=expected,
        seed=seed,
        config=cfg,
        dedup_tol=cfg.dedup_tol,
        path_stats=stats,
        spurious=spurious,
        ambient_change=Q,
    )


def _map_solutions_back(problem, sols, Q):
    """Express solutions found in rotated ambient coordinates in the
    default chart of the original frame."""
    chart = LocalChart(problem.box.m, problem.box.p)
    out = []
    for s in sols:
        rep_orig = s.representative @ Q.T
        try:
            x = chart.from_full(rep_orig)
        except np.linalg.LinAlgError:
            x = None
        rep = (
            _orthonormal_representative(chart, x)
            if x is not None
            else rep_orig
        )
        scale = max(1.0, np.abs(rep).max())
        out.append(
            Solution(
                x=x,
                representative=rep,
                residual=s.residual,
                minor_residual=s.minor_residual,
                sigma_min=s.sigma_min,
                sigma_max=s.sigma_max,
                imag_mag=float(np.abs(rep.imag).max() / scale)
                if x is None
                else float(
                    np.abs(x.imag).max() / max(1.0, np.abs(x).max())
                ),
                refined_mp=s.refined_mp,
            )
        )
    out.sort(key=lambda s: _sort_key(s.coords()))
    return out


# --------------------------------------------------------- parameter sweep


def parameter_sweep(
    problem_from: SchubertProblem,
    problem_to: SchubertProblem,
    solutions: SolutionSet,
    config: Optional[TrackerConfig] = None,
    seed: Optional[int] = None,
    collision_tol: Optional[float] = None,
) -> SolutionSet:
    """Continue the known solutions along the straight-line path between the
    two parameter vectors (same box and condition list).

    The line is subdivided into segments; each segment is a linear homotopy
    between the systems built at its ends with identical squaring
    coefficients, so the systems vary continuously.  Failed segments are
    subdivided further.  Endpoint collisions raise PathCrossingError.
    """
    cfg = config or TrackerConfig()
    seed = solutions.seed if seed is None else seed
    _check_same_family(problem_from, problem_to)
    p0 = problem_from.parameters()
    p1 = problem_to.parameters()
    X = np.array([s.x for s in solutions.solutions], dtype=complex)
    if len(X) == 0:
        return SolutionSet(
            problem_to, [], solutions.expected, seed, cfg, cfg.dedup_tol
        )
    if p0 == p1:
        return SolutionSet(
            problem_to,
            list(solutions.solutions),
            solutions.expected,
            seed,
            cfg,
            cfg.dedup_tol,
            path_stats=dict(solutions.path_stats),
        )
    rng = np.random.default_rng([seed, 2])
    gamma = np.exp(2j * np.pi * rng.uniform())
    nseg = cfg.sweep_segments
    frac = [Fraction(j, nseg) for j in range(nseg + 1)]
    failures = 0
    for j in range(nseg):
        pa = [a + frac[j] * (b - a) for a, b in zip(p0, p1)]
        pb = [a + frac[j + 1] * (b - a) for a, b in zip(p0, p1)]
        X, ok = _sweep_segment(
            problem_from, pa, pb, X, cfg, seed, gamma, depth=0
        )
        failures += int((~ok).sum())
        X = X[ok]
    target = build_system(problem_to, seed=seed)
    sols, spurious = _finish_solutions(target, X, cfg)
    tolc = cfg.dedup_tol if collision_tol is None else collision_tol
    pts = [s.x for s in sols]
    for cl in _cluster(pts, tolc):
        # Clusters whose members were all separated in extended precision
        # are certified distinct, not crossings.
        if len(cl) > 1 and not all(sols[i].refined_mp for i in cl):
            raise PathCrossingError(
                f"{len(cl)} sweep endpoints collided within {tolc}"
            )
    return SolutionSet(
        problem_to,
        sols,
        solutions.expected,
        seed,
        cfg,
        cfg.dedup_tol,
        path_stats={"sweep_failures": failures},
        spurious=spurious,
    )


def _check_same_family(a: SchubertProblem, b: SchubertProblem):
    if a.box != b.box or a.at_zero != b.at_zero or a.at_infinity != b.at_infinity:
        raise SpecValidationError("sweep requires identical box and end conditions")
    if a.conditions() != b.conditions():
        raise SpecValidationError("sweep requires an identical condition list")


def _sweep_segment(problem, pa, pb, X, cfg, seed, gamma, depth):
    ka = build_system(problem.with_parameters(pa), seed=seed).kernel()
    kb_sys = build_system(problem.with_parameters(pb), seed=seed)
    kb = kb_sys.kernel()
    ends, stat, _ = track(LinearHomotopy(ka, kb, gamma), X, cfg)
    ends, res = newton_refine(kb, ends, cfg.refine_tol)
    ok = (stat == PathStatus.CONVERGED) & (res < 1e-9)
    if ok.all() or depth >= 10:
        return ends, ok
    # subdivide for the stragglers, keep the successes
    mid = [a + (b - a) / 2 for a, b in zip(pa, pb)]
    if len(set(mid)) != len(mid) or any(x == 0 for x in mid):
        mid = [a + (b - a) * Fraction(33, 64) for a, b in zip(pa, pb)]
    Xbad = X[~ok]
    half1, ok1 = _sweep_segment(problem, pa, mid, Xbad, cfg, seed, gamma, depth + 1)
    half2, ok2 = _sweep_segment(
        problem, mid, pb, half1[ok1], cfg, seed, gamma, depth + 1
    )
    out = ends.copy()
    okout = ok.copy()
    bad_idx = np.flatnonzero(~ok)
    good_sub = bad_idx[ok1][ok2]
    out[good_sub] = half2[ok2]
    okout[good_sub] = True
    return out, okout


# ------------------------------------------------------- degeneration probe


@dataclass
class DegenerationReport:
    problem: SchubertProblem
    which: int
    final_parameter: float
    candidates: list
    assignments: list  # per solution: winning partition or None
    counts: dict
    expected_counts: dict
    conserved: bool
    unresolved: list
    limit_points: np.ndarray


def rank_defect_ratio(H, flag_rows, rank_bound):
    """sigma_(rank_bound+1) / sigma_1 of [H; flag]; small means the rank
    condition holds."""
    M = np.vstack([H, flag_rows])
    sv = np.linalg.svd(M, compute_uv=False)
    if rank_bound >= len(sv):
        return 0.0
    return float(sv[rank_bound] / sv[0])


def _satisfies_schubert_at_zero(chart, x, v, box, tol):
    from .partitions import pad, trim

    H = chart.h_values(np.asarray(x, dtype=complex))
    vp = pad(trim(v), box.p) + (0,)
    worst = 0.0
    for i in range(1, box.p + 1):
        if vp[i - 1] == 0 or vp[i - 1] == vp[i]:
            continue
        j = box.m + i - vp[i - 1]
        flag = flag_at_end(j, box.ambient, 0).as_array()
        worst = max(worst, rank_defect_ratio(H, flag, box.p + j - i))
    return worst < tol, worst


def degeneration_probe(
    problem: SchubertProblem,
    which: int,
    config: Optional[TrackerConfig] = None,
    seed: int = 0,
    floor: float = 1e-8,
) -> DegenerationReport:
    """Push the parameter of condition `which` to 0 geometrically and watch
    the solutions distribute themselves over the Pieri candidates at 0.

    The limit membership test is a rank tolerance check; the observed split
    is compared against the degrees of the limit problems.
    """
    cfg = config or TrackerConfig()
    cond, s0 = problem.special[which]
    sols = solve(problem, cfg, seed)
    current = problem
    s = s0
    others = [p for k, p in enumerate(problem.parameters()) if k != which]
    while abs(float(s)) > floor:
        s = s / 2
        while s in others:  # exact Fraction comparison
            s = s * Fraction(64, 65)
        params = list(current.parameters())
        params[which] = s
        nxt = current.with_parameters(params)
        sols = parameter_sweep(current, nxt, sols, cfg, seed, collision_tol=1e-10)
        current = nxt
    box = problem.box
    candidates = sorted(pieri(problem.at_zero, cond, box))
    chart = LocalChart(box.m, box.p)
    assignments = []
    unresolved = []
    X = np.array([x.x for x in sols.solutions], dtype=complex)
    for i, x in enumerate(X):
        hits = []
        for v in candidates:
            okv, ratio = _satisfies_schubert_at_zero(chart, x, v, box, cfg.limit_rank_tol)
            if okv:
                hits.append((ratio, v))
        if hits:
            assignments.append(min(hits)[1])
        else:
            assignments.append(None)
            unresolved.append(i)
    counts = {v: sum(1 for a in assignments if a == v) for v in candidates}
    remaining = tuple(
        cs for k, cs in enumerate(problem.special) if k != which
    )
    expected = {
        v: degree(
            v, problem.at_infinity, [c for c, _ in remaining], box
        )
        for v in candidates
    }
    conserved = (
        len(sols.solutions) == sols.expected
        and not unresolved
        and counts == expected
    )
    return DegenerationReport(
        problem=problem,
        which=which,
        final_parameter=float(s),
        candidates=candidates,
        assignments=assignments,
        counts=counts,
        expected_counts=expected,
        conserved=conserved,
        unresolved=unresolved,
        limit_points=X,
    )
