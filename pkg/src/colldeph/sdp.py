"""Small dense semidefinite programming solver.

Solves the standard conic pair over block-diagonal matrix variables

    (P)  min <C, X>   s.t.  <A_i, X> = b_i,  X >= 0
    (D)  max b.y      s.t.  sum_i y_i A_i + S = C,  S >= 0

with a primal-dual path-following interior point method (HKM direction,
Mehrotra predictor-corrector, fraction-to-boundary 0.98). Blocks may be real
symmetric ("sym") or complex Hermitian ("herm"); both live in a real
coordinate vector through an orthonormal basis, so inner products and the
Schur complement stay real.

Sized for problems up to a few thousand constraints with blocks of dimension
up to around 64; everything is dense per block and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import DimensionMismatchError, NotHermitianError
from .linalg import is_hermitian


def embed_hermitian(h: np.ndarray) -> np.ndarray:
    """Real symmetric embedding [[Re h, -Im h], [Im h, Re h]].

    PSD iff h is PSD; every eigenvalue of h appears twice and the trace
    doubles, so objective coefficients built on embedded blocks must be
    halved to stay in the complex scale.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise NotHermitianError("embed_hermitian needs a Hermitian input")
    re, im = h.real, h.imag
    top = np.hstack([re, -im])
    bot = np.hstack([im, re])
    return np.vstack([top, bot])


# ---------------------------------------------------------------------------
# orthonormal matrix bases ("vec" coordinates)

class _VecBasis:
    """Orthonormal basis of sym(n, R) or herm(n, C) with index bookkeeping.

    Coordinate layout: diagonal entries first, then sqrt(2) * real parts of
    the strict lower triangle, then (herm only) sqrt(2) * imaginary parts.
    """

    def __init__(self, dim: int, kind: str):
        self.dim = dim
        self.kind = kind
        ilow, jlow = np.tril_indices(dim, -1)
        self.ilow, self.jlow = ilow, jlow
        npairs = ilow.size
        self.vdim = dim + npairs + (npairs if kind == "herm" else 0)
        dtype = complex if kind == "herm" else float
        basis = np.zeros((self.vdim, dim, dim), dtype=dtype)
        r = np.arange(dim)
        basis[r, r, r] = 1.0
        k = dim + np.arange(npairs)
        basis[k, ilow, jlow] = 1 / np.sqrt(2)
        basis[k, jlow, ilow] = 1 / np.sqrt(2)
        if kind == "herm":
            k2 = dim + npairs + np.arange(npairs)
            basis[k2, ilow, jlow] = 1j / np.sqrt(2)
            basis[k2, jlow, ilow] = -1j / np.sqrt(2)
        self.basis = basis
        # entry map G[(p*dim+q), k] = basis[k][p, q]; each column has at most
        # two nonzeros, which makes the Schur-block construction cheap
        bt = basis.reshape(self.vdim, dim * dim).T
        self._g = sp.csc_matrix(bt)
        self._gt = self._g.T.tocsr()

    def scaled_gram(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """K with K[i, j] = Re Tr(B_i L B_j R + B_i R B_j L)/2.

        Satisfies K @ vec(M) = vec((L M R + R M L)/2) for Hermitian M; this
        is the per-block kernel of the interior-point Schur complement.
        """
        d = self.dim
        t1 = np.einsum("qr,tp->pqrt", left, right).reshape(d * d, d * d)
        t2 = np.einsum("qr,tp->pqrt", right, left).reshape(d * d, d * d)
        k = (self._gt @ (t1 + t2)) @ self._g
        k = np.asarray(k.real if self.kind == "herm" else k) / 2
        return (k + k.T) / 2

    def vec(self, m: np.ndarray) -> np.ndarray:
        return self.vec_batch(m[None])[0]

    def vec_batch(self, ms: np.ndarray) -> np.ndarray:
        """(B, n, n) Hermitian stack -> (B, vdim) real coordinates."""
        b = ms.shape[0]
        d, npairs = self.dim, self.ilow.size
        out = np.empty((b, self.vdim))
        r = np.arange(d)
        out[:, :d] = ms[:, r, r].real
        low = ms[:, self.ilow, self.jlow]
        out[:, d:d + npairs] = np.sqrt(2) * low.real
        if self.kind == "herm":
            out[:, d + npairs:] = np.sqrt(2) * low.imag
        return out

    def mat(self, v: np.ndarray) -> np.ndarray:
        d, npairs = self.dim, self.ilow.size
        dtype = complex if self.kind == "herm" else float
        m = np.zeros((d, d), dtype=dtype)
        r = np.arange(d)
        m[r, r] = v[:d]
        low = v[d:d + npairs] / np.sqrt(2)
        if self.kind == "herm":
            low = low + 1j * v[d + npairs:] / np.sqrt(2)
        m[self.ilow, self.jlow] = low
        m[self.jlow, self.ilow] = np.conj(low)
        return m


_BASIS_CACHE: dict = {}


def _basis(dim: int, kind: str) -> _VecBasis:
    key = (dim, kind)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = _VecBasis(dim, kind)
    return _BASIS_CACHE[key]


# ---------------------------------------------------------------------------
# problem container

@dataclass(frozen=True)
class _Block:
    name: str
    dim: int
    kind: str
    offset: int
    vdim: int


class SdpProblem:
    """Block variables, a linear objective, and affine equality constraints.

    Constraints can be added one scalar row at a time (``add_constraint``) or
    as whole matrix relations among blocks (``add_matrix_equality``), which
    appends one row per vec coordinate of the constraint space.
    """

    def __init__(self):
        self.blocks: list[_Block] = []
        self._by_name: dict[str, _Block] = {}
        self._obj: dict[str, np.ndarray] = {}
        self._rows_i: list = []
        self._rows_j: list = []
        self._rows_v: list = []
        self.b: np.ndarray = np.zeros(0)
        self._b_list: list = []
        self.m = 0
        self._total_vdim = 0
        self._compiled = None

    def add_block(self, name: str, dim: int, kind: str = "sym") -> str:
        if kind not in ("sym", "herm"):
            raise DimensionMismatchError(f"unknown block kind {kind!r}")
        if name in self._by_name:
            raise DimensionMismatchError(f"duplicate block {name!r}")
        basis = _basis(dim, kind)
        blk = _Block(name, dim, kind, self._total_vdim, basis.vdim)
        self.blocks.append(blk)
        self._by_name[name] = blk
        self._total_vdim += basis.vdim
        self._compiled = None
        return name

    def _block(self, name: str) -> _Block:
        if name not in self._by_name:
            raise DimensionMismatchError(f"unknown block {name!r}")
        return self._by_name[name]

    def add_objective(self, name: str, coeff: np.ndarray):
        """Accumulate <coeff, X_name> into the objective."""
        blk = self._block(name)
        c = np.asarray(coeff)
        if c.shape != (blk.dim, blk.dim):
            raise DimensionMismatchError(
                f"objective for {name} has shape {c.shape}, expected "
                f"({blk.dim}, {blk.dim})")
        if name in self._obj:
            self._obj[name] = self._obj[name] + c
        else:
            self._obj[name] = c.astype(complex if blk.kind == "herm" else float)
        self._compiled = None

    def add_constraint(self, terms: dict, rhs: float) -> int:
        """One scalar row: sum over blocks of <terms[name], X_name> = rhs."""
        row = self.m
        for name, matrix in terms.items():
            blk = self._block(name)
            v = _basis(blk.dim, blk.kind).vec(np.asarray(
                matrix, dtype=complex if blk.kind == "herm" else float))
            nz = np.nonzero(v)[0]
            self._rows_i.extend([row] * nz.size)
            self._rows_j.extend((blk.offset + nz).tolist())
            self._rows_v.extend(v[nz].tolist())
        self._b_list.append(float(rhs))
        self.m += 1
        self._compiled = None
        return row

    def add_matrix_equality(self, terms, rhs: np.ndarray) -> range:
        """Matrix relation sum_k coeff_k * op_k(X_{name_k}) = rhs.

        ``terms`` is a list of (name, coeff, op) where op is None or a
        self-adjoint linear map given in batched form (it receives a stack of
        basis matrices shaped (B, dim, dim) and must return the same shape).
        Appends vdim rows of the constraint space and returns their range.
        """
        dims = {self._block(name).dim for name, _, _ in terms}
        kinds = {self._block(name).kind for name, _, _ in terms}
        if len(dims) != 1 or len(kinds) != 1:
            raise DimensionMismatchError(
                "matrix equality terms must share one block shape")
        dim, kind = dims.pop(), kinds.pop()
        basis = _basis(dim, kind)
        rhs = np.asarray(rhs, dtype=complex if kind == "herm" else float)
        if rhs.shape != (dim, dim):
            raise DimensionMismatchError(f"rhs shape {rhs.shape} != ({dim},{dim})")
        start = self.m
        rows = np.arange(start, start + basis.vdim)
        for name, coeff, op in terms:
            blk = self._block(name)
            if op is None:
                # identity map: rows hit the block's own coordinates
                self._rows_i.extend(rows.tolist())
                self._rows_j.extend(range(blk.offset, blk.offset + blk.vdim))
                self._rows_v.extend([float(coeff)] * blk.vdim)
            else:
                transformed = basis.vec_batch(op(basis.basis))
                ri, ci = np.nonzero(np.abs(transformed) > 1e-14)
                self._rows_i.extend((start + ri).tolist())
                self._rows_j.extend((blk.offset + ci).tolist())
                self._rows_v.extend((coeff * transformed[ri, ci]).tolist())
        self._b_list.extend(basis.vec(rhs).tolist())
        self.m += basis.vdim
        self._compiled = None
        return range(start, start + basis.vdim)

    # -- compiled data ------------------------------------------------------

    def compile(self):
        if self._compiled is None:
            a = sp.coo_matrix(
                (self._rows_v, (self._rows_i, self._rows_j)),
                shape=(self.m, self._total_vdim)).tocsr()
            c = np.zeros(self._total_vdim)
            for name, mat in self._obj.items():
                blk = self._by_name[name]
                c[blk.offset:blk.offset + blk.vdim] = _basis(blk.dim, blk.kind).vec(mat)
            self.b = np.asarray(self._b_list, dtype=float)
            self._compiled = (a, a.tocsc(), c)
        return self._compiled

    def replace_rhs(self, rows, matrix: np.ndarray) -> "SdpProblem":
        """Light clone sharing the compiled constraint matrix, with the rhs
        rows produced by add_matrix_equality replaced by vec(matrix)."""
        self.compile()
        first = self.blocks[0]
        # rows came from a matrix equality; infer its basis from the length
        for blk in self.blocks:
            if blk.vdim == len(rows):
                basis = _basis(blk.dim, blk.kind)
                break
        else:
            raise DimensionMismatchError("cannot infer constraint-space basis")
        clone = SdpProblem.__new__(SdpProblem)
        clone.__dict__.update(self.__dict__)
        clone._b_list = list(self._b_list)
        vals = basis.vec(np.asarray(matrix,
                                    dtype=complex if basis.kind == "herm" else float))
        b = np.asarray(self._b_list, dtype=float).copy()
        b[np.asarray(rows)] = vals
        clone._b_list = b.tolist()
        clone.b = b
        a, acsc, c = self._compiled
        clone._compiled = (a, acsc, c)
        return clone

    # -- debug dump ---------------------------------------------------------

    def dump(self) -> str:
        """Line-oriented text form (not a stability-guaranteed format)."""
        self.compile()
        lines = ["sdp 1"]
        for blk in self.blocks:
            lines.append(f"block {blk.name} {blk.dim} {blk.kind}")
        a, _, c = self._compiled
        for j in np.nonzero(c)[0]:
            lines.append(f"obj {j} {c[j]!r}")
        coo = a.tocoo()
        for i, j, v in zip(coo.row, coo.col, coo.data):
            lines.append(f"A {i} {j} {v!r}")
        for i, v in enumerate(self.b):
            if v != 0:
                lines.append(f"rhs {i} {v!r}")
        lines.append(f"m {self.m}")
        lines.append("end")
        return "\n".join(lines) + "\n"


def load_problem(text: str) -> SdpProblem:
    """Rebuild a problem from ``dump`` output."""
    prob = SdpProblem()
    coo: list = []
    cvals: dict = {}
    rhs: dict = {}
    m = 0
    for line in text.strip().splitlines():
        parts = line.split()
        if not parts or parts[0] in ("sdp", "end"):
            continue
        if parts[0] == "block":
            prob.add_block(parts[1], int(parts[2]), parts[3])
        elif parts[0] == "obj":
            cvals[int(parts[1])] = float(parts[2])
        elif parts[0] == "A":
            coo.append((int(parts[1]), int(parts[2]), float(parts[3])))
        elif parts[0] == "rhs":
            rhs[int(parts[1])] = float(parts[2])
        elif parts[0] == "m":
            m = int(parts[1])
    prob.m = m
    prob._rows_i = [i for i, _, _ in coo]
    prob._rows_j = [j for _, j, _ in coo]
    prob._rows_v = [v for _, _, v in coo]
    prob._b_list = [rhs.get(i, 0.0) for i in range(m)]
    a = sp.coo_matrix((prob._rows_v, (prob._rows_i, prob._rows_j)),
                      shape=(m, prob._total_vdim)).tocsr()
    c = np.zeros(prob._total_vdim)
    for j, v in cvals.items():
        c[j] = v
    prob.b = np.asarray(prob._b_list)
    prob._compiled = (a, a.tocsc(), c)
    return prob


# ---------------------------------------------------------------------------
# solver

@dataclass
class SolveOptions:
    gap_tol: float = 1e-7
    feas_tol: float = 1e-8
    max_iterations: int = 200
    step_fraction: float = 0.98    # fraction-to-boundary
    min_mu: float = 5e-15          # numerical floor on the barrier parameter
    dense_schur_max: int = 900     # larger Schur systems go sparse if they can
    verbose: bool = False


@dataclass
class SdpSolution:
    status: str
    objective_value: float
    dual_objective: float
    block_values: dict
    dual_y: np.ndarray
    dual_blocks: dict
    duality_gap: float
    max_residual: float
    iterations: int
    mu: float
    history: list = field(default_factory=list)
    message: str = ""


def _sym(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().swapaxes(-1, -2)) / 2


def _chol_pd(m: np.ndarray) -> np.ndarray:
    """Batched Cholesky with escalating jitter for nearly singular iterates."""
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        pass
    dim = m.shape[-1]
    diag = max(1.0, np.abs(np.einsum("...ii->...i", m).real).max())
    jitter = 1e-14
    while jitter <= 1e-4:
        try:
            return np.linalg.cholesky(m + jitter * diag * np.eye(dim))
        except np.linalg.LinAlgError:
            jitter *= 100
    raise np.linalg.LinAlgError("iterate irrecoverably lost positivity")


def _max_step_grouped(mats: list, dmats: list) -> float:
    """Largest alpha keeping every block of m + alpha*dm PSD.

    Blocks of equal shape and dtype are batched through LAPACK in one call;
    all direction matrices must be Hermitian.
    """
    groups: dict = {}
    for mb, db in zip(mats, dmats):
        groups.setdefault((mb.shape[0], mb.dtype.kind), []).append((mb, db))
    alpha = np.inf
    for (_, _), pairs in groups.items():
        m = np.stack([p[0] for p in pairs])
        dm = np.stack([p[1] for p in pairs])
        low = _chol_pd(m)
        w = np.linalg.solve(low, dm)
        w = np.linalg.solve(low, w.conj().swapaxes(-1, -2))
        lam = np.linalg.eigvalsh(_sym(w)).min()
        if lam < -1e-300:
            alpha = min(alpha, -1.0 / lam)
    return alpha


class _Work:
    """Precomputation bound to one compiled constraint matrix.

    Shared between solves that differ only in the right-hand side (clones
    from ``replace_rhs``).
    """

    def __init__(self, problem: SdpProblem):
        self.total_vdim = problem._total_vdim
        self.a, self.acsc, self.c = problem.compile()
        self.blocks = problem.blocks
        self.bases = [_basis(bl.dim, bl.kind) for bl in self.blocks]
        self.nu = sum(bl.dim for bl in self.blocks)
        self.m = problem.m
        # per-block constraint slices and their active rows
        self.a_act = []
        self.active = []
        for bl in self.blocks:
            ab = self.acsc[:, bl.offset:bl.offset + bl.vdim].tocsr()
            act = np.unique(ab.tocoo().row)
            self.a_act.append(ab[act])
            self.active.append(act)

    def stack(self, mats) -> np.ndarray:
        out = np.empty(self.total_vdim)
        for bl, basis, m in zip(self.blocks, self.bases, mats):
            out[bl.offset:bl.offset + bl.vdim] = basis.vec(m)
        return out

    def unstack(self, v: np.ndarray) -> list:
        return [basis.mat(v[bl.offset:bl.offset + bl.vdim])
                for bl, basis in zip(self.blocks, self.bases)]


class _SchurSolver:
    """Factor/solve for the (dense or sparse) Schur complement.

    The sparsity pattern is read off the numerical matrix and cached; it is
    rebuilt whenever the nonzero count changes (it stabilizes after the
    first couple of interior-point iterations).
    """

    def __init__(self, m: int, options: SolveOptions):
        self.m = m
        self.options = options
        self._pattern_nnz = -1

    def _rebuild_pattern(self, h: np.ndarray, nnz: int):
        pi, pj = np.nonzero(h)
        order = np.lexsort((pi, pj))  # CSC order: by column, then row
        self.pi, self.pj = pi[order], pj[order]
        counts = np.bincount(self.pj, minlength=self.m)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
        self.indices = self.pi.astype(np.int32)
        self._diag_mask = self.pi == self.pj
        self._pattern_nnz = nnz

    def factor(self, h: np.ndarray, work: _Work):
        self.h = h
        m = self.m
        if m <= self.options.dense_schur_max:
            mode = "dense"
        else:
            nnz = int(np.count_nonzero(h))
            mode = "dense" if nnz > 0.55 * m * m else "sparse"
            if mode == "sparse" and nnz != self._pattern_nnz:
                self._rebuild_pattern(h, nnz)
        scale = max(1.0, np.abs(np.diagonal(h)).max())
        jitter = 0.0
        for _ in range(6):
            try:
                if mode == "dense":
                    hj = h if jitter == 0 else h + jitter * scale * np.eye(m)
                    fac = sla.cho_factor(hj, lower=True, check_finite=False)
                    self._solve1 = lambda r: sla.cho_solve(
                        fac, r, check_finite=False)
                else:
                    data = h[self.pi, self.pj]
                    if jitter:
                        data = data.copy()
                        data[self._diag_mask] += jitter * scale
                    hs = sp.csc_matrix((data, self.indices, self.indptr),
                                       shape=(m, m))
                    lu = splu(hs, permc_spec="MMD_AT_PLUS_A",
                              options=dict(SymmetricMode=True))
                    self._solve1 = lu.solve
                return
            except (np.linalg.LinAlgError, RuntimeError, ValueError):
                jitter = 1e-14 if jitter == 0 else jitter * 100
        # last resort: least squares on the dense matrix
        self._solve1 = lambda r: np.linalg.lstsq(self.h, r, rcond=None)[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        dy = self._solve1(rhs)
        # one iterative refinement round tightens the endgame
        resid = rhs - self.h @ dy
        return dy + self._solve1(resid)


def solve(problem: SdpProblem, options: SolveOptions | None = None) -> SdpSolution:
    """Run the interior point method; deterministic for identical inputs."""
    options = options or SolveOptions()
    problem.compile()
    work = getattr(problem, "_work_cache", None)
    if work is None or work.a is not problem._compiled[0]:
        work = _Work(problem)
        problem._work_cache = work
    a, acsc, c, b = work.a, work.acsc, work.c, problem.b
    m = work.m
    if m == 0:
        raise DimensionMismatchError("problem has no constraints")

    eta = float(np.abs(c).max() if c.size else 0.0) + 1.0
    xs = [eta * np.eye(bl.dim, dtype=complex if bl.kind == "herm" else float)
          for bl in work.blocks]
    ss = [eta * np.eye(bl.dim, dtype=complex if bl.kind == "herm" else float)
          for bl in work.blocks]
    y = np.zeros(m)

    bnrm = 1.0 + np.abs(b).max(initial=0.0)
    cnrm = 1.0 + np.abs(c).max(initial=0.0)
    history = []
    best = None
    best_score = np.inf
    stall = 0
    force_best = False
    status, message = "max_iterations", "iteration cap reached"
    schur = _SchurSolver(m, options)
    it = 0

    for it in range(1, options.max_iterations + 1):
        x = work.stack(xs)
        s = work.stack(ss)
        rp = b - a @ x
        rd = c - acsc.T @ y - s
        pobj = float(c @ x)
        dobj = float(b @ y)
        mu = float(x @ s) / work.nu
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        rpn = np.abs(rp).max(initial=0.0) / bnrm
        rdn = np.abs(rd).max(initial=0.0) / cnrm
        maxres = max(rpn, rdn)
        history.append((pobj, dobj, gap, maxres, mu))
        if options.verbose:
            print(f"  it {it:3d}  p {pobj:+.10e}  d {dobj:+.10e}  "
                  f"gap {gap:.2e}  res {maxres:.2e}  mu {mu:.2e}")

        score = max(gap, maxres)
        if score < 0.9 * best_score:
            best_score = score
            stall = 0
            best = ([xi.copy() for xi in xs], y.copy(), [si.copy() for si in ss],
                    pobj, dobj, gap, maxres, mu)
        else:
            stall += 1

        if gap <= options.gap_tol and maxres <= options.feas_tol:
            status, message = "optimal", "converged"
            break

        # primal infeasibility certificate: A*(y) <= 0 with b.y > 0
        ynorm = np.abs(y).max(initial=0.0)
        if ynorm > 1e5:
            yhat = y / ynorm
            zmats = work.unstack(acsc.T @ yhat)
            lam_max = max(np.linalg.eigvalsh(z).max() for z in zmats)
            if b @ yhat > 1e-6 and lam_max <= 1e-8:
                status, message = "infeasible", (
                    "primal infeasibility certificate found")
                break

        if not np.isfinite(mu) or mu > 1e12 * eta:
            status, message = "max_iterations", "diverged"
            break
        if mu < options.min_mu or stall >= 10:
            status, message = "max_iterations", "numerical floor reached"
            force_best = True
            break

        # scaling data and Schur complement H = A K A^T
        sinvs = []
        for sb in ss:
            w_, v_ = np.linalg.eigh(sb)
            w_ = np.maximum(w_, 1e-300)
            sinvs.append((v_ / w_) @ v_.conj().T)
        h = np.zeros((m, m))
        for basis, xb, sinv, aact, act in zip(
                work.bases, xs, sinvs, work.a_act, work.active):
            kb = basis.scaled_gram(xb, sinv)
            hb = aact @ kb
            hb = (aact @ hb.T).T
            h[np.ix_(act, act)] += np.asarray(hb)
        schur.factor(h, work)

        a1 = a @ work.stack(sinvs)
        rdmats = work.unstack(rd)
        q_rd = a @ work.stack([_sym(xb @ rdb @ sinv)
                               for xb, rdb, sinv in zip(xs, rdmats, sinvs)])

        def directions(sigma_mu, corr=None):
            rhs = b - sigma_mu * a1 + q_rd
            if corr is not None:
                rhs = rhs + a @ work.stack(
                    [_sym(cb @ sinv) for cb, sinv in zip(corr, sinvs)])
            dy = schur.solve(rhs)
            aty = work.unstack(acsc.T @ dy)
            dss = [rdb - atyb for rdb, atyb in zip(rdmats, aty)]
            dxs = []
            for xb, sb, sinv, dsb, idx in zip(xs, ss, sinvs, dss, range(len(xs))):
                core = xb @ dsb
                if corr is not None:
                    core = core + corr[idx]
                dxb = sigma_mu * sinv - xb - _sym(core @ sinv)
                dxs.append(dxb)
            return dy, dxs, dss

        # predictor
        with np.errstate(all="ignore"):
            dy_a, dx_a, ds_a = directions(0.0)
            bad_dir = not np.all(np.isfinite(dy_a)) or any(
                not np.all(np.isfinite(db)) or np.abs(db).max() > 1e100
                for db in dx_a + ds_a)
            if bad_dir:
                status, message = "max_iterations", "direction overflow"
                force_best = True
                break
            ap = min(1.0, _max_step_grouped(xs, dx_a))
            ad = min(1.0, _max_step_grouped(ss, ds_a))
            mu_aff = sum(np.trace((xb + ap * dxb) @ (sb + ad * dsb)).real
                         for xb, dxb, sb, dsb in zip(xs, dx_a, ss, ds_a)) / work.nu
            sigma = min(0.999, max(1e-10, (max(mu_aff, 0.0) / mu) ** 3))

            # corrector
            corr = [dxb @ dsb for dxb, dsb in zip(dx_a, ds_a)]
            dy, dxs, dss = directions(sigma * mu, corr)
            if not np.all(np.isfinite(dy)) or any(
                    not np.all(np.isfinite(db)) for db in dxs + dss):
                status, message = "max_iterations", "direction overflow"
                force_best = True
                break
        frac = options.step_fraction
        ap = min(1.0, frac * _max_step_grouped(xs, dxs))
        ad = min(1.0, frac * _max_step_grouped(ss, dss))

        xs = [_sym(xb + ap * dxb) for xb, dxb in zip(xs, dxs)]
        ss = [_sym(sb + ad * dsb) for sb, dsb in zip(ss, dss)]
        y = y + ad * dy

    if (status != "optimal" or force_best) and best is not None:
        xs, y, ss, pobj, dobj, gap, maxres, mu = best
    if (status == "max_iterations" and gap <= 10 * options.gap_tol
            and maxres <= 10 * options.feas_tol):
        # the iterate is as converged as float64 allows at these tolerances
        status = "optimal"
    block_values = {bl.name: xb for bl, xb in zip(work.blocks, xs)}
    dual_blocks = {bl.name: sb for bl, sb in zip(work.blocks, ss)}
    return SdpSolution(
        status=status,
        objective_value=pobj,
        dual_objective=dobj,
        block_values=block_values,
        dual_y=y,
        dual_blocks=dual_blocks,
        duality_gap=gap,
        max_residual=maxres,
        iterations=it,
        mu=mu,
        history=history,
        message=message,
    )
