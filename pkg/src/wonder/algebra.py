"""Finite-dimensional graded commutative rational algebras.

An algebra is given by per-degree ordered bases (degree 0 is spanned by the
unit) and a sparse table of structure constants; everything above the top
degree is zero.  Graded maps, socle pairings, Poincare-duality verdicts and
kernel extraction live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from wonder.errors import InputError
from wonder.exact_linalg import (
    ONE,
    ZERO,
    format_rat,
    nullspace_rows,
    parse_rat,
    rank_rows,
    solve_rows,
)


class Element:
    """Element of a GradedAlgebra, stored as a sparse coefficient vector
    over the global basis.  Treated as immutable."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: "GradedAlgebra", coeffs: dict[int, Fraction]):
        self.alg = alg
        self.coeffs = {g: q for g, q in coeffs.items() if q}

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero; raises on mixed."""
        degs = {self.alg.degree_of(g) for g in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_part(self, k: int) -> "Element":
        return Element(
            self.alg,
            {g: q for g, q in self.coeffs.items() if self.alg.degree_of(g) == k},
        )

    def coefficient(self, g: int) -> Fraction:
        return self.coeffs.get(g, ZERO)

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        out = dict(self.coeffs)
        for g, q in other.coeffs.items():
            out[g] = out.get(g, ZERO) + q
        return Element(self.alg, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.alg, {g: -q for g, q in self.coeffs.items()})

    def scale(self, q) -> "Element":
        q = Fraction(q)
        return Element(self.alg, {g: v * q for g, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            self._same(other)
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and other.alg is self.alg
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.alg), tuple(sorted(self.coeffs.items()))))

    def _same(self, other: "Element"):
        if other.alg is not self.alg:
            raise InputError("elements belong to different algebras")

    def to_vector(self, k: int) -> list[Fraction]:
        """Dense coefficient vector of the degree-k part."""
        lo, n = self.alg.offset(k), self.alg.dim(k)
        v = [ZERO] * n
        for g, q in self.coeffs.items():
            if lo <= g < lo + n:
                v[g - lo] = q
        return v

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for g in sorted(self.coeffs):
            q = self.coeffs[g]
            lbl = self.alg.label_of(g)
            parts.append(lbl if q == 1 else f"{format_rat(q)}*{lbl}")
        return " + ".join(parts)


class GradedAlgebra:
    """Graded commutative rational algebra with unit, described by bases and
    structure constants.  Immutable after construction."""

    def __init__(self, dims, labels, mult_entries, *, check: bool = True):
        self.dims = tuple(int(d) for d in dims)
        if not self.dims or self.dims[0] != 1:
            raise InputError("degree 0 must be one-dimensional (the unit)")
        if any(d < 0 for d in self.dims):
            raise InputError("negative dimension")
        self.top_degree = len(self.dims) - 1
        self.labels = tuple(tuple(ls) for ls in labels)
        if len(self.labels) != len(self.dims) or any(
            len(ls) != d for ls, d in zip(self.labels, self.dims)
        ):
            raise InputError("labels do not match dimensions")
        self._offsets = []
        off = 0
        for d in self.dims:
            self._offsets.append(off)
            off += d
        self.total_dim = off
        self._degree_of = []
        for k, d in enumerate(self.dims):
            self._degree_of.extend([k] * d)
        flat = [l for ls in self.labels for l in ls]
        if len(set(flat)) != len(flat):
            raise InputError("basis labels must be globally unique")
        self._label_to_g = {l: g for g, l in enumerate(flat)}
        self._flat_labels = flat

        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for gi, gj, gk, q in mult_entries:
            q = Fraction(q)
            if not q:
                continue
            a, b = (gi, gj) if gi <= gj else (gj, gi)
            if a == 0 or b == 0:
                raise InputError("unit products are implicit; do not store them")
            di, dj, dk = self._degree_of[a], self._degree_of[b], self._degree_of[gk]
            if di + dj != dk:
                raise InputError(
                    f"structure constant violates grading: deg {di}+{dj} -> {dk}"
                )
            row = table.setdefault((a, b), {})
            if gk in row and row[gk] != q:
                raise InputError(f"conflicting structure constants at ({a},{b})")
            row[gk] = q
        self._table = table
        if check:
            self._check_unit_degrees()

    # -- basic lookups ----------------------------------------------------

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.top_degree else 0

    def offset(self, k: int) -> int:
        return self._offsets[k]

    def degree_of(self, g: int) -> int:
        return self._degree_of[g]

    def label_of(self, g: int) -> str:
        return self._flat_labels[g]

    def global_index(self, label: str) -> int:
        try:
            return self._label_to_g[label]
        except KeyError:
            raise InputError(f"unknown basis label {label!r}") from None

    def global_indices(self, k: int):
        lo = self._offsets[k]
        return range(lo, lo + self.dims[k])

    # -- element constructors ---------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def unit(self) -> Element:
        return Element(self, {0: ONE})

    def basis_element(self, g: int) -> Element:
        return Element(self, {g: ONE})

    def element(self, coeffs: dict[int, Fraction]) -> Element:
        return Element(self, coeffs)

    def from_labels(self, data: dict[str, object]) -> Element:
        return Element(
            self, {self.global_index(l): Fraction(q) for l, q in data.items()}
        )

    def from_vector(self, k: int, vec) -> Element:
        lo = self._offsets[k]
        return Element(self, {lo + i: Fraction(q) for i, q in enumerate(vec) if q})

    # -- multiplication ----------------------------------------------------

    def product_basis(self, gi: int, gj: int) -> dict[int, Fraction]:
        if gi == 0:
            return {gj: ONE}
        if gj == 0:
            return {gi: ONE}
        a, b = (gi, gj) if gi <= gj else (gj, gi)
        return self._table.get((a, b), {})

    def multiply(self, x: Element, y: Element) -> Element:
        out: dict[int, Fraction] = {}
        for gi, qi in x.coeffs.items():
            for gj, qj in y.coeffs.items():
                q = qi * qj
                for gk, c in self.product_basis(gi, gj).items():
                    out[gk] = out.get(gk, ZERO) + q * c
        return Element(self, out)

    # -- invariant checks ---------------------------------------------------

    def _check_unit_degrees(self):
        for (a, b), row in self._table.items():
            for gk in row:
                if self._degree_of[gk] > self.top_degree:
                    raise InputError("structure constant above top degree")

    def check_associativity(self) -> list[tuple[int, int, int]]:
        """Exact associativity check on all basis triples; returns failures."""
        bad = []
        n = self.total_dim
        for i in range(1, n):
            bi = self.basis_element(i)
            for j in range(i, n):
                if self._degree_of[i] + self._degree_of[j] > self.top_degree:
                    continue
                bj = self.basis_element(j)
                ij = self.multiply(bi, bj)
                for k in range(j, n):
                    bk = self.basis_element(k)
                    left = self.multiply(ij, bk)
                    right = self.multiply(bi, self.multiply(bj, bk))
                    if left != right:
                        bad.append((i, j, k))
        return bad

    # -- serialization -------------------------------------------------------

    def to_payload(self) -> dict:
        triples = []
        for (a, b), row in sorted(self._table.items()):
            for gk in sorted(row):
                triples.append([a, b, gk, format_rat(row[gk])])
        return {
            "degrees": list(self.dims),
            "basis_labels": [list(ls) for ls in self.labels],
            "mult": triples,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "GradedAlgebra":
        try:
            dims = payload["degrees"]
            labels = payload["basis_labels"]
            mult = payload["mult"]
        except KeyError as e:
            raise InputError(f"algebra payload missing section {e}") from None
        entries = [(a, b, k, parse_rat(q)) for a, b, k, q in mult]
        return cls(dims, labels, entries)

    def __repr__(self):
        return f"GradedAlgebra(dims={list(self.dims)})"


def algebra_from_products(dims, labels, products) -> GradedAlgebra:
    """Build an algebra from a callable ``products(gi, gj) -> dict`` defined
    on non-unit basis pairs gi <= gj."""
    probe = GradedAlgebra(dims, labels, [], check=False)
    entries = []
    for gi in range(1, probe.total_dim):
        for gj in range(gi, probe.total_dim):
            if probe.degree_of(gi) + probe.degree_of(gj) > probe.top_degree:
                continue
            for gk, q in products(gi, gj).items():
                entries.append((gi, gj, gk, q))
    return GradedAlgebra(dims, labels, entries)


class GradedMap:
    """Degree-shifting linear map between graded algebras.

    Shift 0 for pullbacks (ring maps), positive codimension shift for
    pushforwards, negative for integration along fibers.
    """

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra, shift: int, mats):
        self.source = source
        self.target = target
        self.shift = int(shift)
        self.mats = []
        for k in range(source.top_degree + 1):
            tk = k + self.shift
            tdim = target.dim(tk) if 0 <= tk else 0
            sdim = source.dim(k)
            mat = mats[k] if k < len(mats) and mats[k] is not None else None
            if mat is None:
                mat = [[ZERO] * sdim for _ in range(tdim)]
            else:
                mat = [[Fraction(v) for v in row] for row in mat]
                if len(mat) != tdim or any(len(r) != sdim for r in mat):
                    raise InputError(
                        f"map matrix at degree {k} has wrong shape "
                        f"({len(mat)}x{len(mat[0]) if mat else 0}, want {tdim}x{sdim})"
                    )
            self.mats.append(mat)

    @classmethod
    def from_images(cls, source, target, shift, images) -> "GradedMap":
        """Build from a list of target Elements, one per global source index."""
        mats = []
        for k in range(source.top_degree + 1):
            tk = k + shift
            tdim = target.dim(tk) if tk >= 0 else 0
            mat = [[ZERO] * source.dim(k) for _ in range(tdim)]
            for c, g in enumerate(source.global_indices(k)):
                img = images[g]
                if img.is_zero():
                    continue
                if img.degree() != tk:
                    raise InputError("image has wrong degree")
                for i, q in enumerate(img.to_vector(tk)):
                    if q:
                        mat[i][c] = q
            mats.append(mat)
        return cls(source, target, shift, mats)

    @classmethod
    def identity(cls, alg: GradedAlgebra) -> "GradedMap":
        mats = []
        for k in range(alg.top_degree + 1):
            n = alg.dim(k)
            mats.append([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])
        return cls(alg, alg, 0, mats)

    def apply_basis(self, g: int) -> Element:
        k = self.source.degree_of(g)
        tk = k + self.shift
        if not (0 <= tk <= self.target.top_degree):
            return self.target.zero()
        col = g - self.source.offset(k)
        lo = self.target.offset(tk)
        return Element(
            self.target,
            {lo + i: row[col] for i, row in enumerate(self.mats[k]) if row[col]},
        )

    def apply(self, x: Element) -> Element:
        if x.alg is not self.source:
            raise InputError("element not in the source algebra")
        out = self.target.zero()
        for g, q in x.coeffs.items():
            out = out + self.apply_basis(g).scale(q)
        return out

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def matrix(self, k: int):
        return self.mats[k]

    def surjective_degrees(self) -> list[bool]:
        out = []
        for k in range(self.source.top_degree + 1):
            tk = k + self.shift
            tdim = self.target.dim(tk) if tk >= 0 else 0
            out.append(tdim == 0 or rank_rows(self.mats[k]) == tdim)
        return out

    def is_surjective(self) -> bool:
        ok = all(self.surjective_degrees())
        # degrees of the target not hit by any source degree must be empty
        hit = {k + self.shift for k in range(self.source.top_degree + 1)}
        for tk in range(self.target.top_degree + 1):
            if tk not in hit and self.target.dim(tk) > 0:
                return False
        return ok

    def is_injective(self) -> bool:
        for k in range(self.source.top_degree + 1):
            if self.source.dim(k) == 0:
                continue
            if rank_rows(self.mats[k]) < self.source.dim(k):
                return False
        return True

    def kernel_elements(self, k: int) -> list[Element]:
        vecs = nullspace_rows(self.mats[k], self.source.dim(k))
        return [self.source.from_vector(k, v) for v in vecs]

    def is_ring_hom(self) -> bool:
        if self.shift != 0:
            return False
        if self.apply(self.source.unit()) != self.target.unit():
            return False
        n = self.source.total_dim
        for i in range(1, n):
            bi = self.source.basis_element(i)
            fi = self.apply(bi)
            for j in range(i, n):
                if (
                    self.source.degree_of(i) + self.source.degree_of(j)
                    > self.source.top_degree
                ):
                    continue
                bj = self.source.basis_element(j)
                if self.apply(self.source.multiply(bi, bj)) != self.target.multiply(
                    fi, self.apply(bj)
                ):
                    return False
        return True


def compose(outer: GradedMap, inner: GradedMap) -> GradedMap:
    """outer after inner."""
    if inner.target is not outer.source:
        raise InputError("maps are not composable")
    images = [
        outer.apply(inner.apply_basis(g)) for g in range(inner.source.total_dim)
    ]
    return GradedMap.from_images(
        inner.source, outer.target, inner.shift + outer.shift, images
    )


def projection_formula_holds(pullback: GradedMap, pushforward: GradedMap) -> bool:
    """Check ``push(pull(a) * b) == a * push(b)`` on all basis pairs."""
    big, small = pullback.source, pullback.target
    if pushforward.source is not small or pushforward.target is not big:
        raise InputError("pushforward does not pair with the pullback")
    for ga in range(big.total_dim):
        a = big.basis_element(ga)
        pa = pullback.apply(a)
        for gb in range(small.total_dim):
            b = small.basis_element(gb)
            left = pushforward.apply(small.multiply(pa, b))
            right = big.multiply(a, pushforward.apply(b))
            if left != right:
                return False
    return True


# -- socle pairings and duality verdicts -------------------------------------


@dataclass
class SoclePairing:
    """Pairing data of an algebra whose top nonzero degree is 1-dimensional.

    gram(k) is the matrix of A^k x A^(d-k) -> A^d in the socle coordinate;
    gram(d-k) is its transpose by commutativity.
    """

    algebra: GradedAlgebra
    degree: int
    socle_index: int
    grams: tuple

    def gram(self, k: int):
        return self.grams[k]

    def pair(self, x: Element, y: Element) -> Fraction:
        return self.algebra.multiply(x, y).coefficient(self.socle_index)


@dataclass
class SocleReport:
    ok: bool
    pairing: SoclePairing | None
    problems: list[str]


def socle_check(alg: GradedAlgebra, expected_degree: int) -> SocleReport:
    """Verify a 1-dimensional socle at the expected degree and vanishing
    above it, then build all Gram matrices."""
    problems = []
    if expected_degree < 0 or expected_degree > alg.top_degree:
        if expected_degree != 0 or alg.top_degree != 0:
            problems.append(
                f"expected socle degree {expected_degree} outside stored range"
            )
    d = expected_degree
    if alg.dim(d) != 1:
        problems.append(f"socle dimension {alg.dim(d)} at degree {d}")
    for k in range(d + 1, alg.top_degree + 1):
        if alg.dim(k):
            problems.append(f"nonzero classes above the socle at degree {k}")
    if problems:
        return SocleReport(False, None, problems)
    socle_index = alg.offset(d)
    grams = []
    for k in range(d + 1):
        rows = []
        for gi in alg.global_indices(k):
            bi = alg.basis_element(gi)
            row = []
            for gj in alg.global_indices(d - k):
                row.append(
                    alg.multiply(bi, alg.basis_element(gj)).coefficient(socle_index)
                )
            rows.append(row)
        grams.append(rows)
    return SocleReport(True, SoclePairing(alg, d, socle_index, tuple(grams)), [])


@dataclass
class PdVerdict:
    is_pd: bool
    kernels: tuple  # per degree k: (dim left kernel, dim right kernel)
    discrepancies: tuple  # per degree k: dim A^k - rank gram(k)

    def __iter__(self):
        return iter((self.is_pd, self.kernels))


def pd_verdict(sp: SoclePairing) -> PdVerdict:
    """Perfect-pairing verdict and per-degree Gorenstein discrepancies."""
    alg, d = sp.algebra, sp.degree
    kernels = []
    discrepancies = []
    ranks = {}
    for k in range(d + 1):
        kc = min(k, d - k)
        if kc not in ranks:
            ranks[kc] = rank_rows(sp.gram(kc))
        r = ranks[kc]
        kernels.append((alg.dim(k) - r, alg.dim(d - k) - r))
        discrepancies.append(alg.dim(k) - r)
    is_pd = all(l == 0 and r == 0 for l, r in kernels)
    return PdVerdict(is_pd, tuple(kernels), tuple(discrepancies))


def socle_kernel_elements(sp: SoclePairing, k: int) -> list[Element]:
    """Exact basis of the degree-k elements pairing to zero with everything
    in complementary degree."""
    if k < 0 or k > sp.degree:
        raise InputError(f"degree {k} out of range 0..{sp.degree}")
    gram = sp.gram(k)
    alg = sp.algebra
    cols = [[gram[i][j] for i in range(alg.dim(k))] for j in range(alg.dim(sp.degree - k))]
    vecs = nullspace_rows(cols, alg.dim(k))
    return [alg.from_vector(k, v) for v in vecs]


def adjoint_pushforward(
    pullback: GradedMap, sp_small: SoclePairing, sp_big: SoclePairing
) -> GradedMap:
    """The pushforward determined against a pullback by the two perfect
    pairings; satisfies the projection formula by construction."""
    big, small = pullback.source, pullback.target
    c = sp_big.degree - sp_small.degree
    images = []
    for g in range(small.total_dim):
        k = small.degree_of(g)
        tk = k + c
        if tk > big.top_degree:
            images.append(big.zero())
            continue
        comp = sp_big.degree - tk
        z = small.basis_element(g)
        rhs = []
        for gy in big.global_indices(comp):
            rhs.append(sp_small.pair(z, pullback.apply_basis(gy)))
        gram = sp_big.gram(tk)  # rows: deg tk, cols: deg comp
        sol = solve_rows(
            [[gram[i][j] for i in range(big.dim(tk))] for j in range(big.dim(comp))],
            rhs,
            cols=big.dim(tk),
        )
        if sol is None:
            raise InputError("pairing is not perfect; adjoint pushforward undefined")
        images.append(big.from_vector(tk, sol))
    return GradedMap.from_images(small, big, c, images)


def section_of(pullback: GradedMap) -> GradedMap:
    """A right inverse of a surjective degree-0 map (free choices set to 0)."""
    big, small = pullback.source, pullback.target
    images = []
    for g in range(small.total_dim):
        k = small.degree_of(g)
        rhs = [ONE if gg == g else ZERO for gg in small.global_indices(k)]
        sol = solve_rows(pullback.mats[k], rhs, cols=big.dim(k))
        if sol is None:
            raise InputError(f"map is not surjective at degree {k}; no section")
        images.append(big.from_vector(k, sol))
    return GradedMap.from_images(small, big, 0, images)


def tensor_algebra(a: GradedAlgebra, b: GradedAlgebra):
    """Tensor product algebra; returns (algebra, pair_index) where
    pair_index maps (ga, gb) to the global index of the product basis
    element.  Labels multiply with '*' and the unit label elides."""

    def combine(la: str, lb: str) -> str:
        if la == "1":
            return lb
        if lb == "1":
            return la
        return f"{la}*{lb}"

    top = a.top_degree + b.top_degree
    dims = [0] * (top + 1)
    labels = [[] for _ in range(top + 1)]
    pair_index = {}
    g = 0
    by_degree = [[] for _ in range(top + 1)]
    for k in range(top + 1):
        for ka in range(min(k, a.top_degree) + 1):
            kb = k - ka
            if kb > b.top_degree:
                continue
            for ga in a.global_indices(ka):
                for gb in b.global_indices(kb):
                    pair_index[(ga, gb)] = g
                    labels[k].append(combine(a.label_of(ga), b.label_of(gb)))
                    by_degree[k].append((ga, gb))
                    dims[k] += 1
                    g += 1

    rev = {}
    for (ga, gb), gg in pair_index.items():
        rev[gg] = (ga, gb)

    def products(gi, gj):
        ga1, gb1 = rev[gi]
        ga2, gb2 = rev[gj]
        out = {}
        for gka, qa in a.product_basis(ga1, ga2).items():
            for gkb, qb in b.product_basis(gb1, gb2).items():
                out[pair_index[(gka, gkb)]] = qa * qb
        return out

    alg = algebra_from_products(dims, labels, products)
    return alg, pair_index
