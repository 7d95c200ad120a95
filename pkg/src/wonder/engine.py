"""The main construction: the graded ring of the compactified space on the
additive basis (nest, standard exponents, burrow class), with products
computed by nest merging, restriction to the common burrow, and exponent
reduction through the monic rewrite rules.

Coefficients are carried as ambient classes during rewriting (restriction
maps are ring maps, so restricting once at the end agrees with restricting
eagerly) and land in the burrow of the final support."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from wonder.algebra import Element, GradedAlgebra, GradedMap, section_of
from wonder.diagram import BurrowDiagram
from wonder.errors import ComputationError, InputError, InvariantViolation
from wonder.exact_linalg import ONE, ZERO, format_rat
from wonder.nests import Summand, li_decomposition, standard_bound

DEFAULT_MAX_REWRITES = 10_000


def _default_cap() -> int:
    env = os.environ.get("WONDER_MAX_REWRITES")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"WONDER_MAX_REWRITES is not an integer: {env!r}")
    return DEFAULT_MAX_REWRITES


@dataclass(frozen=True)
class RewriteRule:
    """One instance of the monic exponent-reduction rule: inside the given
    support, the element x with its enclosing burrow w and the expansion of
    the rule as (exponent pattern, ambient coefficient) pairs, lead term
    excluded."""

    support: tuple
    element: str
    w_burrow: str
    degree: int
    terms: tuple  # ((exponent pattern), ambient Element) pairs


@dataclass
class _Term:
    exps: dict
    coeff: Element  # ambient


class WonderElement:
    """Element of a WonderRing on the additive basis; sparse coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: "WonderRing", coords: dict[int, Fraction]):
        self.ring = ring
        self.coords = {i: q for i, q in coords.items() if q}

    def is_zero(self) -> bool:
        return not self.coords

    def degree(self) -> int | None:
        degs = {self.ring.degree_of(i) for i in self.coords}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def __add__(self, other: "WonderElement") -> "WonderElement":
        self._same(other)
        out = dict(self.coords)
        for i, q in other.coords.items():
            out[i] = out.get(i, ZERO) + q
        return WonderElement(self.ring, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return WonderElement(self.ring, {i: -q for i, q in self.coords.items()})

    def scale(self, q) -> "WonderElement":
        q = Fraction(q)
        return WonderElement(self.ring, {i: v * q for i, v in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, WonderElement):
            return self.ring.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (
            isinstance(other, WonderElement)
            and other.ring is self.ring
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted(self.coords.items()))))

    def _same(self, other):
        if other.ring is not self.ring:
            raise InputError("elements belong to different rings")

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = []
        for i in sorted(self.coords):
            q = self.coords[i]
            lbl = self.ring.labels_flat[i]
            parts.append(lbl if q == 1 else f"{format_rat(q)}*{lbl}")
        return " + ".join(parts)


class WonderRing:
    """Graded ring of the compactification, built on the additive basis."""

    def __init__(self, diagram: BurrowDiagram, *, max_rewrites: int | None = None):
        self.diagram = diagram
        self.max_rewrites = max_rewrites if max_rewrites is not None else _default_cap()
        self.summands, self.poincare = li_decomposition(diagram)
        d = diagram.socle_degree
        amb = diagram.ambient.algebra

        # deterministic element order for the termination measure: shallow
        # (small codimension) elements first
        self._element_order = sorted(
            diagram.elements, key=lambda x: (diagram.elements[x].codim, x)
        )
        self._element_pos = {x: i for i, x in enumerate(self._element_order)}

        entries = []  # (degree, summand index, burrow global idx, key, label)
        for si, s in enumerate(self.summands):
            balg = diagram.burrows[s.burrow].algebra
            for g in range(balg.total_dim):
                deg = s.shift + balg.degree_of(g)
                if deg > d:
                    continue
                key = (s.nest.sorted_ids(), s.mu.assignment, g)
                entries.append((deg, si, g, key, self._label(s, balg, g)))
        entries.sort(key=lambda t: (t[0], t[1], t[2]))
        self.basis = entries
        self.index = {e[3]: i for i, e in enumerate(entries)}
        self.labels_flat = [e[4] for e in entries]
        self.dims = [0] * (d + 1)
        for e in entries:
            self.dims[e[0]] += 1
        if self.dims != list(self.poincare):
            raise InvariantViolation("basis dimensions disagree with the decomposition")

        self._sections: dict[str, GradedMap] = {}
        self._chern_amb: dict[tuple, list] = {}
        self._rules: dict[tuple, RewriteRule] = {}
        self._cache: dict[tuple, dict] = {}
        self._algebra: GradedAlgebra | None = None
        self._amb = amb

    @staticmethod
    def _label(s: Summand, balg: GradedAlgebra, g: int) -> str:
        parts = []
        blabel = balg.label_of(g)
        if blabel != "1":
            parts.append(blabel)
        for x, k in s.mu.assignment:
            parts.append(f"E[{x}]" if k == 1 else f"E[{x}]^{k}")
        return "*".join(parts) if parts else "1"

    # -- bookkeeping -------------------------------------------------------

    def degree_of(self, i: int) -> int:
        return self.basis[i][0]

    def summand_of(self, i: int) -> Summand:
        return self.summands[self.basis[i][1]]

    def section(self, burrow_id: str) -> GradedMap:
        """Ambient lift of burrow classes (a right inverse of restriction)."""
        sec = self._sections.get(burrow_id)
        if sec is None:
            if burrow_id == self.diagram.ambient_id:
                sec = GradedMap.identity(self._amb)
            else:
                sec = section_of(self.diagram.pullback(self.diagram.ambient_id, burrow_id))
            self._sections[burrow_id] = sec
        return sec

    def _measure(self, exps: dict) -> tuple:
        m = [0] * len(self._element_order)
        for x, k in exps.items():
            m[self._element_pos[x]] = k
        return tuple(m)

    # -- rewrite machinery ---------------------------------------------------

    def _chern_ambient(self, x: str, w: str) -> list[Element]:
        key = (x, w)
        out = self._chern_amb.get(key)
        if out is None:
            dia = self.diagram
            bx = dia.singles[x]
            chern = dia.edges[(bx, w)].chern
            lift = self.section(w)
            out = [lift.apply(chern.coefficient(i)) for i in range(1, chern.deg + 1)]
            self._chern_amb[key] = out
        return out

    def rewrite_rule(self, support: frozenset, x: str) -> RewriteRule:
        """The reduction rule for element x inside the given support; the
        expansion terms exclude the lead monomial."""
        from wonder.nests import enclosing_burrow

        key = (tuple(sorted(support)), x)
        rule = self._rules.get(key)
        if rule is not None:
            return rule
        dia = self.diagram
        w = enclosing_burrow(dia, x, support)
        p = dia.elements[x].codim - dia.burrows[w].codim
        if p <= 0:
            rule = RewriteRule(key[0], x, w, 0, tuple())
            self._rules[key] = rule
            return rule
        c_amb = self._chern_ambient(x, w)
        below = dia.elements_below(x)
        amb = self._amb
        # expand sum_j c_j * (-(sum of E_S))^(p-j); monomial keys are sorted
        # exponent patterns over elements below x
        pows = [{(): ONE}]
        for _ in range(p):
            nxt: dict = {}
            for ek, q in pows[-1].items():
                base = dict(ek)
                for s in below:
                    e2 = dict(base)
                    e2[s] = e2.get(s, 0) + 1
                    k2 = tuple(sorted(e2.items()))
                    nxt[k2] = nxt.get(k2, ZERO) - q
            pows.append(nxt)
        acc: dict = {}
        for j in range(p + 1):
            cj = amb.unit() if j == 0 else c_amb[j - 1]
            for ek, q in pows[p - j].items():
                cur = acc.get(ek)
                add = cj.scale(q)
                acc[ek] = add if cur is None else cur + add
        lead = ((x, p),)
        lead_coeff = acc.pop(lead, None)
        expected = amb.unit().scale(ONE if p % 2 == 0 else -ONE)
        if lead_coeff != expected:
            raise InvariantViolation("lead coefficient of the rewrite rule is wrong")
        sign = ONE if (p + 1) % 2 == 0 else -ONE  # (-1)^(p+1)
        terms = tuple(
            (ek, cf.scale(sign)) for ek, cf in acc.items() if not cf.is_zero()
        )
        rule = RewriteRule(key[0], x, w, p, terms)
        self._rules[key] = rule
        return rule

    def _rewrite(self, t: _Term, x: str) -> list[_Term]:
        support = frozenset(t.exps)
        rule = self.rewrite_rule(support, x)
        p = rule.degree
        if p == 0:
            return []
        out = []
        for ek, cf in rule.terms:
            exps = dict(t.exps)
            exps[x] -= p
            for s, k in ek:
                exps[s] = exps.get(s, 0) + k
            exps = {s: k for s, k in exps.items() if k}
            coeff = self._amb.multiply(t.coeff, cf)
            if coeff.is_zero():
                continue
            out.append(_Term(exps, coeff))
        return out

    def _normalize(self, terms, trace=None) -> dict[int, Fraction]:
        dia = self.diagram
        coords: dict[int, Fraction] = {}
        stack = list(terms)
        steps = 0
        while stack:
            t = stack.pop()
            if t.coeff.is_zero():
                continue
            support = frozenset(t.exps)
            if support and not dia.is_nest(support):
                continue
            burrow = dia.burrow_of(support) if support else dia.ambient_id
            if burrow is None:
                raise InputError(
                    f"support {sorted(support)} passes the nest rule but has an "
                    "empty intersection; inconsistent input"
                )
            violations = [
                x for x in support if t.exps[x] >= standard_bound(dia, x, support)
            ]
            if violations:
                steps += 1
                if steps > self.max_rewrites:
                    raise ComputationError(
                        f"rewrite cap {self.max_rewrites} exceeded on monomial "
                        f"{sorted(t.exps.items())}"
                    )
                x = max(violations, key=lambda e: (dia.elements[e].codim, e))
                before = self._measure(t.exps)
                new_terms = self._rewrite(t, x)
                after = []
                for nt in new_terms:
                    m = self._measure(nt.exps)
                    if not m < before:
                        raise InvariantViolation(
                            "termination measure failed to decrease at a rewrite"
                        )
                    after.append(m)
                if trace is not None:
                    trace.append((before, tuple(after)))
                stack.extend(new_terms)
                continue
            self._accumulate(coords, t, burrow)
        return coords

    def _accumulate(self, coords: dict, t: _Term, burrow: str):
        dia = self.diagram
        nest_ids = tuple(sorted(t.exps))
        mu = tuple(sorted(t.exps.items()))
        if burrow == dia.ambient_id and not nest_ids:
            restricted = t.coeff
        else:
            restricted = dia.pullback(dia.ambient_id, burrow).apply(t.coeff)
        for g, q in restricted.coeffs.items():
            key = (nest_ids, mu, g)
            idx = self.index.get(key)
            if idx is None:
                raise InvariantViolation(
                    f"normal form produced an unknown basis key {key}"
                )
            coords[idx] = coords.get(idx, ZERO) + q

    # -- products ----------------------------------------------------------------

    def _pair_term(self, i: int, j: int) -> _Term:
        dia = self.diagram
        _, si, gi, key_i, _ = self.basis[i]
        _, sj, gj, key_j, _ = self.basis[j]
        sa, sb = self.summands[si], self.summands[sj]
        exps: dict = dict(sa.mu.assignment)
        for x, k in sb.mu.assignment:
            exps[x] = exps.get(x, 0) + k
        ca = self.section(sa.burrow).apply_basis(gi)
        cb = self.section(sb.burrow).apply_basis(gj)
        return _Term(exps, self._amb.multiply(ca, cb))

    def basis_product(self, i: int, j: int) -> dict[int, Fraction]:
        a, b = (i, j) if i <= j else (j, i)
        cached = self._cache.get((a, b))
        if cached is None:
            if self.degree_of(a) + self.degree_of(b) > self.diagram.socle_degree:
                cached = {}
            else:
                cached = self._normalize([self._pair_term(a, b)])
            self._cache[(a, b)] = cached
        return cached

    def product_trace(self, i: int, j: int):
        """Recompute one basis product with a rewrite trace (uncached)."""
        trace: list = []
        if self.degree_of(i) + self.degree_of(j) > self.diagram.socle_degree:
            return {}, trace
        coords = self._normalize([self._pair_term(i, j)], trace=trace)
        return coords, trace

    def multiply(self, x: WonderElement, y: WonderElement) -> WonderElement:
        if x.ring is not self or y.ring is not self:
            raise InputError("elements belong to a different ring")
        out: dict[int, Fraction] = {}
        for i, qi in x.coords.items():
            for j, qj in y.coords.items():
                q = qi * qj
                for k, c in self.basis_product(i, j).items():
                    out[k] = out.get(k, ZERO) + q * c
        return WonderElement(self, out)

    # -- element constructors ------------------------------------------------------

    def zero(self) -> WonderElement:
        return WonderElement(self, {})

    def one(self) -> WonderElement:
        return self.from_ambient(self._amb.unit())

    def basis_vector(self, i: int) -> WonderElement:
        return WonderElement(self, {i: ONE})

    def from_ambient(self, elem: Element) -> WonderElement:
        if elem.alg is not self._amb:
            raise InputError("not an ambient class")
        coords = {}
        for g, q in elem.coeffs.items():
            coords[self.index[(tuple(), tuple(), g)]] = q
        return WonderElement(self, coords)

    def monomial(self, exps: dict, coeff: Element | None = None) -> WonderElement:
        """Normal form of coeff * prod E_x^k for an arbitrary exponent map."""
        coeff = coeff if coeff is not None else self._amb.unit()
        exps = {x: int(k) for x, k in exps.items() if k}
        for x in exps:
            if x not in self.diagram.elements:
                raise InputError(f"unknown element id {x!r}")
        return WonderElement(self, self._normalize([_Term(exps, coeff)]))

    def exceptional_class(self, x: str) -> WonderElement:
        return self.monomial({x: 1})

    # -- export -----------------------------------------------------------------------

    def build_all_products(self):
        n = len(self.basis)
        for i in range(n):
            for j in range(i, n):
                self.basis_product(i, j)

    def as_algebra(self) -> GradedAlgebra:
        if self._algebra is None:
            self.build_all_products()
            labels = [[] for _ in range(len(self.dims))]
            for deg, _, _, _, lbl in self.basis:
                labels[deg].append(lbl)
            entries = []
            n = len(self.basis)
            for i in range(1, n):
                for j in range(i, n):
                    for k, q in self.basis_product(i, j).items():
                        entries.append((i, j, k, q))
            self._algebra = GradedAlgebra(self.dims, labels, entries)
        return self._algebra


def build_ring(
    diagram: BurrowDiagram,
    *,
    max_rewrites: int | None = None,
    validate: bool = True,
    eager: bool = True,
) -> WonderRing:
    """Construct the full ring of a diagram; the dimension vector always
    matches the additive decomposition, and all basis products are reduced
    to normal form."""
    if validate:
        diagram.validate().raise_if_failed()
    ring = WonderRing(diagram, max_rewrites=max_rewrites)
    if eager:
        ring.build_all_products()
    return ring


# -- presentation verification ------------------------------------------------------


@dataclass
class RelationInstance:
    description: str
    ok: bool
    detail: str = ""


@dataclass
class RelationFamily:
    name: str
    instances: list = field(default_factory=list)
    informational: bool = False

    @property
    def ok(self) -> bool:
        return self.informational or all(i.ok for i in self.instances)


@dataclass
class PresentationReport:
    families: list

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.families)

    def summary(self) -> str:
        lines = []
        for f in self.families:
            status = "info" if f.informational else ("ok" if f.ok else "FAIL")
            lines.append(f"[{status}] {f.name}: {len(f.instances)} instances")
            for inst in f.instances:
                if not inst.ok or f.informational:
                    mark = "ok" if inst.ok else "FAIL"
                    detail = f" ({inst.detail})" if inst.detail else ""
                    lines.append(f"    {mark} {inst.description}{detail}")
        lines.append(f"result: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)


def presentation_report(ring: WonderRing) -> PresentationReport:
    """Instantiate and evaluate the defining relation families in the built
    ring; every required instance must reduce to exactly zero."""
    dia = ring.diagram
    amb = dia.ambient.algebra
    ids = sorted(dia.elements)
    e_class = {x: ring.exceptional_class(x) for x in ids}

    fam_nonnest = RelationFamily("non-nest products")
    for i, s in enumerate(ids):
        for t in ids[i + 1 :]:
            if dia.is_nest({s, t}) and dia.burrow_of({s, t}) is not None:
                continue
            val = e_class[s] * e_class[t]
            fam_nonnest.instances.append(
                RelationInstance(
                    f"E[{s}]*E[{t}]",
                    val.is_zero(),
                    "" if val.is_zero() else repr(val),
                )
            )

    fam_kernel = RelationFamily("restriction kernels")
    for x in ids:
        pull = dia.pullback(dia.ambient_id, dia.singles[x])
        for k in range(amb.top_degree + 1):
            for ker in pull.kernel_elements(k):
                val = ring.from_ambient(ker) * e_class[x]
                fam_kernel.instances.append(
                    RelationInstance(
                        f"(deg-{k} kernel class)*E[{x}]",
                        val.is_zero(),
                        "" if val.is_zero() else repr(val),
                    )
                )

    fam_monic = RelationFamily("monic relations")
    for x in ids:
        bx = dia.singles[x]
        chern = dia.edges[(bx, dia.ambient_id)].chern
        p = chern.deg
        t_elem = ring.zero()
        for s in dia.elements_below(x):
            t_elem = t_elem - e_class[s]
        val = ring.zero()
        power = ring.one()
        powers = [power]
        for _ in range(p):
            power = power * t_elem
            powers.append(power)
        val = powers[p]
        for i in range(1, p + 1):
            val = val + ring.from_ambient(chern.coefficient(i)) * powers[p - i]
        fam_monic.instances.append(
            RelationInstance(
                f"P[{x}](-sum E) over the ambient",
                val.is_zero(),
                "" if val.is_zero() else repr(val),
            )
        )

    families = [fam_nonnest, fam_kernel, fam_monic]

    named = dia.named_classes
    d_names = {}
    k_names = {}
    for name in named:
        if name.startswith("D") and len(name) == 3:
            d_names[frozenset(name[1:])] = name
        elif name.startswith("K") and len(name) == 2:
            k_names[name[1]] = name
    if d_names:
        families.extend(_named_generator_families(ring, e_class, d_names, k_names))
    return PresentationReport(families)


def _named_generator_families(ring, e_class, d_names, k_names):
    dia = ring.diagram
    named = dia.named_classes
    fam_gen = RelationFamily("named ideal generators")
    indices = sorted({i for pair in d_names for i in pair})
    for x, e in sorted(dia.elements.items()):
        if e.index_set is None:
            continue
        inside = sorted(i for i in indices if i in e.index_set)
        outside = sorted(i for i in indices if i not in e.index_set)
        if len(inside) < 2:
            continue
        for ai in range(len(inside)):
            for bi in range(ai + 1, len(inside)):
                i, j = inside[ai], inside[bi]
                key = frozenset((i, j))
                if key in d_names and j in k_names:
                    cls = named[d_names[key]] + named[k_names[j]]
                    val = ring.from_ambient(cls) * e_class[x]
                    fam_gen.instances.append(
                        RelationInstance(
                            f"({d_names[key]}+{k_names[j]})*E[{x}]",
                            val.is_zero(),
                            "" if val.is_zero() else repr(val),
                        )
                    )
                if i in k_names and j in k_names:
                    cls = named[k_names[i]] - named[k_names[j]]
                    val = ring.from_ambient(cls) * e_class[x]
                    fam_gen.instances.append(
                        RelationInstance(
                            f"({k_names[i]}-{k_names[j]})*E[{x}]",
                            val.is_zero(),
                            "" if val.is_zero() else repr(val),
                        )
                    )
                for k in outside:
                    k1, k2 = frozenset((i, k)), frozenset((j, k))
                    if k1 in d_names and k2 in d_names:
                        cls = named[d_names[k1]] - named[d_names[k2]]
                        val = ring.from_ambient(cls) * e_class[x]
                        fam_gen.instances.append(
                            RelationInstance(
                                f"({d_names[k1]}-{d_names[k2]})*E[{x}]",
                                val.is_zero(),
                                "" if val.is_zero() else repr(val),
                            )
                        )

    fam_pair = RelationFamily("pair-divisor sums", informational=True)
    by_index = {}
    for x, e in dia.elements.items():
        if e.index_set is not None:
            by_index[x] = e.index_set
    for key in sorted(d_names, key=sorted):
        i, j = sorted(key)
        dname = d_names[key]
        covering = [x for x, s in by_index.items() if i in s and j in s]
        pair_elt = next((x for x in covering if by_index[x] == {i, j}), None)
        total = ring.zero()
        for x in covering:
            total = total + e_class[x]
        amb_d = ring.from_ambient(dia.named_classes[dname])
        fm_form = amb_d - total
        strict_sum_zero = total.is_zero()
        total_reading = total
        if pair_elt is not None:
            total_reading = total - e_class[pair_elt] + amb_d
        verdicts = []
        verdicts.append(f"strict sum {'=0' if strict_sum_zero else '!=0'}")
        verdicts.append(
            f"total-transform sum {'=0' if total_reading.is_zero() else '!=0'}"
        )
        fam_pair.instances.append(
            RelationInstance(
                f"sum of E over sets containing {{{i},{j}}} vs {dname}",
                fm_form.is_zero(),
                "; ".join(verdicts),
            )
        )
    return [fam_gen, fam_pair]
