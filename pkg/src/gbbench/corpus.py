"""Polynomial-system corpus: text format, generators, bundled benchmark systems.

System file format, line oriented, '#' starts a comment line:

    name: cyclic-4                (optional)
    provenance: where it is from  (optional)
    vars: x1 x2 x3 x4             (required, before any poly line; most main first)
    poly: x1 + x2 + x3 + x4       (one line per polynomial)

Polynomial grammar: terms joined by + and -, each term an optional integer or
rational coefficient followed by variable factors; '^' raises to a
nonnegative integer power and '*' between factors is optional. Rational
coefficients are rejected unless denominator clearing is requested. Raw term
lists are preserved exactly (order, duplicates, explicit zeros), so
parse(render(spec)) == spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .modfield import PrimeField
from .ordering import MonomialOrder
from .poly import Polynomial, PolyContext

_NAME_KEY = "name"
_PROV_KEY = "provenance"
_VARS_KEY = "vars"
_POLY_KEY = "poly"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SystemSpec:
    """A polynomial system in exact form, independent of field and order.

    polynomials is a tuple of term tuples; each term is (coeff, exps) with a
    Fraction coefficient and an exponent tuple aligned with variables.
    """

    name: str
    variables: tuple
    polynomials: tuple
    provenance: str = ""

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree_multiset(self) -> tuple:
        """Total degrees of the polynomials, sorted descending."""
        degs = []
        for terms in self.polynomials:
            degs.append(max((sum(e) for _, e in terms), default=0))
        return tuple(sorted(degs, reverse=True))

    def has_rational_coeffs(self) -> bool:
        return any(c.denominator != 1 for terms in self.polynomials for c, _ in terms)


def _tokenize_poly(s: str, lineno: int, col0: int, names_longest_first) -> list:
    toks = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        col = col0 + i
        if ch in "+-^*/":
            toks.append((ch, ch, col))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            toks.append(("int", int(s[i:j]), col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            for nm in names_longest_first:
                if s.startswith(nm, i):
                    toks.append(("var", nm, col))
                    i += len(nm)
                    break
            else:
                j = i
                while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                    j += 1
                raise ParseError(f"undeclared variable {s[i:j]!r}", lineno, col)
            continue
        raise ParseError(f"unexpected character {ch!r}", lineno, col)
    return toks


def _parse_poly(s: str, lineno: int, col0: int, varidx: dict, names_longest_first,
                allow_rational: bool) -> tuple:
    toks = _tokenize_poly(s, lineno, col0, names_longest_first)
    if not toks:
        raise ParseError("empty polynomial", lineno, col0)
    n = len(varidx)
    terms = []
    i = 0
    sign = 1
    if toks[i][0] in "+-":
        sign = -1 if toks[i][0] == "-" else 1
        i += 1
    while True:
        term_col = toks[i][2] if i < len(toks) else col0 + len(s)
        coeff = Fraction(sign)
        exps = [0] * n
        seen = False
        if i < len(toks) and toks[i][0] == "int":
            num = toks[i][1]
            num_col = toks[i][2]
            i += 1
            if i < len(toks) and toks[i][0] == "/":
                slash_col = toks[i][2]
                i += 1
                if i >= len(toks) or toks[i][0] != "int":
                    raise ParseError("expected an integer denominator", lineno, slash_col)
                den = toks[i][1]
                i += 1
                if den == 0:
                    raise ParseError("zero denominator", lineno, slash_col)
                coeff *= Fraction(num, den)
                if not allow_rational and coeff.denominator != 1:
                    raise ParseError(
                        "rational coefficient (enable denominator clearing)", lineno, num_col)
            else:
                coeff *= num
            seen = True
            if i < len(toks) and toks[i][0] == "*":
                star_col = toks[i][2]
                i += 1
                if i >= len(toks) or toks[i][0] != "var":
                    raise ParseError("expected a variable after '*'", lineno, star_col)
        while i < len(toks) and toks[i][0] == "var":
            v = varidx[toks[i][1]]
            i += 1
            e = 1
            if i < len(toks) and toks[i][0] == "^":
                caret_col = toks[i][2]
                i += 1
                if i >= len(toks) or toks[i][0] != "int":
                    raise ParseError("expected an integer exponent after '^'", lineno, caret_col)
                e = toks[i][1]
                i += 1
            exps[v] += e
            seen = True
            if i < len(toks) and toks[i][0] == "*":
                star_col = toks[i][2]
                i += 1
                if i >= len(toks) or toks[i][0] != "var":
                    raise ParseError("expected a variable after '*'", lineno, star_col)
        if not seen:
            raise ParseError("empty term", lineno, term_col)
        terms.append((coeff, tuple(exps)))
        if i >= len(toks):
            break
        kind, _, col = toks[i]
        if kind in "+-":
            sign = -1 if kind == "-" else 1
            i += 1
            if i >= len(toks):
                raise ParseError("dangling sign", lineno, col)
        else:
            raise ParseError(f"unexpected {kind!r}", lineno, col)
    return tuple(terms)


def parse_system(text: str, *, name: str | None = None, clear: bool = False) -> SystemSpec:
    """Parse the system text format; errors carry 1-based line and column.

    clear=True accepts rational coefficients and multiplies each polynomial
    through by the least common multiple of its denominators.
    """
    sys_name = None
    provenance = None
    variables = None
    varidx: dict = {}
    names_lf: list = []
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, rest = raw.partition(":")
        key = key.strip()
        col0 = len(raw) - len(rest) + 1
        if key == _NAME_KEY:
            if sys_name is not None:
                raise ParseError("duplicate name line", lineno, 1)
            sys_name = rest.strip()
        elif key == _PROV_KEY:
            if provenance is not None:
                raise ParseError("duplicate provenance line", lineno, 1)
            provenance = rest.strip()
        elif key == _VARS_KEY:
            if variables is not None:
                raise ParseError("duplicate vars line", lineno, 1)
            names = rest.split()
            if not names:
                raise ParseError("vars line lists no variables", lineno, col0)
            for nm in names:
                if not (nm[0].isalpha() or nm[0] == "_") or not all(
                        c.isalnum() or c == "_" for c in nm):
                    raise ParseError(f"bad variable name {nm!r}", lineno, col0 + rest.index(nm))
                if nm in varidx:
                    raise ParseError(f"duplicate variable {nm!r}", lineno, col0 + rest.index(nm))
                varidx[nm] = len(varidx)
            variables = tuple(names)
            names_lf = sorted(names, key=len, reverse=True)
        elif key == _POLY_KEY:
            if variables is None:
                raise ParseError("poly line before vars line", lineno, 1)
            polys.append(_parse_poly(rest, lineno, col0, varidx, names_lf, allow_rational=clear))
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if variables is None:
        raise ParseError("missing vars line", max(1, text.count(chr(10)) + 1), 1)
    if not polys:
        raise ParseError("system has no polynomials", max(1, text.count(chr(10)) + 1), 1)
    spec = SystemSpec(
        name=sys_name if sys_name is not None else (name or "unnamed"),
        variables=variables,
        polynomials=tuple(polys),
        provenance=provenance or "",
    )
    if clear:
        spec = clear_denominators(spec)
    return spec


def _format_terms(terms, variables) -> str:
    parts = []
    for idx, (coeff, exps) in enumerate(terms):
        mag = -coeff if coeff < 0 else coeff
        factors = []
        for nm, e in zip(variables, exps):
            if e == 1:
                factors.append(nm)
            elif e != 0:
                factors.append(f"{nm}^{e}")
        body = "*".join(factors)
        if not body:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if idx == 0:
            parts.append(f"-{piece}" if coeff < 0 else piece)
        else:
            parts.append(f"- {piece}" if coeff < 0 else f"+ {piece}")
    return " ".join(parts)


def render_system(spec: SystemSpec) -> str:
    """Inverse of parse_system: parse(render(spec)) == spec, term for term."""
    lines = []
    if spec.name:
        lines.append(f"name: {spec.name}")
    if spec.provenance:
        lines.append(f"provenance: {spec.provenance}")
    lines.append(f"vars: {' '.join(spec.variables)}")
    for terms in spec.polynomials:
        lines.append(f"poly: {_format_terms(terms, spec.variables)}")
    return "\n".join(lines) + "\n"


def clear_denominators(spec: SystemSpec) -> SystemSpec:
    """Multiply each polynomial by the lcm of its coefficient denominators."""
    out = []
    for terms in spec.polynomials:
        L = 1
        for c, _ in terms:
            L = L * c.denominator // math.gcd(L, c.denominator)
        if L == 1:
            out.append(terms)
        else:
            out.append(tuple((c * L, e) for c, e in terms))
    return SystemSpec(spec.name, spec.variables, tuple(out), spec.provenance)


def permute_variables(spec: SystemSpec, perm) -> SystemSpec:
    """Reorder variables so new position k holds old variable perm[k]."""
    perm = tuple(perm)
    if sorted(perm) != list(range(spec.nvars)):
        raise ValueError(f"not a permutation of 0..{spec.nvars - 1}: {perm}")
    vars_new = tuple(spec.variables[v] for v in perm)
    polys = tuple(
        tuple((c, tuple(e[v] for v in perm)) for c, e in terms)
        for terms in spec.polynomials)
    return SystemSpec(spec.name, vars_new, polys, spec.provenance)


def realize(spec: SystemSpec, order: MonomialOrder, field: PrimeField) -> list:
    """Build engine polynomials for the system under an order and field."""
    if order.n != spec.nvars:
        raise ValueError(f"order is over {order.n} variables, system has {spec.nvars}")
    if spec.has_rational_coeffs():
        raise ValueError(f"system {spec.name!r} has rational coefficients; clear denominators first")
    ctx = PolyContext(spec.nvars, field, order)
    return [ctx.polynomial((e, int(c)) for c, e in terms) for terms in spec.polynomials]


def cyclic_system(k: int) -> SystemSpec:
    """Cyclic k-roots system: for d < k the sum of all cyclically consecutive
    degree-d products, and the full product minus one."""
    if k < 2:
        raise ValueError(f"cyclic needs k >= 2, got {k}")
    variables = tuple(f"x{i + 1}" for i in range(k))
    polys = []
    for d in range(1, k):
        terms = []
        for i in range(k):
            e = [0] * k
            for j in range(d):
                e[(i + j) % k] += 1
            terms.append((Fraction(1), tuple(e)))
        polys.append(tuple(terms))
    polys.append(((Fraction(1), (1,) * k), (Fraction(-1), (0,) * k)))
    return SystemSpec(f"cyclic-{k}", variables, tuple(polys), "cyclic n-roots family")


def katsura_system(k: int) -> SystemSpec:
    """Katsura system in k variables u0..u(k-1): k-1 convolution quadrics
    u_m = sum u_|l| u_|m-l| and the normalization u0 + 2(u1 + ... ) = 1."""
    if k < 2:
        raise ValueError(f"katsura needs k >= 2, got {k}")
    variables = tuple(f"u{i}" for i in range(k))
    polys = []
    for m in range(k - 1):
        acc: dict = {}
        for l in range(-(k - 1), k):
            ml = abs(m - l)
            if ml <= k - 1:
                e = [0] * k
                e[abs(l)] += 1
                e[ml] += 1
                e = tuple(e)
                acc[e] = acc.get(e, Fraction(0)) + 1
        em = [0] * k
        em[m] = 1
        em = tuple(em)
        acc[em] = acc.get(em, Fraction(0)) - 1
        polys.append(tuple((c, e) for e, c in acc.items() if c))
    lin = [(Fraction(1), tuple(1 if i == 0 else 0 for i in range(k)))]
    for i in range(1, k):
        lin.append((Fraction(2), tuple(1 if j == i else 0 for j in range(k))))
    lin.append((Fraction(-1), (0,) * k))
    polys.append(tuple(lin))
    return SystemSpec(f"katsura-{k}", variables, tuple(polys), "Katsura magnetism family")


BUNDLED_KEYS = (
    "lichtblau1",
    "lichtblau2",
    "lichtblau3",
    "trott_geometry",
    "mathematica_help",
    "giovini_variation",
)


def load_bundled(key: str) -> SystemSpec:
    if key not in BUNDLED_KEYS:
        raise KeyError(f"unknown bundled system {key!r}; available: {', '.join(BUNDLED_KEYS)}")
    text = resources.files("gbbench").joinpath("data", f"{key}.txt").read_text()
    return parse_system(text)


def bundled_systems() -> list:
    return [load_bundled(k) for k in BUNDLED_KEYS]
