"""Canonical text for polynomials, singular functions and Laurent series.

One ordering everywhere: terms by total degree (descending), ties broken by
the exponent tuple compared lexicographically (descending). Golden files and
the CLI rely on this being byte-stable.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from src.singfun.functions import SingularFunction
from src.singfun.spaces import Factor, FactorKind, FunctionSpace


def format_rational(c: Any) -> str:
    p, q = int(c.numerator), int(c.denominator)
    return str(p) if q == 1 else f"{p}/{q}"


def _monomial(names: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for name, e in zip(names, exps, strict=True):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def term_order(exps: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (-sum(exps), tuple(-e for e in exps))


def render_terms(names: Sequence[str], terms: Iterable[tuple[tuple[int, ...], Any]]) -> str:
    """Render `coefficient * monomial` pairs as a signed sum."""
    ordered = sorted(((m, c) for m, c in terms if c), key=lambda mc: term_order(mc[0]))
    if not ordered:
        return "0"
    out = []
    for k, (exps, c) in enumerate(ordered):
        negative = c < 0
        mag = -c if negative else c
        mono = _monomial(names, exps)
        coeff = format_rational(mag)
        if not mono:
            body = coeff
        elif coeff == "1":
            body = mono
        else:
            body = f"{coeff}*{mono}"
        if k == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def render_polynomial(space: FunctionSpace, poly: Any) -> str:
    return render_terms(space.names, poly.items())


def _point_text(space: FunctionSpace, point: int) -> str:
    return f"x{point + 1}"


def render_factor(space: FunctionSpace, factor: Factor, exponent: int) -> str:
    if factor.kind is FactorKind.POINT:
        inner = _point_text(space, factor.points[0])
    else:
        i, j = factor.points
        inner = f"{_point_text(space, i)}-{_point_text(space, j)}"
    if space.dim == 1:
        base = inner if factor.kind is FactorKind.POINT else f"({inner})"
    else:
        base = f"q({inner})"
    return f"{base}^-{exponent}"


def _render_bucket(space: FunctionSpace, denom: tuple[tuple[Factor, int], ...], numer: Any) -> str:
    factors = "*".join(render_factor(space, f, e) for f, e in denom)
    terms = list(numer.items())
    if not factors:
        return render_polynomial(space, numer)
    if len(terms) == 1 and not any(terms[0][0]):
        c = terms[0][1]
        if c == 1:
            return factors
        if c == -1:
            return f"-{factors}"
        return f"{format_rational(c)}*{factors}"
    return f"({render_polynomial(space, numer)})*{factors}"


def _bucket_key(denom: tuple[tuple[Factor, int], ...]) -> tuple:
    return tuple((f.kind != FactorKind.POINT, f.points, e) for f, e in denom)


def render_function(f: SingularFunction) -> str:
    """Bucketed canonical form: `(x1-x2)^-2*(x3-x4)^-2 + ...`."""
    buckets = f.buckets
    if not buckets:
        return "0"
    out: list[str] = []
    for k, denom in enumerate(sorted(buckets, key=_bucket_key)):
        text = _render_bucket(f.space, denom, buckets[denom])
        if k == 0:
            out.append(text)
        elif text.startswith("-"):
            out.append(f" - {text[1:]}")
        else:
            out.append(f" + {text}")
    return "".join(out)


def render_laurent(names: Sequence[str], terms: Mapping[tuple[int, ...], Any]) -> str:
    return render_terms(names, terms.items())
