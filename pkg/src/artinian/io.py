"""Text formats for ring presentations and polynomial systems.

Ring file::

    # comment
    field 3 2            (or: zmod 4 ... i.e. "zmod p e")
    vars S T
    order grlex
    max-degree 12
    adjoin W: W^2 + W + 1   (optional, repeatable: adjoin a root after building)
    relations
    S^2
    S*T^2 - t*T^3        (t is the field generator when k > 1)

System file::

    vars x y
    [equations]
    x^2 + 1
    [inequations]
    x - y

System coefficients may use the ring's generator names.
"""

from __future__ import annotations

from .fields import FieldTower, NotPrimeError, is_prime
from .linalg import Field, IntegersMod
from .localring import (DEFAULT_MAX_DEGREE, MonomialOrder, Presentation, PresentationError, RingError,
                        adjoin_root, build)
from .poly import PolySyntaxError, parse_polynomial


class InputError(ValueError):
    """A malformed input file; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message, line=0, source="<input>"):
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)
        self.line = line


def _lines(text):
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield i, s


def _int(tok, line, source, what):
    try:
        return int(tok)
    except ValueError:
        raise InputError(f"{what} must be an integer, got {tok!r}", line, source) from None


def _field_poly(F, variables, text):
    """Parse text over F_{p^k}: integer polynomial in variables and t."""
    if "t" in variables:
        raise ValueError("the name 't' is reserved for the field generator")
    poly, _ = parse_polynomial(text, list(variables) + ["t"])
    g = F.generator()
    out = {}
    for exps, c in poly.items():
        key = exps[:-1]
        val = F.mul(F.from_int(c), F.power(g, exps[-1]))
        out[key] = F.add(out.get(key, 0), val)
    return {k: v for k, v in out.items() if v}


def parse_ring_presentation(text, source="<ring>", order=None, max_degree=None, with_adjoins=False):
    """Presentation described by ``text``; ``order``/``max_degree`` override the file."""
    coeff = None
    variables = None
    file_order = "grlex"
    file_deg = DEFAULT_MAX_DEGREE
    relations = []
    adjoins = []
    in_rel = False
    for ln, s in _lines(text):
        if in_rel:
            relations.append((ln, s))
            continue
        parts = s.split()
        key = parts[0].lower()
        if key in ("field", "zmod"):
            if len(parts) != 3:
                raise InputError(f"expected '{key} p {'k' if key == 'field' else 'e'}'", ln, source)
            p = _int(parts[1], ln, source, "p")
            n = _int(parts[2], ln, source, "k" if key == "field" else "e")
            if not is_prime(p):
                raise InputError(f"{p} is not prime", ln, source)
            if n < 1:
                raise InputError("degree/exponent must be >= 1", ln, source)
            if key == "field" and n > 1:
                coeff = Field(FieldTower(p, n))
            elif key == "field":
                coeff = IntegersMod(p, 1)
            else:
                coeff = IntegersMod(p, n)
        elif key == "vars":
            variables = tuple(parts[1:])
            for v in variables:
                if not v.isidentifier():
                    raise InputError(f"bad variable name {v!r}", ln, source)
            if len(set(variables)) != len(variables):
                raise InputError("duplicate variable", ln, source)
        elif key == "order":
            if len(parts) != 2 or parts[1] not in ("lex", "grlex"):
                raise InputError("order must be 'lex' or 'grlex'", ln, source)
            file_order = parts[1]
        elif key in ("max-degree", "max_degree"):
            if len(parts) != 2:
                raise InputError("expected 'max-degree N'", ln, source)
            file_deg = _int(parts[1], ln, source, "max-degree")
        elif key == "adjoin":
            body = s[len(parts[0]):].strip()
            name, sep, poly = body.partition(":")
            name = name.strip()
            if not sep or not name.isidentifier() or not poly.strip():
                raise InputError("expected 'adjoin NAME: polynomial'", ln, source)
            adjoins.append((ln, name, poly.strip()))
        elif key == "relations":
            if len(parts) > 1:
                raise InputError("relations start on the next line", ln, source)
            in_rel = True
        else:
            raise InputError(f"unknown directive {parts[0]!r}", ln, source)
    if coeff is None:
        raise InputError("missing 'field p k' or 'zmod p e' line", 0, source)
    if variables is None:
        variables = ()
    if isinstance(coeff, Field) and "t" in variables:
        raise InputError("'t' names the field generator and cannot be a variable", 0, source)
    rels = []
    for ln, s in relations:
        try:
            if isinstance(coeff, Field):
                rels.append(_field_poly(coeff.tower, variables, s))
            else:
                poly, _ = parse_polynomial(s, variables)
                rels.append({k: c % coeff.modulus for k, c in poly.items() if c % coeff.modulus})
        except PolySyntaxError as exc:
            raise InputError(str(exc), ln, source) from None
    order = order or file_order
    max_degree = file_deg if max_degree is None else max_degree
    pres = Presentation(coeff, tuple(variables), tuple(rels),
                        MonomialOrder(order, len(variables)), max_degree)
    return (pres, adjoins) if with_adjoins else pres


def parse_ring_text(text, name=None, source="<ring>", order=None, max_degree=None):
    if not isinstance(text, str):
        text = "\n".join(text)
    pres, adjoins = parse_ring_presentation(text, source, order=order, max_degree=max_degree,
                                            with_adjoins=True)
    try:
        R = build(pres, name=name or source)
    except PresentationError as exc:
        raise InputError(str(exc), 0, source) from exc
    for ln, var, poly in adjoins:
        if var in R.gen_names:
            raise InputError(f"{var!r} is already a generator", ln, source)
        try:
            R = adjoin_root(R, poly, var=var)
        except (PolySyntaxError, RingError) as exc:
            raise InputError(str(exc), ln, source) from exc
    R.name = name or source
    return R


def load_ring(path, order=None, max_degree=None):
    with open(path) as fh:
        text = fh.read()
    return parse_ring_text(text, name=str(path), source=str(path), order=order, max_degree=max_degree)


def parse_system_text(ring, text, source="<system>"):
    """Parse a system file over ``ring``; returns a ``transfer.PolySystem``."""
    from .transfer import PolySystem

    variables = None
    section = None
    eqs, ineqs = [], []
    for ln, s in _lines(text):
        low = s.lower()
        if low.startswith("vars"):
            if section is not None:
                raise InputError("'vars' must come before the sections", ln, source)
            variables = tuple(s.split()[1:])
            clash = set(variables) & set(ring.gen_names)
            if clash:
                raise InputError(f"unknown {sorted(clash)[0]!r} clashes with a ring generator", ln, source)
            continue
        if low in ("[equations]", "[inequations]"):
            section = low[1:-1]
            continue
        if section is None:
            raise InputError("expected 'vars', '[equations]' or '[inequations]'", ln, source)
        if variables is None:
            raise InputError("missing 'vars' header", ln, source)
        try:
            poly = ring_poly(ring, variables, s)
        except PolySyntaxError as exc:
            raise InputError(str(exc), ln, source) from None
        (eqs if section == "equations" else ineqs).append(poly)
    if variables is None:
        raise InputError("missing 'vars' header", 0, source)
    return PolySystem(ring, variables, eqs, ineqs)


def ring_poly(ring, variables, text):
    """Polynomial in ``variables`` with coefficients from ``ring`` (as ring
    elements), parsed from text that may mention the ring's generators."""
    names = list(variables) + list(ring.gen_names)
    poly, _ = parse_polynomial(text, names)
    nv = len(variables)
    out = {}
    for exps, c in poly.items():
        key = exps[:nv]
        cpart = {tuple(exps[nv:]): c}
        val = ring.eval_poly(cpart)
        out[key] = out[key] + val if key in out else val
    return {k: v for k, v in out.items() if v}


def load_system(ring, path):
    with open(path) as fh:
        return parse_system_text(ring, fh.read(), source=str(path))


__all__ = ["InputError", "parse_ring_presentation", "parse_ring_text", "load_ring",
           "parse_system_text", "load_system", "ring_poly", "NotPrimeError"]
