"""Colored iterated torus links as labeled forests, plus their normalizer.

A link is a forest of [r,s]-labeled paths; each path ends in an arrowhead
carrying a Young-diagram color.  Incidence is stored as a per-path share
depth with the previous path, so the incidence number v(j,k) between paths
is the minimum share depth over the interval (j, k].  A LinkPair joins two
forests (twisted union), optionally reversing the second component (vee)
or twisting by a coprime column (alpha, beta).

Text format (whitespace-insensitive, # comments):

    linkfile  := ["twist" "[" INT "," INT "]"] component
                 [";" ["vee"] component]
    component := "{" pathline ("|" pathline)* "}"
    pathline  := ["^" INT] (labels | "()") "->" diagram
    labels    := "[" INT "," INT "]" ("," "[" INT "," INT "]")*
    diagram   := "(" INT ("," INT)* ")"

A JSON object with the same fields is accepted and emitted as well.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from math import gcd, prod


class NonCoprimeLabel(ValueError):
    pass


class BadShareDepth(ValueError):
    pass


class MoveNotApplicable(ValueError):
    pass


# ---------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class Path:
    labels: tuple          # ((r, s), ...), possibly empty (pure arrowhead)
    color: tuple           # Young diagram, weakly decreasing positive rows
    share: int = 0         # depth shared with the previous path

    def __post_init__(self):
        for r, s in self.labels:
            if gcd(r, s) != 1:
                raise NonCoprimeLabel(f"[{r},{s}]")
        if not all(v > 0 for v in self.color) or \
                any(a < b for a, b in zip(self.color, self.color[1:])):
            raise ValueError(f"bad diagram {self.color}")
        if self.share < 0 or self.share > len(self.labels):
            raise BadShareDepth(str(self.share))


@dataclass(frozen=True)
class ColoredForest:
    paths: tuple

    def __post_init__(self):
        prev = None
        for p in self.paths:
            if prev is None:
                if p.share:
                    raise BadShareDepth("first path cannot share")
            else:
                if p.share > len(prev.labels):
                    raise BadShareDepth(str(p.share))
                if p.labels[:p.share] != prev.labels[:p.share]:
                    raise BadShareDepth("shared prefix labels differ")
            prev = p

    def incidence(self, j, k):
        """v(j,k): number of shared vertices between paths j and k."""
        if j == k:
            return len(self.paths[j].labels)
        lo, hi = min(j, k), max(j, k)
        return min(p.share for p in self.paths[lo + 1:hi + 1])


@dataclass(frozen=True)
class LinkPair:
    first: ColoredForest
    second: ColoredForest = None
    vee: bool = False
    twist: tuple = None    # (alpha, beta) column

    def __post_init__(self):
        if self.twist is not None and gcd(*self.twist) != 1:
            raise NonCoprimeLabel(f"twist {self.twist}")
        if self.vee and self.second is None and self.twist is None:
            raise ValueError("vee needs a second component or twist")

    def forests(self):
        return (self.first,) if self.second is None else \
            (self.first, self.second)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s+|#[^\n]*|(->|-?\d+|[][(){},;|^]|\w+)")


def _tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxError(f"bad character {text[pos]!r} at {pos}")
        if m.group(1):
            out.append((m.group(1), pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, want=None):
        if self.i >= len(self.toks):
            raise SyntaxError(f"unexpected end of input, expected {want}")
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            raise SyntaxError(f"expected {want!r} at {pos}, got {tok!r}")
        self.i += 1
        return tok

    def int_(self):
        tok = self.take()
        try:
            return int(tok)
        except ValueError:
            raise SyntaxError(f"expected integer, got {tok!r}") from None

    def pair(self, close="]"):
        self.take("[")
        r = self.int_()
        self.take(",")
        s = self.int_()
        self.take(close)
        return (r, s)

    def pathline(self, first):
        share = None
        if self.peek() == "^":
            self.take()
            share = self.int_()
        labels = []
        if self.peek() == "(":
            self.take("(")
            self.take(")")
        else:
            labels.append(self.pair())
            while self.peek() == ",":
                self.take()
                labels.append(self.pair())
        self.take("->")
        self.take("(")
        color = [self.int_()]
        while self.peek() == ",":
            self.take()
            color.append(self.int_())
        self.take(")")
        labels = tuple(labels)
        if share is None:       # default: maximal common prefix
            share = 0
            if first is not None:
                while share < min(len(first), len(labels)) and \
                        first[share] == labels[share]:
                    share += 1
        return Path(labels, tuple(color), share)

    def component(self):
        self.take("{")
        paths = [self.pathline(None)]
        while self.peek() == "|":
            self.take()
            paths.append(self.pathline(paths[-1].labels))
        self.take("}")
        return ColoredForest(tuple(paths))

    def linkfile(self):
        twist = None
        if self.peek() == "twist":
            self.take()
            a, b = self.pair()
            twist = (a, b)
        first = self.component()
        second, vee = None, False
        if self.peek() == ";":
            self.take()
            if self.peek() == "vee":
                self.take()
                vee = True
            second = self.component()
        if self.i < len(self.toks):
            raise SyntaxError(f"trailing input at {self.toks[self.i][1]}")
        return LinkPair(first, second, vee, twist)


def _from_json(obj):
    comps = [ColoredForest(tuple(
        Path(tuple(map(tuple, p["labels"])), tuple(p["color"]),
             p.get("share", 0)) for p in comp))
        for comp in obj["components"]]
    if not 1 <= len(comps) <= 2:
        raise SyntaxError("need one or two components")
    return LinkPair(comps[0], comps[1] if len(comps) > 1 else None,
                    bool(obj.get("vee")),
                    tuple(obj["twist"]) if obj.get("twist") else None)


def parse_dsl(text):
    try:
        obj = json.loads(text)
    except ValueError:
        return _Parser(text).linkfile()
    return _from_json(obj)


def to_dsl(pair):
    def comp(forest):
        lines, prev = [], None
        for p in forest.paths:
            lab = ",".join(f"[{r},{s}]" for r, s in p.labels) or "()"
            default = 0
            if prev is not None:
                while default < min(len(prev), len(p.labels)) and \
                        prev[default] == p.labels[default]:
                    default += 1
            mark = "" if p.share == default else f"^{p.share} "
            lines.append(f"{mark}{lab}->({','.join(map(str, p.color))})")
            prev = p.labels
        return "{" + " | ".join(lines) + "}"

    out = ""
    if pair.twist:
        out += f"twist [{pair.twist[0]},{pair.twist[1]}] "
    out += comp(pair.first)
    if pair.second is not None:
        out += " ; " + ("vee " if pair.vee else "") + comp(pair.second)
    return out


def to_json(pair):
    return json.dumps({
        "twist": list(pair.twist) if pair.twist else None,
        "vee": pair.vee,
        "components": [[{"share": p.share,
                         "labels": [list(l) for l in p.labels],
                         "color": list(p.color)} for p in f.paths]
                       for f in pair.forests()]})


# ---------------------------------------------------------------------------
# cab parameters and linking numbers


def cab_params(forest):
    """Per-path cable parameters (a_i, r_i): a_1 = s_1, a_i = a_{i-1}
    r_{i-1} r_i + s_i.  Shared prefixes produce identical values."""
    out = []
    for p in forest.paths:
        row, a = [], 0
        for i, (r, s) in enumerate(p.labels):
            a = s if i == 0 else a * p.labels[i - 1][0] * r + s
            row.append((a, r))
        out.append(tuple(row))
    return tuple(out)


def linking_number(forest, j, k):
    if j == k:
        raise ValueError("j != k required")
    io = forest.incidence(j, k)
    if io == 0:
        return 0
    a, r = cab_params(forest)[j][io - 1]
    tail = lambda p: prod(rr for rr, _ in p.labels[io:])
    return a * r * tail(forest.paths[j]) * tail(forest.paths[k])


# ---------------------------------------------------------------------------
# moves

def _block(forest, j, depth):
    """Contiguous range of paths sharing vertex `depth` with path j."""
    lo = hi = j
    while lo > 0 and forest.paths[lo].share >= depth:
        lo -= 1
    while hi + 1 < len(forest.paths) and forest.paths[hi + 1].share >= depth:
        hi += 1
    return lo, hi


def _edit(pair, comp, forest):
    if comp == 0:
        return replace(pair, first=forest)
    return replace(pair, second=forest)


def _site(pair, site):
    comp, j, i = site if len(site) == 3 else (0,) + tuple(site)
    forest = pair.forests()[comp]
    if not 0 <= j < len(forest.paths) or \
            not 1 <= i <= len(forest.paths[j].labels):
        raise MoveNotApplicable(f"no vertex at {site}")
    return comp, forest, j, i


def drop_r0(pair, site):
    """Delete vertices 1..i0 from every path through an r=0 vertex (4.4)."""
    comp, forest, j, i = _site(pair, site)
    if forest.paths[j].labels[i - 1][0] != 0:
        raise MoveNotApplicable("r != 0")
    lo, hi = _block(forest, j, i)
    paths = []
    for k, p in enumerate(forest.paths):
        if lo <= k <= hi:
            share = 0 if k == lo else p.share - i
            p = Path(p.labels[i:], p.color, max(share, 0))
        elif k == hi + 1:
            # the prefix it shared with the block is gone: detach as a new
            # subtree
            p = Path(p.labels, p.color, 0)
        paths.append(p)
    return _edit(pair, comp, ColoredForest(tuple(paths)))


def contract_r1(pair, site):
    """Remove an r=1 vertex, folding its s into the next one (4.5)."""
    comp, forest, j, i = _site(pair, site)
    if forest.paths[j].labels[i - 1][0] != 1:
        raise MoveNotApplicable("r != 1")
    lo, hi = _block(forest, j, i)
    s0 = forest.paths[j].labels[i - 1][1]
    paths = []
    for k, p in enumerate(forest.paths):
        if lo <= k <= hi:
            lab = list(p.labels)
            del lab[i - 1]
            if i - 1 < len(lab):
                r1, s1 = lab[i - 1]
                lab[i - 1] = (r1, s1 + s0 * r1)
            share = p.share - 1 if p.share >= i else p.share
            p = Path(tuple(lab), p.color, share)
        paths.append(p)
    return _edit(pair, comp, ColoredForest(tuple(paths)))


def transpose_first(pair, site=(0, 0)):
    """Swap [r1,s1] at the initial vertex of the subtree of a path (4.6)."""
    comp, j = site
    forest = pair.forests()[comp]
    if not forest.paths[j].labels:
        raise MoveNotApplicable("pure arrowhead")
    lo, hi = _block(forest, j, 1)
    paths = []
    for k, p in enumerate(forest.paths):
        if lo <= k <= hi:
            r, s = p.labels[0]
            p = replace(p, labels=((s, r),) + p.labels[1:])
        paths.append(p)
    return _edit(pair, comp, ColoredForest(tuple(paths)))


def mirror(pair):
    """Mirror image: negate every s (4.8)."""
    def neg(forest):
        return ColoredForest(tuple(
            replace(p, labels=tuple((r, -s) for r, s in p.labels))
            for p in forest.paths))
    out = replace(pair, first=neg(pair.first))
    if pair.second is not None:
        out = replace(out, second=neg(pair.second))
    return out


def reorient(pair, sites):
    """Reverse the selected components: negate [r,s] at the last vertex of
    each selected path (4.9 with i = l, a single orientation change)."""
    sites = {s if len(s) == 2 else (0, s[0]) for s in
             (tuple(s) if isinstance(s, (tuple, list)) else (s,)
              for s in sites)}
    forests = list(pair.forests())
    done = set()
    for comp, j in sorted(sites):
        if (comp, j) in done:
            continue
        forest = forests[comp]
        p = forest.paths[j]
        if not p.labels:
            raise MoveNotApplicable("pure arrowhead")
        lo, hi = _block(forest, j, len(p.labels))
        block = {(comp, k) for k in range(lo, hi + 1)
                 if len(forest.paths[k].labels) == len(p.labels)}
        if not block <= sites:
            raise MoveNotApplicable("last vertex shared with kept path")
        paths = list(forest.paths)
        for _, k in block:
            q = paths[k]
            r, s = q.labels[-1]
            paths[k] = replace(q, labels=q.labels[:-1] + ((-r, -s),))
            done.add((comp, k))
        forests[comp] = ColoredForest(tuple(paths))
    out = replace(pair, first=forests[0])
    if pair.second is not None:
        out = replace(out, second=forests[1])
    return out


_MOVES = {"drop_r0": drop_r0, "contract_r1": contract_r1,
          "transpose_first": transpose_first, "mirror": mirror,
          "reorient": reorient}


def normalize_moves(pair, move, *args):
    try:
        fn = _MOVES[move]
    except KeyError:
        raise MoveNotApplicable(move) from None
    return fn(pair, *args)


# ---------------------------------------------------------------------------
# positivity, twisting, a-degree


def lower_twist(pair):
    """Replace a twist column (alpha, beta) by the vertex [beta, alpha]
    prepended to every path of the second component (9.12); the result is
    a plain vee-pair ([-beta, -alpha] when vee was not requested)."""
    if pair.twist is None:
        return pair
    alpha, beta = pair.twist
    if not pair.vee:
        alpha, beta = -alpha, -beta
    second = pair.second or ColoredForest((Path((), (1,)),))
    paths = tuple(replace(p, labels=((beta, alpha),) + p.labels,
                          share=p.share + 1 if i else 0)
                  for i, p in enumerate(second.paths))
    return LinkPair(pair.first, ColoredForest(paths), True, None)


def _positive(forest):
    return all(r > 0 and s > 0 for p in forest.paths for r, s in p.labels)


def _meridian(forest):
    return all(p.labels in ((), ((1, 0),)) for p in forest.paths)


def _head(forest):
    for p in forest.paths:
        if p.labels:
            return p.labels[0]
    return None


def classify_positive(pair):
    """positive_tree / positive_pair / generic (§4.3, §9.3)."""
    if pair.twist is not None:
        alpha, beta = pair.twist
        trees = [f for f in pair.forests()]
        if pair.vee and alpha > 0 and beta > 0 and all(map(_positive, trees)):
            head = _head(pair.second) if pair.second else _head(pair.first)
            if head is None or alpha * head[1] > beta * head[0]:
                return "positive_pair"
        return "generic"
    if pair.second is None:
        return "positive_tree" if _positive(pair.first) else "generic"
    if pair.vee and _positive(pair.first) and \
            (_meridian(pair.second) or _positive(pair.second)):
        h1, h2 = _head(pair.first), _head(pair.second)
        if _meridian(pair.second) or h1 is None or \
                h1[1] * h2[1] > h1[0] * h2[0]:
            return "positive_pair"
    return "generic"


def _diagram_join(colors):
    rows = max(map(len, colors))
    return tuple(max(c[i] if i < len(c) else 0 for c in colors)
                 for i in range(rows))


def _delta(pair, normalization):
    colors = [p.color for f in pair.forests() for p in f.paths]
    if normalization == "min":
        return sum(_diagram_join(colors))
    if normalization == "none":
        return 0
    kind, idx = normalization
    if kind != "j_o":
        raise ValueError(f"bad normalization {normalization}")
    return sum(colors[idx])


def deg_a_bound(pair, normalization="min"):
    """a-degree bound (5.40) and, for positive vee-pairs and positive
    trees, the conjectured exact value (5.41)."""
    pair = lower_twist(pair)
    bound = exact = -_delta(pair, normalization)
    for f in pair.forests():
        for p in f.paths:
            boxes = sum(p.color)
            tail = prod(abs(r) for r, _ in p.labels[1:])
            if p.labels:
                r1, s1 = p.labels[0]
                bound += max(1, abs(r1)) * tail * boxes
                exact += max(1, min(abs(r1), abs(s1)) * tail) * boxes
            else:
                bound += boxes
                exact += boxes
    cls = classify_positive(pair)
    exact_ok = cls == "positive_pair" or \
        (cls == "positive_tree" and pair.second is None)
    return bound, (exact if exact_ok else None)


# ---------------------------------------------------------------------------
# splice export


def _splice_tree(forest, out, indent):
    cab = cab_params(forest)

    def emit(depth, lo, hi, pad):
        k = lo
        while k <= hi:
            p = forest.paths[k]
            if len(p.labels) == depth:
                out.append(f"{pad}arrow ({','.join(map(str, p.color))})")
                k += 1
                continue
            end = k
            while end + 1 <= hi and \
                    forest.paths[end + 1].share >= depth + 1:
                end += 1
            a, r = cab[k][depth]
            out.append(f"{pad}node a={a} r={r}")
            emit(depth + 1, k, end, pad + "  ")
            k = end + 1

    emit(0, 0, len(forest.paths) - 1, indent)


def splice_export(pair):
    """Deterministic indented splice diagram; pairs are joined through the
    arc / intermediate-node convention of (4.13)."""
    out = ["splice"]
    if pair.twist:
        out.append(f"  twist [{pair.twist[0]},{pair.twist[1]}]")
    if pair.second is None and pair.twist is None:
        _splice_tree(pair.first, out, "  ")
    else:
        out.append("  arc" + (" vee" if pair.vee else ""))
        _splice_tree(pair.first, out, "    ")
        if pair.second is not None:
            out.append("  --")
            _splice_tree(pair.second, out, "    ")
    return "\n".join(out) + "\n"
