"""Tree-based GP encoding over {OR, AND, XOR, NOT, IF, x1..xn}.

Trees are immutable; every variation builds new nodes along the changed
path and shares the rest. Depth counts edges, so a lone variable has depth
0 and a full tree of depth d has every leaf at level d.

Evaluation is bit-parallel: each node yields a 2**n-bit Python int whose
bit k is the node's value on input k, so one AND/OR/XOR per node computes
the whole truth table.
"""
from __future__ import annotations

import random
import re
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .boolfunc import TruthTable

ARITY = {"OR": 2, "AND": 2, "XOR": 2, "NOT": 1, "IF": 3}
FUNCTIONS = tuple(ARITY)


class GpTree:
    """A node together with its subtree. ``op`` is a function name or a
    1-based variable index."""

    __slots__ = ("op", "children", "depth", "size")

    def __init__(self, op, children: Sequence["GpTree"] = ()):
        children = tuple(children)
        if isinstance(op, int):
            if op < 1 or children:
                raise ValueError(f"invalid variable node x{op}")
        elif ARITY.get(op) != len(children):
            raise ValueError(f"{op} expects {ARITY.get(op)} children, got {len(children)}")
        self.op = op
        self.children = children
        if children:
            self.depth = 1 + max(c.depth for c in children)
            self.size = 1 + sum(c.size for c in children)
        else:
            self.depth = 0
            self.size = 1

    @property
    def node_count(self) -> int:
        return self.size

    @property
    def arity(self) -> int:
        return len(self.children)

    def max_var(self) -> int:
        if not self.children:
            return self.op
        return max(c.max_var() for c in self.children)

    def __str__(self) -> str:
        if not self.children:
            return f"x{self.op}"
        return f"{self.op}({', '.join(str(c) for c in self.children)})"

    def __repr__(self) -> str:
        return f"GpTree({self})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GpTree):
            return NotImplemented
        return str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))


def var(j: int) -> GpTree:
    return GpTree(j)


def node(op: str, *children: GpTree) -> GpTree:
    return GpTree(op, children)


_TOKEN = re.compile(r"\s*(?:(x\d+)|([A-Z]+)|(\()|(\))|(,))")


def parse_tree(text: str) -> GpTree:
    """Parse the prefix form produced by ``str(tree)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse tree at {text[pos:]!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()

    def expr(i: int) -> tuple[GpTree, int]:
        tok = tokens[i]
        if tok.startswith("x"):
            return GpTree(int(tok[1:])), i + 1
        if tok not in ARITY or tokens[i + 1] != "(":
            raise ValueError(f"unexpected token {tok!r}")
        i += 2
        args = []
        while True:
            child, i = expr(i)
            args.append(child)
            if tokens[i] == ")":
                return GpTree(tok, args), i + 1
            if tokens[i] != ",":
                raise ValueError(f"expected ',' got {tokens[i]!r}")
            i += 1

    try:
        tree, end = expr(0)
    except IndexError:
        raise ValueError(f"truncated tree expression {text!r}") from None
    if end != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return tree


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def var_masks(n: int) -> tuple[int, ...]:
    """masks[j] has bit k set iff x_j = 1 in input k (masks[0] unused)."""
    size = 1 << n
    masks = [0]
    for j in range(n):
        period = 1 << (j + 1)
        block = ((1 << (1 << j)) - 1) << (1 << j)
        m = 0
        for start in range(0, size, period):
            m |= block << start
        masks.append(m)
    return tuple(masks)


def _eval(t: GpTree, masks, full: int) -> int:
    op = t.op
    if op.__class__ is int:
        return masks[op]
    ch = t.children
    if op == "XOR":
        return _eval(ch[0], masks, full) ^ _eval(ch[1], masks, full)
    if op == "AND":
        return _eval(ch[0], masks, full) & _eval(ch[1], masks, full)
    if op == "OR":
        return _eval(ch[0], masks, full) | _eval(ch[1], masks, full)
    if op == "NOT":
        return full ^ _eval(ch[0], masks, full)
    c = _eval(ch[0], masks, full)
    return (c & _eval(ch[1], masks, full)) | ((full ^ c) & _eval(ch[2], masks, full))


def eval_bits(t: GpTree, n: int) -> int:
    """Truth table of ``t`` as a 2**n-bit int (bit k = value on input k)."""
    if t.max_var() > n:
        raise ValueError(f"tree uses x{t.max_var()} but n={n}")
    return _eval(t, var_masks(n), (1 << (1 << n)) - 1)


def eval_tree(t: GpTree, n: int) -> TruthTable:
    return TruthTable.from_int(n, eval_bits(t, n))


# --------------------------------------------------------------------------
# navigation
# --------------------------------------------------------------------------

Path = tuple[int, ...]


def walk(t: GpTree, path: Path = ()) -> Iterator[tuple[Path, GpTree]]:
    """Preorder (path, subtree) pairs; ``len(path)`` is the node's level."""
    yield path, t
    for k, c in enumerate(t.children):
        yield from walk(c, path + (k,))


def subtree_at(t: GpTree, path: Path) -> GpTree:
    for k in path:
        t = t.children[k]
    return t


def has_path(t: GpTree, path: Path) -> bool:
    for k in path:
        if k >= len(t.children):
            return False
        t = t.children[k]
    return True


def replace_at(t: GpTree, path: Path, new: GpTree) -> GpTree:
    if not path:
        return new
    k = path[0]
    children = list(t.children)
    children[k] = replace_at(children[k], path[1:], new)
    return GpTree(t.op, children)


def common_region(a: GpTree, b: GpTree, path: Path = ()) -> Iterator[Path]:
    """Positions shared by both trees, descending only through nodes of
    equal arity."""
    yield path
    if a.children and len(a.children) == len(b.children):
        for k, (ca, cb) in enumerate(zip(a.children, b.children)):
            yield from common_region(ca, cb, path + (k,))


# --------------------------------------------------------------------------
# initialization and mutation
# --------------------------------------------------------------------------

def full_tree(n: int, rng: random.Random, depth: int) -> GpTree:
    if depth == 0:
        return GpTree(rng.randint(1, n))
    op = rng.choice(FUNCTIONS)
    return GpTree(op, [full_tree(n, rng, depth - 1) for _ in range(ARITY[op])])


def grow_tree(n: int, rng: random.Random, depth: int) -> GpTree:
    """Koza grow: each non-maximal node is drawn from functions + terminals."""
    if depth == 0:
        return GpTree(rng.randint(1, n))
    k = rng.randrange(len(FUNCTIONS) + n)
    if k >= len(FUNCTIONS):
        return GpTree(k - len(FUNCTIONS) + 1)
    op = FUNCTIONS[k]
    return GpTree(op, [grow_tree(n, rng, depth - 1) for _ in range(ARITY[op])])


def random_tree(
    n: int,
    rng: random.Random,
    max_depth: int,
    method: Optional[str] = None,
    depth: Optional[int] = None,
) -> GpTree:
    """One ramped half-and-half draw: depth uniform in 2..max_depth, method
    full or grow with equal probability."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if depth is None:
        depth = rng.randint(min(2, max_depth), max_depth)
    if method is None:
        method = "full" if rng.random() < 0.5 else "grow"
    if method == "full":
        return full_tree(n, rng, depth)
    if method == "grow":
        return grow_tree(n, rng, depth)
    raise ValueError(f"unknown init method {method!r}")


def subtree_mutation(
    t: GpTree, rng: random.Random, n: int, max_depth: int, path: Optional[Path] = None
) -> GpTree:
    if path is None:
        paths = [p for p, _ in walk(t)]
        path = rng.choice(paths)
    budget = max(0, max_depth - len(path))
    return replace_at(t, path, grow_tree(n, rng, budget))


# --------------------------------------------------------------------------
# crossovers
# --------------------------------------------------------------------------

def _biased_point(t: GpTree, rng: random.Random, internal_bias: float) -> Path:
    internal, leaves = [], []
    for p, s in walk(t):
        (internal if s.children else leaves).append(p)
    if internal and rng.random() < internal_bias:
        return rng.choice(internal)
    return rng.choice(leaves)


def simple_crossover(a: GpTree, b: GpTree, rng: random.Random, internal_bias: float = 0.9) -> GpTree:
    pa = _biased_point(a, rng, internal_bias)
    pb = _biased_point(b, rng, internal_bias)
    return replace_at(a, pa, subtree_at(b, pb))


def uniform_crossover(a: GpTree, b: GpTree, rng: random.Random) -> GpTree:
    """Walk the common region; interior nodes swap labels, boundary nodes
    swap whole subtrees, each with probability 1/2."""
    if a.children and len(a.children) == len(b.children):
        op = b.op if rng.random() < 0.5 else a.op
        return GpTree(op, [uniform_crossover(x, y, rng) for x, y in zip(a.children, b.children)])
    return b if rng.random() < 0.5 else a


def size_fair_crossover(
    a: GpTree, b: GpTree, rng: random.Random, internal_bias: float = 0.9
) -> GpTree:
    """Pick the incoming subtree so its size is, on average, the removed size.

    Candidates are capped at 1 + 2*removed; equal sizes get probability
    1/removed and the smaller/larger groups split the rest so the expected
    size change is zero.
    """
    pa = _biased_point(a, rng, internal_bias)
    removed = subtree_at(a, pa).size
    smaller, equal, larger = [], [], []
    for _, s in walk(b):
        if s.size < removed:
            smaller.append(s)
        elif s.size == removed:
            equal.append(s)
        elif s.size <= 1 + 2 * removed:
            larger.append(s)
    p_equal = 1.0 / removed if equal else 0.0
    if smaller and larger:
        below = sum(removed - s.size for s in smaller) / len(smaller)
        above = sum(s.size - removed for s in larger) / len(larger)
        rest = 1.0 - p_equal
        weights = (p_equal, rest * above / (below + above), rest * below / (below + above))
    elif equal:
        weights = (1.0, 0.0, 0.0)
    elif smaller:
        weights = (0.0, 1.0, 0.0)
    else:
        weights = (0.0, 0.0, 1.0)
    groups = (equal, smaller, larger)
    group = rng.choices(groups, weights=weights)[0]
    return replace_at(a, pa, rng.choice(group))


def one_point_crossover(a: GpTree, b: GpTree, rng: random.Random) -> GpTree:
    path = rng.choice(list(common_region(a, b)))
    return replace_at(a, path, subtree_at(b, path))


def context_preserving_crossover(a: GpTree, b: GpTree, rng: random.Random) -> GpTree:
    """Swap only at a coordinate that exists in both trees."""
    paths = [p for p, _ in walk(a) if has_path(b, p)]
    path = rng.choice(paths)
    return replace_at(a, path, subtree_at(b, path))


CROSSOVERS = ("simple", "uniform", "size_fair", "one_point", "context_preserving")


def gp_crossover(
    a: GpTree,
    b: GpTree,
    rng: random.Random,
    max_depth: int,
    op: Optional[str] = None,
    internal_bias: float = 0.9,
) -> tuple[GpTree, str]:
    """Apply one of the five crossovers; returns (child, operator name).

    An offspring deeper than ``max_depth`` is discarded in favour of ``a``.
    """
    if op is None:
        op = rng.choice(CROSSOVERS)
    if op == "simple":
        child = simple_crossover(a, b, rng, internal_bias)
    elif op == "uniform":
        child = uniform_crossover(a, b, rng)
    elif op == "size_fair":
        child = size_fair_crossover(a, b, rng, internal_bias)
    elif op == "one_point":
        child = one_point_crossover(a, b, rng)
    elif op == "context_preserving":
        child = context_preserving_crossover(a, b, rng)
    else:
        raise ValueError(f"unknown crossover {op!r}")
    if child.depth > max_depth:
        return a, op
    return child, op


def validate(t: GpTree, n: int, max_depth: int) -> None:
    """Structural check used by tests after every variation."""
    for path, s in walk(t):
        if isinstance(s.op, int):
            if not 1 <= s.op <= n or s.children:
                raise AssertionError(f"bad leaf {s} at {path}")
        elif ARITY[s.op] != len(s.children):
            raise AssertionError(f"arity mismatch at {path}")
    if t.depth > max_depth:
        raise AssertionError(f"depth {t.depth} exceeds {max_depth}")


class TreeEncoding:
    """GP encoding plugged into the steady-state engine."""

    name = "gp"

    def __init__(self, n: int, max_depth: int = 8, p_mut: float = 0.5, internal_bias: float = 0.9):
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        self.n = n
        self.max_depth = max_depth
        self.p_mut = p_mut
        self.internal_bias = internal_bias
        self.last_ops: tuple[str, Optional[str]] = ("", None)

    def random(self, rng: random.Random) -> GpTree:
        return random_tree(self.n, rng, self.max_depth)

    def crossover(self, a: GpTree, b: GpTree, rng: random.Random) -> GpTree:
        child, op = gp_crossover(a, b, rng, self.max_depth, internal_bias=self.internal_bias)
        self.last_ops = (op, None)
        return child

    def mutate(self, t: GpTree, rng: random.Random) -> GpTree:
        self.last_ops = (self.last_ops[0], "subtree")
        return subtree_mutation(t, rng, self.n, self.max_depth)

    def vary(self, a: GpTree, b: GpTree, rng: random.Random) -> GpTree:
        child = self.crossover(a, b, rng)
        if rng.random() < self.p_mut:
            child = self.mutate(child, rng)
        return child

    def decode(self, genome: GpTree) -> int:
        return _eval(genome, var_masks(self.n), (1 << (1 << self.n)) - 1)

    def describe(self, genome: GpTree) -> Optional[str]:
        return str(genome)

    def to_table(self, genome: GpTree) -> TruthTable:
        return eval_tree(genome, self.n)
