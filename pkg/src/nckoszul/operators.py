"""Graded-symmetric multilinear operators and their insertion Lie structure.

An operator at level n takes n+1 arguments (level -1 operators are constant
elements).  The insertion product of f at level n with g at level m sums
over the C(n+m+1, m+1) shuffles that feed an ordered block of arguments to
g and splice the result into f's first slot; its graded commutator makes
the space of all levels a graded Lie algebra.

Operators are represented by composable evaluators, not coefficient
tensors: the underlying algebras are infinite-dimensional and every
identity here is checked by evaluation.  Evaluators only ever see
homogeneous nonzero arguments; ``MultiOperator.__call__`` handles the
multilinear expansion and memoizes per argument tuple, which is what makes
the recursive bracket formulas affordable.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Callable, Sequence

from .algebra import (
    AlgebraElement,
    AlgebraSignature,
    Endomorphism,
    SignatureMismatch,
    add_scaled,
    element_to_json,
    koszul_sign,
    random_element,
    unit,
    zero,
)
from .report import VerificationReport, failure, success

Evaluator = Callable[[tuple[AlgebraElement, ...]], AlgebraElement]


class MultiOperator:
    """Level-n graded-symmetric multilinear operator (arity n+1).

    ``degree`` is the internal degree: on homogeneous inputs the output
    degree is the input degree sum plus ``degree``.
    """

    __slots__ = ("signature", "level", "degree", "name", "is_zero_op", "_eval", "_memo")

    def __init__(
        self,
        signature: AlgebraSignature,
        level: int,
        degree: int,
        evaluator: Evaluator,
        name: str = "op",
        is_zero_op: bool = False,
    ):
        if level < -1:
            raise ValueError(f"operator level must be >= -1, got {level}")
        self.signature = signature
        self.level = level
        self.degree = degree
        self.name = name
        self.is_zero_op = is_zero_op
        self._eval = evaluator
        self._memo: dict[tuple[AlgebraElement, ...], AlgebraElement] = {}

    @property
    def arity(self) -> int:
        return self.level + 1

    def __call__(self, *args: AlgebraElement) -> AlgebraElement:
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        for a in args:
            if a.signature != self.signature:
                raise SignatureMismatch(f"{self.name} applied to element of another algebra")
        if self.is_zero_op or any(a.is_zero for a in args):
            return zero(self.signature)
        split = [list(a.homogeneous_components().values()) for a in args]
        acc: dict = {}
        for combo in product(*split):
            key = tuple(combo)
            val = self._memo.get(key)
            if val is None:
                val = self._eval(key)
                self._memo[key] = val
            add_scaled(acc, val)
        return AlgebraElement(self.signature, acc)

    def __repr__(self) -> str:
        return f"<MultiOperator {self.name} level={self.level} degree={self.degree}>"


def zero_operator(signature: AlgebraSignature, level: int, degree: int = 0) -> MultiOperator:
    return MultiOperator(
        signature, level, degree, lambda args: zero(signature), name="0", is_zero_op=True
    )


def constant_operator(x: AlgebraElement, degree: int | None = None) -> MultiOperator:
    """Level -1 operator: the constant x (homogeneous)."""
    if x.is_zero:
        return zero_operator(x.signature, -1, 0 if degree is None else degree)
    d = x.homogeneous_degree() if degree is None else degree
    return MultiOperator(x.signature, -1, d, lambda args: x, name="const")


def endo_operator(f: Endomorphism, name: str = "f") -> MultiOperator:
    """Level 0 operator wrapping a linear endomorphism."""
    return MultiOperator(f.signature, 0, f.degree, lambda args: f(args[0]), name=name)


def combine(
    terms: Sequence[tuple[Fraction | int, MultiOperator]],
    signature: AlgebraSignature,
    level: int,
    degree: int,
    name: str = "sum",
) -> MultiOperator:
    """Rational linear combination of same-level, same-degree operators."""
    kept: list[tuple[Fraction, MultiOperator]] = []
    for c, op in terms:
        c = Fraction(c)
        if not c or op.is_zero_op:
            continue
        if op.level != level:
            raise ValueError(f"cannot combine level {op.level} term into level {level} operator")
        if op.degree != degree:
            raise ValueError(
                f"cannot combine degree {op.degree} term into degree {degree} operator"
            )
        if op.signature != signature:
            raise SignatureMismatch("combined operators live over different algebras")
        kept.append((c, op))
    if not kept:
        return zero_operator(signature, level, degree)

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        acc: dict = {}
        for c, op in kept:
            add_scaled(acc, op(*args), c)
        return AlgebraElement(signature, acc)

    return MultiOperator(signature, level, degree, evaluator, name=name)


def scale_operator(op: MultiOperator, c: Fraction | int) -> MultiOperator:
    return combine([(c, op)], op.signature, op.level, op.degree, name=f"{c}*{op.name}")


def mu(n: int, signature: AlgebraSignature) -> MultiOperator:
    """Symmetrized multiplication at level n.

    mu(-1) is the unit constant (unital signatures only), mu(0) the
    identity, and in general

        mu_n(a_0,...,a_n) = 1/(n+1)! * sum over permutations s of
                            sign(s) a_{s(0)} ... a_{s(n)}.
    """
    if n < -1:
        raise ValueError(f"mu level must be >= -1, got {n}")
    if n == -1:
        if not signature.unital:
            raise ValueError("mu(-1) needs a unit; the signature is non-unital")
        return constant_operator(unit(signature))
    if n == 0:
        return MultiOperator(signature, 0, 0, lambda args: args[0], name="mu_0")

    norm = Fraction(1, factorial(n + 1))

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        if all(len(a.terms) == 1 for a in args):
            # single-word arguments: accumulate concatenations directly
            words = []
            coeff = Fraction(1)
            for a in args:
                w, c = next(iter(a.terms.items()))
                words.append(w)
                coeff *= c
            if signature.kind == "free-truncated" and sum(map(len, words)) >= signature.max_len:
                return zero(signature)
            signed = sum(d % 2 != 0 for d in degs) >= 2
            acc: dict = {}
            for pi in permutations(range(n + 1)):
                sign = koszul_sign(pi, degs) if signed else 1
                w: tuple = ()
                for idx in pi:
                    w = w + words[idx]
                c = coeff if sign > 0 else -coeff
                prev = acc.get(w)
                acc[w] = c if prev is None else prev + c
            return AlgebraElement(signature, acc).scale(norm)
        acc2: dict = {}
        for pi in permutations(range(n + 1)):
            sign = koszul_sign(pi, degs)
            prod_elem = args[pi[0]]
            for idx in pi[1:]:
                prod_elem = prod_elem * args[idx]
            add_scaled(acc2, prod_elem, sign)
        return AlgebraElement(signature, acc2).scale(norm)

    return MultiOperator(signature, n, 0, evaluator, name=f"mu_{n}")


def nr_product(f: MultiOperator, g: MultiOperator) -> MultiOperator:
    """Insertion product: level adds, degree adds.

    Cases: f at level -1 gives the zero operator; g at level -1 is plugged
    into f's first slot; otherwise the shuffle sum over ordered block
    choices for g with Koszul signs on the permuted arguments.
    """
    if f.signature != g.signature:
        raise SignatureMismatch("insertion product of operators over different algebras")
    sig = f.signature
    level = f.level + g.level
    degree = f.degree + g.degree
    name = f"({f.name}^{g.name})"
    if f.is_zero_op or g.is_zero_op or f.level == -1:
        # two constants multiply to the zero operator "below" level -1;
        # represent that degenerate case as the zero constant
        return zero_operator(sig, max(level, -1), degree)

    if g.level == -1:
        def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
            return f(g(), *args)

        return MultiOperator(sig, level, degree, evaluator, name=name)

    n, m = f.level, g.level

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for block in combinations(range(n + m + 1), m + 1):
            rest = [i for i in range(n + m + 1) if i not in block]
            sigma = list(block) + rest
            sign = koszul_sign(sigma, degs)
            inner = g(*(args[i] for i in block))
            if inner.is_zero:
                continue
            add_scaled(acc, f(inner, *(args[i] for i in rest)), sign)
        return AlgebraElement(sig, acc)

    return MultiOperator(sig, level, degree, evaluator, name=name)


def nr_bracket(f: MultiOperator, g: MultiOperator) -> MultiOperator:
    """[f, g] = f^g - (-1)^{|f||g|} g^f (graded commutator of the insertion product)."""
    sign = -1 if (f.degree * g.degree) % 2 else 1
    fg = nr_product(f, g)
    gf = nr_product(g, f)
    return combine(
        [(1, fg), (-sign, gf)],
        f.signature,
        max(f.level + g.level, -1),
        f.degree + g.degree,
        name=f"[{f.name},{g.name}]",
    )


# -- tensor (non-symmetric) operators and the composition product ---------------


class TensorOperator:
    """Multilinear operator on ordered tuples (no symmetry assumed)."""

    __slots__ = ("signature", "arity", "degree", "name", "_eval")

    def __init__(
        self,
        signature: AlgebraSignature,
        arity: int,
        degree: int,
        evaluator: Evaluator,
        name: str = "t",
    ):
        if arity < 1:
            raise ValueError("tensor operators take at least one argument")
        self.signature = signature
        self.arity = arity
        self.degree = degree
        self.name = name
        self._eval = evaluator

    def __call__(self, *args: AlgebraElement) -> AlgebraElement:
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        if any(a.is_zero for a in args):
            return zero(self.signature)
        split = [list(a.homogeneous_components().values()) for a in args]
        acc: dict = {}
        for combo in product(*split):
            add_scaled(acc, self._eval(tuple(combo)))
        return AlgebraElement(self.signature, acc)


def tensor_multiplication(signature: AlgebraSignature, arity: int) -> TensorOperator:
    """(v_1,...,v_k) -> v_1 v_2 ... v_k, with no signs."""

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        out = args[0]
        for a in args[1:]:
            out = out * a
        return out

    return TensorOperator(signature, arity, 0, evaluator, name=f"mult_{arity}")


def endo_tensor(f: Endomorphism, name: str = "f") -> TensorOperator:
    return TensorOperator(f.signature, 1, f.degree, lambda args: f(args[0]), name=name)


def gerstenhaber_product(f: TensorOperator, g: TensorOperator) -> TensorOperator:
    """Composition product: insert g into each slot of f with degree shifts.

    f о g (v_0,...,v_p) = sum_i (-1)^{|g|(|v_0|+...+|v_{i-1}|)}
                          f(v_0,...,v_{i-1}, g(v_i,...), ..., v_p).
    """
    if f.signature != g.signature:
        raise SignatureMismatch("composition product of operators over different algebras")
    sig = f.signature
    arity = f.arity + g.arity - 1

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for i in range(f.arity):
            prefix_deg = sum(degs[:i])
            sign = -1 if (g.degree * prefix_deg) % 2 else 1
            inner = g(*args[i : i + g.arity])
            if inner.is_zero:
                continue
            add_scaled(acc, f(*args[:i], inner, *args[i + g.arity :]), sign)
        return AlgebraElement(sig, acc)

    return TensorOperator(sig, arity, f.degree + g.degree, evaluator, name=f"({f.name}o{g.name})")


def symmetrize_map(args: Sequence[AlgebraElement]) -> list[tuple[Fraction, tuple[AlgebraElement, ...]]]:
    """Signed sum over all reorderings of a tuple of homogeneous elements.

    Inhomogeneous entries are split first, so the result is a formal sum of
    homogeneous ordered tuples with rational signs.
    """
    if not args:
        return [(Fraction(1), ())]
    split = [list(a.homogeneous_components().values()) for a in args]
    if any(not s for s in split):
        return []
    out: list[tuple[Fraction, tuple[AlgebraElement, ...]]] = []
    for combo in product(*split):
        degs = [c.homogeneous_degree() for c in combo]
        for pi in permutations(range(len(combo))):
            sign = koszul_sign(pi, degs)
            out.append((Fraction(sign), tuple(combo[i] for i in pi)))
    return out


def symmetrize_operator(t: TensorOperator, name: str | None = None) -> MultiOperator:
    """tN: precompose a tensor operator with the signed symmetrization."""
    sig = t.signature

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for pi in permutations(range(len(args))):
            sign = koszul_sign(pi, degs)
            add_scaled(acc, t(*(args[i] for i in pi)), sign)
        return AlgebraElement(sig, acc)

    return MultiOperator(
        sig, t.arity - 1, t.degree, evaluator, name=name or f"{t.name}N"
    )


# -- symmetry validation ---------------------------------------------------------


def check_symmetry(
    f: MultiOperator,
    samples: int = 20,
    seed: int = 0,
    max_len: int = 2,
    max_terms: int = 2,
) -> VerificationReport:
    """Evaluate f on random tuples and their adjacent transpositions.

    Passes iff swapping slots i, i+1 always multiplies the value by
    (-1)^{|v_i||v_{i+1}|}.  Level <= 0 operators pass vacuously.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    check_id = f"symmetry[{f.name}]"
    if f.arity < 2:
        return success(check_id, 0)
    run = 0
    for _ in range(samples):
        args = tuple(
            random_element(f.signature, rng, max_len=max_len, max_terms=max_terms, homogeneous=True)
            for _ in range(f.arity)
        )
        degs = [a.homogeneous_degree() for a in args]
        base = f(*args)
        for i in range(f.arity - 1):
            swapped = list(args)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            sign = -1 if (degs[i] * degs[i + 1]) % 2 else 1
            run += 1
            lhs = f(*swapped)
            rhs = base.scale(sign)
            if lhs != rhs:
                return failure(
                    check_id,
                    run,
                    {
                        "identity": f"swap of slots {i},{i + 1}",
                        "inputs": [element_to_json(a) for a in args],
                        "lhs": element_to_json(lhs),
                        "rhs": element_to_json(rhs),
                    },
                )
    return success(check_id, run)
