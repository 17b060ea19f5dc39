"""Higher Koszul brackets by three independent constructions.

Given a homogeneous element x or endomorphism f of a unital graded
associative algebra, the bracket hierarchy Psi^n (and its reduced variant
Phi^n) is produced by

* the recursive formulas driven by the insertion bracket with the
  symmetrized multiplications,
* Bering's closed double/triple sums with two-index Bernoulli coefficients,
* Bandiera's nested-commutator sums weighted by Bernoulli numbers,

plus the exponential-adjoint construction with configurable gauge
coefficients, which also covers non-unital algebras.  The constructions are
implemented independently, by literal term enumeration, and are compared
against each other only in the verification layer; nothing here assumes
they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Mapping, Sequence, Union

from .algebra import (
    AlgebraElement,
    AlgebraSignature,
    CommutatorEndo,
    Endomorphism,
    LeftMultEndo,
    add_scaled,
    graded_commutator,
    koszul_sign,
    unit,
    zero,
)
from .operators import (
    MultiOperator,
    combine,
    constant_operator,
    endo_operator,
    mu,
    nr_bracket,
    zero_operator,
)
from .tables import bernoulli, bernoulli_two_index, gauge_k

BracketSource = Union[AlgebraElement, Endomorphism]

FORMULAS = ("recursive", "bering", "bandiera", "commutative", "exp-adjoint")


@dataclass(frozen=True)
class GaugePreset:
    """Coefficient sequence K_1, K_2, ... steering the exp-adjoint construction."""

    name: str
    coefficient: Callable[[int], Fraction]


def gauge_preset(name: str) -> GaugePreset:
    if name == "koszul":
        return GaugePreset("koszul", gauge_k)
    if name == "borjeson":
        return GaugePreset("borjeson", lambda n: Fraction(1) if n == 1 else Fraction(0))
    if name == "trivial":
        return GaugePreset("trivial", lambda n: Fraction(0))
    raise ValueError(f"unknown gauge preset {name!r}")


KOSZUL_PRESET = gauge_preset("koszul")
BORJESON_PRESET = gauge_preset("borjeson")
TRIVIAL_PRESET = gauge_preset("trivial")


@dataclass
class BracketFamily:
    """The sequence of bracket operators attached to one source.

    ``members[n]`` is the arity-n operator (level n-1); all members share
    the internal degree of the source.
    """

    source: BracketSource | None
    signature: AlgebraSignature
    reduced: bool
    formula: str
    max_arity: int
    members: list[MultiOperator]

    def member(self, n: int) -> MultiOperator:
        if not 0 <= n <= self.max_arity:
            raise ValueError(f"arity {n} outside the built range 0..{self.max_arity}")
        return self.members[n]


def _source_signature(source: BracketSource) -> AlgebraSignature:
    return source.signature


def _source_degree(source: BracketSource) -> int:
    if isinstance(source, AlgebraElement):
        return source.homogeneous_degree()
    return source.degree


def _require_unital(signature: AlgebraSignature, what: str) -> None:
    if not signature.unital:
        raise ValueError(f"{what} requires a unital algebra")


def _ordered_product(
    signature: AlgebraSignature, factors: Sequence[AlgebraElement]
) -> AlgebraElement:
    out = unit(signature)
    for a in factors:
        out = out * a
    return out


# -- recursive construction ------------------------------------------------------


def phi_family(source: BracketSource, max_arity: int, degree: int | None = None) -> BracketFamily:
    """Reduced brackets Phi^0..Phi^max_arity by the recursive formulas.

    Element source x:   Phi^0 = x,  Phi^n = 1/n sum_{h=1}^{n} (-1)^{h+1} [Phi^{n-h}, mu_h].
    Endomorphism f:     Phi^0 = 0,  Phi^1 = f,
                        Phi^{n+1} = 1/n sum_{h=1}^{n} (-1)^{h+1} [Phi^{n-h+1}, mu_h].
    """
    sig = _source_signature(source)
    _require_unital(sig, "the recursive construction")
    if max_arity < 0:
        raise ValueError("max_arity must be >= 0")

    mus = {h: mu(h, sig) for h in range(1, max_arity + 1)}

    if isinstance(source, AlgebraElement):
        deg = source.homogeneous_degree() if degree is None else degree
        members = [constant_operator(source, degree=deg)]
        for n in range(1, max_arity + 1):
            terms = [
                (Fraction((-1) ** (h + 1), n), nr_bracket(members[n - h], mus[h]))
                for h in range(1, n + 1)
            ]
            members.append(combine(terms, sig, n - 1, deg, name=f"phi^{n}"))
        return BracketFamily(source, sig, True, "recursive", max_arity, members)

    f = source
    deg = f.degree if degree is None else degree
    members = [zero_operator(sig, -1, deg)]
    if max_arity >= 1:
        members.append(endo_operator(f, name="phi^1"))
    for n in range(1, max_arity):
        terms = [
            (Fraction((-1) ** (h + 1), n), nr_bracket(members[n - h + 1], mus[h]))
            for h in range(1, n + 1)
        ]
        members.append(combine(terms, sig, n, deg, name=f"phi^{n + 1}"))
    return BracketFamily(source, sig, True, "recursive", max_arity, members)


def psi_family(source: BracketSource, max_arity: int, formula: str = "recursive") -> BracketFamily:
    """Full brackets Psi^0..Psi^max_arity by the requested construction."""
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose one of {FORMULAS}")
    sig = _source_signature(source)

    if formula == "recursive":
        if isinstance(source, AlgebraElement):
            fam = phi_family(source, max_arity)
            return BracketFamily(source, sig, False, "recursive", max_arity, fam.members)
        f = source
        _require_unital(sig, "the recursive construction")
        f_of_1 = f(unit(sig))
        phi_f = phi_family(f, max_arity)
        phi_f1 = phi_family(f_of_1, max_arity, degree=f.degree)
        members = [
            combine(
                [(1, phi_f.members[n]), (1, phi_f1.members[n])],
                sig,
                n - 1,
                f.degree,
                name=f"psi^{n}",
            )
            for n in range(max_arity + 1)
        ]
        return BracketFamily(source, sig, False, "recursive", max_arity, members)

    if formula == "bering":
        members = [psi_bering(source, n) for n in range(max_arity + 1)]
    elif formula == "bandiera":
        members = [psi_bandiera(source, n) for n in range(max_arity + 1)]
    elif formula == "commutative":
        if not isinstance(source, Endomorphism):
            raise ValueError("the commutative closed formula takes an endomorphism source")
        members = [psi_commutative(source, n) for n in range(max_arity + 1)]
    else:  # exp-adjoint
        fam = exp_adjoint(source, KOSZUL_PRESET, max_arity)
        return BracketFamily(source, sig, False, "exp-adjoint", max_arity, fam.members)
    return BracketFamily(source, sig, False, formula, max_arity, members)


def phi_recursive(source: BracketSource, n: int) -> MultiOperator:
    if n < 0:
        raise ValueError("bracket arity must be >= 0")
    return phi_family(source, n).member(n)


def psi(source: BracketSource, n: int, formula: str = "recursive") -> MultiOperator:
    if n < 0:
        raise ValueError("bracket arity must be >= 0")
    return psi_family(source, n, formula=formula).member(n)


# -- Bering's closed sums ---------------------------------------------------------


def psi_bering(source: BracketSource, n: int) -> MultiOperator:
    """Psi^n by literal enumeration of the two-index Bernoulli sums.

    Element source x:
        sum_{i+j=n} B_{i,j}/(i! j!) sum_pi eps(pi, i, x)
            a_{pi(1)}..a_{pi(i)} x a_{pi(i+1)}..a_{pi(n)}
    Endomorphism source f:
        sum_{i+j+k=n} B_{i,j}/(i! j! k!) sum_pi eps(pi, i, f)
            a_{pi(1)}..a_{pi(i)} f(1 a_{pi(i+1)}..a_{pi(i+k)}) a_{pi(i+k+1)}..a_{pi(n)}
    where eps(pi, i, -) is the Koszul sign of pi times the sign of moving
    the source past the first i permuted arguments.  The unit in f's slot is
    what makes the k = 0 terms contribute f(1).
    """
    sig = _source_signature(source)
    _require_unital(sig, "Bering's formula")
    deg_src = _source_degree(source)

    if isinstance(source, AlgebraElement):
        x = source

        def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
            degs = [a.homogeneous_degree() for a in args]
            acc: dict = {}
            for i in range(n + 1):
                j = n - i
                c = Fraction(bernoulli_two_index(i, j), factorial(i) * factorial(j))
                if not c:
                    continue
                for pi in permutations(range(n)):
                    eps = koszul_sign(pi, degs)
                    crossing = sum(degs[pi[t]] for t in range(i))
                    if (deg_src * crossing) % 2:
                        eps = -eps
                    left = _ordered_product(sig, [args[pi[t]] for t in range(i)])
                    right = _ordered_product(sig, [args[pi[t]] for t in range(i, n)])
                    add_scaled(acc, left * x * right, c * eps)
            return AlgebraElement(sig, acc)

        return MultiOperator(sig, n - 1, deg_src, evaluator, name=f"bering_psi^{n}")

    f = source

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for i in range(n + 1):
            for k in range(n - i + 1):
                j = n - i - k
                c = Fraction(
                    bernoulli_two_index(i, j), factorial(i) * factorial(j) * factorial(k)
                )
                if not c:
                    continue
                for pi in permutations(range(n)):
                    eps = koszul_sign(pi, degs)
                    crossing = sum(degs[pi[t]] for t in range(i))
                    if (deg_src * crossing) % 2:
                        eps = -eps
                    left = _ordered_product(sig, [args[pi[t]] for t in range(i)])
                    inner = _ordered_product(sig, [args[pi[t]] for t in range(i, i + k)])
                    right = _ordered_product(sig, [args[pi[t]] for t in range(i + k, n)])
                    add_scaled(acc, left * f(inner) * right, c * eps)
        return AlgebraElement(sig, acc)

    return MultiOperator(sig, n - 1, deg_src, evaluator, name=f"bering_psi^{n}")


# -- Bandiera's nested-commutator sums --------------------------------------------


def iterated_bracket(f: Endomorphism, args: Sequence[AlgebraElement]) -> AlgebraElement:
    """f_k(a_1,...,a_k) = [...[[f, L_{a_1}], L_{a_2}], ..., L_{a_k}](1).

    The empty tuple gives f(1).  Arguments may be inhomogeneous; the
    commutators are expanded multilinearly over homogeneous components.
    """
    sig = f.signature
    _require_unital(sig, "the iterated bracket")
    out = zero(sig)
    splits = [list(a.homogeneous_components().values()) for a in args]
    if any(not s for s in splits):
        return out

    def rec(endo: Endomorphism, remaining: int) -> AlgebraElement:
        if remaining == len(splits):
            return endo(unit(sig))
        acc = zero(sig)
        for comp in splits[remaining]:
            acc = acc + rec(CommutatorEndo(endo, LeftMultEndo(comp)), remaining + 1)
        return acc

    return rec(f, 0)


def psi_bandiera(source: BracketSource, n: int) -> MultiOperator:
    """Psi^n by nested graded commutators weighted by Bernoulli numbers.

    Element source x:
        sum_pi eps(pi) sum_{k=0}^{n} (-1)^n B_{n-k}/(k!(n-k)!)
            {...{x a_{pi(1)}..a_{pi(k)}, a_{pi(k+1)}}, ..., a_{pi(n)}}
    Endomorphism source f: the same shape with the core replaced by
    f_k(a_{pi(1)},...,a_{pi(k)}) and without the (-1)^n.
    """
    sig = _source_signature(source)
    _require_unital(sig, "Bandiera's formula")
    deg_src = _source_degree(source)
    is_element = isinstance(source, AlgebraElement)

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for pi in permutations(range(n)):
            eps = koszul_sign(pi, degs)
            permuted = [args[p] for p in pi]
            for k in range(n + 1):
                b = bernoulli(n - k)
                if not b:
                    continue
                c = Fraction(b, factorial(k) * factorial(n - k))
                if is_element:
                    if n % 2:
                        c = -c
                    core = source * _ordered_product(sig, permuted[:k])
                else:
                    core = iterated_bracket(source, permuted[:k])
                nest = core
                for a in permuted[k:]:
                    nest = graded_commutator(nest, a)
                add_scaled(acc, nest, c * eps)
        return AlgebraElement(sig, acc)

    return MultiOperator(sig, n - 1, deg_src, evaluator, name=f"bandiera_psi^{n}")


# -- the commutative closed formula ------------------------------------------------


def psi_commutative(f: Endomorphism, n: int) -> MultiOperator:
    """Koszul's original closed formula, valid on the commutative signature:

        Psi^n_f(a_1,...,a_n) = sum_{k=0}^{n} (-1)^{n-k}/(k!(n-k)!)
            sum_pi eps(pi) f(1 a_{pi(1)}..a_{pi(k)}) a_{pi(k+1)}..a_{pi(n)}.
    """
    sig = f.signature
    if not sig.is_graded_commutative:
        raise ValueError("the commutative closed formula needs a graded-commutative signature")

    def evaluator(args: tuple[AlgebraElement, ...]) -> AlgebraElement:
        degs = [a.homogeneous_degree() for a in args]
        acc: dict = {}
        for k in range(n + 1):
            c = Fraction((-1) ** (n - k), factorial(k) * factorial(n - k))
            for pi in permutations(range(n)):
                eps = koszul_sign(pi, degs)
                inner = _ordered_product(sig, [args[pi[t]] for t in range(k)])
                tail = _ordered_product(sig, [args[pi[t]] for t in range(k, n)])
                add_scaled(acc, f(inner) * tail, c * eps)
        return AlgebraElement(sig, acc)

    return MultiOperator(sig, n - 1, f.degree, evaluator, name=f"koszul_psi^{n}")


# -- exponential-adjoint construction -----------------------------------------------


def _as_level_dict(u, signature: AlgebraSignature | None = None) -> dict[int, MultiOperator]:
    if isinstance(u, AlgebraElement):
        return {-1: constant_operator(u)}
    if isinstance(u, Endomorphism):
        return {0: endo_operator(u)}
    if isinstance(u, MultiOperator):
        return {u.level: u}
    if isinstance(u, Mapping):
        return dict(u)
    if isinstance(u, (list, tuple)):
        out: dict[int, MultiOperator] = {}
        for op in u:
            if op.level in out:
                raise ValueError(f"two parts share level {op.level}; combine them first")
            out[op.level] = op
        return out
    raise TypeError(f"cannot interpret {type(u).__name__} as an operator family")


def exp_adjoint(
    u,
    preset: GaugePreset = KOSZUL_PRESET,
    max_arity: int = 4,
    unit_conjugation: bool = True,
) -> BracketFamily:
    """Conjugate u by exp([-, sum_h K_h mu_h]) (after exp([-, mu_{-1}]) if unital).

    Bracketing with mu_h raises the level by h, so the expansion truncates
    exactly at ``max_arity``: members[n] collects every nested-bracket term
    landing at level n-1.  On non-unital signatures the unit factor is
    omitted (there is no mu_{-1}).
    """
    levels = _as_level_dict(u)
    if not levels:
        raise ValueError("empty operator family")
    sigs = {op.signature for op in levels.values()}
    if len(sigs) != 1:
        raise ValueError("operator family parts live over different algebras")
    sig = sigs.pop()
    degrees = {op.degree for op in levels.values()}
    if len(degrees) != 1:
        raise ValueError(f"operator family parts must share one degree, got {sorted(degrees)}")
    deg = degrees.pop()
    max_level = max_arity - 1

    def exp_ad(
        start: dict[int, MultiOperator],
        ad_terms: Callable[[MultiOperator], list[tuple[Fraction, MultiOperator]]],
        level_cap: int | None,
    ) -> dict[int, MultiOperator]:
        acc: dict[int, list[tuple[Fraction, MultiOperator]]] = {
            lv: [(Fraction(1), op)] for lv, op in start.items()
        }
        current = dict(start)
        k = 1
        while current:
            produced: dict[int, list[tuple[Fraction, MultiOperator]]] = {}
            for op in current.values():
                if op.is_zero_op:
                    continue
                for coeff, bracket_op in ad_terms(op):
                    lv = bracket_op.level
                    if lv < -1 or not coeff or bracket_op.is_zero_op:
                        continue
                    if level_cap is not None and lv > level_cap:
                        continue
                    produced.setdefault(lv, []).append((coeff * Fraction(1, k), bracket_op))
            current = {
                lv: combine(terms, sig, lv, deg, name=f"ad^{k}")
                for lv, terms in produced.items()
            }
            current = {lv: op for lv, op in current.items() if not op.is_zero_op}
            for lv, op in current.items():
                acc.setdefault(lv, []).append((Fraction(1), op))
            k += 1
            if k > max_arity + max(lv for lv in start) + 4:  # safety net; loops terminate before
                break
        return {
            lv: combine(terms, sig, lv, deg, name=f"exp_ad[{lv}]")
            for lv, terms in acc.items()
        }

    if unit_conjugation and sig.unital:
        mu_unit = mu(-1, sig)
        # bracketing with the unit constant lowers the level by one and dies at
        # level -1, so no cap is needed (and capping would drop ancestors of
        # in-range terms)
        levels = exp_ad(
            levels, lambda op: [(Fraction(1), nr_bracket(op, mu_unit))], level_cap=None
        )

    mus = {h: mu(h, sig) for h in range(1, max_arity + 1)}

    def gauge_terms(op: MultiOperator) -> list[tuple[Fraction, MultiOperator]]:
        out = []
        for h in range(1, max_level - op.level + 1):
            c = preset.coefficient(h)
            if c:
                out.append((c, nr_bracket(op, mus[h])))
        return out

    levels = exp_ad(levels, gauge_terms, level_cap=max_level)

    members = [
        levels.get(n - 1, zero_operator(sig, n - 1, deg)) for n in range(max_arity + 1)
    ]
    source = u if isinstance(u, (AlgebraElement, Endomorphism)) else None
    return BracketFamily(source, sig, not unit_conjugation, "exp-adjoint", max_arity, members)


def phi_nonunital(f: Endomorphism, n: int, max_arity: int | None = None) -> MultiOperator:
    """Reduced brackets for (possibly non-unital) algebras via the exp-adjoint route."""
    top = n if max_arity is None else max(n, max_arity)
    fam = exp_adjoint(f, KOSZUL_PRESET, top, unit_conjugation=False)
    return fam.member(n)


# -- the quantum antibracket ---------------------------------------------------------


def quantum_antibracket(Q: AlgebraElement, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Symmetric double-commutator bracket attached to an odd element:

        B_Q(a, b) = -1/2 ( {{Q, a}, b} + (-1)^{|a||b|} {{Q, b}, a} ).
    """
    k = Q.homogeneous_degree()
    if k % 2 == 0:
        raise ValueError(f"the antibracket needs an odd-degree element, |Q| = {k}")
    sig = Q.signature
    out = zero(sig)
    for da, xa in a.homogeneous_components().items():
        for db, xb in b.homogeneous_components().items():
            t1 = graded_commutator(graded_commutator(Q, xa), xb)
            t2 = graded_commutator(graded_commutator(Q, xb), xa)
            if (da * db) % 2:
                t2 = -t2
            out = out + (t1 + t2).scale(Fraction(-1, 2))
    return out
