"""Graded associative algebras with exact rational coefficients.

Supported signatures: free non-commutative algebras (unital, non-unital,
length-truncated) and the one-variable polynomial algebra.  Elements are
finite rational linear combinations of basis words; a word is a tuple of
generator ids (the empty tuple is the unit, polynomial t^n is the id
repeated n times, so concatenation doubles as exponent addition).

Sign bookkeeping is the whole point of this module: every sign-sensitive
rule first splits its inputs into homogeneous components, and
``koszul_sign`` implements the crossing-pair convention (a -1 for every
inverted pair of odd-degree entries).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .tables import fraction_from_str, fraction_to_str

Word = tuple[str, ...]

FREE_UNITAL = "free-unital"
FREE_NONUNITAL = "free-nonunital"
FREE_TRUNCATED = "free-truncated"
POLYNOMIAL = "polynomial-one-variable"

_KINDS = (FREE_UNITAL, FREE_NONUNITAL, FREE_TRUNCATED, POLYNOMIAL)


class SignatureMismatch(ValueError):
    """Raised when two values living over different algebras are combined."""


@dataclass(frozen=True)
class Generator:
    id: str
    degree: int


@dataclass(frozen=True)
class AlgebraSignature:
    """Shape of a graded algebra: kind plus its graded generators.

    ``max_len`` applies only to the truncated kind: words of length
    >= max_len are identified with zero (the two-sided monomial ideal
    generated by all words of that length).
    """

    kind: str
    generators: tuple[Generator, ...]
    max_len: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError(f"generator ids must be unique, got {ids}")
        if self.kind == FREE_TRUNCATED:
            if self.max_len is None or self.max_len < 1:
                raise ValueError("free-truncated signature needs max_len >= 1")
        elif self.max_len is not None:
            raise ValueError(f"max_len is only meaningful for {FREE_TRUNCATED}")
        if self.kind == POLYNOMIAL and len(self.generators) != 1:
            raise ValueError("polynomial signature carries exactly one generator")

    @property
    def unital(self) -> bool:
        return self.kind != FREE_NONUNITAL

    @property
    def is_polynomial(self) -> bool:
        return self.kind == POLYNOMIAL

    @property
    def is_graded_commutative(self) -> bool:
        # One even variable commutes with everything; an odd variable does
        # not satisfy t^2 = 0 here, so it does not count.
        return self.kind == POLYNOMIAL and self.generators[0].degree % 2 == 0

    @property
    def var(self) -> Generator:
        if self.kind != POLYNOMIAL:
            raise ValueError("var is only defined for the polynomial signature")
        return self.generators[0]

    @cached_property
    def _degree_map(self) -> dict[str, int]:
        return {g.id: g.degree for g in self.generators}

    def degree_of(self, gen_id: str) -> int:
        try:
            return self._degree_map[gen_id]
        except KeyError:
            raise KeyError(f"unknown generator {gen_id!r}") from None

    def word_degree(self, word: Word) -> int:
        degrees = self._degree_map
        return sum(degrees[letter] for letter in word)

    def validate_word(self, word: Word) -> None:
        known = self._degree_map
        for letter in word:
            if letter not in known:
                raise ValueError(f"unknown generator {letter!r} in word {word}")
        if self.kind == FREE_TRUNCATED and len(word) >= self.max_len:  # type: ignore[operator]
            raise ValueError(f"word {word} has length >= max_len={self.max_len}")
        if not self.unital and len(word) == 0:
            raise ValueError("the empty word is not a basis element of a non-unital algebra")


class AlgebraElement:
    """Finite rational linear combination of basis words.

    Immutable; zero coefficients are never stored.  Supports +, -, scalar
    multiplication and the (associative) algebra product via ``*``.
    """

    __slots__ = ("signature", "terms", "_hash", "_comps")

    def __init__(self, signature: AlgebraSignature, terms: Mapping[Word, Fraction]):
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "terms", {w: c for w, c in terms.items() if c})
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_comps", None)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("AlgebraElement is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.signature.word_degree(w) for w in self.terms}

    def homogeneous_degree(self) -> int:
        """Degree of a homogeneous element (0 for the zero element)."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs))

    def homogeneous_components(self) -> dict[int, "AlgebraElement"]:
        """Split by word degree; the components sum back to the element."""
        cached = self._comps
        if cached is not None:
            return cached
        buckets: dict[int, dict[Word, Fraction]] = {}
        for w, c in self.terms.items():
            buckets.setdefault(self.signature.word_degree(w), {})[w] = c
        comps = {d: AlgebraElement(self.signature, t) for d, t in sorted(buckets.items())}
        object.__setattr__(self, "_comps", comps)
        return comps

    # -- arithmetic --------------------------------------------------------

    def _require_same_signature(self, other: "AlgebraElement") -> None:
        if self.signature != other.signature:
            raise SignatureMismatch(
                f"elements live over different algebras: {self.signature} vs {other.signature}"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same_signature(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        return AlgebraElement(self.signature, terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.signature, {w: -c for w, c in self.terms.items()})

    def scale(self, c: Fraction | int) -> "AlgebraElement":
        c = Fraction(c)
        if not c:
            return AlgebraElement(self.signature, {})
        return AlgebraElement(self.signature, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.product(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def product(self, other: "AlgebraElement") -> "AlgebraElement":
        """Bilinear extension of word concatenation (with truncation)."""
        self._require_same_signature(other)
        sig = self.signature
        cutoff = sig.max_len if sig.kind == FREE_TRUNCATED else None
        terms: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if cutoff is not None and len(w1) + len(w2) >= cutoff:
                    continue
                w = w1 + w2
                c = c1 * c2
                prev = terms.get(w)
                terms[w] = c if prev is None else prev + c
        return AlgebraElement(sig, terms)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.signature, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)})"


def add_scaled(acc: dict[Word, Fraction], elem: AlgebraElement, coeff=1) -> None:
    """Accumulate coeff * elem into a mutable term dict (hot-path helper).

    Callers turn the finished dict into an element with one construction,
    instead of chaining immutable additions.
    """
    if coeff == 1:
        for w, c in elem.terms.items():
            prev = acc.get(w)
            acc[w] = c if prev is None else prev + c
    elif coeff:
        for w, c in elem.terms.items():
            c = c * coeff
            prev = acc.get(w)
            acc[w] = c if prev is None else prev + c


# -- element constructors ---------------------------------------------------


def zero(signature: AlgebraSignature) -> AlgebraElement:
    return AlgebraElement(signature, {})


def unit(signature: AlgebraSignature) -> AlgebraElement:
    if not signature.unital:
        raise ValueError("non-unital algebra has no unit element")
    return AlgebraElement(signature, {(): Fraction(1)})


def word_element(signature: AlgebraSignature, word: Iterable[str], coeff: Fraction | int = 1) -> AlgebraElement:
    w = tuple(word)
    signature.validate_word(w)
    return AlgebraElement(signature, {w: Fraction(coeff)})


def gen_element(signature: AlgebraSignature, gen_id: str) -> AlgebraElement:
    return word_element(signature, (gen_id,))


def element(signature: AlgebraSignature, terms: Mapping[Iterable[str], Fraction | int]) -> AlgebraElement:
    out: dict[Word, Fraction] = {}
    for word, coeff in terms.items():
        w = tuple(word)
        signature.validate_word(w)
        out[w] = out.get(w, Fraction(0)) + Fraction(coeff)
    return AlgebraElement(signature, out)


def monomial(signature: AlgebraSignature, exponent: int, coeff: Fraction | int = 1) -> AlgebraElement:
    """t^exponent in a polynomial signature."""
    if exponent < 0:
        raise ValueError("polynomial exponents are >= 0")
    return word_element(signature, (signature.var.id,) * exponent, coeff)


# -- signs -------------------------------------------------------------------


def koszul_sign(pi: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign picked up when (v_0,...,v_N) is reordered to (v_pi[0],...,v_pi[N]).

    ``degrees[k]`` is the degree of the element originally in slot k.  Each
    inverted pair whose two crossing entries both have odd degree
    contributes a factor -1.
    """
    n = len(pi)
    if len(degrees) != n:
        raise ValueError(f"permutation size {n} != degree vector size {len(degrees)}")
    if sorted(pi) != list(range(n)):
        raise ValueError(f"{pi!r} is not a permutation of 0..{n - 1}")
    odd = [degrees[pi[i]] % 2 != 0 for i in range(n)]
    if sum(odd) < 2:
        return 1
    count = 0
    for i in range(n):
        if not odd[i]:
            continue
        for j in range(i + 1, n):
            if odd[j] and pi[i] > pi[j]:
                count += 1
    return -1 if count % 2 else 1


def graded_commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """{a, b} = ab - (-1)^{|a||b|} ba, extended bilinearly."""
    a._require_same_signature(b)
    acc: dict[Word, Fraction] = {}
    for da, xa in a.homogeneous_components().items():
        for db, xb in b.homogeneous_components().items():
            add_scaled(acc, xa * xb)
            add_scaled(acc, xb * xa, 1 if (da * db) % 2 else -1)
    return AlgebraElement(a.signature, acc)


# -- endomorphisms ------------------------------------------------------------


class Endomorphism:
    """Homogeneous linear self-map of an algebra, given by a symbolic rule.

    Subclasses implement ``apply_word``; ``__call__`` is the linear
    extension (with a per-word cache, since the bracket formulas hit the
    same words over and over).
    """

    rule_name = "abstract"

    def __init__(self, signature: AlgebraSignature, degree: int):
        self.signature = signature
        self.degree = degree
        self._word_cache: dict[Word, AlgebraElement] = {}

    def apply_word(self, word: Word) -> AlgebraElement:
        raise NotImplementedError

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        if a.signature != self.signature:
            raise SignatureMismatch("endomorphism applied to element of another algebra")
        acc: dict[Word, Fraction] = {}
        for w, c in a.terms.items():
            img = self._word_cache.get(w)
            if img is None:
                img = self.apply_word(w)
                self._word_cache[w] = img
            add_scaled(acc, img, c)
        return AlgebraElement(self.signature, acc)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} degree={self.degree}>"


class IdentityEndo(Endomorphism):
    rule_name = "identity"

    def __init__(self, signature: AlgebraSignature):
        super().__init__(signature, 0)

    def apply_word(self, word: Word) -> AlgebraElement:
        return AlgebraElement(self.signature, {word: Fraction(1)})


class ScaleEndo(Endomorphism):
    rule_name = "scale"

    def __init__(self, signature: AlgebraSignature, c: Fraction | int):
        super().__init__(signature, 0)
        self.c = Fraction(c)

    def apply_word(self, word: Word) -> AlgebraElement:
        return AlgebraElement(self.signature, {word: self.c})


class TableEndo(Endomorphism):
    """Finite table of word images; unmapped words default to zero.

    With ``max_word_len`` set and ``strict=True``, evaluation on a word
    longer than the bound raises instead of returning the default.
    """

    rule_name = "table"

    def __init__(
        self,
        signature: AlgebraSignature,
        degree: int,
        entries: Mapping[Iterable[str], AlgebraElement],
        max_word_len: int | None = None,
        strict: bool = False,
    ):
        super().__init__(signature, degree)
        self.entries: dict[Word, AlgebraElement] = {}
        for word, value in entries.items():
            w = tuple(word)
            signature.validate_word(w)
            if value.signature != signature:
                raise SignatureMismatch("table value lives over another algebra")
            for d in value.degrees():
                if d != signature.word_degree(w) + degree:
                    raise ValueError(
                        f"table entry {w} breaks homogeneity: |value|={d}, "
                        f"expected {signature.word_degree(w) + degree}"
                    )
            self.entries[w] = value
        self.max_word_len = max_word_len
        self.strict = strict

    def apply_word(self, word: Word) -> AlgebraElement:
        hit = self.entries.get(word)
        if hit is not None:
            return hit
        if self.strict and self.max_word_len is not None and len(word) > self.max_word_len:
            raise ValueError(
                f"table endomorphism evaluated on word {word} beyond its "
                f"declared bound {self.max_word_len}"
            )
        return zero(self.signature)


class DerivationEndo(Endomorphism):
    """Extension of generator images by the graded Leibniz rule."""

    rule_name = "derivation"

    def __init__(self, signature: AlgebraSignature, degree: int, images: Mapping[str, AlgebraElement]):
        super().__init__(signature, degree)
        self.images: dict[str, AlgebraElement] = {}
        for gen_id, value in images.items():
            expected = signature.degree_of(gen_id) + degree
            for d in value.degrees():
                if d != expected:
                    raise ValueError(
                        f"derivation image of {gen_id!r} has degree {d}, expected {expected}"
                    )
            self.images[gen_id] = value

    def image_of(self, gen_id: str) -> AlgebraElement:
        img = self.images.get(gen_id)
        return img if img is not None else zero(self.signature)

    def apply_word(self, word: Word) -> AlgebraElement:
        sig = self.signature
        acc: dict[Word, Fraction] = {}
        prefix_degree = 0
        for i, letter in enumerate(word):
            img = self.image_of(letter)
            if not img.is_zero:
                sign = -1 if (self.degree * prefix_degree) % 2 else 1
                left = AlgebraElement(sig, {word[:i]: Fraction(sign)})
                right = AlgebraElement(sig, {word[i + 1 :]: Fraction(1)})
                add_scaled(acc, left * img * right)
            prefix_degree += sig.degree_of(letter)
        return AlgebraElement(sig, acc)


class LeftMultEndo(Endomorphism):
    """L_x(a) = x a, for homogeneous x."""

    rule_name = "left-mult"

    def __init__(self, x: AlgebraElement):
        super().__init__(x.signature, x.homogeneous_degree())
        self.x = x

    def apply_word(self, word: Word) -> AlgebraElement:
        return self.x * AlgebraElement(self.signature, {word: Fraction(1)})


class RightMultEndo(Endomorphism):
    """R_x(a) = (-1)^{|a||x|} a x, for homogeneous x."""

    rule_name = "right-mult"

    def __init__(self, x: AlgebraElement):
        super().__init__(x.signature, x.homogeneous_degree())
        self.x = x

    def apply_word(self, word: Word) -> AlgebraElement:
        sign = -1 if (self.signature.word_degree(word) * self.degree) % 2 else 1
        return AlgebraElement(self.signature, {word: Fraction(sign)}) * self.x


class SumEndo(Endomorphism):
    rule_name = "sum"

    def __init__(self, parts: Sequence[Endomorphism]):
        if not parts:
            raise ValueError("sum of endomorphisms needs at least one part")
        degrees = {p.degree for p in parts}
        if len(degrees) != 1:
            raise ValueError(f"summands must share one homogeneous degree, got {sorted(degrees)}")
        sigs = {p.signature for p in parts}
        if len(sigs) != 1:
            raise SignatureMismatch("summands live over different algebras")
        super().__init__(parts[0].signature, parts[0].degree)
        self.parts = tuple(parts)

    def apply_word(self, word: Word) -> AlgebraElement:
        out = zero(self.signature)
        for p in self.parts:
            out = out + p.apply_word(word)
        return out


class ComposeEndo(Endomorphism):
    """outer after inner."""

    rule_name = "compose"

    def __init__(self, outer: Endomorphism, inner: Endomorphism):
        if outer.signature != inner.signature:
            raise SignatureMismatch("composed endomorphisms live over different algebras")
        super().__init__(outer.signature, outer.degree + inner.degree)
        self.outer = outer
        self.inner = inner

    def apply_word(self, word: Word) -> AlgebraElement:
        return self.outer(self.inner.apply_word(word))


class CommutatorEndo(Endomorphism):
    """[f, g] = f g - (-1)^{|f||g|} g f as linear maps."""

    rule_name = "commutator"

    def __init__(self, f: Endomorphism, g: Endomorphism):
        if f.signature != g.signature:
            raise SignatureMismatch("commutator of endomorphisms over different algebras")
        super().__init__(f.signature, f.degree + g.degree)
        self.f = f
        self.g = g
        self._sign = -1 if (f.degree * g.degree) % 2 else 1

    def apply_word(self, word: Word) -> AlgebraElement:
        w = AlgebraElement(self.signature, {word: Fraction(1)})
        return self.f(self.g(w)) - self.g(self.f(w)).scale(self._sign)


class PolynomialDerivativeEndo(Endomorphism):
    """k-th derivative on the one-variable polynomial algebra."""

    rule_name = "poly-derivative"

    def __init__(self, signature: AlgebraSignature, order: int):
        if signature.kind != POLYNOMIAL:
            raise ValueError("polynomial derivative requires the polynomial signature")
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        super().__init__(signature, -order * signature.var.degree)
        self.order = order

    def apply_word(self, word: Word) -> AlgebraElement:
        n = len(word)
        if n < self.order:
            return zero(self.signature)
        coeff = 1
        for i in range(self.order):
            coeff *= n - i
        return monomial(self.signature, n - self.order, coeff)


# -- random sampling ----------------------------------------------------------


def random_element(
    signature: AlgebraSignature,
    rng: random.Random,
    max_len: int = 3,
    max_terms: int = 3,
    homogeneous: bool = False,
) -> AlgebraElement:
    """Random element: words of length <= max_len, coefficients in ±{1,2,3}.

    With ``homogeneous=True``, all drawn words share the degree of the first
    draw.  May return fewer terms than max_terms (duplicates merge); never
    returns the zero element.
    """
    gens = [g.id for g in signature.generators]
    min_len = 0 if signature.unital else 1
    if signature.kind == FREE_TRUNCATED:
        max_len = min(max_len, signature.max_len - 1)  # type: ignore[operator]

    def draw_word() -> Word:
        if gens:
            length = rng.randint(min_len, max_len)
            return tuple(rng.choice(gens) for _ in range(length))
        return ()

    if not gens and not signature.unital:
        raise ValueError("cannot sample from the zero algebra")

    n_terms = rng.randint(1, max_terms)
    terms: dict[Word, Fraction] = {}
    target_degree: int | None = None
    attempts = 0
    while len(terms) < n_terms and attempts < 20 * max_terms:
        attempts += 1
        w = draw_word()
        if homogeneous:
            d = signature.word_degree(w)
            if target_degree is None:
                target_degree = d
            elif d != target_degree:
                continue
        coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        terms[w] = coeff
    return AlgebraElement(signature, terms)


def random_tuple(
    signature: AlgebraSignature,
    rng: random.Random,
    arity: int,
    max_len: int = 3,
    max_terms: int = 3,
    homogeneous: bool = False,
) -> tuple[AlgebraElement, ...]:
    return tuple(
        random_element(signature, rng, max_len=max_len, max_terms=max_terms, homogeneous=homogeneous)
        for _ in range(arity)
    )


# -- formatting and JSON -------------------------------------------------------


def _word_key(word: Word) -> tuple[int, Word]:
    return (len(word), word)


def format_word(signature: AlgebraSignature, word: Word) -> str:
    if not word:
        return "1"
    if signature.kind == POLYNOMIAL:
        n = len(word)
        return signature.var.id if n == 1 else f"{signature.var.id}^{n}"
    return "*".join(word)


def format_element(a: AlgebraElement) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for w in sorted(a.terms, key=_word_key):
        c = a.terms[w]
        word_str = format_word(a.signature, w)
        if w == ():
            chunk = fraction_to_str(c)
        elif c == 1:
            chunk = word_str
        elif c == -1:
            chunk = f"-{word_str}"
        else:
            chunk = f"{fraction_to_str(c)}*{word_str}"
        parts.append(chunk)
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def element_to_latex(a: AlgebraElement) -> str:
    """Small LaTeX rendering: coefficients as \\frac, words juxtaposed."""
    if a.is_zero:
        return "0"

    def frac_tex(c: Fraction) -> str:
        if c.denominator == 1:
            return str(c.numerator)
        sign = "-" if c < 0 else ""
        return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"

    chunks = []
    for w in sorted(a.terms, key=_word_key):
        c = a.terms[w]
        if a.signature.kind == POLYNOMIAL and w:
            word_tex = a.signature.var.id if len(w) == 1 else f"{a.signature.var.id}^{{{len(w)}}}"
        else:
            word_tex = " ".join(w) if w else "1"
        if w == ():
            chunks.append(frac_tex(c))
        elif c == 1:
            chunks.append(word_tex)
        elif c == -1:
            chunks.append(f"-{word_tex}")
        else:
            chunks.append(f"{frac_tex(c)}\\,{word_tex}")
    out = " + ".join(chunks)
    return out.replace("+ -", "- ")


def signature_to_json(signature: AlgebraSignature) -> dict:
    doc: dict = {
        "kind": signature.kind,
        "generators": [{"id": g.id, "degree": g.degree} for g in signature.generators],
    }
    if signature.max_len is not None:
        doc["maxLen"] = signature.max_len
    return doc


def signature_from_json(doc: Mapping) -> AlgebraSignature:
    gens = tuple(Generator(g["id"], int(g["degree"])) for g in doc.get("generators", []))
    return AlgebraSignature(doc["kind"], gens, max_len=doc.get("maxLen"))


def word_from_json(signature: AlgebraSignature, doc) -> Word:
    if isinstance(doc, int):
        # polynomial shorthand: the exponent
        if signature.kind != POLYNOMIAL:
            raise ValueError("integer word shorthand is only valid for polynomial signatures")
        if doc < 0:
            raise ValueError("polynomial exponent must be >= 0")
        return (signature.var.id,) * doc
    w = tuple(str(x) for x in doc)
    signature.validate_word(w)
    return w


def element_to_json(a: AlgebraElement) -> list[dict]:
    return [
        {"word": list(w), "coeff": fraction_to_str(a.terms[w])}
        for w in sorted(a.terms, key=_word_key)
    ]


def element_from_json(signature: AlgebraSignature, doc) -> AlgebraElement:
    terms: dict[Word, Fraction] = {}
    for item in doc:
        w = word_from_json(signature, item["word"])
        terms[w] = terms.get(w, Fraction(0)) + fraction_from_str(item["coeff"])
    return AlgebraElement(signature, terms)


def endomorphism_to_json(f: Endomorphism) -> dict:
    if isinstance(f, IdentityEndo):
        return {"rule": "identity"}
    if isinstance(f, ScaleEndo):
        return {"rule": "scale", "c": fraction_to_str(f.c)}
    if isinstance(f, TableEndo):
        doc: dict = {
            "rule": "table",
            "degree": f.degree,
            "entries": [
                {"word": list(w), "value": element_to_json(v)} for w, v in sorted(f.entries.items())
            ],
        }
        if f.max_word_len is not None:
            doc["maxWordLen"] = f.max_word_len
            doc["strict"] = f.strict
        return doc
    if isinstance(f, DerivationEndo):
        return {
            "rule": "derivation",
            "degree": f.degree,
            "images": {g: element_to_json(v) for g, v in sorted(f.images.items())},
        }
    if isinstance(f, LeftMultEndo):
        return {"rule": "left-mult", "x": element_to_json(f.x)}
    if isinstance(f, RightMultEndo):
        return {"rule": "right-mult", "x": element_to_json(f.x)}
    if isinstance(f, SumEndo):
        return {"rule": "sum", "parts": [endomorphism_to_json(p) for p in f.parts]}
    if isinstance(f, ComposeEndo):
        return {"rule": "compose", "parts": [endomorphism_to_json(f.outer), endomorphism_to_json(f.inner)]}
    if isinstance(f, CommutatorEndo):
        return {"rule": "commutator", "parts": [endomorphism_to_json(f.f), endomorphism_to_json(f.g)]}
    if isinstance(f, PolynomialDerivativeEndo):
        return {"rule": "poly-derivative", "order": f.order}
    raise TypeError(f"cannot serialize endomorphism of type {type(f).__name__}")


def endomorphism_from_json(signature: AlgebraSignature, doc: Mapping) -> Endomorphism:
    rule = doc["rule"]
    if rule == "identity":
        return IdentityEndo(signature)
    if rule == "scale":
        return ScaleEndo(signature, fraction_from_str(doc["c"]))
    if rule == "table":
        entries = {
            word_from_json(signature, e["word"]): element_from_json(signature, e["value"])
            for e in doc["entries"]
        }
        return TableEndo(
            signature,
            int(doc["degree"]),
            entries,
            max_word_len=doc.get("maxWordLen"),
            strict=bool(doc.get("strict", False)),
        )
    if rule == "derivation":
        images = {g: element_from_json(signature, v) for g, v in doc["images"].items()}
        return DerivationEndo(signature, int(doc["degree"]), images)
    if rule == "left-mult":
        return LeftMultEndo(element_from_json(signature, doc["x"]))
    if rule == "right-mult":
        return RightMultEndo(element_from_json(signature, doc["x"]))
    if rule == "sum":
        return SumEndo([endomorphism_from_json(signature, p) for p in doc["parts"]])
    if rule == "compose":
        outer, inner = (endomorphism_from_json(signature, p) for p in doc["parts"])
        return ComposeEndo(outer, inner)
    if rule == "commutator":
        f, g = (endomorphism_from_json(signature, p) for p in doc["parts"])
        return CommutatorEndo(f, g)
    if rule == "poly-derivative":
        return PolynomialDerivativeEndo(signature, int(doc["order"]))
    raise ValueError(f"unknown endomorphism rule {rule!r}")


def parse_source(signature: AlgebraSignature, doc: Mapping):
    """Parse a bracket source: an element or an endomorphism, tagged by kind."""
    kind = doc.get("kind")
    if kind == "element":
        return element_from_json(signature, doc["element"])
    if kind == "endomorphism":
        return endomorphism_from_json(signature, doc["endo"])
    raise ValueError(f"source kind must be 'element' or 'endomorphism', got {kind!r}")
