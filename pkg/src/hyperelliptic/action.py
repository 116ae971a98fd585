"""Finite groups of affine automorphisms and the hyperelliptic-datum checks.

Group elements are stored in lattice coordinates: the linear part is a
unimodular integer matrix acting on Lambda = Z^2n, and the translation is a
rational vector reduced into [0, 1)^2n so that equality of elements is
canonical.  Fixed-point existence is decided exactly by rational linear
algebra: since the linear part and the translation are rational, a real fixed
point exists iff a rational one does, so freeness results are certificates,
not samples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import RootOfUnity, cyclotomic_polynomial, euler_phi, poly_divmod_exact
from .exactlin import (
    LatticeError,
    Sublattice,
    as_fractions,
    coset_meets_lattice,
    identity,
    mat_det,
    mat_inv,
    mat_mul,
    mat_vec,
    transpose,
    vec_add,
    vec_is_integral,
    vec_mod1,
)
from .torus import AlternatingForm, TorusDatum, factor_block_eigenvalue

DEFAULT_CLOSURE_CAP = 1024


class LatticeNotPreserved(ValueError):
    """A linear part fails to map the period lattice to itself (or is not unimodular)."""


class NotClosedWithinCap(ValueError):
    """Group closure exceeded the configured cap."""


class MissingEigenvalueData(ValueError):
    """Closure produced an element whose complex eigenvalues cannot be derived.

    For non-real eigenvalues the characteristic polynomial only determines
    conjugate pairs, not which member acts holomorphically, so raw data must
    list every group element with its eigenvalues.
    """


class InconsistentEigenvalues(ValueError):
    """Declared eigenvalues contradict the characteristic polynomial."""


def char_poly(m) -> tuple[int, ...]:
    """Characteristic polynomial det(x*I - m), constant term first, exact."""
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    # Faddeev-LeVerrier: M_1 = M, c_k = tr(M_k)/k, M_{k+1} = M (M_k - c_k I)
    mk = tuple(tuple(Fraction(x) for x in row) for row in m)
    mm = mk
    for k in range(1, n + 1):
        trace = sum(mk[i][i] for i in range(n))
        ck = trace / k
        coeffs[n - k] = -ck
        if k < n:
            shifted = tuple(
                tuple(mk[i][j] - (ck if i == j else 0) for j in range(n)) for i in range(n)
            )
            mk = mat_mul(mm, shifted)
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return tuple(out)


def cyclotomic_multiplicities(poly: tuple[int, ...]) -> dict[int, int]:
    """Factor an integer polynomial as a product of cyclotomics Phi_N^(a_N).

    Raises InconsistentEigenvalues if any non-cyclotomic factor remains,
    which also certifies that the matrix has finite order.
    """
    deg = len(poly) - 1
    limit = 2 * deg * deg + 2
    mults: dict[int, int] = {}
    rem = poly
    for n in range(1, limit + 1):
        if euler_phi(n) > deg:
            continue
        phi = cyclotomic_polynomial(n)
        while len(rem) >= len(phi):
            q, r = poly_divmod_exact(rem, phi)
            if r != ():
                break
            mults[n] = mults.get(n, 0) + 1
            rem = q
        if rem == (1,):
            return mults
    raise InconsistentEigenvalues("characteristic polynomial is not a product of cyclotomics")


@dataclass(frozen=True)
class AffineAut:
    """One affine automorphism x -> linear @ x + translation of A = V/Lambda.

    ``eigenvalues`` are the n complex-representation eigenvalues of the
    element; ``blocks`` are the per-factor 2x2 product-coordinate blocks when
    the datum was built from elliptic factors (they make closure eigenvalues
    exact), and None for raw data.
    """

    linear: tuple[tuple[int, ...], ...]
    translation: tuple[Fraction, ...]
    eigenvalues: tuple[RootOfUnity, ...] = field(compare=False)
    blocks: tuple[tuple[tuple[int, ...], ...], ...] | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.linear)

    def is_identity(self) -> bool:
        return self.linear == identity(self.rank) and not any(self.translation)

    def is_translation(self) -> bool:
        return self.linear == identity(self.rank)

    def apply(self, point):
        return vec_mod1(vec_add(mat_vec(self.linear, as_fractions(point)), self.translation))

    def key(self):
        return (self.linear, self.translation)


def is_translation(a: AffineAut) -> bool:
    return a.is_translation()


def affine_identity(rank: int) -> AffineAut:
    return AffineAut(
        identity(rank),
        tuple(Fraction(0) for _ in range(rank)),
        tuple(RootOfUnity.one() for _ in range(rank // 2)),
        tuple(identity(2) for _ in range(rank // 2)),
    )


def _eigenvalues_from_char_poly(m) -> tuple[RootOfUnity, ...]:
    """Derive eigenvalues when the conjugate-pair split is forced (orders <= 2)."""
    mults = cyclotomic_multiplicities(char_poly(m))
    if any(n > 2 for n in mults):
        raise MissingEigenvalueData(
            "closure created an element with complex eigenvalues of order > 2; "
            "list all group elements with their eigenvalues in the input"
        )
    eig = []
    for n, a in sorted(mults.items()):
        if a % 2 != 0:
            raise InconsistentEigenvalues("odd multiplicity of a real eigenvalue")
        eig.extend([RootOfUnity.of(1 if n == 2 else 0, n)] * (a // 2))
    return tuple(eig)


def compose(a: AffineAut, b: AffineAut, eigenvalue_table=None) -> AffineAut:
    """(M, t) . (M', t') = (M M', M t' + t), translation reduced mod Lambda."""
    linear = mat_mul(a.linear, b.linear)
    translation = vec_mod1(vec_add(mat_vec(a.linear, b.translation), a.translation))
    if a.blocks is not None and b.blocks is not None:
        blocks = tuple(mat_mul(x, y) for x, y in zip(a.blocks, b.blocks))
        eigenvalues = None  # filled by the caller, which knows the factors
        return AffineAut(linear, translation, eigenvalues, blocks)
    if eigenvalue_table is not None and linear in eigenvalue_table:
        return AffineAut(linear, translation, eigenvalue_table[linear], None)
    return AffineAut(linear, translation, _eigenvalues_from_char_poly(linear), None)


def inverse(a: AffineAut) -> AffineAut:
    inv_rows = mat_inv(a.linear)
    linear = tuple(tuple(int(x) for x in row) for row in inv_rows)
    translation = vec_mod1(tuple(-x for x in mat_vec(linear, a.translation)))
    blocks = None
    if a.blocks is not None:
        blocks = tuple(
            tuple(tuple(int(x) for x in row) for row in mat_inv(b)) for b in a.blocks
        )
    return AffineAut(linear, translation, a.eigenvalues, blocks)


@dataclass(frozen=True)
class ActionGroup:
    """A finite closed group of affine automorphisms, identity first."""

    generators: tuple[AffineAut, ...]
    elements: tuple[AffineAut, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {e.key(): i for i, e in enumerate(self.elements)})
        object.__setattr__(self, "_mul_memo", {})

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, a: AffineAut) -> int:
        return self._index[a.key()]

    def compose_indices(self, i: int, j: int) -> int:
        memo = self._mul_memo
        if (i, j) not in memo:
            a, b = self.elements[i], self.elements[j]
            linear = mat_mul(a.linear, b.linear)
            translation = vec_mod1(vec_add(mat_vec(a.linear, b.translation), a.translation))
            memo[(i, j)] = self._index[(linear, translation)]
        return memo[(i, j)]

    def inverse_index(self, i: int) -> int:
        return self._index[inverse(self.elements[i]).key()]

    def element_order(self, i: int) -> int:
        order = 1
        j = i
        while j != 0:
            j = self.compose_indices(j, i)
            order += 1
        return order

    def is_abelian(self) -> bool:
        n = self.order
        return all(
            self.compose_indices(i, j) == self.compose_indices(j, i)
            for i in range(n)
            for j in range(i + 1, n)
        )

    def is_cyclic(self) -> bool:
        return any(self.element_order(i) == self.order for i in range(self.order))

    def eigenvalue_table(self):
        return {e.linear: e.eigenvalues for e in self.elements}


def _finish_eigenvalues(a: AffineAut, factors) -> AffineAut:
    if a.eigenvalues is not None:
        return a
    eig = tuple(factor_block_eigenvalue(f, b) for f, b in zip(factors, a.blocks))
    return AffineAut(a.linear, a.translation, eig, a.blocks)


def close_group(
    gens,
    torus: TorusDatum,
    cap: int = DEFAULT_CLOSURE_CAP,
    eigenvalue_table=None,
) -> ActionGroup:
    """Close the generators under composition mod Lambda.

    Deterministic BFS order with the identity first.  Raises
    LatticeNotPreserved for non-unimodular or non-integral linear parts and
    NotClosedWithinCap past the cap.
    """
    gens = tuple(gens)
    rank = torus.rank
    table = dict(eigenvalue_table or {})
    for g in gens:
        if len(g.linear) != rank:
            raise LatticeNotPreserved("generator rank mismatch")
        if not all(isinstance(x, int) for row in g.linear for x in row):
            raise LatticeNotPreserved("linear part must be integral on the lattice")
        if abs(mat_det(g.linear)) != 1:
            raise LatticeNotPreserved("linear part is not unimodular")
        table.setdefault(g.linear, g.eigenvalues)

    def finish(a: AffineAut) -> AffineAut:
        if a.eigenvalues is not None:
            return a
        if torus.factors is not None and a.blocks is not None:
            return _finish_eigenvalues(a, torus.factors)
        if a.linear in table:
            return AffineAut(a.linear, a.translation, table[a.linear], a.blocks)
        return AffineAut(
            a.linear, a.translation, _eigenvalues_from_char_poly(a.linear), a.blocks
        )

    ident = affine_identity(rank)
    elements = [ident]
    seen = {ident.key()}
    frontier = [ident]
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                product = finish(compose(e, g, table))
                if product.key() not in seen:
                    if len(elements) >= cap:
                        raise NotClosedWithinCap(f"group closure exceeds cap {cap}")
                    seen.add(product.key())
                    elements.append(product)
                    table.setdefault(product.linear, product.eigenvalues)
                    new.append(product)
        frontier = new
    canonical_gens = tuple(finish(g) for g in gens)
    return ActionGroup(canonical_gens, tuple(elements))


def affine_from_factor_action(torus: TorusDatum, blocks, translation_product) -> AffineAut:
    """Build a generator from per-factor 2x2 blocks and a product-coordinate translation.

    The block-diagonal matrix is rewritten in lattice coordinates; if it does
    not preserve the enlarged lattice, the action does not descend to A and
    LatticeNotPreserved is raised.
    """
    if torus.factors is None:
        raise LatticeNotPreserved("factor actions need a torus with factor provenance")
    blocks = tuple(tuple(map(tuple, b)) for b in blocks)
    if len(blocks) != len(torus.factors):
        raise LatticeNotPreserved("one 2x2 block per factor is required")
    rank = torus.rank
    big = [[0] * rank for _ in range(rank)]
    for f, b in enumerate(blocks):
        for i in range(2):
            for j in range(2):
                big[2 * f + i][2 * f + j] = b[i][j]
    linear_rows = mat_mul(mat_mul(torus.lam_basis_inv, tuple(map(tuple, big))), torus.lam_basis)
    if not all(vec_is_integral(row) for row in linear_rows):
        raise LatticeNotPreserved("linear part does not preserve the enlarged lattice")
    linear = tuple(tuple(int(x) for x in row) for row in linear_rows)
    eig = tuple(factor_block_eigenvalue(f, b) for f, b in zip(torus.factors, blocks))
    translation = vec_mod1(torus.to_lattice_coords(as_fractions(translation_product)))
    return AffineAut(linear, translation, eig, blocks)


def affine_raw(linear, translation, eigenvalues) -> AffineAut:
    """Raw-mode generator: integer matrix, lattice-coordinate translation, declared eigenvalues."""
    linear = tuple(tuple(int(x) for x in row) for row in linear)
    return AffineAut(linear, vec_mod1(as_fractions(translation)), tuple(eigenvalues), None)


def has_fixed_point(a: AffineAut, torus: TorusDatum) -> bool:
    """Exact decision: does g(x) = x have a solution on A = V/Lambda?

    g(x) = x iff (M - I)x = -t + lambda for some lattice vector, i.e. iff the
    coset t + colspace(M - I) meets Z^rank.
    """
    n = a.rank
    diff_cols = [
        tuple(a.linear[i][j] - (1 if i == j else 0) for i in range(n)) for j in range(n)
    ]
    span = Sublattice.from_int_columns(n, [c for c in diff_cols if any(c)])
    return coset_meets_lattice(span, a.translation)


@dataclass(frozen=True)
class ValidationReport:
    """Structured outcome of all hyperelliptic-datum checks."""

    group_order: int
    fixed_point_elements: tuple[int, ...]
    nonidentity_translations: tuple[int, ...]
    form_violations: tuple[int, ...]
    eigenvalue_violations: tuple[str, ...]
    faithful: bool

    @property
    def free(self) -> bool:
        return not self.fixed_point_elements

    @property
    def form_invariant(self) -> bool:
        return not self.form_violations

    @property
    def eigenvalues_consistent(self) -> bool:
        return not self.eigenvalue_violations

    @property
    def passed(self) -> bool:
        return (
            self.free
            and not self.nonidentity_translations
            and self.form_invariant
            and self.eigenvalues_consistent
            and self.faithful
        )

    @property
    def is_hyperelliptic(self) -> bool:
        return self.passed and self.group_order > 1

    def failures(self) -> tuple[str, ...]:
        out = []
        if self.fixed_point_elements:
            out.append(f"freeness fails at element indices {list(self.fixed_point_elements)}")
        if self.nonidentity_translations:
            out.append(
                f"nonidentity translations at element indices {list(self.nonidentity_translations)}"
            )
        if self.form_violations:
            out.append(f"form not invariant at element indices {list(self.form_violations)}")
        out.extend(self.eigenvalue_violations)
        if not self.faithful:
            out.append("complex representation is not faithful")
        return tuple(out)


@dataclass
class HyperellipticDatum:
    """A = V/Lambda together with a finite affine action and an invariant form."""

    torus: TorusDatum
    group: ActionGroup
    form: AlternatingForm
    builder_mode: bool = True
    j_stability_assumed: bool = False
    _report: ValidationReport | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.torus.rank

    @property
    def dim(self) -> int:
        return self.torus.dim

    @property
    def validated(self) -> bool:
        return self._report is not None and self._report.passed


def _check_eigenvalues(e: AffineAut, index: int) -> str | None:
    n = e.rank // 2
    if len(e.eigenvalues) != n:
        return f"element {index}: expected {n} eigenvalues, got {len(e.eigenvalues)}"
    try:
        mults = cyclotomic_multiplicities(char_poly(e.linear))
    except InconsistentEigenvalues as exc:
        return f"element {index}: {exc}"
    counts: dict[RootOfUnity, int] = {}
    for z in e.eigenvalues:
        counts[z] = counts.get(z, 0) + 1
        conj = z.conjugate()
        counts[conj] = counts.get(conj, 0) + 1
    expected: dict[RootOfUnity, int] = {}
    for order, a in mults.items():
        for k in range(order):
            if gcd(k, order) == 1 or order == 1:
                expected[RootOfUnity.of(k, order)] = a
    if counts != expected:
        return (
            f"element {index}: eigenvalues {sorted(counts.items())} do not match "
            f"characteristic polynomial factors {sorted(expected.items())}"
        )
    return None


def validate(d: HyperellipticDatum) -> ValidationReport:
    """Run every hyperelliptic-variety check and cache the report on the datum."""
    fixed = []
    translations = []
    form_bad = []
    eig_bad = []
    linears = set()
    for i, e in enumerate(d.group.elements):
        if i == 0:
            linears.add(e.linear)
            continue
        if has_fixed_point(e, d.torus):
            fixed.append(i)
        if e.is_translation():
            translations.append(i)
        if not d.form.is_invariant_under(e.linear):
            form_bad.append(i)
        problem = _check_eigenvalues(e, i)
        if problem:
            eig_bad.append(problem)
        linears.add(e.linear)
    report = ValidationReport(
        group_order=d.group.order,
        fixed_point_elements=tuple(fixed),
        nonidentity_translations=tuple(translations),
        form_violations=tuple(form_bad),
        eigenvalue_violations=tuple(eig_bad),
        faithful=len(linears) == d.group.order,
    )
    d._report = report
    return report


def quotient_by_translations(d: HyperellipticDatum) -> HyperellipticDatum:
    """Normalize T/G to (T/H)/(G/H) where H is the translation subgroup.

    The translation subgroup is normal; its vectors enlarge the period
    lattice, and the group descends with the translations removed.  Data with
    no nonidentity translations are returned unchanged (idempotent).
    """
    translation_vectors = [
        e.translation for e in d.group.elements if e.is_translation() and not e.is_identity()
    ]
    if not translation_vectors:
        return d
    rank = d.rank
    enlarged = Sublattice.standard(rank).sum(
        Sublattice.from_rat_columns(rank, translation_vectors)
    )
    # columns of s: new lattice basis in old lattice coordinates
    s = transpose(tuple(tuple(Fraction(x, enlarged.den) for x in c) for c in enlarged.cols))
    s_inv = mat_inv(s)
    new_lam_basis = mat_mul(d.torus.lam_basis, s)
    new_torus = TorusDatum(
        rank,
        tuple(tuple(Fraction(x) for x in row) for row in new_lam_basis),
        d.torus.factors,
        d.torus.quotient_gens
        + tuple(d.torus.to_product_coords(t) for t in translation_vectors),
    )
    table = {}
    new_gens = []
    seen = set()
    for g in d.group.generators + d.group.elements:
        linear_rows = mat_mul(mat_mul(s_inv, g.linear), s)
        if not all(vec_is_integral(row) for row in linear_rows):
            raise LatticeNotPreserved("translation subgroup is not normal (internal error)")
        linear = tuple(tuple(int(x) for x in row) for row in linear_rows)
        translation = vec_mod1(mat_vec(s_inv, g.translation))
        image = AffineAut(linear, translation, g.eigenvalues, g.blocks)
        table.setdefault(linear, g.eigenvalues)
        if not image.is_identity() and image.key() not in seen:
            seen.add(image.key())
            new_gens.append(image)
    new_group = close_group(tuple(new_gens), new_torus, eigenvalue_table=table)
    expected_order = d.group.order // (len(translation_vectors) + 1)
    assert new_group.order == expected_order, "translation quotient has wrong order"
    new_form = AlternatingForm(
        tuple(
            tuple(Fraction(x) for x in row)
            for row in mat_mul(mat_mul(transpose(s), d.form.matrix), s)
        )
    )
    return HyperellipticDatum(
        new_torus,
        new_group,
        new_form,
        builder_mode=d.builder_mode,
        j_stability_assumed=d.j_stability_assumed,
    )
