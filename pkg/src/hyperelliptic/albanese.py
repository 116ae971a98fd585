"""The Albanese pipeline for a validated hyperelliptic datum.

Given X = A/G this computes, exactly and in lattice coordinates:

  * the fixed subtorus A0 (saturated kernel lattice of the generators),
  * its invariant complement A1 cut out by the invariant alternating form,
  * the kernel K of the addition isogeny A0 x A1 -> A with its two
    isomorphic projections K0, K1,
  * the splitting of every translation part along V0 + V1,
  * the subgroup H of elements whose V0-translation lies in K0,
  * the Albanese lattice Lambda_B (so Alb(X) = V0/Lambda_B) with the
    invariant factors of Lambda_B/Lambda_0,
  * the Albanese fiber A1/H as a new datum, normalized and classified.

Everything is certified by construction; consistency facts that are theorems
for valid input (rank parity, |K| = |K0| = |K1|, H closed under composition)
are asserted and raise PipelineInvariantError when violated, which signals a
bug rather than bad input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .action import (
    ActionGroup,
    AffineAut,
    HyperellipticDatum,
    close_group,
    quotient_by_translations,
    validate,
)
from .exactlin import (
    FiniteAbelianGroup,
    Sublattice,
    kernel_lattice,
    mat_det,
    mat_inv,
    mat_mul,
    mat_vec,
    quotient_group,
    transpose,
    vec_mod1,
    vec_sub,
)
from .torus import AlternatingForm, TorusDatum, identify_factor_subspace

K_ENUMERATION_CAP = 100_000


class OddRank(ValueError):
    """The fixed lattice has odd rank: the complex-structure data is inconsistent."""


class DegenerateRestriction(ValueError):
    """The invariant form restricted to V0 is singular (rejected raw input)."""


class NotASubgroup(RuntimeError):
    """H failed its closure check; impossible for valid data, so a pipeline bug."""


class PipelineInvariantError(RuntimeError):
    """A theorem-backed consistency check failed; signals an internal bug."""


@dataclass(frozen=True)
class Decomposition:
    """A ~ (A0 x A1)/K in lattice coordinates, with the K projections paired."""

    lambda0: Sublattice
    lambda1: Sublattice
    k: FiniteAbelianGroup
    k0: FiniteAbelianGroup
    k1: FiniteAbelianGroup
    # every K element as (lift in Lambda, V0 part, V1 part); index 0 is zero
    k_elements: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[Fraction, ...]], ...]
    proj0: tuple[tuple[Fraction, ...], ...]
    proj1: tuple[tuple[Fraction, ...], ...]

    @property
    def q(self) -> int:
        return self.lambda0.rank // 2


@dataclass(frozen=True)
class CocycleTable:
    """V0/V1 splitting of each element's translation lift (indexed like the group)."""

    t0: tuple[tuple[Fraction, ...], ...]
    t1: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FiberClassification:
    kind: str  # "abelian" | "hyperelliptic"
    dim: int
    holonomy_order: int
    cyclic: bool
    holonomy_invariant_factors: tuple[int, ...] | None  # None for nonabelian holonomy
    element_orders: tuple[int, ...]

    def describe(self) -> str:
        if self.kind == "abelian":
            return f"abelian of dimension {self.dim}"
        if self.holonomy_invariant_factors is not None:
            structure = " x ".join(f"Z/{d}" for d in self.holonomy_invariant_factors)
        else:
            structure = f"nonabelian of order {self.holonomy_order}"
        return f"hyperelliptic of dimension {self.dim} with holonomy {structure}"


@dataclass
class AlbaneseReport:
    q: int
    dim: int
    group_order: int
    decomposition: Decomposition
    cocycle: CocycleTable
    albanese_lattice: Sublattice
    albanese_isogeny_factors: tuple[int, ...]
    subgroup_h: tuple[int, ...]
    fiber: HyperellipticDatum
    fiber_class: FiberClassification
    albanese_factor_indices: tuple[int, ...] | None
    fiber_factor_indices: tuple[int, ...] | None
    fiber_report: "AlbaneseReport | None" = None


def _require_validated(d: HyperellipticDatum) -> None:
    if d._report is None:
        validate(d)
    if not d._report.passed:
        raise PipelineInvariantError(
            "pipeline requires a datum that passes validation: "
            + "; ".join(d._report.failures())
        )


def compute_A0(d: HyperellipticDatum) -> Sublattice:
    """Saturated fixed lattice of the generators (Lambda_0, even rank)."""
    rank = d.rank
    rows = []
    for g in d.group.generators:
        if g.is_identity():
            continue
        for i in range(rank):
            row = tuple(g.linear[i][j] - (1 if i == j else 0) for j in range(rank))
            rows.append(row)
    if not rows:
        return Sublattice.standard(rank)
    lam0 = kernel_lattice(tuple(rows))
    if lam0.rank % 2 != 0:
        raise OddRank(f"fixed lattice has odd rank {lam0.rank}")
    return lam0


def compute_A1(d: HyperellipticDatum, lambda0: Sublattice) -> Sublattice:
    """Lambda_1 = Lambda intersect V1, the form-orthogonal complement of V0."""
    rank = d.rank
    if lambda0.rank == 0:
        return Sublattice.standard(rank)
    b0 = transpose(lambda0.cols)  # rank x r0, integer
    gram = mat_mul(mat_mul(transpose(b0), d.form.matrix), b0)
    if mat_det(gram) == 0:
        raise DegenerateRestriction("form restricted to V0 is singular")
    # rows of the constraint: E(b, .) = 0 for each Lambda_0 basis vector b
    constraint = mat_mul(transpose(b0), d.form.matrix)  # r0 x rank, rational
    den = 1
    for row in constraint:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    int_rows = tuple(tuple(int(x * den) for x in row) for row in constraint)
    lam1 = kernel_lattice(int_rows)
    if lambda0.rank + lam1.rank != rank:
        raise DegenerateRestriction("V0 and its complement do not span V")
    b1 = lam1.basis_vectors()
    for g in d.group.generators:
        for col in b1:
            image = mat_vec(g.linear, col)
            if lam1.coords_of(image) is None:
                raise PipelineInvariantError("V1 is not stable under the group action")
    return lam1


def _projectors(lambda0: Sublattice, lambda1: Sublattice):
    rank = lambda0.ambient_rank
    cols = lambda0.basis_vectors() + lambda1.basis_vectors()
    b = transpose(cols)  # rank x rank
    c = mat_inv(b)
    r0 = lambda0.rank
    if r0 == 0:
        zero = tuple(tuple(Fraction(0) for _ in range(rank)) for _ in range(rank))
        return zero, tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank))
    if lambda1.rank == 0:
        zero = tuple(tuple(Fraction(0) for _ in range(rank)) for _ in range(rank))
        return tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank)), zero
    b0 = transpose(lambda0.basis_vectors())
    b1 = transpose(lambda1.basis_vectors())
    c0 = c[:r0]
    c1 = c[r0:]
    return mat_mul(b0, c0), mat_mul(b1, c1)


def compute_K(
    d: HyperellipticDatum, lambda0: Sublattice, lambda1: Sublattice
) -> Decomposition:
    """K = Lambda/(Lambda_0 + Lambda_1) and its paired projections K0, K1."""
    rank = d.rank
    small = Sublattice.from_int_columns(rank, lambda0.cols + lambda1.cols)
    big = Sublattice.standard(rank)
    k = quotient_group(big, small)
    proj0, proj1 = _projectors(lambda0, lambda1)
    if k.order > K_ENUMERATION_CAP:
        raise PipelineInvariantError(f"K of order {k.order} exceeds the enumeration cap")

    def split(v):
        return mat_vec(proj0, v), mat_vec(proj1, v)

    k0_gens = []
    k1_gens = []
    for gen in k.generators:
        p0, p1 = split(gen)
        k0_gens.append(lambda0.reduce_mod(p0) if lambda0.rank else p0)
        k1_gens.append(lambda1.reduce_mod(p1) if lambda1.rank else p1)
    k0 = FiniteAbelianGroup(k.invariant_factors, tuple(k0_gens))
    k1 = FiniteAbelianGroup(k.invariant_factors, tuple(k1_gens))
    elements = []
    for lift in k.elements(small):
        p0, p1 = split(lift)
        elements.append((lift, p0, p1))
    # |K| = |K0| = |K1| because both projections are injective on K
    seen0 = {tuple(lambda0.reduce_mod(p0)) if lambda0.rank else tuple(p0) for _, p0, _ in elements}
    seen1 = {tuple(lambda1.reduce_mod(p1)) if lambda1.rank else tuple(p1) for _, _, p1 in elements}
    if not (len(seen0) == len(seen1) == len(elements) == k.order):
        raise PipelineInvariantError("K projections are not injective")
    return Decomposition(lambda0, lambda1, k, k0, k1, tuple(elements), proj0, proj1)


def decompose_cocycle(d: HyperellipticDatum, dec: Decomposition) -> CocycleTable:
    """Split each element's canonical translation lift along V0 + V1.

    The splitting of one fixed lift is unique; the non-uniqueness of the
    torus-level decomposition is absorbed by doing all downstream membership
    tests modulo K0/K1, which is choice-independent.
    """
    t0s = []
    t1s = []
    for e in d.group.elements:
        t0s.append(mat_vec(dec.proj0, e.translation))
        t1s.append(mat_vec(dec.proj1, e.translation))
    table = CocycleTable(tuple(t0s), tuple(t1s))
    # cocycle identity: t0(gh) - t0(g) - t0(h) lies in Lambda_0 + K0 lifts
    enlarged = dec.lambda0
    if dec.k0.generators:
        enlarged = enlarged.sum(
            Sublattice.from_rat_columns(d.rank, dec.k0.generators)
        )
    n = d.group.order
    for i in range(n):
        for j in range(n):
            ij = d.group.compose_indices(i, j)
            diff = vec_sub(table.t0[ij], tuple(a + b for a, b in zip(table.t0[i], table.t0[j])))
            membership = (
                all(x.denominator == 1 for x in diff)
                if enlarged.rank == 0
                else enlarged.contains(diff)
            )
            if not membership:
                raise PipelineInvariantError("cocycle identity fails modulo K0")
    return table


def _match_k_element(dec: Decomposition, t0):
    """The unique K element whose V0 part is congruent to t0 mod Lambda_0, or None."""
    for lift, p0, p1 in dec.k_elements:
        diff = vec_sub(t0, p0)
        if dec.lambda0.rank == 0:
            inside = all(x == 0 for x in diff)
        else:
            inside = dec.lambda0.contains(diff)
        if inside:
            return lift, p0, p1
    return None


def compute_H(d: HyperellipticDatum, dec: Decomposition, table: CocycleTable):
    """Indices of H = {g : t0(g) in K0}, with the paired K1 parts for the fiber."""
    members = []
    paired_k1 = {}
    for i in range(d.group.order):
        match = _match_k_element(dec, table.t0[i])
        if match is not None:
            members.append(i)
            paired_k1[i] = match[2]
    members = tuple(members)
    member_set = set(members)
    for i in members:
        for j in members:
            if d.group.compose_indices(i, j) not in member_set:
                raise NotASubgroup("H is not closed under composition")
        if d.group.inverse_index(i) not in member_set:
            raise NotASubgroup("H is not closed under inversion")
    return members, paired_k1


def compute_albanese(d: HyperellipticDatum, dec: Decomposition, table: CocycleTable):
    """Albanese lattice Lambda_B in V0 and the invariant factors of Lambda_B/Lambda_0."""
    rank = d.rank
    vectors = list(dec.lambda0.basis_vectors())
    vectors.extend(dec.k0.generators)
    for g in d.group.generators:
        vectors.append(table.t0[d.group.index_of(g)])
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return Sublattice.zero(rank), ()
    lam_b = Sublattice.from_rat_columns(rank, vectors)
    if lam_b.rank != dec.lambda0.rank:
        raise PipelineInvariantError("Albanese lattice rank differs from rank Lambda_0")
    factors = quotient_group(lam_b, dec.lambda0).invariant_factors
    return lam_b, factors


def _fiber_basis(d: HyperellipticDatum, lambda1: Sublattice):
    """Basis columns for the fiber's coordinates, factor-aligned when possible."""
    indices = identify_factor_subspace(d.torus, lambda1)
    if indices is not None:
        aligned = []
        for i in indices:
            for j in (2 * i, 2 * i + 1):
                col = [Fraction(0)] * d.rank
                col[j] = Fraction(1)
                aligned.append(tuple(d.torus.to_lattice_coords(col)))
        if all(all(x.denominator == 1 for x in col) for col in aligned):
            return tuple(aligned), indices
    return lambda1.basis_vectors(), None


def compute_fiber(
    d: HyperellipticDatum,
    dec: Decomposition,
    table: CocycleTable,
    h_indices,
    paired_k1,
) -> tuple[HyperellipticDatum, tuple[int, ...] | None]:
    """The fiber datum over the origin: A1 with the induced H-action.

    Each h acts by a1 -> rho(h)|V1 a1 + (t1(h) - k1(h)) where k1(h) is the K1
    element paired with t0(h); the datum is then normalized via
    quotient_by_translations by the caller before classification.
    """
    basis_cols, factor_indices = _fiber_basis(d, dec.lambda1)
    r1 = len(basis_cols)
    fiber_lattice = Sublattice.from_rat_columns(d.rank, basis_cols)
    q = dec.q
    elements = []
    for i in h_indices:
        e = d.group.elements[i]
        image_cols = []
        for col in basis_cols:
            image = mat_vec(e.linear, col)
            coords = fiber_lattice.coords_of(image)
            if coords is None or not all(c.denominator == 1 for c in coords):
                raise PipelineInvariantError("H does not preserve the fiber lattice")
            image_cols.append(tuple(int(c) for c in coords))
        linear = transpose(tuple(image_cols))
        shift = vec_sub(table.t1[i], paired_k1[i])
        coords = fiber_lattice.coords_of(shift)
        if coords is None:
            raise PipelineInvariantError("fiber translation is outside V1")
        translation = vec_mod1(coords)
        eig = list(e.eigenvalues)
        ones = sum(1 for z in eig if z.is_one())
        if ones < q:
            raise PipelineInvariantError("element has fewer trivial eigenvalues than q")
        fiber_eig = []
        removed = 0
        for z in eig:
            if z.is_one() and removed < q:
                removed += 1
                continue
            fiber_eig.append(z)
        blocks = None
        if factor_indices is not None and e.blocks is not None:
            blocks = tuple(e.blocks[i] for i in factor_indices)
        elements.append(AffineAut(linear, translation, tuple(fiber_eig), blocks))
    factors = None
    if factor_indices is not None and d.torus.factors is not None:
        factors = tuple(d.torus.factors[i] for i in factor_indices)
    fiber_torus = TorusDatum(
        r1,
        tuple(tuple(Fraction(int(i == j)) for j in range(r1)) for i in range(r1)),
        factors,
    )
    gram = AlternatingForm(
        tuple(tuple(Fraction(x) for x in row) for row in d.form.restricted_to(basis_cols))
    )
    table_eig = {e.linear: e.eigenvalues for e in elements}
    group = close_group(
        tuple(e for e in elements if not e.is_identity()),
        fiber_torus,
        eigenvalue_table=table_eig,
    )
    if group.order != len(h_indices):
        raise PipelineInvariantError("fiber action has the wrong order")
    fiber = HyperellipticDatum(
        fiber_torus,
        group,
        gram,
        builder_mode=factors is not None,
        j_stability_assumed=d.j_stability_assumed,
    )
    return fiber, factor_indices


def _abelian_invariant_factors(group: ActionGroup) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element orders."""
    n = group.order
    orders = [group.element_order(i) for i in range(n)]

    def counts_match(factors) -> bool:
        for dvs in range(1, max(orders) + 1):
            actual = sum(1 for o in orders if dvs % o == 0)
            predicted = 1
            for f in factors:
                predicted *= gcd(dvs, f)
            if actual != predicted:
                return False
        return True

    def factorizations(n):
        # multiplicative partitions of n into factors with ascending divisibility
        def partitions_of_prime(e):
            def parts(e, cap):
                if e == 0:
                    yield ()
                for first in range(min(e, cap), 0, -1):
                    for rest in parts(e - first, first):
                        yield (first,) + rest

            return list(parts(e, e))

        primes = {}
        m = n
        p = 2
        while p * p <= m:
            while m % p == 0:
                primes[p] = primes.get(p, 0) + 1
                m //= p
            p += 1
        if m > 1:
            primes[m] = primes.get(m, 0) + 1
        per_prime = []
        for p, e in primes.items():
            per_prime.append([(p, part) for part in partitions_of_prime(e)])
        for combo in itertools.product(*per_prime):
            maxlen = max(len(part) for _, part in combo)
            factors = []
            for i in range(maxlen):
                f = 1
                for p, part in combo:
                    if i < len(part):
                        f *= p ** part[i]
                factors.append(f)
            yield tuple(sorted(factors))

    if n == 1:
        return ()
    for candidate in factorizations(n):
        if counts_match(candidate):
            return candidate
    raise PipelineInvariantError("no abelian structure matches the element orders")


def classify_fiber(fiber: HyperellipticDatum) -> FiberClassification:
    """Abelian iff nothing but translations remain; otherwise the holonomy structure."""
    normalized = quotient_by_translations(fiber)
    group = normalized.group
    dim = fiber.dim
    if group.order == 1:
        return FiberClassification("abelian", dim, 1, True, (), (1,))
    orders = tuple(sorted(group.element_order(i) for i in range(group.order)))
    cyclic = group.is_cyclic()
    invariants = _abelian_invariant_factors(group) if group.is_abelian() else None
    return FiberClassification("hyperelliptic", dim, group.order, cyclic, invariants, orders)


def run_pipeline(d: HyperellipticDatum, recurse: bool = False) -> AlbaneseReport:
    """Full Albanese computation; optionally recurses into hyperelliptic fibers."""
    _require_validated(d)
    n = d.dim
    lambda0 = compute_A0(d)
    q = lambda0.rank // 2
    if d.group.order > 1 and not (q < n):
        raise PipelineInvariantError("irregularity must be strictly below the dimension")
    lambda1 = compute_A1(d, lambda0)
    dec = compute_K(d, lambda0, lambda1)
    table = decompose_cocycle(d, dec)
    h_indices, paired_k1 = compute_H(d, dec, table)
    lam_b, factors = compute_albanese(d, dec, table)
    fiber, fiber_factor_indices = compute_fiber(d, dec, table, h_indices, paired_k1)
    fiber = quotient_by_translations(fiber)
    fiber_report_check = validate(fiber)
    if not fiber_report_check.passed:
        raise PipelineInvariantError(
            "fiber datum fails validation: " + "; ".join(fiber_report_check.failures())
        )
    fiber_class = classify_fiber(fiber)
    if q + fiber_class.dim != n:
        raise PipelineInvariantError("dim Alb + dim fiber must equal dim X")
    if q == n - 1 and d.group.order > 1 and not d.group.is_cyclic():
        raise PipelineInvariantError("irregularity n - 1 forces a cyclic group")
    if d.group.is_cyclic() and fiber_class.kind == "hyperelliptic" and not fiber_class.cyclic:
        raise PipelineInvariantError("cyclic groups must give abelian or cyclic fibers")
    alb_indices = identify_factor_subspace(d.torus, lambda0) if lambda0.rank else ()
    report = AlbaneseReport(
        q=q,
        dim=n,
        group_order=d.group.order,
        decomposition=dec,
        cocycle=table,
        albanese_lattice=lam_b,
        albanese_isogeny_factors=factors,
        subgroup_h=h_indices,
        fiber=fiber,
        fiber_class=fiber_class,
        albanese_factor_indices=alb_indices if alb_indices else None,
        fiber_factor_indices=fiber_factor_indices,
    )
    if recurse and fiber_class.kind == "hyperelliptic" and fiber.dim < n:
        report.fiber_report = run_pipeline(fiber, recurse=True)
    return report
