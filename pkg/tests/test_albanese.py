from fractions import Fraction

import pytest

from hyperelliptic.action import compose, validate
from hyperelliptic.albanese import (
    classify_fiber,
    compute_A0,
    compute_A1,
    compute_H,
    compute_K,
    compute_albanese,
    compute_fiber,
    decompose_cocycle,
    run_pipeline,
)
from hyperelliptic.catalog import get_entry
from hyperelliptic.exactlin import Sublattice, mat_vec
from hyperelliptic.torus import identify_factor_subspace

F = Fraction


def datum_of(name):
    d = get_entry(name).build()
    assert validate(d).passed
    return d


def pipeline_parts(d):
    lambda0 = compute_A0(d)
    lambda1 = compute_A1(d, lambda0)
    dec = compute_K(d, lambda0, lambda1)
    table = decompose_cocycle(d, dec)
    return dec, table


def product_lattice(d, vectors):
    return Sublattice.from_rat_columns(
        d.rank, [d.torus.to_product_coords(v) for v in vectors]
    )


def factor_plane(d, index):
    cols = []
    for j in (2 * index, 2 * index + 1):
        col = [F(0)] * d.rank
        col[j] = F(1)
        cols.append(tuple(col))
    return cols


class TestDecomposition:
    def test_bielliptic_1_lattices(self):
        d = datum_of("bielliptic-1")
        dec, _ = pipeline_parts(d)
        assert dec.q == 1
        assert product_lattice(d, dec.lambda0.basis_vectors()) == Sublattice.from_rat_columns(
            4, factor_plane(d, 0)
        )
        assert product_lattice(d, dec.lambda1.basis_vectors()) == Sublattice.from_rat_columns(
            4, factor_plane(d, 1)
        )
        assert dec.k.order == 1

    def test_trivial_group_lambda0_is_full(self):
        from hyperelliptic.action import HyperellipticDatum, close_group
        from hyperelliptic.torus import EllipticFactor, build_product_torus, standard_form

        torus = build_product_torus([EllipticFactor("generic", "t")])
        d = HyperellipticDatum(torus, close_group([], torus), standard_form(torus))
        validate(d)
        lambda0 = compute_A0(d)
        assert lambda0 == Sublattice.standard(2)
        lambda1 = compute_A1(d, lambda0)
        assert lambda1.rank == 0

    def test_z2z2_has_rank_zero_fixed_lattice(self):
        d = datum_of("z2z2-threefold")
        lambda0 = compute_A0(d)
        assert lambda0.rank == 0
        lambda1 = compute_A1(d, lambda0)
        assert lambda1 == Sublattice.standard(6)

    def test_z4_fixed_and_moving_parts(self):
        d = datum_of("z4-threefold")
        dec, _ = pipeline_parts(d)
        # A1 is the product of the second and third factors
        assert identify_factor_subspace(d.torus, dec.lambda1) == (1, 2)
        assert dec.k.invariant_factors == (2,)
        # K0 = <1/2> on the first factor, K1 = <(1/2, 0)> on the fiber part
        k0_lat = product_lattice(
            d, dec.lambda0.basis_vectors() + dec.k0.generators
        )
        expected = Sublattice.from_rat_columns(
            6, factor_plane(d, 0) + [(F(1, 2), 0, 0, 0, 0, 0)]
        )
        assert k0_lat == expected
        k1_lat = product_lattice(d, dec.lambda1.basis_vectors() + dec.k1.generators)
        expected1 = Sublattice.from_rat_columns(
            6,
            factor_plane(d, 1) + factor_plane(d, 2) + [(0, 0, F(1, 2), 0, 0, 0)],
        )
        assert k1_lat == expected1

    def test_bielliptic_2_k_is_stated_generator(self):
        d = datum_of("bielliptic-2")
        dec, _ = pipeline_parts(d)
        assert dec.k.invariant_factors == (2,)
        # K = <(tau/2, 1/2)>: product coordinates (0, 1/2, 1/2, 0)
        gen = d.torus.to_product_coords(dec.k.generators[0])
        lattice_with_gen = Sublattice.from_rat_columns(
            4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), gen]
        )
        expected = Sublattice.from_rat_columns(
            4,
            [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
             (0, F(1, 2), F(1, 2), 0)],
        )
        assert lattice_with_gen == expected

    def test_k_orders_agree(self):
        for name in ("bielliptic-2", "bielliptic-4", "bielliptic-6", "z4-threefold",
                     "zmzm-threefold-m2", "zmzm-threefold-m3"):
            d = datum_of(name)
            dec, _ = pipeline_parts(d)
            assert dec.k.order == dec.k0.order == dec.k1.order
            assert len(dec.k_elements) == dec.k.order


class TestCocycle:
    def test_identity_splits_to_zero(self):
        d = datum_of("z4-threefold")
        dec, table = pipeline_parts(d)
        assert not any(table.t0[0])
        assert not any(table.t1[0])

    def test_z4_generator_splits_on_base(self):
        # t0(g) = 1/4 on the first factor and t1(g) = 0, both mod the lattices
        d = datum_of("z4-threefold")
        dec, table = pipeline_parts(d)
        g_index = d.group.index_of(d.group.generators[0])
        expected_t0 = d.torus.to_lattice_coords((F(1, 4), 0, 0, 0, 0, 0))
        diff = tuple(a - b for a, b in zip(table.t0[g_index], expected_t0))
        assert dec.lambda0.contains(diff)
        assert dec.lambda1.contains(table.t1[g_index])

    def test_zmzm_second_generator_splits_to_tau_quotient(self):
        # t0(g2) = tau0/3 on the first factor, mod Lambda_0
        d = datum_of("zmzm-threefold-m3")
        dec, table = pipeline_parts(d)
        idx = d.group.index_of(d.group.generators[1])
        expected_t0 = d.torus.to_lattice_coords((0, F(1, 3), 0, 0, 0, 0))
        diff = tuple(a - b for a, b in zip(table.t0[idx], expected_t0))
        assert dec.lambda0.contains(diff)

    def test_splitting_reassembles(self):
        for name in ("bielliptic-6", "z4-threefold", "zmzm-threefold-m3"):
            d = datum_of(name)
            dec, table = pipeline_parts(d)
            for i, e in enumerate(d.group.elements):
                total = tuple(a + b for a, b in zip(table.t0[i], table.t1[i]))
                assert total == e.translation


class TestSubgroupH:
    def test_z4_h_is_generated_by_square(self):
        d = datum_of("z4-threefold")
        dec, table = pipeline_parts(d)
        h, paired = compute_H(d, dec, table)
        g = d.group.generators[0]
        g2 = compose(g, g)
        assert set(h) == {0, d.group.index_of(g2)}

    @pytest.mark.parametrize("m", [2, 3])
    def test_zmzm_h_is_first_generator(self, m):
        d = datum_of(f"zmzm-threefold-m{m}")
        dec, table = pipeline_parts(d)
        h, _ = compute_H(d, dec, table)
        assert len(h) == m
        g1 = d.group.generators[0]
        power = g1
        indices = {0}
        for _ in range(m - 1):
            indices.add(d.group.index_of(power))
            power = compose(power, g1)
        assert set(h) == indices

    def test_bielliptic_h_trivial(self):
        for name in ("bielliptic-1", "bielliptic-5", "bielliptic-7"):
            d = datum_of(name)
            dec, table = pipeline_parts(d)
            h, _ = compute_H(d, dec, table)
            assert h == (0,)

    def test_z2z2_h_is_everything(self):
        d = datum_of("z2z2-threefold")
        dec, table = pipeline_parts(d)
        h, _ = compute_H(d, dec, table)
        assert set(h) == set(range(d.group.order))


class TestAlbanese:
    @pytest.mark.parametrize(
        "name,factors",
        [
            ("bielliptic-1", (2,)),
            ("bielliptic-2", (2, 2)),
            ("bielliptic-3", (3,)),
            ("bielliptic-4", (3, 3)),
            ("bielliptic-5", (4,)),
            ("bielliptic-6", (4, 2)),
            ("bielliptic-7", (6,)),
        ],
    )
    def test_table_rows(self, name, factors):
        d = datum_of(name)
        dec, table = pipeline_parts(d)
        lam_b, got = compute_albanese(d, dec, table)
        assert sorted(got) == sorted(factors)

    def test_trivial_group_albanese_is_lambda0(self):
        from hyperelliptic.action import HyperellipticDatum, close_group
        from hyperelliptic.torus import EllipticFactor, build_product_torus, standard_form

        torus = build_product_torus([EllipticFactor("generic", "t")])
        d = HyperellipticDatum(torus, close_group([], torus), standard_form(torus))
        validate(d)
        dec, table = pipeline_parts(d)
        lam_b, factors = compute_albanese(d, dec, table)
        assert factors == ()
        assert lam_b == dec.lambda0


class TestFiber:
    def test_z4_fiber_is_bielliptic(self):
        d = datum_of("z4-threefold")
        report = run_pipeline(d)
        assert report.fiber_class.kind == "hyperelliptic"
        assert report.fiber_class.holonomy_order == 2
        assert report.fiber_class.cyclic
        assert report.fiber_class.dim == 2

    @pytest.mark.parametrize("m", [2, 3])
    def test_zmzm_fiber_is_bielliptic(self, m):
        report = run_pipeline(datum_of(f"zmzm-threefold-m{m}"))
        assert report.fiber_class.kind == "hyperelliptic"
        assert report.fiber_class.holonomy_order == m
        assert report.fiber_class.cyclic

    def test_bielliptic_5_fiber_is_gauss_curve(self):
        d = datum_of("bielliptic-5")
        report = run_pipeline(d)
        assert report.fiber_class.kind == "abelian"
        assert report.fiber_factor_indices == (1,)
        assert d.torus.factors[1].kind == "gauss"

    def test_abelian_fiber_construction(self):
        report = run_pipeline(datum_of("abelian-fiber-construction"))
        assert report.q == 1
        assert report.fiber_class.kind == "abelian"
        assert report.fiber_class.dim == 2
        assert report.subgroup_h == (0,)

    def test_fiber_classification_of_prime_order_cyclic(self):
        # prime-order cyclic groups always give abelian fibers with trivial H
        for name in ("bielliptic-1", "bielliptic-3", "low-irregularity-cyclic"):
            report = run_pipeline(datum_of(name))
            assert report.fiber_class.kind == "abelian"
            assert report.subgroup_h == (0,)


class TestRunPipeline:
    def test_recursion_into_z4_fiber(self):
        report = run_pipeline(datum_of("z4-threefold"), recurse=True)
        assert report.fiber_report is not None
        assert report.fiber_report.q == 1
        assert report.fiber_report.fiber_class.kind == "abelian"
        assert report.fiber_report.fiber_report is None

    def test_regular_variety_does_not_recurse_forever(self):
        report = run_pipeline(datum_of("z2z2-threefold"), recurse=True)
        assert report.q == 0
        assert report.fiber_class.dim == 3  # the fiber is the variety itself
        assert report.fiber_report is None

    def test_low_irregularity_cyclic(self):
        report = run_pipeline(datum_of("low-irregularity-cyclic"))
        assert report.dim == 3
        assert report.q == 1

    def test_property_suite_over_catalog(self):
        from hyperelliptic.catalog import list_entries, get_entry
        from hyperelliptic.invariants import invariants_report

        for name in list_entries():
            entry = get_entry(name)
            if entry.expect_invalid:
                continue
            d = entry.build()
            validate(d)
            report = run_pipeline(d)
            inv = invariants_report(d)
            assert report.q < report.dim  # groups here are nontrivial
            assert report.q == report.decomposition.lambda0.rank // 2 == inv.q
            assert (
                report.decomposition.k.order
                == report.decomposition.k0.order
                == report.decomposition.k1.order
            )
            assert report.q + report.fiber_class.dim == report.dim
            if report.q == report.dim - 1:
                assert d.group.is_cyclic()
            if d.group.is_cyclic():
                assert report.fiber_class.kind == "abelian" or report.fiber_class.cyclic
            gen_eigs = [
                {z.order for z in g.eigenvalues if not z.is_one()}
                for g in d.group.generators
            ]
            if d.group.is_cyclic() and len(gen_eigs) == 1 and len(gen_eigs[0]) == 1:
                assert report.fiber_class.kind == "abelian"
                assert report.subgroup_h == (0,)
