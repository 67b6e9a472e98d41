"""Tests for groupoid dimensions, the pseudo-group order and freeness certificates."""

from typing import Dict

import pytest
from sympy import Expr, Integer, Rational, Symbol

from jetframe._core.errors import RankDeficient, Undetermined
from jetframe.cases import get_scaling_translation, get_stab, get_translation_x
from jetframe.cli import build_problem, run
from jetframe.det_systems.analysis import (
    groupoid_dim,
    jet_partition,
    quasi_horizontal,
    system_order,
)
from jetframe.det_systems.freeness import freeness_implies_qh, persistence_check
from jetframe.det_systems.system import DeterminingSystem
from jetframe.jet_space.groupoid import Column
from jetframe.jet_space.infinitesimal import prolongation_coefficients
from jetframe.jet_space.multiindex import MultiIndex

L_X, L_U, L_U_XX = Symbol("L.x"), Symbol("L.u"), Symbol("L.u[x,x]")


@pytest.fixture(scope="module")
def scaling() -> DeterminingSystem:
    return build_problem(get_scaling_translation()).system


class TestAnalysis:
    """Tests for the scaling and translation group."""

    def test_groupoid_dim(self, scaling: DeterminingSystem) -> None:
        """X, U, X_x are the parametric jets; nothing new from order 2 on."""
        assert groupoid_dim(scaling, 0) == 2
        assert groupoid_dim(scaling, 1) == 3
        assert groupoid_dim(scaling, 3) == 3

    def test_groupoid_dim_beyond_t_max(self, scaling: DeterminingSystem) -> None:
        """Orders past t_max are not determined."""
        with pytest.raises(Undetermined, match="beyond t_max"):
            groupoid_dim(scaling, 4)

    def test_partition(self, scaling: DeterminingSystem) -> None:
        """Parametric jets are listed by order."""
        partition = jet_partition(scaling, 2)
        assert partition.describe() == {
            "order_0": ["Z.U", "Z.X"],
            "order_1": ["Z.X[x]"],
            "order_2": [],
        }
        assert partition.dim(2) == 3

    def test_system_order(self, scaling: DeterminingSystem) -> None:
        """X_xx = 0 is not a consequence of the first-order equations."""
        assert system_order(scaling) == 2

    def test_quasi_horizontal(self, scaling: DeterminingSystem) -> None:
        """Every jet with a u-derivative is principal from order 2."""
        assert quasi_horizontal(scaling) == (True, 2)

    def test_freeness_implies_qh(self, scaling: DeterminingSystem) -> None:
        """Normalizing x, u and u_xx makes the action free at order 2."""
        assert freeness_implies_qh(scaling, [L_X, L_U, L_U_XX], 2)

    def test_not_free(self, scaling: DeterminingSystem) -> None:
        """Without u_xx the order-1 jet X_x stays undetermined."""
        with pytest.raises(RankDeficient):
            freeness_implies_qh(scaling, [L_X, L_U], 1)

    def test_normalizations_only_gate(self, scaling: DeterminingSystem) -> None:
        """Extra normalizations pass the precondition and leave the verdict alone."""
        extra = [L_X, L_U, L_U_XX, Symbol("L.u[x]")]
        assert freeness_implies_qh(scaling, extra, 2) == freeness_implies_qh(
            scaling, [L_X, L_U, L_U_XX], 2
        )

    def test_not_a_lifted_invariant(self, scaling: DeterminingSystem) -> None:
        """Normalization targets are lifted invariants."""
        with pytest.raises(ValueError, match="not a lifted invariant"):
            freeness_implies_qh(scaling, [Symbol("u[x]")], 1)


class TestNormalizationProlongation:
    """Prolonged normalization rows against flat differentiation along the section."""

    @pytest.mark.parametrize("order", [1, 2])
    def test_top_order_is_chain_rule(self, scaling: DeterminingSystem, order: int) -> None:
        """The next lifted invariant's top columns are d/dy of the lower ones."""
        space, groupoid = scaling.jet_space(order + 2), scaling.groupoid
        sampled = (jet for k in range(1, order + 3) for jet in space.jets(k))
        jets = {jet: Rational(i + 2, 3) for i, jet in enumerate(sampled)}
        low = prolongation_coefficients(
            space, groupoid, 0, MultiIndex((order,)), lambda b, k: jets[(b, k)]
        )
        high = prolongation_coefficients(
            space, groupoid, 0, MultiIndex((order + 1,)), lambda b, k: jets[(b, k)]
        )
        u_x = jets[(0, MultiIndex((1,)))]
        expected: Dict[Column, Expr] = {}
        for (b, column), value in low.items():
            if column.order != order:
                continue
            for step, factor in ((column.bump(0), Integer(1)), (column.bump(1), u_x)):
                if groupoid.allows(b, step):
                    expected[(b, step)] = expected.get((b, step), Integer(0)) + value * factor
        top = {c: v for c, v in high.items() if c[1].order == order + 1 and v != 0}
        assert top == {c: v for c, v in expected.items() if v != 0}


class TestDetAnalyzeTask:
    """The det-analyze task on shipped cases."""

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_stabilizer_family(self, k: int) -> None:
        """Order k + 1, dimension k + 3, free and persistent."""
        report = run(get_stab(k))
        assert report["order"] == k + 1
        assert report["quasi_horizontal"] is True
        assert set(report["groupoid_dims"].values()) == {k + 3}
        assert report["freeness_implies_qh"] is True
        assert report["persistence"] is True

    def test_translation(self) -> None:
        """Normalizing x alone frees the translations."""
        report = run(get_translation_x())
        assert report["freeness_implies_qh"] is True
        assert report["freeness_order"] == 1

    def test_persistence_direct(self) -> None:
        """The stabilizer with k = 1 stays free one order up."""
        system = build_problem(get_stab(1)).system
        assert persistence_check(system, [Symbol("L.u[x,x,x]")], 3)
