import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fhplab import _backend
from fhplab import _kernels_py as pure
from fhplab.constructs import build_shattered_pairs, build_tp2_grid
from fhplab.setfam import SetFamily

try:
    from fhplab import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled extension not built"
)

KERNELS = [
    "count_intersecting_pairs",
    "count_intersecting_triples",
    "count_intersecting_k",
    "depth_counts",
]


def random_masks(rng, n, ground):
    return [rng.getrandbits(ground) for _ in range(n)]


def call(mod, name, masks, ground, k=3):
    fn = getattr(mod, name)
    if name == "count_intersecting_k":
        return fn(masks, ground, k)
    return fn(masks, ground)


class TestPairwiseAgreement:
    @needs_compiled
    @pytest.mark.parametrize("name", KERNELS)
    def test_seeded_masks(self, name):
        for seed in range(30):
            rng = random.Random(seed)
            n = rng.randint(0, 14)
            ground = rng.randint(1, 80)
            masks = random_masks(rng, n, ground)
            k = rng.randint(1, max(1, n))
            assert call(pure, name, masks, ground, k) == call(
                compiled, name, masks, ground, k
            )

    @needs_compiled
    @pytest.mark.parametrize("name", KERNELS)
    def test_construction_masks(self, name):
        for fam in (build_tp2_grid(2, 4), build_shattered_pairs(4)):
            masks = list(fam.masks)
            g = fam.ground_size
            assert call(pure, name, masks, g, 2) == call(
                compiled, name, masks, g, 2
            )

    @needs_compiled
    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.integers(min_value=0, max_value=2**64 - 1), max_size=10),
        st.integers(min_value=1, max_value=5),
    )
    def test_property_agreement(self, masks, k):
        ground = 64
        for name in KERNELS:
            assert call(pure, name, masks, ground, k) == call(
                compiled, name, masks, ground, k
            )


class TestKernelSemantics:
    def test_pairs_match_k2(self):
        rng = random.Random(3)
        masks = random_masks(rng, 10, 30)
        assert pure.count_intersecting_pairs(masks, 30) == (
            pure.count_intersecting_k(masks, 30, 2)
        )

    def test_triples_match_k3(self):
        rng = random.Random(4)
        masks = random_masks(rng, 9, 25)
        assert pure.count_intersecting_triples(masks, 25) == (
            pure.count_intersecting_k(masks, 25, 3)
        )

    def test_depth_counts_per_element(self):
        fam = SetFamily(3, [{0, 1}, {1, 2}, {0, 2}])
        assert list(pure.depth_counts(list(fam.masks), 3)) == [2, 2, 2]

    def test_depth_counts_sum_rule(self):
        # sum_e depth(e) = sum_i |S_i|
        rng = random.Random(9)
        masks = random_masks(rng, 8, 40)
        counts = pure.depth_counts(masks, 40)
        assert len(counts) == 40
        assert sum(counts) == sum(m.bit_count() for m in masks)


class TestSelection:
    def test_active_backend_reported(self):
        assert _backend.BACKEND in ("python", "cython")
        if compiled is not None:
            assert _backend.BACKEND == "cython"

    def test_env_forces_pure(self):
        code = (
            "import fhplab._backend as b; print(b.BACKEND)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={**os.environ, "FHPLAB_BACKEND": "python"},
        )
        assert out.stdout.strip() == "python"

    @needs_compiled
    def test_env_forces_compiled(self):
        code = (
            "import fhplab._backend as b; print(b.BACKEND)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={**os.environ, "FHPLAB_BACKEND": "cython"},
        )
        assert out.stdout.strip() == "cython"

    def test_setfam_uses_selected_backend(self):
        # cons counting must agree with the raw kernel on the same masks
        from fhplab.setfam import cons_k

        fam = build_tp2_grid(2, 3)
        rep = cons_k(fam, 2)
        assert rep.cons_count == _backend.count_intersecting_pairs(
            list(fam.masks), fam.ground_size
        )
