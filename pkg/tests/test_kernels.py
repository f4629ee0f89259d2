import os
import subprocess
import sys

import numpy as np
import pytest

from ordertop import _kernels
from ordertop.poset import from_covers, random_poset


def _brute_force_cuts(p) -> list[int]:
    out = []
    for m in range(1 << p.n):
        if p.lower_mask(p.upper_mask(m)) == m:
            out.append(m)
    return out


class TestCutEnumeration:
    @pytest.mark.parametrize("seed", range(12))
    def test_python_path_matches_brute_force(self, seed):
        p = random_poset(1 + seed % 8, density=0.35, seed=seed)
        got = _kernels.enumerate_cut_masks_py(p._up, p._down, p.n, 1 << 20)
        assert got == _brute_force_cuts(p)
        assert got == sorted(got)  # ascending mask order

    @pytest.mark.skipif(not _kernels.USING_NUMBA, reason="fallback build")
    @pytest.mark.parametrize("seed", range(12))
    def test_jit_path_matches_python_path(self, seed):
        p = random_poset(2 + seed, density=0.3, seed=seed * 7)
        py = _kernels.enumerate_cut_masks_py(p._up, p._down, p.n, 1 << 20)
        jit = _kernels.enumerate_cut_masks(p._up, p._down, p.n, 1 << 20)
        assert py == jit

    def test_limit_overflow_raises(self):
        # crown: a_i <= b_j iff i != j; every subset of the a-row is the
        # lower half of a cut, so there are at least 2^9 cuts.
        m = 9
        labels = [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]
        covers = [(f"a{i}", f"b{j}") for i in range(m) for j in range(m) if i != j]
        p = from_covers(labels, covers)
        with pytest.raises(RuntimeError, match="exceeded limit"):
            _kernels.enumerate_cut_masks(p._up, p._down, p.n, limit=100)
        with pytest.raises(RuntimeError, match="exceeded limit"):
            _kernels.enumerate_cut_masks_py(p._up, p._down, p.n, limit=100)


class TestDirectedScan:
    @pytest.mark.skipif(not _kernels.USING_NUMBA, reason="fallback build")
    @pytest.mark.parametrize("seed", range(10))
    def test_jit_path_matches_python_path(self, seed):
        p = random_poset(3 + seed % 7, density=0.4, seed=seed * 13)
        for top in (0, p.n - 1):
            py = _kernels.directed_subset_scan_py(p._up, p._down, p.n, top)
            jit = _kernels.directed_subset_scan(p._up, p._down, p.n, top)
            assert py == jit

    def test_counts_on_a_chain(self):
        p = random_poset(4, density=1.0, seed=0)  # a 4-chain
        n_dir, n_no_top, best, best_sup, violation = (
            _kernels.directed_subset_scan_py(p._up, p._down, p.n, p.top)
        )
        # every nonempty subset of a chain is directed
        assert n_dir == 15
        assert n_no_top == 7
        assert violation == 0
        assert bin(best).count("1") == 3
        assert best_sup >= 0 and not best >> p.top & 1


class TestEnvironmentFallback:
    def test_no_numba_flag_selects_python_path(self):
        code = (
            "from ordertop import _kernels\n"
            "from ordertop.poset import random_poset\n"
            "assert not _kernels.USING_NUMBA\n"
            "p = random_poset(6, density=0.3, seed=9)\n"
            "print(_kernels.enumerate_cut_masks(p._up, p._down, p.n, 1 << 20))\n"
        )
        env = dict(os.environ, ORDERTOP_NO_NUMBA="1")
        res = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert res.returncode == 0, res.stderr
        p = random_poset(6, density=0.3, seed=9)
        expected = _kernels.enumerate_cut_masks_py(p._up, p._down, p.n, 1 << 20)
        assert res.stdout.strip() == str(expected)

    def test_thread_cap_is_accepted(self):
        code = "import ordertop._kernels as k; print(k.USING_NUMBA)"
        env = dict(os.environ, ORDERTOP_THREADS="1")
        res = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert res.returncode == 0, res.stderr
