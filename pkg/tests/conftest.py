import itertools
import random

import pytest

from affine_cocycles.groups import parse_group_spec
from affine_cocycles.metric import LengthFunction


def write_table(path, names, product, generators=None):
    lines = [f"order {len(names)}", " ".join(names)]
    for a in names:
        lines.append(" ".join(product(a, b) for b in names))
    if generators:
        lines.append("generators: " + " ".join(generators))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def s3_file(tmp_path):
    perms = list(itertools.permutations(range(3)))
    names = ["".join(map(str, p)) for p in perms]

    def product(a, b):
        pa, pb = tuple(map(int, a)), tuple(map(int, b))
        return "".join(str(pa[pb[i]]) for i in range(3))

    return write_table(tmp_path / "s3.txt", names, product, ["102", "120"])


@pytest.fixture
def cyclic5_file(tmp_path):
    names = [f"r{i}" for i in range(5)]
    return write_table(tmp_path / "c5.txt", names,
                       lambda a, b: f"r{(int(a[1:]) + int(b[1:])) % 5}")


@pytest.fixture
def trivial_file(tmp_path):
    path = tmp_path / "trivial.txt"
    path.write_text("order 1\ne\ne\n")
    return path


@pytest.fixture(params=["free:2", "free:3", "zd:1", "zd:2", "zd:3", "heis3"])
def infinite_model(request):
    return parse_group_spec(request.param)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def f2():
    return parse_group_spec("free:2")


@pytest.fixture
def z1():
    return parse_group_spec("zd:1")


@pytest.fixture
def lf2(f2):
    return LengthFunction(f2)


@pytest.fixture
def lz1(z1):
    return LengthFunction(z1)
