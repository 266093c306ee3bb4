import numpy as np
from hypothesis import strategies as st

from mdecomp import SymTensor2, material_from

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
components = st.lists(finite, min_size=6, max_size=6)
kinds = st.sampled_from(["stress", "strain"])
materials = st.builds(material_from,
                      st.floats(min_value=1.0, max_value=1e6),
                      st.floats(min_value=-0.4, max_value=0.4999))


@st.composite
def sym_tensors(draw, kind=None):
    return SymTensor2(draw(components), kind or draw(kinds))


def random_material(rng, nu_range=(-0.4, 0.4999)):
    return material_from(10 ** rng.uniform(0, 6), rng.uniform(*nu_range))


def random_tensor(rng, kind="stress", scale=100.0):
    return SymTensor2(rng.normal(scale=scale, size=6), kind)


def rel(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.abs(b).max()
    return float(np.abs(a - b).max() / scale) if scale else float(np.abs(a - b).max())
