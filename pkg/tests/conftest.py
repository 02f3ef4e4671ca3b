from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fbcp.circle import CirclePoint

settings.register_profile("repo", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

SYMBOLS = ("t", "u")


@st.composite
def points(draw, symbols=SYMBOLS, max_den=12):
    den = draw(st.integers(1, max_den))
    num = draw(st.integers(0, den - 1))
    sym = {s: draw(st.integers(-3, 3)) for s in symbols}
    return CirclePoint(Fraction(num, den), tuple(sym.items()))


def torsion_points(max_den=12):
    return points(symbols=(), max_den=max_den)


def _wm_parts():
    from fbcp.ext import INF
    from fbcp.rep import ATOMLESS, LEFT_REGULAR, SINGULAR_CLOSED, make_wm
    return st.builds(
        make_wm,
        st.sampled_from([LEFT_REGULAR, SINGULAR_CLOSED, ATOMLESS]),
        st.sampled_from([1, 2, INF]),
        st.sampled_from([(), ("mixing",), ("mildly_mixing",)]),
    )


@st.composite
def reps(draw, max_atoms=3):
    from fbcp.ext import INF
    from fbcp.rep import make_rep
    atoms = draw(st.lists(st.tuples(points(), st.sampled_from([1, 2, 3, INF])), max_size=max_atoms))
    wms = draw(st.lists(_wm_parts(), max_size=2))
    return make_rep(atoms, wms, symbols=SYMBOLS)


def random_rep(rng):
    """Plain-random counterpart of ``reps`` for large fuzz loops."""
    from fbcp.ext import INF
    from fbcp.rep import ATOMLESS, LEFT_REGULAR, SINGULAR_CLOSED, make_rep, make_wm
    atoms = []
    for _ in range(rng.randint(0, 3)):
        den = rng.choice([1, 2, 3, 4, 5, 6, 7, 12])
        sym = tuple((s, rng.randint(-2, 2)) for s in SYMBOLS) if rng.random() < 0.4 else ()
        p = CirclePoint(Fraction(rng.randrange(den), den), sym)
        atoms.append((p, rng.choice([1, 1, 2, 3, INF])))
    wms = []
    for _ in range(rng.choice([0, 0, 1, 1, 2])):
        wms.append(make_wm(rng.choice([LEFT_REGULAR, SINGULAR_CLOSED, ATOMLESS]),
                           rng.choice([1, 1, 2, INF]),
                           rng.choice([(), ("mixing",), ("mildly_mixing",)])))
    return make_rep(atoms, wms, symbols=SYMBOLS)
