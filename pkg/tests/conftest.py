import pytest

UNIT_PREC = 300


@pytest.fixture(scope="session")
def space11():
    from modgalrep.modsym import ModSymSpace
    return ModSymSpace(11)


@pytest.fixture(scope="session")
def eig11(space11):
    from modgalrep.modsym import HeckeEigendata
    return HeckeEigendata(space11)


@pytest.fixture(scope="session")
def level11(eig11):
    from modgalrep.eisenstein import LevelData
    return LevelData(eig11, UNIT_PREC)


@pytest.fixture(scope="session")
def lattice11(eig11, level11):
    from modgalrep.periods import PeriodLattice
    return PeriodLattice(eig11, level11, UNIT_PREC)


@pytest.fixture(scope="session")
def ambient11(level11):
    from modgalrep.jacobian import Ambient
    return Ambient(level11, UNIT_PREC)


@pytest.fixture(scope="session")
def torsion11(ambient11, lattice11):
    from modgalrep.torsion import TorsionContext
    return TorsionContext(ambient11, lattice11)


@pytest.fixture(scope="session")
def space17():
    from modgalrep.modsym import ModSymSpace
    return ModSymSpace(17)


@pytest.fixture(scope="session")
def eig17(space17):
    from modgalrep.modsym import HeckeEigendata
    return HeckeEigendata(space17)


@pytest.fixture(scope="session")
def pipeline11(tmp_path_factory):
    """Full-precision ell=11 pipeline with artifacts, shared per session."""
    from modgalrep.artifacts import Pipeline, RunConfig
    cache = tmp_path_factory.mktemp("cache11")
    cfg = RunConfig(form="delta", ell=11, cache=str(cache))
    return Pipeline(cfg, log=lambda m: None)
