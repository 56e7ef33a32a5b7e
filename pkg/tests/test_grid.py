import numpy as np
import pytest

from proclimits.exceptions import GridMismatch, ValidationError
from proclimits.grid import AlphaGrid, GridFunction, LevelGrid, TauGrid


def test_grid_points():
    g = TauGrid(0.6, 0.7, 201)
    p = g.points
    assert p[0] == 0.6 and p[-1] == 0.7 and p.size == 201
    assert np.max(np.abs(np.diff(p) - g.spacing)) < 1e-14
    assert g.label == "tau" and AlphaGrid(0.2, 0.3, 3).label == "alpha"
    assert TauGrid(0.5, 0.5, 1).points.tolist() == [0.5]


@pytest.mark.parametrize("args", [(0.0, 0.5, 3), (0.5, 0.4, 3), (0.2, 1.0, 3), (0.2, 0.4, 0)])
def test_grid_validation(args):
    with pytest.raises(ValidationError):
        LevelGrid(*args)


def test_parse():
    assert LevelGrid.parse("0.25:0.75:101") == LevelGrid(0.25, 0.75, 101)
    for bad in ("0.2:0.3", "a:b:c", "0.3:0.2:5"):
        with pytest.raises(ValidationError):
            LevelGrid.parse(bad)


def test_grid_function():
    f = GridFunction(np.linspace(0, 1, 5), 2.0)
    assert f.values.tolist() == [2.0] * 5
    g = f.with_values(np.arange(5.0))
    assert (f + g).values.tolist() == [2, 3, 4, 5, 6]
    assert (-g).values[1] == -1.0
    assert (2 * g).values[-1] == 8.0
    with pytest.raises(ValidationError):
        GridFunction([0, 1, 3], [1, 2, 3])
    with pytest.raises(ValidationError):
        GridFunction([0, 1], [1, np.inf])
    with pytest.raises(GridMismatch):
        f + GridFunction(np.linspace(0, 2, 5), 1.0)
    with pytest.raises(ValueError):
        f.values[0] = 3.0
