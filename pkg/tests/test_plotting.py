import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
from meshcsg.geometry.cdt2d import CDT
from meshcsg.processing.plotting import COLOR_LIST, operand_colors, plot_cdt, plot_mesh


def test_operand_colors_use_the_lowest_bit():
    colors = operand_colors([1, 2, 6, 8, 1 << 9])
    assert np.array_equal(colors[0], COLOR_LIST[0])
    assert np.array_equal(colors[1], COLOR_LIST[1])
    assert np.array_equal(colors[2], COLOR_LIST[1])
    assert np.array_equal(colors[3], COLOR_LIST[3])
    assert np.array_equal(colors[4], COLOR_LIST[1])


def test_plot_cdt_draws_constraints():
    cdt = CDT().init((-10.0, -10.0), (10.0, -10.0), (0.0, 10.0))
    a, b = cdt.insert_vertex((0.0, 0.0)), cdt.insert_vertex((1.0, 1.0))
    cdt.insert_constraint(a, b, 1)
    fig, ax = plt.subplots()
    assert plot_cdt(ax, cdt, show_ids=True, title='cdt') is ax
    assert len(ax.collections) == 1
    assert ax.get_title() == 'cdt'
    plt.close(fig)


def test_plot_mesh(offset_cubes):
    from meshcsg.boolean.trimesh import TriMesh
    mesh = TriMesh.from_operands(offset_cubes)
    fig, ax = plt.subplots()
    plot_mesh(ax, mesh, axes=(0, 2))
    assert ax.get_xlabel() == 'x' and ax.get_ylabel() == 'z'
    assert len(ax.collections) == 1
    plot_mesh(ax, mesh, facets=[])
    assert len(ax.collections) == 1
    plt.close(fig)
