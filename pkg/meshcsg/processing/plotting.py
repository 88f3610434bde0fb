import numpy as np
import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection, PolyCollection
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.geometry.cdt2d import CDT


##################################################
# Colors

COLOR_LIST = np.array([
    [0.122, 0.467, 0.706, 1.0],
    [1.000, 0.498, 0.055, 1.0],
    [0.173, 0.627, 0.173, 1.0],
    [0.839, 0.153, 0.157, 1.0],
    [0.580, 0.404, 0.741, 1.0],
    [0.549, 0.337, 0.294, 1.0],
    [0.890, 0.467, 0.761, 1.0],
    [0.498, 0.498, 0.498, 1.0],
])


def operand_colors(operands) -> np.ndarray:
    """ Color of the lowest operand of every bitvector. """
    lowest = np.array([(int(b) & -int(b)).bit_length() - 1 for b in operands], dtype=int)
    return COLOR_LIST[np.clip(lowest, 0, None) % len(COLOR_LIST)]


##################################################
# Plots

def plot_cdt(ax: plt.Axes, cdt: CDT, show_constraints: bool = True, show_ids: bool = False, **plot_setting):
    """
    Draw the triangles of a CDT in double precision, constrained edges in red.
    Return the plt.Axes object.
    """
    xy = np.array([p.approx() for p in cdt.points])
    triangles = np.array(cdt.triangles(), dtype=int).reshape(-1, 3)
    ax.triplot(xy[:, 0], xy[:, 1], triangles, color='k', lw=0.5)

    if show_constraints:
        segments = []
        for a, b, c in triangles:
            for i, j in ((a, b), (b, c), (c, a)):
                if i < j and cdt.edge_constraints(i, j): segments.append((xy[i], xy[j]))
        ax.add_collection(LineCollection(segments, colors='r', linewidths=1.5))

    if show_ids:
        for v, (x, y) in enumerate(xy):
            ax.annotate(str(v), (x, y), fontsize=6)
    ax.set(aspect='equal', **plot_setting)
    return ax


def plot_mesh(ax: plt.Axes, mesh: TriMesh, axes: tuple[int, int] = (0, 1), facets=None, **plot_setting):
    """
    Draw the projection of a mesh on two coordinate axes, facets colored by
    operand. Facets seen from behind are drawn lighter. Return the plt.Axes object.
    """
    facets = np.arange(mesh.nb_facets) if facets is None else np.asarray(facets, dtype=int)
    if len(facets) == 0: return ax
    polygons = mesh.vertices[mesh.facets[facets]][:, :, list(axes)]
    colors = operand_colors(mesh.operands[facets])

    u, v = polygons[:, 1] - polygons[:, 0], polygons[:, 2] - polygons[:, 0]
    backward = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0] < 0
    colors[backward, 3] = 0.3

    ax.add_collection(PolyCollection(polygons, facecolors=colors, edgecolors='k', linewidths=0.3))
    ax.autoscale_view()
    ax.set(aspect='equal', xlabel='xyz'[axes[0]], ylabel='xyz'[axes[1]], **plot_setting)
    return ax
