from meshcsg.processing.plotting import plot_cdt, plot_mesh, operand_colors
