from .svg import PlotOptions, render_scatter, write_svg
