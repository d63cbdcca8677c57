"""
Rendering helpers: the reduction tree as a PNG and verdict rows as text records.
"""

import io
import os

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from resolution import NON_REDUCED, REGULAR

_CLASS_COLORS = {
    REGULAR: '#cccccc',
    NON_REDUCED: '#f4a261',
}
_REDUCED_COLOR = '#2a9d8f'
_TANGENT_SN_COLOR = '#e63946'

TREE_DPI = int(os.getenv('FOLIATION_PNG_DPI', '120'))


def _tree_png(fig, dpi):
    """PNG bytes of a finished tree figure; the figure is closed."""
    buf = io.BytesIO()
    try:
        fig.savefig(buf, format='png', dpi=dpi, bbox_inches='tight',
                    metadata={'Software': None})
    finally:
        plt.close(fig)
    buf.seek(0)
    return buf


def _layout(tree):
    """x position of each point: leaves spread left to right, parents centred."""
    positions = {}
    next_slot = [0]

    def place(point):
        if not point.children:
            positions[point.ident] = next_slot[0]
            next_slot[0] += 1
            return positions[point.ident]
        xs = [place(tree.point(c)) for c in point.children]
        positions[point.ident] = sum(xs) / len(xs)
        return positions[point.ident]

    place(tree.root)
    return positions


def _point_color(point):
    cls = point.classification
    if cls.is_tangent_saddle_node:
        return _TANGENT_SN_COLOR
    if cls.is_reduced:
        return _REDUCED_COLOR
    return _CLASS_COLORS.get(cls.kind, '#cccccc')


def render_tree(tree, title=None, dpi=TREE_DPI):
    """
    Draws the reduction tree: singular points as circles labelled with nu and
    their class, divisor components as squares next to the point they come from.
    Returns a PNG buffer; the canvas grows with the number of leaves and the depth.
    """
    positions = _layout(tree)
    width = max(4, 1.8 * (max(positions.values(), default=0) + 2))
    height = max(3, 1.6 * (tree.depth + 1))
    fig, ax = plt.subplots(figsize=(width, height), dpi=dpi)

    for point in tree.points:
        x, y = positions[point.ident], -point.depth
        for cid in point.children:
            child = tree.point(cid)
            ax.plot([x, positions[cid]], [y, -child.depth], color='#555555', lw=1, zorder=1)
        ax.scatter([x], [y], s=900, color=_point_color(point), edgecolors='black', zorder=2)
        ax.annotate(f'{point.name}\nnu={point.nu}', (x, y), ha='center', va='center',
                    fontsize=7, zorder=3)
        ax.annotate(point.classification.label(), (x, y - 0.38), ha='center', va='top',
                    fontsize=6)
        if point.created_component is not None:
            comp = tree.components[point.created_component]
            tag = 'dic' if comp.dicritical else 'inv'
            ax.scatter([x + 0.42], [y - 0.5], s=500, marker='s', color='white',
                       edgecolors='black', zorder=2)
            ax.annotate(f'{comp.name}\n{tag}', (x + 0.42, y - 0.5), ha='center', va='center',
                        fontsize=6, zorder=3)
            ax.annotate(f'nu={comp.curvette_multiplicity} val={comp.valence}',
                        (x + 0.42, y - 0.78), ha='center', va='top', fontsize=6)

    ax.set_axis_off()
    ax.set_xlim(min(positions.values()) - 1, max(positions.values()) + 1.2)
    ax.set_ylim(-tree.depth - 1.2, 0.8)
    ax.set_title(title or f'reduction of {tree.root.form}', fontsize=9)
    return _tree_png(fig, dpi)


def _text(value):
    if value is None:
        return ''
    if isinstance(value, float) and value != value:
        return ''
    return str(value)


VERDICT_COLUMNS = {
    'id': ('id', _text),
    'ref': ('ref', _text),
    'subject': ('subject', _text),
    'mode': ('mode', _text),
    'lhs': ('lhs', _text),
    'rhs': ('rhs', _text),
    'status': ('status', str.upper),
    'reason': ('reason', _text),
}


def format_verdicts(frame):
    """Fixed-width text table of a verdict DataFrame."""
    records = [{key: fmt(row[source]) for key, (source, fmt) in VERDICT_COLUMNS.items()}
               for row in frame.to_dict('records')]
    keys = list(VERDICT_COLUMNS)
    widths = {k: max([len(k)] + [len(r[k]) for r in records]) for k in keys}
    lines = ['  '.join(k.ljust(widths[k]) for k in keys).rstrip()]
    lines += ['  '.join(r[k].ljust(widths[k]) for k in keys).rstrip() for r in records]
    return '\n'.join(lines)
